//! Level-one generator forms (E2, E4, E6, Delta) and JSON ingestion of
//! user-supplied expansions.
//!
//! File format (UTF-8 JSON):
//!
//! ```json
//! {
//!   "name": "E4",
//!   "weight": 4,
//!   "depth": 0,
//!   "width_h": "1",
//!   "precision": 2,
//!   "slices": { "0": ["1", "240", "2160"] }
//! }
//! ```
//!
//! Coefficients are reduced fractions (`p/q`, integers without the `/1`);
//! non-reduced input is rejected so equality of files stays syntactic.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qseries::PiGradedSeries;
use crate::rational::{format_rational, parse_rational, rat, Rational};

/// A named expansion with its weight and depth metadata.
///
/// Depth 0 means modular: the series must then be grade-homogeneous of
/// grade 0. E2 has depth 1.
#[derive(Debug, Clone, PartialEq)]
pub struct FormDescriptor {
    name: String,
    weight: u32,
    depth: u32,
    series: PiGradedSeries,
}

impl FormDescriptor {
    pub fn new(
        name: impl Into<String>,
        weight: u32,
        depth: u32,
        series: PiGradedSeries,
    ) -> Result<Self> {
        if weight == 0 {
            return Err(Error::InvalidWeight);
        }
        if depth == 0 && !series.is_zero() && series.grades() != vec![0] {
            return Err(Error::DepthZeroGrades(series.grades()));
        }
        Ok(FormDescriptor {
            name: name.into(),
            weight,
            depth,
            series,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn series(&self) -> &PiGradedSeries {
        &self.series
    }

    pub fn width(&self) -> &Rational {
        self.series.width()
    }

    pub fn precision(&self) -> usize {
        self.series.precision()
    }

    /// r-th z-derivative: weight rises by 2r, depth by r.
    pub fn derivative(&self, r: u32) -> FormDescriptor {
        if r == 0 {
            return self.clone();
        }
        FormDescriptor {
            name: format!("{}^({r})", self.name),
            weight: self.weight + 2 * r,
            depth: self.depth + r,
            series: self.series.nth_z_derivative(r),
        }
    }
}

/// sigma_k(n) = sum of d^k over the divisors d of n, by trial division.
pub fn divisor_sigma(k: u32, n: u64) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::DivisorSumAtZero);
    }
    let mut sum = BigInt::zero();
    for d in 1..=n {
        if n % d == 0 {
            sum += BigInt::from(d).pow(k);
        }
    }
    Ok(sum)
}

/// Eisenstein series normalized to constant term 1, width h = 1:
/// E2 = 1 - 24 sum sigma_1(n) q^n (weight 2, depth 1),
/// E4 = 1 + 240 sum sigma_3(n) q^n,
/// E6 = 1 - 504 sum sigma_5(n) q^n.
pub fn eisenstein(weight: u32, precision: usize) -> Result<FormDescriptor> {
    let (name, multiplier, sigma_power, depth) = match weight {
        2 => ("E2", -24i64, 1u32, 1u32),
        4 => ("E4", 240, 3, 0),
        6 => ("E6", -504, 5, 0),
        other => return Err(Error::UnsupportedEisenstein(other)),
    };
    let mut coeffs = Vec::with_capacity(precision + 1);
    coeffs.push(Rational::one());
    for n in 1..=precision {
        let sigma = divisor_sigma(sigma_power, n as u64)?;
        coeffs.push(Rational::from_integer(sigma * multiplier));
    }
    let series = PiGradedSeries::from_graded_coeffs(Rational::one(), precision, 0, coeffs)?;
    FormDescriptor::new(name, weight, depth, series)
}

/// Delta = (E4^3 - E6^2) / 1728, the weight-12 cusp form.
pub fn delta(precision: usize) -> FormDescriptor {
    let e4 = eisenstein(4, precision).expect("weight 4 is supported").series;
    let e6 = eisenstein(6, precision).expect("weight 6 is supported").series;
    let e4_cubed = e4.mul(&e4).and_then(|s| s.mul(&e4)).expect("equal widths");
    let e6_squared = e6.mul(&e6).expect("equal widths");
    let series = e4_cubed
        .sub(&e6_squared)
        .expect("equal widths")
        .scale(&rat(1, 1728));
    FormDescriptor::new("Delta", 12, 0, series).expect("Delta is a depth-0 form")
}

#[derive(Serialize, Deserialize)]
struct FormFile {
    name: String,
    weight: i64,
    depth: i64,
    width_h: String,
    precision: i64,
    slices: BTreeMap<String, Vec<String>>,
}

fn malformed(path: &Path, field: &str, reason: impl Into<String>) -> Error {
    Error::MalformedForm {
        path: path.display().to_string(),
        field: field.to_string(),
        reason: reason.into(),
    }
}

/// Reads and validates a form file; see the module docs for the format.
pub fn load_form(path: impl AsRef<Path>) -> Result<FormDescriptor> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    let file: FormFile = serde_json::from_str(&text)
        .map_err(|e| malformed(path, "(document)", e.to_string()))?;

    if file.weight < 1 {
        return Err(malformed(path, "weight", "must be a positive integer"));
    }
    if file.depth < 0 {
        return Err(malformed(path, "depth", "must be nonnegative"));
    }
    if file.precision < 0 {
        return Err(malformed(path, "precision", "must be nonnegative"));
    }
    let precision = file.precision as usize;
    let width = parse_rational(&file.width_h).map_err(|r| malformed(path, "width_h", r))?;

    let mut slices = BTreeMap::new();
    for (grade_text, entries) in &file.slices {
        let grade: usize = grade_text
            .parse()
            .map_err(|_| malformed(path, "slices", format!("invalid grade key `{grade_text}`")))?;
        let field = format!("slices.{grade_text}");
        if entries.len() != precision + 1 {
            return Err(malformed(
                path,
                &field,
                format!("{} coefficients, expected {}", entries.len(), precision + 1),
            ));
        }
        let mut coeffs = Vec::with_capacity(entries.len());
        for (k, entry) in entries.iter().enumerate() {
            let value = parse_rational(entry)
                .map_err(|r| malformed(path, &format!("{field}[{k}]"), r))?;
            coeffs.push(value);
        }
        slices.insert(grade, coeffs);
    }

    let series = PiGradedSeries::new(width, precision, slices)
        .map_err(|e| malformed(path, "slices", e.to_string()))?;
    FormDescriptor::new(file.name, file.weight as u32, file.depth as u32, series)
        .map_err(|e| match e {
            Error::DepthZeroGrades(grades) => malformed(
                path,
                "depth",
                format!("depth 0 but slices carry grades {grades:?}"),
            ),
            Error::InvalidWeight => malformed(path, "weight", "must be a positive integer"),
            other => other,
        })
}

/// Writes a form file that [`load_form`] reads back bit-exactly.
pub fn save_form(fd: &FormDescriptor, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let series = fd.series();
    let slices = series
        .grades()
        .into_iter()
        .map(|grade| {
            let coeffs = series
                .slice(grade)
                .expect("grade listed by the series")
                .iter()
                .map(format_rational)
                .collect();
            (grade.to_string(), coeffs)
        })
        .collect();
    let file = FormFile {
        name: fd.name().to_string(),
        weight: fd.weight() as i64,
        depth: fd.depth() as i64,
        width_h: format_rational(series.width()),
        precision: series.precision() as i64,
        slices,
    };
    let mut text = serde_json::to_string_pretty(&file).expect("form files serialize");
    text.push('\n');
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}
