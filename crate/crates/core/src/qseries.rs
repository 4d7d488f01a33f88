//! Truncated Fourier expansions over the rationals, graded by formal powers
//! of 2·pi·i/h.
//!
//! A value represents
//!
//! ```text
//! f(z) = sum_e (2*pi*i/h)^e * sum_{k=0}^{N} c_{e,k} q^k + O(q^{N+1}),
//! q = exp(2*pi*i*z/h),
//! ```
//!
//! where every c_{e,k} is rational and e is the *grade*. Keeping the
//! transcendental prefactor as a formal grade makes z-differentiation the
//! exact operation (e, c_k) -> (e + 1, k * c_k), so every identity downstream
//! reduces to a comparison of rationals. Numeric evaluation on the upper
//! half-plane reinstates the prefactors in double precision.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};

/// Truncated q-expansion with exact rational coefficients per grade.
///
/// Invariants: every slice has length `precision + 1`, no slice is all
/// zeros (the zero series has an empty slice map), and the width is a
/// positive rational. All binary operations require equal widths and
/// truncate to the smaller precision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiGradedSeries {
    width: Rational,
    precision: usize,
    slices: BTreeMap<usize, Vec<Rational>>,
}

impl PiGradedSeries {
    pub fn new(
        width: Rational,
        precision: usize,
        slices: BTreeMap<usize, Vec<Rational>>,
    ) -> Result<Self> {
        if !width.is_positive() {
            return Err(Error::NonPositiveWidth(format_rational(&width)));
        }
        for (&grade, coeffs) in &slices {
            if coeffs.len() != precision + 1 {
                return Err(Error::SliceLength {
                    grade,
                    expected: precision + 1,
                    got: coeffs.len(),
                });
            }
        }
        let mut series = PiGradedSeries {
            width,
            precision,
            slices,
        };
        series.prune();
        Ok(series)
    }

    pub fn zero(width: Rational, precision: usize) -> Result<Self> {
        Self::new(width, precision, BTreeMap::new())
    }

    pub fn constant(width: Rational, precision: usize, value: Rational) -> Result<Self> {
        let mut coeffs = vec![Rational::zero(); precision + 1];
        coeffs[0] = value;
        Self::from_graded_coeffs(width, precision, 0, coeffs)
    }

    pub fn one(width: Rational, precision: usize) -> Result<Self> {
        Self::constant(width, precision, Rational::from_integer(1.into()))
    }

    /// Series with a single grade slice.
    pub fn from_graded_coeffs(
        width: Rational,
        precision: usize,
        grade: usize,
        coeffs: Vec<Rational>,
    ) -> Result<Self> {
        let mut slices = BTreeMap::new();
        slices.insert(grade, coeffs);
        Self::new(width, precision, slices)
    }

    fn prune(&mut self) {
        self.slices.retain(|_, coeffs| coeffs.iter().any(|c| !c.is_zero()));
    }

    pub fn width(&self) -> &Rational {
        &self.width
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn is_zero(&self) -> bool {
        self.slices.is_empty()
    }

    pub fn grades(&self) -> Vec<usize> {
        self.slices.keys().copied().collect()
    }

    pub fn slice(&self, grade: usize) -> Option<&[Rational]> {
        self.slices.get(&grade).map(|v| v.as_slice())
    }

    /// Coefficient of (2*pi*i/h)^grade * q^k; zero when absent.
    pub fn coefficient(&self, grade: usize, k: usize) -> Rational {
        self.slices
            .get(&grade)
            .and_then(|v| v.get(k))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    fn check_width(&self, other: &Self) -> Result<()> {
        if self.width != other.width {
            return Err(Error::WidthMismatch(
                format_rational(&self.width),
                format_rational(&other.width),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_width(other)?;
        let precision = self.precision.min(other.precision);
        let mut slices: BTreeMap<usize, Vec<Rational>> = BTreeMap::new();
        for source in [self, other] {
            for (&grade, coeffs) in &source.slices {
                let entry = slices
                    .entry(grade)
                    .or_insert_with(|| vec![Rational::zero(); precision + 1]);
                for (k, slot) in entry.iter_mut().enumerate() {
                    *slot += &coeffs[k];
                }
            }
        }
        let mut series = PiGradedSeries {
            width: self.width.clone(),
            precision,
            slices,
        };
        series.prune();
        Ok(series)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| -c)
    }

    /// Multiplies every coefficient by a fixed rational.
    pub fn scale(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return PiGradedSeries {
                width: self.width.clone(),
                precision: self.precision,
                slices: BTreeMap::new(),
            };
        }
        self.map_coeffs(|c| c * factor)
    }

    fn map_coeffs(&self, f: impl Fn(&Rational) -> Rational) -> Self {
        let slices = self
            .slices
            .iter()
            .map(|(&grade, coeffs)| (grade, coeffs.iter().map(&f).collect()))
            .collect();
        PiGradedSeries {
            width: self.width.clone(),
            precision: self.precision,
            slices,
        }
    }

    /// Cauchy product per grade pair; grades add, precision truncates to the
    /// smaller operand.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_width(other)?;
        let precision = self.precision.min(other.precision);
        let mut slices: BTreeMap<usize, Vec<Rational>> = BTreeMap::new();
        for (&ga, a) in &self.slices {
            for (&gb, b) in &other.slices {
                let entry = slices
                    .entry(ga + gb)
                    .or_insert_with(|| vec![Rational::zero(); precision + 1]);
                for i in 0..=precision {
                    if a[i].is_zero() {
                        continue;
                    }
                    for j in 0..=(precision - i) {
                        entry[i + j] += &a[i] * &b[j];
                    }
                }
            }
        }
        let mut series = PiGradedSeries {
            width: self.width.clone(),
            precision,
            slices,
        };
        series.prune();
        Ok(series)
    }

    /// d/dz = (2*pi*i/h) q d/dq: shifts every slice up one grade and scales
    /// the q^k coefficient by k.
    pub fn z_derivative(&self) -> Self {
        self.nth_z_derivative(1)
    }

    /// r-fold z-derivative; the q^k coefficient picks up k^r and the grade
    /// rises by r. r = 0 is the identity.
    pub fn nth_z_derivative(&self, r: u32) -> Self {
        if r == 0 {
            return self.clone();
        }
        let mut slices = BTreeMap::new();
        for (&grade, coeffs) in &self.slices {
            let shifted: Vec<Rational> = coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| {
                    if c.is_zero() || k == 0 {
                        Rational::zero()
                    } else {
                        let mut factor = Rational::from_integer(k.into());
                        for _ in 1..r {
                            factor *= Rational::from_integer(k.into());
                        }
                        c * factor
                    }
                })
                .collect();
            slices.insert(grade + r as usize, shifted);
        }
        let mut series = PiGradedSeries {
            width: self.width.clone(),
            precision: self.precision,
            slices,
        };
        series.prune();
        series
    }

    /// The unique grade of a nonzero series carried by a single slice.
    pub fn homogeneous_grade(&self) -> Result<usize> {
        let grades = self.grades();
        match grades.as_slice() {
            [] => Err(Error::ZeroSeries),
            [only] => Ok(*only),
            _ => Err(Error::Inhomogeneous(grades)),
        }
    }

    /// Forgets coefficients beyond the requested precision.
    pub fn truncated(&self, precision: usize) -> Self {
        let precision = precision.min(self.precision);
        let slices = self
            .slices
            .iter()
            .map(|(&grade, coeffs)| (grade, coeffs[..=precision].to_vec()))
            .collect();
        let mut series = PiGradedSeries {
            width: self.width.clone(),
            precision,
            slices,
        };
        series.prune();
        series
    }

    /// Largest |c_{e,k}|; zero for the zero series.
    pub fn max_abs_coefficient(&self) -> Rational {
        let mut max = Rational::zero();
        for coeffs in self.slices.values() {
            for c in coeffs {
                let a = c.abs();
                if a > max {
                    max = a;
                }
            }
        }
        max
    }

    /// Sums the truncation at a point of the upper half-plane in double
    /// precision, ascending in k within each grade and then ascending in
    /// grade.
    pub fn eval_at(&self, point: &EvalPoint) -> Result<Complex64> {
        if point.terms > self.precision + 1 {
            return Err(Error::TruncationTooLong {
                terms: point.terms,
                precision: self.precision,
            });
        }
        let h = self.width.to_f64().unwrap_or(f64::NAN);
        let z = point.z;
        let q = (Complex64::new(0.0, 2.0 * std::f64::consts::PI / h) * z).exp();
        let pi_tilde = Complex64::new(0.0, 2.0 * std::f64::consts::PI / h);
        let mut total = Complex64::new(0.0, 0.0);
        for (&grade, coeffs) in &self.slices {
            let mut slice_sum = Complex64::new(0.0, 0.0);
            let mut q_pow = Complex64::new(1.0, 0.0);
            for c in coeffs.iter().take(point.terms) {
                if !c.is_zero() {
                    slice_sum += q_pow * c.to_f64().unwrap_or(f64::NAN);
                }
                q_pow *= q;
            }
            total += pi_tilde.powi(grade as i32) * slice_sum;
        }
        Ok(total)
    }
}

/// A point of the upper half-plane plus the number of q-powers to sum there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalPoint {
    z: Complex64,
    terms: usize,
}

impl EvalPoint {
    pub fn new(z: Complex64, terms: usize) -> Result<Self> {
        if z.im <= 0.0 {
            return Err(Error::NotInUpperHalfPlane(z.im));
        }
        if terms == 0 {
            return Err(Error::ZeroTruncation);
        }
        Ok(EvalPoint { z, terms })
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    pub fn terms(&self) -> usize {
        self.terms
    }

    /// Same truncation at a different point.
    pub fn moved_to(&self, z: Complex64) -> Result<Self> {
        Self::new(z, self.terms)
    }
}
