//! Degree-bounded polynomial jets over graded series: modular and
//! quasimodular polynomials, the mutually inverse weight maps between them,
//! coefficient projections, products, and the numeric slash actions used to
//! spot-check invariance on the upper half-plane.
//!
//! Conventions carried by the exact side:
//!
//! * a modular polynomial built as an image of the quasimodular-to-modular
//!   map has its X^r coefficient grade-homogeneous of grade r;
//! * a quasimodular polynomial built as an image of the inverse map (or as a
//!   product of such images) has its X^r coefficient grade-homogeneous of
//!   grade m - r, where m is the degree bound.
//!
//! Neither convention is enforced by the constructors — sums of forms of
//! different weights legitimately violate them — but the verification
//! harnesses check them at their boundaries.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::factorial::{factorial, recip_factorial};
use crate::forms::{eisenstein, FormDescriptor};
use crate::qseries::{EvalPoint, PiGradedSeries};
use crate::rational::{format_rational, rat, rat_int, Rational};
use crate::report::{IndexCheck, VerificationReport};

/// Real 2x2 matrix with determinant 1, acting on the upper half-plane by
/// fractional linear transformations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupElement {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

const DET_TOLERANCE: f64 = 1e-14;

impl GroupElement {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if (det - 1.0).abs() > DET_TOLERANCE {
            return Err(Error::NotUnimodular(det));
        }
        Ok(GroupElement { a, b, c, d })
    }

    /// Integer matrix; the determinant condition is checked exactly.
    pub fn from_integers(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        if a * d - b * c != 1 {
            return Err(Error::NotUnimodular((a * d - b * c) as f64));
        }
        Ok(GroupElement {
            a: a as f64,
            b: b as f64,
            c: c as f64,
            d: d as f64,
        })
    }

    pub fn identity() -> Self {
        GroupElement { a: 1.0, b: 0.0, c: 0.0, d: 1.0 }
    }

    /// S: z -> -1/z.
    pub fn inversion() -> Self {
        GroupElement { a: 0.0, b: -1.0, c: 1.0, d: 0.0 }
    }

    /// T: z -> z + 1.
    pub fn translation() -> Self {
        GroupElement { a: 1.0, b: 1.0, c: 0.0, d: 1.0 }
    }

    /// Matrix product self * other.
    pub fn compose(&self, other: &Self) -> Self {
        GroupElement {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    /// Fractional linear action (az + b) / (cz + d).
    pub fn apply(&self, z: Complex64) -> Complex64 {
        (self.a * z + self.b) / (self.c * z + self.d)
    }

    /// The automorphy factor cz + d.
    pub fn j_factor(&self, z: Complex64) -> Complex64 {
        self.c * z + self.d
    }

    /// c / (cz + d), the quantity quasimodular transforms are polynomial in.
    pub fn k_factor(&self, z: Complex64) -> Complex64 {
        self.c / (self.c * z + self.d)
    }
}

fn validate_coefficients(coeffs: Vec<PiGradedSeries>) -> Result<Vec<PiGradedSeries>> {
    let first = coeffs.first().ok_or(Error::EmptyPolynomial)?;
    let width = first.width().clone();
    for c in &coeffs {
        if *c.width() != width {
            return Err(Error::WidthMismatch(
                format_rational(&width),
                format_rational(c.width()),
            ));
        }
    }
    let precision = coeffs.iter().map(|c| c.precision()).min().unwrap();
    Ok(coeffs.into_iter().map(|c| c.truncated(precision)).collect())
}

macro_rules! polynomial_common {
    ($name:ident) => {
        impl $name {
            /// Coefficients indexed by the power of X; all share one width,
            /// and the stored precision is the minimum of the inputs'.
            pub fn new(weight: i64, coeffs: Vec<PiGradedSeries>) -> Result<Self> {
                Ok($name {
                    weight,
                    coeffs: validate_coefficients(coeffs)?,
                })
            }

            pub fn weight(&self) -> i64 {
                self.weight
            }

            pub fn degree_bound(&self) -> usize {
                self.coeffs.len() - 1
            }

            pub fn width(&self) -> &Rational {
                self.coeffs[0].width()
            }

            pub fn precision(&self) -> usize {
                self.coeffs[0].precision()
            }

            pub fn coefficient(&self, r: usize) -> Result<&PiGradedSeries> {
                self.coeffs.get(r).ok_or(Error::IndexRange {
                    index: r as i64,
                    max: self.degree_bound() as i64,
                })
            }

            pub fn coefficients(&self) -> &[PiGradedSeries] {
                &self.coeffs
            }

            pub fn is_zero(&self) -> bool {
                self.coeffs.iter().all(|c| c.is_zero())
            }

            /// Sum of equal-weight polynomials; degrees may differ.
            pub fn add(&self, other: &Self) -> Result<Self> {
                if self.weight != other.weight {
                    return Err(Error::WeightMismatch {
                        expected: self.weight,
                        got: other.weight,
                    });
                }
                let degree = self.degree_bound().max(other.degree_bound());
                let precision = self.precision().min(other.precision());
                let width = self.width().clone();
                let mut coeffs = Vec::with_capacity(degree + 1);
                for r in 0..=degree {
                    let zero = PiGradedSeries::zero(width.clone(), precision)?;
                    let a = self.coeffs.get(r).unwrap_or(&zero);
                    let b = other.coeffs.get(r).unwrap_or(&zero);
                    coeffs.push(a.add(b)?);
                }
                Self::new(self.weight, coeffs)
            }

            pub fn scale(&self, factor: &Rational) -> Self {
                $name {
                    weight: self.weight,
                    coeffs: self.coeffs.iter().map(|c| c.scale(factor)).collect(),
                }
            }

            /// Pointwise numeric value of each X-coefficient.
            pub fn eval_at(&self, point: &EvalPoint) -> Result<Vec<Complex64>> {
                self.coeffs.iter().map(|c| c.eval_at(point)).collect()
            }

            /// Largest coefficient of the difference, for exact comparisons.
            pub fn max_abs_difference(&self, other: &Self) -> Result<Rational> {
                if self.weight != other.weight {
                    return Err(Error::WeightMismatch {
                        expected: self.weight,
                        got: other.weight,
                    });
                }
                let degree = self.degree_bound().max(other.degree_bound());
                let precision = self.precision().min(other.precision());
                let width = self.width().clone();
                let mut max = Rational::zero();
                for r in 0..=degree {
                    let zero = PiGradedSeries::zero(width.clone(), precision)?;
                    let a = self.coeffs.get(r).unwrap_or(&zero);
                    let b = other.coeffs.get(r).unwrap_or(&zero);
                    let diff = a.sub(b)?.max_abs_coefficient();
                    if diff > max {
                        max = diff;
                    }
                }
                Ok(max)
            }
        }
    };
}

/// Element of the X-polynomial space on the modular side of the weight
/// correspondence: coefficient r transforms with weight `weight + 2r`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModularPolynomial {
    weight: i64,
    coeffs: Vec<PiGradedSeries>,
}

/// Element of the X-polynomial space on the quasimodular side; invariant
/// under the twisted slash action of its weight.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasimodularPolynomial {
    weight: i64,
    coeffs: Vec<PiGradedSeries>,
}

polynomial_common!(ModularPolynomial);
polynomial_common!(QuasimodularPolynomial);

impl ModularPolynomial {
    /// Views a depth-0 form as the constant polynomial in degree bound m.
    pub fn embed_modular(fd: &FormDescriptor, degree_bound: usize) -> Result<Self> {
        if fd.depth() != 0 {
            return Err(Error::NonzeroDepth {
                name: fd.name().to_string(),
                depth: fd.depth(),
            });
        }
        let width = fd.width().clone();
        let precision = fd.precision();
        let mut coeffs = vec![fd.series().clone()];
        for _ in 0..degree_bound {
            coeffs.push(PiGradedSeries::zero(width.clone(), precision)?);
        }
        Self::new(fd.weight() as i64, coeffs)
    }

    /// The weight-raising isomorphism onto quasimodular polynomials:
    ///
    /// ```text
    /// out_r = (1/r!) sum_{l=0}^{m-r} f_{m-r-l}^(l) / (l! (lambda-2r-l-1)!)
    /// ```
    ///
    /// Requires lambda >= 2m + 2 (so every factorial below is of a
    /// nonnegative integer) and weight = lambda - 2m.
    pub fn lambda_map(&self, lambda: i64) -> Result<QuasimodularPolynomial> {
        let m = self.degree_bound();
        let min = 2 * m as i64 + 2;
        if lambda < min {
            return Err(Error::WeightRange { lambda, min, degree: m });
        }
        let expected = lambda - 2 * m as i64;
        if self.weight != expected {
            return Err(Error::WeightMismatch { expected, got: self.weight });
        }
        let width = self.width().clone();
        let precision = self.precision();
        let mut coeffs = Vec::with_capacity(m + 1);
        for r in 0..=m {
            let mut acc = PiGradedSeries::zero(width.clone(), precision)?;
            let r_factor = recip_factorial(r as i64);
            for l in 0..=(m - r) {
                let scalar = &r_factor
                    * recip_factorial(l as i64)
                    * recip_factorial(lambda - 2 * r as i64 - l as i64 - 1);
                if scalar.is_zero() {
                    continue;
                }
                let term = self.coeffs[m - r - l].nth_z_derivative(l as u32).scale(&scalar);
                acc = acc.add(&term)?;
            }
            coeffs.push(acc);
        }
        QuasimodularPolynomial::new(lambda, coeffs)
    }

    /// Numeric weighted action: coefficient r is slashed with weight
    /// lambda + 2r at the transformed point.
    pub fn slash_x(
        &self,
        lambda: i64,
        gamma: &GroupElement,
        point: &EvalPoint,
    ) -> Result<Vec<Complex64>> {
        let j = gamma.j_factor(point.z());
        if j.norm() == 0.0 {
            return Err(Error::SingularTransform);
        }
        let moved = point.moved_to(gamma.apply(point.z()))?;
        let mut out = Vec::with_capacity(self.coeffs.len());
        for (r, coeff) in self.coeffs.iter().enumerate() {
            let weight = lambda + 2 * r as i64;
            out.push(j.powi(-(weight as i32)) * coeff.eval_at(&moved)?);
        }
        Ok(out)
    }

    /// Numeric residual of the two equivariance identities tying the weight
    /// maps to the slash actions, maximized over X-coefficients. For an
    /// actually modular polynomial and gamma in its group this is zero up to
    /// truncation and round-off.
    pub fn check_equivariance(
        &self,
        lambda: i64,
        gamma: &GroupElement,
        point: &EvalPoint,
    ) -> Result<f64> {
        let m = self.degree_bound();
        let quasi = self.lambda_map(lambda)?;
        let twisted = quasi.dslash(lambda, gamma, point)?;
        let plain = quasi.eval_at(point)?;
        let slashed = self.slash_x(lambda - 2 * m as i64, gamma, point)?;
        let direct = self.eval_at(point)?;
        let mut residual = 0.0f64;
        for (a, b) in twisted.iter().zip(&plain) {
            residual = residual.max((a - b).norm());
        }
        for (a, b) in slashed.iter().zip(&direct) {
            residual = residual.max((a - b).norm());
        }
        Ok(residual)
    }

    /// True when coefficient r is zero or grade-homogeneous of grade r.
    pub fn follows_grading(&self) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(r, c)| c.is_zero() || matches!(c.homogeneous_grade(), Ok(g) if g == r))
    }
}

impl QuasimodularPolynomial {
    /// The constant polynomial 1 of weight 0 and degree bound 0.
    pub fn one(width: Rational, precision: usize) -> Result<Self> {
        Self::new(0, vec![PiGradedSeries::one(width, precision)?])
    }

    /// The weight-lowering isomorphism back to modular polynomials, inverse
    /// to [`ModularPolynomial::lambda_map`]:
    ///
    /// ```text
    /// out_r = (lambda+2r-2m-1) sum_{l=0}^{r} (-1)^l/l! (m-r+l)!
    ///         (2r+lambda-2m-l-2)! phi_{m-r+l}^(l)
    /// ```
    pub fn xi_map(&self) -> Result<ModularPolynomial> {
        let m = self.degree_bound();
        let lambda = self.weight;
        let min = 2 * m as i64 + 2;
        if lambda < min {
            return Err(Error::WeightRange { lambda, min, degree: m });
        }
        let width = self.width().clone();
        let precision = self.precision();
        let mut coeffs = Vec::with_capacity(m + 1);
        for r in 0..=m {
            let mut acc = PiGradedSeries::zero(width.clone(), precision)?;
            for l in 0..=r {
                let numerator = factorial((m - r + l) as u64)
                    * factorial((2 * r as i64 + lambda - 2 * m as i64 - l as i64 - 2) as u64);
                let mut scalar = Rational::from_integer(numerator) * recip_factorial(l as i64);
                if l % 2 == 1 {
                    scalar = -scalar;
                }
                let term = self.coeffs[m - r + l].nth_z_derivative(l as u32).scale(&scalar);
                acc = acc.add(&term)?;
            }
            coeffs.push(acc.scale(&rat_int(lambda + 2 * r as i64 - 2 * m as i64 - 1)));
        }
        ModularPolynomial::new(lambda - 2 * m as i64, coeffs)
    }

    /// Extracts the X^l coefficient. l = 0 recovers the quasimodular form
    /// the polynomial corresponds to.
    pub fn project(&self, l: usize) -> Result<PiGradedSeries> {
        self.coefficient(l).cloned()
    }

    /// Polynomial product: weights add, degree bounds add.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let m = self.degree_bound();
        let n = other.degree_bound();
        let width = self.width().clone();
        let precision = self.precision().min(other.precision());
        let mut coeffs = Vec::with_capacity(m + n + 1);
        for _ in 0..=(m + n) {
            coeffs.push(PiGradedSeries::zero(width.clone(), precision)?);
        }
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b)?)?;
            }
        }
        Self::new(self.weight + other.weight, coeffs)
    }

    /// Numeric twisted action: evaluates the polynomial at the transformed
    /// point with X replaced by J^2 (X - K) and expands back into powers of
    /// X via the binomial recurrence, all times J^{-lambda}.
    pub fn dslash(
        &self,
        lambda: i64,
        gamma: &GroupElement,
        point: &EvalPoint,
    ) -> Result<Vec<Complex64>> {
        let j = gamma.j_factor(point.z());
        if j.norm() == 0.0 {
            return Err(Error::SingularTransform);
        }
        let moved = point.moved_to(gamma.apply(point.z()))?;
        let m = self.degree_bound();
        let binom = pascal_rows(m);
        let jj = j * j;
        let neg_k = -gamma.k_factor(point.z());
        let mut out = vec![Complex64::new(0.0, 0.0); m + 1];
        for (r, coeff) in self.coeffs.iter().enumerate() {
            let value = coeff.eval_at(&moved)? * jj.powi(r as i32);
            for t in 0..=r {
                out[t] += value * binom[r][t] * neg_k.powi((r - t) as i32);
            }
        }
        let prefactor = j.powi(-(lambda as i32));
        Ok(out.into_iter().map(|v| v * prefactor).collect())
    }

    /// True when coefficient r is zero or grade-homogeneous of grade m - r.
    pub fn follows_grading(&self) -> bool {
        let m = self.degree_bound();
        self.coeffs
            .iter()
            .enumerate()
            .all(|(r, c)| c.is_zero() || matches!(c.homogeneous_grade(), Ok(g) if g == m - r))
    }
}

/// Numeric weight-lambda slash of a bare series: J^{-lambda} f(gamma z).
pub fn slash_weight(
    f: &PiGradedSeries,
    lambda: i64,
    gamma: &GroupElement,
    point: &EvalPoint,
) -> Result<Complex64> {
    let j = gamma.j_factor(point.z());
    if j.norm() == 0.0 {
        return Err(Error::SingularTransform);
    }
    let moved = point.moved_to(gamma.apply(point.z()))?;
    Ok(j.powi(-(lambda as i32)) * f.eval_at(&moved)?)
}

fn pascal_rows(m: usize) -> Vec<Vec<f64>> {
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
    rows.push(vec![1.0]);
    for r in 1..=m {
        let mut row = vec![1.0; r + 1];
        for t in 1..r {
            row[t] = rows[r - 1][t - 1] + rows[r - 1][t];
        }
        rows.push(row);
    }
    rows
}

/// Defaults for the seeded inversion round-trip check.
#[derive(Debug, Clone)]
pub struct RoundtripConfig {
    pub count: usize,
    pub seed: u64,
    pub max_degree: usize,
    pub max_weight: i64,
    pub max_precision: usize,
}

pub const DEFAULT_SEED: u64 = 12345;

impl Default for RoundtripConfig {
    fn default() -> Self {
        RoundtripConfig {
            count: 200,
            seed: DEFAULT_SEED,
            max_degree: 6,
            max_weight: 30,
            max_precision: 12,
        }
    }
}

/// Random polynomial with small rational coefficients spread over up to
/// three grades, plus a compatible weight for the maps.
pub fn random_modular_polynomial<R: Rng>(
    rng: &mut R,
    max_degree: usize,
    max_weight: i64,
    max_precision: usize,
) -> (ModularPolynomial, i64) {
    let m = rng.random_range(0..=max_degree);
    let min_lambda = 2 * m as i64 + 2;
    let lambda = rng.random_range(min_lambda..=max_weight.max(min_lambda));
    let precision = rng.random_range(0..=max_precision);
    let width = match rng.random_range(0..4) {
        0 => rat_int(1),
        1 => rat(1, 2),
        2 => rat_int(2),
        _ => rat(3, 2),
    };
    let mut coeffs = Vec::with_capacity(m + 1);
    for _ in 0..=m {
        let mut slices = BTreeMap::new();
        for grade in 0..3usize {
            if rng.random_range(0..3) == 0 {
                continue;
            }
            let values: Vec<Rational> = (0..=precision)
                .map(|_| rat(rng.random_range(-9..=9), rng.random_range(1..=9)))
                .collect();
            slices.insert(grade, values);
        }
        coeffs.push(
            PiGradedSeries::new(width.clone(), precision, slices)
                .expect("sampled slices have the right length"),
        );
    }
    let poly = ModularPolynomial::new(lambda - 2 * m as i64, coeffs)
        .expect("sampled coefficients share the width");
    (poly, lambda)
}

/// Applies the two weight maps in both orders to seeded random polynomials
/// and records the largest coefficient deviation (zero means an exact round
/// trip).
pub fn roundtrip_harness(config: &RoundtripConfig) -> VerificationReport {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut rows = Vec::with_capacity(config.count);
    for index in 1..=config.count {
        let (poly, lambda) = random_modular_polynomial(
            &mut rng,
            config.max_degree,
            config.max_weight,
            config.max_precision,
        );
        let quasi = poly.lambda_map(lambda).expect("sampled weight is in range");
        let back = quasi.xi_map().expect("weight in range");
        let to_modular = back
            .max_abs_difference(&poly)
            .expect("round trip preserves shape");
        let again = back.lambda_map(lambda).expect("weight in range");
        let to_quasi = again
            .max_abs_difference(&quasi)
            .expect("round trip preserves shape");
        rows.push(IndexCheck::exact(
            index as u64,
            to_modular.max(to_quasi),
            Rational::zero(),
        ));
    }
    VerificationReport::new(
        "roundtrip",
        vec![
            ("count".to_string(), config.count.to_string()),
            ("seed".to_string(), config.seed.to_string()),
            ("max_degree".to_string(), config.max_degree.to_string()),
            ("max_weight".to_string(), config.max_weight.to_string()),
            ("max_precision".to_string(), config.max_precision.to_string()),
        ],
        rows,
        vec![],
    )
}

/// Defaults for the numeric invariance check.
#[derive(Debug, Clone)]
pub struct EquivarianceConfig {
    pub precision: usize,
    pub tolerance: f64,
}

impl Default for EquivarianceConfig {
    fn default() -> Self {
        EquivarianceConfig {
            precision: 40,
            tolerance: 1e-8,
        }
    }
}

/// Numeric invariance of the product pipeline and per-map equivariance of
/// embedded generators, over z in {i, 2i} and gamma in {S, T, TS}.
pub fn equivariance_harness(config: &EquivarianceConfig) -> Result<VerificationReport> {
    let e4 = eisenstein(4, config.precision)?;
    let e6 = eisenstein(6, config.precision)?;
    let bound = Rational::from_float(config.tolerance).unwrap_or_else(Rational::zero);
    let gammas = [
        GroupElement::inversion(),
        GroupElement::translation(),
        GroupElement::translation().compose(&GroupElement::inversion()),
    ];
    let heights = [1.0, 2.0];
    let mut rows: Vec<IndexCheck> = Vec::new();
    let push = |rows: &mut Vec<IndexCheck>, residual: f64| {
        let value = Rational::from_float(residual).unwrap_or_else(Rational::zero);
        rows.push(IndexCheck::bounded(rows.len() as u64 + 1, value, bound.clone()));
    };

    for (m, n) in [(1usize, 1usize), (2, 0)] {
        let left = ModularPolynomial::embed_modular(&e4, m)?
            .lambda_map(4 + 2 * m as i64)?;
        let right = ModularPolynomial::embed_modular(&e6, n)?
            .lambda_map(6 + 2 * n as i64)?;
        let product = left.mul(&right)?;
        let lambda = product.weight();
        let degree = product.degree_bound();
        let modular_image = product.xi_map()?;
        for height in heights {
            let point = EvalPoint::new(Complex64::new(0.0, height), config.precision + 1)?;
            for gamma in &gammas {
                let twisted = product.dslash(lambda, gamma, &point)?;
                let plain = product.eval_at(&point)?;
                let mut residual = 0.0f64;
                for (a, b) in twisted.iter().zip(&plain) {
                    residual = residual.max((a - b).norm());
                }
                let slashed =
                    modular_image.slash_x(lambda - 2 * degree as i64, gamma, &point)?;
                let direct = modular_image.eval_at(&point)?;
                for (a, b) in slashed.iter().zip(&direct) {
                    residual = residual.max((a - b).norm());
                }
                push(&mut rows, residual);
            }
        }
    }

    for (fd, degree, lambda) in [(&e4, 2usize, 8i64), (&e6, 1, 8)] {
        let poly = ModularPolynomial::embed_modular(fd, degree)?;
        for height in heights {
            let point = EvalPoint::new(Complex64::new(0.0, height), config.precision + 1)?;
            for gamma in &gammas {
                let residual = poly.check_equivariance(lambda, gamma, &point)?;
                push(&mut rows, residual);
            }
        }
    }

    Ok(VerificationReport::new(
        "equivariance",
        vec![
            ("precision".to_string(), config.precision.to_string()),
            ("tol".to_string(), format!("{:e}", config.tolerance)),
        ],
        rows,
        vec![],
    ))
}
