//! Formal Dirichlet coefficient sequences and the identity verification
//! harnesses.
//!
//! A Dirichlet object here is just the coefficient vector (a_1, ..., a_N)
//! of `L(f, s) = (2*pi*i/h)^e sum_{n>=1} a_n n^{-s}` together with its
//! grade e; convergence is out of scope, equality of the first N
//! coefficients is the testable surrogate for equality of the series.
//! Shifting the argument s -> s - l multiplies a_n by n^l.
//!
//! The harnesses check, all in exact arithmetic:
//!
//! * `verify_prop31` — the coefficients of the degree-0 projection of a
//!   quasimodular polynomial against the weighted sum of the coefficients
//!   of its modular image's projections;
//! * `verify_theorem` — the coefficients of phi^(m) psi^(n) against the
//!   bracket decomposition with either coefficient route;
//! * `verify_section5` — the derived coefficients against the closed-form
//!   triples for (m, n) = (1,1), (2,0), (0,2) on an integer weight grid;
//! * `verify_section6` — the binomial-sum identities the decomposition
//!   coefficients satisfy.

use num_traits::{One, Zero};

use crate::brackets::{a_coefficient, rankin_cohen, BracketSpec, CoefficientRoute};
use crate::error::{Error, Result};
use crate::factorial::{binomial, recip_factorial};
use crate::forms::FormDescriptor;
use crate::jets::QuasimodularPolynomial;
use crate::qseries::PiGradedSeries;
use crate::rational::{rat, rat_int, Rational};
use crate::report::{CoefficientRow, IndexCheck};

pub use crate::report::VerificationReport;

/// Normalized coefficient sequence (a_1, ..., a_N) of a graded series,
/// with the grade of the (2*pi*i/h)-power it carries.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletCoefficients {
    grade: usize,
    coeffs: Vec<Rational>,
    width: Rational,
}

impl DirichletCoefficients {
    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn width(&self) -> &Rational {
        &self.width
    }

    /// a_n for 1 <= n <= N.
    pub fn coefficient(&self, n: usize) -> &Rational {
        &self.coeffs[n - 1]
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Realizes the argument shift s -> s - l: a_n becomes n^l a_n. The
    /// grade is unchanged; any formal power attached to the scalar factor
    /// multiplying the series is accounted for by the caller.
    pub fn shift(&self, l: u32) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let n = rat_int((i + 1) as i64);
                let mut power = Rational::one();
                for _ in 0..l {
                    power *= &n;
                }
                a * power
            })
            .collect();
        DirichletCoefficients {
            grade: self.grade,
            coeffs,
            width: self.width.clone(),
        }
    }
}

/// Drops the constant term of a grade-homogeneous (or zero) series and
/// keeps a_1..a_N. The zero series maps to grade 0 with all-zero
/// coefficients.
pub fn to_dirichlet(series: &PiGradedSeries) -> Result<DirichletCoefficients> {
    let grade = if series.is_zero() {
        0
    } else {
        series.homogeneous_grade()?
    };
    let coeffs = (1..=series.precision())
        .map(|k| series.coefficient(grade, k))
        .collect();
    Ok(DirichletCoefficients {
        grade,
        coeffs,
        width: series.width().clone(),
    })
}

/// Grade-stripped coefficients a_1..a_n_max of a series expected to be
/// homogeneous of `grade` (or zero).
fn stripped_coefficients(
    series: &PiGradedSeries,
    grade: usize,
    n_max: usize,
    context: &str,
) -> Result<Vec<Rational>> {
    if series.precision() < n_max {
        return Err(Error::PrecisionTooLow {
            needed: n_max,
            got: series.precision(),
        });
    }
    if !series.is_zero() {
        match series.homogeneous_grade() {
            Ok(found) if found == grade => {}
            other => {
                return Err(Error::grading(
                    context,
                    format!("expected grade {grade}, found {other:?}"),
                ))
            }
        }
    }
    Ok((1..=n_max).map(|k| series.coefficient(grade, k)).collect())
}

/// Coefficientwise reconstruction of a quasimodular form from the modular
/// projections of its polynomial: for every n,
///
/// ```text
/// a_n = sum_{l=0}^{m} n^l c_{m-l, n} / (l! (lambda - l - 1)!)
/// ```
///
/// where a_n comes from the X^0 coefficient of `poly` (grade m) and
/// c_{r, n} from the X^r coefficient of its modular image (grade r).
pub fn verify_prop31(
    poly: &QuasimodularPolynomial,
    lambda: i64,
    n_max: usize,
) -> Result<VerificationReport> {
    if poly.weight() != lambda {
        return Err(Error::WeightMismatch {
            expected: lambda,
            got: poly.weight(),
        });
    }
    let m = poly.degree_bound();
    let min = 2 * m as i64 + 2;
    if lambda < min {
        return Err(Error::WeightRange {
            lambda,
            min,
            degree: m,
        });
    }
    if !poly.follows_grading() {
        return Err(Error::grading(
            "verify_prop31",
            "input polynomial violates the grading convention".to_string(),
        ));
    }

    let lhs = stripped_coefficients(&poly.project(0)?, m, n_max, "verify_prop31 lhs")?;
    let modular_image = poly.xi_map()?;
    let mut projections = Vec::with_capacity(m + 1);
    for r in 0..=m {
        projections.push(stripped_coefficients(
            modular_image.coefficient(r)?,
            r,
            n_max,
            "verify_prop31 projection",
        )?);
    }

    let mut rows = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let mut rhs = Rational::zero();
        let mut n_power = Rational::one();
        for l in 0..=m {
            let scalar = recip_factorial(l as i64) * recip_factorial(lambda - l as i64 - 1);
            rhs += &projections[m - l][n - 1] * scalar * &n_power;
            n_power *= rat_int(n as i64);
        }
        rows.push(IndexCheck::exact(n as u64, lhs[n - 1].clone(), rhs));
    }

    Ok(VerificationReport::new(
        "prop31",
        vec![
            ("lambda".to_string(), lambda.to_string()),
            ("degree".to_string(), m.to_string()),
            ("N".to_string(), n_max.to_string()),
        ],
        rows,
        vec![],
    ))
}

/// Coefficientwise form of the bracket decomposition: for every n <= N,
///
/// ```text
/// [q^n] phi^(m) psi^(n')  =  sum_{l=0}^{m+n'} a(l) n^l [q^n] bracket_{m+n'-l}
/// ```
///
/// after both sides are normalized to grade m+n'. The report also carries
/// the printed/derived coefficient audit table; `route` selects which
/// values enter the comparison.
pub fn verify_theorem(
    phi: &FormDescriptor,
    psi: &FormDescriptor,
    m: u32,
    n: u32,
    n_max: usize,
    route: CoefficientRoute,
) -> Result<VerificationReport> {
    if phi.width() != psi.width() {
        return Err(Error::WidthMismatch(
            crate::rational::format_rational(phi.width()),
            crate::rational::format_rational(psi.width()),
        ));
    }
    for fd in [phi, psi] {
        if fd.precision() < n_max {
            return Err(Error::PrecisionTooLow {
                needed: n_max,
                got: fd.precision(),
            });
        }
    }
    let total = m + n;
    let mu = phi.weight();
    let nu = psi.weight();

    let product = phi
        .series()
        .nth_z_derivative(m)
        .mul(&psi.series().nth_z_derivative(n))?;
    let lhs = stripped_coefficients(&product, total as usize, n_max, "verify_theorem lhs")?;

    let mut rhs = vec![Rational::zero(); n_max];
    let mut table = Vec::with_capacity(total as usize + 1);
    for l in 0..=total {
        let w = total - l;
        let bracket = rankin_cohen(phi, psi, &BracketSpec::new(mu, nu, w)?)?;
        let shifted = to_dirichlet(&bracket.truncated(n_max))?.shift(l);
        // Grade bookkeeping: the coefficient carries grade l, the bracket
        // grade w, so every term sits in grade l + w = m + n like the left
        // side.
        if !bracket.is_zero() && shifted.grade() + l as usize != total as usize {
            return Err(Error::grading(
                "verify_theorem",
                format!(
                    "term l={l}: grade {} + {l} != {total}",
                    shifted.grade()
                ),
            ));
        }
        let derived = a_coefficient(m, n, mu, nu, l, CoefficientRoute::Derived)?;
        let printed = a_coefficient(m, n, mu, nu, l, CoefficientRoute::Printed)?;
        let chosen = match route {
            CoefficientRoute::Derived => derived.value.clone(),
            CoefficientRoute::Printed => printed.value.clone(),
        };
        table.push(CoefficientRow {
            l,
            printed: printed.value,
            derived: derived.value,
        });
        for (slot, coefficient) in rhs.iter_mut().zip(shifted.coefficients()) {
            *slot += &chosen * coefficient;
        }
    }

    let rows = lhs
        .into_iter()
        .zip(rhs)
        .enumerate()
        .map(|(i, (left, right))| IndexCheck::exact(i as u64 + 1, left, right))
        .collect();

    Ok(VerificationReport::new(
        "theorem",
        vec![
            ("f".to_string(), phi.name().to_string()),
            ("g".to_string(), psi.name().to_string()),
            ("m".to_string(), m.to_string()),
            ("n".to_string(), n.to_string()),
            ("mu".to_string(), mu.to_string()),
            ("nu".to_string(), nu.to_string()),
            ("N".to_string(), n_max.to_string()),
            ("route".to_string(), route.name().to_string()),
        ],
        rows,
        table,
    ))
}

/// The three closed-form coefficient triples, as exact rational functions
/// of (mu, nu) evaluated on the grid 1 <= mu <= mu_max, 1 <= nu <= nu_max.
/// The (0,2) triple is produced from the (2,0) one by the (-1)^w symmetry
/// swap.
pub fn verify_section5(mu_max: u32, nu_max: u32) -> Result<VerificationReport> {
    fn triple_11(mu: i64, nu: i64) -> [Rational; 3] {
        let s = mu + nu;
        [
            rat(-2, (s + 2) * (s + 1)),
            rat(mu - nu, (s + 2) * s),
            rat(mu * nu, (s + 1) * s),
        ]
    }
    fn triple_20(mu: i64, nu: i64) -> [Rational; 3] {
        let s = mu + nu;
        [
            rat(2, (s + 2) * (s + 1)),
            rat(-2 * (mu + 1), (s + 2) * s),
            rat(mu * (mu + 1), (s + 1) * s),
        ]
    }
    // Swap the arguments and flip the sign of each bracket index w = 2 - l.
    fn triple_02(mu: i64, nu: i64) -> [Rational; 3] {
        let swapped = triple_20(nu, mu);
        let mut out = swapped;
        out[1] = -out[1].clone();
        out
    }

    let mut rows = Vec::new();
    for mu in 1..=mu_max {
        for nu in 1..=nu_max {
            let cases: [(u32, u32, [Rational; 3]); 3] = [
                (1, 1, triple_11(mu as i64, nu as i64)),
                (2, 0, triple_20(mu as i64, nu as i64)),
                (0, 2, triple_02(mu as i64, nu as i64)),
            ];
            for (m, n, expected) in cases {
                for l in 0..=2u32 {
                    let derived =
                        a_coefficient(m, n, mu, nu, l, CoefficientRoute::Derived)?.value;
                    rows.push(IndexCheck::exact(
                        rows.len() as u64 + 1,
                        derived,
                        expected[l as usize].clone(),
                    ));
                }
            }
        }
    }

    Ok(VerificationReport::new(
        "section5",
        vec![
            ("mu_max".to_string(), mu_max.to_string()),
            ("nu_max".to_string(), nu_max.to_string()),
        ],
        rows,
        vec![],
    ))
}

/// The binomial-sum identities: for every w <= w_max and weights on the
/// grid,
///
/// ```text
/// sum_{r=0}^{w} (-1)^r C(mu+w-1, w-r) C(nu+w-1, r) a^{r,w-r}(l)
/// ```
///
/// equals 1 for l = 0 and 0 for 1 <= l <= w, with the derived route.
pub fn verify_section6(w_max: u32, mu_max: u32, nu_max: u32) -> Result<VerificationReport> {
    let mut rows = Vec::new();
    for w in 0..=w_max {
        for mu in 1..=mu_max {
            for nu in 1..=nu_max {
                for l in 0..=w {
                    let mut sum = Rational::zero();
                    for r in 0..=w {
                        let mut weight = Rational::from_integer(
                            binomial((mu + w - 1) as u64, (w - r) as u64)
                                * binomial((nu + w - 1) as u64, r as u64),
                        );
                        if r % 2 == 1 {
                            weight = -weight;
                        }
                        let a =
                            a_coefficient(r, w - r, mu, nu, l, CoefficientRoute::Derived)?.value;
                        sum += weight * a;
                    }
                    let expected = if l == 0 {
                        Rational::one()
                    } else {
                        Rational::zero()
                    };
                    rows.push(IndexCheck::exact(rows.len() as u64 + 1, sum, expected));
                }
            }
        }
    }

    Ok(VerificationReport::new(
        "section6",
        vec![
            ("w_max".to_string(), w_max.to_string()),
            ("mu_max".to_string(), mu_max.to_string()),
            ("nu_max".to_string(), nu_max.to_string()),
        ],
        rows,
        vec![],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{delta, eisenstein};
    use crate::jets::ModularPolynomial;
    use crate::rational::rat_int as ri;

    fn lambda_image(weight: u32, m: usize, precision: usize) -> QuasimodularPolynomial {
        let fd = if weight == 12 {
            delta(precision)
        } else {
            eisenstein(weight, precision).unwrap()
        };
        ModularPolynomial::embed_modular(&fd, m)
            .unwrap()
            .lambda_map((weight as usize + 2 * m) as i64)
            .unwrap()
    }

    #[test]
    fn to_dirichlet_examples() {
        let d = delta(3);
        let coeffs = to_dirichlet(d.series()).unwrap();
        assert_eq!(coeffs.grade(), 0);
        assert_eq!(coeffs.coefficients(), &[ri(1), ri(-24), ri(252)]);

        let one = PiGradedSeries::one(Rational::one(), 4).unwrap();
        let constant = to_dirichlet(&one).unwrap();
        assert_eq!(constant.coefficients(), &[ri(0), ri(0), ri(0), ri(0)]);

        let e4 = eisenstein(4, 2).unwrap();
        let derivative = to_dirichlet(&e4.series().z_derivative()).unwrap();
        assert_eq!(derivative.grade(), 1);
        assert_eq!(derivative.coefficients(), &[ri(240), ri(4320)]);

        let mixed = e4.series().add(&e4.series().z_derivative()).unwrap();
        assert!(matches!(to_dirichlet(&mixed), Err(Error::Inhomogeneous(_))));
    }

    #[test]
    fn shift_examples() {
        let d = to_dirichlet(delta(3).series()).unwrap();
        assert_eq!(d.shift(0), d);
        assert_eq!(d.shift(1).coefficients(), &[ri(1), ri(-48), ri(756)]);

        let ones = DirichletCoefficients {
            grade: 0,
            coeffs: vec![ri(1), ri(1), ri(1)],
            width: Rational::one(),
        };
        assert_eq!(ones.shift(2).coefficients(), &[ri(1), ri(4), ri(9)]);
    }

    #[test]
    fn shift_is_multiplicative() {
        let d = to_dirichlet(delta(6).series()).unwrap();
        for a in 0..3u32 {
            for b in 0..3u32 {
                assert_eq!(d.shift(a).shift(b), d.shift(a + b));
            }
        }
    }

    #[test]
    fn prop31_holds_for_lambda_images() {
        let poly = lambda_image(4, 2, 50);
        let report = verify_prop31(&poly, 8, 50).unwrap();
        assert!(report.passed(), "failures: {}", report.failures());
        assert_eq!(report.per_index().len(), 50);
    }

    #[test]
    fn prop31_holds_for_products() {
        let product = lambda_image(4, 1, 50)
            .mul(&lambda_image(6, 1, 50))
            .unwrap();
        let report = verify_prop31(&product, 14, 50).unwrap();
        assert!(report.passed(), "failures: {}", report.failures());
    }

    #[test]
    fn prop31_is_vacuous_on_the_zero_polynomial() {
        let zero = QuasimodularPolynomial::new(
            8,
            vec![PiGradedSeries::zero(Rational::one(), 10).unwrap(); 3],
        )
        .unwrap();
        let report = verify_prop31(&zero, 8, 10).unwrap();
        assert!(report.passed());
    }

    #[test]
    fn prop31_rejects_mismatched_weight() {
        let poly = lambda_image(4, 2, 10);
        assert!(matches!(
            verify_prop31(&poly, 10, 10),
            Err(Error::WeightMismatch { .. })
        ));
        assert!(matches!(
            verify_prop31(&poly, 8, 40),
            Err(Error::PrecisionTooLow { .. })
        ));
    }

    #[test]
    fn theorem_holds_for_first_cases() {
        let e4 = eisenstein(4, 50).unwrap();
        let e6 = eisenstein(6, 50).unwrap();

        let report = verify_theorem(&e4, &e6, 1, 1, 50, CoefficientRoute::Derived).unwrap();
        assert!(report.passed(), "failures: {}", report.failures());
        assert_eq!(report.per_index().len(), 50);
        assert_eq!(report.coefficient_table().len(), 3);

        let report = verify_theorem(&e4, &e4, 2, 0, 50, CoefficientRoute::Derived).unwrap();
        assert!(report.passed());
        // mu = nu = 4: closed forms 2/90, -10/80... as exact fractions.
        let derived: Vec<Rational> = report
            .coefficient_table()
            .iter()
            .map(|row| row.derived.clone())
            .collect();
        assert_eq!(derived[0], rat(2, 90));
        assert_eq!(derived[1], rat(-10, 80));
        assert_eq!(derived[2], rat(20, 72));
    }

    #[test]
    fn theorem_zero_derivative_case_is_trivial() {
        let e4 = eisenstein(4, 50).unwrap();
        let e6 = eisenstein(6, 50).unwrap();
        let report = verify_theorem(&e4, &e6, 0, 0, 50, CoefficientRoute::Derived).unwrap();
        assert!(report.passed());
        assert_eq!(report.coefficient_table()[0].derived, ri(1));
        // The printed transcription does not give 1 even here (it evaluates
        // to (mu+nu-2)!), which the audit table records.
        assert_eq!(
            report.coefficient_table()[0].printed,
            Rational::from_integer(crate::factorial::factorial(8))
        );
        assert!(!report.coefficient_table()[0].agree());
    }

    #[test]
    fn theorem_printed_route_fails_where_derived_passes() {
        let e4 = eisenstein(4, 20).unwrap();
        let e6 = eisenstein(6, 20).unwrap();
        let printed = verify_theorem(&e4, &e6, 1, 1, 20, CoefficientRoute::Printed).unwrap();
        assert!(!printed.passed());
        let derived = verify_theorem(&e4, &e6, 1, 1, 20, CoefficientRoute::Derived).unwrap();
        assert!(derived.passed());
        // Same audit table either way.
        for (a, b) in printed
            .coefficient_table()
            .iter()
            .zip(derived.coefficient_table())
        {
            assert_eq!(a.printed, b.printed);
            assert_eq!(a.derived, b.derived);
            assert!(!a.agree());
        }
    }

    #[test]
    fn theorem_rejects_insufficient_precision() {
        let e4 = eisenstein(4, 10).unwrap();
        let e6 = eisenstein(6, 10).unwrap();
        assert!(matches!(
            verify_theorem(&e4, &e6, 1, 1, 50, CoefficientRoute::Derived),
            Err(Error::PrecisionTooLow { needed: 50, got: 10 })
        ));
    }

    #[test]
    fn section5_grid_passes_and_contains_the_quoted_values() {
        let report = verify_section5(8, 8).unwrap();
        assert!(report.passed(), "failures: {}", report.failures());
        // 8 * 8 grid, 3 cases, 3 coefficients each.
        assert_eq!(report.per_index().len(), 8 * 8 * 9);

        // mu = 4, nu = 6, case (1,1), l = 2: 24/110 = 12/55.
        let value = a_coefficient(1, 1, 4, 6, 2, CoefficientRoute::Derived)
            .unwrap()
            .value;
        assert_eq!(value, rat(12, 55));

        // mu = nu kills the l = 1 coefficient of the (1,1) case.
        let value = a_coefficient(1, 1, 7, 7, 1, CoefficientRoute::Derived)
            .unwrap()
            .value;
        assert!(value.is_zero());
    }

    #[test]
    fn section5_symmetry_swap_is_consistent() {
        // The (0,2) triple at (6,4) comes from the (2,0) triple at (4,6)
        // with the sign pattern of the w = 2 - l bracket swap.
        for l in 0..=2u32 {
            let direct = a_coefficient(0, 2, 6, 4, l, CoefficientRoute::Derived)
                .unwrap()
                .value;
            let swapped = a_coefficient(2, 0, 4, 6, l, CoefficientRoute::Derived)
                .unwrap()
                .value;
            let sign = if (2 - l) % 2 == 1 { ri(-1) } else { ri(1) };
            assert_eq!(direct, swapped * sign, "l = {l}");
        }
    }

    #[test]
    fn section6_small_cases() {
        let report = verify_section6(3, 6, 6).unwrap();
        assert!(report.passed(), "failures: {}", report.failures());

        // w = 0: the single term is 1 itself.
        let single = a_coefficient(0, 0, 4, 6, 0, CoefficientRoute::Derived)
            .unwrap()
            .value;
        assert_eq!(single, ri(1));

        // w = 2, mu = 4, nu = 6 by hand.
        for l in 0..=2u32 {
            let mut sum = Rational::zero();
            for r in 0..=2u32 {
                let mut weight = Rational::from_integer(
                    binomial(5, (2 - r) as u64) * binomial(7, r as u64),
                );
                if r % 2 == 1 {
                    weight = -weight;
                }
                sum += weight
                    * a_coefficient(r, 2 - r, 4, 6, l, CoefficientRoute::Derived)
                        .unwrap()
                        .value;
            }
            assert_eq!(sum, if l == 0 { ri(1) } else { ri(0) }, "l = {l}");
        }
    }
}
