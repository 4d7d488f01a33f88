//! Cross-module flows: the full decomposition matrix over the generator
//! forms, and width values other than 1 going through the same pipelines.

use num_complex::Complex64;

use rcd_core::brackets::CoefficientRoute;
use rcd_core::dirichlet::{verify_prop31, verify_theorem};
use rcd_core::forms::{delta, eisenstein, FormDescriptor};
use rcd_core::jets::{slash_weight, GroupElement, ModularPolynomial};
use rcd_core::qseries::{EvalPoint, PiGradedSeries};
use rcd_core::rational::rat;

#[test]
fn decomposition_matrix_through_total_order_five() {
    let forms = [
        eisenstein(4, 50).unwrap(),
        eisenstein(6, 50).unwrap(),
        delta(50),
    ];
    for phi in &forms {
        for psi in &forms {
            for m in 0..=5u32 {
                for n in 0..=(5 - m) {
                    let report =
                        verify_theorem(phi, psi, m, n, 50, CoefficientRoute::Derived).unwrap();
                    assert!(
                        report.passed(),
                        "({}, {}, m={m}, n={n}): {} failures",
                        phi.name(),
                        psi.name(),
                        report.failures()
                    );
                }
            }
        }
    }
}

/// The same rational data declared at width 1/2 runs through every exact
/// pipeline unchanged: the formal grade absorbs all h-dependence.
#[test]
fn half_width_forms_verify_identically() {
    let reweight = |fd: &FormDescriptor| -> FormDescriptor {
        let series = fd.series();
        let mut slices = std::collections::BTreeMap::new();
        for grade in series.grades() {
            slices.insert(grade, series.slice(grade).unwrap().to_vec());
        }
        let series =
            PiGradedSeries::new(rat(1, 2), series.precision(), slices).unwrap();
        FormDescriptor::new(fd.name(), fd.weight(), fd.depth(), series).unwrap()
    };
    let phi = reweight(&eisenstein(4, 30).unwrap());
    let psi = reweight(&eisenstein(6, 30).unwrap());

    let report = verify_theorem(&phi, &psi, 1, 1, 30, CoefficientRoute::Derived).unwrap();
    assert!(report.passed());

    let poly = ModularPolynomial::embed_modular(&phi, 2)
        .unwrap()
        .lambda_map(8)
        .unwrap();
    assert!(verify_prop31(&poly, 8, 30).unwrap().passed());
}

/// Width-2 series are 2-periodic: the numeric slash under the translation
/// matching the width reproduces the direct value.
#[test]
fn width_two_translation_invariance() {
    let base = eisenstein(4, 40).unwrap();
    let series = base.series();
    let mut slices = std::collections::BTreeMap::new();
    for grade in series.grades() {
        slices.insert(grade, series.slice(grade).unwrap().to_vec());
    }
    let wide = PiGradedSeries::new(rat(2, 1), 40, slices).unwrap();

    let point = EvalPoint::new(Complex64::new(0.3, 1.0), 41).unwrap();
    let translation = GroupElement::from_integers(1, 2, 0, 1).unwrap();
    let slashed = slash_weight(&wide, 4, &translation, &point).unwrap();
    let direct = wide.eval_at(&point).unwrap();
    assert!((slashed - direct).norm() < 1e-12);
}
