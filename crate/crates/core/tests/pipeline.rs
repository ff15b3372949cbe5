use homdip_core::hom::{tau_grid, EntangledEngine, SchmidtEngine};
use homdip_core::jsa::{default_jsa_grid, read_jsa, write_jsa};
use homdip_core::schmidt::DEFAULT_TOL;
use homdip_core::{
    build_jsa, dip_curve, p_entangled, p_mixed, p_separable, reduced_ensemble, schmidt_decompose,
    visibility, DipScenario, FrequencyGrid, JointSpectralAmplitude, PhaseMatching,
    PhaseMatchingShape, PumpEnvelope, Side, SpectralAmplitude,
};

const CENTER: f64 = 1e15;
const SIGMA: f64 = 1e12;

fn design(shape: PhaseMatchingShape, n: usize) -> JointSpectralAmplitude {
    let pm = PhaseMatching::separable_design(shape, SIGMA).unwrap();
    let pump = PumpEnvelope::pulsed(CENTER, SIGMA).unwrap();
    let grid = FrequencyGrid::centered(CENTER, 5.0 * SIGMA, n).unwrap();
    build_jsa(&pm, &pump, &grid, &grid).unwrap()
}

#[test]
fn product_spectrum_reduces_to_separable_photons() {
    let a = SpectralAmplitude::gaussian(CENTER, 0.8 * SIGMA).unwrap();
    let b = SpectralAmplitude::gaussian(CENTER + 0.3 * SIGMA, 1.1 * SIGMA).unwrap();
    let grid = FrequencyGrid::centered(CENTER, 8.0 * SIGMA, 301).unwrap();
    let jsa =
        JointSpectralAmplitude::separable(&a.sample(&grid).unwrap(), &b.sample(&grid).unwrap())
            .unwrap();

    let d = schmidt_decompose(&jsa, DEFAULT_TOL).unwrap();
    assert!((d.coefficients()[0] - 1.0).abs() < 1e-6);
    assert_eq!(d.rank(), 1);

    for tau in tau_grid(-5e-12, 5e-12, 11).unwrap() {
        let entangled = p_entangled(&jsa, tau).unwrap();
        let separable = p_separable(&a, &b, tau, &grid).unwrap();
        assert!((entangled - separable).abs() < 1e-6, "tau = {tau:e}");
    }
}

#[test]
fn sinc_source_regression_values() {
    let d = schmidt_decompose(&design(PhaseMatchingShape::Sinc, 512), DEFAULT_TOL).unwrap();
    assert!((d.coefficients()[0] - 0.95394677).abs() < 1e-7);
    assert!((d.purity() - 0.83017022).abs() < 1e-7);
    assert!((d.schmidt_number() - 1.0 / 0.83017022).abs() < 1e-6);
}

#[test]
fn independent_source_floor_regression() {
    let d = schmidt_decompose(&design(PhaseMatchingShape::Sinc, 256), DEFAULT_TOL).unwrap();
    let e = reduced_ensemble(&d, Side::First);
    assert!((p_mixed(&e, &e, 0.0).unwrap() - 0.08491403).abs() < 1e-7);
}

#[test]
fn serialized_spectrum_gives_the_same_dip() {
    let jsa = design(PhaseMatchingShape::gaussian(), 96);
    let restored = read_jsa(&write_jsa(&jsa)).unwrap();
    assert!(jsa.max_abs_difference(&restored).unwrap() < 1e-12);
    for tau in [0.0, 1e-12, -2.5e-12] {
        let p = p_entangled(&jsa, tau).unwrap();
        let q = p_entangled(&restored, tau).unwrap();
        assert!((p - q).abs() < 1e-12);
    }
}

#[test]
fn design_point_dip_is_full_visibility() {
    let pump = PumpEnvelope::pulsed(CENTER, SIGMA).unwrap();
    let grid = default_jsa_grid(&pump).unwrap();
    let pm = PhaseMatching::separable_design(PhaseMatchingShape::gaussian(), SIGMA).unwrap();
    let jsa = build_jsa(&pm, &pump, &grid, &grid).unwrap();
    let d = schmidt_decompose(&jsa, DEFAULT_TOL).unwrap();

    let direct = dip_curve(
        &DipScenario::Entangled(EntangledEngine::new(&jsa).unwrap()),
        -1e-11,
        1e-11,
        41,
    )
    .unwrap();
    let modal = dip_curve(
        &DipScenario::Schmidt(SchmidtEngine::new(&d).unwrap()),
        -1e-11,
        1e-11,
        41,
    )
    .unwrap();
    for (p, q) in direct.probabilities.iter().zip(&modal.probabilities) {
        assert!((p - q).abs() < 1e-10);
    }
    let v = visibility(&direct).unwrap();
    assert!((v.value - 1.0).abs() < 1e-6);
    assert!(v.warning.is_none());
}
