use homdip_core::hom::{dip_curve, DipScenario, EntangledEngine, SeparableEngine};
use homdip_core::jsa::{build_jsa, PhaseMatching, PhaseMatchingShape, PumpEnvelope, DEFAULT_GAMMA};
use homdip_core::schmidt::{schmidt_decompose, DEFAULT_TOL};
use homdip_core::spectra::{covering_grid, gaussian_dip_closed_form};
use homdip_core::{
    apply_beamsplitter, coincidence_probability, input_state, visibility, FrequencyGrid, Result,
    SpectralAmplitude,
};
use wasm_bindgen::prelude::*;

const CENTER: f64 = 1e15;
const PUMP_WIDTH: f64 = 1e12;
const SOURCE_HALF_WINDOW: f64 = 5.0;
const SHOWN_COEFFICIENTS: usize = 12;

#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct DipResult {
    taus: Vec<f64>,
    computed: Vec<f64>,
    reference: Vec<f64>,
    visibility: f64,
}

#[wasm_bindgen]
impl DipResult {
    #[wasm_bindgen(getter)]
    pub fn taus(&self) -> Vec<f64> {
        self.taus.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn computed(&self) -> Vec<f64> {
        self.computed.clone()
    }

    /// Closed-form curve at the same delays.
    #[wasm_bindgen(getter)]
    pub fn reference(&self) -> Vec<f64> {
        self.reference.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn visibility(&self) -> f64 {
        self.visibility
    }
}

pub fn separable_dip(
    sigma_a: f64,
    sigma_b: f64,
    detuning: f64,
    tau_max: f64,
    n_tau: usize,
) -> Result<DipResult> {
    let a = SpectralAmplitude::gaussian(CENTER, sigma_a)?;
    let b = SpectralAmplitude::gaussian(CENTER + detuning, sigma_b)?;
    let grid = covering_grid(&[&a, &b], None)?;
    let scenario = DipScenario::Separable(SeparableEngine::new(&a, &b, &grid)?);
    let curve = dip_curve(&scenario, -tau_max, tau_max, n_tau)?;
    let reference = curve
        .taus
        .iter()
        .map(|&t| gaussian_dip_closed_form(sigma_a, sigma_b, CENTER, CENTER + detuning, t))
        .collect();
    Ok(DipResult {
        visibility: visibility(&curve)?.value,
        taus: curve.taus,
        computed: curve.probabilities,
        reference,
    })
}

#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct SourceResult {
    n_points: usize,
    magnitude: Vec<f64>,
    taus: Vec<f64>,
    probabilities: Vec<f64>,
    coefficients: Vec<f64>,
    purity: f64,
    visibility: f64,
}

#[wasm_bindgen]
impl SourceResult {
    #[wasm_bindgen(getter, js_name = nPoints)]
    pub fn n_points(&self) -> usize {
        self.n_points
    }

    /// `|f|` scaled to a peak of 1, row-major with `ω₁` along rows.
    #[wasm_bindgen(getter)]
    pub fn magnitude(&self) -> Vec<f64> {
        self.magnitude.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn taus(&self) -> Vec<f64> {
        self.taus.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn probabilities(&self) -> Vec<f64> {
        self.probabilities.clone()
    }

    /// Leading Schmidt coefficients.
    #[wasm_bindgen(getter)]
    pub fn coefficients(&self) -> Vec<f64> {
        self.coefficients.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn purity(&self) -> f64 {
        self.purity
    }

    #[wasm_bindgen(getter)]
    pub fn visibility(&self) -> f64 {
        self.visibility
    }
}

pub fn pulsed_source(
    gaussian: bool,
    scale: f64,
    slope_ratio: f64,
    n_points: usize,
    tau_max: f64,
    n_tau: usize,
) -> Result<SourceResult> {
    let shape = if gaussian {
        PhaseMatchingShape::gaussian()
    } else {
        PhaseMatchingShape::Sinc
    };
    let a = scale / (PUMP_WIDTH * (2.0 * DEFAULT_GAMMA).sqrt());
    let pm = PhaseMatching::new(shape, a, slope_ratio * a, 0.0)?;
    let pump = PumpEnvelope::pulsed(CENTER, PUMP_WIDTH)?;
    let grid = FrequencyGrid::centered(CENTER, SOURCE_HALF_WINDOW * PUMP_WIDTH, n_points)?;
    let jsa = build_jsa(&pm, &pump, &grid, &grid)?;
    let d = schmidt_decompose(&jsa, DEFAULT_TOL)?;
    let peak = jsa.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
    let n = grid.len();
    let magnitude = (0..n * n)
        .map(|k| jsa.values()[(k / n, k % n)].norm() / peak)
        .collect();
    let curve = dip_curve(
        &DipScenario::Entangled(EntangledEngine::new(&jsa)?),
        -tau_max,
        tau_max,
        n_tau,
    )?;
    Ok(SourceResult {
        n_points: n,
        magnitude,
        visibility: visibility(&curve)?.value,
        taus: curve.taus,
        probabilities: curve.probabilities,
        coefficients: d
            .coefficients()
            .iter()
            .take(SHOWN_COEFFICIENTS)
            .copied()
            .collect(),
        purity: d.purity(),
    })
}

#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct BeamSplitterResult {
    probability: f64,
    state: String,
}

#[wasm_bindgen]
impl BeamSplitterResult {
    #[wasm_bindgen(getter)]
    pub fn probability(&self) -> f64 {
        self.probability
    }

    /// Output state in creation-operator notation.
    #[wasm_bindgen(getter)]
    pub fn state(&self) -> String {
        self.state.clone()
    }
}

pub fn beam_splitter(eta: f64, same_polarization: bool) -> Result<BeamSplitterResult> {
    let tag_b = if same_polarization { "H" } else { "V" };
    let out = apply_beamsplitter(&input_state("H", tag_b), eta)?;
    Ok(BeamSplitterResult {
        probability: coincidence_probability(&out)?,
        state: out.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separable_dip_tracks_closed_form() {
        let r = separable_dip(1e12, 1.5e12, 0.5e12, 8e-12, 81).unwrap();
        assert_eq!(r.taus().len(), 81);
        for (p, q) in r.computed().iter().zip(r.reference()) {
            assert!((p - q).abs() < 1e-8);
        }
        assert!(r.visibility() > 0.0 && r.visibility() < 1.0);
    }

    #[test]
    fn design_point_source_is_pure() {
        let r = pulsed_source(true, 1.0, -1.0, 128, 6e-12, 41).unwrap();
        assert_eq!(r.magnitude().len(), 128 * 128);
        assert!(r.magnitude().iter().all(|m| (0.0..=1.0).contains(m)));
        assert!((r.purity() - 1.0).abs() < 1e-6);
        assert!((r.visibility() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn correlated_source_is_mixed() {
        let r = pulsed_source(false, 3.0, -0.2, 128, 6e-12, 41).unwrap();
        assert!(r.purity() < 0.9);
        assert!(r.coefficients().len() <= SHOWN_COEFFICIENTS);
        assert!(r.coefficients().windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn undersampled_source_is_rejected() {
        assert!(pulsed_source(true, 1.0, -1.0, 32, 2e-11, 11).is_err());
    }

    #[test]
    fn beam_splitter_cases() {
        assert_eq!(beam_splitter(0.5, true).unwrap().probability(), 0.0);
        assert_eq!(beam_splitter(0.5, false).unwrap().probability(), 0.5);
        let r = beam_splitter(0.3, false).unwrap();
        assert!((r.probability() - 0.58).abs() < 1e-12);
        assert!(r.state().contains("a†_H"));
        assert!(beam_splitter(-0.1, true).is_err());
    }
}
