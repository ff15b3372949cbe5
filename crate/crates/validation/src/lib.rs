//! Shared fixtures for the acceptance suite.

use std::path::PathBuf;

use homdip_core::hom::DipCurve;
use homdip_core::{ComplexSamples, FrequencyGrid};
use num_complex::Complex64;

/// Directory holding the example scenarios shipped with the command line.
pub fn scenario_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../cli/scenarios")
}

/// Every bundled `.scenario` file, sorted by name.
pub fn bundled_scenarios() -> Vec<PathBuf> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(scenario_dir())
        .expect("scenario directory is readable")
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "scenario"))
        .collect();
    paths.sort();
    paths
}

/// Orthonormal Hermite-Gauss amplitudes of orders `0..count` centred on
/// `center` with amplitude width `width`.
pub fn hermite_gauss_modes(
    count: usize,
    center: f64,
    width: f64,
    grid: &FrequencyGrid,
) -> Vec<ComplexSamples> {
    let norm = 1.0 / (width.sqrt() * std::f64::consts::PI.powf(0.25));
    let columns: Vec<Vec<f64>> = grid
        .points()
        .map(|w| {
            let x = (w - center) / width;
            let mut psi = vec![norm * (-x * x / 2.0).exp()];
            if count > 1 {
                psi.push(2f64.sqrt() * x * psi[0]);
            }
            for n in 1..count.saturating_sub(1) {
                let nf = n as f64;
                let next =
                    (2.0 / (nf + 1.0)).sqrt() * x * psi[n] - (nf / (nf + 1.0)).sqrt() * psi[n - 1];
                psi.push(next);
            }
            psi
        })
        .collect();
    (0..count)
        .map(|k| {
            let values = columns.iter().map(|c| Complex64::from(c[k])).collect();
            ComplexSamples::new(*grid, values).expect("one value per node")
        })
        .collect()
}

/// `max |p(τᵢ) − p(τ_{n−1−i})|` over a sweep symmetric about zero.
pub fn max_asymmetry(curve: &DipCurve) -> f64 {
    let p = &curve.probabilities;
    (0..p.len())
        .map(|i| (p[i] - p[p.len() - 1 - i]).abs())
        .fold(0.0, f64::max)
}

/// Largest pointwise difference between two curves sampled at the same delays.
pub fn max_curve_difference(a: &DipCurve, b: &DipCurve) -> f64 {
    assert_eq!(a.taus, b.taus, "curves must share their delays");
    a.probabilities
        .iter()
        .zip(&b.probabilities)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
