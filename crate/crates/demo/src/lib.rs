//! Browser bindings for three interactive views: a separable-photon dip
//! explorer, a pulsed down-conversion source and the polarization case of a
//! beam splitter.
//!
//! The computations live in [`explore`] and run natively; the exported
//! functions below only convert errors for JavaScript.

pub mod explore;

use wasm_bindgen::prelude::*;

pub use explore::{BeamSplitterResult, DipResult, SourceResult};

fn js(e: homdip_core::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// Dip of two Gaussian photons; widths and centers in rad/s, delays in s.
#[wasm_bindgen(js_name = separableDip)]
pub fn separable_dip(
    sigma_a: f64,
    sigma_b: f64,
    detuning: f64,
    tau_max: f64,
    n_tau: usize,
) -> Result<DipResult, JsError> {
    explore::separable_dip(sigma_a, sigma_b, detuning, tau_max, n_tau).map_err(js)
}

/// Pulsed source: `slope_ratio` is `B/A`, `scale` multiplies the separable
/// design value of `A`.
#[wasm_bindgen(js_name = pulsedSource)]
pub fn pulsed_source(
    gaussian: bool,
    scale: f64,
    slope_ratio: f64,
    n_points: usize,
    tau_max: f64,
    n_tau: usize,
) -> Result<SourceResult, JsError> {
    explore::pulsed_source(gaussian, scale, slope_ratio, n_points, tau_max, n_tau).map_err(js)
}

#[wasm_bindgen(js_name = beamSplitter)]
pub fn beam_splitter(eta: f64, same_polarization: bool) -> Result<BeamSplitterResult, JsError> {
    explore::beam_splitter(eta, same_polarization).map_err(js)
}
