//! Two-photon interference at a beam splitter: symbolic Fock algebra for
//! discrete modes, and coincidence-probability engines for spectrally
//! separable, entangled, CW-pumped and mixed photon pairs.

pub mod error;
pub mod fock;
pub mod freqgrid;
pub mod hom;
pub mod jsa;
pub mod schmidt;
pub mod spectra;

pub use error::{Error, Result};
pub use fock::{
    apply_beamsplitter, coincidence_probability, input_state, FockState, ModeLabel, Port,
};
pub use freqgrid::{fourier_integral, integrate, ComplexSamples, FrequencyGrid, KernelSign};
pub use hom::{
    dip_curve, p_cw, p_entangled, p_entangled_schmidt, p_mixed, p_separable, visibility, DipCurve,
    DipScenario, Visibility,
};
pub use jsa::{
    abc_from_dispersion, build_cw_marginal, build_jsa, CwMarginal, DispersionParams,
    JointSpectralAmplitude, PhaseMatching, PhaseMatchingShape, PumpEnvelope,
};
pub use schmidt::{
    purity, reconstruct, reduced_ensemble, schmidt_decompose, SchmidtDecomposition, Side,
    SpectralEnsemble,
};
pub use spectra::SpectralAmplitude;
