//! Coincidence probability at a balanced beam splitter as a function of the
//! delay `tau`, for separable, entangled, CW-pumped and mixed inputs, plus
//! dip sweeps and visibility.
//!
//! Every engine reduces to `p = 1/2 - J(tau)/2` with a real overlap `J`.
//! Kernels use offsets from the grid center; the dropped global phase
//! cancels between each conjugate pair of integrals.

use log::warn;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::freqgrid::{ComplexSamples, FrequencyGrid, KernelSign};
use crate::jsa::{CwMarginal, JointSpectralAmplitude};
use crate::schmidt::{SchmidtDecomposition, SpectralEnsemble};
use crate::spectra::SpectralAmplitude;

/// Slack allowed outside the physical range before a result is rejected.
pub const RANGE_TOL: f64 = 1e-6;

/// Largest imaginary part tolerated in an overlap that must be real.
pub const IMAGINARY_TOL: f64 = 1e-8;

/// Fraction of a sweep, split over both ends, averaged to estimate `p_max`.
pub const EDGE_FRACTION: f64 = 0.05;

/// `|p_max - 1/2|` above which the sweep window is reported as too narrow.
pub const ASYMPTOTE_TOL: f64 = 1e-2;

/// Upper bound on `p` for a given input class. Separable photons and
/// mixtures of them cannot exceed one half; entangled pairs can antibunch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    Half,
    One,
}

impl Bound {
    pub fn upper(self) -> f64 {
        match self {
            Bound::Half => 0.5,
            Bound::One => 1.0,
        }
    }

    fn check(self, p: f64, what: &str, tau: f64) -> Result<f64> {
        if p.is_finite() && p >= -RANGE_TOL && p <= self.upper() + RANGE_TOL {
            Ok(p)
        } else {
            Err(Error::Contract(format!(
                "{what} coincidence probability {p} at tau = {tau:e} s outside [0, {}]",
                self.upper()
            )))
        }
    }
}

fn real_overlap(j: Complex64, what: &str, tau: f64) -> Result<f64> {
    if j.im.abs() <= IMAGINARY_TOL {
        Ok(j.re)
    } else {
        Err(Error::Contract(format!(
            "{what} overlap at tau = {tau:e} s has imaginary part {:e}",
            j.im
        )))
    }
}

/// Two independent pure photons with spectra `φ` (port a) and `ϕ` (port b).
#[derive(Debug, Clone)]
pub struct SeparableEngine {
    product: ComplexSamples,
}

impl SeparableEngine {
    pub fn new(
        phi: &SpectralAmplitude,
        varphi: &SpectralAmplitude,
        grid: &FrequencyGrid,
    ) -> Result<Self> {
        let a = phi.sample(grid)?;
        let b = varphi.sample(grid)?;
        Self::from_samples(&a, &b)
    }

    /// From sampled modes, which must share a grid and have unit norm.
    pub fn from_samples(phi: &ComplexSamples, varphi: &ComplexSamples) -> Result<Self> {
        Ok(Self {
            product: phi.conj().mul(varphi)?,
        })
    }

    /// `J(tau) = ∫ φ*(ω) ϕ(ω) e^(-iωτ) dω`, up to a global phase.
    pub fn overlap(&self, tau: f64) -> Result<Complex64> {
        crate::freqgrid::centered_fourier_integral(&self.product, tau, KernelSign::Negative)
    }

    pub fn probability(&self, tau: f64) -> Result<f64> {
        let j = self.overlap(tau)?;
        Bound::Half.check(0.5 - 0.5 * j.norm_sqr(), "separable", tau)
    }
}

/// `1/2 - |J(tau)|²/2` for two pure photons.
pub fn p_separable(
    phi: &SpectralAmplitude,
    varphi: &SpectralAmplitude,
    tau: f64,
    grid: &FrequencyGrid,
) -> Result<f64> {
    SeparableEngine::new(phi, varphi, grid)?.probability(tau)
}

/// Direct double sum over a sampled joint amplitude.
#[derive(Debug, Clone)]
pub struct EntangledEngine {
    grid: FrequencyGrid,
    exchange: DMatrix<Complex64>,
}

impl EntangledEngine {
    pub fn new(jsa: &JointSpectralAmplitude) -> Result<Self> {
        if jsa.grid1() != jsa.grid2() {
            return Err(Error::GridMismatch(
                "photon exchange needs identical grids on both axes".into(),
            ));
        }
        let f = jsa.values();
        let exchange = DMatrix::from_fn(f.nrows(), f.ncols(), |i, j| f[(i, j)].conj() * f[(j, i)]);
        Ok(Self {
            grid: *jsa.grid1(),
            exchange,
        })
    }

    /// `∫∫ f*(ω₁,ω₂) f(ω₂,ω₁) e^(i(ω₂−ω₁)τ) dω₁ dω₂`.
    pub fn overlap(&self, tau: f64) -> Result<f64> {
        self.grid.check_phase_step(tau)?;
        let p = DVector::from_vec(self.grid.centered_kernel(tau, KernelSign::Positive));
        let j = p.dotc(&(&self.exchange * &p));
        real_overlap(j, "entangled", tau)
    }

    pub fn probability(&self, tau: f64) -> Result<f64> {
        let j = self.overlap(tau)?;
        Bound::One.check(0.5 - 0.5 * j, "entangled", tau)
    }
}

pub fn p_entangled(jsa: &JointSpectralAmplitude, tau: f64) -> Result<f64> {
    EntangledEngine::new(jsa)?.probability(tau)
}

/// Stacks sampled modes as the columns of a matrix.
fn mode_matrix(modes: &[ComplexSamples]) -> DMatrix<Complex64> {
    DMatrix::from_fn(modes[0].len(), modes.len(), |i, k| modes[k].values()[i])
}

/// `Mᴴ diag(c) N`: all cross overlaps `∫ m_k* n_l c dω` at once.
fn cross_overlaps(
    m: &DMatrix<Complex64>,
    c: &[Complex64],
    n: &DMatrix<Complex64>,
) -> DMatrix<Complex64> {
    let mut scaled = n.clone();
    for (mut row, ck) in scaled.row_iter_mut().zip(c) {
        row *= *ck;
    }
    m.adjoint() * scaled
}

fn require_shared_grid(a: &[ComplexSamples], b: &[ComplexSamples]) -> Result<FrequencyGrid> {
    let grid = *a[0].grid();
    if a.iter().chain(b).all(|m| *m.grid() == grid) {
        Ok(grid)
    } else {
        Err(Error::GridMismatch(
            "both photons' modes must be sampled on the same grid".into(),
        ))
    }
}

/// Entangled pair in Schmidt form.
#[derive(Debug, Clone)]
pub struct SchmidtEngine {
    grid: FrequencyGrid,
    coefficients: Vec<f64>,
    modes1: DMatrix<Complex64>,
    modes2: DMatrix<Complex64>,
}

impl SchmidtEngine {
    pub fn new(decomp: &SchmidtDecomposition) -> Result<Self> {
        let grid = require_shared_grid(decomp.modes1(), decomp.modes2())?;
        Ok(Self {
            grid,
            coefficients: decomp.coefficients().to_vec(),
            modes1: mode_matrix(decomp.modes1()),
            modes2: mode_matrix(decomp.modes2()),
        })
    }

    /// `Σ u_k u_l [∫ φ_k* ϕ_l e^(-iωτ)] [∫ ϕ_k* φ_l e^(iωτ)]`.
    pub fn overlap(&self, tau: f64) -> Result<f64> {
        self.grid.check_phase_step(tau)?;
        let c = self.grid.centered_kernel(tau, KernelSign::Negative);
        let c_bar: Vec<Complex64> = c.iter().map(|z| z.conj()).collect();
        let o = cross_overlaps(&self.modes1, &c, &self.modes2);
        let q = cross_overlaps(&self.modes2, &c_bar, &self.modes1);
        let u = &self.coefficients;
        let mut j = Complex64::new(0.0, 0.0);
        for k in 0..u.len() {
            for l in 0..u.len() {
                j += o[(k, l)] * q[(k, l)] * (u[k] * u[l]);
            }
        }
        real_overlap(j, "Schmidt-form", tau)
    }

    pub fn probability(&self, tau: f64) -> Result<f64> {
        let j = self.overlap(tau)?;
        Bound::One.check(0.5 - 0.5 * j, "Schmidt-form", tau)
    }
}

pub fn p_entangled_schmidt(decomp: &SchmidtDecomposition, tau: f64) -> Result<f64> {
    SchmidtEngine::new(decomp)?.probability(tau)
}

/// CW-pumped pair reduced to the one-dimensional marginal `g`.
#[derive(Debug, Clone)]
pub struct CwEngine {
    grid: FrequencyGrid,
    product: Vec<Complex64>,
}

impl CwEngine {
    pub fn new(marginal: &CwMarginal) -> Result<Self> {
        let grid = *marginal.g().grid();
        if !grid.is_symmetric_about_zero() {
            return Err(Error::AsymmetricGrid {
                omega_min: grid.omega_min(),
                omega_max: grid.omega_max(),
            });
        }
        let g = marginal.g().values();
        let n = g.len();
        let product = (0..n).map(|i| g[n - 1 - i].conj() * g[i]).collect();
        Ok(Self { grid, product })
    }

    /// `∫ g*(−ω) g(ω) e^(i2ωτ) dω`.
    pub fn overlap(&self, tau: f64) -> Result<f64> {
        let two_tau = 2.0 * tau;
        self.grid.check_phase_step(two_tau)?;
        let kernel = self.grid.centered_kernel(two_tau, KernelSign::Positive);
        let j: Complex64 = self.product.iter().zip(&kernel).map(|(a, b)| a * b).sum();
        real_overlap(j, "CW", tau)
    }

    pub fn probability(&self, tau: f64) -> Result<f64> {
        let j = self.overlap(tau)?;
        Bound::One.check(0.5 - 0.5 * j, "CW", tau)
    }
}

pub fn p_cw(marginal: &CwMarginal, tau: f64) -> Result<f64> {
    CwEngine::new(marginal)?.probability(tau)
}

/// Two independent photons in diagonal spectral mixtures.
#[derive(Debug, Clone)]
pub struct MixedEngine {
    grid: FrequencyGrid,
    weights_a: Vec<f64>,
    weights_b: Vec<f64>,
    modes_a: DMatrix<Complex64>,
    modes_b: DMatrix<Complex64>,
}

impl MixedEngine {
    pub fn new(a: &SpectralEnsemble, b: &SpectralEnsemble) -> Result<Self> {
        let grid = require_shared_grid(a.modes(), b.modes())?;
        Ok(Self {
            grid,
            weights_a: a.weights().to_vec(),
            weights_b: b.weights().to_vec(),
            modes_a: mode_matrix(a.modes()),
            modes_b: mode_matrix(b.modes()),
        })
    }

    /// `Σ q_k q'_l |∫ φ_k* ϕ_l e^(-iωτ) dω|²`.
    pub fn overlap(&self, tau: f64) -> Result<f64> {
        self.grid.check_phase_step(tau)?;
        let c = self.grid.centered_kernel(tau, KernelSign::Negative);
        let o = cross_overlaps(&self.modes_a, &c, &self.modes_b);
        let mut j = 0.0;
        for (k, qa) in self.weights_a.iter().enumerate() {
            for (l, qb) in self.weights_b.iter().enumerate() {
                j += qa * qb * o[(k, l)].norm_sqr();
            }
        }
        Ok(j)
    }

    pub fn probability(&self, tau: f64) -> Result<f64> {
        let j = self.overlap(tau)?;
        Bound::Half.check(0.5 - 0.5 * j, "mixed", tau)
    }
}

pub fn p_mixed(a: &SpectralEnsemble, b: &SpectralEnsemble, tau: f64) -> Result<f64> {
    MixedEngine::new(a, b)?.probability(tau)
}

/// A prepared engine together with a human-readable description.
#[derive(Debug, Clone)]
pub enum DipScenario {
    Separable(SeparableEngine),
    Entangled(EntangledEngine),
    Schmidt(SchmidtEngine),
    Cw(CwEngine),
    Mixed(MixedEngine),
}

impl DipScenario {
    pub fn probability(&self, tau: f64) -> Result<f64> {
        match self {
            DipScenario::Separable(e) => e.probability(tau),
            DipScenario::Entangled(e) => e.probability(tau),
            DipScenario::Schmidt(e) => e.probability(tau),
            DipScenario::Cw(e) => e.probability(tau),
            DipScenario::Mixed(e) => e.probability(tau),
        }
    }

    pub fn bound(&self) -> Bound {
        match self {
            DipScenario::Separable(_) | DipScenario::Mixed(_) => Bound::Half,
            _ => Bound::One,
        }
    }

    pub fn descriptor(&self) -> &'static str {
        match self {
            DipScenario::Separable(_) => "separable",
            DipScenario::Entangled(_) => "entangled",
            DipScenario::Schmidt(_) => "entangled-schmidt",
            DipScenario::Cw(_) => "entangled-cw",
            DipScenario::Mixed(_) => "mixed",
        }
    }
}

/// `n` delays from `tau_min` to `tau_max`; the grid is mirror-symmetric when
/// `tau_min = -tau_max`.
pub fn tau_grid(tau_min: f64, tau_max: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(invalid("n_tau", format!("need at least 2 delays, got {n}")));
    }
    if !(tau_min.is_finite() && tau_max.is_finite() && tau_min < tau_max) {
        return Err(invalid(
            "tau",
            format!("need finite tau_min < tau_max, got [{tau_min}, {tau_max}]"),
        ));
    }
    let d = (n - 1) as f64;
    Ok((0..n)
        .map(|i| ((n - 1 - i) as f64 / d) * tau_min + (i as f64 / d) * tau_max)
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct DipCurve {
    pub taus: Vec<f64>,
    pub probabilities: Vec<f64>,
    pub descriptor: String,
}

/// Evaluates the scenario on a uniform delay grid. Output order and values do
/// not depend on thread scheduling.
pub fn dip_curve(
    scenario: &DipScenario,
    tau_min: f64,
    tau_max: f64,
    n_tau: usize,
) -> Result<DipCurve> {
    let taus = tau_grid(tau_min, tau_max, n_tau)?;
    #[cfg(feature = "parallel")]
    let probabilities = {
        use rayon::prelude::*;
        taus.par_iter()
            .map(|&t| scenario.probability(t))
            .collect::<Result<Vec<_>>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let probabilities = taus
        .iter()
        .map(|&t| scenario.probability(t))
        .collect::<Result<Vec<_>>>()?;
    Ok(DipCurve {
        taus,
        probabilities,
        descriptor: scenario.descriptor().to_string(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Visibility {
    pub p_max: f64,
    pub p_min: f64,
    pub value: f64,
    /// Set when the edge estimate of `p_max` is far from one half.
    pub warning: Option<String>,
}

/// Samples averaged at each end of a sweep of `n` points.
pub fn edge_samples(n: usize) -> usize {
    ((EDGE_FRACTION * n as f64 / 2.0).floor() as usize).max(1)
}

/// `V = (p_max − p_min)/p_max`, with `p_max` from the outer samples.
pub fn visibility(curve: &DipCurve) -> Result<Visibility> {
    let p = &curve.probabilities;
    if p.len() < 2 {
        return Err(invalid("curve", "need at least 2 samples"));
    }
    let edge = edge_samples(p.len());
    let outer: f64 = p[..edge].iter().chain(&p[p.len() - edge..]).sum();
    let p_max = outer / (2 * edge) as f64;
    let p_min = p.iter().copied().fold(f64::INFINITY, f64::min);
    if p_max.is_nan() || p_max <= 0.0 {
        return Err(Error::Degenerate(format!(
            "asymptotic coincidence estimate {p_max} is not positive"
        )));
    }
    let warning = ((p_max - 0.5).abs() > ASYMPTOTE_TOL).then(|| {
        let msg = format!(
            "edge estimate p_max = {p_max:.6} differs from 1/2 by more than {ASYMPTOTE_TOL}; \
             widen the delay window"
        );
        warn!("{msg}");
        msg
    });
    Ok(Visibility {
        p_max,
        p_min,
        value: (p_max - p_min) / p_max,
        warning,
    })
}
