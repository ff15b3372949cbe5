//! Schmidt decomposition of sampled joint amplitudes, reduced single-photon
//! ensembles and purity.
//!
//! The sampled amplitude is weighted by `sqrt(w1_i w2_j)` (trapezoid weights)
//! before the SVD, so singular values are the continuum Schmidt coefficients
//! and un-weighted singular vectors are orthonormal under the grid integral.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::freqgrid::ComplexSamples;
use crate::jsa::JointSpectralAmplitude;

/// Default relative truncation threshold on `u_k / u_0`.
pub const DEFAULT_TOL: f64 = 1e-6;

/// Tolerance on `Σ q_k = 1` and on mode orthonormality for ensembles.
pub const ENSEMBLE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtDecomposition {
    coefficients: Vec<f64>,
    modes1: Vec<ComplexSamples>,
    modes2: Vec<ComplexSamples>,
    truncation_tol: f64,
    discarded_weight: f64,
    reconstruction_error: f64,
}

impl SchmidtDecomposition {
    /// Kept coefficients, descending, renormalized so `Σ u_k² = 1`.
    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn modes1(&self) -> &[ComplexSamples] {
        &self.modes1
    }

    pub fn modes2(&self) -> &[ComplexSamples] {
        &self.modes2
    }

    pub fn truncation_tol(&self) -> f64 {
        self.truncation_tol
    }

    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    /// `Σ u_k²` over the dropped coefficients, before renormalization.
    pub fn discarded_weight(&self) -> f64 {
        self.discarded_weight
    }

    /// Max-abs deviation of `Σ_kept u_k φ_k ϕ_k` (unrenormalized) from the
    /// input amplitude.
    pub fn reconstruction_error(&self) -> f64 {
        self.reconstruction_error
    }

    /// `Σ u_k⁴`, the purity of either reduced state.
    pub fn purity(&self) -> f64 {
        self.coefficients.iter().map(|u| u.powi(4)).sum()
    }

    /// Schmidt number `1 / Σ u_k⁴`.
    pub fn schmidt_number(&self) -> f64 {
        self.purity().recip()
    }
}

pub fn schmidt_decompose(jsa: &JointSpectralAmplitude, tol: f64) -> Result<SchmidtDecomposition> {
    if !(tol.is_finite() && (0.0..=1.0).contains(&tol)) {
        return Err(invalid("tol", format!("must lie in [0, 1], got {tol}")));
    }
    let f = jsa.values();
    if f.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return Err(Error::Svd("amplitude contains non-finite samples".into()));
    }
    let (g1, g2) = (*jsa.grid1(), *jsa.grid2());
    let s1: Vec<f64> = g1.weights().into_iter().map(f64::sqrt).collect();
    let s2: Vec<f64> = g2.weights().into_iter().map(f64::sqrt).collect();
    let m = DMatrix::from_fn(f.nrows(), f.ncols(), |i, j| f[(i, j)] * (s1[i] * s2[j]));

    let svd = m
        .try_svd(true, true, f64::EPSILON, 0)
        .ok_or_else(|| Error::Svd("iteration did not converge".into()))?;
    let u = svd
        .u
        .as_ref()
        .ok_or_else(|| Error::Svd("missing left vectors".into()))?;
    let v_t = svd
        .v_t
        .as_ref()
        .ok_or_else(|| Error::Svd("missing right vectors".into()))?;
    let sv = &svd.singular_values;

    let mut order: Vec<usize> = (0..sv.len()).collect();
    order.sort_by(|&a, &b| sv[b].total_cmp(&sv[a]).then(a.cmp(&b)));
    let u0 = sv[order[0]];
    if u0.is_nan() || u0 <= 0.0 {
        return Err(Error::Degenerate("amplitude is identically zero".into()));
    }
    let kept: Vec<usize> = order
        .iter()
        .copied()
        .filter(|&k| sv[k] >= tol * u0)
        .collect();
    let total: f64 = sv.iter().map(|s| s * s).sum();
    let kept_weight: f64 = kept.iter().map(|&k| sv[k] * sv[k]).sum();

    let mut raw = Vec::with_capacity(kept.len());
    let mut modes1 = Vec::with_capacity(kept.len());
    let mut modes2 = Vec::with_capacity(kept.len());
    for &k in &kept {
        let mut left: Vec<Complex64> = (0..g1.len()).map(|i| u[(i, k)] / s1[i]).collect();
        let mut right: Vec<Complex64> = (0..g2.len()).map(|j| v_t[(k, j)] / s2[j]).collect();
        let peak = left
            .iter()
            .enumerate()
            .fold((0, -1.0), |best, (i, v)| {
                if v.norm() > best.1 {
                    (i, v.norm())
                } else {
                    best
                }
            })
            .0;
        let phase = left[peak].conj() / left[peak].norm();
        left.iter_mut().for_each(|v| *v *= phase);
        right.iter_mut().for_each(|v| *v *= phase.conj());
        raw.push(sv[k]);
        modes1.push(ComplexSamples::new(g1, left)?);
        modes2.push(ComplexSamples::new(g2, right)?);
    }

    let rebuilt = outer_sum(&raw, &modes1, &modes2);
    let reconstruction_error = rebuilt
        .iter()
        .zip(f.iter())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    let scale = kept_weight.sqrt().recip();

    Ok(SchmidtDecomposition {
        coefficients: raw.iter().map(|u| u * scale).collect(),
        modes1,
        modes2,
        truncation_tol: tol,
        discarded_weight: (total - kept_weight).max(0.0),
        reconstruction_error,
    })
}

fn outer_sum(
    coefficients: &[f64],
    modes1: &[ComplexSamples],
    modes2: &[ComplexSamples],
) -> DMatrix<Complex64> {
    let n1 = modes1[0].len();
    let n2 = modes2[0].len();
    let left = DMatrix::from_fn(n1, coefficients.len(), |i, k| {
        modes1[k].values()[i] * coefficients[k]
    });
    let right = DMatrix::from_fn(coefficients.len(), n2, |k, j| modes2[k].values()[j]);
    left * right
}

/// `Σ_k u_k φ_k(ω₁) ϕ_k(ω₂)` with the renormalized coefficients.
pub fn reconstruct(decomp: &SchmidtDecomposition) -> JointSpectralAmplitude {
    let values = outer_sum(&decomp.coefficients, &decomp.modes1, &decomp.modes2);
    JointSpectralAmplitude::new(*decomp.modes1[0].grid(), *decomp.modes2[0].grid(), values)
        .expect("modes share the decomposition grids")
}

/// Which photon of the pair is kept when the other is traced out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    First,
    Second,
}

/// Diagonal mixture `Σ q_k |φ_k⟩⟨φ_k|` over orthonormal modes.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralEnsemble {
    weights: Vec<f64>,
    modes: Vec<ComplexSamples>,
}

impl SpectralEnsemble {
    pub fn new(weights: Vec<f64>, modes: Vec<ComplexSamples>) -> Result<Self> {
        if weights.is_empty() || weights.len() != modes.len() {
            return Err(invalid(
                "weights",
                format!("{} weights for {} modes", weights.len(), modes.len()),
            ));
        }
        if let Some(q) = weights.iter().find(|q| !(q.is_finite() && **q >= 0.0)) {
            return Err(invalid(
                "weights",
                format!("negative or non-finite weight {q}"),
            ));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > ENSEMBLE_TOL {
            return Err(invalid("weights", format!("sum to {sum}, not 1")));
        }
        for m in &modes[1..] {
            modes[0].require_same_grid(m)?;
        }
        for (k, a) in modes.iter().enumerate() {
            for (l, b) in modes.iter().enumerate().skip(k) {
                let overlap = a.inner(b)?;
                let expect = if k == l { 1.0 } else { 0.0 };
                if (overlap - expect).norm() > ENSEMBLE_TOL {
                    return Err(invalid(
                        "modes",
                        format!("not orthonormal: <{k}|{l}> = {overlap}"),
                    ));
                }
            }
        }
        Ok(Self { weights, modes })
    }

    /// A single normalized mode with weight 1.
    pub fn pure(mode: &ComplexSamples) -> Result<Self> {
        let (mode, _) = mode.normalized()?;
        Ok(Self {
            weights: vec![1.0],
            modes: vec![mode],
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn modes(&self) -> &[ComplexSamples] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Reduced state of one photon: weights `u_k²`, modes from the kept side.
pub fn reduced_ensemble(decomp: &SchmidtDecomposition, which: Side) -> SpectralEnsemble {
    let modes = match which {
        Side::First => decomp.modes1.clone(),
        Side::Second => decomp.modes2.clone(),
    };
    SpectralEnsemble {
        weights: decomp.coefficients.iter().map(|u| u * u).collect(),
        modes,
    }
}

/// `tr ρ² = Σ q_k²`.
pub fn purity(ensemble: &SpectralEnsemble) -> f64 {
    ensemble.weights.iter().map(|q| q * q).sum()
}
