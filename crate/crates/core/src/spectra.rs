//! Single-photon spectral amplitudes and the closed-form dips for Gaussian and
//! sinc photons.

use std::f64::consts::PI;

use log::warn;
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::freqgrid::{ComplexSamples, FrequencyGrid, DEFAULT_POINTS};

/// Half-width of the default window around a Gaussian, in units of sigma.
pub const GAUSSIAN_HALF_WINDOW: f64 = 8.0;

/// Half-width of the default window around a sinc, in units of 1/A. The
/// sinc² tails carry mass ~ 1/(pi X) beyond X, and renormalizing the
/// truncated amplitude biases the dip by about a quarter of that.
pub const SINC_HALF_WINDOW: f64 = 4096.0;

/// Default node density for sinc amplitudes, in nodes per 1/A.
pub const SINC_NODES_PER_UNIT: f64 = 8.0;

/// Minimum coverage (in widths each side) below which sampling warns.
pub const MIN_COVERAGE: f64 = 6.0;

const RENORMALIZATION_WARN: f64 = 1e-6;

/// `sin(x)/x` with the removable singularity filled in.
pub fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        x.sin() / x
    }
}

/// Unit-norm spectral amplitude of a single photon.
#[derive(Debug, Clone, PartialEq)]
pub enum SpectralAmplitude {
    /// `pi^{-1/4} sigma^{-1/2} exp(-(ω - center)² / (2 sigma²))`.
    Gaussian {
        center: f64,
        width: f64,
    },
    /// `sqrt(A/pi) sinc(A (ω - center))`.
    Sinc {
        center: f64,
        scale: f64,
    },
    Tabulated(ComplexSamples),
}

impl SpectralAmplitude {
    pub fn gaussian(center: f64, width: f64) -> Result<Self> {
        if !(width > 0.0 && width.is_finite()) {
            return Err(invalid("sigma", format!("must be positive, got {width:e}")));
        }
        if !center.is_finite() {
            return Err(invalid("center", "must be finite"));
        }
        Ok(SpectralAmplitude::Gaussian { center, width })
    }

    pub fn sinc(center: f64, scale: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(invalid("scale", format!("must be positive, got {scale:e}")));
        }
        if !center.is_finite() {
            return Err(invalid("center", "must be finite"));
        }
        Ok(SpectralAmplitude::Sinc { center, scale })
    }

    /// Wraps user-supplied samples. They are renormalized when sampled.
    pub fn tabulated(samples: ComplexSamples) -> Result<Self> {
        let norm2 = samples.norm_squared();
        if !(norm2.is_finite() && norm2 > 0.0) {
            return Err(Error::Degenerate(format!(
                "tabulated amplitude has norm squared {norm2:e}"
            )));
        }
        Ok(SpectralAmplitude::Tabulated(samples))
    }

    /// Central frequency; for tabulated amplitudes the |φ|²-weighted mean.
    pub fn center(&self) -> f64 {
        match self {
            SpectralAmplitude::Gaussian { center, .. } | SpectralAmplitude::Sinc { center, .. } => {
                *center
            }
            SpectralAmplitude::Tabulated(s) => {
                let g = s.grid();
                let reference = g.center();
                let norm2 = s.norm_squared();
                let moment: f64 = s
                    .values()
                    .iter()
                    .enumerate()
                    .map(|(i, v)| v.norm_sqr() * g.weight(i) * g.detuning(i, reference))
                    .sum();
                reference + moment / norm2
            }
        }
    }

    /// Characteristic spectral width: sigma, 1/A, or the rms width.
    pub fn width(&self) -> f64 {
        match self {
            SpectralAmplitude::Gaussian { width, .. } => *width,
            SpectralAmplitude::Sinc { scale, .. } => scale.recip(),
            SpectralAmplitude::Tabulated(s) => {
                let g = s.grid();
                let c = self.center();
                let norm2 = s.norm_squared();
                let second: f64 = s
                    .values()
                    .iter()
                    .enumerate()
                    .map(|(i, v)| v.norm_sqr() * g.weight(i) * g.detuning(i, c).powi(2))
                    .sum();
                (second / norm2).sqrt()
            }
        }
    }

    /// Amplitude at absolute frequency `omega`. Tabulated amplitudes are
    /// interpolated linearly and vanish outside their grid.
    pub fn evaluate(&self, omega: f64) -> Complex64 {
        match self {
            SpectralAmplitude::Gaussian { center, .. } | SpectralAmplitude::Sinc { center, .. } => {
                self.evaluate_detuned(omega - center)
            }
            SpectralAmplitude::Tabulated(s) => interpolate(s, omega),
        }
    }

    fn evaluate_detuned(&self, nu: f64) -> Complex64 {
        match self {
            SpectralAmplitude::Gaussian { width, .. } => {
                let norm = PI.powf(-0.25) / width.sqrt();
                Complex64::from(norm * (-nu * nu / (2.0 * width * width)).exp())
            }
            SpectralAmplitude::Sinc { scale, .. } => {
                Complex64::from((scale / PI).sqrt() * sinc(scale * nu))
            }
            SpectralAmplitude::Tabulated(_) => unreachable!("tabulated amplitudes are not detuned"),
        }
    }

    /// Tabulates on `grid`, renormalized to unit discrete norm.
    pub fn sample(&self, grid: &FrequencyGrid) -> Result<ComplexSamples> {
        self.sample_with_norm(grid).map(|(s, _)| s)
    }

    /// Like [`sample`](Self::sample) but also returns the discrete norm
    /// squared before renormalization.
    pub fn sample_with_norm(&self, grid: &FrequencyGrid) -> Result<(ComplexSamples, f64)> {
        let raw = match self {
            SpectralAmplitude::Tabulated(s) if s.grid() == grid => s.clone(),
            SpectralAmplitude::Tabulated(s) => {
                ComplexSamples::from_fn(*grid, |w| interpolate(s, w))
            }
            _ => {
                let c = self.center();
                let reach = MIN_COVERAGE * self.width();
                if !grid.covers(c - reach, c + reach) {
                    warn!(
                        "grid [{:e}, {:e}] covers less than ±{MIN_COVERAGE} widths around {c:e}",
                        grid.omega_min(),
                        grid.omega_max()
                    );
                }
                let values = (0..grid.len())
                    .map(|i| self.evaluate_detuned(grid.detuning(i, c)))
                    .collect();
                ComplexSamples::new(*grid, values)?
            }
        };
        let (normalized, norm2) = raw.normalized().map_err(|_| {
            Error::Degenerate(format!(
                "amplitude vanishes on grid [{:e}, {:e}]",
                grid.omega_min(),
                grid.omega_max()
            ))
        })?;
        if matches!(self, SpectralAmplitude::Tabulated(_))
            && (norm2 - 1.0).abs() > RENORMALIZATION_WARN
        {
            warn!("tabulated amplitude renormalized (norm squared was {norm2:.9})");
        }
        Ok((normalized, norm2))
    }

    /// Default window `(lo, hi)` and largest useful node spacing.
    fn default_window(&self) -> (f64, f64, Option<f64>) {
        match self {
            SpectralAmplitude::Gaussian { center, width } => {
                let half = GAUSSIAN_HALF_WINDOW * width;
                (center - half, center + half, None)
            }
            SpectralAmplitude::Sinc { center, scale } => {
                let half = SINC_HALF_WINDOW / scale;
                (
                    center - half,
                    center + half,
                    Some(1.0 / (SINC_NODES_PER_UNIT * scale)),
                )
            }
            SpectralAmplitude::Tabulated(s) => {
                let g = s.grid();
                (g.omega_min(), g.omega_max(), Some(g.spacing()))
            }
        }
    }
}

fn interpolate(s: &ComplexSamples, omega: f64) -> Complex64 {
    let g = s.grid();
    if omega < g.omega_min() || omega > g.omega_max() {
        return Complex64::new(0.0, 0.0);
    }
    let x = (omega - g.omega_min()) / g.spacing();
    let i = (x.floor() as usize).min(g.len() - 2);
    let t = x - i as f64;
    let v = s.values();
    v[i] * (1.0 - t) + v[i + 1] * t
}

/// Grid covering the default windows of all `amplitudes`.
///
/// Without an explicit `n_points` the node count is the larger of
/// [`DEFAULT_POINTS`] and what the finest sinc or tabulated input needs.
pub fn covering_grid(
    amplitudes: &[&SpectralAmplitude],
    n_points: Option<usize>,
) -> Result<FrequencyGrid> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut finest = f64::INFINITY;
    for a in amplitudes {
        let (l, h, spacing) = a.default_window();
        lo = lo.min(l);
        hi = hi.max(h);
        if let Some(s) = spacing {
            finest = finest.min(s);
        }
    }
    if amplitudes.is_empty() {
        return Err(invalid("amplitudes", "need at least one amplitude"));
    }
    let n = n_points.unwrap_or_else(|| {
        let needed = if finest.is_finite() {
            ((hi - lo) / finest).ceil() as usize + 1
        } else {
            0
        };
        needed.max(DEFAULT_POINTS)
    });
    FrequencyGrid::new(lo, hi, n)
}

/// Coincidence probability for two Gaussian photons.
pub fn gaussian_dip_closed_form(
    sigma_a: f64,
    sigma_b: f64,
    wbar_a: f64,
    wbar_b: f64,
    tau: f64,
) -> f64 {
    let sa2 = sigma_a * sigma_a;
    let sb2 = sigma_b * sigma_b;
    let sum = sa2 + sb2;
    let detuning = wbar_a - wbar_b;
    0.5 - (sigma_a * sigma_b / sum) * (-(sa2 * sb2 * tau * tau + detuning * detuning) / sum).exp()
}

/// Coincidence probability for two identical sinc photons of scale `a`.
pub fn sinc_dip_closed_form(a: f64, tau: f64) -> f64 {
    let t = tau.abs() - (tau / 2.0 - a).abs() - (tau / 2.0 + a).abs();
    0.5 - t * t / (8.0 * a * a)
}

/// Parses `omega value_re [value_im]` rows (whitespace separated, `#`
/// comments) on a uniform frequency grid.
pub fn parse_tabulated(text: &str) -> Result<ComplexSamples> {
    let mut omegas = Vec::new();
    let mut values = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        if !(2..=3).contains(&fields.len()) {
            return Err(Error::Parse {
                line,
                message: format!("expected 2 or 3 columns, found {}", fields.len()),
            });
        }
        let parse = |s: &str| {
            s.parse::<f64>().map_err(|e| Error::Parse {
                line,
                message: format!("`{s}`: {e}"),
            })
        };
        omegas.push(parse(fields[0])?);
        let re = parse(fields[1])?;
        let im = match fields.get(2) {
            Some(s) => parse(s)?,
            None => 0.0,
        };
        values.push(Complex64::new(re, im));
    }
    if omegas.len() < 3 {
        return Err(Error::Parse {
            line: 0,
            message: format!("need at least 3 rows, found {}", omegas.len()),
        });
    }
    let grid = FrequencyGrid::new(omegas[0], omegas[omegas.len() - 1], omegas.len())?;
    let h = grid.spacing();
    for (i, &w) in omegas.iter().enumerate() {
        if (w - grid.point(i)).abs() > 1e-6 * h {
            return Err(Error::Parse {
                line: 0,
                message: format!("row {} at omega = {w:e} breaks uniform spacing", i + 1),
            });
        }
    }
    ComplexSamples::new(grid, values)
}
