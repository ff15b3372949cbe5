//! Joint spectral amplitudes for down-converted photon pairs.
//!
//! All builders evaluate the phase-matching argument in detunings from the
//! degenerate photon frequency, `A ν₁ + B ν₂ + ((A + B) ω̄ − C)`, so that
//! absolute frequencies near 1e15 rad/s never enter a difference.

use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::freqgrid::{ComplexSamples, FrequencyGrid};
use crate::spectra::sinc;

/// Gaussian phase-matching parameter giving the same amplitude FWHM as sinc.
pub const DEFAULT_GAMMA: f64 = 0.193;

/// Half-width of the default pulsed JSA grid in pump widths.
pub const JSA_HALF_WINDOW: f64 = 5.0;

/// Points per axis of the default pulsed JSA grid.
pub const JSA_POINTS: usize = 512;

/// Half-width of the default CW sinc marginal grid, in units of `1/|B - A|`.
pub const CW_SINC_HALF_WINDOW: f64 = 4096.0;

/// Nodes per `1/|B - A|` on the default CW sinc marginal grid.
pub const CW_SINC_NODES_PER_UNIT: f64 = 16.0;

/// Half-width of the default CW Gaussian marginal grid in amplitude standard
/// deviations.
pub const CW_GAUSSIAN_HALF_WINDOW: f64 = 8.0;

/// Points of the default CW Gaussian marginal grid.
pub const CW_GAUSSIAN_POINTS: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhaseMatchingShape {
    Sinc,
    Gaussian { gamma: f64 },
}

impl PhaseMatchingShape {
    pub fn gaussian() -> Self {
        PhaseMatchingShape::Gaussian {
            gamma: DEFAULT_GAMMA,
        }
    }

    /// Profile as a function of the phase-matching argument.
    pub fn profile(&self, x: f64) -> f64 {
        match *self {
            PhaseMatchingShape::Sinc => sinc(x),
            PhaseMatchingShape::Gaussian { gamma } => (-gamma * x * x).exp(),
        }
    }
}

/// `Φ(ω₁, ω₂) = profile(A ω₁ + B ω₂ − C)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseMatching {
    shape: PhaseMatchingShape,
    a: f64,
    b: f64,
    c: f64,
}

impl PhaseMatching {
    pub fn new(shape: PhaseMatchingShape, a: f64, b: f64, c: f64) -> Result<Self> {
        if let PhaseMatchingShape::Gaussian { gamma } = shape {
            if !(gamma.is_finite() && gamma > 0.0) {
                return Err(invalid("gamma", format!("must be positive, got {gamma}")));
            }
        }
        for (name, v) in [("A", a), ("B", b), ("C", c)] {
            if !v.is_finite() {
                return Err(invalid(name, format!("must be finite, got {v}")));
            }
        }
        Ok(Self { shape, a, b, c })
    }

    /// `A = 1/(σ√(2γ))`, `B = −A`, `C = 0`: the pair is separable for a
    /// Gaussian profile and a pump of width `sigma`.
    pub fn separable_design(shape: PhaseMatchingShape, sigma: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(invalid("sigma", format!("must be positive, got {sigma}")));
        }
        let gamma = match shape {
            PhaseMatchingShape::Gaussian { gamma } => gamma,
            PhaseMatchingShape::Sinc => DEFAULT_GAMMA,
        };
        let a = 1.0 / (sigma * (2.0 * gamma).sqrt());
        Self::new(shape, a, -a, 0.0)
    }

    pub fn shape(&self) -> PhaseMatchingShape {
        self.shape
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Value at absolute frequencies.
    pub fn evaluate(&self, omega1: f64, omega2: f64) -> f64 {
        self.shape
            .profile(self.a * omega1 + self.b * omega2 - self.c)
    }

    /// Value at detunings `nu1`, `nu2` from `omega_bar`.
    pub fn evaluate_detuned(&self, nu1: f64, nu2: f64, omega_bar: f64) -> f64 {
        self.shape
            .profile(self.a * nu1 + self.b * nu2 + self.offset(omega_bar))
    }

    /// `(A + B) ω̄ − C`, the argument at zero detuning.
    pub fn offset(&self, omega_bar: f64) -> f64 {
        (self.a + self.b) * omega_bar - self.c
    }
}

/// First-order crystal dispersion. Wave numbers in 1/m, inverse group
/// velocities in s/m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionParams {
    pub length: f64,
    pub k_p0: f64,
    pub k_10: f64,
    pub k_20: f64,
    pub kp_prime: f64,
    pub k1_prime: f64,
    pub k2_prime: f64,
    pub omega_bar: f64,
}

/// Phase-matching coefficients `(A, B, C)` from first-order dispersion.
pub fn abc_from_dispersion(d: &DispersionParams) -> Result<(f64, f64, f64)> {
    if !(d.length.is_finite() && d.length > 0.0) {
        return Err(invalid("L", format!("must be positive, got {}", d.length)));
    }
    let half = d.length / 2.0;
    let a = half * (d.k1_prime - d.kp_prime);
    let b = half * (d.k2_prime - d.kp_prime);
    let c = half
        * (d.k_10 + d.k_20 - d.k_p0 + (d.k1_prime + d.k2_prime - 2.0 * d.kp_prime) * d.omega_bar);
    Ok((a, b, c))
}

/// Pump spectral amplitude. `center` is the degenerate photon frequency; the
/// pump itself sits at `2 * center`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PumpEnvelope {
    Pulsed { center: f64, width: f64 },
    Cw { center: f64 },
}

impl PumpEnvelope {
    pub fn pulsed(center: f64, width: f64) -> Result<Self> {
        if !center.is_finite() {
            return Err(invalid("center", format!("must be finite, got {center}")));
        }
        if !(width.is_finite() && width > 0.0) {
            return Err(invalid("sigma", format!("must be positive, got {width}")));
        }
        Ok(PumpEnvelope::Pulsed { center, width })
    }

    pub fn cw(center: f64) -> Result<Self> {
        if !center.is_finite() {
            return Err(invalid("center", format!("must be finite, got {center}")));
        }
        Ok(PumpEnvelope::Cw { center })
    }

    pub fn center(&self) -> f64 {
        match *self {
            PumpEnvelope::Pulsed { center, .. } | PumpEnvelope::Cw { center } => center,
        }
    }
}

/// `f(ω₁, ω₂)` sampled on `grid1 × grid2`; row `i` is `ω₁ = grid1.point(i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointSpectralAmplitude {
    grid1: FrequencyGrid,
    grid2: FrequencyGrid,
    values: DMatrix<Complex64>,
}

impl JointSpectralAmplitude {
    pub fn new(
        grid1: FrequencyGrid,
        grid2: FrequencyGrid,
        values: DMatrix<Complex64>,
    ) -> Result<Self> {
        if values.nrows() != grid1.len() || values.ncols() != grid2.len() {
            return Err(Error::GridMismatch(format!(
                "matrix is {}x{} but grids have {} and {} points",
                values.nrows(),
                values.ncols(),
                grid1.len(),
                grid2.len()
            )));
        }
        Ok(Self {
            grid1,
            grid2,
            values,
        })
    }

    pub fn from_fn(
        grid1: FrequencyGrid,
        grid2: FrequencyGrid,
        f: impl Fn(f64, f64) -> Complex64,
    ) -> Self {
        let values = DMatrix::from_fn(grid1.len(), grid2.len(), |i, j| {
            f(grid1.point(i), grid2.point(j))
        });
        Self {
            grid1,
            grid2,
            values,
        }
    }

    /// Normalized product `φ(ω₁) ϕ(ω₂)`.
    pub fn separable(phi: &ComplexSamples, varphi: &ComplexSamples) -> Result<Self> {
        let (p, q) = (phi.values(), varphi.values());
        let values = DMatrix::from_fn(p.len(), q.len(), |i, j| p[i] * q[j]);
        Self::new(*phi.grid(), *varphi.grid(), values)?.normalized()
    }

    pub fn grid1(&self) -> &FrequencyGrid {
        &self.grid1
    }

    pub fn grid2(&self) -> &FrequencyGrid {
        &self.grid2
    }

    pub fn values(&self) -> &DMatrix<Complex64> {
        &self.values
    }

    pub fn into_values(self) -> DMatrix<Complex64> {
        self.values
    }

    /// `∫∫ |f|² dω₁ dω₂` with trapezoid weights on both axes.
    pub fn norm_squared(&self) -> f64 {
        let w1 = self.grid1.weights();
        let w2 = self.grid2.weights();
        self.values
            .column_iter()
            .zip(&w2)
            .map(|(column, wj)| {
                let c: f64 = column.iter().zip(&w1).map(|(v, w)| v.norm_sqr() * w).sum();
                c * wj
            })
            .sum()
    }

    pub fn normalized(self) -> Result<Self> {
        let norm2 = self.norm_squared();
        if !(norm2.is_finite() && norm2 > 0.0) {
            return Err(Error::Degenerate(format!(
                "joint spectral amplitude has norm squared {norm2:e}; do the grids cover its support?"
            )));
        }
        let scale = Complex64::from(norm2.sqrt().recip());
        Ok(Self {
            values: self.values * scale,
            ..self
        })
    }

    /// `f(ω₂, ω₁)` on the swapped grids.
    pub fn transposed(&self) -> Self {
        Self {
            grid1: self.grid2,
            grid2: self.grid1,
            values: self.values.transpose(),
        }
    }

    /// Largest absolute elementwise difference; grids must match.
    pub fn max_abs_difference(&self, other: &Self) -> Result<f64> {
        if self.grid1 != other.grid1 || self.grid2 != other.grid2 {
            return Err(Error::GridMismatch(
                "joint spectral amplitudes live on different grids".into(),
            ));
        }
        Ok(self
            .values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

/// `Φ(ω₁, ω₂) α(ω₁ + ω₂)` with a Gaussian pump, normalized.
pub fn build_jsa(
    pm: &PhaseMatching,
    pump: &PumpEnvelope,
    grid1: &FrequencyGrid,
    grid2: &FrequencyGrid,
) -> Result<JointSpectralAmplitude> {
    let (center, width) = match *pump {
        PumpEnvelope::Pulsed { center, width } => (center, width),
        PumpEnvelope::Cw { .. } => {
            return Err(invalid(
                "pump",
                "a CW pump has no finite joint amplitude; use build_cw_marginal",
            ))
        }
    };
    let nu1: Vec<f64> = (0..grid1.len())
        .map(|i| grid1.detuning(i, center))
        .collect();
    let nu2: Vec<f64> = (0..grid2.len())
        .map(|j| grid2.detuning(j, center))
        .collect();
    let offset = pm.offset(center);
    let inv_two_var = 1.0 / (2.0 * width * width);
    let values = DMatrix::from_fn(grid1.len(), grid2.len(), |i, j| {
        let phi = pm.shape.profile(pm.a * nu1[i] + pm.b * nu2[j] + offset);
        let s = nu1[i] + nu2[j];
        Complex64::from(phi * (-s * s * inv_two_var).exp())
    });
    JointSpectralAmplitude::new(*grid1, *grid2, values)?.normalized()
}

/// `JSA_POINTS` nodes over `center ± JSA_HALF_WINDOW * width` of a pulsed pump.
pub fn default_jsa_grid(pump: &PumpEnvelope) -> Result<FrequencyGrid> {
    match *pump {
        PumpEnvelope::Pulsed { center, width } => {
            FrequencyGrid::centered(center, JSA_HALF_WINDOW * width, JSA_POINTS)
        }
        PumpEnvelope::Cw { .. } => Err(invalid("pump", "a CW pump has no default JSA grid")),
    }
}

/// `g(ω) ∝ Φ(ω̄ − ω, ω̄ + ω)` over detuning `ω`, unit norm.
#[derive(Debug, Clone, PartialEq)]
pub struct CwMarginal {
    g: ComplexSamples,
    omega_bar: f64,
}

impl CwMarginal {
    pub fn g(&self) -> &ComplexSamples {
        &self.g
    }

    pub fn omega_bar(&self) -> f64 {
        self.omega_bar
    }
}

pub fn build_cw_marginal(
    pm: &PhaseMatching,
    omega_bar: f64,
    grid: &FrequencyGrid,
) -> Result<CwMarginal> {
    let slope = pm.b - pm.a;
    let offset = pm.offset(omega_bar);
    let samples = ComplexSamples::from_fn(*grid, |w| {
        Complex64::from(pm.shape.profile(slope * w + offset))
    });
    let (g, _) = samples
        .normalized()
        .map_err(|_| Error::Degenerate("CW marginal vanishes on the grid; widen it".into()))?;
    Ok(CwMarginal { g, omega_bar })
}

/// Zero-centred detuning grid resolving `g`, including any shift of its
/// peak away from zero detuning.
pub fn default_cw_grid(pm: &PhaseMatching, omega_bar: f64) -> Result<FrequencyGrid> {
    let slope = (pm.b - pm.a).abs();
    if !(slope.is_finite() && slope > 0.0) {
        return Err(invalid(
            "B",
            "B = A leaves the CW marginal flat in frequency and not normalizable",
        ));
    }
    let shift = (pm.offset(omega_bar) / slope).abs();
    match pm.shape {
        PhaseMatchingShape::Sinc => {
            let half = shift + CW_SINC_HALF_WINDOW / slope;
            let h = 1.0 / (CW_SINC_NODES_PER_UNIT * slope);
            let n = 2 * (half / h).ceil() as usize + 1;
            FrequencyGrid::new(-half, half, n)
        }
        PhaseMatchingShape::Gaussian { gamma } => {
            let std = 1.0 / (slope * (2.0 * gamma).sqrt());
            let half = shift + CW_GAUSSIAN_HALF_WINDOW * std;
            FrequencyGrid::new(-half, half, CW_GAUSSIAN_POINTS)
        }
    }
}

/// Text export: header then one `re im` pair per line, row-major.
pub fn write_jsa(jsa: &JointSpectralAmplitude) -> String {
    let (g1, g2) = (jsa.grid1, jsa.grid2);
    let mut out = String::with_capacity(48 * jsa.values.len() + 128);
    let _ = writeln!(
        out,
        "# jsa {} {} {:e} {:e} {:e} {:e}",
        g1.len(),
        g2.len(),
        g1.omega_min(),
        g1.omega_max(),
        g2.omega_min(),
        g2.omega_max()
    );
    for i in 0..jsa.values.nrows() {
        for j in 0..jsa.values.ncols() {
            let v = jsa.values[(i, j)];
            let _ = writeln!(out, "{:e} {:e}", v.re, v.im);
        }
    }
    out
}

pub fn read_jsa(text: &str) -> Result<JointSpectralAmplitude> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let parse_err = |line: usize, message: String| Error::Parse { line, message };

    let (line, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty document".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 8 || fields[0] != "#" || fields[1] != "jsa" {
        return Err(parse_err(
            line,
            "expected `# jsa n1 n2 omega1_min omega1_max omega2_min omega2_max`".into(),
        ));
    }
    let count = |s: &str| {
        s.parse::<usize>()
            .map_err(|e| parse_err(line, format!("bad point count `{s}`: {e}")))
    };
    let float = |s: &str| {
        s.parse::<f64>()
            .map_err(|e| parse_err(line, format!("bad frequency `{s}`: {e}")))
    };
    let (n1, n2) = (count(fields[2])?, count(fields[3])?);
    let grid1 = FrequencyGrid::new(float(fields[4])?, float(fields[5])?, n1)?;
    let grid2 = FrequencyGrid::new(float(fields[6])?, float(fields[7])?, n2)?;

    let mut data = Vec::with_capacity(n1 * n2);
    let mut last_line = line;
    for (line, text) in lines {
        last_line = line;
        if text.starts_with('#') {
            continue;
        }
        let mut parts = text.split_whitespace();
        let mut next = |what: &str| -> Result<f64> {
            let s = parts
                .next()
                .ok_or_else(|| parse_err(line, format!("missing {what} part")))?;
            s.parse::<f64>()
                .map_err(|e| parse_err(line, format!("bad {what} part `{s}`: {e}")))
        };
        let re = next("real")?;
        let im = next("imaginary")?;
        if parts.next().is_some() {
            return Err(parse_err(line, "expected exactly two columns".into()));
        }
        data.push(Complex64::new(re, im));
    }
    if data.len() != n1 * n2 {
        return Err(parse_err(
            last_line,
            format!("expected {} values, found {}", n1 * n2, data.len()),
        ));
    }
    let values = DMatrix::from_row_slice(n1, n2, &data);
    JointSpectralAmplitude::new(grid1, grid2, values)
}
