//! Uniform angular-frequency grids and the composite trapezoid quadrature
//! every coincidence integral is built on.
//!
//! Grids carry absolute frequencies (rad/s), which for optical photons sit near
//! 10^15 rad/s while the features of interest are ~10^12 rad/s wide. Anything
//! that needs a phase `omega * tau` therefore works with offsets from the grid
//! center and restores the global phase at the end.

use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default number of grid points for one-dimensional integrals.
pub const DEFAULT_POINTS: usize = 2048;

/// Largest allowed `|tau| * spacing` for a Fourier-kernel integral.
pub const MAX_PHASE_STEP: f64 = FRAC_PI_4;

/// Uniform discretization of `[omega_min, omega_max]` with `n_points` nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyGrid {
    omega_min: f64,
    omega_max: f64,
    n_points: usize,
}

impl FrequencyGrid {
    pub fn new(omega_min: f64, omega_max: f64, n_points: usize) -> Result<Self> {
        if !omega_min.is_finite() || !omega_max.is_finite() {
            return Err(Error::InvalidRange(format!(
                "bounds must be finite, got [{omega_min:e}, {omega_max:e}]"
            )));
        }
        if omega_max <= omega_min {
            return Err(Error::InvalidRange(format!(
                "omega_max ({omega_max:e}) must exceed omega_min ({omega_min:e})"
            )));
        }
        if n_points < 3 {
            return Err(Error::InvalidRange(format!(
                "need at least 3 points, got {n_points}"
            )));
        }
        Ok(Self {
            omega_min,
            omega_max,
            n_points,
        })
    }

    /// Grid spanning `center ± half_width`.
    pub fn centered(center: f64, half_width: f64, n_points: usize) -> Result<Self> {
        Self::new(center - half_width, center + half_width, n_points)
    }

    pub fn omega_min(&self) -> f64 {
        self.omega_min
    }

    pub fn omega_max(&self) -> f64 {
        self.omega_max
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        (self.omega_max - self.omega_min) / (self.n_points - 1) as f64
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.omega_min + self.omega_max)
    }

    /// `omega_min + i * spacing`.
    pub fn point(&self, i: usize) -> f64 {
        self.omega_min + i as f64 * self.spacing()
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |i| self.point(i))
    }

    /// `point(i) - reference`, computed without forming the large absolute
    /// frequency first.
    pub fn detuning(&self, i: usize, reference: f64) -> f64 {
        (self.omega_min - reference) + i as f64 * self.spacing()
    }

    /// Offset of node `i` from the grid center. Exactly antisymmetric under
    /// `i -> n - 1 - i`.
    pub fn offset(&self, i: usize) -> f64 {
        let half = (self.n_points - 1) as f64 / 2.0;
        (i as f64 - half) * self.spacing()
    }

    /// Trapezoid weight of node `i`.
    pub fn weight(&self, i: usize) -> f64 {
        let h = self.spacing();
        if i == 0 || i + 1 == self.n_points {
            0.5 * h
        } else {
            h
        }
    }

    pub fn weights(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.weight(i)).collect()
    }

    /// Whether the grid is symmetric about zero, so that `-omega` is a node
    /// whenever `omega` is.
    pub fn is_symmetric_about_zero(&self) -> bool {
        let span = self.omega_max - self.omega_min;
        (self.omega_min + self.omega_max).abs() <= 1e-12 * span
    }

    /// Whether `[lo, hi]` lies inside the grid.
    pub fn covers(&self, lo: f64, hi: f64) -> bool {
        self.omega_min <= lo && hi <= self.omega_max
    }

    /// Enforces `|tau| * spacing < pi/4`.
    pub fn check_phase_step(&self, tau: f64) -> Result<()> {
        let product = tau.abs() * self.spacing();
        if product.is_finite() && product < MAX_PHASE_STEP {
            Ok(())
        } else {
            Err(Error::Aliasing {
                tau,
                spacing: self.spacing(),
                product,
            })
        }
    }

    /// Quadrature weights times `exp(i * sign * offset_i * tau)`; the global
    /// phase `exp(i * sign * center * tau)` is left out.
    pub(crate) fn centered_kernel(&self, tau: f64, sign: KernelSign) -> Vec<Complex64> {
        let s = sign.factor();
        (0..self.n_points)
            .map(|i| {
                let (sin, cos) = (s * self.offset(i) * tau).sin_cos();
                Complex64::new(cos, sin) * self.weight(i)
            })
            .collect()
    }
}

/// Sign of the exponent in `exp(i * sign * omega * tau)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelSign {
    Positive,
    Negative,
}

impl KernelSign {
    pub fn factor(self) -> f64 {
        match self {
            KernelSign::Positive => 1.0,
            KernelSign::Negative => -1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            KernelSign::Positive => KernelSign::Negative,
            KernelSign::Negative => KernelSign::Positive,
        }
    }
}

/// Complex function values tabulated on a [`FrequencyGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSamples {
    grid: FrequencyGrid,
    values: Vec<Complex64>,
}

impl ComplexSamples {
    pub fn new(grid: FrequencyGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for a {}-point grid",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, values })
    }

    /// Tabulates `f(omega)` at every node.
    pub fn from_fn(grid: FrequencyGrid, f: impl Fn(f64) -> Complex64) -> Self {
        let values = grid.points().map(f).collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().copied().map(f).collect(),
        }
    }

    pub fn conj(&self) -> Self {
        self.map(|v| v.conj())
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        self.map(|v| v * factor)
    }

    /// Pointwise product; both operands must share a grid.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.require_same_grid(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .collect();
        Ok(Self {
            grid: self.grid,
            values,
        })
    }

    /// `a * self + b * other`.
    pub fn linear_combination(&self, a: Complex64, other: &Self, b: Complex64) -> Result<Self> {
        self.require_same_grid(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| a * x + b * y)
            .collect();
        Ok(Self {
            grid: self.grid,
            values,
        })
    }

    /// `∫ conj(self) * other dω`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.require_same_grid(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .enumerate()
            .map(|(i, (a, b))| a.conj() * b * self.grid.weight(i))
            .sum())
    }

    /// `∫ |f|² dω`.
    pub fn norm_squared(&self) -> f64 {
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| v.norm_sqr() * self.grid.weight(i))
            .sum()
    }

    /// Rescales to unit norm, returning the samples and the norm squared they
    /// had before.
    pub fn normalized(&self) -> Result<(Self, f64)> {
        let norm2 = self.norm_squared();
        if !(norm2.is_finite() && norm2 > 0.0) {
            return Err(Error::Degenerate(format!(
                "cannot normalize samples with norm squared {norm2:e}"
            )));
        }
        Ok((self.scale(Complex64::from(norm2.sqrt().recip())), norm2))
    }

    pub(crate) fn require_same_grid(&self, other: &Self) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!(
                "{:?} vs {:?}",
                self.grid, other.grid
            )))
        }
    }
}

/// Composite trapezoid estimate of `∫ f(ω) dω` over the grid.
pub fn integrate(samples: &ComplexSamples) -> Complex64 {
    samples
        .values
        .iter()
        .enumerate()
        .map(|(i, v)| v * samples.grid.weight(i))
        .sum()
}

/// Trapezoid estimate of `∫ f(ω) exp(i * sign * ω * tau) dω`.
pub fn fourier_integral(samples: &ComplexSamples, tau: f64, sign: KernelSign) -> Result<Complex64> {
    let centered = centered_fourier_integral(samples, tau, sign)?;
    let global = sign.factor() * samples.grid.center() * tau;
    Ok(centered * Complex64::from_polar(1.0, global))
}

/// Same as [`fourier_integral`] without the global phase
/// `exp(i * sign * center * tau)`. Engines whose results depend only on
/// products of conjugate pairs use this form.
pub(crate) fn centered_fourier_integral(
    samples: &ComplexSamples,
    tau: f64,
    sign: KernelSign,
) -> Result<Complex64> {
    samples.grid.check_phase_step(tau)?;
    let kernel = samples.grid.centered_kernel(tau, sign);
    Ok(samples.values.iter().zip(&kernel).map(|(v, k)| v * k).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn unit_gaussian_density(grid: FrequencyGrid, center: f64) -> ComplexSamples {
        ComplexSamples::from_fn(grid, |w| {
            Complex64::from((-(w - center).powi(2)).exp() / PI.sqrt())
        })
    }

    #[test]
    fn make_grid_examples() {
        let g = FrequencyGrid::new(0.0, 1.0, 3).unwrap();
        assert_eq!(g.points().collect::<Vec<_>>(), vec![0.0, 0.5, 1.0]);

        let g = FrequencyGrid::new(-5.0, 5.0, 11).unwrap();
        assert_eq!(g.spacing(), 1.0);

        let g = FrequencyGrid::new(1e15 - 5e12, 1e15 + 5e12, 2048).unwrap();
        assert_abs_diff_eq!(g.spacing(), 1e13 / 2047.0, epsilon = 1.0);
        assert!((g.spacing() - 4.885e9).abs() < 1e6);
    }

    #[test]
    fn make_grid_rejects_bad_ranges() {
        assert!(matches!(
            FrequencyGrid::new(1.0, 1.0, 10),
            Err(Error::InvalidRange(_))
        ));
        assert!(matches!(
            FrequencyGrid::new(2.0, 1.0, 10),
            Err(Error::InvalidRange(_))
        ));
        assert!(matches!(
            FrequencyGrid::new(0.0, 1.0, 2),
            Err(Error::InvalidRange(_))
        ));
        assert!(FrequencyGrid::new(f64::NAN, 1.0, 10).is_err());
    }

    #[test]
    fn points_reproducible_from_fields() {
        let g = FrequencyGrid::new(-3.0, 7.0, 101).unwrap();
        for (i, w) in g.points().enumerate() {
            assert_eq!(w, -3.0 + i as f64 * (10.0 / 100.0));
        }
        assert_abs_diff_eq!(g.point(100), 7.0, epsilon = 1e-14);
    }

    #[test]
    fn offsets_are_antisymmetric() {
        let g = FrequencyGrid::new(1e15 - 3e12, 1e15 + 3e12, 512).unwrap();
        for i in 0..g.len() {
            assert_eq!(g.offset(i), -g.offset(g.len() - 1 - i));
        }
    }

    #[test]
    fn integrate_examples() {
        for n in [3, 10, 1001] {
            let g = FrequencyGrid::new(0.0, 1.0, n).unwrap();
            let s = ComplexSamples::from_fn(g, |_| Complex64::from(1.0));
            assert_abs_diff_eq!(integrate(&s).re, 1.0, epsilon = 1e-14);
        }

        let g = FrequencyGrid::new(0.0, 2.0, 3).unwrap();
        let s = ComplexSamples::from_fn(g, Complex64::from);
        assert_abs_diff_eq!(integrate(&s).re, 2.0, epsilon = 1e-15);

        // ∫ e^{-ω²}/√π dω = 1
        let g = FrequencyGrid::new(-8.0, 8.0, 1024).unwrap();
        let s = unit_gaussian_density(g, 0.0);
        assert_abs_diff_eq!(integrate(&s).re, 1.0, epsilon = 1e-8);
    }

    #[test]
    fn fourier_integral_examples() {
        let g = FrequencyGrid::new(-8.0, 8.0, 1024).unwrap();
        let s = unit_gaussian_density(g, 0.0);
        let at_zero = fourier_integral(&s, 0.0, KernelSign::Negative).unwrap();
        assert_eq!(at_zero, integrate(&s));

        // Fourier transform of e^{-ω²}/√π at tau is e^{-tau²/4}.
        let j = fourier_integral(&s, 1.0, KernelSign::Negative).unwrap();
        assert_abs_diff_eq!(j.norm(), (-0.25f64).exp(), epsilon = 1e-10);
        assert_abs_diff_eq!(j.norm(), 0.7788, epsilon = 1e-4);

        let jp = fourier_integral(&s, 1.0, KernelSign::Positive).unwrap();
        assert_abs_diff_eq!(jp.re, j.re, epsilon = 1e-15);
        assert_abs_diff_eq!(jp.im, -j.im, epsilon = 1e-15);
    }

    #[test]
    fn fourier_integral_restores_global_phase() {
        let center = 3.0;
        let g = FrequencyGrid::new(center - 8.0, center + 8.0, 1024).unwrap();
        let s = unit_gaussian_density(g, center);
        let tau = 0.7;
        let j = fourier_integral(&s, tau, KernelSign::Negative).unwrap();
        let expected = Complex64::from_polar((-tau * tau / 4.0).exp(), -center * tau);
        assert_abs_diff_eq!(j.re, expected.re, epsilon = 1e-10);
        assert_abs_diff_eq!(j.im, expected.im, epsilon = 1e-10);

        // Direct quadrature with absolute frequencies agrees.
        let direct: Complex64 = (0..g.len())
            .map(|i| s.values()[i] * g.weight(i) * Complex64::from_polar(1.0, -g.point(i) * tau))
            .sum();
        assert_abs_diff_eq!(j.re, direct.re, epsilon = 1e-12);
        assert_abs_diff_eq!(j.im, direct.im, epsilon = 1e-12);
    }

    #[test]
    fn fourier_integral_refuses_to_alias() {
        let g = FrequencyGrid::new(-8.0, 8.0, 17).unwrap(); // spacing 1
        let s = unit_gaussian_density(g, 0.0);
        assert!(fourier_integral(&s, 0.7, KernelSign::Positive).is_ok());
        assert!(matches!(
            fourier_integral(&s, 0.8, KernelSign::Positive),
            Err(Error::Aliasing { .. })
        ));
        assert!(matches!(
            fourier_integral(&s, -1.0, KernelSign::Negative),
            Err(Error::Aliasing { .. })
        ));
    }

    #[test]
    fn samples_length_must_match_grid() {
        let g = FrequencyGrid::new(0.0, 1.0, 4).unwrap();
        assert!(matches!(
            ComplexSamples::new(g, vec![Complex64::from(1.0); 3]),
            Err(Error::GridMismatch(_))
        ));
    }

    #[test]
    fn refinement_changes_little() {
        let tau = 1.3;
        let mut previous: Option<Complex64> = None;
        for n in [512, 1024, 2048] {
            let g = FrequencyGrid::new(-8.0, 8.0, n).unwrap();
            let s = unit_gaussian_density(g, 0.0);
            let j = fourier_integral(&s, tau, KernelSign::Negative).unwrap();
            if let Some(p) = previous {
                let rel = (j - p).norm() / j.norm();
                assert!(rel < 1e-6, "n = {n}: relative change {rel:e}");
            }
            previous = Some(j);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn samples(g: FrequencyGrid, coeffs: &[(f64, f64)]) -> ComplexSamples {
            ComplexSamples::from_fn(g, |w| {
                coeffs
                    .iter()
                    .enumerate()
                    .map(|(k, &(re, im))| Complex64::new(re, im) * (w * k as f64 * 0.3).cos())
                    .sum::<Complex64>()
                    * (-w * w / 4.0).exp()
            })
        }

        proptest! {
            #[test]
            fn integrate_is_linear(
                a in -5.0..5.0f64, b in -5.0..5.0f64,
                cf in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..5),
                cg in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..5),
            ) {
                let g = FrequencyGrid::new(-10.0, 10.0, 257).unwrap();
                let f = samples(g, &cf);
                let h = samples(g, &cg);
                let combo = f.linear_combination(Complex64::from(a), &h, Complex64::from(b)).unwrap();
                let lhs = integrate(&combo);
                let rhs = integrate(&f) * a + integrate(&h) * b;
                let scale = 1.0 + integrate(&f).norm() * a.abs() + integrate(&h).norm() * b.abs();
                prop_assert!((lhs - rhs).norm() <= 1e-13 * scale);
            }

            #[test]
            fn conjugation_symmetry(
                tau in -3.0..3.0f64,
                cf in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..5),
            ) {
                let g = FrequencyGrid::new(2.0, 22.0, 401).unwrap();
                let f = samples(g, &cf);
                let lhs = fourier_integral(&f.conj(), tau, KernelSign::Positive).unwrap();
                let rhs = fourier_integral(&f, tau, KernelSign::Negative).unwrap().conj();
                prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
            }
        }
    }
}
