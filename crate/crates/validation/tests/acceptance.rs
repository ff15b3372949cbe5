//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::error::Error;
use std::fs;
use std::panic;
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use homdip_cli::{compute, load_scenario, run, Body, RunOptions, RunSummary};
use homdip_core::hom::{
    dip_curve, tau_grid, CwEngine, DipScenario, EntangledEngine, MixedEngine, SchmidtEngine,
    SeparableEngine, RANGE_TOL,
};
use homdip_core::jsa::{
    build_cw_marginal, build_jsa, default_cw_grid, default_jsa_grid, PhaseMatching,
    PhaseMatchingShape, PumpEnvelope, DEFAULT_GAMMA,
};
use homdip_core::schmidt::{
    reduced_ensemble, schmidt_decompose, Side, SpectralEnsemble, DEFAULT_TOL,
};
use homdip_core::spectra::{covering_grid, gaussian_dip_closed_form, sinc_dip_closed_form};
use homdip_core::{
    apply_beamsplitter, coincidence_probability, input_state, visibility, FrequencyGrid,
    SpectralAmplitude,
};
use homdip_validation::{
    bundled_scenarios, hermite_gauss_modes, max_asymmetry, max_curve_difference,
};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<(bool, String), Box<dyn Error>>;
type Criterion = (&'static str, fn() -> Outcome);

const CENTER: f64 = 1e15;
const SIGMA: f64 = 1e12;
const PS: f64 = 1e-12;

/// `A = 1/(σ√(2γ))` for the reference pump width.
fn design_a() -> f64 {
    1.0 / (SIGMA * (2.0 * DEFAULT_GAMMA).sqrt())
}

fn design_jsa(
    shape: PhaseMatchingShape,
) -> Result<homdip_core::JointSpectralAmplitude, Box<dyn Error>> {
    let pm = PhaseMatching::separable_design(shape, SIGMA)?;
    let pump = PumpEnvelope::pulsed(CENTER, SIGMA)?;
    let grid = default_jsa_grid(&pump)?;
    Ok(build_jsa(&pm, &pump, &grid, &grid)?)
}

fn polarization_cases() -> Outcome {
    let start = Instant::now();
    let distinguishable =
        coincidence_probability(&apply_beamsplitter(&input_state("H", "V"), 0.5)?)?;
    let indistinguishable =
        coincidence_probability(&apply_beamsplitter(&input_state("H", "H"), 0.5)?)?;
    let elapsed = start.elapsed();
    let pass =
        distinguishable == 0.5 && indistinguishable == 0.0 && elapsed < Duration::from_millis(1);
    Ok((
        pass,
        format!("p_dist = {distinguishable}, p_indist = {indistinguishable}, {elapsed:?}"),
    ))
}

fn gaussian_oracle() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for sigma in [0.5e12, 1e12, 2e12] {
        for shift in [0.0, 1e12, 2e12] {
            let a = SpectralAmplitude::gaussian(CENTER, sigma)?;
            let b = SpectralAmplitude::gaussian(CENTER + shift, sigma)?;
            let grid = covering_grid(&[&a, &b], Some(2048))?;
            let engine = SeparableEngine::new(&a, &b, &grid)?;
            for tau in tau_grid(-4.0 / sigma, 4.0 / sigma, 9)? {
                let p = engine.probability(tau)?;
                let oracle = gaussian_dip_closed_form(sigma, sigma, CENTER, CENTER + shift, tau);
                worst = worst.max((p - oracle).abs());
                count += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = count == 81 && worst < 1e-4 && elapsed < Duration::from_secs(10);
    Ok((
        pass,
        format!("{count} cases, max error {worst:.2e}, {elapsed:.2?}"),
    ))
}

fn sinc_oracle() -> Outcome {
    let a = design_a();
    let photon = SpectralAmplitude::sinc(CENTER, a)?;
    let grid = covering_grid(&[&photon], None)?;
    let engine = SeparableEngine::new(&photon, &photon, &grid)?;
    let mut worst: f64 = 0.0;
    let mut exact_ok = true;
    for (k, exact) in [
        (0.0, Some(0.0)),
        (0.5, None),
        (1.0, Some(0.375)),
        (1.5, None),
        (2.0, Some(0.5)),
        (3.0, Some(0.5)),
    ] {
        let tau = k * a;
        let p = engine.probability(tau)?;
        worst = worst.max((p - sinc_dip_closed_form(a, tau)).abs());
        if let Some(e) = exact {
            exact_ok &= (p - e).abs() < 1e-4;
        }
    }
    Ok((
        worst < 1e-4 && exact_ok,
        format!("max error {worst:.2e} over 6 delays, n = {}", grid.len()),
    ))
}

fn separable_design_point() -> Outcome {
    let jsa = design_jsa(PhaseMatchingShape::gaussian())?;
    let start = Instant::now();
    let d = schmidt_decompose(&jsa, DEFAULT_TOL)?;
    let elapsed = start.elapsed();
    let u0 = d.coefficients()[0];
    let purity = d.purity();
    let pass = u0 >= 1.0 - 1e-4 && purity >= 1.0 - 1e-4 && elapsed < Duration::from_secs(30);
    Ok((
        pass,
        format!(
            "u0 = {u0:.10}, purity = {purity:.10}, {}x{} SVD in {elapsed:.2?}",
            jsa.grid1().len(),
            jsa.grid2().len()
        ),
    ))
}

fn engine_consistency() -> Outcome {
    let jsa = design_jsa(PhaseMatchingShape::gaussian())?;
    let d = schmidt_decompose(&jsa, DEFAULT_TOL)?;
    let direct = EntangledEngine::new(&jsa)?;
    let schmidt = SchmidtEngine::new(&d)?;
    let ensemble = reduced_ensemble(&d, Side::First);
    let mixed = MixedEngine::new(&ensemble, &ensemble)?;
    let mut worst: f64 = 0.0;
    for tau in tau_grid(-10.0 * PS, 10.0 * PS, 21)? {
        let (p1, p2, p3) = (
            direct.probability(tau)?,
            schmidt.probability(tau)?,
            mixed.probability(tau)?,
        );
        worst = worst
            .max((p1 - p2).abs())
            .max((p1 - p3).abs())
            .max((p2 - p3).abs());
    }
    Ok((
        worst < 1e-5,
        format!(
            "max pairwise difference {worst:.2e}, ensemble rank {}",
            ensemble.len()
        ),
    ))
}

fn cw_oracles() -> Outcome {
    let a = design_a();
    let g = DEFAULT_GAMMA;
    let mut worst_sinc: f64 = 0.0;
    let mut worst_gauss: f64 = 0.0;
    for (shape, worst) in [
        (PhaseMatchingShape::Sinc, &mut worst_sinc),
        (PhaseMatchingShape::gaussian(), &mut worst_gauss),
    ] {
        let pm = PhaseMatching::new(shape, a, -a, 0.0)?;
        let grid = default_cw_grid(&pm, CENTER)?;
        let engine = CwEngine::new(&build_cw_marginal(&pm, CENTER, &grid)?)?;
        for tau in tau_grid(-6.0 * a, 6.0 * a, 49)? {
            let oracle = match shape {
                PhaseMatchingShape::Sinc => 0.5 - 0.5 * (1.0 - tau.abs() / (2.0 * a)).max(0.0),
                PhaseMatchingShape::Gaussian { .. } => {
                    0.5 - 0.5 * (-tau * tau / (8.0 * g * a * a)).exp()
                }
            };
            *worst = worst.max((engine.probability(tau)? - oracle).abs());
        }
    }
    Ok((
        worst_sinc < 1e-4 && worst_gauss < 1e-4,
        format!("max error {worst_sinc:.2e} (triangular), {worst_gauss:.2e} (Gaussian)"),
    ))
}

fn visibility_purity() -> Outcome {
    let mut rng = StdRng::seed_from_u64(20_240_611);
    let grid = FrequencyGrid::centered(CENTER, 14.0 * SIGMA, 2048)?;
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let width = SIGMA * rng.random_range(0.6..1.0);
        let raw: Vec<f64> = (0..5).map(|_| rng.random_range(0.05..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
        let modes = hermite_gauss_modes(5, CENTER, width, &grid)
            .into_iter()
            .map(|m| {
                m.scale(Complex64::from_polar(
                    1.0,
                    rng.random_range(0.0..std::f64::consts::TAU),
                ))
            })
            .collect();
        let ensemble = SpectralEnsemble::new(weights.clone(), modes)?;
        let scenario = DipScenario::Mixed(MixedEngine::new(&ensemble, &ensemble)?);
        let curve = dip_curve(&scenario, -40.0 / SIGMA, 40.0 / SIGMA, 201)?;
        let v = visibility(&curve)?;
        let purity: f64 = weights.iter().map(|q| q * q).sum();
        worst = worst.max((v.value - purity).abs());
    }
    Ok((
        worst < 1e-3,
        format!("20 ensembles, max |V - purity| = {worst:.2e}"),
    ))
}

fn independent_floor() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for (name, shape) in [
        ("f_gauss", PhaseMatchingShape::gaussian()),
        ("f_sinc", PhaseMatchingShape::Sinc),
    ] {
        let d = schmidt_decompose(&design_jsa(shape)?, DEFAULT_TOL)?;
        let ensemble = reduced_ensemble(&d, Side::First);
        let double_sum = MixedEngine::new(&ensemble, &ensemble)?.probability(0.0)?;
        let from_purity = 0.5 - 0.5 * d.purity();
        let agree = (double_sum - from_purity).abs() < 1e-5;
        let floor_ok = match name {
            "f_gauss" => double_sum.abs() < 1e-4,
            _ => double_sum > 0.0,
        };
        pass &= agree && floor_ok;
        parts.push(format!("{name} floor {double_sum:.8} vs {from_purity:.8}"));
    }
    Ok((pass, parts.join(", ")))
}

struct ScenarioRun {
    name: String,
    summary: RunSummary,
}

fn run_bundled(
    n_points: impl Fn(&RunSummary) -> Option<usize>,
    base: &[ScenarioRun],
) -> Result<Vec<ScenarioRun>, Box<dyn Error>> {
    let mut out = Vec::new();
    for (k, path) in bundled_scenarios().iter().enumerate() {
        let scenario = load_scenario(path)?;
        let mut options = RunOptions::new(path.parent().unwrap_or(Path::new(".")));
        if let Some(previous) = base.get(k) {
            options.n_points = n_points(&previous.summary);
        }
        let name = path
            .file_stem()
            .unwrap_or_default()
            .to_string_lossy()
            .into_owned();
        out.push(ScenarioRun {
            name,
            summary: compute(&scenario, &options)?,
        });
    }
    Ok(out)
}

fn grid_points(summary: &RunSummary) -> Option<usize> {
    let p = &summary.parameters;
    p.get("grid")
        .or_else(|| p.get("grid_detuning"))
        .and_then(|g| g.get("n_points"))
        .and_then(|n| n.as_u64())
        .map(|n| n as usize)
}

fn property_suite() -> Outcome {
    let mut rng = StdRng::seed_from_u64(7);
    let mut unitarity: f64 = 0.0;
    for _ in 0..100 {
        let eta: f64 = rng.random_range(0.0..=1.0);
        for tags in [("H", "H"), ("H", "V")] {
            let out = apply_beamsplitter(&input_state(tags.0, tags.1), eta)?;
            unitarity = unitarity.max((out.norm_squared() - 1.0).abs());
        }
    }

    let runs = run_bundled(|_| None, &[])?;
    let mut asymmetry: f64 = 0.0;
    let mut out_of_range = Vec::new();
    for r in &runs {
        let values: Vec<f64> = match &r.summary.curve {
            Some(c) => {
                asymmetry = asymmetry.max(max_asymmetry(c));
                c.probabilities.clone()
            }
            None => r.summary.p.into_iter().collect(),
        };
        let (lo, hi) = values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &p| {
                (l.min(p), h.max(p))
            });
        if lo < -RANGE_TOL || hi > 0.5 + RANGE_TOL {
            out_of_range.push(format!("{} [{lo:.3e}, {hi:.7}]", r.name));
        }
    }

    let refined = run_bundled(|s| grid_points(s).map(|n| 2 * n), &runs)?;
    let mut refinement: f64 = 0.0;
    for (coarse, fine) in runs.iter().zip(&refined) {
        if let (Some(a), Some(b)) = (&coarse.summary.curve, &fine.summary.curve) {
            refinement = refinement.max(max_curve_difference(a, b));
        }
    }

    let range_ok = out_of_range.is_empty();
    let pass = unitarity <= 1e-12 && asymmetry < 1e-8 && range_ok && refinement < 1e-3;
    let range = if range_ok {
        "all in range".to_string()
    } else {
        format!("out of range: {}", out_of_range.join(", "))
    };
    Ok((
        pass,
        format!(
            "unitarity {unitarity:.1e}, asymmetry {asymmetry:.1e}, refinement {refinement:.1e}, {range} ({} scenarios)",
            runs.len()
        ),
    ))
}

fn cli_determinism() -> Outcome {
    let dir = tempfile::tempdir()?;
    let mut differing = Vec::new();
    let scenarios = bundled_scenarios();
    for path in &scenarios {
        let scenario = load_scenario(path)?;
        let name = path
            .file_stem()
            .unwrap_or_default()
            .to_string_lossy()
            .into_owned();
        let mut options = RunOptions::new(path.parent().unwrap_or(Path::new(".")));
        options.plot = false;
        let first = dir.path().join(format!("{name}-1"));
        let second = dir.path().join(format!("{name}-2"));
        run(&scenario, &first, &options)?;
        run(&scenario, &second, &options)?;
        let mut files = vec!["summary.json"];
        if !matches!(scenario.body, Body::Fock(_)) {
            files.push("dip.csv");
        }
        for file in files {
            if fs::read(first.join(file))? != fs::read(second.join(file))? {
                differing.push(format!("{name}/{file}"));
            }
        }
    }
    let detail = if differing.is_empty() {
        format!("{} scenarios byte-identical", scenarios.len())
    } else {
        format!("differing: {}", differing.join(", "))
    };
    Ok((differing.is_empty(), detail))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("polarization cases", polarization_cases),
        ("Gaussian dip oracle", gaussian_oracle),
        ("sinc dip oracle", sinc_oracle),
        ("separable SPDC design point", separable_design_point),
        ("entangled-engine consistency", engine_consistency),
        ("CW dips", cw_oracles),
        ("visibility-purity identity", visibility_purity),
        ("independent-source dip floor", independent_floor),
        ("property suite", property_suite),
        ("CLI determinism", cli_determinism),
    ];
    let mut failures = 0;
    for (k, (name, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = match panic::catch_unwind(check) {
            Ok(Ok(result)) => result,
            Ok(Err(e)) => (false, format!("error: {e}")),
            Err(_) => (false, "panicked".to_string()),
        };
        if !pass {
            failures += 1;
        }
        println!(
            "criterion {:>2} {}: {name}: {detail} [{:.2?}]",
            k + 1,
            if pass { "PASS" } else { "FAIL" },
            start.elapsed()
        );
    }
    println!("acceptance: {} passed, {failures} failed", 10 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
