//! Turns a parsed scenario into an engine, sweeps it and writes the results.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use homdip_core::freqgrid::DEFAULT_POINTS;
use homdip_core::hom::{
    dip_curve, visibility, Bound, CwEngine, DipCurve, DipScenario, EntangledEngine, MixedEngine,
    SchmidtEngine, SeparableEngine, RANGE_TOL,
};
use homdip_core::jsa::{
    abc_from_dispersion, build_cw_marginal, build_jsa, default_cw_grid, PhaseMatching,
    PhaseMatchingShape, PumpEnvelope, JSA_HALF_WINDOW, JSA_POINTS,
};
use homdip_core::schmidt::{reduced_ensemble, schmidt_decompose, SchmidtDecomposition, Side};
use homdip_core::spectra::{
    covering_grid, gaussian_dip_closed_form, parse_tabulated, sinc_dip_closed_form,
};
use homdip_core::{
    apply_beamsplitter, coincidence_probability, input_state, FockState, FrequencyGrid,
    SpectralAmplitude,
};
use serde_json::{json, Map, Value};

use crate::error::{CliError, ScenarioError};
use crate::scenario::{
    Body, Coefficients, EngineChoice, FockSpec, GridSpec, PhotonSpec, PmShape, Scenario, SourceSpec,
};
use crate::svg::{render_svg, Overlay};

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Directory against which tabulated-spectrum paths are resolved.
    pub base_dir: PathBuf,
    pub n_points: Option<usize>,
    pub n_tau: Option<usize>,
    pub plot: bool,
}

impl RunOptions {
    pub fn new(base_dir: impl Into<PathBuf>) -> Self {
        Self {
            base_dir: base_dir.into(),
            n_points: None,
            n_tau: None,
            plot: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub kind: &'static str,
    pub curve: Option<DipCurve>,
    /// Single-point result of a Fock scenario.
    pub p: Option<f64>,
    pub p_min: Option<f64>,
    pub p_max: Option<f64>,
    pub visibility: Option<f64>,
    pub purity: Option<f64>,
    pub purity_2: Option<f64>,
    pub schmidt_coefficients: Option<Vec<f64>>,
    pub warnings: Vec<String>,
    /// Parameters after defaults and automatic grids are resolved.
    pub parameters: Value,
    pub wall_time: Duration,
    /// Output state of a Fock scenario.
    pub fock_state: Option<String>,
}

impl RunSummary {
    /// The `summary.json` document. Wall time is left out so repeated runs
    /// are byte-identical.
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("kind".into(), json!(self.kind));
        if let Some(p) = self.p {
            m.insert("p".into(), json!(p));
        }
        if let Some(s) = &self.fock_state {
            m.insert("output_state".into(), json!(s));
        }
        for (key, v) in [
            ("p_min", self.p_min),
            ("p_max", self.p_max),
            ("visibility", self.visibility),
            ("purity", self.purity),
            ("purity_2", self.purity_2),
        ] {
            if let Some(v) = v {
                m.insert(key.into(), json!(v));
            }
        }
        if let Some(c) = &self.schmidt_coefficients {
            m.insert("schmidt_coefficients".into(), json!(c));
        }
        m.insert("parameters".into(), self.parameters.clone());
        m.insert("warnings".into(), json!(self.warnings));
        Value::Object(m)
    }
}

/// Everything needed to sweep one scenario.
pub struct Prepared {
    pub engine: DipScenario,
    pub overlay: Option<Overlay>,
    pub purity: Option<f64>,
    pub purity_2: Option<f64>,
    pub schmidt_coefficients: Option<Vec<f64>>,
    pub parameters: Value,
}

fn shape_of(src: &SourceSpec) -> PhaseMatchingShape {
    match src.phase_matching {
        PmShape::Sinc => PhaseMatchingShape::Sinc,
        PmShape::Gaussian => PhaseMatchingShape::Gaussian { gamma: src.gamma },
    }
}

pub fn phase_matching(src: &SourceSpec) -> Result<PhaseMatching, CliError> {
    let shape = shape_of(src);
    let pm = match src.coefficients {
        Coefficients::Design => {
            let a = 1.0 / (src.sigma * (2.0 * src.gamma).sqrt());
            PhaseMatching::new(shape, a, -a, 0.0)
        }
        Coefficients::Explicit { a, b, c } => PhaseMatching::new(shape, a, b, c),
        Coefficients::Dispersion(d) => {
            abc_from_dispersion(&d).and_then(|(a, b, c)| PhaseMatching::new(shape, a, b, c))
        }
    };
    pm.map_err(CliError::engine("phase matching"))
}

fn pm_json(pm: &PhaseMatching, src: &SourceSpec) -> Value {
    json!({
        "phase_matching": match src.phase_matching { PmShape::Sinc => "sinc", PmShape::Gaussian => "gaussian" },
        "gamma": src.gamma,
        "a_s": pm.a(),
        "b_s": pm.b(),
        "c": pm.c(),
        "center_rad_s": src.center,
        "sigma_rad_s": src.sigma,
    })
}

fn grid_json(g: &FrequencyGrid) -> Value {
    json!({ "omega_min": g.omega_min(), "omega_max": g.omega_max(), "n_points": g.len() })
}

fn photon_amplitude(p: &PhotonSpec, base: &Path) -> Result<SpectralAmplitude, CliError> {
    match p {
        PhotonSpec::Gaussian { center, sigma } => {
            SpectralAmplitude::gaussian(*center, *sigma).map_err(CliError::engine("photon"))
        }
        PhotonSpec::Sinc { center, scale } => {
            SpectralAmplitude::sinc(*center, *scale).map_err(CliError::engine("photon"))
        }
        PhotonSpec::Tabulated { file } => {
            let path = base.join(file);
            let text = fs::read_to_string(&path).map_err(CliError::io(&path))?;
            let samples =
                parse_tabulated(&text).map_err(CliError::engine(path.display().to_string()))?;
            SpectralAmplitude::tabulated(samples)
                .map_err(CliError::engine(path.display().to_string()))
        }
    }
}

fn photon_json(p: &PhotonSpec) -> Value {
    match p {
        PhotonSpec::Gaussian { center, sigma } => {
            json!({"shape": "gaussian", "center_rad_s": center, "sigma_rad_s": sigma})
        }
        PhotonSpec::Sinc { center, scale } => {
            json!({"shape": "sinc", "center_rad_s": center, "scale_s": scale})
        }
        PhotonSpec::Tabulated { file } => json!({"shape": "tabulated", "file": file}),
    }
}

fn explicit_grid(
    spec: &GridSpec,
    n_points: Option<usize>,
    default_n: usize,
) -> Option<Result<FrequencyGrid, CliError>> {
    let (lo, hi) = (spec.omega_min?, spec.omega_max?);
    let n = n_points.or(spec.n_points).unwrap_or(default_n);
    Some(FrequencyGrid::new(lo, hi, n).map_err(CliError::engine("grid")))
}

/// Pulsed JSA grid covering every pump in `sources`.
fn pulsed_grid(
    sources: &[&SourceSpec],
    spec: &GridSpec,
    n_points: Option<usize>,
) -> Result<FrequencyGrid, CliError> {
    if let Some(g) = explicit_grid(spec, n_points, JSA_POINTS) {
        return g;
    }
    let lo = sources
        .iter()
        .map(|s| s.center - JSA_HALF_WINDOW * s.sigma)
        .fold(f64::INFINITY, f64::min);
    let hi = sources
        .iter()
        .map(|s| s.center + JSA_HALF_WINDOW * s.sigma)
        .fold(f64::NEG_INFINITY, f64::max);
    let n = n_points.or(spec.n_points).unwrap_or(JSA_POINTS);
    FrequencyGrid::new(lo, hi, n).map_err(CliError::engine("grid"))
}

fn decompose(
    src: &SourceSpec,
    grid: &FrequencyGrid,
) -> Result<
    (
        PhaseMatching,
        SchmidtDecomposition,
        homdip_core::JointSpectralAmplitude,
    ),
    CliError,
> {
    let pm = phase_matching(src)?;
    let pump = PumpEnvelope::pulsed(src.center, src.sigma).map_err(CliError::engine("pump"))?;
    let jsa = build_jsa(&pm, &pump, grid, grid).map_err(CliError::engine("joint spectrum"))?;
    let d = schmidt_decompose(&jsa, src.schmidt_tol)
        .map_err(CliError::engine("Schmidt decomposition"))?;
    Ok((pm, d, jsa))
}

fn is_design(pm: &PhaseMatching) -> bool {
    pm.b() == -pm.a() && pm.c() == 0.0
}

/// Builds the engine and the resolved parameters for a sweep scenario.
pub fn prepare(scenario: &Scenario, options: &RunOptions) -> Result<Prepared, CliError> {
    let n_points = options.n_points;
    let grid_spec = &scenario.grid;
    match &scenario.body {
        Body::Fock(_) => Err(ScenarioError::general("fock scenarios have no sweep").into()),
        Body::Separable { photon_a, photon_b } => {
            let a = photon_amplitude(photon_a, &options.base_dir)?;
            let b = photon_amplitude(photon_b, &options.base_dir)?;
            let grid = match explicit_grid(grid_spec, n_points, DEFAULT_POINTS) {
                Some(g) => g?,
                None => covering_grid(&[&a, &b], n_points.or(grid_spec.n_points))
                    .map_err(CliError::engine("grid"))?,
            };
            let engine = SeparableEngine::new(&a, &b, &grid)
                .map_err(CliError::engine("separable photons"))?;
            let overlay = match (photon_a, photon_b) {
                (
                    PhotonSpec::Gaussian {
                        center: ca,
                        sigma: sa,
                    },
                    PhotonSpec::Gaussian {
                        center: cb,
                        sigma: sb,
                    },
                ) => {
                    let (ca, sa, cb, sb) = (*ca, *sa, *cb, *sb);
                    Some(Overlay::new("Gaussian closed form", move |t| {
                        gaussian_dip_closed_form(sa, sb, ca, cb, t)
                    }))
                }
                (
                    PhotonSpec::Sinc {
                        center: ca,
                        scale: sa,
                    },
                    PhotonSpec::Sinc {
                        center: cb,
                        scale: sb,
                    },
                ) if ca == cb && sa == sb => {
                    let a = *sa;
                    Some(Overlay::new("sinc closed form", move |t| {
                        sinc_dip_closed_form(a, t)
                    }))
                }
                _ => None,
            };
            Ok(Prepared {
                engine: DipScenario::Separable(engine),
                overlay,
                purity: None,
                purity_2: None,
                schmidt_coefficients: None,
                parameters: json!({
                    "photon_a": photon_json(photon_a),
                    "photon_b": photon_json(photon_b),
                    "grid": grid_json(&grid),
                }),
            })
        }
        Body::EntangledPulsed(src) => {
            let grid = pulsed_grid(&[src], grid_spec, n_points)?;
            let (pm, d, jsa) = decompose(src, &grid)?;
            let engine = match src.engine {
                EngineChoice::Direct => DipScenario::Entangled(
                    EntangledEngine::new(&jsa).map_err(CliError::engine("joint spectrum"))?,
                ),
                EngineChoice::Schmidt => DipScenario::Schmidt(
                    SchmidtEngine::new(&d).map_err(CliError::engine("Schmidt decomposition"))?,
                ),
            };
            let overlay = (src.phase_matching == PmShape::Gaussian
                && is_design(&pm)
                && (src.gamma * 2.0 * pm.a() * pm.a() * src.sigma * src.sigma - 1.0).abs() < 1e-12)
                .then(|| {
                    // The design point factorizes into two Gaussians of width σ/√2.
                    let s = src.sigma / 2f64.sqrt();
                    Overlay::new("separable Gaussian closed form", move |t| {
                        gaussian_dip_closed_form(s, s, 0.0, 0.0, t)
                    })
                });
            Ok(Prepared {
                engine,
                overlay,
                purity: Some(d.purity()),
                purity_2: None,
                schmidt_coefficients: Some(d.coefficients().to_vec()),
                parameters: json!({
                    "source": pm_json(&pm, src),
                    "engine": match src.engine { EngineChoice::Direct => "direct", EngineChoice::Schmidt => "schmidt" },
                    "schmidt_tol": src.schmidt_tol,
                    "schmidt_rank": d.rank(),
                    "schmidt_discarded_weight": d.discarded_weight(),
                    "grid": grid_json(&grid),
                }),
            })
        }
        Body::EntangledCw(src) => {
            let pm = phase_matching(src)?;
            let grid = match grid_spec.half_width {
                Some(h) => {
                    let n = n_points
                        .or(grid_spec.n_points)
                        .unwrap_or(homdip_core::jsa::CW_GAUSSIAN_POINTS);
                    FrequencyGrid::new(-h, h, n)
                }
                None => default_cw_grid(&pm, src.center).and_then(|g| {
                    match n_points.or(grid_spec.n_points) {
                        Some(n) => FrequencyGrid::new(g.omega_min(), g.omega_max(), n),
                        None => Ok(g),
                    }
                }),
            }
            .map_err(CliError::engine("grid"))?;
            let marginal = build_cw_marginal(&pm, src.center, &grid)
                .map_err(CliError::engine("CW marginal"))?;
            let engine = CwEngine::new(&marginal).map_err(CliError::engine("CW marginal"))?;
            let overlay = is_design(&pm).then(|| {
                let a = pm.a();
                match src.phase_matching {
                    PmShape::Sinc => Overlay::new("triangular closed form", move |t: f64| {
                        0.5 - 0.5 * (1.0 - t.abs() / (2.0 * a.abs())).max(0.0)
                    }),
                    PmShape::Gaussian => {
                        let g = src.gamma;
                        Overlay::new("Gaussian closed form", move |t: f64| {
                            0.5 - 0.5 * (-t * t / (8.0 * g * a * a)).exp()
                        })
                    }
                }
            });
            Ok(Prepared {
                engine: DipScenario::Cw(engine),
                overlay,
                purity: None,
                purity_2: None,
                schmidt_coefficients: None,
                parameters: json!({
                    "source": pm_json(&pm, src),
                    "grid_detuning": grid_json(&grid),
                }),
            })
        }
        Body::MixedIndependent { source, source_2 } => {
            let grid = pulsed_grid(&[source, source_2], grid_spec, n_points)?;
            let (pm1, d1, _) = decompose(source, &grid)?;
            let (pm2, d2) = if source_2 == source {
                (pm1, d1.clone())
            } else {
                let (pm, d, _) = decompose(source_2, &grid)?;
                (pm, d)
            };
            let e1 = reduced_ensemble(&d1, Side::First);
            let e2 = reduced_ensemble(&d2, Side::First);
            let engine = MixedEngine::new(&e1, &e2).map_err(CliError::engine("mixed photons"))?;
            Ok(Prepared {
                engine: DipScenario::Mixed(engine),
                overlay: None,
                purity: Some(d1.purity()),
                purity_2: Some(d2.purity()),
                schmidt_coefficients: Some(d1.coefficients().to_vec()),
                parameters: json!({
                    "source": pm_json(&pm1, source),
                    "source_2": pm_json(&pm2, source_2),
                    "schmidt_rank": d1.rank(),
                    "schmidt_rank_2": d2.rank(),
                    "grid": grid_json(&grid),
                }),
            })
        }
    }
}

/// Output state and coincidence probability of a Fock scenario.
pub fn run_fock(spec: &FockSpec) -> Result<(FockState, f64), CliError> {
    let out = apply_beamsplitter(&input_state(&spec.tag_a, &spec.tag_b), spec.eta)
        .map_err(CliError::engine("beam splitter"))?;
    let p = coincidence_probability(&out).map_err(CliError::engine("beam splitter"))?;
    Ok((out, p))
}

/// Computes the scenario without touching the filesystem (except to read
/// tabulated spectra).
pub fn compute(scenario: &Scenario, options: &RunOptions) -> Result<RunSummary, CliError> {
    compute_with_overlay(scenario, options).map(|(s, _)| s)
}

fn compute_with_overlay(
    scenario: &Scenario,
    options: &RunOptions,
) -> Result<(RunSummary, Option<Overlay>), CliError> {
    let start = Instant::now();
    let kind = scenario.kind().as_str();
    if let Body::Fock(spec) = &scenario.body {
        let (state, p) = run_fock(spec)?;
        let summary = RunSummary {
            kind,
            curve: None,
            p: Some(p),
            p_min: None,
            p_max: None,
            visibility: None,
            purity: None,
            purity_2: None,
            schmidt_coefficients: None,
            warnings: Vec::new(),
            parameters: json!({"eta": spec.eta, "tag_a": spec.tag_a, "tag_b": spec.tag_b}),
            wall_time: start.elapsed(),
            fock_state: Some(state.to_string()),
        };
        return Ok((summary, None));
    }

    let prepared = prepare(scenario, options)?;
    let sweep = scenario.sweep;
    let n_tau = options.n_tau.unwrap_or(sweep.n_tau);
    let curve = dip_curve(&prepared.engine, sweep.tau_min, sweep.tau_max, n_tau)
        .map_err(CliError::engine(format!("{kind} sweep")))?;
    let vis = visibility(&curve).map_err(CliError::engine("visibility"))?;

    let mut warnings = Vec::new();
    warnings.extend(vis.warning.clone());
    if prepared.engine.bound() == Bound::One {
        let (i, p) = curve
            .probabilities
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
        if p > 0.5 + RANGE_TOL {
            warnings.push(format!(
                "p exceeds 1/2 by {:.3e} at tau = {:.6e} s; for symmetric spectra this is \
                 truncation of the joint spectrum by the finite grid",
                p - 0.5,
                curve.taus[i]
            ));
        }
    }

    let mut parameters = prepared.parameters;
    if let Value::Object(m) = &mut parameters {
        m.insert(
            "sweep".into(),
            json!({"tau_min_s": sweep.tau_min, "tau_max_s": sweep.tau_max, "n_tau": n_tau}),
        );
    }
    let summary = RunSummary {
        kind,
        p: None,
        p_min: Some(vis.p_min),
        p_max: Some(vis.p_max),
        visibility: Some(vis.value),
        purity: prepared.purity,
        purity_2: prepared.purity_2,
        schmidt_coefficients: prepared.schmidt_coefficients,
        warnings,
        parameters,
        wall_time: start.elapsed(),
        fock_state: None,
        curve: Some(curve),
    };
    Ok((summary, prepared.overlay))
}

/// `tau_s,p` with 17 significant digits per value.
pub fn curve_csv(curve: &DipCurve) -> String {
    let mut out = String::from("tau_s,p\n");
    for (t, p) in curve.taus.iter().zip(&curve.probabilities) {
        out.push_str(&format!("{t:.16e},{p:.16e}\n"));
    }
    out
}

/// Runs the scenario and writes `dip.csv`, `summary.json` and `dip.svg`.
/// All files are written after the computation finishes.
pub fn run(
    scenario: &Scenario,
    out_dir: &Path,
    options: &RunOptions,
) -> Result<RunSummary, CliError> {
    let (summary, overlay) = compute_with_overlay(scenario, options)?;
    fs::create_dir_all(out_dir).map_err(CliError::io(out_dir))?;
    let write = |name: &str, text: String| {
        let path = out_dir.join(name);
        fs::write(&path, text).map_err(CliError::io(&path))
    };
    if let Some(curve) = &summary.curve {
        write("dip.csv", curve_csv(curve))?;
        if options.plot {
            write(
                "dip.svg",
                render_svg(curve, overlay.as_ref(), scenario.kind().as_str()),
            )?;
        }
    }
    let mut json = serde_json::to_string_pretty(&summary.to_json()).expect("summary serializes");
    json.push('\n');
    write("summary.json", json)?;
    Ok(summary)
}
