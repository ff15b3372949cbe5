//! Scenario documents: `key = value` lines, `#` comments and `[section]`
//! headers. `kind` comes first; each kind admits a fixed set of sections and
//! every key is checked, so a typo is an error rather than a silent default.
//!
//! ```text
//! kind = entangled_pulsed
//!
//! [source]
//! phase_matching = sinc
//! sigma = 1e12
//!
//! [sweep]
//! tau_min = -1e-11
//! tau_max = 1e-11
//! n_tau = 201
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use homdip_core::jsa::{DispersionParams, DEFAULT_GAMMA};
use homdip_core::schmidt::DEFAULT_TOL;

use crate::error::ScenarioError;

pub const DEFAULT_CENTER: f64 = 1e15;
pub const DEFAULT_SIGMA: f64 = 1e12;
pub const DEFAULT_TAU_MIN: f64 = -1e-11;
pub const DEFAULT_TAU_MAX: f64 = 1e-11;
pub const DEFAULT_N_TAU: usize = 201;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Fock,
    Separable,
    EntangledPulsed,
    EntangledCw,
    MixedIndependent,
}

impl Kind {
    pub const ALL: [Kind; 5] = [
        Kind::Fock,
        Kind::Separable,
        Kind::EntangledPulsed,
        Kind::EntangledCw,
        Kind::MixedIndependent,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Fock => "fock",
            Kind::Separable => "separable",
            Kind::EntangledPulsed => "entangled_pulsed",
            Kind::EntangledCw => "entangled_cw",
            Kind::MixedIndependent => "mixed_independent",
        }
    }

    fn sections(self) -> &'static [&'static str] {
        match self {
            Kind::Fock => &["fock"],
            Kind::Separable => &["sweep", "grid", "photon_a", "photon_b"],
            Kind::EntangledPulsed | Kind::EntangledCw => &["sweep", "grid", "source", "dispersion"],
            Kind::MixedIndependent => &["sweep", "grid", "source", "source_2", "dispersion"],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub tau_min: f64,
    pub tau_max: f64,
    pub n_tau: usize,
}

impl Default for Sweep {
    fn default() -> Self {
        Self {
            tau_min: DEFAULT_TAU_MIN,
            tau_max: DEFAULT_TAU_MAX,
            n_tau: DEFAULT_N_TAU,
        }
    }
}

/// Optional overrides of the automatically chosen frequency grid.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GridSpec {
    pub n_points: Option<usize>,
    /// Absolute bounds; separable and pulsed kinds only.
    pub omega_min: Option<f64>,
    pub omega_max: Option<f64>,
    /// Detuning half-width; CW kind only.
    pub half_width: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PhotonSpec {
    Gaussian {
        center: f64,
        sigma: f64,
    },
    Sinc {
        center: f64,
        scale: f64,
    },
    /// Path to a two- or three-column table, relative to the scenario file.
    Tabulated {
        file: String,
    },
}

impl Default for PhotonSpec {
    fn default() -> Self {
        PhotonSpec::Gaussian {
            center: DEFAULT_CENTER,
            sigma: DEFAULT_SIGMA,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PmShape {
    Sinc,
    Gaussian,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coefficients {
    /// `A = 1/(σ√(2γ))`, `B = −A`, `C = 0`.
    Design,
    Explicit {
        a: f64,
        b: f64,
        c: f64,
    },
    /// From `[dispersion]`; `omega_bar` is the source center.
    Dispersion(DispersionParams),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineChoice {
    Direct,
    Schmidt,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SourceSpec {
    pub phase_matching: PmShape,
    pub gamma: f64,
    pub coefficients: Coefficients,
    /// Degenerate photon frequency; the pump sits at twice this.
    pub center: f64,
    /// Pump bandwidth when pulsed; reference width of the design point.
    pub sigma: f64,
    pub engine: EngineChoice,
    pub schmidt_tol: f64,
}

impl Default for SourceSpec {
    fn default() -> Self {
        Self {
            phase_matching: PmShape::Sinc,
            gamma: DEFAULT_GAMMA,
            coefficients: Coefficients::Design,
            center: DEFAULT_CENTER,
            sigma: DEFAULT_SIGMA,
            engine: EngineChoice::Direct,
            schmidt_tol: DEFAULT_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FockSpec {
    pub eta: f64,
    pub tag_a: String,
    pub tag_b: String,
}

impl Default for FockSpec {
    fn default() -> Self {
        Self {
            eta: 0.5,
            tag_a: "H".into(),
            tag_b: "H".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Body {
    Fock(FockSpec),
    Separable {
        photon_a: PhotonSpec,
        photon_b: PhotonSpec,
    },
    EntangledPulsed(SourceSpec),
    EntangledCw(SourceSpec),
    MixedIndependent {
        source: SourceSpec,
        source_2: SourceSpec,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub body: Body,
    pub sweep: Sweep,
    pub grid: GridSpec,
}

impl Scenario {
    pub fn kind(&self) -> Kind {
        match self.body {
            Body::Fock(_) => Kind::Fock,
            Body::Separable { .. } => Kind::Separable,
            Body::EntangledPulsed(_) => Kind::EntangledPulsed,
            Body::EntangledCw(_) => Kind::EntangledCw,
            Body::MixedIndependent { .. } => Kind::MixedIndependent,
        }
    }
}

struct Entry {
    line: usize,
    value: String,
}

/// Keys of one section, consumed as they are read.
struct Section {
    name: String,
    line: usize,
    entries: BTreeMap<String, Entry>,
}

impl Section {
    fn empty(name: &str) -> Self {
        Self {
            name: name.to_string(),
            line: 0,
            entries: BTreeMap::new(),
        }
    }

    fn take_raw(&mut self, key: &str) -> Option<Entry> {
        self.entries.remove(key)
    }

    fn take<T>(
        &mut self,
        key: &str,
        parse: impl Fn(&str) -> Result<T, String>,
    ) -> Result<Option<T>, ScenarioError> {
        match self.take_raw(key) {
            None => Ok(None),
            Some(e) => parse(&e.value)
                .map(Some)
                .map_err(|m| ScenarioError::at(e.line, format!("[{}] `{key}`: {m}", self.name))),
        }
    }

    fn f64(&mut self, key: &str) -> Result<Option<f64>, ScenarioError> {
        self.take(key, parse_f64)
    }

    fn positive(&mut self, key: &str) -> Result<Option<f64>, ScenarioError> {
        self.take(key, |s| {
            let v = parse_f64(s)?;
            if v > 0.0 {
                Ok(v)
            } else {
                Err(format!("must be positive, got {v}"))
            }
        })
    }

    fn count(&mut self, key: &str, min: usize) -> Result<Option<usize>, ScenarioError> {
        self.take(key, |s| {
            let v: usize = s
                .parse()
                .map_err(|_| format!("expected a non-negative integer, got `{s}`"))?;
            if v >= min {
                Ok(v)
            } else {
                Err(format!("must be at least {min}, got {v}"))
            }
        })
    }

    fn required_f64(&mut self, key: &str) -> Result<f64, ScenarioError> {
        self.f64(key)?.ok_or_else(|| self.missing(key))
    }

    fn missing(&self, key: &str) -> ScenarioError {
        let message = format!("[{}] is missing required key `{key}`", self.name);
        if self.line > 0 {
            ScenarioError::at(self.line, message)
        } else {
            ScenarioError::general(message)
        }
    }

    fn finish(self) -> Result<(), ScenarioError> {
        match self.entries.into_iter().min_by_key(|(_, e)| e.line) {
            None => Ok(()),
            Some((key, e)) => Err(ScenarioError::at(
                e.line,
                format!("unknown key `{key}` in [{}]", self.name),
            )),
        }
    }
}

fn parse_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s
        .parse()
        .map_err(|_| format!("expected a number, got `{s}`"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("must be finite, got `{s}`"))
    }
}

struct Document {
    top: Section,
    sections: Vec<Section>,
}

fn tokenize(text: &str) -> Result<Document, ScenarioError> {
    let mut top = Section::empty("top level");
    let mut sections: Vec<Section> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| ScenarioError::at(line, "section header must end with `]`"))?
                .trim();
            if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(ScenarioError::at(
                    line,
                    format!("bad section name `{name}`"),
                ));
            }
            if let Some(prev) = sections.iter().find(|s| s.name == name) {
                return Err(ScenarioError::at(
                    line,
                    format!("section [{name}] repeats the one on line {}", prev.line),
                ));
            }
            sections.push(Section {
                name: name.to_string(),
                line,
                entries: BTreeMap::new(),
            });
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| {
            ScenarioError::at(line, format!("expected `key = value`, got `{content}`"))
        })?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() {
            return Err(ScenarioError::at(line, "missing key before `=`"));
        }
        if value.is_empty() {
            return Err(ScenarioError::at(
                line,
                format!("missing value for `{key}`"),
            ));
        }
        let section = sections.last_mut().unwrap_or(&mut top);
        if let Some(prev) = section.entries.get(key) {
            return Err(ScenarioError::at(
                line,
                format!("`{key}` repeats the one on line {}", prev.line),
            ));
        }
        section.entries.insert(
            key.to_string(),
            Entry {
                line,
                value: value.to_string(),
            },
        );
    }
    Ok(Document { top, sections })
}

pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let Document { mut top, sections } = tokenize(text)?;
    let kind_entry = top
        .take_raw("kind")
        .ok_or_else(|| ScenarioError::general("missing `kind` at the top of the document"))?;
    let kind = Kind::ALL
        .into_iter()
        .find(|k| k.as_str() == kind_entry.value)
        .ok_or_else(|| {
            let names: Vec<_> = Kind::ALL.iter().map(|k| k.as_str()).collect();
            ScenarioError::at(
                kind_entry.line,
                format!(
                    "unknown kind `{}`; expected one of {}",
                    kind_entry.value,
                    names.join(", ")
                ),
            )
        })?;
    top.finish()?;

    let mut by_name: BTreeMap<String, Section> = BTreeMap::new();
    for s in sections {
        if !kind.sections().contains(&s.name.as_str()) {
            return Err(ScenarioError::at(
                s.line,
                format!(
                    "section [{}] is not allowed for kind `{}` (allowed: {})",
                    s.name,
                    kind.as_str(),
                    kind.sections().join(", ")
                ),
            ));
        }
        by_name.insert(s.name.clone(), s);
    }
    let mut section = |name: &str| by_name.remove(name);

    let sweep = parse_sweep(section("sweep"))?;
    let grid = parse_grid(section("grid"), kind)?;
    let body = match kind {
        Kind::Fock => Body::Fock(parse_fock(section("fock"))?),
        Kind::Separable => Body::Separable {
            photon_a: parse_photon(section("photon_a"), "photon_a")?,
            photon_b: parse_photon(section("photon_b"), "photon_b")?,
        },
        Kind::EntangledPulsed | Kind::EntangledCw | Kind::MixedIndependent => {
            let dispersion = section("dispersion");
            let source = parse_source(section("source"), "source", dispersion)?;
            match kind {
                Kind::EntangledPulsed => Body::EntangledPulsed(source),
                Kind::EntangledCw => Body::EntangledCw(source),
                _ => {
                    let source_2 = match section("source_2") {
                        Some(s) => parse_source(Some(s), "source_2", None)?,
                        None => source.clone(),
                    };
                    Body::MixedIndependent { source, source_2 }
                }
            }
        }
    };
    Ok(Scenario { body, sweep, grid })
}

fn parse_sweep(section: Option<Section>) -> Result<Sweep, ScenarioError> {
    let Some(mut s) = section else {
        return Ok(Sweep::default());
    };
    let d = Sweep::default();
    let sweep = Sweep {
        tau_min: s.f64("tau_min")?.unwrap_or(d.tau_min),
        tau_max: s.f64("tau_max")?.unwrap_or(d.tau_max),
        n_tau: s.count("n_tau", 2)?.unwrap_or(d.n_tau),
    };
    let line = s.line;
    s.finish()?;
    if sweep.tau_min >= sweep.tau_max {
        return Err(ScenarioError::at(line, "[sweep] needs tau_min < tau_max"));
    }
    Ok(sweep)
}

fn parse_grid(section: Option<Section>, kind: Kind) -> Result<GridSpec, ScenarioError> {
    let Some(mut s) = section else {
        return Ok(GridSpec::default());
    };
    let mut grid = GridSpec {
        n_points: s.count("n_points", 3)?,
        ..GridSpec::default()
    };
    if kind == Kind::EntangledCw {
        grid.half_width = s.positive("half_width")?;
    } else {
        grid.omega_min = s.f64("omega_min")?;
        grid.omega_max = s.f64("omega_max")?;
        match (grid.omega_min, grid.omega_max) {
            (Some(lo), Some(hi)) if lo >= hi => {
                return Err(ScenarioError::at(
                    s.line,
                    "[grid] needs omega_min < omega_max",
                ))
            }
            (Some(_), None) | (None, Some(_)) => {
                return Err(ScenarioError::at(
                    s.line,
                    "[grid] needs both omega_min and omega_max or neither",
                ))
            }
            _ => {}
        }
    }
    s.finish()?;
    Ok(grid)
}

fn parse_fock(section: Option<Section>) -> Result<FockSpec, ScenarioError> {
    let Some(mut s) = section else {
        return Ok(FockSpec::default());
    };
    let d = FockSpec::default();
    let spec = FockSpec {
        eta: s
            .take("eta", |v| {
                let eta = parse_f64(v)?;
                if (0.0..=1.0).contains(&eta) {
                    Ok(eta)
                } else {
                    Err(format!("must lie in [0, 1], got {eta}"))
                }
            })?
            .unwrap_or(d.eta),
        tag_a: s.take("tag_a", parse_tag)?.unwrap_or(d.tag_a),
        tag_b: s.take("tag_b", parse_tag)?.unwrap_or(d.tag_b),
    };
    s.finish()?;
    Ok(spec)
}

fn parse_tag(s: &str) -> Result<String, String> {
    if s.chars().any(|c| c.is_whitespace() || c == ',') {
        Err(format!(
            "tags may not contain whitespace or commas, got `{s}`"
        ))
    } else {
        Ok(s.to_string())
    }
}

fn parse_photon(section: Option<Section>, name: &str) -> Result<PhotonSpec, ScenarioError> {
    let mut s = section.unwrap_or_else(|| Section::empty(name));
    let shape = s
        .take("shape", |v| match v {
            "gaussian" | "sinc" | "tabulated" => Ok(v.to_string()),
            _ => Err(format!("expected gaussian, sinc or tabulated, got `{v}`")),
        })?
        .unwrap_or_else(|| "gaussian".into());
    let spec = match shape.as_str() {
        "gaussian" => PhotonSpec::Gaussian {
            center: s.f64("center")?.unwrap_or(DEFAULT_CENTER),
            sigma: s.positive("sigma")?.unwrap_or(DEFAULT_SIGMA),
        },
        "sinc" => PhotonSpec::Sinc {
            center: s.f64("center")?.unwrap_or(DEFAULT_CENTER),
            scale: s
                .positive("scale")?
                .unwrap_or(1.0 / (DEFAULT_SIGMA * (2.0 * DEFAULT_GAMMA).sqrt())),
        },
        _ => PhotonSpec::Tabulated {
            file: s
                .take("file", |v| Ok::<_, String>(v.to_string()))?
                .ok_or_else(|| s.missing("file"))?,
        },
    };
    s.finish()?;
    Ok(spec)
}

fn parse_source(
    section: Option<Section>,
    name: &str,
    dispersion: Option<Section>,
) -> Result<SourceSpec, ScenarioError> {
    let mut s = section.unwrap_or_else(|| Section::empty(name));
    let d = SourceSpec::default();
    let phase_matching = s
        .take("phase_matching", |v| match v {
            "sinc" => Ok(PmShape::Sinc),
            "gaussian" => Ok(PmShape::Gaussian),
            _ => Err(format!("expected sinc or gaussian, got `{v}`")),
        })?
        .unwrap_or(d.phase_matching);
    let gamma = s.positive("gamma")?.unwrap_or(d.gamma);
    let center = s.f64("center")?.unwrap_or(d.center);
    let sigma = s.positive("sigma")?.unwrap_or(d.sigma);
    let engine = s
        .take("engine", |v| match v {
            "direct" => Ok(EngineChoice::Direct),
            "schmidt" => Ok(EngineChoice::Schmidt),
            _ => Err(format!("expected direct or schmidt, got `{v}`")),
        })?
        .unwrap_or(d.engine);
    let schmidt_tol = s
        .take("schmidt_tol", |v| {
            let t = parse_f64(v)?;
            if (0.0..=1.0).contains(&t) {
                Ok(t)
            } else {
                Err(format!("must lie in [0, 1], got {t}"))
            }
        })?
        .unwrap_or(d.schmidt_tol);

    let explicit = [s.f64("a")?, s.f64("b")?, s.f64("c")?];
    let coefficients = match (explicit, dispersion) {
        ([None, None, None], None) => Coefficients::Design,
        ([Some(a), Some(b), Some(c)], None) => Coefficients::Explicit { a, b, c },
        ([None, None, None], Some(mut ds)) => {
            let params = DispersionParams {
                length: ds.positive("length")?.ok_or_else(|| ds.missing("length"))?,
                k_p0: ds.required_f64("k_p0")?,
                k_10: ds.required_f64("k_10")?,
                k_20: ds.required_f64("k_20")?,
                kp_prime: ds.required_f64("kp_prime")?,
                k1_prime: ds.required_f64("k1_prime")?,
                k2_prime: ds.required_f64("k2_prime")?,
                omega_bar: center,
            };
            ds.finish()?;
            Coefficients::Dispersion(params)
        }
        (_, Some(ds)) => {
            return Err(ScenarioError::at(
                ds.line,
                format!("[dispersion] conflicts with explicit a, b, c in [{name}]"),
            ))
        }
        _ => return Err(s.missing_abc()),
    };
    s.finish()?;
    Ok(SourceSpec {
        phase_matching,
        gamma,
        coefficients,
        center,
        sigma,
        engine,
        schmidt_tol,
    })
}

impl Section {
    fn missing_abc(&self) -> ScenarioError {
        let message = format!("[{}] needs all of `a`, `b`, `c` or none of them", self.name);
        if self.line > 0 {
            ScenarioError::at(self.line, message)
        } else {
            ScenarioError::general(message)
        }
    }
}

/// Canonical text form with every default written out.
pub fn serialize_scenario(scenario: &Scenario) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "kind = {}", scenario.kind().as_str());
    let mut section = |name: &str, keys: Vec<(&str, String)>| {
        let _ = writeln!(out, "\n[{name}]");
        for (k, v) in keys {
            let _ = writeln!(out, "{k} = {v}");
        }
    };
    let num = |v: f64| format!("{v:e}");

    if let Body::Fock(f) = &scenario.body {
        section(
            "fock",
            vec![
                ("eta", num(f.eta)),
                ("tag_a", f.tag_a.clone()),
                ("tag_b", f.tag_b.clone()),
            ],
        );
        return out;
    }

    let s = scenario.sweep;
    section(
        "sweep",
        vec![
            ("tau_min", num(s.tau_min)),
            ("tau_max", num(s.tau_max)),
            ("n_tau", s.n_tau.to_string()),
        ],
    );
    let g = scenario.grid;
    let mut grid_keys = Vec::new();
    if let Some(n) = g.n_points {
        grid_keys.push(("n_points", n.to_string()));
    }
    if let (Some(lo), Some(hi)) = (g.omega_min, g.omega_max) {
        grid_keys.push(("omega_min", num(lo)));
        grid_keys.push(("omega_max", num(hi)));
    }
    if let Some(h) = g.half_width {
        grid_keys.push(("half_width", num(h)));
    }
    if !grid_keys.is_empty() {
        section("grid", grid_keys);
    }

    let photon = |p: &PhotonSpec| -> Vec<(&'static str, String)> {
        match p {
            PhotonSpec::Gaussian { center, sigma } => vec![
                ("shape", "gaussian".into()),
                ("center", num(*center)),
                ("sigma", num(*sigma)),
            ],
            PhotonSpec::Sinc { center, scale } => vec![
                ("shape", "sinc".into()),
                ("center", num(*center)),
                ("scale", num(*scale)),
            ],
            PhotonSpec::Tabulated { file } => {
                vec![("shape", "tabulated".into()), ("file", file.clone())]
            }
        }
    };
    let source = |src: &SourceSpec| -> Vec<(&'static str, String)> {
        let mut keys = vec![
            (
                "phase_matching",
                match src.phase_matching {
                    PmShape::Sinc => "sinc".to_string(),
                    PmShape::Gaussian => "gaussian".to_string(),
                },
            ),
            ("gamma", num(src.gamma)),
            ("center", num(src.center)),
            ("sigma", num(src.sigma)),
            (
                "engine",
                match src.engine {
                    EngineChoice::Direct => "direct".to_string(),
                    EngineChoice::Schmidt => "schmidt".to_string(),
                },
            ),
            ("schmidt_tol", num(src.schmidt_tol)),
        ];
        if let Coefficients::Explicit { a, b, c } = src.coefficients {
            keys.extend([("a", num(a)), ("b", num(b)), ("c", num(c))]);
        }
        keys
    };
    let dispersion = |src: &SourceSpec| -> Option<Vec<(&'static str, String)>> {
        match src.coefficients {
            Coefficients::Dispersion(d) => Some(vec![
                ("length", num(d.length)),
                ("k_p0", num(d.k_p0)),
                ("k_10", num(d.k_10)),
                ("k_20", num(d.k_20)),
                ("kp_prime", num(d.kp_prime)),
                ("k1_prime", num(d.k1_prime)),
                ("k2_prime", num(d.k2_prime)),
            ]),
            _ => None,
        }
    };

    match &scenario.body {
        Body::Fock(_) => unreachable!("handled above"),
        Body::Separable { photon_a, photon_b } => {
            section("photon_a", photon(photon_a));
            section("photon_b", photon(photon_b));
        }
        Body::EntangledPulsed(src) | Body::EntangledCw(src) => {
            section("source", source(src));
            if let Some(d) = dispersion(src) {
                section("dispersion", d);
            }
        }
        Body::MixedIndependent {
            source: s1,
            source_2,
        } => {
            section("source", source(s1));
            if let Some(d) = dispersion(s1) {
                section("dispersion", d);
            }
            section("source_2", source(source_2));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_separable_uses_defaults() {
        let s = parse_scenario("kind = separable\n").unwrap();
        assert_eq!(s.kind(), Kind::Separable);
        assert_eq!(s.sweep, Sweep::default());
        assert_eq!(
            s.body,
            Body::Separable {
                photon_a: PhotonSpec::default(),
                photon_b: PhotonSpec::default(),
            }
        );
    }

    #[test]
    fn unknown_key_is_named() {
        let err = parse_scenario("kind = separable\n[photon_a]\nsgima = 1e12\n").unwrap_err();
        assert_eq!(err.line, Some(3));
        assert!(err.message.contains("`sgima`"), "{err}");
    }

    #[test]
    fn design_point_document_is_accepted() {
        let text = "\
kind = entangled_pulsed
[source]
phase_matching = gaussian
gamma = 0.193
sigma = 1e12
center = 1e15
a = 1.609556949949126e-12
b = -1.609556949949126e-12
c = 0
";
        let s = parse_scenario(text).unwrap();
        let Body::EntangledPulsed(src) = &s.body else {
            panic!("wrong kind")
        };
        assert_eq!(src.phase_matching, PmShape::Gaussian);
        assert_eq!(
            src.coefficients,
            Coefficients::Explicit {
                a: 1.609556949949126e-12,
                b: -1.609556949949126e-12,
                c: 0.0
            }
        );
    }

    #[test]
    fn syntax_errors_carry_lines() {
        let cases = [
            ("kind = separable\n[photon_a\n", 2),
            ("kind = separable\njunk\n", 2),
            ("kind = separable\n[sweep]\nn_tau = 1\n", 3),
            ("kind = separable\n[sweep]\ntau_min = x\n", 3),
            ("kind = separable\n[sweep]\n[sweep]\n", 3),
            ("kind = separable\n[sweep]\nn_tau = 5\nn_tau = 6\n", 4),
            ("kind = quantum\n", 1),
            ("kind = fock\n[sweep]\n", 2),
            ("kind = fock\n[fock]\neta = 1.5\n", 3),
            ("kind = entangled_pulsed\n[source]\na = 1e-12\n", 2),
        ];
        for (text, line) in cases {
            let err = parse_scenario(text).unwrap_err();
            assert_eq!(err.line, Some(line), "{text:?}: {err}");
        }
        assert!(parse_scenario("[sweep]\n").is_err());
        assert!(parse_scenario("").is_err());
    }

    #[test]
    fn dispersion_conflicts_with_explicit_coefficients() {
        let text = "\
kind = entangled_cw
[source]
a = 1e-12
b = -1e-12
c = 0
[dispersion]
length = 0.01
k_p0 = 1
k_10 = 0.5
k_20 = 0.5
kp_prime = 0
k1_prime = 1e-10
k2_prime = -1e-10
";
        let err = parse_scenario(text).unwrap_err();
        assert_eq!(err.line, Some(6));
        let ok = text.replace("a = 1e-12\nb = -1e-12\nc = 0\n", "");
        let s = parse_scenario(&ok).unwrap();
        let Body::EntangledCw(src) = s.body else {
            panic!()
        };
        assert!(matches!(src.coefficients, Coefficients::Dispersion(_)));
        assert!(parse_scenario(&ok.replace("k2_prime = -1e-10\n", "")).is_err());
    }

    #[test]
    fn grid_keys_are_kind_gated() {
        assert!(
            parse_scenario("kind = entangled_cw\n[grid]\nomega_min = 1\nomega_max = 2\n").is_err()
        );
        assert!(parse_scenario("kind = separable\n[grid]\nhalf_width = 1e13\n").is_err());
        assert!(parse_scenario("kind = separable\n[grid]\nomega_min = 1\n").is_err());
        assert!(parse_scenario(
            "kind = entangled_cw\n[grid]\nhalf_width = 1e13\nn_points = 4097\n"
        )
        .is_ok());
    }

    #[test]
    fn mixed_defaults_second_source_to_first() {
        let s = parse_scenario("kind = mixed_independent\n[source]\nphase_matching = gaussian\n")
            .unwrap();
        let Body::MixedIndependent { source, source_2 } = s.body else {
            panic!()
        };
        assert_eq!(source, source_2);
    }

    #[test]
    fn comments_and_blank_lines() {
        let s = parse_scenario("# header\nkind = fock # trailing\n\n[fock]\ntag_b = V\n").unwrap();
        assert_eq!(
            s.body,
            Body::Fock(FockSpec {
                tag_b: "V".into(),
                ..FockSpec::default()
            })
        );
    }

    fn samples() -> Vec<Scenario> {
        let texts = [
            "kind = fock\n[fock]\neta = 0.3\ntag_a = x\ntag_b = y\n",
            "kind = separable\n[photon_a]\nshape = sinc\nscale = 2e-12\n[photon_b]\nshape = tabulated\nfile = b.dat\n[grid]\nn_points = 4096\nomega_min = 9.9e14\nomega_max = 1.01e15\n",
            "kind = entangled_pulsed\n[source]\nphase_matching = gaussian\nengine = schmidt\na = 1e-12\nb = -2e-12\nc = 0.5\n[sweep]\nn_tau = 11\ntau_min = -3e-12\ntau_max = 5e-12\n",
            "kind = entangled_cw\n[grid]\nhalf_width = 1e14\n[dispersion]\nlength = 0.01\nk_p0 = 1\nk_10 = 0.5\nk_20 = 0.5\nkp_prime = 0\nk1_prime = 1e-10\nk2_prime = -1e-10\n",
            "kind = mixed_independent\n[source]\nsigma = 2e12\n[source_2]\nphase_matching = gaussian\ngamma = 0.2\n",
        ];
        texts.iter().map(|t| parse_scenario(t).unwrap()).collect()
    }

    #[test]
    fn round_trip() {
        for s in samples() {
            let text = serialize_scenario(&s);
            assert_eq!(parse_scenario(&text).unwrap(), s, "{text}");
            assert_eq!(serialize_scenario(&parse_scenario(&text).unwrap()), text);
        }
    }
}
