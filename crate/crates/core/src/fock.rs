//! Discrete-mode bosonic algebra for two photons on a beam splitter.
//!
//! States are kept symbolic: a sum of products of creation operators acting
//! on vacuum. Operators commute, so each product is stored with its factors
//! sorted and like terms are merged exactly. The `sqrt(n!)` normalization of
//! repeated factors is only applied when a probability or norm is read out.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Beam-splitter input/output port.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Port {
    A,
    B,
}

impl fmt::Display for Port {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Port::A => f.write_str("a"),
            Port::B => f.write_str("b"),
        }
    }
}

/// A creation operator: port plus an opaque tag for every other degree of
/// freedom. Equal tags mean indistinguishable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeLabel {
    pub port: Port,
    pub tag: String,
}

impl ModeLabel {
    pub fn new(port: Port, tag: impl Into<String>) -> Self {
        Self {
            port,
            tag: tag.into(),
        }
    }
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}†_{}", self.port, self.tag)
    }
}

/// `amplitude * Π factors |0⟩` with factors in canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorString {
    pub factors: Vec<ModeLabel>,
    pub amplitude: Complex64,
}

impl OperatorString {
    pub fn photon_number(&self) -> usize {
        self.factors.len()
    }

    /// `Π n_l!` over the distinct labels, i.e. `‖Π factors |0⟩‖²`.
    fn occupation_weight(&self) -> f64 {
        let mut weight = 1.0;
        let mut run = 1;
        for pair in self.factors.windows(2) {
            if pair[0] == pair[1] {
                run += 1;
                weight *= run as f64;
            } else {
                run = 1;
            }
        }
        weight
    }

    fn photons_in(&self, port: Port) -> usize {
        self.factors.iter().filter(|m| m.port == port).count()
    }
}

/// Superposition of operator strings, canonicalized.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FockState {
    terms: Vec<OperatorString>,
}

impl FockState {
    /// Sorts each product, merges equal products and drops exact zeros.
    pub fn from_terms(terms: impl IntoIterator<Item = OperatorString>) -> Self {
        let mut merged: BTreeMap<Vec<ModeLabel>, Complex64> = BTreeMap::new();
        for mut term in terms {
            term.factors.sort();
            *merged.entry(term.factors).or_default() += term.amplitude;
        }
        let terms = merged
            .into_iter()
            .filter(|(_, amp)| *amp != Complex64::new(0.0, 0.0))
            .map(|(factors, amplitude)| OperatorString { factors, amplitude })
            .collect();
        Self { terms }
    }

    pub fn terms(&self) -> &[OperatorString] {
        &self.terms
    }

    /// Amplitude of the product with the given factors (in any order).
    pub fn amplitude_of(&self, factors: &[ModeLabel]) -> Complex64 {
        let mut key = factors.to_vec();
        key.sort();
        self.terms
            .iter()
            .find(|t| t.factors == key)
            .map_or(Complex64::new(0.0, 0.0), |t| t.amplitude)
    }

    /// `⟨ψ|ψ⟩`, including the `n!` of repeated factors.
    pub fn norm_squared(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.amplitude.norm_sqr() * t.occupation_weight())
            .sum()
    }

    /// The photon number shared by all terms, if any.
    pub fn photon_number(&self) -> Option<usize> {
        let first = self.terms.first()?.photon_number();
        self.terms
            .iter()
            .all(|t| t.photon_number() == first)
            .then_some(first)
    }
}

impl fmt::Display for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, term) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            let a = term.amplitude;
            if a.im == 0.0 {
                write!(f, "({:.6})", a.re)?;
            } else {
                write!(f, "({:.6}{:+.6}i)", a.re, a.im)?;
            }
            for m in &term.factors {
                write!(f, " {m}")?;
            }
        }
        f.write_str(" |0⟩")
    }
}

/// `a†_{tag_a} b†_{tag_b} |0⟩`.
pub fn input_state(tag_a: &str, tag_b: &str) -> FockState {
    FockState::from_terms([OperatorString {
        factors: vec![
            ModeLabel::new(Port::A, tag_a),
            ModeLabel::new(Port::B, tag_b),
        ],
        amplitude: Complex64::new(1.0, 0.0),
    }])
}

/// Substitutes every creation operator through a beam splitter of
/// reflectivity `eta`:
/// `a† -> sqrt(1-eta) a† + sqrt(eta) b†`, `b† -> sqrt(eta) a† - sqrt(1-eta) b†`.
///
/// Each path amplitude is formed as `±sqrt((1-eta)^m eta^k)`, so at
/// `eta = 1/2` two-photon amplitudes are exactly `±1/2`.
pub fn apply_beamsplitter(state: &FockState, eta: f64) -> Result<FockState> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::EtaOutOfRange(eta));
    }
    struct Path {
        factors: Vec<ModeLabel>,
        transmitted: i32,
        reflected: i32,
        negative: bool,
    }

    let mut expanded = Vec::new();
    for term in &state.terms {
        let mut paths = vec![Path {
            factors: Vec::with_capacity(term.factors.len()),
            transmitted: 0,
            reflected: 0,
            negative: false,
        }];
        for factor in &term.factors {
            let other = match factor.port {
                Port::A => Port::B,
                Port::B => Port::A,
            };
            paths = paths
                .into_iter()
                .flat_map(|p| {
                    let mut stay = p.factors.clone();
                    stay.push(factor.clone());
                    let mut cross = p.factors;
                    cross.push(ModeLabel::new(other, factor.tag.clone()));
                    [
                        Path {
                            factors: stay,
                            transmitted: p.transmitted + 1,
                            reflected: p.reflected,
                            negative: p.negative ^ (factor.port == Port::B),
                        },
                        Path {
                            factors: cross,
                            transmitted: p.transmitted,
                            reflected: p.reflected + 1,
                            negative: p.negative,
                        },
                    ]
                })
                .collect();
        }
        for p in paths {
            let weight = ((1.0 - eta).powi(p.transmitted) * eta.powi(p.reflected)).sqrt();
            if weight == 0.0 {
                continue;
            }
            let sign = if p.negative { -1.0 } else { 1.0 };
            expanded.push(OperatorString {
                factors: p.factors,
                amplitude: term.amplitude * (sign * weight),
            });
        }
    }
    Ok(FockState::from_terms(expanded))
}

/// Probability of one photon in each output port.
pub fn coincidence_probability(state: &FockState) -> Result<f64> {
    match state.photon_number() {
        Some(2) => {}
        Some(n) => return Err(Error::PhotonNumber(n)),
        None if state.terms.is_empty() => return Err(Error::PhotonNumber(0)),
        None => {
            let n = state
                .terms
                .iter()
                .map(OperatorString::photon_number)
                .find(|&n| n != 2)
                .unwrap_or(0);
            return Err(Error::PhotonNumber(n));
        }
    }
    Ok(state
        .terms
        .iter()
        .filter(|t| t.photons_in(Port::A) == 1 && t.photons_in(Port::B) == 1)
        .map(|t| t.amplitude.norm_sqr() * t.occupation_weight())
        .fold(0.0, |acc, x| acc + x))
}
