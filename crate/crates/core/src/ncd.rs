//! Normal-crossings models of a degenerating fiber and the asymptotic
//! numbers they determine.
//!
//! A model lists the components of the special fiber with their
//! multiplicities `a` and twist orders `b`, together with the combinatorics
//! of which components meet. From that data come the threshold
//! c = min_j b_j / a_j, the degeneracy index beta, and the asymptotic
//! report: the leading log coefficient alpha = 1 - c, the monodromy
//! rotation number (also alpha), and the weight n + beta.
//!
//! Intersection combinatorics are abstract input; nothing here checks them
//! against actual geometry.

use std::collections::BTreeSet;
use std::fmt;

use num::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rat::{rat_serde, Rat};

/// One component of the special fiber: its label, its multiplicity `a` in
/// the fiber, and `b` with `b - 1` the coefficient of the component in the
/// twisting divisor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub label: String,
    pub a: u32,
    pub b: u32,
}

impl Component {
    pub fn new(label: &str, a: u32, b: u32) -> Component {
        Component {
            label: label.to_string(),
            a,
            b,
        }
    }

    fn ratio(&self) -> Rat {
        Rat::new(self.b.into(), self.a.into())
    }
}

/// A single invariant violation found by [`NCDModel::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NonpositiveDimension,
    NoComponents,
    DuplicateLabel { label: String },
    ZeroMultiplicity { label: String },
    ZeroOrder { label: String },
    FullFiberInTwist,
    OversizedStratum { labels: Vec<String>, limit: u32 },
    UnknownLabel { label: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonpositiveDimension => {
                write!(f, "fiber dimension must be positive")
            }
            Violation::NoComponents => write!(f, "model has no components"),
            Violation::DuplicateLabel { label } => {
                write!(f, "duplicate component label `{label}`")
            }
            Violation::ZeroMultiplicity { label } => {
                write!(f, "component `{label}` has multiplicity a = 0")
            }
            Violation::ZeroOrder { label } => {
                write!(f, "component `{label}` has order b = 0")
            }
            Violation::FullFiberInTwist => {
                write!(f, "B contains the full fiber: no component has b = 1")
            }
            Violation::OversizedStratum { labels, limit } => {
                write!(
                    f,
                    "stratum exceeds n+1: {{{}}} has {} components, limit {}",
                    labels.join(", "),
                    labels.len(),
                    limit
                )
            }
            Violation::UnknownLabel { label } => {
                write!(f, "stratum names unknown component `{label}`")
            }
        }
    }
}

fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(Violation::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NCDError {
    #[error("invalid model: {}", format_violations(.0))]
    InvalidModel(Vec<Violation>),
    #[error("malformed model document: {0}")]
    Document(String),
}

/// Normal-crossings model: fiber dimension, components, and the meeting
/// combinatorics.
///
/// Strata are stored as a generating family: the full intersection complex
/// consists of all nonempty subsets of stored strata, so it is closed under
/// subsets by construction, and a singleton stratum is stored for every
/// component. Construction keeps the normal form (all singletons plus the
/// maximal larger strata), so equal complexes compare equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NCDModel {
    n: u32,
    components: Vec<Component>,
    strata: BTreeSet<BTreeSet<String>>,
}

#[derive(Serialize, Deserialize)]
struct ModelDoc {
    n: u32,
    components: Vec<Component>,
    strata: Vec<Vec<String>>,
}

/// Asymptotic data of a degenerating family near its singular fiber: the
/// norm of a relative volume form behaves like
/// alpha * log|s|^2 - beta * log|log|s|^2| up to bounded terms, the
/// semisimple monodromy eigenvalue is exp(-2 pi i * rotation), and the
/// limit weight is n + beta.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AsymptoticReport {
    #[serde(with = "rat_serde")]
    pub lct: Rat,
    #[serde(with = "rat_serde")]
    pub alpha: Rat,
    pub beta: u32,
    #[serde(with = "rat_serde")]
    pub monodromy_rotation: Rat,
    pub weight: u32,
}

impl NCDModel {
    /// Model from components and a generating family of strata. Singletons
    /// are always added; listed strata are kept up to the normal form.
    pub fn new(n: u32, components: Vec<Component>, strata: &[Vec<&str>]) -> NCDModel {
        let sets: Vec<Vec<String>> = strata
            .iter()
            .map(|s| s.iter().map(|l| l.to_string()).collect())
            .collect();
        Self::build(n, components, &sets)
    }

    fn build(n: u32, components: Vec<Component>, strata: &[Vec<String>]) -> NCDModel {
        let mut family: Vec<BTreeSet<String>> = strata
            .iter()
            .map(|s| s.iter().cloned().collect())
            .filter(|s: &BTreeSet<String>| !s.is_empty())
            .collect();
        for c in &components {
            family.push(BTreeSet::from([c.label.clone()]));
        }
        // Normal form: drop any stratum of size >= 2 that sits inside
        // another listed stratum; keep all singletons.
        let mut kept = BTreeSet::new();
        for s in &family {
            let redundant =
                s.len() >= 2 && family.iter().any(|t| t.len() > s.len() && s.is_subset(t));
            if !redundant {
                kept.insert(s.clone());
            }
        }
        NCDModel {
            n,
            components,
            strata: kept,
        }
    }

    /// Parse the JSON document shape `{n, components: [{label, a, b}],
    /// strata: [[labels]]}`. Listed strata generate the complex; singletons
    /// need not be listed.
    pub fn from_json(text: &str) -> Result<NCDModel, NCDError> {
        let doc: ModelDoc =
            serde_json::from_str(text).map_err(|e| NCDError::Document(e.to_string()))?;
        Ok(Self::build(doc.n, doc.components, &doc.strata))
    }

    /// Serialize to the document shape, listing maximal strata only.
    pub fn to_json(&self) -> String {
        let maximal: Vec<Vec<String>> = self
            .strata
            .iter()
            .filter(|s| {
                !self
                    .strata
                    .iter()
                    .any(|t| t.len() > s.len() && s.is_subset(t))
            })
            .map(|s| s.iter().cloned().collect())
            .collect();
        let doc = ModelDoc {
            n: self.n,
            components: self.components.clone(),
            strata: maximal,
        };
        serde_json::to_string_pretty(&doc).expect("document shape serializes")
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    /// The stored generating strata, sorted, as label lists.
    pub fn strata(&self) -> Vec<Vec<String>> {
        self.strata
            .iter()
            .map(|s| s.iter().cloned().collect())
            .collect()
    }

    /// Whether the labels form a stratum of the complex, that is, a subset
    /// of some stored stratum.
    pub fn is_stratum(&self, labels: &[&str]) -> bool {
        let set: BTreeSet<String> = labels.iter().map(|l| l.to_string()).collect();
        !set.is_empty() && self.strata.iter().any(|s| set.is_subset(s))
    }

    /// Check every model invariant; empty means valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.n == 0 {
            out.push(Violation::NonpositiveDimension);
        }
        if self.components.is_empty() {
            out.push(Violation::NoComponents);
        }
        let mut seen = BTreeSet::new();
        for c in &self.components {
            if !seen.insert(c.label.clone()) {
                out.push(Violation::DuplicateLabel {
                    label: c.label.clone(),
                });
            }
            if c.a == 0 {
                out.push(Violation::ZeroMultiplicity {
                    label: c.label.clone(),
                });
            }
            if c.b == 0 {
                out.push(Violation::ZeroOrder {
                    label: c.label.clone(),
                });
            }
        }
        if !self.components.is_empty() && self.components.iter().all(|c| c.b != 1) {
            out.push(Violation::FullFiberInTwist);
        }
        let limit = self.n + 1;
        for s in &self.strata {
            if s.len() as u32 > limit {
                out.push(Violation::OversizedStratum {
                    labels: s.iter().cloned().collect(),
                    limit,
                });
            }
            for label in s {
                if !self.components.iter().any(|c| &c.label == label) {
                    out.push(Violation::UnknownLabel {
                        label: label.clone(),
                    });
                }
            }
        }
        out
    }

    fn checked(&self) -> Result<(), NCDError> {
        let violations = self.validate();
        if violations.is_empty() {
            Ok(())
        } else {
            Err(NCDError::InvalidModel(violations))
        }
    }

    /// Log-canonical threshold c = min over components of b / a.
    pub fn lct(&self) -> Result<Rat, NCDError> {
        self.checked()?;
        Ok(self
            .components
            .iter()
            .map(Component::ratio)
            .min()
            .expect("validated model has components"))
    }

    /// Degeneracy index beta: one less than the largest number of
    /// threshold-attaining components meeting in a single stratum.
    pub fn degeneracy_index(&self) -> Result<u32, NCDError> {
        self.checked()?;
        let c = self.lct()?;
        let minimal: BTreeSet<&str> = self
            .components
            .iter()
            .filter(|comp| comp.ratio() == c)
            .map(|comp| comp.label.as_str())
            .collect();
        let b = self
            .strata
            .iter()
            .map(|s| s.iter().filter(|l| minimal.contains(l.as_str())).count())
            .max()
            .expect("validated model has singleton strata");
        Ok(b as u32 - 1)
    }

    /// Full asymptotic report: threshold, log coefficients, monodromy
    /// rotation number, and limit weight.
    pub fn asymptotic_report(&self) -> Result<AsymptoticReport, NCDError> {
        let lct = self.lct()?;
        let beta = self.degeneracy_index()?;
        let alpha = Rat::one() - &lct;
        Ok(AsymptoticReport {
            lct,
            monodromy_rotation: alpha.clone(),
            alpha,
            beta,
            weight: self.n + beta,
        })
    }
}

/// Blow-up model of a family of dimension `n` whose special fiber has
/// `num_sing` ordinary quadratic points: the strict transform stays reduced
/// and untwisted, and each point contributes an exceptional component with
/// multiplicity 2 and order n + 1 meeting only the strict transform.
///
/// Panics if `n` or `num_sing` is zero.
pub fn quadratic_model(n: u32, num_sing: u32) -> NCDModel {
    assert!(n >= 1, "fiber dimension must be positive");
    assert!(num_sing >= 1, "need at least one singular point");
    let mut components = vec![Component::new("strict", 1, 1)];
    let mut strata: Vec<Vec<String>> = Vec::new();
    for k in 1..=num_sing {
        let label = format!("E{k}");
        components.push(Component::new(&label, 2, n + 1));
        strata.push(vec!["strict".to_string(), label]);
    }
    NCDModel::build(n, components, &strata)
}
