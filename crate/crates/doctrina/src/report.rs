//! JSON shapes of command output. Field order is declaration order.

use doctrina_core::completion::{ExElement, LeqOutcome};
use doctrina_core::herbrand::HerbrandCertificate;
use doctrina_core::logic::{EntailmentVerdict, Exhausted, SaturationBudget, Sequent, Status, TraceStep};
use doctrina_core::terms::Signature;
use serde::Serialize;

use crate::model::ModelFile;
use crate::syntax::DisplayGoal;
use crate::validate::Validation;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Budget {
    pub rounds: usize,
    pub splits: usize,
    pub terms: usize,
}

impl From<SaturationBudget> for Budget {
    fn from(b: SaturationBudget) -> Self {
        Self {
            rounds: b.max_rounds,
            splits: b.max_splits,
            terms: b.max_terms,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Step {
    pub axiom: String,
    pub instance: String,
    pub branch: String,
}

pub fn trace(sig: &Signature, steps: &[TraceStep]) -> Vec<Step> {
    steps
        .iter()
        .map(|s| Step {
            axiom: s.axiom.clone(),
            instance: s.instance.display(sig).to_string(),
            branch: s.branch.clone(),
        })
        .collect()
}

pub fn status(s: Status) -> &'static str {
    match s {
        Status::Proved => "proved",
        Status::Unknown => "unknown",
    }
}

pub fn exhausted(e: Exhausted) -> &'static str {
    match e {
        Exhausted::Rounds => "rounds",
        Exhausted::Splits => "splits",
        Exhausted::Terms => "terms",
        Exhausted::Saturated => "saturated",
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Entails {
    pub sequent: String,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exhausted: Option<&'static str>,
    pub rounds_used: usize,
    pub leaves: usize,
    pub budget: Budget,
    pub trace: Vec<Step>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub validation: Option<Validation>,
}

impl Entails {
    pub fn new(sig: &Signature, seq: &Sequent, v: &EntailmentVerdict, budget: SaturationBudget) -> Self {
        Self {
            sequent: seq.display(sig).to_string(),
            status: status(v.status),
            exhausted: v.exhausted.map(exhausted),
            rounds_used: v.bound_used,
            leaves: v.leaves,
            budget: budget.into(),
            trace: trace(sig, &v.trace),
            validation: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub goal: String,
    pub witnesses: Vec<String>,
    pub derived_sequent: String,
    pub depth_used: usize,
    pub budget: Budget,
    pub trace: Vec<Step>,
}

impl Certificate {
    pub fn new(sig: &Signature, c: &HerbrandCertificate) -> Self {
        Self {
            goal: DisplayGoal::coherent(sig, &c.goal).to_string(),
            witnesses: c.witnesses.iter().map(|t| t.display(sig).to_string()).collect(),
            derived_sequent: c.derived_sequent.display(sig).to_string(),
            depth_used: c.depth_used,
            budget: c.budget.into(),
            trace: trace(sig, &c.trace),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Herbrand {
    pub name: String,
    pub status: &'static str,
    pub stages_tried: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    /// The certificate restated as `φ(t_1) ∧ … ⊢ ψ` for goals of that shape.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conjunctive: Option<Entails>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub validation: Option<Validation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArrowReport {
    pub target: usize,
    pub tuple: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairReport {
    pub pair: usize,
    pub arrows: Vec<ArrowReport>,
    pub trace: Vec<Step>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Leq {
    pub left: String,
    pub right: String,
    pub context: String,
    pub depth: usize,
    pub budget: Budget,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failed_pair: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<PairReport>>,
}

impl Leq {
    pub fn new(
        sig: &Signature,
        a: &ExElement,
        b: &ExElement,
        out: &LeqOutcome,
        depth: usize,
        budget: SaturationBudget,
    ) -> Self {
        let (status, failed_pair, witness) = match out {
            LeqOutcome::Proved(w) => {
                let pairs = w
                    .pairs
                    .iter()
                    .enumerate()
                    .map(|(i, p)| PairReport {
                        pair: i,
                        arrows: p
                            .arrows
                            .iter()
                            .map(|a| ArrowReport {
                                target: a.target,
                                tuple: a.tuple.display(sig).to_string(),
                            })
                            .collect(),
                        trace: trace(sig, &p.verdict.trace),
                    })
                    .collect();
                ("proved", None, Some(pairs))
            }
            LeqOutcome::Unknown { pair, .. } => ("unknown", Some(*pair), None),
        };
        Self {
            left: a.display(sig).to_string(),
            right: b.display(sig).to_string(),
            context: a.base().display(sig).to_string(),
            depth,
            budget: budget.into(),
            status,
            failed_pair,
            witness,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub name: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModelCheck {
    pub satisfied: bool,
    pub axioms: Vec<AxiomCheck>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Countermodel {
    pub sequent: String,
    pub max_size: usize,
    pub models_checked: usize,
    pub found: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Vec<usize>>,
}

pub fn tuple_text(env: &[usize]) -> String {
    let parts: Vec<String> = env.iter().map(usize::to_string).collect();
    format!("({})", parts.join(", "))
}
