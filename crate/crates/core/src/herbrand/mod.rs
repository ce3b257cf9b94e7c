//! Herbrand witnesses for existential goals over universal theories.
//!
//! A goal `⊤ ⊢_c ∃d. φ` holds in a universal theory exactly when finitely many
//! term tuples `t_1, …, t_n : c → d` make `⊤ ⊢_c φ(t_1) ∨ … ∨ φ(t_n)`
//! provable. [`find_witnesses`] searches for them as the order
//! `{(1, ⊤)} ⩽ Σ_d η(φ)` in the existential completion, under an
//! iterative-deepening [`Schedule`], and shrinks the result greedily.

mod morley;

use alloc::vec::Vec;

use crate::completion::{exists_along, leq, unit, ExElement, LeqOutcome, Mode};
use crate::logic::{entails, EntailmentVerdict, Formula, Fragment, SaturationBudget, Sequent, Theory, TraceStep};
use crate::terms::{Context, Term, TermTuple};
use crate::{Error, Result};

pub use morley::{
    conjunctive_sequent, reduce_forall_forall, ClassicalFormula, ForallForall, Morleyised, Morleyiser, Negation,
};

/// `⊤ ⊢_outer ∃bound. matrix`, with the matrix over `bound × outer`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExistentialGoal {
    pub outer: Context,
    pub bound: Context,
    pub matrix: Formula,
}

impl ExistentialGoal {
    pub fn new(theory: &Theory, outer: Context, bound: Context, matrix: Formula) -> Result<Self> {
        matrix.check(theory.signature(), &bound.concat(&outer))?;
        Ok(Self { outer, bound, matrix })
    }

    /// `φ(t)` for a witness `t : outer → bound`, over `outer`.
    pub fn instance(&self, t: &TermTuple) -> Formula {
        let mut comps: Vec<Term> = t.components().to_vec();
        comps.extend((0..self.outer.len()).map(Term::Var));
        self.matrix.instantiate(&comps)
    }

    /// `⊤ ⊢_outer φ(t_1) ∨ … ∨ φ(t_n)`.
    pub fn derived_sequent(&self, witnesses: &[TermTuple]) -> Sequent {
        Sequent {
            context: self.outer.clone(),
            lhs: Formula::True,
            rhs: Formula::disj(witnesses.iter().map(|t| self.instance(t))),
        }
    }
}

/// One search stage: a term-depth bound for witnesses and an entailment
/// budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Stage {
    pub depth: usize,
    pub budget: SaturationBudget,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    stages: Vec<Stage>,
}

impl Schedule {
    pub fn new(stages: Vec<Stage>) -> Self {
        Self { stages }
    }

    /// Interleaves depth and budget growth, ending at `(max_depth, last)`:
    /// `(0, b_0), (1, b_0), (1, b_1), (2, b_1), …, (max_depth, b_max_depth)`
    /// where `b_j` is `last` scaled down by `2^(max_depth - j)`.
    pub fn dovetail(max_depth: usize, last: SaturationBudget) -> Self {
        let scaled = |j: usize| {
            let shift = (max_depth - j).min(usize::BITS as usize - 1);
            let down = |v: usize, floor: usize| (v >> shift).max(floor).min(v);
            SaturationBudget {
                max_rounds: down(last.max_rounds, 4),
                max_splits: down(last.max_splits, 2),
                max_terms: down(last.max_terms, 64),
            }
        };
        let mut stages = alloc::vec![Stage {
            depth: 0,
            budget: scaled(0),
        }];
        for j in 1..=max_depth {
            stages.push(Stage {
                depth: j,
                budget: scaled(j - 1),
            });
            stages.push(Stage {
                depth: j,
                budget: scaled(j),
            });
        }
        stages.dedup();
        Self { stages }
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HerbrandCertificate {
    pub goal: ExistentialGoal,
    /// Witness tuples `outer → bound`, closed when `outer` is empty.
    pub witnesses: Vec<TermTuple>,
    pub derived_sequent: Sequent,
    /// Trace of the cold re-verification of `derived_sequent`.
    pub trace: Vec<TraceStep>,
    pub depth_used: usize,
    pub budget: SaturationBudget,
}

impl HerbrandCertificate {
    pub fn n(&self) -> usize {
        self.witnesses.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum HerbrandOutcome {
    Found(HerbrandCertificate),
    /// No stage of the schedule succeeded.
    Unknown {
        stages_tried: usize,
    },
}

/// Searches for witnesses stage by stage; the first stage that succeeds wins.
pub fn find_witnesses(theory: &Theory, goal: &ExistentialGoal, schedule: &Schedule) -> Result<HerbrandOutcome> {
    let sig = theory.signature();
    let full = goal.bound.concat(&goal.outer);
    goal.matrix.check(sig, &full)?;
    if theory.fragment() == Fragment::Horn && !goal.matrix.is_horn() {
        return Err(Error::Fragment("a Horn theory only admits Horn goal matrices".into()));
    }
    let mode = if theory.fragment() == Fragment::Horn {
        Mode::Horn
    } else {
        Mode::Coherent
    };
    let top = ExElement::top(goal.outer.clone(), mode);
    let target = exists_along(&unit(sig, &goal.matrix, &full, mode)?, &goal.bound)?;

    for stage in schedule.stages() {
        let LeqOutcome::Proved(w) = leq(theory, &top, &target, stage.depth, stage.budget)? else {
            continue;
        };
        let d = goal.bound.len();
        let found: Vec<TermTuple> = w.pairs[0]
            .arrows
            .iter()
            .map(|a| TermTuple::from_parts(goal.outer.clone(), goal.bound.clone(), a.witness_terms(d).to_vec()))
            .collect();
        let witnesses = minimize(theory, goal, found, stage.budget)?;
        let derived_sequent = goal.derived_sequent(&witnesses);
        let check = entails(theory, &derived_sequent, stage.budget)?;
        if !check.is_proved() {
            // the leq proof and the cold replay disagree only if the
            // replay budget is too small; try the next stage instead
            continue;
        }
        return Ok(HerbrandOutcome::Found(HerbrandCertificate {
            goal: goal.clone(),
            witnesses,
            derived_sequent,
            trace: check.trace,
            depth_used: stage.depth,
            budget: stage.budget,
        }));
    }
    Ok(HerbrandOutcome::Unknown {
        stages_tried: schedule.stages().len(),
    })
}

/// Drops witnesses one at a time while the derived sequent stays provable,
/// until no single witness can be dropped.
fn minimize(
    theory: &Theory,
    goal: &ExistentialGoal,
    mut witnesses: Vec<TermTuple>,
    budget: SaturationBudget,
) -> Result<Vec<TermTuple>> {
    loop {
        let mut dropped = false;
        let mut i = 0;
        while i < witnesses.len() && witnesses.len() > 1 {
            let mut rest = witnesses.clone();
            rest.remove(i);
            if entails(theory, &goal.derived_sequent(&rest), budget)?.is_proved() {
                witnesses = rest;
                dropped = true;
            } else {
                i += 1;
            }
        }
        if !dropped {
            return Ok(witnesses);
        }
    }
}

/// Re-runs the entailment of the derived sequent from scratch.
pub fn replay(theory: &Theory, cert: &HerbrandCertificate) -> Result<EntailmentVerdict> {
    let expected = cert.goal.derived_sequent(&cert.witnesses);
    if expected != cert.derived_sequent {
        return Err(Error::IllSorted("derived sequent does not match the witnesses".into()));
    }
    entails(theory, &cert.derived_sequent, cert.budget)
}
