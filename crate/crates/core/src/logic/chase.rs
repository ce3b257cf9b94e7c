//! Bounded forward chaining with case splits, deciding `φ ⊢_c ψ` modulo a
//! universal theory.
//!
//! Context variables behave as fresh constants. Axioms fire on every instance
//! whose premise holds in the current fact store, with axiom variables ranging
//! only over classes already present. A definite conclusion is added; a
//! disjunctive one is kept aside and split on, depth first, once nothing else
//! changes. `false` closes a branch.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::egraph::{ClassId, EGraph};
use super::{Atom, Axiom, Dnf, Formula, Sequent, Theory};
use crate::terms::{Context, SortId, Term, TermTuple};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SaturationBudget {
    /// Forward-chaining rounds along any one branch.
    pub max_rounds: usize,
    /// Nested case splits along any one branch.
    pub max_splits: usize,
    /// Terms in the store of any one branch.
    pub max_terms: usize,
}

impl Default for SaturationBudget {
    fn default() -> Self {
        Self {
            max_rounds: 64,
            max_splits: 16,
            max_terms: 1000,
        }
    }
}

impl SaturationBudget {
    pub fn new(max_rounds: usize, max_splits: usize, max_terms: usize) -> Self {
        Self {
            max_rounds,
            max_splits,
            max_terms,
        }
    }

    /// Componentwise `self ≥ other`.
    pub fn covers(&self, other: &SaturationBudget) -> bool {
        self.max_rounds >= other.max_rounds && self.max_splits >= other.max_splits && self.max_terms >= other.max_terms
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Proved,
    Unknown,
}

/// Which bound stopped the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Exhausted {
    Rounds,
    Splits,
    Terms,
    /// A branch saturated without reaching the goal.
    Saturated,
}

/// One axiom application: the axiom, the tuple instantiating its context in
/// terms of the sequent's context, and the branch it happened on. Branch ids
/// are dotted paths from the root `0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub axiom: String,
    pub instance: TermTuple,
    pub branch: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntailmentVerdict {
    pub status: Status,
    pub trace: Vec<TraceStep>,
    /// Largest number of rounds spent on one branch.
    pub bound_used: usize,
    /// Branches closed, by the goal or by `false`.
    pub leaves: usize,
    /// Indices of the goal disjuncts that closed some branch.
    pub used_disjuncts: BTreeSet<usize>,
    pub exhausted: Option<Exhausted>,
}

impl EntailmentVerdict {
    pub fn is_proved(&self) -> bool {
        self.status == Status::Proved
    }
}

/// Decides `sequent` modulo `theory` within `budget`.
pub fn entails(theory: &Theory, sequent: &Sequent, budget: SaturationBudget) -> Result<EntailmentVerdict> {
    let disjuncts: Vec<Formula> = sequent.rhs.disjuncts().into_iter().cloned().collect();
    entails_any(theory, &sequent.context, &sequent.lhs, &disjuncts, budget)
}

/// Decides `lhs ⊢_ctx d_0 ∨ … ∨ d_n`, reporting which `d_k` were used.
pub fn entails_any(
    theory: &Theory,
    ctx: &Context,
    lhs: &Formula,
    disjuncts: &[Formula],
    budget: SaturationBudget,
) -> Result<EntailmentVerdict> {
    let sig = theory.signature();
    lhs.check(sig, ctx)?;
    for d in disjuncts {
        d.check(sig, ctx)?;
    }
    let rules: Vec<Rule<'_>> = theory
        .axioms()
        .iter()
        .map(|ax| Rule {
            axiom: ax,
            sorts: ax.sequent.context.sort_list(),
            body: ax.sequent.lhs.dnf(),
            head: ax.sequent.rhs.dnf(),
        })
        .collect();
    let goal: Vec<(usize, Vec<Atom>)> = disjuncts
        .iter()
        .enumerate()
        .flat_map(|(k, d)| d.dnf().into_iter().map(move |c| (k, c)))
        .collect();

    let mut eg = EGraph::new(sig, ctx);
    let vars: Vec<ClassId> = (0..ctx.len()).map(|v| eg.add_var(v)).collect();
    for (_, clause) in &goal {
        for atom in clause {
            for t in atom.terms() {
                eg.add(t, &vars);
            }
        }
    }
    for clause in lhs.dnf() {
        for atom in &clause {
            for t in atom.terms() {
                eg.add(t, &vars);
            }
        }
    }
    // a sort with no term yet is still inhabited by its constants
    for s in sig.sorts() {
        if eg.classes_of(s).next().is_none() {
            for (f, decl) in sig.functions() {
                if decl.result == s && decl.args.is_empty() {
                    eg.add(&Term::constant(f), &vars);
                }
            }
        }
    }

    let mut search = Search {
        ctx,
        rules,
        goal,
        budget,
        vars,
        trace: Vec::new(),
        leaves: 0,
        used: BTreeSet::new(),
        bound_used: 0,
    };
    let premises = lhs.dnf();
    let mut outcome = Ok(());
    for (k, clause) in premises.iter().enumerate() {
        let path = if premises.len() == 1 {
            String::from("0")
        } else {
            format!("0.{k}")
        };
        let mut b = Branch {
            eg: eg.clone(),
            closed: false,
            rounds: 0,
            splits: 0,
            path,
        };
        let vars = search.vars.clone();
        apply(&mut b.eg, clause, &vars);
        outcome = search.run(b);
        if outcome.is_err() {
            break;
        }
    }
    let (status, exhausted) = match outcome {
        Ok(()) => (Status::Proved, None),
        Err(e) => (Status::Unknown, Some(e)),
    };
    Ok(EntailmentVerdict {
        status,
        trace: search.trace,
        bound_used: search.bound_used,
        leaves: search.leaves,
        used_disjuncts: search.used,
        exhausted,
    })
}

struct Rule<'t> {
    axiom: &'t Axiom,
    sorts: Vec<SortId>,
    body: Dnf,
    head: Dnf,
}

#[derive(Clone)]
struct Branch {
    eg: EGraph,
    closed: bool,
    rounds: usize,
    splits: usize,
    path: String,
}

struct Search<'a> {
    ctx: &'a Context,
    rules: Vec<Rule<'a>>,
    goal: Vec<(usize, Vec<Atom>)>,
    budget: SaturationBudget,
    vars: Vec<ClassId>,
    trace: Vec<TraceStep>,
    leaves: usize,
    used: BTreeSet<usize>,
    bound_used: usize,
}

impl Search<'_> {
    fn run(&mut self, mut b: Branch) -> Result<(), Exhausted> {
        loop {
            if b.eg.node_count() > self.budget.max_terms {
                return Err(Exhausted::Terms);
            }
            if b.closed {
                self.leaves += 1;
                return Ok(());
            }
            if let Some(k) = self.goal_holds(&mut b.eg) {
                self.used.insert(k);
                self.leaves += 1;
                return Ok(());
            }
            if b.rounds >= self.budget.max_rounds {
                return Err(Exhausted::Rounds);
            }
            b.rounds += 1;
            self.bound_used = self.bound_used.max(b.rounds);

            b.eg.rebuild();
            let mut found: Vec<(usize, Vec<ClassId>)> = Vec::new();
            for (ri, rule) in self.rules.iter().enumerate() {
                let mut seen = BTreeSet::new();
                for clause in &rule.body {
                    for m in matches(&b.eg, clause, &rule.sorts) {
                        if seen.insert(m.clone()) {
                            found.push((ri, m));
                        }
                    }
                }
            }

            let mut progress = false;
            let mut pending = None;
            for (ri, subst) in found {
                let head = self.rules[ri].head.clone();
                if head.is_empty() {
                    self.record(ri, &subst, &b);
                    b.closed = true;
                    break;
                }
                if head.iter().any(|c| holds(&mut b.eg, c, &subst)) {
                    continue;
                }
                if head.len() == 1 {
                    self.record(ri, &subst, &b);
                    apply(&mut b.eg, &head[0], &subst);
                    progress = true;
                    if b.eg.node_count() > self.budget.max_terms {
                        return Err(Exhausted::Terms);
                    }
                } else if pending.is_none() {
                    pending = Some((ri, subst));
                }
            }
            if b.closed || progress {
                continue;
            }
            let Some((ri, subst)) = pending else {
                return Err(Exhausted::Saturated);
            };
            if b.splits >= self.budget.max_splits {
                return Err(Exhausted::Splits);
            }
            self.record(ri, &subst, &b);
            let arms = self.rules[ri].head.clone();
            for (k, clause) in arms.iter().enumerate() {
                let mut child = b.clone();
                child.splits += 1;
                child.path = format!("{}.{k}", b.path);
                apply(&mut child.eg, clause, &subst);
                self.run(child)?;
            }
            return Ok(());
        }
    }

    fn goal_holds(&self, eg: &mut EGraph) -> Option<usize> {
        self.goal
            .iter()
            .find(|(_, clause)| holds(eg, clause, &self.vars))
            .map(|(k, _)| *k)
    }

    fn record(&mut self, ri: usize, subst: &[ClassId], b: &Branch) {
        let rule = &self.rules[ri];
        let components = subst.iter().map(|c| b.eg.repr(*c).clone()).collect();
        self.trace.push(TraceStep {
            axiom: rule.axiom.name.clone(),
            instance: TermTuple::from_parts(self.ctx.clone(), rule.axiom.sequent.context.clone(), components),
            branch: b.path.clone(),
        });
    }
}

fn holds(eg: &mut EGraph, clause: &[Atom], subst: &[ClassId]) -> bool {
    clause.iter().all(|atom| match atom {
        Atom::Rel(r, args) => {
            let mut classes = Vec::with_capacity(args.len());
            for t in args {
                match eg.lookup(t, subst) {
                    Some(c) => classes.push(c),
                    None => return false,
                }
            }
            eg.has_fact(*r, &classes)
        }
        Atom::Eq(l, r) => match (eg.lookup(l, subst), eg.lookup(r, subst)) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        },
    })
}

fn apply(eg: &mut EGraph, clause: &[Atom], subst: &[ClassId]) {
    for atom in clause {
        match atom {
            Atom::Rel(r, args) => {
                let classes = args.iter().map(|t| eg.add(t, subst)).collect();
                eg.add_fact(*r, classes);
            }
            Atom::Eq(l, r) => {
                let a = eg.add(l, subst);
                let b = eg.add(r, subst);
                eg.union(a, b);
            }
        }
    }
    eg.rebuild();
}

type Partial = Vec<Option<ClassId>>;

/// Every assignment of existing classes to the rule variables making all
/// atoms of `clause` hold. `eg` must be rebuilt.
fn matches(eg: &EGraph, clause: &[Atom], sorts: &[SortId]) -> Vec<Vec<ClassId>> {
    let mut partial: Vec<Partial> = vec![vec![None; sorts.len()]];
    for atom in clause {
        let Atom::Rel(r, args) = atom else { continue };
        let mut next = Vec::new();
        for s in &partial {
            for tuple in eg.facts(*r) {
                let mut cands = vec![s.clone()];
                for (pat, class) in args.iter().zip(tuple) {
                    cands = cands
                        .into_iter()
                        .flat_map(|c| match_pattern(eg, pat, *class, c))
                        .collect();
                    if cands.is_empty() {
                        break;
                    }
                }
                next.extend(cands);
            }
        }
        partial = next;
        if partial.is_empty() {
            return Vec::new();
        }
    }

    // equations with one side a free variable bind it directly
    let eqs: Vec<(&Term, &Term)> = clause
        .iter()
        .filter_map(|a| match a {
            Atom::Eq(l, r) => Some((l, r)),
            _ => None,
        })
        .collect();
    let mut bound = Vec::new();
    'outer: for mut s in partial {
        for (l, r) in &eqs {
            for (x, t) in [(l, r), (r, l)] {
                if let Term::Var(v) = x {
                    if s[*v].is_none() && is_bound(t, &s) {
                        match lookup_partial(eg, t, &s) {
                            Some(c) => s[*v] = Some(c),
                            None => continue 'outer,
                        }
                    }
                }
            }
        }
        bound.push(s);
    }

    let mut out = Vec::new();
    for s in bound {
        let free: Vec<usize> = (0..s.len()).filter(|v| s[*v].is_none()).collect();
        let domains: Vec<Vec<ClassId>> = free.iter().map(|v| eg.classes_of(sorts[*v]).collect()).collect();
        if domains.iter().any(Vec::is_empty) {
            continue;
        }
        let limits: Vec<usize> = domains.iter().map(Vec::len).collect();
        let mut idx = vec![0usize; free.len()];
        loop {
            let mut full = s.clone();
            for (k, v) in free.iter().enumerate() {
                full[*v] = Some(domains[k][idx[k]]);
            }
            let full: Vec<ClassId> = full.into_iter().map(|c| c.unwrap_or(0)).collect();
            let ok = eqs
                .iter()
                .all(|(l, r)| match (lookup_full(eg, l, &full), lookup_full(eg, r, &full)) {
                    (Some(a), Some(b)) => a == b,
                    _ => false,
                });
            if ok {
                out.push(full);
            }
            if !crate::terms::advance(&mut idx, &limits) {
                break;
            }
        }
    }
    out
}

fn match_pattern(eg: &EGraph, pat: &Term, class: ClassId, s: Partial) -> Vec<Partial> {
    match pat {
        Term::Var(v) => match s[*v] {
            Some(c) if eg.find(c) == eg.find(class) => vec![s],
            Some(_) => Vec::new(),
            None => {
                let mut s = s;
                s[*v] = Some(eg.find(class));
                vec![s]
            }
        },
        Term::App(f, args) => {
            let mut out = Vec::new();
            for children in eg.apps_in(class, *f) {
                let mut cands = vec![s.clone()];
                for (a, c) in args.iter().zip(children) {
                    cands = cands.into_iter().flat_map(|p| match_pattern(eg, a, *c, p)).collect();
                    if cands.is_empty() {
                        break;
                    }
                }
                out.extend(cands);
            }
            out
        }
    }
}

fn is_bound(t: &Term, s: &Partial) -> bool {
    let mut ok = true;
    t.visit_vars(&mut |v| ok &= s[v].is_some());
    ok
}

fn lookup_partial(eg: &EGraph, t: &Term, s: &Partial) -> Option<ClassId> {
    let full: Vec<ClassId> = s.iter().map(|c| c.unwrap_or(0)).collect();
    lookup_full(eg, t, &full)
}

fn lookup_full(eg: &EGraph, t: &Term, subst: &[ClassId]) -> Option<ClassId> {
    eg.get(t, subst)
}
