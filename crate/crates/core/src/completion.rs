//! The existential completion of the syntactic doctrine of a theory.
//!
//! An element over a base context `c` is a finite set of pairs `(d, x)` with
//! `x` a formula over `d × c`, read as `∃d.x ∨ …`. All product contexts are
//! stored flat (witness variables first), and elements are preorder
//! representatives: equality of elements is always mutual [`leq`].

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::logic::{entails_any, normalize, EntailmentVerdict, Formula, SaturationBudget, Status, Theory};
use crate::semantics::{Interpretation, Subset};
use crate::terms::{enumerate_tuples, pairing, Context, Signature, Term, TermTuple};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Conjunctive fibres: every element is a single pair with a Horn body.
    Horn,
    /// Distributive-lattice fibres: any finite set of pairs.
    Coherent,
}

impl Mode {
    fn combine(self, other: Mode) -> Mode {
        if self == Mode::Horn && other == Mode::Horn {
            Mode::Horn
        } else {
            Mode::Coherent
        }
    }
}

/// One `(witness context, body)` pair; the body lives over `witness × base`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pair {
    pub witness: Context,
    pub body: Formula,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExElement {
    base: Context,
    pairs: Vec<Pair>,
    mode: Mode,
}

impl ExElement {
    /// Builds and normalizes an element, checking every body over
    /// `witness × base`.
    pub fn new(sig: &Signature, base: Context, pairs: Vec<(Context, Formula)>, mode: Mode) -> Result<Self> {
        for (w, body) in &pairs {
            body.check(sig, &w.concat(&base))?;
        }
        if mode == Mode::Horn {
            if pairs.len() != 1 {
                return Err(Error::Fragment(format!(
                    "a Horn element has exactly one pair, got {}",
                    pairs.len()
                )));
            }
            if !pairs[0].1.is_horn() {
                return Err(Error::Fragment("body of a Horn element is not Horn".into()));
            }
        }
        Ok(Self::assemble(base, pairs, mode))
    }

    fn assemble(base: Context, pairs: Vec<(Context, Formula)>, mode: Mode) -> Self {
        let mut out: Vec<Pair> = Vec::new();
        let mut seen = BTreeSet::new();
        let mut keyed: Vec<(Vec<crate::terms::SortId>, Formula, Context)> = pairs
            .into_iter()
            .map(|(w, body)| (w.sort_list(), normalize(&body), w))
            .filter(|(_, body, _)| mode == Mode::Horn || *body != Formula::False)
            .collect();
        keyed.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
        for (sorts, body, w) in keyed {
            if seen.insert((sorts, body.clone())) {
                out.push(Pair {
                    witness: separate(&w, &base),
                    body,
                });
            }
        }
        Self { base, pairs: out, mode }
    }

    /// The least element `∅`.
    pub fn bottom(base: Context) -> Self {
        Self {
            base,
            pairs: Vec::new(),
            mode: Mode::Coherent,
        }
    }

    /// The greatest element `{(1, ⊤)}`.
    pub fn top(base: Context, mode: Mode) -> Self {
        Self::assemble(base, alloc::vec![(Context::empty(), Formula::True)], mode)
    }

    pub fn base(&self) -> &Context {
        &self.base
    }

    pub fn pairs(&self) -> &[Pair] {
        &self.pairs
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// The flat context `witness × base` of pair `i`.
    pub fn pair_context(&self, i: usize) -> Context {
        self.pairs[i].witness.concat(&self.base)
    }

    /// Largest term depth in any body.
    pub fn depth(&self) -> usize {
        self.pairs.iter().map(|p| p.body.depth()).max().unwrap_or(0)
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> ExDisplay<'a> {
        ExDisplay { el: self, sig }
    }
}

/// Renames witness variables away from the base names so that the flat
/// context prints unambiguously.
fn separate(witness: &Context, base: &Context) -> Context {
    let mut taken = base.clone();
    let mut out = Context::empty();
    for b in witness.bindings() {
        let name = taken.fresh_name(&b.name);
        // `taken` contains `out`, so both pushes are fresh
        let _ = taken.push(name.clone(), b.sort);
        let _ = out.push(name, b.sort);
    }
    out
}

pub struct ExDisplay<'a> {
    el: &'a ExElement,
    sig: &'a Signature,
}

impl fmt::Display for ExDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.el.pairs.is_empty() {
            return f.write_str("{}");
        }
        f.write_str("{ ")?;
        for (i, p) in self.el.pairs.iter().enumerate() {
            if i > 0 {
                f.write_str(" ; ")?;
            }
            if !p.witness.is_empty() {
                write!(f, "[{}] ", p.witness.display(self.sig))?;
            }
            let ctx = self.el.pair_context(i);
            write!(f, "{}", p.body.display(self.sig, &ctx))?;
        }
        f.write_str(" }")
    }
}

fn same_base(a: &ExElement, b: &ExElement) -> Result<()> {
    if a.base.same_shape(&b.base) {
        Ok(())
    } else {
        Err(Context::mismatch(&a.base, &b.base, None))
    }
}

/// A witnessing arrow `r = ⟨t, π_c⟩ : d_i × c → e_j × c` into pair `target`
/// of the right-hand element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub target: usize,
    pub tuple: TermTuple,
}

impl Arrow {
    /// The witness part `t` of the arrow: its first `|e_j|` components.
    pub fn witness_terms(&self, target_witness_len: usize) -> &[Term] {
        &self.tuple.components()[..target_witness_len]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairWitness {
    pub arrows: Vec<Arrow>,
    pub verdict: EntailmentVerdict,
}

/// Per left pair, the arrows used and the entailment proving
/// `x_i ⊢ ⋁ r*y_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeqWitness {
    pub pairs: Vec<PairWitness>,
}

impl LeqWitness {
    /// True when every arrow is an identity (possible only between pairs with
    /// the same witness context).
    pub fn all_identities(&self) -> bool {
        self.pairs
            .iter()
            .all(|p| p.arrows.iter().all(|a| a.tuple.is_identity()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LeqOutcome {
    Proved(LeqWitness),
    /// Left pair `pair` could not be covered within the bounds.
    Unknown {
        pair: usize,
        verdict: Option<EntailmentVerdict>,
    },
}

impl LeqOutcome {
    pub fn is_proved(&self) -> bool {
        matches!(self, LeqOutcome::Proved(_))
    }

    pub fn witness(&self) -> Option<&LeqWitness> {
        match self {
            LeqOutcome::Proved(w) => Some(w),
            LeqOutcome::Unknown { .. } => None,
        }
    }
}

/// Decides `a ⩽ b` using witnessing arrows of term depth at most `depth`.
///
/// For each pair `(d_i, x_i)` of `a`, every arrow `⟨t, π_c⟩` into every pair
/// `(e_j, y_j)` of `b` is collected and one entailment
/// `x_i ⊢ ⋁ ⟨t, π_c⟩*y_j` is attempted. The recorded arrows are those whose
/// disjuncts closed a branch, when that subset still proves the sequent.
/// More than `budget.max_terms` candidate arrows for one pair is reported as
/// `Unknown`.
pub fn leq(
    theory: &Theory,
    a: &ExElement,
    b: &ExElement,
    depth: usize,
    budget: SaturationBudget,
) -> Result<LeqOutcome> {
    same_base(a, b)?;
    let sig = theory.signature();
    let c_len = a.base.len();
    let mut pairs = Vec::with_capacity(a.pairs.len());
    for i in 0..a.pairs.len() {
        let ctx = a.pair_context(i);
        let d_len = a.pairs[i].witness.len();
        let pi_c = TermTuple::projection(&ctx, d_len, c_len);
        let mut arrows = Vec::new();
        let mut disjuncts = Vec::new();
        for (j, target) in b.pairs.iter().enumerate() {
            let mut tuples = enumerate_tuples(sig, &ctx, &target.witness, depth).with_term_cap(budget.max_terms);
            for t in tuples.by_ref() {
                let r = pairing(&t, &pi_c)?;
                disjuncts.push(target.body.instantiate(r.components()));
                arrows.push(Arrow { target: j, tuple: r });
                if arrows.len() > budget.max_terms {
                    return Ok(LeqOutcome::Unknown { pair: i, verdict: None });
                }
            }
            if tuples.truncated() {
                return Ok(LeqOutcome::Unknown { pair: i, verdict: None });
            }
        }
        let lhs = &a.pairs[i].body;
        let verdict = entails_any(theory, &ctx, lhs, &disjuncts, budget)?;
        if verdict.status != Status::Proved {
            return Ok(LeqOutcome::Unknown {
                pair: i,
                verdict: Some(verdict),
            });
        }
        let used: Vec<usize> = verdict.used_disjuncts.iter().copied().collect();
        let witness = if used.len() < arrows.len() {
            let sub: Vec<Formula> = used.iter().map(|k| disjuncts[*k].clone()).collect();
            let again = entails_any(theory, &ctx, lhs, &sub, budget)?;
            if again.is_proved() {
                PairWitness {
                    arrows: used.iter().map(|k| arrows[*k].clone()).collect(),
                    verdict: again,
                }
            } else {
                PairWitness { arrows, verdict }
            }
        } else {
            PairWitness { arrows, verdict }
        };
        pairs.push(witness);
    }
    Ok(LeqOutcome::Proved(LeqWitness { pairs }))
}

/// `leq` in both directions.
pub fn equivalent(
    theory: &Theory,
    a: &ExElement,
    b: &ExElement,
    depth: usize,
    budget: SaturationBudget,
) -> Result<bool> {
    Ok(leq(theory, a, b, depth, budget)?.is_proved() && leq(theory, b, a, depth, budget)?.is_proved())
}

/// `a ∧ b`: all pairs `(d_i × e_j, x_i ∧ y_j)` with both bodies weakened to
/// the flat context `d_i × e_j × c`.
pub fn meet(a: &ExElement, b: &ExElement) -> Result<ExElement> {
    same_base(a, b)?;
    let mut pairs = Vec::with_capacity(a.pairs.len() * b.pairs.len());
    for p in &a.pairs {
        for q in &b.pairs {
            let (d, e) = (p.witness.len(), q.witness.len());
            let x = p.body.rename(&|k| if k < d { k } else { k + e });
            let y = q.body.rename(&|k| k + d);
            pairs.push((p.witness.concat(&q.witness), Formula::and(x, y)));
        }
    }
    Ok(ExElement::assemble(a.base.clone(), pairs, a.mode.combine(b.mode)))
}

/// `a ∨ b`: the union of the pair sets. Not available in Horn mode.
pub fn join(a: &ExElement, b: &ExElement) -> Result<ExElement> {
    same_base(a, b)?;
    if a.mode == Mode::Horn || b.mode == Mode::Horn {
        return Err(Error::Fragment("join is not defined on Horn elements".into()));
    }
    let pairs = a
        .pairs
        .iter()
        .chain(&b.pairs)
        .map(|p| (p.witness.clone(), p.body.clone()))
        .collect();
    Ok(ExElement::assemble(a.base.clone(), pairs, Mode::Coherent))
}

/// Reindexing along `f : c' → c`: each body is pulled back along `1_d × f`.
pub fn subst_ex(a: &ExElement, f: &TermTuple) -> Result<ExElement> {
    if !f.codomain().same_shape(&a.base) {
        return Err(Context::mismatch(&a.base, f.codomain(), None));
    }
    let pairs = a
        .pairs
        .iter()
        .map(|p| {
            let d = p.witness.len();
            let mut comps: Vec<Term> = (0..d).map(Term::Var).collect();
            comps.extend(f.components().iter().map(|t| t.rename(&|k| k + d)));
            (p.witness.clone(), p.body.instantiate(&comps))
        })
        .collect();
    Ok(ExElement::assemble(f.domain().clone(), pairs, a.mode))
}

/// `Σ_d`: an element over `d × c` becomes one over `c` by moving `d` into
/// every witness context. Bodies are unchanged since contexts are flat.
pub fn exists_along(a: &ExElement, d: &Context) -> Result<ExElement> {
    let base = &a.base;
    let prefix_ok = base.len() >= d.len() && base.sorts().zip(d.sorts()).all(|(x, y)| x == y);
    if !prefix_ok {
        return Err(Context::mismatch(d, base, None));
    }
    let c = base.slice(d.len(), base.len() - d.len());
    let pairs = a
        .pairs
        .iter()
        .map(|p| {
            let bound = base.slice(0, d.len());
            (p.witness.concat(&bound), p.body.clone())
        })
        .collect();
    Ok(ExElement::assemble(c, pairs, a.mode))
}

/// `η(φ) = {(1, φ)}` over `base`.
pub fn unit(sig: &Signature, phi: &Formula, base: &Context, mode: Mode) -> Result<ExElement> {
    ExElement::new(sig, base.clone(), alloc::vec![(Context::empty(), phi.clone())], mode)
}

/// The equality predicate on `d`, over the ambient context `c × d × d`:
/// `{(1, x_1 = x'_1 ∧ … ∧ x_n = x'_n)}`.
pub fn equality_predicate(c: &Context, d: &Context, mode: Mode) -> ExElement {
    let base = c.concat(d).concat(d);
    let (k, n) = (c.len(), d.len());
    let body = Formula::conj((0..n).map(|i| Formula::Eq(Term::Var(k + i), Term::Var(k + n + i))));
    ExElement::assemble(base, alloc::vec![(Context::empty(), body)], mode)
}

/// The value of `a` in the finite model behind `interp`: the union over pairs
/// of the image of `[[x_i]]` along the projection `|d_i × c| → |c|`.
pub fn extend_morphism(interp: &Interpretation<'_>, a: &ExElement) -> Result<Subset> {
    let mut out = Subset::empty(interp.space(&a.base).size());
    for (i, p) in a.pairs.iter().enumerate() {
        let ctx = a.pair_context(i);
        let body = interp.formula(&p.body, &ctx)?;
        out = out.union(&interp.exists(&body, &ctx, p.witness.len()));
    }
    Ok(out)
}
