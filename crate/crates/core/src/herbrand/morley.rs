//! Classical formulas and their Morleyisation into coherent theories, plus
//! the reduction of `∀x.φ(x) ⊢ ∀y.ψ(y)`-style consequences to existential
//! goals.
//!
//! Each negated formula `¬φ` is replaced by an atom `N(t⃗)` where the fresh
//! relation `N` is attached to the skeleton of `φ` (its shape with every
//! argument term replaced by a distinct variable) and governed by
//! `skel ∧ N ⊢ ⊥` and `⊤ ⊢ skel ∨ N`. Equal skeletons share one symbol.

use alloc::borrow::ToOwned;
use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::ExistentialGoal;
use crate::logic::{entails, EntailmentVerdict, Formula, Fragment, SaturationBudget, Sequent, Theory};
use crate::terms::{Context, RelId, Signature, SortId, Term, TermTuple};
use crate::{Error, Result};

/// A quantifier-free formula that may contain negation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassicalFormula {
    True,
    False,
    Eq(Term, Term),
    Rel(RelId, Vec<Term>),
    And(Box<ClassicalFormula>, Box<ClassicalFormula>),
    Or(Box<ClassicalFormula>, Box<ClassicalFormula>),
    Not(Box<ClassicalFormula>),
}

impl ClassicalFormula {
    pub fn and(a: Self, b: Self) -> Self {
        Self::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Self, b: Self) -> Self {
        Self::Or(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Self) -> Self {
        Self::Not(Box::new(a))
    }

    pub fn has_negation(&self) -> bool {
        match self {
            Self::Not(_) => true,
            Self::And(a, b) | Self::Or(a, b) => a.has_negation() || b.has_negation(),
            _ => false,
        }
    }

    /// The same formula without negation, if it has none.
    pub fn to_coherent(&self) -> Option<Formula> {
        Some(match self {
            Self::True => Formula::True,
            Self::False => Formula::False,
            Self::Eq(l, r) => Formula::Eq(l.clone(), r.clone()),
            Self::Rel(r, args) => Formula::Rel(*r, args.clone()),
            Self::And(a, b) => Formula::and(a.to_coherent()?, b.to_coherent()?),
            Self::Or(a, b) => Formula::or(a.to_coherent()?, b.to_coherent()?),
            Self::Not(_) => return None,
        })
    }

    pub fn check(&self, sig: &Signature, ctx: &Context) -> Result<()> {
        match self {
            Self::And(a, b) | Self::Or(a, b) => {
                a.check(sig, ctx)?;
                b.check(sig, ctx)
            }
            Self::Not(a) => a.check(sig, ctx),
            atom => atom.to_coherent().expect("atoms are negation-free").check(sig, ctx),
        }
    }

    pub fn rename(&self, map: &impl Fn(usize) -> usize) -> Self {
        match self {
            Self::True => Self::True,
            Self::False => Self::False,
            Self::Eq(l, r) => Self::Eq(l.rename(map), r.rename(map)),
            Self::Rel(r, args) => Self::Rel(*r, args.iter().map(|t| t.rename(map)).collect()),
            Self::And(a, b) => Self::and(a.rename(map), b.rename(map)),
            Self::Or(a, b) => Self::or(a.rename(map), b.rename(map)),
            Self::Not(a) => Self::not(a.rename(map)),
        }
    }

    pub fn visit_vars(&self, f: &mut impl FnMut(usize)) {
        match self {
            Self::True | Self::False => {}
            Self::Eq(l, r) => {
                l.visit_vars(f);
                r.visit_vars(f);
            }
            Self::Rel(_, args) => args.iter().for_each(|t| t.visit_vars(f)),
            Self::And(a, b) | Self::Or(a, b) => {
                a.visit_vars(f);
                b.visit_vars(f);
            }
            Self::Not(a) => a.visit_vars(f),
        }
    }

    pub fn display<'a>(&'a self, sig: &'a Signature, ctx: &'a Context) -> ClassicalDisplay<'a> {
        ClassicalDisplay { f: self, sig, ctx }
    }
}

impl From<&Formula> for ClassicalFormula {
    fn from(f: &Formula) -> Self {
        match f {
            Formula::True => Self::True,
            Formula::False => Self::False,
            Formula::Eq(l, r) => Self::Eq(l.clone(), r.clone()),
            Formula::Rel(r, args) => Self::Rel(*r, args.clone()),
            Formula::And(a, b) => Self::and(a.as_ref().into(), b.as_ref().into()),
            Formula::Or(a, b) => Self::or(a.as_ref().into(), b.as_ref().into()),
        }
    }
}

pub struct ClassicalDisplay<'a> {
    f: &'a ClassicalFormula,
    sig: &'a Signature,
    ctx: &'a Context,
}

impl ClassicalDisplay<'_> {
    fn child<'b>(&'b self, f: &'b ClassicalFormula) -> ClassicalDisplay<'b> {
        ClassicalDisplay {
            f,
            sig: self.sig,
            ctx: self.ctx,
        }
    }

    fn wrapped(&self, f: &mut fmt::Formatter<'_>, c: &ClassicalFormula, wrap: bool) -> fmt::Result {
        if wrap {
            write!(f, "({})", self.child(c))
        } else {
            write!(f, "{}", self.child(c))
        }
    }
}

impl fmt::Display for ClassicalDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ClassicalFormula as C;
        match self.f {
            C::And(a, b) => {
                self.wrapped(f, a, matches!(**a, C::Or(..)))?;
                f.write_str(" /\\ ")?;
                self.wrapped(f, b, matches!(**b, C::Or(..) | C::And(..)))
            }
            C::Or(a, b) => {
                self.wrapped(f, a, false)?;
                f.write_str(" \\/ ")?;
                self.wrapped(f, b, matches!(**b, C::Or(..)))
            }
            C::Not(a) => {
                f.write_str("~")?;
                self.wrapped(f, a, matches!(**a, C::And(..) | C::Or(..) | C::Eq(..)))
            }
            atom => {
                let plain = atom.to_coherent().expect("atoms are negation-free");
                write!(f, "{}", plain.display(self.sig, self.ctx))
            }
        }
    }
}

/// A relation introduced for a negated skeleton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Negation {
    pub relation: RelId,
    /// Context of the skeleton variables `x1, …, xk`.
    pub context: Context,
    /// The negated formula with its argument terms abstracted.
    pub skeleton: Formula,
}

/// Builds the coherent translation of a classical theory incrementally:
/// axioms and goals are translated as they arrive, sharing fresh symbols.
#[derive(Debug, Clone)]
pub struct Morleyiser {
    sig: Signature,
    axioms: Vec<(String, Sequent)>,
    negations: Vec<Negation>,
    table: BTreeMap<(Vec<SortId>, Formula), usize>,
}

#[derive(Debug, Clone)]
pub struct Morleyised {
    pub theory: Theory,
    pub negations: Vec<Negation>,
}

impl Morleyiser {
    pub fn new(sig: Signature) -> Self {
        Self {
            sig,
            axioms: Vec::new(),
            negations: Vec::new(),
            table: BTreeMap::new(),
        }
    }

    /// The signature extended with every symbol introduced so far.
    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn negations(&self) -> &[Negation] {
        &self.negations
    }

    pub fn add_axiom(
        &mut self,
        name: &str,
        ctx: &Context,
        lhs: &ClassicalFormula,
        rhs: &ClassicalFormula,
    ) -> Result<()> {
        if self.axioms.iter().any(|(n, _)| n == name) {
            return Err(Error::Duplicate(name.to_owned()));
        }
        let lhs = self.translate(ctx, lhs)?;
        let rhs = self.translate(ctx, rhs)?;
        self.axioms.push((
            name.to_owned(),
            Sequent {
                context: ctx.clone(),
                lhs,
                rhs,
            },
        ));
        Ok(())
    }

    /// Replaces every negation in `phi` by an atom of a fresh relation.
    pub fn translate(&mut self, ctx: &Context, phi: &ClassicalFormula) -> Result<Formula> {
        phi.check(&self.sig, ctx)?;
        self.translate_checked(ctx, phi)
    }

    fn translate_checked(&mut self, ctx: &Context, phi: &ClassicalFormula) -> Result<Formula> {
        use ClassicalFormula as C;
        Ok(match phi {
            C::And(a, b) => Formula::and(self.translate_checked(ctx, a)?, self.translate_checked(ctx, b)?),
            C::Or(a, b) => Formula::or(self.translate_checked(ctx, a)?, self.translate_checked(ctx, b)?),
            C::Not(a) => match self.translate_checked(ctx, a)? {
                Formula::True => Formula::False,
                Formula::False => Formula::True,
                inner => self.negate(ctx, &inner)?,
            },
            atom => atom.to_coherent().expect("atoms are negation-free"),
        })
    }

    /// The atom standing for `¬phi`, for a negation-free `phi` over `ctx`.
    pub fn negate(&mut self, ctx: &Context, phi: &Formula) -> Result<Formula> {
        phi.check(&self.sig, ctx)?;
        let mut args = Vec::new();
        let mut sorts = Vec::new();
        let skeleton = abstract_terms(phi, &mut |t: &Term| {
            sorts.push(t.sort(&self.sig, ctx).expect("checked above"));
            args.push(t.clone());
            Term::Var(args.len() - 1)
        });
        let key = (sorts.clone(), skeleton.clone());
        let idx = match self.table.get(&key) {
            Some(i) => *i,
            None => {
                let base = match &skeleton {
                    Formula::Rel(r, _) => format!("N{}", self.sig.rel(*r).name),
                    Formula::Eq(..) => "Neq".to_owned(),
                    _ => "N".to_owned(),
                };
                let name = fresh_symbol(&self.sig, &base);
                let relation = self.sig.add_relation(&name, &sorts)?;
                let context = Context::new(sorts.iter().enumerate().map(|(i, s)| (format!("x{}", i + 1), *s)))?;
                self.negations.push(Negation {
                    relation,
                    context,
                    skeleton,
                });
                self.table.insert(key, self.negations.len() - 1);
                self.negations.len() - 1
            }
        };
        Ok(Formula::Rel(self.negations[idx].relation, args))
    }

    /// The coherent theory: translated axioms followed by the two axioms of
    /// each introduced relation.
    pub fn finish(self) -> Result<Morleyised> {
        let mut theory = Theory::new(self.sig.clone(), Fragment::ClassicalMorleyised);
        for (name, seq) in &self.axioms {
            theory.add_axiom(name, seq.clone())?;
        }
        for n in &self.negations {
            let rel_name = &self.sig.rel(n.relation).name;
            let atom = Formula::Rel(n.relation, (0..n.context.len()).map(Term::Var).collect());
            let excl = Sequent {
                context: n.context.clone(),
                lhs: Formula::and(n.skeleton.clone(), atom.clone()),
                rhs: Formula::False,
            };
            let em = Sequent {
                context: n.context.clone(),
                lhs: Formula::True,
                rhs: Formula::or(n.skeleton.clone(), atom),
            };
            let excl_name = fresh_axiom(&theory, &format!("{rel_name}_excl"));
            theory.add_axiom(&excl_name, excl)?;
            let em_name = fresh_axiom(&theory, &format!("{rel_name}_em"));
            theory.add_axiom(&em_name, em)?;
        }
        Ok(Morleyised {
            theory,
            negations: self.negations,
        })
    }
}

/// Replaces every argument term of every atom by `fresh(term)`.
fn abstract_terms(phi: &Formula, fresh: &mut impl FnMut(&Term) -> Term) -> Formula {
    match phi {
        Formula::True => Formula::True,
        Formula::False => Formula::False,
        Formula::Eq(l, r) => {
            let l = fresh(l);
            Formula::Eq(l, fresh(r))
        }
        Formula::Rel(r, args) => Formula::Rel(*r, args.iter().map(&mut *fresh).collect()),
        Formula::And(a, b) => {
            let a = abstract_terms(a, fresh);
            Formula::and(a, abstract_terms(b, fresh))
        }
        Formula::Or(a, b) => {
            let a = abstract_terms(a, fresh);
            Formula::or(a, abstract_terms(b, fresh))
        }
    }
}

fn fresh_symbol(sig: &Signature, base: &str) -> String {
    let taken = |n: &str| sig.function(n).is_some() || sig.relation(n).is_some();
    if !taken(base) {
        return base.to_owned();
    }
    (2..)
        .map(|k| format!("{base}{k}"))
        .find(|n| !taken(n))
        .expect("some suffix is free")
}

fn fresh_axiom(theory: &Theory, base: &str) -> String {
    if theory.axiom(base).is_none() {
        return base.to_owned();
    }
    (2..)
        .map(|k| format!("{base}{k}"))
        .find(|n| theory.axiom(n).is_none())
        .expect("some suffix is free")
}

/// The classical consequence `φ(x) ⊢ ψ(y)` read as `⊤ ⊢_y ∃x. ¬φ(x) ∨ ψ(y)`,
/// with `φ` over `bound` and `ψ` over `outer`, both already negation-free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForallForall {
    pub bound: Context,
    pub phi: Formula,
    pub outer: Context,
    pub psi: Formula,
}

impl ForallForall {
    /// Recognizes a goal matrix `¬φ ∨ ψ` over `bound × outer` where `φ` only
    /// mentions bound variables and `ψ` only outer ones, translating both.
    pub fn detect(
        m: &mut Morleyiser,
        bound: &Context,
        outer: &Context,
        matrix: &ClassicalFormula,
    ) -> Result<Option<Self>> {
        let ClassicalFormula::Or(neg, psi) = matrix else {
            return Ok(None);
        };
        let ClassicalFormula::Not(phi) = neg.as_ref() else {
            return Ok(None);
        };
        let d = bound.len();
        let mut phi_ok = true;
        phi.visit_vars(&mut |v| phi_ok &= v < d);
        let mut psi_ok = true;
        psi.visit_vars(&mut |v| psi_ok &= v >= d);
        if !phi_ok || !psi_ok {
            return Ok(None);
        }
        let phi = m.translate(bound, phi)?;
        let psi = m.translate(outer, &psi.rename(&|v| v - d))?;
        Ok(Some(Self {
            bound: bound.clone(),
            phi,
            outer: outer.clone(),
            psi,
        }))
    }
}

/// The goal `⊤ ⊢_outer ∃bound. Nφ(x) ∨ ψ(y)`.
pub fn reduce_forall_forall(m: &mut Morleyiser, ff: &ForallForall) -> Result<ExistentialGoal> {
    let nphi = m.negate(&ff.bound, &ff.phi)?;
    let d = ff.bound.len();
    let matrix = Formula::or(nphi, ff.psi.rename(&|v| v + d));
    matrix.check(m.signature(), &ff.bound.concat(&ff.outer))?;
    Ok(ExistentialGoal {
        outer: ff.outer.clone(),
        bound: ff.bound.clone(),
        matrix,
    })
}

/// Turns witnesses `t_i(y)` of the reduced goal into the sequent
/// `φ(t_1(y)) ∧ … ∧ φ(t_n(y)) ⊢_y ψ(y)` and checks it.
pub fn conjunctive_sequent(
    theory: &Theory,
    ff: &ForallForall,
    witnesses: &[TermTuple],
    budget: SaturationBudget,
) -> Result<(Sequent, EntailmentVerdict)> {
    for t in witnesses {
        if !t.domain().same_shape(&ff.outer) || !t.codomain().same_shape(&ff.bound) {
            return Err(Context::mismatch(&ff.bound, t.codomain(), Some(theory.signature())));
        }
    }
    let seq = Sequent::new(
        theory.signature(),
        ff.outer.clone(),
        Formula::conj(witnesses.iter().map(|t| ff.phi.instantiate(t.components()))),
        ff.psi.clone(),
    )?;
    let verdict = entails(theory, &seq, budget)?;
    Ok((seq, verdict))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::herbrand::{find_witnesses, HerbrandOutcome, Schedule};
    use std::string::ToString;
    use std::vec;
    use std::vec::Vec;

    fn base() -> (Signature, SortId, RelId) {
        let mut sig = Signature::new();
        let s = sig.add_sort("S").unwrap();
        sig.add_constant("a", s).unwrap();
        sig.add_function("g", &[s], s).unwrap();
        let p = sig.add_relation("P", &[s]).unwrap();
        (sig, s, p)
    }

    #[test]
    fn negated_fact() {
        let (sig, _, p) = base();
        let a = Term::constant(sig.function("a").unwrap());
        let mut m = Morleyiser::new(sig);
        m.add_axiom(
            "not_pa",
            &Context::empty(),
            &ClassicalFormula::True,
            &ClassicalFormula::not(ClassicalFormula::Rel(p, vec![a])),
        )
        .unwrap();
        let out = m.finish().unwrap();
        let sig = out.theory.signature();
        assert!(sig.relation("NP").is_some());
        let shown: Vec<String> = out
            .theory
            .axioms()
            .iter()
            .map(|a| format!("{}: {}", a.name, a.sequent.display(sig)))
            .collect();
        assert_eq!(
            shown,
            [
                "not_pa: true |- NP(a)",
                "NP_excl: P(x1) /\\ NP(x1) |- false [x1:S]",
                "NP_em: true |- P(x1) \\/ NP(x1) [x1:S]",
            ]
        );
    }

    #[test]
    fn negation_free_input_is_unchanged() {
        let (sig, s, p) = base();
        let x = Context::new([("x", s)]).unwrap();
        let px = ClassicalFormula::Rel(p, vec![Term::Var(0)]);
        let mut m = Morleyiser::new(sig.clone());
        m.add_axiom("refl", &x, &px, &px).unwrap();
        let out = m.finish().unwrap();
        assert_eq!(out.theory.signature(), &sig);
        assert_eq!(out.theory.axioms().len(), 1);
        assert_eq!(out.theory.axioms()[0].sequent.lhs, px.to_coherent().unwrap());
        assert!(out.negations.is_empty());
    }

    #[test]
    fn double_negation_is_eliminated() {
        let (sig, s, p) = base();
        let x = Context::new([("x", s)]).unwrap();
        let px = ClassicalFormula::Rel(p, vec![Term::Var(0)]);
        let mut m = Morleyiser::new(sig);
        let nnp = m
            .translate(&x, &ClassicalFormula::not(ClassicalFormula::not(px.clone())))
            .unwrap();
        let out = m.finish().unwrap();
        assert_eq!(out.negations.len(), 2);
        assert_eq!(out.theory.signature().rel(out.negations[1].relation).name, "NNP");
        let px = px.to_coherent().unwrap();
        let budget = SaturationBudget::default();
        for (l, r) in [(&nnp, &px), (&px, &nnp)] {
            let seq = Sequent::new(out.theory.signature(), x.clone(), l.clone(), r.clone()).unwrap();
            assert!(entails(&out.theory, &seq, budget).unwrap().is_proved());
        }
    }

    #[test]
    fn shared_skeletons_share_symbols() {
        let (sig, s, p) = base();
        let a = Term::constant(sig.function("a").unwrap());
        let x = Context::new([("x", s)]).unwrap();
        let mut m = Morleyiser::new(sig);
        let one = m
            .translate(&x, &ClassicalFormula::not(ClassicalFormula::Rel(p, vec![a])))
            .unwrap();
        let two = m
            .translate(&x, &ClassicalFormula::not(ClassicalFormula::Rel(p, vec![Term::Var(0)])))
            .unwrap();
        assert_eq!(m.negations().len(), 1);
        assert_ne!(one, two);
    }

    fn run_ff(psi_term: impl Fn(&Signature) -> Term) -> (Vec<String>, String) {
        let (sig, s, p) = base();
        let x = Context::new([("x", s)]).unwrap();
        let y = Context::new([("y", s)]).unwrap();
        let psi = Formula::Rel(p, vec![psi_term(&sig)]);
        let mut m = Morleyiser::new(sig);
        let ff = ForallForall {
            bound: x,
            phi: Formula::Rel(p, vec![Term::Var(0)]),
            outer: y,
            psi,
        };
        let goal = reduce_forall_forall(&mut m, &ff).unwrap();
        let th = m.finish().unwrap().theory;
        let sched = Schedule::dovetail(3, SaturationBudget::default());
        let HerbrandOutcome::Found(cert) = find_witnesses(&th, &goal, &sched).unwrap() else {
            panic!("no witness");
        };
        let (seq, verdict) = conjunctive_sequent(&th, &ff, &cert.witnesses, cert.budget).unwrap();
        assert!(verdict.is_proved());
        let sig = th.signature();
        (
            cert.witnesses.iter().map(|t| t.display(sig).to_string()).collect(),
            seq.display(sig).to_string(),
        )
    }

    #[test]
    fn forall_forall_identity() {
        let (w, seq) = run_ff(|_| Term::Var(0));
        assert_eq!(w, ["y"]);
        assert_eq!(seq, "P(y) |- P(y) [y:S]");
    }

    #[test]
    fn forall_forall_through_a_function() {
        let (w, seq) = run_ff(|sig| Term::App(sig.function("g").unwrap(), vec![Term::Var(0)]));
        assert_eq!(w, ["g(y)"]);
        assert_eq!(seq, "P(g(y)) |- P(g(y)) [y:S]");
    }
}
