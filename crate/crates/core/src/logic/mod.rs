//! Quantifier-free coherent formulas, sequents and universal theories, plus
//! the entailment oracle ([`entails`]) deciding the order of each fibre.

mod chase;
mod egraph;

use alloc::borrow::ToOwned;
use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::terms::{Context, RelId, Signature, SortId, Term, TermTuple};
use crate::{Error, Result};

pub use chase::{entails, entails_any, EntailmentVerdict, Exhausted, SaturationBudget, Status, TraceStep};

/// A quantifier-free formula. Formulas do not store their context: the
/// context travels alongside (in a [`Sequent`], an element of the completion,
/// or as an explicit argument) and variables are positions in it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    True,
    False,
    Eq(Term, Term),
    Rel(RelId, Vec<Term>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
}

/// An atomic formula, the unit of normal forms and of the fact store.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Eq(Term, Term),
    Rel(RelId, Vec<Term>),
}

impl Atom {
    pub fn to_formula(&self) -> Formula {
        match self {
            Atom::Eq(l, r) => Formula::Eq(l.clone(), r.clone()),
            Atom::Rel(r, args) => Formula::Rel(*r, args.clone()),
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        let (a, b): (&[Term], &[Term]) = match self {
            Atom::Eq(l, r) => (core::slice::from_ref(l), core::slice::from_ref(r)),
            Atom::Rel(_, args) => (args, &[]),
        };
        a.iter().chain(b)
    }

    fn oriented(self) -> Option<Atom> {
        match self {
            Atom::Eq(l, r) if l == r => None,
            Atom::Eq(l, r) if r < l => Some(Atom::Eq(r, l)),
            a => Some(a),
        }
    }
}

/// Disjunctive normal form: a disjunction of conjunctions of atoms.
/// `[]` is falsity and `[[]]` is truth.
pub type Dnf = Vec<Vec<Atom>>;

impl Formula {
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    /// Left-nested conjunction, `True` when empty.
    pub fn conj(parts: impl IntoIterator<Item = Formula>) -> Formula {
        parts.into_iter().reduce(Formula::and).unwrap_or(Formula::True)
    }

    /// Left-nested disjunction, `False` when empty.
    pub fn disj(parts: impl IntoIterator<Item = Formula>) -> Formula {
        parts.into_iter().reduce(Formula::or).unwrap_or(Formula::False)
    }

    /// Uses only `True`, equality, relations and conjunction.
    pub fn is_horn(&self) -> bool {
        match self {
            Formula::True | Formula::Eq(..) | Formula::Rel(..) => true,
            Formula::False | Formula::Or(..) => false,
            Formula::And(a, b) => a.is_horn() && b.is_horn(),
        }
    }

    /// Checks well-sortedness against `sig` in context `ctx`.
    pub fn check(&self, sig: &Signature, ctx: &Context) -> Result<()> {
        match self {
            Formula::True | Formula::False => Ok(()),
            Formula::Eq(l, r) => {
                let (sl, sr) = (l.sort(sig, ctx)?, r.sort(sig, ctx)?);
                if sl != sr {
                    return Err(Error::IllSorted(format!(
                        "equation between sorts {} and {}",
                        sig.sort_name(sl),
                        sig.sort_name(sr)
                    )));
                }
                Ok(())
            }
            Formula::Rel(r, args) => {
                if r.0 as usize >= sig.relation_count() {
                    return Err(Error::UnknownSymbol(format!("relation #{}", r.0)));
                }
                let decl = sig.rel(*r);
                if decl.args.len() != args.len() {
                    return Err(Error::IllSorted(format!(
                        "`{}` expects {} arguments, got {}",
                        decl.name,
                        decl.args.len(),
                        args.len()
                    )));
                }
                for (k, (t, want)) in args.iter().zip(&decl.args).enumerate() {
                    let got = t.sort(sig, ctx)?;
                    if got != *want {
                        return Err(Error::IllSorted(format!(
                            "argument {} of `{}` has sort {}, expected {}",
                            k + 1,
                            decl.name,
                            sig.sort_name(got),
                            sig.sort_name(*want)
                        )));
                    }
                }
                Ok(())
            }
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.check(sig, ctx)?;
                b.check(sig, ctx)
            }
        }
    }

    /// Replaces variable `i` by `components[i]` everywhere.
    pub fn instantiate(&self, components: &[Term]) -> Formula {
        self.map_terms(&|t| t.substitute(components))
    }

    /// Reindexes variables without changing anything else.
    pub fn rename(&self, map: &impl Fn(usize) -> usize) -> Formula {
        self.map_terms(&|t| t.rename(map))
    }

    fn map_terms(&self, g: &impl Fn(&Term) -> Term) -> Formula {
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Eq(l, r) => Formula::Eq(g(l), g(r)),
            Formula::Rel(r, args) => Formula::Rel(*r, args.iter().map(g).collect()),
            Formula::And(a, b) => Formula::and(a.map_terms(g), b.map_terms(g)),
            Formula::Or(a, b) => Formula::or(a.map_terms(g), b.map_terms(g)),
        }
    }

    pub fn visit_terms(&self, f: &mut impl FnMut(&Term)) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Eq(l, r) => {
                f(l);
                f(r);
            }
            Formula::Rel(_, args) => args.iter().for_each(&mut *f),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.visit_terms(f);
                b.visit_terms(f);
            }
        }
    }

    pub fn relations(&self) -> BTreeSet<RelId> {
        let mut out = BTreeSet::new();
        self.collect_relations(&mut out);
        out
    }

    fn collect_relations(&self, out: &mut BTreeSet<RelId>) {
        match self {
            Formula::Rel(r, _) => {
                out.insert(*r);
            }
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_relations(out);
                b.collect_relations(out);
            }
            _ => {}
        }
    }

    /// Largest term depth occurring in the formula.
    pub fn depth(&self) -> usize {
        let mut d = 0;
        self.visit_terms(&mut |t| d = d.max(t.depth()));
        d
    }

    pub fn max_var(&self) -> Option<usize> {
        let mut m = None;
        self.visit_terms(&mut |t| {
            if let Some(v) = t.max_var() {
                m = Some(m.map_or(v, |w: usize| w.max(v)));
            }
        });
        m
    }

    /// The disjunctive normal form, canonically ordered: trivial equations
    /// are dropped, equations are oriented, clauses are sorted and
    /// deduplicated, and clauses subsumed by smaller ones are removed.
    pub fn dnf(&self) -> Dnf {
        let raw = self.raw_dnf();
        canonical_dnf(raw)
    }

    fn raw_dnf(&self) -> Dnf {
        match self {
            Formula::True => vec![Vec::new()],
            Formula::False => Vec::new(),
            Formula::Eq(l, r) => match Atom::Eq(l.clone(), r.clone()).oriented() {
                Some(a) => vec![vec![a]],
                None => vec![Vec::new()],
            },
            Formula::Rel(r, args) => vec![vec![Atom::Rel(*r, args.clone())]],
            Formula::Or(a, b) => {
                let mut out = a.raw_dnf();
                out.extend(b.raw_dnf());
                out
            }
            Formula::And(a, b) => {
                let (da, db) = (a.raw_dnf(), b.raw_dnf());
                let mut out = Vec::with_capacity(da.len() * db.len());
                for x in &da {
                    for y in &db {
                        let mut c = x.clone();
                        c.extend(y.iter().cloned());
                        out.push(c);
                    }
                }
                out
            }
        }
    }

    pub fn from_dnf(dnf: &Dnf) -> Formula {
        Formula::disj(
            dnf.iter()
                .map(|clause| Formula::conj(clause.iter().map(Atom::to_formula))),
        )
    }

    /// The top-level disjuncts, read left to right.
    pub fn disjuncts(&self) -> Vec<&Formula> {
        match self {
            Formula::Or(a, b) => {
                let mut out = a.disjuncts();
                out.extend(b.disjuncts());
                out
            }
            f => vec![f],
        }
    }

    pub fn display<'a>(&'a self, sig: &'a Signature, ctx: &'a Context) -> FormulaDisplay<'a> {
        FormulaDisplay {
            formula: self,
            sig,
            ctx,
        }
    }
}

fn canonical_dnf(raw: Dnf) -> Dnf {
    let mut clauses: Vec<Vec<Atom>> = raw
        .into_iter()
        .map(|c| {
            let set: BTreeSet<Atom> = c.into_iter().collect();
            set.into_iter().collect()
        })
        .collect();
    clauses.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    clauses.dedup();
    let mut kept: Vec<Vec<Atom>> = Vec::new();
    for c in clauses {
        // kept clauses are no longer than c, so only they can subsume it
        if !kept.iter().any(|k| is_subset(k, &c)) {
            kept.push(c);
        }
    }
    kept.sort();
    kept
}

fn is_subset(small: &[Atom], big: &[Atom]) -> bool {
    small.iter().all(|a| big.binary_search(a).is_ok())
}

/// Canonical form of `φ`: its normal form rebuilt as a formula.
pub fn normalize(phi: &Formula) -> Formula {
    Formula::from_dnf(&phi.dnf())
}

/// `φ` pulled back along `f`, where `φ` lives over `ctx = codomain(f)`.
pub fn substitute(phi: &Formula, ctx: &Context, f: &TermTuple) -> Result<Formula> {
    if !ctx.same_shape(f.codomain()) {
        return Err(Context::mismatch(ctx, f.codomain(), None));
    }
    Ok(phi.instantiate(f.components()))
}

pub struct FormulaDisplay<'a> {
    formula: &'a Formula,
    sig: &'a Signature,
    ctx: &'a Context,
}

impl FormulaDisplay<'_> {
    fn child<'b>(&'b self, f: &'b Formula) -> FormulaDisplay<'b> {
        FormulaDisplay {
            formula: f,
            sig: self.sig,
            ctx: self.ctx,
        }
    }
}

impl fmt::Display for FormulaDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.formula {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Eq(l, r) => write!(
                f,
                "{} = {}",
                l.display(self.sig, self.ctx),
                r.display(self.sig, self.ctx)
            ),
            Formula::Rel(r, args) => {
                write!(f, "{}(", self.sig.rel(*r).name)?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{}", a.display(self.sig, self.ctx))?;
                }
                f.write_str(")")
            }
            Formula::And(a, b) => {
                // conjunction binds tighter than disjunction; both associate left
                let wrap_a = matches!(**a, Formula::Or(..));
                let wrap_b = matches!(**b, Formula::Or(..) | Formula::And(..));
                write_wrapped(f, &self.child(a), wrap_a)?;
                f.write_str(" /\\ ")?;
                write_wrapped(f, &self.child(b), wrap_b)
            }
            Formula::Or(a, b) => {
                let wrap_b = matches!(**b, Formula::Or(..));
                write_wrapped(f, &self.child(a), false)?;
                f.write_str(" \\/ ")?;
                write_wrapped(f, &self.child(b), wrap_b)
            }
        }
    }
}

fn write_wrapped(f: &mut fmt::Formatter<'_>, d: &FormulaDisplay<'_>, wrap: bool) -> fmt::Result {
    if wrap {
        write!(f, "({d})")
    } else {
        write!(f, "{d}")
    }
}

/// `lhs ⊢_context rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequent {
    pub context: Context,
    pub lhs: Formula,
    pub rhs: Formula,
}

impl Sequent {
    pub fn new(sig: &Signature, context: Context, lhs: Formula, rhs: Formula) -> Result<Self> {
        lhs.check(sig, &context)?;
        rhs.check(sig, &context)?;
        Ok(Self { context, lhs, rhs })
    }

    pub fn check(&self, sig: &Signature) -> Result<()> {
        self.lhs.check(sig, &self.context)?;
        self.rhs.check(sig, &self.context)
    }

    pub fn is_horn(&self) -> bool {
        self.lhs.is_horn() && self.rhs.is_horn()
    }

    /// The instance of this sequent along `f : c' → context`.
    pub fn substitute(&self, f: &TermTuple) -> Result<Sequent> {
        Ok(Sequent {
            context: f.domain().clone(),
            lhs: substitute(&self.lhs, &self.context, f)?,
            rhs: substitute(&self.rhs, &self.context, f)?,
        })
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> SequentDisplay<'a> {
        SequentDisplay { seq: self, sig }
    }
}

pub struct SequentDisplay<'a> {
    seq: &'a Sequent,
    sig: &'a Signature,
}

impl fmt::Display for SequentDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ctx = &self.seq.context;
        write!(
            f,
            "{} |- {}",
            self.seq.lhs.display(self.sig, ctx),
            self.seq.rhs.display(self.sig, ctx)
        )?;
        if !ctx.is_empty() {
            write!(f, " [{}]", ctx.display(self.sig))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Fragment {
    Horn,
    Coherent,
    /// Coherent, obtained from a classical theory by replacing negations
    /// with fresh relation symbols.
    ClassicalMorleyised,
}

impl Fragment {
    pub fn allows_disjunction(self) -> bool {
        self != Fragment::Horn
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Axiom {
    pub name: String,
    pub sequent: Sequent,
}

/// A universal theory: named quantifier-free sequents over a signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theory {
    signature: Signature,
    axioms: Vec<Axiom>,
    fragment: Fragment,
}

impl Theory {
    pub fn new(signature: Signature, fragment: Fragment) -> Self {
        Self {
            signature,
            axioms: Vec::new(),
            fragment,
        }
    }

    pub fn add_axiom(&mut self, name: &str, sequent: Sequent) -> Result<()> {
        if self.axiom(name).is_some() {
            return Err(Error::Duplicate(name.to_owned()));
        }
        sequent.check(&self.signature)?;
        if self.fragment == Fragment::Horn && !sequent.is_horn() {
            return Err(Error::Fragment(format!("axiom `{name}` is not Horn")));
        }
        self.axioms.push(Axiom {
            name: name.to_owned(),
            sequent,
        });
        Ok(())
    }

    pub fn with_axiom(mut self, name: &str, sequent: Sequent) -> Result<Self> {
        self.add_axiom(name, sequent)?;
        Ok(self)
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn axioms(&self) -> &[Axiom] {
        &self.axioms
    }

    pub fn axiom(&self, name: &str) -> Option<&Axiom> {
        self.axioms.iter().find(|a| a.name == name)
    }

    pub fn fragment(&self) -> Fragment {
        self.fragment
    }

    /// The same axioms over a larger signature (one that extends this one).
    pub fn with_signature(&self, signature: Signature) -> Self {
        Self {
            signature,
            axioms: self.axioms.clone(),
            fragment: self.fragment,
        }
    }

    pub fn sort(&self, name: &str) -> Result<SortId> {
        self.signature
            .sort(name)
            .ok_or_else(|| Error::UnknownSort(name.to_owned()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::string::ToString;

    fn sig() -> (Signature, SortId, RelId, RelId) {
        let mut sig = Signature::new();
        let s = sig.add_sort("S").unwrap();
        sig.add_constant("a", s).unwrap();
        let r = sig.add_relation("R", &[s]).unwrap();
        let q = sig.add_relation("Q", &[s]).unwrap();
        (sig, s, r, q)
    }

    #[test]
    fn normalize_units_and_idempotence() {
        let (_, _, r, _) = sig();
        let rx = Formula::Rel(r, vec![Term::Var(0)]);
        assert_eq!(normalize(&Formula::and(Formula::True, rx.clone())), rx);
        assert_eq!(normalize(&Formula::or(rx.clone(), rx.clone())), rx);
        assert_eq!(normalize(&Formula::or(rx.clone(), Formula::False)), rx);
        assert_eq!(normalize(&Formula::and(rx.clone(), Formula::False)), Formula::False);
        assert_eq!(normalize(&Formula::Eq(Term::Var(0), Term::Var(0))), Formula::True);
    }

    #[test]
    fn normalize_is_order_insensitive() {
        let (_, _, r, q) = sig();
        let rx = Formula::Rel(r, vec![Term::Var(0)]);
        let qx = Formula::Rel(q, vec![Term::Var(0)]);
        assert_eq!(
            normalize(&Formula::and(rx.clone(), qx.clone())),
            normalize(&Formula::and(qx.clone(), rx.clone()))
        );
        // absorption: R ∨ (R ∧ Q) = R
        assert_eq!(normalize(&Formula::or(rx.clone(), Formula::and(rx.clone(), qx))), rx);
    }

    #[test]
    fn substitute_closed() {
        let (sig, s, r, _) = sig();
        let y = Context::new([("y", s)]).unwrap();
        let a = sig.function("a").unwrap();
        let f = TermTuple::new(&sig, Context::empty(), y.clone(), vec![Term::constant(a)]).unwrap();
        assert_eq!(substitute(&Formula::True, &y, &f).unwrap(), Formula::True);
        let ry = Formula::Rel(r, vec![Term::Var(0)]);
        let ra = substitute(&ry, &y, &f).unwrap();
        assert_eq!(ra.display(&sig, &Context::empty()).to_string(), "R(a)");
        assert!(substitute(&ry, &Context::empty(), &f).is_err());
    }

    #[test]
    fn display_parenthesizes() {
        let (sig, s, r, q) = sig();
        let x = Context::new([("x", s)]).unwrap();
        let rx = Formula::Rel(r, vec![Term::Var(0)]);
        let qx = Formula::Rel(q, vec![Term::Var(0)]);
        let f = Formula::and(Formula::or(rx.clone(), qx.clone()), rx.clone());
        assert_eq!(f.display(&sig, &x).to_string(), "(R(x) \\/ Q(x)) /\\ R(x)");
        let g = Formula::or(rx.clone(), Formula::or(qx, rx));
        assert_eq!(g.display(&sig, &x).to_string(), "R(x) \\/ (Q(x) \\/ R(x))");
    }

    #[test]
    fn sort_errors() {
        let (mut sig, s, r, _) = sig();
        let t = sig.add_sort("T").unwrap();
        let ctx = Context::new([("x", s), ("z", t)]).unwrap();
        assert!(Formula::Rel(r, vec![Term::Var(1)]).check(&sig, &ctx).is_err());
        assert!(Formula::Eq(Term::Var(0), Term::Var(1)).check(&sig, &ctx).is_err());
        assert!(Formula::Rel(r, vec![]).check(&sig, &ctx).is_err());
    }

    #[test]
    fn horn_theories_reject_disjunction() {
        let (sig, s, r, q) = sig();
        let x = Context::new([("x", s)]).unwrap();
        let seq = Sequent::new(
            &sig,
            x,
            Formula::True,
            Formula::or(Formula::Rel(r, vec![Term::Var(0)]), Formula::Rel(q, vec![Term::Var(0)])),
        )
        .unwrap();
        let mut th = Theory::new(sig.clone(), Fragment::Horn);
        assert!(matches!(th.add_axiom("ax", seq.clone()), Err(Error::Fragment(_))));
        let mut th = Theory::new(sig, Fragment::Coherent);
        th.add_axiom("ax", seq.clone()).unwrap();
        assert!(matches!(th.add_axiom("ax", seq), Err(Error::Duplicate(_))));
    }
}
