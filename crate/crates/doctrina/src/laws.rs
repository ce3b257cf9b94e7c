//! Seeded random law suites over the term category and the existential
//! completion, shared by the `laws` command and the acceptance tests.

use std::collections::BTreeMap;

use doctrina_core::completion::{
    exists_along, extend_morphism, join, leq, meet, subst_ex, unit, ExElement, LeqOutcome, Mode,
};
use doctrina_core::logic::{entails, Formula, SaturationBudget, Sequent, Theory};
use doctrina_core::semantics::{FiniteModel, Interpretation, Subset};
use doctrina_core::terms::{compose, pairing, product, Context, FuncId, RelId, Signature, SortId, Term, TermTuple};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::syntax::parse_theory;
use crate::validate::{check, models_of};

/// Small theories the lattice, adjunction and unit suites run over. Every
/// signature stays enumerable up to carriers of size three.
pub const THEORIES: [&str; 5] = [
    "sort S const a : S fn f : S -> S rel R : S rel Q : S",
    "logic horn sort S const a : S fn f : S -> S rel R : S rel Q : S
     axiom push: R(x) |- Q(f(x)) [x:S]",
    "sort S const a : S fn f : S -> S rel R : S rel Q : S
     axiom cover: true |- R(a) \\/ Q(a)
     axiom apart: R(x) /\\ Q(x) |- false [x:S]",
    "sort S const a : S fn f : S -> S rel R : S rel Q : S
     axiom inv: true |- f(f(x)) = x [x:S]
     axiom closed: R(x) |- R(f(x)) [x:S]",
    "sort S sort T const a : S fn h : S -> T rel R : S rel Q : T
     axiom image: R(x) |- Q(h(x)) [x:S]
     axiom seed: true |- R(a)",
];

pub fn theories() -> Vec<Theory> {
    THEORIES
        .iter()
        .map(|t| {
            parse_theory(t)
                .expect("fixed theories parse")
                .compile()
                .expect("fixed theories compile")
                .theory
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LawConfig {
    pub seed: u64,
    pub category: usize,
    pub lattice: usize,
    pub adjunction: usize,
    pub unit: usize,
    pub extension: usize,
    pub budget: SaturationBudget,
}

impl Default for LawConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            category: 1000,
            lattice: 300,
            adjunction: 200,
            unit: 200,
            extension: 200,
            budget: SaturationBudget {
                max_rounds: 16,
                max_splits: 8,
                max_terms: 4096,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub law: &'static str,
    pub cases: usize,
    /// Cases where some comparison came out `Proved`.
    pub proved: usize,
    pub failures: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
}

impl LawReport {
    fn new(law: &'static str) -> Self {
        Self {
            law,
            cases: 0,
            proved: 0,
            failures: 0,
            first_failure: None,
        }
    }

    fn fail(&mut self, what: impl FnOnce() -> String) {
        self.failures += 1;
        if self.first_failure.is_none() {
            self.first_failure = Some(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Proved sequents collected from the suites, keyed by theory index and
/// shape so repeats up to variable names are checked once.
#[derive(Debug, Default, Clone)]
pub struct ProvedLog {
    sequents: BTreeMap<(usize, String), Sequent>,
}

impl ProvedLog {
    pub fn len(&self) -> usize {
        self.sequents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequents.is_empty()
    }

    pub fn add(&mut self, theory: usize, seq: Sequent) {
        let key = (
            theory,
            format!("{:?} {:?} {:?}", seq.context.sort_list(), seq.lhs, seq.rhs),
        );
        self.sequents.entry(key).or_insert(seq);
    }

    /// Records `body_i ⊢ ⋁ r*y_j` for every covered pair of `a`.
    pub fn add_leq(&mut self, theory: usize, sig: &Signature, a: &ExElement, b: &ExElement, out: &LeqOutcome) {
        let Some(w) = out.witness() else { return };
        for (i, p) in w.pairs.iter().enumerate() {
            let rhs = Formula::disj(
                p.arrows
                    .iter()
                    .map(|r| b.pairs()[r.target].body.instantiate(r.tuple.components())),
            );
            let lhs = a.pairs()[i].body.clone();
            if let Ok(seq) = Sequent::new(sig, a.pair_context(i), lhs, rhs) {
                self.add(theory, seq);
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Sequent)> {
        self.sequents.iter().map(|((t, _), s)| (*t, s))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Soundness {
    pub sequents: usize,
    pub models: usize,
    pub violations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_violation: Option<String>,
}

/// Checks every logged sequent in every model of its theory with carriers
/// of size at most `max_size`.
pub fn soundness(
    theories: &[Theory],
    log: &ProvedLog,
    max_size: usize,
    max_table_bits: u32,
) -> Result<Soundness, doctrina_core::Error> {
    let mut out = Soundness {
        sequents: log.len(),
        models: 0,
        violations: 0,
        first_violation: None,
    };
    for (i, th) in theories.iter().enumerate() {
        let models = models_of(th, max_size, max_table_bits)?;
        out.models += models.len();
        for (_, seq) in log.iter().filter(|(t, _)| *t == i) {
            let v = check(&models, th, seq);
            if v.violations > 0 {
                out.violations += v.violations;
                if out.first_violation.is_none() {
                    out.first_violation = Some(seq.display(th.signature()).to_string());
                }
            }
        }
    }
    Ok(out)
}

/// Random structure from a seeded stream.
pub struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { rng }
    }

    pub fn pick(&mut self, n: usize) -> usize {
        if n == 0 {
            0
        } else {
            self.rng.random_range(0..n)
        }
    }

    pub fn coin(&mut self) -> bool {
        self.rng.random_bool(0.5)
    }

    /// Up to three sorts, a constant for each, and at most five symbols in
    /// all.
    pub fn signature(&mut self) -> Signature {
        let mut sig = Signature::new();
        let n_sorts = 1 + self.pick(3);
        let sorts: Vec<SortId> = (0..n_sorts)
            .map(|i| sig.add_sort(["S", "T", "U"][i]).expect("fresh sort"))
            .collect();
        for (i, s) in sorts.iter().enumerate() {
            sig.add_constant(["a", "b", "c"][i], *s).expect("fresh constant");
        }
        let n_rel = 1 + self.pick(2);
        for name in ["R", "Q"].iter().take(n_rel) {
            let args: Vec<SortId> = (0..1 + self.pick(2)).map(|_| sorts[self.pick(n_sorts)]).collect();
            sig.add_relation(name, &args).expect("fresh relation");
        }
        let n_fn = self.pick(6 - n_rel - n_sorts);
        for name in ["f", "g", "h", "k"].iter().take(n_fn) {
            let args: Vec<SortId> = (0..1 + self.pick(2)).map(|_| sorts[self.pick(n_sorts)]).collect();
            let result = sorts[self.pick(n_sorts)];
            sig.add_function(name, &args, result).expect("fresh function");
        }
        sig
    }

    pub fn context(&mut self, sig: &Signature, max_len: usize) -> Context {
        let sorts: Vec<SortId> = sig.sorts().collect();
        let n = self.pick(max_len + 1);
        Context::from_sorts(&(0..n).map(|_| sorts[self.pick(sorts.len())]).collect::<Vec<_>>())
    }

    /// A term of `sort`, or `None` when the sort has no variable or constant.
    pub fn term(&mut self, sig: &Signature, ctx: &Context, sort: SortId, depth: usize) -> Option<Term> {
        let apps: Vec<FuncId> = sig
            .functions()
            .filter(|(_, d)| d.result == sort && !d.args.is_empty())
            .map(|(f, _)| f)
            .collect();
        if depth > 0 && !apps.is_empty() && self.coin() {
            let f = apps[self.pick(apps.len())];
            let args = sig.func(f).args.clone();
            let sub: Option<Vec<Term>> = args.iter().map(|s| self.term(sig, ctx, *s, depth - 1)).collect();
            if let Some(sub) = sub {
                return Some(Term::App(f, sub));
            }
        }
        let mut leaves: Vec<Term> = (0..ctx.len())
            .filter(|i| ctx.sort_of(*i) == sort)
            .map(Term::Var)
            .collect();
        leaves.extend(
            sig.functions()
                .filter(|(_, d)| d.result == sort && d.args.is_empty())
                .map(|(f, _)| Term::constant(f)),
        );
        if leaves.is_empty() {
            return None;
        }
        let k = self.pick(leaves.len());
        Some(leaves.swap_remove(k))
    }

    pub fn tuple(&mut self, sig: &Signature, dom: &Context, cod: &Context, depth: usize) -> Option<TermTuple> {
        let comps: Option<Vec<Term>> = cod.sorts().map(|s| self.term(sig, dom, s, depth)).collect();
        TermTuple::new(sig, dom.clone(), cod.clone(), comps?).ok()
    }

    pub fn atom(&mut self, sig: &Signature, ctx: &Context, depth: usize) -> Formula {
        let rels: Vec<RelId> = sig.relations().map(|(r, _)| r).collect();
        for _ in 0..4 {
            if self.pick(3) == 0 {
                let sorts: Vec<SortId> = sig.sorts().collect();
                let s = sorts[self.pick(sorts.len())];
                if let (Some(l), Some(r)) = (self.term(sig, ctx, s, depth), self.term(sig, ctx, s, depth)) {
                    return Formula::Eq(l, r);
                }
                continue;
            }
            let r = rels[self.pick(rels.len())];
            let args = sig.rel(r).args.clone();
            let terms: Option<Vec<Term>> = args.iter().map(|s| self.term(sig, ctx, *s, depth)).collect();
            if let Some(terms) = terms {
                return Formula::Rel(r, terms);
            }
        }
        Formula::True
    }

    /// A positive formula with at most `size` connectives.
    pub fn formula(&mut self, sig: &Signature, ctx: &Context, depth: usize, size: usize) -> Formula {
        if size == 0 {
            return match self.pick(8) {
                0 => Formula::True,
                1 => Formula::False,
                _ => self.atom(sig, ctx, depth),
            };
        }
        let left = self.pick(size);
        let a = self.formula(sig, ctx, depth, left);
        let b = self.formula(sig, ctx, depth, size - 1 - left);
        if self.coin() {
            Formula::and(a, b)
        } else {
            Formula::or(a, b)
        }
    }

    /// Up to three pairs, witness contexts of at most one variable, bodies
    /// of term depth at most two.
    pub fn element(&mut self, sig: &Signature, base: &Context) -> ExElement {
        let pairs = (0..1 + self.pick(3))
            .map(|_| {
                let w = self.context(sig, 1);
                let body = self.formula(sig, &w.concat(base), 2, 1);
                (w, body)
            })
            .collect();
        ExElement::new(sig, base.clone(), pairs, Mode::Coherent).expect("generated bodies are well-sorted")
    }

    pub fn model(&mut self, sig: &Signature, sizes: &[usize]) -> FiniteModel {
        let size = |s: SortId| sizes[s.0 as usize];
        let functions = sig
            .functions()
            .map(|(_, d)| {
                let cells: usize = d.args.iter().map(|s| size(*s)).product();
                (0..cells).map(|_| self.pick(size(d.result))).collect()
            })
            .collect();
        let relations = sig
            .relations()
            .map(|(_, d)| {
                let cells: usize = d.args.iter().map(|s| size(*s)).product();
                let members: Vec<usize> = (0..cells).filter(|_| self.coin()).collect();
                Subset::from_indices(cells, members)
            })
            .collect();
        FiniteModel::new(sig, sizes.to_vec(), functions, relations).expect("generated tables fit")
    }
}

/// Associativity, identities, projections, pairing and the terminal object.
pub fn category_laws(seed: u64, cases: usize) -> LawReport {
    let mut rep = LawReport::new("category");
    let mut g = Gen::new(seed, 1);
    while rep.cases < cases {
        let sig = g.signature();
        let cs: Vec<Context> = (0..4).map(|_| g.context(&sig, 3)).collect();
        let (Some(f), Some(k), Some(h)) = (
            g.tuple(&sig, &cs[0], &cs[1], 3),
            g.tuple(&sig, &cs[1], &cs[2], 3),
            g.tuple(&sig, &cs[2], &cs[3], 3),
        ) else {
            continue;
        };
        let Some(f2) = g.tuple(&sig, &cs[0], &cs[2], 3) else {
            continue;
        };
        rep.cases += 1;
        let case = rep.cases;
        let ok = (|| -> Result<bool, doctrina_core::Error> {
            let assoc = compose(&h, &compose(&k, &f)?)? == compose(&compose(&h, &k)?, &f)?;
            let ids =
                compose(&TermTuple::identity(&cs[1]), &f)? == f && compose(&f, &TermTuple::identity(&cs[0]))? == f;
            let (_, p1, p2) = product(&cs[1], &cs[2]);
            let pair = pairing(&f, &f2)?;
            let left = compose(&p1, &pair)? == f;
            let right = compose(&p2, &pair)?;
            let right = right.components() == f2.components() && right.codomain().same_shape(f2.codomain());
            let unique = pairing(&compose(&p1, &pair)?, &compose(&p2, &pair)?)? == pair;
            let terminal = compose(&TermTuple::to_terminal(&cs[1]), &f)? == TermTuple::to_terminal(&cs[0]);
            Ok(assoc && ids && left && right && unique && terminal)
        })();
        match ok {
            Ok(true) => rep.proved += 1,
            Ok(false) => rep.fail(|| format!("case {case}: {}", f.display(&sig))),
            Err(e) => rep.fail(|| format!("case {case}: {e}")),
        }
    }
    rep
}

struct Checker<'a> {
    theories: &'a [Theory],
    budget: SaturationBudget,
    log: &'a mut ProvedLog,
}

impl Checker<'_> {
    fn leq(&mut self, t: usize, a: &ExElement, b: &ExElement, depth: usize) -> Result<bool, doctrina_core::Error> {
        let th = &self.theories[t];
        let out = leq(th, a, b, depth, self.budget)?;
        self.log.add_leq(t, th.signature(), a, b, &out);
        Ok(out.is_proved())
    }

    fn equiv(&mut self, t: usize, a: &ExElement, b: &ExElement) -> Result<bool, doctrina_core::Error> {
        Ok(self.leq(t, a, b, 0)? && self.leq(t, b, a, 0)?)
    }
}

/// The distributive-lattice laws as mutual comparisons at depth 0.
pub fn lattice_laws(
    seed: u64,
    cases: usize,
    theories: &[Theory],
    budget: SaturationBudget,
    log: &mut ProvedLog,
) -> LawReport {
    let mut rep = LawReport::new("lattice");
    let mut g = Gen::new(seed, 2);
    let mut ck = Checker { theories, budget, log };
    for case in 0..cases {
        let t = case % theories.len();
        let sig = theories[t].signature();
        let base = g.context(sig, 1);
        let (a, b, c) = (g.element(sig, &base), g.element(sig, &base), g.element(sig, &base));
        rep.cases += 1;
        let laws = |ck: &mut Checker| -> Result<Option<&'static str>, doctrina_core::Error> {
            let laws: [(&str, ExElement, ExElement); 8] = [
                ("meet associative", meet(&a, &meet(&b, &c)?)?, meet(&meet(&a, &b)?, &c)?),
                ("join associative", join(&a, &join(&b, &c)?)?, join(&join(&a, &b)?, &c)?),
                ("meet commutative", meet(&a, &b)?, meet(&b, &a)?),
                ("join commutative", join(&a, &b)?, join(&b, &a)?),
                ("meet absorbs", meet(&a, &join(&a, &b)?)?, a.clone()),
                ("join absorbs", join(&a, &meet(&a, &b)?)?, a.clone()),
                (
                    "meet distributes",
                    meet(&a, &join(&b, &c)?)?,
                    join(&meet(&a, &b)?, &meet(&a, &c)?)?,
                ),
                (
                    "join distributes",
                    join(&a, &meet(&b, &c)?)?,
                    meet(&join(&a, &b)?, &join(&a, &c)?)?,
                ),
            ];
            for (name, l, r) in &laws {
                if !ck.equiv(t, l, r)? {
                    return Ok(Some(name));
                }
            }
            Ok(None)
        };
        match laws(&mut ck) {
            Ok(None) => rep.proved += 1,
            Ok(Some(name)) => rep.fail(|| format!("case {case}: {name} for {}", a.display(sig))),
            Err(e) => rep.fail(|| format!("case {case}: {e}")),
        }
    }
    rep
}

/// `1_d × f : d × c' → d × c`.
fn widen(sig: &Signature, d: &Context, f: &TermTuple) -> Result<TermTuple, doctrina_core::Error> {
    let k = d.len();
    let mut comps: Vec<Term> = (0..k).map(Term::Var).collect();
    comps.extend(f.components().iter().map(|t| t.rename(&|i| i + k)));
    TermTuple::new(sig, d.concat(f.domain()), d.concat(f.codomain()), comps)
}

/// `Σ_d ⊣ π*` at matched depth, Frobenius and Beck-Chevalley.
pub fn adjunction_laws(
    seed: u64,
    cases: usize,
    theories: &[Theory],
    budget: SaturationBudget,
    log: &mut ProvedLog,
) -> Vec<LawReport> {
    let mut adj = LawReport::new("adjunction");
    let mut frob = LawReport::new("frobenius");
    let mut bc = LawReport::new("beck-chevalley");
    let mut g = Gen::new(seed, 3);
    let mut ck = Checker { theories, budget, log };
    for case in 0..cases {
        let t = case % theories.len();
        let sig = theories[t].signature();
        let d = loop {
            let d = g.context(sig, 1);
            if !d.is_empty() {
                break d;
            }
        };
        let c = g.context(sig, 1);
        let dc = d.concat(&c);
        let pi = TermTuple::projection(&dc, d.len(), c.len());

        adj.cases += 1;
        let a = g.element(sig, &dc);
        let b = g.element(sig, &c);
        let b = if g.coin() {
            match exists_along(&a, &d).and_then(|s| join(&s, &b)) {
                Ok(b) => b,
                Err(e) => {
                    adj.fail(|| format!("case {case}: {e}"));
                    continue;
                }
            }
        } else {
            b
        };
        let depth = g.pick(2);
        let run = (|| -> Result<(bool, bool, bool), doctrina_core::Error> {
            let sigma = exists_along(&a, &d)?;
            let pulled = subst_ex(&b, &pi)?;
            let left = ck.leq(t, &sigma, &b, depth)?;
            let right = ck.leq(t, &a, &pulled, depth)?;
            let unit_ok = ck.leq(t, &a, &subst_ex(&sigma, &pi)?, depth)?;
            let counit_ok = ck.leq(t, &exists_along(&pulled, &d)?, &b, depth)?;
            Ok((left == right, left, unit_ok && counit_ok))
        })();
        match run {
            Ok((true, proved, true)) => adj.proved += usize::from(proved),
            Ok(_) => adj.fail(|| format!("case {case}: {} against {}", a.display(sig), b.display(sig))),
            Err(e) => adj.fail(|| format!("case {case}: {e}")),
        }

        frob.cases += 1;
        let x = g.element(sig, &c);
        let y = g.element(sig, &dc);
        let run = (|| -> Result<bool, doctrina_core::Error> {
            let l = exists_along(&meet(&subst_ex(&x, &pi)?, &y)?, &d)?;
            let r = meet(&x, &exists_along(&y, &d)?)?;
            ck.equiv(t, &l, &r)
        })();
        match run {
            Ok(true) => frob.proved += 1,
            Ok(false) => frob.fail(|| format!("case {case}: {} and {}", x.display(sig), y.display(sig))),
            Err(e) => frob.fail(|| format!("case {case}: {e}")),
        }

        bc.cases += 1;
        let c2 = g.context(sig, 2);
        let Some(f) = g.tuple(sig, &c2, &c, 1) else {
            // a sort of c has no closed term and c' has no variable of it
            bc.proved += 1;
            continue;
        };
        let z = g.element(sig, &dc);
        let run = (|| -> Result<bool, doctrina_core::Error> {
            let l = subst_ex(&exists_along(&z, &d)?, &f)?;
            let r = exists_along(&subst_ex(&z, &widen(sig, &d, &f)?)?, &d)?;
            ck.equiv(t, &l, &r)
        })();
        match run {
            Ok(true) => bc.proved += 1,
            Ok(false) => bc.fail(|| format!("case {case}: {} along {}", z.display(sig), f.display(sig))),
            Err(e) => bc.fail(|| format!("case {case}: {e}")),
        }
    }
    vec![adj, frob, bc]
}

/// `unit(φ) ≡ unit(ψ)` exactly when `φ ⊣⊢ ψ`, with identity arrows.
pub fn unit_laws(
    seed: u64,
    cases: usize,
    theories: &[Theory],
    budget: SaturationBudget,
    log: &mut ProvedLog,
) -> LawReport {
    let mut rep = LawReport::new("unit");
    let mut g = Gen::new(seed, 4);
    for case in 0..cases {
        let t = case % theories.len();
        let th = &theories[t];
        let sig = th.signature();
        let c = g.context(sig, 2);
        let phi = g.formula(sig, &c, 1, 2);
        let psi = match g.pick(4) {
            0 => Formula::and(phi.clone(), g.formula(sig, &c, 1, 0)),
            1 => Formula::or(g.formula(sig, &c, 1, 0), phi.clone()),
            2 => doctrina_core::logic::normalize(&phi),
            _ => g.formula(sig, &c, 1, 2),
        };
        rep.cases += 1;
        let run = (|| -> Result<Option<bool>, doctrina_core::Error> {
            let (up, vp) = (
                unit(sig, &phi, &c, Mode::Coherent)?,
                unit(sig, &psi, &c, Mode::Coherent)?,
            );
            let there = leq(th, &up, &vp, 0, budget)?;
            let back = leq(th, &vp, &up, 0, budget)?;
            log.add_leq(t, sig, &up, &vp, &there);
            log.add_leq(t, sig, &vp, &up, &back);
            let fwd = entails(th, &Sequent::new(sig, c.clone(), phi.clone(), psi.clone())?, budget)?;
            let bwd = entails(th, &Sequent::new(sig, c.clone(), psi.clone(), phi.clone())?, budget)?;
            for (v, l, r) in [(&fwd, &phi, &psi), (&bwd, &psi, &phi)] {
                if v.is_proved() {
                    log.add(t, Sequent::new(sig, c.clone(), l.clone(), r.clone())?);
                }
            }
            let by_leq = there.is_proved() && back.is_proved();
            let identities = [&there, &back]
                .iter()
                .all(|o| o.witness().is_none_or(|w| w.all_identities()));
            if by_leq != (fwd.is_proved() && bwd.is_proved()) || !identities {
                return Ok(None);
            }
            Ok(Some(by_leq))
        })();
        match run {
            Ok(Some(proved)) => rep.proved += usize::from(proved),
            Ok(None) => rep.fail(|| format!("case {case}: {} against {}", phi.display(sig, &c), psi.display(sig, &c))),
            Err(e) => rep.fail(|| format!("case {case}: {e}")),
        }
    }
    rep
}

/// The extension of a model to the completion preserves meets, joins,
/// reindexing and `Σ`, and restricts to the model along the unit.
pub fn extension_laws(seed: u64, cases: usize) -> LawReport {
    let mut rep = LawReport::new("extension");
    let mut g = Gen::new(seed, 5);
    while rep.cases < cases {
        let sig = g.signature();
        let c = g.context(&sig, 2);
        let c2 = g.context(&sig, 2);
        let d = g.context(&sig, 1);
        let Some(f) = g.tuple(&sig, &c2, &c, 2) else {
            continue;
        };
        rep.cases += 1;
        let case = rep.cases;
        let (a, b) = (g.element(&sig, &c), g.element(&sig, &c));
        let dc = d.concat(&c);
        let e = g.element(&sig, &dc);
        let phi = g.formula(&sig, &c, 2, 2);
        let sizes = vec![2; sig.sort_count()];
        let m = g.model(&sig, &sizes);
        let run = (|| -> Result<Option<&'static str>, doctrina_core::Error> {
            let it = Interpretation::new(&m, &sig)?;
            let (va, vb) = (extend_morphism(&it, &a)?, extend_morphism(&it, &b)?);
            if extend_morphism(&it, &meet(&a, &b)?)? != va.intersection(&vb) {
                return Ok(Some("meet"));
            }
            if extend_morphism(&it, &join(&a, &b)?)? != va.union(&vb) {
                return Ok(Some("join"));
            }
            if extend_morphism(&it, &subst_ex(&a, &f)?)? != it.preimage(&va, &f) {
                return Ok(Some("reindexing"));
            }
            let ve = extend_morphism(&it, &e)?;
            if extend_morphism(&it, &exists_along(&e, &d)?)? != it.exists(&ve, &dc, d.len()) {
                return Ok(Some("exists"));
            }
            if extend_morphism(&it, &unit(&sig, &phi, &c, Mode::Coherent)?)? != it.formula(&phi, &c)? {
                return Ok(Some("unit"));
            }
            Ok(None)
        })();
        match run {
            Ok(None) => rep.proved += 1,
            Ok(Some(what)) => rep.fail(|| format!("case {case}: {what} for {}", a.display(&sig))),
            Err(e) => rep.fail(|| format!("case {case}: {e}")),
        }
    }
    rep
}

#[derive(Debug, Clone, Serialize)]
pub struct LawRun {
    pub seed: u64,
    pub reports: Vec<LawReport>,
    pub soundness: Soundness,
}

/// Every suite, then the soundness check of everything they proved.
pub fn run_all(cfg: &LawConfig, max_size: usize, max_table_bits: u32) -> Result<LawRun, doctrina_core::Error> {
    let theories = theories();
    let mut log = ProvedLog::default();
    let mut reports = vec![category_laws(cfg.seed, cfg.category)];
    reports.push(lattice_laws(cfg.seed, cfg.lattice, &theories, cfg.budget, &mut log));
    reports.extend(adjunction_laws(
        cfg.seed,
        cfg.adjunction,
        &theories,
        cfg.budget,
        &mut log,
    ));
    reports.push(unit_laws(cfg.seed, cfg.unit, &theories, cfg.budget, &mut log));
    reports.push(extension_laws(cfg.seed, cfg.extension));
    let soundness = soundness(&theories, &log, max_size, max_table_bits)?;
    Ok(LawRun {
        seed: cfg.seed,
        reports,
        soundness,
    })
}
