#![allow(dead_code)]

use doctrina_core::logic::{Formula, Fragment, Sequent, Theory};
use doctrina_core::semantics::{FiniteModel, Subset};
use doctrina_core::terms::{Context, FuncId, RelId, Signature, SortId, Term, TermTuple};
use proptest::prelude::*;

/// Draws structure from a vector of raw choices; running out yields the
/// first option everywhere, so shrinking drives values toward simple ones.
pub struct Choices<'a> {
    raw: &'a [u32],
    pos: usize,
}

impl<'a> Choices<'a> {
    pub fn new(raw: &'a [u32]) -> Self {
        Self { raw, pos: 0 }
    }

    pub fn pick(&mut self, n: usize) -> usize {
        let v = self.raw.get(self.pos).copied().unwrap_or(0);
        self.pos += 1;
        if n == 0 {
            0
        } else {
            v as usize % n
        }
    }

    pub fn coin(&mut self) -> bool {
        self.pick(2) == 1
    }
}

pub fn raw() -> impl Strategy<Value = Vec<u32>> {
    proptest::collection::vec(any::<u32>(), 0..256)
}

/// Up to three sorts, a constant for each, one or two relations, and
/// functions up to five non-constant symbols in total.
pub fn signature(ch: &mut Choices) -> Signature {
    let mut sig = Signature::new();
    let n_sorts = 1 + ch.pick(3);
    let sorts: Vec<SortId> = (0..n_sorts)
        .map(|i| sig.add_sort(["S", "T", "U"][i]).unwrap())
        .collect();
    for (i, s) in sorts.iter().enumerate() {
        sig.add_constant(["a", "b", "c"][i], *s).unwrap();
    }
    let n_rel = 1 + ch.pick(2);
    for i in 0..n_rel {
        let args: Vec<SortId> = (0..1 + ch.pick(2)).map(|_| sorts[ch.pick(n_sorts)]).collect();
        sig.add_relation(["R", "Q"][i], &args).unwrap();
    }
    let n_fn = ch.pick(6 - n_rel);
    for i in 0..n_fn {
        let args: Vec<SortId> = (0..1 + ch.pick(2)).map(|_| sorts[ch.pick(n_sorts)]).collect();
        let result = sorts[ch.pick(n_sorts)];
        sig.add_function(["f", "g", "h", "k"][i], &args, result).unwrap();
    }
    sig
}

pub fn context(sig: &Signature, ch: &mut Choices, max_len: usize) -> Context {
    let sorts: Vec<SortId> = sig.sorts().collect();
    let n = ch.pick(max_len + 1);
    Context::from_sorts(&(0..n).map(|_| sorts[ch.pick(sorts.len())]).collect::<Vec<_>>())
}

pub fn term(sig: &Signature, ctx: &Context, sort: SortId, depth: usize, ch: &mut Choices) -> Term {
    let apps: Vec<FuncId> = sig
        .functions()
        .filter(|(_, d)| d.result == sort && !d.args.is_empty())
        .map(|(f, _)| f)
        .collect();
    if depth > 0 && !apps.is_empty() && ch.coin() {
        let f = apps[ch.pick(apps.len())];
        let args = sig.func(f).args.clone();
        return Term::App(f, args.iter().map(|s| term(sig, ctx, *s, depth - 1, ch)).collect());
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
    leaves.swap_remove(ch.pick(leaves.len()))
}

pub fn tuple(sig: &Signature, dom: &Context, cod: &Context, depth: usize, ch: &mut Choices) -> TermTuple {
    let comps = cod.sorts().map(|s| term(sig, dom, s, depth, ch)).collect();
    TermTuple::new(sig, dom.clone(), cod.clone(), comps).unwrap()
}

pub fn atom(sig: &Signature, ctx: &Context, depth: usize, ch: &mut Choices) -> Formula {
    let rels: Vec<RelId> = sig.relations().map(|(r, _)| r).collect();
    if ch.pick(3) == 0 {
        let sorts: Vec<SortId> = sig.sorts().collect();
        let s = sorts[ch.pick(sorts.len())];
        let l = term(sig, ctx, s, depth, ch);
        return Formula::Eq(l, term(sig, ctx, s, depth, ch));
    }
    let r = rels[ch.pick(rels.len())];
    let args = sig.rel(r).args.clone();
    Formula::Rel(r, args.iter().map(|s| term(sig, ctx, *s, depth, ch)).collect())
}

/// A conjunction of up to `width` atoms, occasionally `⊤`.
pub fn horn(sig: &Signature, ctx: &Context, depth: usize, width: usize, ch: &mut Choices) -> Formula {
    let n = ch.pick(width + 1);
    Formula::conj((0..n).map(|_| atom(sig, ctx, depth, ch)))
}

/// A positive formula with at most `size` connectives.
pub fn formula(sig: &Signature, ctx: &Context, depth: usize, size: usize, ch: &mut Choices) -> Formula {
    if size == 0 {
        return match ch.pick(8) {
            0 => Formula::True,
            1 => Formula::False,
            _ => atom(sig, ctx, depth, ch),
        };
    }
    let left = ch.pick(size);
    let a = formula(sig, ctx, depth, left, ch);
    let b = formula(sig, ctx, depth, size - 1 - left, ch);
    if ch.coin() {
        Formula::and(a, b)
    } else {
        Formula::or(a, b)
    }
}

pub fn theory(sig: &Signature, ch: &mut Choices, max_axioms: usize, fragment: Fragment) -> Theory {
    let mut th = Theory::new(sig.clone(), fragment);
    for i in 0..ch.pick(max_axioms + 1) {
        let ctx = context(sig, ch, 2);
        let lhs = horn(sig, &ctx, 1, 2, ch);
        let rhs = if fragment == Fragment::Horn {
            atom(sig, &ctx, 1, ch)
        } else {
            formula(sig, &ctx, 1, 1, ch)
        };
        th.add_axiom(&format!("ax{i}"), Sequent::new(sig, ctx, lhs, rhs).unwrap())
            .unwrap();
    }
    th
}

pub fn model(sig: &Signature, sizes: &[usize], ch: &mut Choices) -> FiniteModel {
    let size = |s: SortId| sizes[s.0 as usize];
    let functions = sig
        .functions()
        .map(|(_, d)| {
            let cells: usize = d.args.iter().map(|s| size(*s)).product();
            (0..cells).map(|_| ch.pick(size(d.result))).collect()
        })
        .collect();
    let relations = sig
        .relations()
        .map(|(_, d)| {
            let cells: usize = d.args.iter().map(|s| size(*s)).product();
            Subset::from_indices(cells, (0..cells).filter(|_| ch.coin()))
        })
        .collect();
    FiniteModel::new(sig, sizes.to_vec(), functions, relations).unwrap()
}

/// Direct evaluation by recursion on the term, independent of the library's
/// evaluator: a table cell is found by reading the arguments as digits, most
/// significant first.
pub fn oracle_term(m: &FiniteModel, sig: &Signature, t: &Term, env: &[usize]) -> usize {
    match t {
        Term::Var(i) => env[*i],
        Term::App(f, args) => {
            let decl = sig.func(*f);
            let mut cell = 0;
            for (a, s) in args.iter().zip(&decl.args) {
                cell = cell * m.size(*s) + oracle_term(m, sig, a, env);
            }
            m.function_table(*f)[cell]
        }
    }
}

pub fn oracle_holds(m: &FiniteModel, sig: &Signature, phi: &Formula, env: &[usize]) -> bool {
    match phi {
        Formula::True => true,
        Formula::False => false,
        Formula::Eq(l, r) => oracle_term(m, sig, l, env) == oracle_term(m, sig, r, env),
        Formula::Rel(r, args) => {
            let decl = sig.rel(*r);
            let mut cell = 0;
            for (a, s) in args.iter().zip(&decl.args) {
                cell = cell * m.size(*s) + oracle_term(m, sig, a, env);
            }
            m.relation_table(*r).contains(cell)
        }
        Formula::And(a, b) => oracle_holds(m, sig, a, env) && oracle_holds(m, sig, b, env),
        Formula::Or(a, b) => oracle_holds(m, sig, a, env) || oracle_holds(m, sig, b, env),
    }
}

/// All environments of `ctx` in `m`, first variable most significant.
pub fn environments(m: &FiniteModel, ctx: &Context) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for s in ctx.sorts() {
        out = out
            .into_iter()
            .flat_map(|env| {
                (0..m.size(s)).map(move |v| {
                    let mut e = env.clone();
                    e.push(v);
                    e
                })
            })
            .collect();
    }
    out
}

pub fn oracle_sequent(m: &FiniteModel, sig: &Signature, seq: &Sequent) -> bool {
    environments(m, &seq.context)
        .iter()
        .all(|env| !oracle_holds(m, sig, &seq.lhs, env) || oracle_holds(m, sig, &seq.rhs, env))
}

pub fn oracle_models_theory(m: &FiniteModel, th: &Theory) -> bool {
    th.axioms()
        .iter()
        .all(|ax| oracle_sequent(m, th.signature(), &ax.sequent))
}
