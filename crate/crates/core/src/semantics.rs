//! Finite models as morphisms into the powerset doctrine.
//!
//! Carriers are `0..n` per sort. A context denotes the product of its carriers,
//! laid out row-major with the first variable most significant; a formula in
//! context denotes a [`Subset`] of that product.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cell::RefCell;

use crate::logic::{Formula, Sequent, Theory};
use crate::terms::{Context, Signature, SortId, Term, TermTuple};
use crate::{Error, Result};

/// A finite product of carriers, indexed row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Space {
    dims: Vec<usize>,
}

impl Space {
    pub fn new(dims: Vec<usize>) -> Self {
        Self { dims }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn size(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn index(&self, tuple: &[usize]) -> usize {
        tuple.iter().zip(&self.dims).fold(0, |acc, (v, d)| acc * d + v)
    }

    pub fn tuple(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for k in (0..self.dims.len()).rev() {
            out[k] = index % self.dims[k];
            index /= self.dims[k];
        }
        out
    }

    pub fn tuples(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.size()).map(|i| self.tuple(i))
    }
}

/// A subset of some [`Space`], as a bit set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subset {
    len: usize,
    bits: Vec<u64>,
}

impl Subset {
    pub fn empty(len: usize) -> Self {
        Self {
            len,
            bits: vec![0; len.div_ceil(64)],
        }
    }

    pub fn full(len: usize) -> Self {
        let mut s = Self::empty(len);
        for i in 0..len {
            s.insert(i);
        }
        s
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(len);
        for i in indices {
            s.insert(i);
        }
        s
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|w| *w == 0)
    }

    pub fn count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.len, "index {i} outside a space of {}", self.len);
        self.bits[i / 64] |= 1 << (i % 64);
    }

    pub fn union(&self, other: &Subset) -> Subset {
        self.zip(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Subset) -> Subset {
        self.zip(other, |a, b| a & b)
    }

    pub fn is_subset(&self, other: &Subset) -> bool {
        assert_eq!(self.len, other.len);
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    fn zip(&self, other: &Subset, op: impl Fn(u64, u64) -> u64) -> Subset {
        assert_eq!(self.len, other.len, "subsets of different spaces");
        Subset {
            len: self.len,
            bits: self.bits.iter().zip(&other.bits).map(|(a, b)| op(*a, *b)).collect(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|i| self.contains(*i))
    }
}

/// Carriers, total function tables and relation tables for a signature.
///
/// A function table lists the result for every argument tuple in row-major
/// order; a relation table is a subset of the product of its argument sorts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteModel {
    sizes: Vec<usize>,
    functions: Vec<Vec<usize>>,
    relations: Vec<Subset>,
}

impl FiniteModel {
    pub fn new(sig: &Signature, sizes: Vec<usize>, functions: Vec<Vec<usize>>, relations: Vec<Subset>) -> Result<Self> {
        let m = Self {
            sizes,
            functions,
            relations,
        };
        m.validate(sig)?;
        Ok(m)
    }

    /// Whether no relabelling of the carriers gives a smaller table
    /// encoding (function cells, then relation cells, row-major). Every
    /// isomorphism class has exactly one such model.
    pub fn is_canonical(&self, sig: &Signature) -> bool {
        let perms: Vec<Vec<Vec<usize>>> = self.sizes.iter().map(|n| permutations(*n)).collect();
        let radices: Vec<usize> = perms.iter().map(Vec::len).collect();
        let mut choice = vec![0; radices.len()];
        loop {
            let p: Vec<&[usize]> = choice.iter().zip(&perms).map(|(k, ps)| ps[*k].as_slice()).collect();
            if self.relabelled_is_smaller(sig, &p) {
                return false;
            }
            if !crate::terms::advance(&mut choice, &radices) {
                return true;
            }
        }
    }

    /// Compares the encoding of the model relabelled by `p` (per sort, new
    /// label of each element) against this one.
    fn relabelled_is_smaller(&self, sig: &Signature, p: &[&[usize]]) -> bool {
        let inv: Vec<Vec<usize>> = p
            .iter()
            .map(|q| {
                let mut inv = vec![0; q.len()];
                q.iter().enumerate().for_each(|(i, j)| inv[*j] = i);
                inv
            })
            .collect();
        // old cell of the arguments that land in new cell `i`
        let source = |sorts: &[SortId], mut i: usize| {
            let mut old = 0;
            let mut scale = 1;
            for s in sorts.iter().rev() {
                let n = self.size(*s);
                old += inv[s.0 as usize][i % n] * scale;
                scale *= n;
                i /= n;
            }
            old
        };
        for (f, decl) in sig.functions() {
            let table = &self.functions[f.0 as usize];
            for (i, here) in table.iter().enumerate() {
                let there = p[decl.result.0 as usize][table[source(&decl.args, i)]];
                if there != *here {
                    return there < *here;
                }
            }
        }
        for (r, decl) in sig.relations() {
            let table = &self.relations[r.0 as usize];
            for i in 0..table.len() {
                let (there, here) = (table.contains(source(&decl.args, i)), table.contains(i));
                if there != here {
                    return !there;
                }
            }
        }
        false
    }

    /// Checks that every table is total and sort-correct for `sig`.
    pub fn validate(&self, sig: &Signature) -> Result<()> {
        if self.sizes.len() != sig.sort_count()
            || self.functions.len() != sig.function_count()
            || self.relations.len() != sig.relation_count()
        {
            return Err(Error::Model("model does not match the signature".to_owned()));
        }
        for (f, decl) in sig.functions() {
            let table = &self.functions[f.0 as usize];
            let cells = self.space(&decl.args).size();
            if table.len() != cells {
                return Err(Error::Model(format!(
                    "table of `{}` has {} entries, expected {cells}",
                    decl.name,
                    table.len()
                )));
            }
            let bound = self.sizes[decl.result.0 as usize];
            if let Some(v) = table.iter().find(|v| **v >= bound) {
                return Err(Error::Model(format!(
                    "`{}` takes value {v} outside a carrier of size {bound}",
                    decl.name
                )));
            }
        }
        for (r, decl) in sig.relations() {
            let cells = self.space(&decl.args).size();
            if self.relations[r.0 as usize].len() != cells {
                return Err(Error::Model(format!(
                    "table of `{}` does not cover {cells} tuples",
                    decl.name
                )));
            }
        }
        Ok(())
    }

    pub fn size(&self, s: SortId) -> usize {
        self.sizes[s.0 as usize]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn function_table(&self, f: crate::terms::FuncId) -> &[usize] {
        &self.functions[f.0 as usize]
    }

    pub fn relation_table(&self, r: crate::terms::RelId) -> &Subset {
        &self.relations[r.0 as usize]
    }

    pub fn space(&self, sorts: &[SortId]) -> Space {
        Space::new(sorts.iter().map(|s| self.size(*s)).collect())
    }

    pub fn context_space(&self, ctx: &Context) -> Space {
        Space::new(ctx.sorts().map(|s| self.size(s)).collect())
    }

    pub fn eval_term(&self, sig: &Signature, t: &Term, env: &[usize]) -> usize {
        match t {
            Term::Var(i) => env[*i],
            Term::App(f, args) => {
                let idx = self.cell(sig, &sig.func(*f).args, args, env);
                self.functions[f.0 as usize][idx]
            }
        }
    }

    /// Row-major position of the argument values in a table over `sorts`.
    fn cell(&self, sig: &Signature, sorts: &[SortId], args: &[Term], env: &[usize]) -> usize {
        args.iter()
            .zip(sorts)
            .fold(0, |acc, (a, s)| acc * self.size(*s) + self.eval_term(sig, a, env))
    }

    pub fn holds(&self, sig: &Signature, phi: &Formula, env: &[usize]) -> bool {
        match phi {
            Formula::True => true,
            Formula::False => false,
            Formula::Eq(l, r) => self.eval_term(sig, l, env) == self.eval_term(sig, r, env),
            Formula::Rel(r, args) => {
                let idx = self.cell(sig, &sig.rel(*r).args, args, env);
                self.relations[r.0 as usize].contains(idx)
            }
            Formula::And(a, b) => self.holds(sig, a, env) && self.holds(sig, b, env),
            Formula::Or(a, b) => self.holds(sig, a, env) || self.holds(sig, b, env),
        }
    }

    /// A falsifying environment for `seq`, if any, the first in row-major
    /// order.
    pub fn counterexample(&self, sig: &Signature, seq: &Sequent) -> Option<Vec<usize>> {
        let radices: Vec<usize> = seq.context.sorts().map(|s| self.size(s)).collect();
        if radices.contains(&0) {
            return None;
        }
        let mut env = alloc::vec![0; radices.len()];
        loop {
            if self.holds(sig, &seq.lhs, &env) && !self.holds(sig, &seq.rhs, &env) {
                return Some(env);
            }
            if !crate::terms::advance(&mut env, &radices) {
                return None;
            }
        }
    }
}

/// The set of environments of `ctx` satisfying `phi` in `m`.
pub fn eval(m: &FiniteModel, sig: &Signature, phi: &Formula, ctx: &Context) -> Result<Subset> {
    phi.check(sig, ctx)?;
    m.validate(sig)?;
    let space = m.context_space(ctx);
    Ok(Subset::from_indices(
        space.size(),
        space
            .tuples()
            .enumerate()
            .filter(|(_, env)| m.holds(sig, phi, env))
            .map(|(i, _)| i),
    ))
}

/// A failing axiom and an environment falsifying it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub axiom: String,
    pub env: Vec<usize>,
}

/// All axioms of `theory` that `m` falsifies, each with its first
/// counter-environment.
pub fn violations(m: &FiniteModel, theory: &Theory) -> Vec<Violation> {
    let sig = theory.signature();
    theory
        .axioms()
        .iter()
        .filter_map(|ax| {
            m.counterexample(sig, &ax.sequent).map(|env| Violation {
                axiom: ax.name.clone(),
                env,
            })
        })
        .collect()
}

pub fn satisfies(m: &FiniteModel, theory: &Theory) -> bool {
    let sig = theory.signature();
    theory
        .axioms()
        .iter()
        .all(|ax| m.counterexample(sig, &ax.sequent).is_none())
}

/// A model viewed as a doctrine morphism into subsets: contexts go to carrier
/// products, formulas to subsets, term tuples to maps between products.
/// Formula denotations are memoized per context shape.
pub struct Interpretation<'m> {
    model: &'m FiniteModel,
    sig: &'m Signature,
    memo: RefCell<BTreeMap<(Vec<SortId>, Formula), Subset>>,
}

impl<'m> Interpretation<'m> {
    pub fn new(model: &'m FiniteModel, sig: &'m Signature) -> Result<Self> {
        model.validate(sig)?;
        Ok(Self {
            model,
            sig,
            memo: RefCell::new(BTreeMap::new()),
        })
    }

    pub fn model(&self) -> &FiniteModel {
        self.model
    }

    pub fn signature(&self) -> &Signature {
        self.sig
    }

    pub fn space(&self, ctx: &Context) -> Space {
        self.model.context_space(ctx)
    }

    pub fn formula(&self, phi: &Formula, ctx: &Context) -> Result<Subset> {
        let key = (ctx.sort_list(), phi.clone());
        if let Some(s) = self.memo.borrow().get(&key) {
            return Ok(s.clone());
        }
        let s = eval(self.model, self.sig, phi, ctx)?;
        self.memo.borrow_mut().insert(key, s.clone());
        Ok(s)
    }

    /// The function between products denoted by `f`, as a table from domain
    /// indices to codomain indices.
    pub fn tuple_map(&self, f: &TermTuple) -> Vec<usize> {
        let dom = self.space(f.domain());
        let cod = self.space(f.codomain());
        dom.tuples()
            .map(|env| {
                let vals: Vec<usize> = f
                    .components()
                    .iter()
                    .map(|t| self.model.eval_term(self.sig, t, &env))
                    .collect();
                cod.index(&vals)
            })
            .collect()
    }

    /// `f⁻¹(s)` for `s` a subset of the codomain of `f`.
    pub fn preimage(&self, s: &Subset, f: &TermTuple) -> Subset {
        let map = self.tuple_map(f);
        Subset::from_indices(
            map.len(),
            map.iter().enumerate().filter(|(_, j)| s.contains(**j)).map(|(i, _)| i),
        )
    }

    /// Image of `s ⊆ |d × c|` along the projection to `|c|`, where `d` is the
    /// first `d_len` coordinates of `prod`.
    pub fn exists(&self, s: &Subset, prod: &Context, d_len: usize) -> Subset {
        let space = self.space(prod);
        let rest = Space::new(space.dims()[d_len..].to_vec());
        Subset::from_indices(rest.size(), s.iter().map(|i| rest.index(&space.tuple(i)[d_len..])))
    }
}

/// Every model of `sig` whose carriers have between 1 and `max_size`
/// elements, in a fixed order: carrier sizes lexicographically, then table
/// contents as a counter with the last cell fastest.
///
/// Refuses when the largest size would need more than `max_table_bits` bits
/// of table contents (the base-2 logarithm of the number of models there).
pub fn enumerate_models(sig: &Signature, max_size: usize, max_table_bits: u32) -> Result<ModelEnumerator<'_>> {
    if max_size == 0 {
        return Err(Error::Refused("model size bound must be at least 1".to_owned()));
    }
    let bits = table_bits(sig, max_size);
    if bits > f64::from(max_table_bits) {
        return Err(Error::Refused(format!(
            "models of size {max_size} need {bits:.1} table bits, cap is {max_table_bits}"
        )));
    }
    Ok(ModelEnumerator {
        sig,
        max_size,
        sizes: Some(vec![1; sig.sort_count()]),
        cells: None,
    })
}

/// Base-2 logarithm of the number of models with every carrier of size `n`.
pub fn table_bits(sig: &Signature, n: usize) -> f64 {
    let mut bits = 0.0;
    for (_, decl) in sig.functions() {
        bits += pow(n, decl.args.len()) * log2(n);
    }
    for (_, decl) in sig.relations() {
        bits += pow(n, decl.args.len());
    }
    bits
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for k in 0..n {
        out = out
            .into_iter()
            .flat_map(|p: Vec<usize>| {
                (0..=k).map(move |at| {
                    let mut q = p.clone();
                    q.insert(at, k);
                    q
                })
            })
            .collect();
    }
    out
}

fn pow(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, _| acc * n as f64)
}

fn log2(n: usize) -> f64 {
    // exact enough for small carriers and free of std
    let mut lo = 0.0;
    let mut x = n as f64;
    while x >= 2.0 {
        x /= 2.0;
        lo += 1.0;
    }
    let mut frac = 0.0;
    let mut bit = 0.5;
    for _ in 0..30 {
        x *= x;
        if x >= 2.0 {
            x /= 2.0;
            frac += bit;
        }
        bit /= 2.0;
    }
    lo + frac
}

pub struct ModelEnumerator<'a> {
    sig: &'a Signature,
    max_size: usize,
    sizes: Option<Vec<usize>>,
    /// Per-cell counter and radix for the current sizes.
    cells: Option<(Vec<usize>, Vec<usize>)>,
}

impl ModelEnumerator<'_> {
    fn radices(&self, sizes: &[usize]) -> Vec<usize> {
        let mut out = Vec::new();
        for (_, decl) in self.sig.functions() {
            let n: usize = decl.args.iter().map(|s| sizes[s.0 as usize]).product();
            out.extend(core::iter::repeat_n(sizes[decl.result.0 as usize], n));
        }
        for (_, decl) in self.sig.relations() {
            let n: usize = decl.args.iter().map(|s| sizes[s.0 as usize]).product();
            out.extend(core::iter::repeat_n(2, n));
        }
        out
    }

    fn build(&self, sizes: &[usize], counter: &[usize]) -> FiniteModel {
        let mut pos = 0;
        let mut functions = Vec::new();
        for (_, decl) in self.sig.functions() {
            let n: usize = decl.args.iter().map(|s| sizes[s.0 as usize]).product();
            functions.push(counter[pos..pos + n].to_vec());
            pos += n;
        }
        let mut relations = Vec::new();
        for (_, decl) in self.sig.relations() {
            let n: usize = decl.args.iter().map(|s| sizes[s.0 as usize]).product();
            relations.push(Subset::from_indices(n, (0..n).filter(|i| counter[pos + i] == 1)));
            pos += n;
        }
        FiniteModel {
            sizes: sizes.to_vec(),
            functions,
            relations,
        }
    }
}

impl Iterator for ModelEnumerator<'_> {
    type Item = FiniteModel;

    fn next(&mut self) -> Option<FiniteModel> {
        loop {
            let sizes = self.sizes.clone()?;
            match self.cells.take() {
                None => {
                    let radices = self.radices(&sizes);
                    let counter = vec![0; radices.len()];
                    let m = self.build(&sizes, &counter);
                    self.cells = Some((counter, radices));
                    return Some(m);
                }
                Some((mut counter, radices)) => {
                    if crate::terms::advance(&mut counter, &radices) {
                        let m = self.build(&sizes, &counter);
                        self.cells = Some((counter, radices));
                        return Some(m);
                    }
                    let mut next = sizes;
                    let limits = vec![self.max_size; next.len()];
                    // sizes run over 1..=max_size, shifted to 0..max_size for the counter
                    next.iter_mut().for_each(|s| *s -= 1);
                    let more = crate::terms::advance(&mut next, &limits);
                    next.iter_mut().for_each(|s| *s += 1);
                    self.sizes = more.then_some(next);
                }
            }
        }
    }
}
