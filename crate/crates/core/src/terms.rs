//! Multi-sorted signatures and the category of terms.
//!
//! Objects are [`Context`]s (ordered lists of sorted variables), morphisms are
//! [`TermTuple`]s, composition is simultaneous substitution and the product of
//! two contexts is their concatenation with the left operand first. Variables
//! are positional: [`Term::Var`] holds an index into the ambient context and
//! names are only kept for printing.

use alloc::borrow::ToOwned;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SortId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FuncId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RelId(pub u32);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuncDecl {
    pub name: String,
    pub args: Vec<SortId>,
    pub result: SortId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelDecl {
    pub name: String,
    pub args: Vec<SortId>,
}

/// Sorts, function symbols and relation symbols, in declaration order.
///
/// Sort names form one namespace; function and relation names share a second
/// one so that `name(...)` is never ambiguous.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    sorts: Vec<String>,
    functions: Vec<FuncDecl>,
    relations: Vec<RelDecl>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_sort(&mut self, name: &str) -> Result<SortId> {
        if self.sort(name).is_some() {
            return Err(Error::Duplicate(name.to_owned()));
        }
        self.sorts.push(name.to_owned());
        Ok(SortId(self.sorts.len() as u32 - 1))
    }

    pub fn add_function(&mut self, name: &str, args: &[SortId], result: SortId) -> Result<FuncId> {
        self.check_fresh_symbol(name)?;
        for s in args.iter().chain(core::iter::once(&result)) {
            self.check_sort(*s)?;
        }
        self.functions.push(FuncDecl {
            name: name.to_owned(),
            args: args.to_vec(),
            result,
        });
        Ok(FuncId(self.functions.len() as u32 - 1))
    }

    pub fn add_constant(&mut self, name: &str, sort: SortId) -> Result<FuncId> {
        self.add_function(name, &[], sort)
    }

    pub fn add_relation(&mut self, name: &str, args: &[SortId]) -> Result<RelId> {
        self.check_fresh_symbol(name)?;
        for s in args {
            self.check_sort(*s)?;
        }
        self.relations.push(RelDecl {
            name: name.to_owned(),
            args: args.to_vec(),
        });
        Ok(RelId(self.relations.len() as u32 - 1))
    }

    fn check_fresh_symbol(&self, name: &str) -> Result<()> {
        if self.function(name).is_some() || self.relation(name).is_some() {
            return Err(Error::Duplicate(name.to_owned()));
        }
        Ok(())
    }

    fn check_sort(&self, s: SortId) -> Result<()> {
        if (s.0 as usize) < self.sorts.len() {
            Ok(())
        } else {
            Err(Error::UnknownSort(format!("#{}", s.0)))
        }
    }

    pub fn sort(&self, name: &str) -> Option<SortId> {
        self.sorts.iter().position(|s| s == name).map(|i| SortId(i as u32))
    }

    pub fn function(&self, name: &str) -> Option<FuncId> {
        self.functions
            .iter()
            .position(|f| f.name == name)
            .map(|i| FuncId(i as u32))
    }

    pub fn relation(&self, name: &str) -> Option<RelId> {
        self.relations
            .iter()
            .position(|r| r.name == name)
            .map(|i| RelId(i as u32))
    }

    pub fn sort_name(&self, s: SortId) -> &str {
        &self.sorts[s.0 as usize]
    }

    pub fn func(&self, f: FuncId) -> &FuncDecl {
        &self.functions[f.0 as usize]
    }

    pub fn rel(&self, r: RelId) -> &RelDecl {
        &self.relations[r.0 as usize]
    }

    pub fn sorts(&self) -> impl Iterator<Item = SortId> + '_ {
        (0..self.sorts.len() as u32).map(SortId)
    }

    pub fn functions(&self) -> impl Iterator<Item = (FuncId, &FuncDecl)> + '_ {
        self.functions.iter().enumerate().map(|(i, f)| (FuncId(i as u32), f))
    }

    pub fn relations(&self) -> impl Iterator<Item = (RelId, &RelDecl)> + '_ {
        self.relations.iter().enumerate().map(|(i, r)| (RelId(i as u32), r))
    }

    pub fn sort_count(&self) -> usize {
        self.sorts.len()
    }

    pub fn function_count(&self) -> usize {
        self.functions.len()
    }

    pub fn relation_count(&self) -> usize {
        self.relations.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Binding {
    pub name: String,
    pub sort: SortId,
}

/// An object of the term category: an ordered list of distinct, sorted
/// variables. The empty context is terminal.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Context {
    bindings: Vec<Binding>,
}

impl Context {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new<I, S>(bindings: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, SortId)>,
        S: Into<String>,
    {
        let mut ctx = Self::empty();
        for (name, sort) in bindings {
            ctx.push(name, sort)?;
        }
        Ok(ctx)
    }

    /// Builds a context from sorts alone, naming the variables `x0, x1, ...`.
    pub fn from_sorts(sorts: &[SortId]) -> Self {
        Self {
            bindings: sorts
                .iter()
                .enumerate()
                .map(|(i, s)| Binding {
                    name: format!("x{i}"),
                    sort: *s,
                })
                .collect(),
        }
    }

    pub fn push(&mut self, name: impl Into<String>, sort: SortId) -> Result<usize> {
        let name = name.into();
        if self.index_of(&name).is_some() {
            return Err(Error::Duplicate(name));
        }
        self.bindings.push(Binding { name, sort });
        Ok(self.bindings.len() - 1)
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn bindings(&self) -> &[Binding] {
        &self.bindings
    }

    pub fn sort_of(&self, i: usize) -> SortId {
        self.bindings[i].sort
    }

    pub fn name_of(&self, i: usize) -> &str {
        &self.bindings[i].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.bindings.iter().position(|b| b.name == name)
    }

    pub fn sorts(&self) -> impl Iterator<Item = SortId> + '_ {
        self.bindings.iter().map(|b| b.sort)
    }

    pub fn sort_list(&self) -> Vec<SortId> {
        self.sorts().collect()
    }

    /// Contexts are compared positionally: names never matter for typing.
    pub fn same_shape(&self, other: &Context) -> bool {
        self.len() == other.len() && self.sorts().eq(other.sorts())
    }

    /// A variable name not yet used in this context, derived from `base` by
    /// appending primes.
    pub fn fresh_name(&self, base: &str) -> String {
        let mut name = base.to_owned();
        while self.index_of(&name).is_some() {
            name.push('\'');
        }
        name
    }

    /// `self × other`: concatenation, renaming clashing names of `other`.
    pub fn concat(&self, other: &Context) -> Context {
        let mut out = self.clone();
        for b in &other.bindings {
            let name = out.fresh_name(&b.name);
            out.bindings.push(Binding { name, sort: b.sort });
        }
        out
    }

    /// The sub-context of bindings `start..start + len`.
    pub fn slice(&self, start: usize, len: usize) -> Context {
        Context {
            bindings: self.bindings[start..start + len].to_vec(),
        }
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> ContextDisplay<'a> {
        ContextDisplay { ctx: self, sig }
    }

    pub(crate) fn mismatch(expected: &Context, found: &Context, sig: Option<&Signature>) -> Error {
        let show = |c: &Context| match sig {
            Some(sig) => c.display(sig).to_string(),
            None => c
                .bindings
                .iter()
                .map(|b| format!("{}:#{}", b.name, b.sort.0))
                .collect::<Vec<_>>()
                .join(", "),
        };
        Error::ContextMismatch {
            expected: show(expected),
            found: show(found),
        }
    }
}

pub struct ContextDisplay<'a> {
    ctx: &'a Context,
    sig: &'a Signature,
}

impl fmt::Display for ContextDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.ctx.bindings.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}:{}", b.name, self.sig.sort_name(b.sort))?;
        }
        Ok(())
    }
}

/// A term over some context: a variable (by position) or a function symbol
/// applied to argument terms. Constants are nullary applications.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(usize),
    App(FuncId, Vec<Term>),
}

impl Term {
    pub fn constant(f: FuncId) -> Term {
        Term::App(f, Vec::new())
    }

    /// Variables have depth 0, constants depth 1.
    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    pub fn is_closed(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_closed),
        }
    }

    /// Sort of the term in `ctx`, checking well-sortedness on the way.
    pub fn sort(&self, sig: &Signature, ctx: &Context) -> Result<SortId> {
        match self {
            Term::Var(i) => {
                if *i < ctx.len() {
                    Ok(ctx.sort_of(*i))
                } else {
                    Err(Error::IllSorted(format!(
                        "variable #{i} out of range for a context of length {}",
                        ctx.len()
                    )))
                }
            }
            Term::App(f, args) => {
                if f.0 as usize >= sig.function_count() {
                    return Err(Error::UnknownSymbol(format!("function #{}", f.0)));
                }
                let decl = sig.func(*f);
                if decl.args.len() != args.len() {
                    return Err(Error::IllSorted(format!(
                        "`{}` expects {} arguments, got {}",
                        decl.name,
                        decl.args.len(),
                        args.len()
                    )));
                }
                for (k, (arg, want)) in args.iter().zip(&decl.args).enumerate() {
                    let got = arg.sort(sig, ctx)?;
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
                Ok(decl.result)
            }
        }
    }

    /// Simultaneous substitution of `components[i]` for variable `i`.
    pub fn substitute(&self, components: &[Term]) -> Term {
        match self {
            Term::Var(i) => components[*i].clone(),
            Term::App(f, args) => Term::App(*f, args.iter().map(|a| a.substitute(components)).collect()),
        }
    }

    /// Renames variables through `map` without changing the term shape.
    pub fn rename(&self, map: &impl Fn(usize) -> usize) -> Term {
        match self {
            Term::Var(i) => Term::Var(map(*i)),
            Term::App(f, args) => Term::App(*f, args.iter().map(|a| a.rename(map)).collect()),
        }
    }

    pub fn max_var(&self) -> Option<usize> {
        match self {
            Term::Var(i) => Some(*i),
            Term::App(_, args) => args.iter().filter_map(Term::max_var).max(),
        }
    }

    pub fn visit_vars(&self, f: &mut impl FnMut(usize)) {
        match self {
            Term::Var(i) => f(*i),
            Term::App(_, args) => args.iter().for_each(|a| a.visit_vars(f)),
        }
    }

    pub fn display<'a>(&'a self, sig: &'a Signature, ctx: &'a Context) -> TermDisplay<'a> {
        TermDisplay { term: self, sig, ctx }
    }
}

pub struct TermDisplay<'a> {
    term: &'a Term,
    sig: &'a Signature,
    ctx: &'a Context,
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.term {
            Term::Var(i) if *i < self.ctx.len() => f.write_str(self.ctx.name_of(*i)),
            Term::Var(i) => write!(f, "#{i}"),
            Term::App(sym, args) => {
                f.write_str(&self.sig.func(*sym).name)?;
                if !args.is_empty() {
                    f.write_str("(")?;
                    for (k, a) in args.iter().enumerate() {
                        if k > 0 {
                            f.write_str(", ")?;
                        }
                        write!(f, "{}", a.display(self.sig, self.ctx))?;
                    }
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

/// A morphism `domain → codomain` of the term category: one term over
/// `domain` per binding of `codomain`, of matching sort.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TermTuple {
    domain: Context,
    codomain: Context,
    components: Vec<Term>,
}

impl TermTuple {
    pub fn new(sig: &Signature, domain: Context, codomain: Context, components: Vec<Term>) -> Result<Self> {
        if components.len() != codomain.len() {
            return Err(Error::IllSorted(format!(
                "tuple has {} components for a codomain of length {}",
                components.len(),
                codomain.len()
            )));
        }
        for (i, t) in components.iter().enumerate() {
            let s = t.sort(sig, &domain)?;
            if s != codomain.sort_of(i) {
                return Err(Error::IllSorted(format!(
                    "component {} has sort {}, expected {}",
                    i + 1,
                    sig.sort_name(s),
                    sig.sort_name(codomain.sort_of(i))
                )));
            }
        }
        Ok(Self::from_parts(domain, codomain, components))
    }

    pub(crate) fn from_parts(domain: Context, codomain: Context, components: Vec<Term>) -> Self {
        debug_assert_eq!(components.len(), codomain.len());
        Self {
            domain,
            codomain,
            components,
        }
    }

    pub fn identity(c: &Context) -> Self {
        Self::from_parts(c.clone(), c.clone(), (0..c.len()).map(Term::Var).collect())
    }

    /// The unique arrow `c → ∅`.
    pub fn to_terminal(c: &Context) -> Self {
        Self::from_parts(c.clone(), Context::empty(), Vec::new())
    }

    /// The variable tuple selecting bindings `start..start + len` of `domain`.
    pub fn projection(domain: &Context, start: usize, len: usize) -> Self {
        Self::from_parts(
            domain.clone(),
            domain.slice(start, len),
            (start..start + len).map(Term::Var).collect(),
        )
    }

    /// `Δ_d : d → d × d`.
    pub fn diagonal(d: &Context) -> Self {
        let vars: Vec<Term> = (0..d.len()).chain(0..d.len()).map(Term::Var).collect();
        Self::from_parts(d.clone(), d.concat(d), vars)
    }

    pub fn domain(&self) -> &Context {
        &self.domain
    }

    pub fn codomain(&self) -> &Context {
        &self.codomain
    }

    pub fn components(&self) -> &[Term] {
        &self.components
    }

    pub fn into_components(self) -> Vec<Term> {
        self.components
    }

    pub fn depth(&self) -> usize {
        self.components.iter().map(Term::depth).max().unwrap_or(0)
    }

    pub fn is_identity(&self) -> bool {
        self.domain.same_shape(&self.codomain) && self.components.iter().enumerate().all(|(i, t)| *t == Term::Var(i))
    }

    /// `self ∘ f`: substitutes the components of `f` into `self`.
    pub fn after(&self, f: &TermTuple) -> Result<TermTuple> {
        compose(self, f)
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> TupleDisplay<'a> {
        TupleDisplay { tuple: self, sig }
    }
}

pub struct TupleDisplay<'a> {
    tuple: &'a TermTuple,
    sig: &'a Signature,
}

impl fmt::Display for TupleDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let comps = &self.tuple.components;
        if comps.len() == 1 {
            return write!(f, "{}", comps[0].display(self.sig, &self.tuple.domain));
        }
        f.write_str("(")?;
        for (i, t) in comps.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}", t.display(self.sig, &self.tuple.domain))?;
        }
        f.write_str(")")
    }
}

/// `g ∘ f`, defined when `codomain(f) = domain(g)`.
pub fn compose(g: &TermTuple, f: &TermTuple) -> Result<TermTuple> {
    if !f.codomain.same_shape(&g.domain) {
        return Err(Context::mismatch(&g.domain, &f.codomain, None));
    }
    Ok(TermTuple::from_parts(
        f.domain.clone(),
        g.codomain.clone(),
        g.components.iter().map(|t| t.substitute(&f.components)).collect(),
    ))
}

/// The product `c × d` with its two projections.
pub fn product(c: &Context, d: &Context) -> (Context, TermTuple, TermTuple) {
    let prod = c.concat(d);
    let left = TermTuple::projection(&prod, 0, c.len());
    let right = TermTuple::projection(&prod, c.len(), d.len());
    (prod, left, right)
}

/// `⟨f, g⟩`: the mediating arrow into the product of the two codomains.
pub fn pairing(f: &TermTuple, g: &TermTuple) -> Result<TermTuple> {
    if !f.domain.same_shape(&g.domain) {
        return Err(Context::mismatch(&f.domain, &g.domain, None));
    }
    let mut components = f.components.clone();
    components.extend(g.components.iter().cloned());
    Ok(TermTuple::from_parts(
        f.domain.clone(),
        f.codomain.concat(&g.codomain),
        components,
    ))
}

/// Every well-sorted tuple `domain → codomain` whose components have depth at
/// most `max_depth`, without repetition.
///
/// Order: by tuple depth (the maximum component depth), then lexicographically
/// by component, where the terms of each sort are listed by depth, then
/// symbol declaration order, then argument order.
pub fn enumerate_tuples<'a>(
    sig: &'a Signature,
    domain: &Context,
    codomain: &Context,
    max_depth: usize,
) -> TupleEnumerator<'a> {
    TupleEnumerator::new(sig, domain, codomain, max_depth)
}

pub struct TupleEnumerator<'a> {
    sig: &'a Signature,
    domain: Context,
    codomain: Context,
    max_depth: usize,
    term_cap: usize,
    /// `terms[s]` lists the terms of sort `s` by nondecreasing depth.
    terms: Vec<Vec<(Term, usize)>>,
    /// `counts[k][s]` = number of terms of sort `s` with depth `<= k`.
    counts: Vec<Vec<usize>>,
    level: usize,
    odometer: Option<Vec<usize>>,
    truncated: bool,
    done: bool,
}

impl<'a> TupleEnumerator<'a> {
    fn new(sig: &'a Signature, domain: &Context, codomain: &Context, max_depth: usize) -> Self {
        let mut terms = vec![Vec::new(); sig.sort_count()];
        for (i, b) in domain.bindings().iter().enumerate() {
            terms[b.sort.0 as usize].push((Term::Var(i), 0));
        }
        let counts = vec![terms.iter().map(Vec::len).collect()];
        Self {
            sig,
            domain: domain.clone(),
            codomain: codomain.clone(),
            max_depth,
            term_cap: usize::MAX,
            terms,
            counts,
            level: 0,
            odometer: None,
            truncated: false,
            done: false,
        }
    }

    /// Stops the enumeration once any sort would list more than `cap` terms;
    /// [`truncated`](Self::truncated) then reports it.
    pub fn with_term_cap(mut self, cap: usize) -> Self {
        self.term_cap = cap;
        self
    }

    pub fn truncated(&self) -> bool {
        self.truncated
    }

    /// Extends `terms` with every term of depth exactly `k`.
    fn grow_to(&mut self, k: usize) -> bool {
        while self.counts.len() <= k {
            let depth = self.counts.len();
            let below = self.counts[depth - 1].clone();
            let mut fresh: Vec<Vec<(Term, usize)>> = vec![Vec::new(); self.sig.sort_count()];
            for (fid, decl) in self.sig.functions() {
                if decl.args.is_empty() {
                    if depth == 1 {
                        fresh[decl.result.0 as usize].push((Term::constant(fid), 1));
                    }
                    continue;
                }
                let limits: Vec<usize> = decl.args.iter().map(|s| below[s.0 as usize]).collect();
                if limits.contains(&0) {
                    continue;
                }
                let mut idx = vec![0usize; limits.len()];
                loop {
                    let args: Vec<&(Term, usize)> = idx
                        .iter()
                        .zip(&decl.args)
                        .map(|(i, s)| &self.terms[s.0 as usize][*i])
                        .collect();
                    if args.iter().map(|(_, d)| *d).max() == Some(depth - 1) {
                        let t = Term::App(fid, args.iter().map(|(t, _)| t.clone()).collect());
                        fresh[decl.result.0 as usize].push((t, depth));
                    }
                    if !advance(&mut idx, &limits) {
                        break;
                    }
                }
            }
            for (s, new_terms) in fresh.into_iter().enumerate() {
                self.terms[s].extend(new_terms);
                if self.terms[s].len() > self.term_cap {
                    self.truncated = true;
                    return false;
                }
            }
            self.counts.push(self.terms.iter().map(Vec::len).collect());
        }
        true
    }

    fn emit(&self, idx: &[usize]) -> TermTuple {
        let components = idx
            .iter()
            .zip(self.codomain.sorts())
            .map(|(i, s)| self.terms[s.0 as usize][*i].0.clone())
            .collect();
        TermTuple::from_parts(self.domain.clone(), self.codomain.clone(), components)
    }
}

impl Iterator for TupleEnumerator<'_> {
    type Item = TermTuple;

    fn next(&mut self) -> Option<TermTuple> {
        loop {
            if self.done {
                return None;
            }
            if self.level > self.max_depth {
                self.done = true;
                return None;
            }
            if self.codomain.is_empty() {
                // the terminal map is the only tuple, of depth 0
                self.done = true;
                return Some(self.emit(&[]));
            }
            if !self.grow_to(self.level) {
                self.done = true;
                return None;
            }
            let limits: Vec<usize> = self
                .codomain
                .sorts()
                .map(|s| self.counts[self.level][s.0 as usize])
                .collect();
            let idx = match self.odometer.take() {
                None if limits.contains(&0) => {
                    self.level += 1;
                    continue;
                }
                None => vec![0; limits.len()],
                Some(mut idx) => {
                    if !advance(&mut idx, &limits) {
                        self.level += 1;
                        continue;
                    }
                    idx
                }
            };
            let depth = idx
                .iter()
                .zip(self.codomain.sorts())
                .map(|(i, s)| self.terms[s.0 as usize][*i].1)
                .max()
                .unwrap_or(0);
            let hit = depth == self.level;
            let out = hit.then(|| self.emit(&idx));
            self.odometer = Some(idx);
            if let Some(t) = out {
                return Some(t);
            }
        }
    }
}

/// Mixed-radix increment, last position fastest. Returns `false` on wrap.
pub(crate) fn advance(idx: &mut [usize], limits: &[usize]) -> bool {
    for k in (0..idx.len()).rev() {
        idx[k] += 1;
        if idx[k] < limits[k] {
            return true;
        }
        idx[k] = 0;
    }
    false
}
