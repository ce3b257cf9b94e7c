//! Union-find congruence closure over a growing universe of terms, with a
//! store of relation facts between equivalence classes.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::terms::{Context, FuncId, RelId, Signature, SortId, Term};

pub(crate) type ClassId = u32;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Head {
    Var(usize),
    Func(FuncId),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Node {
    head: Head,
    children: Vec<ClassId>,
}

#[derive(Debug, Clone)]
pub(crate) struct EGraph {
    var_sorts: Vec<SortId>,
    results: Vec<SortId>,
    parent: Vec<ClassId>,
    sort: Vec<SortId>,
    /// Smallest known term of each class; meaningful at roots.
    repr: Vec<Term>,
    nodes: Vec<Node>,
    node_class: Vec<ClassId>,
    memo: BTreeMap<Node, ClassId>,
    members: BTreeMap<ClassId, Vec<usize>>,
    facts: BTreeMap<RelId, BTreeSet<Vec<ClassId>>>,
    dirty: bool,
}

impl EGraph {
    pub fn new(sig: &Signature, ctx: &Context) -> Self {
        Self {
            var_sorts: ctx.sort_list(),
            results: sig.functions().map(|(_, d)| d.result).collect(),
            parent: Vec::new(),
            sort: Vec::new(),
            repr: Vec::new(),
            nodes: Vec::new(),
            node_class: Vec::new(),
            memo: BTreeMap::new(),
            members: BTreeMap::new(),
            facts: BTreeMap::new(),
            dirty: false,
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn find(&self, mut c: ClassId) -> ClassId {
        while self.parent[c as usize] != c {
            c = self.parent[c as usize];
        }
        c
    }

    pub fn repr(&self, c: ClassId) -> &Term {
        &self.repr[self.find(c) as usize]
    }

    /// Adds the term `pat` with its variables read through `subst`, returning
    /// its class.
    pub fn add(&mut self, pat: &Term, subst: &[ClassId]) -> ClassId {
        match pat {
            Term::Var(v) => self.find(subst[*v]),
            Term::App(f, args) => {
                let children: Vec<ClassId> = args.iter().map(|a| self.add(a, subst)).collect();
                self.add_node(Head::Func(*f), children)
            }
        }
    }

    /// Adds the variable node for position `v` of the context.
    pub fn add_var(&mut self, v: usize) -> ClassId {
        self.add_node(Head::Var(v), Vec::new())
    }

    fn add_node(&mut self, head: Head, children: Vec<ClassId>) -> ClassId {
        self.rebuild();
        let children: Vec<ClassId> = children.into_iter().map(|c| self.find(c)).collect();
        let node = Node { head, children };
        if let Some(c) = self.memo.get(&node) {
            return self.find(*c);
        }
        let id = self.nodes.len() as ClassId;
        let (sort, term) = match &node.head {
            Head::Var(v) => (self.var_sorts[*v], Term::Var(*v)),
            Head::Func(f) => (
                self.results[f.0 as usize],
                Term::App(*f, node.children.iter().map(|c| self.repr(*c).clone()).collect()),
            ),
        };
        self.parent.push(id);
        self.sort.push(sort);
        self.repr.push(term);
        self.memo.insert(node.clone(), id);
        self.nodes.push(node);
        self.node_class.push(id);
        self.members.insert(id, alloc::vec![id as usize]);
        id
    }

    /// The class of `pat` under `subst`, if every subterm is present.
    pub fn lookup(&mut self, pat: &Term, subst: &[ClassId]) -> Option<ClassId> {
        self.rebuild();
        self.get(pat, subst)
    }

    /// As [`lookup`](Self::lookup), on a graph that is already rebuilt.
    pub fn get(&self, pat: &Term, subst: &[ClassId]) -> Option<ClassId> {
        match pat {
            Term::Var(v) => Some(self.find(subst[*v])),
            Term::App(f, args) => {
                let mut children = Vec::with_capacity(args.len());
                for a in args {
                    children.push(self.get(a, subst)?);
                }
                let node = Node {
                    head: Head::Func(*f),
                    children,
                };
                self.memo.get(&node).map(|c| self.find(*c))
            }
        }
    }

    pub fn union(&mut self, a: ClassId, b: ClassId) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        let (root, other) = if a < b { (a, b) } else { (b, a) };
        self.parent[other as usize] = root;
        let (r, o) = (&self.repr[root as usize], &self.repr[other as usize]);
        if (o.depth(), o) < (r.depth(), r) {
            self.repr[root as usize] = o.clone();
        }
        let moved = self.members.remove(&other).unwrap_or_default();
        self.members.entry(root).or_default().extend(moved);
        self.dirty = true;
        true
    }

    /// Restores the congruence invariant: nodes with equal heads and equal
    /// child classes belong to the same class.
    pub fn rebuild(&mut self) {
        while self.dirty {
            self.dirty = false;
            let mut memo: BTreeMap<Node, ClassId> = BTreeMap::new();
            let mut merges = Vec::new();
            for i in 0..self.nodes.len() {
                let children = self.nodes[i].children.iter().map(|c| self.find(*c)).collect();
                self.nodes[i].children = children;
                let class = self.find(self.node_class[i]);
                match memo.get(&self.nodes[i]) {
                    Some(c) if self.find(*c) != class => merges.push((*c, class)),
                    Some(_) => {}
                    None => {
                        memo.insert(self.nodes[i].clone(), class);
                    }
                }
            }
            self.memo = memo;
            for (a, b) in merges {
                self.union(a, b);
            }
        }
        let stale = self
            .facts
            .values()
            .any(|set| set.iter().any(|t| t.iter().any(|c| self.parent[*c as usize] != *c)));
        if stale {
            let facts = core::mem::take(&mut self.facts);
            for (r, set) in facts {
                let canon: BTreeSet<Vec<ClassId>> = set
                    .into_iter()
                    .map(|t| t.into_iter().map(|c| self.find(c)).collect())
                    .collect();
                self.facts.insert(r, canon);
            }
        }
    }

    pub fn add_fact(&mut self, r: RelId, args: Vec<ClassId>) -> bool {
        let args = args.into_iter().map(|c| self.find(c)).collect();
        self.facts.entry(r).or_default().insert(args)
    }

    pub fn has_fact(&mut self, r: RelId, args: &[ClassId]) -> bool {
        self.rebuild();
        let canon: Vec<ClassId> = args.iter().map(|c| self.find(*c)).collect();
        self.facts.get(&r).is_some_and(|s| s.contains(&canon))
    }

    pub fn facts(&self, r: RelId) -> impl Iterator<Item = &Vec<ClassId>> {
        self.facts.get(&r).into_iter().flatten()
    }

    /// Child classes of every node in class `c` headed by `f`.
    pub fn apps_in(&self, c: ClassId, f: FuncId) -> impl Iterator<Item = &[ClassId]> {
        let root = self.find(c);
        self.members
            .get(&root)
            .into_iter()
            .flatten()
            .map(|i| &self.nodes[*i])
            .filter(move |n| n.head == Head::Func(f))
            .map(|n| n.children.as_slice())
    }

    /// Root classes of sort `s`, in creation order.
    pub fn classes_of(&self, s: SortId) -> impl Iterator<Item = ClassId> + '_ {
        self.members
            .keys()
            .copied()
            .filter(move |c| self.sort[*c as usize] == s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn congruence_propagates() {
        let mut sig = Signature::new();
        let s = sig.add_sort("S").unwrap();
        let a = sig.add_constant("a", s).unwrap();
        let b = sig.add_constant("b", s).unwrap();
        let f = sig.add_function("f", &[s], s).unwrap();
        let mut eg = EGraph::new(&sig, &Context::empty());
        let fa = eg.add(&Term::App(f, alloc::vec![Term::constant(a)]), &[]);
        let fb = eg.add(&Term::App(f, alloc::vec![Term::constant(b)]), &[]);
        assert_ne!(eg.find(fa), eg.find(fb));
        let ca = eg.lookup(&Term::constant(a), &[]).unwrap();
        let cb = eg.lookup(&Term::constant(b), &[]).unwrap();
        eg.union(ca, cb);
        eg.rebuild();
        assert_eq!(eg.find(fa), eg.find(fb));
        assert_eq!(*eg.repr(fb), Term::App(f, alloc::vec![Term::constant(a)]));
    }

    #[test]
    fn facts_follow_unions() {
        let mut sig = Signature::new();
        let s = sig.add_sort("S").unwrap();
        let r = sig.add_relation("R", &[s]).unwrap();
        let ctx = Context::new([("x", s), ("y", s)]).unwrap();
        let mut eg = EGraph::new(&sig, &ctx);
        let x = eg.add_var(0);
        let y = eg.add_var(1);
        eg.add_fact(r, alloc::vec![y]);
        assert!(!eg.has_fact(r, &[x]));
        eg.union(x, y);
        assert!(eg.has_fact(r, &[x]));
        assert_eq!(eg.classes_of(s).count(), 1);
    }
}
