mod common;

use common::*;
use doctrina_core::completion::{exists_along, extend_morphism, join, leq, meet, subst_ex, unit, ExElement, Mode};
use doctrina_core::logic::{substitute, Formula, Fragment, SaturationBudget, Theory};
use doctrina_core::semantics::{enumerate_models, FiniteModel, Interpretation, Subset};
use doctrina_core::terms::{compose, Context, Signature, SortId};
use proptest::prelude::*;

const BUDGET: SaturationBudget = SaturationBudget {
    max_rounds: 8,
    max_splits: 4,
    max_terms: 300,
};

fn element(sig: &Signature, base: &Context, ch: &mut Choices) -> ExElement {
    let pairs = (0..ch.pick(4))
        .map(|_| {
            let w = context(sig, ch, 2);
            let body = formula(sig, &w.concat(base), 1, 2, ch);
            (w, body)
        })
        .collect();
    ExElement::new(sig, base.clone(), pairs, Mode::Coherent).unwrap()
}

/// Pairs as (witness sorts, body), ignoring witness names.
fn shape(a: &ExElement) -> Vec<(Vec<SortId>, Formula)> {
    a.pairs()
        .iter()
        .map(|p| (p.witness.sort_list(), p.body.clone()))
        .collect()
}

/// `⋃_i π(⟦x_i⟧)` computed by brute force over environments.
fn oracle_value(m: &FiniteModel, sig: &Signature, a: &ExElement) -> Vec<bool> {
    environments(m, a.base())
        .iter()
        .map(|env| {
            a.pairs().iter().any(|p| {
                environments(m, &p.witness).iter().any(|w| {
                    let mut full = w.clone();
                    full.extend(env);
                    oracle_holds(m, sig, &p.body, &full)
                })
            })
        })
        .collect()
}

fn bits(s: &Subset) -> Vec<bool> {
    (0..s.len()).map(|i| s.contains(i)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn leq_is_reflexive_with_identities(r in raw()) {
        let mut ch = Choices::new(&r);
        let sig = signature(&mut ch);
        let th = Theory::new(sig.clone(), Fragment::Coherent);
        let base = context(&sig, &mut ch, 2);
        let a = element(&sig, &base, &mut ch);
        let out = leq(&th, &a, &a, 0, BUDGET).unwrap();
        prop_assert!(out.is_proved());
        prop_assert!(leq(&th, &ExElement::bottom(base.clone()), &a, 0, BUDGET).unwrap().is_proved());
        prop_assert!(leq(&th, &a, &ExElement::top(base, Mode::Coherent), 0, BUDGET).unwrap().is_proved());
    }

    #[test]
    fn unit_is_natural(r in raw()) {
        let mut ch = Choices::new(&r);
        let sig = signature(&mut ch);
        let (c, d) = (context(&sig, &mut ch, 2), context(&sig, &mut ch, 2));
        let phi = formula(&sig, &c, 1, 2, &mut ch);
        let f = tuple(&sig, &d, &c, 1, &mut ch);
        let lhs = subst_ex(&unit(&sig, &phi, &c, Mode::Coherent).unwrap(), &f).unwrap();
        let rhs = unit(&sig, &substitute(&phi, &c, &f).unwrap(), &d, Mode::Coherent).unwrap();
        prop_assert_eq!(shape(&lhs), shape(&rhs));
    }

    #[test]
    fn reindexing_is_functorial(r in raw()) {
        let mut ch = Choices::new(&r);
        let sig = signature(&mut ch);
        let (x, y, z) = (context(&sig, &mut ch, 2), context(&sig, &mut ch, 2), context(&sig, &mut ch, 2));
        let a = element(&sig, &z, &mut ch);
        let g = tuple(&sig, &y, &z, 1, &mut ch);
        let f = tuple(&sig, &x, &y, 1, &mut ch);
        let twice = subst_ex(&subst_ex(&a, &g).unwrap(), &f).unwrap();
        let once = subst_ex(&a, &compose(&g, &f).unwrap()).unwrap();
        prop_assert_eq!(shape(&twice), shape(&once));
    }

    #[test]
    fn extend_morphism_matches_brute_force(r in raw()) {
        let mut ch = Choices::new(&r);
        let sig = signature(&mut ch);
        let base = context(&sig, &mut ch, 2);
        let a = element(&sig, &base, &mut ch);
        let b = element(&sig, &base, &mut ch);
        let sizes: Vec<usize> = sig.sorts().map(|_| 1 + ch.pick(2)).collect();
        let m = model(&sig, &sizes, &mut ch);
        let interp = Interpretation::new(&m, &sig).unwrap();
        let va = extend_morphism(&interp, &a).unwrap();
        prop_assert_eq!(bits(&va), oracle_value(&m, &sig, &a));
        let vb = extend_morphism(&interp, &b).unwrap();
        prop_assert_eq!(extend_morphism(&interp, &meet(&a, &b).unwrap()).unwrap(), va.intersection(&vb));
        prop_assert_eq!(extend_morphism(&interp, &join(&a, &b).unwrap()).unwrap(), va.union(&vb));
    }

    #[test]
    fn exists_along_is_image(r in raw()) {
        let mut ch = Choices::new(&r);
        let sig = signature(&mut ch);
        let (d, c) = (context(&sig, &mut ch, 2), context(&sig, &mut ch, 1));
        let dc = d.concat(&c);
        let a = element(&sig, &dc, &mut ch);
        let sizes: Vec<usize> = sig.sorts().map(|_| 1 + ch.pick(2)).collect();
        let m = model(&sig, &sizes, &mut ch);
        let interp = Interpretation::new(&m, &sig).unwrap();
        let inner = extend_morphism(&interp, &a).unwrap();
        let projected = interp.exists(&inner, &dc, d.len());
        let sigma = exists_along(&a, &d).unwrap();
        prop_assert_eq!(extend_morphism(&interp, &sigma).unwrap(), projected);
    }

    #[test]
    fn proved_order_is_monotone_in_models(r in raw()) {
        let mut ch = Choices::new(&r);
        let sig = signature(&mut ch);
        let th = theory(&sig, &mut ch, 2, Fragment::Coherent);
        let base = context(&sig, &mut ch, 1);
        let a = element(&sig, &base, &mut ch);
        let b = element(&sig, &base, &mut ch);
        prop_assume!(leq(&th, &a, &b, 1, BUDGET).unwrap().is_proved());
        let Ok(models) = enumerate_models(&sig, 2, 12) else {
            return Ok(());
        };
        for m in models.filter(|m| oracle_models_theory(m, &th)) {
            let interp = Interpretation::new(&m, &sig).unwrap();
            let (va, vb) = (extend_morphism(&interp, &a).unwrap(), extend_morphism(&interp, &b).unwrap());
            prop_assert!(va.is_subset(&vb));
        }
    }

    #[test]
    fn order_is_transitive_at_summed_depth(r in raw()) {
        let mut ch = Choices::new(&r);
        let sig = signature(&mut ch);
        let th = Theory::new(sig.clone(), Fragment::Coherent);
        let base = context(&sig, &mut ch, 1);
        let a = element(&sig, &base, &mut ch);
        let b = join(&a, &element(&sig, &base, &mut ch)).unwrap();
        let c = join(&b, &element(&sig, &base, &mut ch)).unwrap();
        let a = meet(&a, &element(&sig, &base, &mut ch)).unwrap();
        prop_assume!(leq(&th, &a, &b, 0, BUDGET).unwrap().is_proved());
        prop_assume!(leq(&th, &b, &c, 0, BUDGET).unwrap().is_proved());
        prop_assert!(leq(&th, &a, &c, 0, BUDGET).unwrap().is_proved());
    }
}
