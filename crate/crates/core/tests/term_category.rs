mod common;

use common::{context, raw, signature, tuple, Choices};
use doctrina_core::terms::{compose, enumerate_tuples, pairing, product, TermTuple};
use proptest::prelude::*;

proptest! {
    #[test]
    fn composition_is_associative(r in raw()) {
        let mut ch = Choices::new(&r);
        let sig = signature(&mut ch);
        let cs: Vec<_> = (0..4).map(|_| context(&sig, &mut ch, 3)).collect();
        let f = tuple(&sig, &cs[0], &cs[1], 3, &mut ch);
        let g = tuple(&sig, &cs[1], &cs[2], 3, &mut ch);
        let h = tuple(&sig, &cs[2], &cs[3], 3, &mut ch);
        let left = compose(&h, &compose(&g, &f).unwrap()).unwrap();
        let right = compose(&compose(&h, &g).unwrap(), &f).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn identities_are_neutral(r in raw()) {
        let mut ch = Choices::new(&r);
        let sig = signature(&mut ch);
        let (c, d) = (context(&sig, &mut ch, 3), context(&sig, &mut ch, 3));
        let f = tuple(&sig, &c, &d, 3, &mut ch);
        prop_assert_eq!(&compose(&TermTuple::identity(&d), &f).unwrap(), &f);
        prop_assert_eq!(&compose(&f, &TermTuple::identity(&c)).unwrap(), &f);
    }

    #[test]
    fn pairing_is_the_product_arrow(r in raw()) {
        let mut ch = Choices::new(&r);
        let sig = signature(&mut ch);
        let (x, c, d) = (context(&sig, &mut ch, 2), context(&sig, &mut ch, 2), context(&sig, &mut ch, 2));
        let f = tuple(&sig, &x, &c, 2, &mut ch);
        let g = tuple(&sig, &x, &d, 2, &mut ch);
        let (_, p1, p2) = product(&c, &d);
        let fg = pairing(&f, &g).unwrap();
        prop_assert_eq!(&compose(&p1, &fg).unwrap(), &f);
        // the right factor's names may be primed in the product
        let pg = compose(&p2, &fg).unwrap();
        prop_assert!(pg.codomain().same_shape(g.codomain()));
        prop_assert_eq!(pg.components(), g.components());
        // uniqueness: any h with the same projections is the pairing
        let h = pairing(&compose(&p1, &fg).unwrap(), &pg).unwrap();
        prop_assert_eq!(h, fg);
    }

    #[test]
    fn the_empty_context_is_terminal(r in raw()) {
        let mut ch = Choices::new(&r);
        let sig = signature(&mut ch);
        let (c, d) = (context(&sig, &mut ch, 3), context(&sig, &mut ch, 3));
        let f = tuple(&sig, &c, &d, 2, &mut ch);
        let bang = TermTuple::to_terminal(&d);
        prop_assert_eq!(compose(&bang, &f).unwrap(), TermTuple::to_terminal(&c));
    }

    #[test]
    fn enumeration_is_sorted_by_depth_and_duplicate_free(r in raw()) {
        let mut ch = Choices::new(&r);
        let sig = signature(&mut ch);
        let (c, d) = (context(&sig, &mut ch, 2), context(&sig, &mut ch, 2));
        let mut all = enumerate_tuples(&sig, &c, &d, 2).with_term_cap(400);
        let tuples: Vec<TermTuple> = all.by_ref().take(300).collect();
        let depths: Vec<usize> = tuples.iter().map(TermTuple::depth).collect();
        prop_assert!(depths.windows(2).all(|w| w[0] <= w[1]));
        let mut seen = std::collections::BTreeSet::new();
        for t in &tuples {
            prop_assert!(t.depth() <= 2);
            prop_assert!(seen.insert(t.components().to_vec()));
            prop_assert!(TermTuple::new(&sig, c.clone(), d.clone(), t.components().to_vec()).is_ok());
        }
    }

    #[test]
    fn enumeration_is_deterministic(r in raw()) {
        let mut ch = Choices::new(&r);
        let sig = signature(&mut ch);
        let (c, d) = (context(&sig, &mut ch, 2), context(&sig, &mut ch, 1));
        let one: Vec<_> = enumerate_tuples(&sig, &c, &d, 2).with_term_cap(200).take(100).collect();
        let two: Vec<_> = enumerate_tuples(&sig, &c, &d, 2).with_term_cap(200).take(100).collect();
        prop_assert_eq!(one, two);
    }
}
