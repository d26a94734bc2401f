use proptest::prelude::*;

use permcanon::canon::{canon_oracle, canonize, validate};
use permcanon::gen::{self, random_element, random_morphism_instance};
use permcanon::morphism::{kernel_order, tensor, MorphismCoset};
use permcanon::{Permutation, StabilizerChain};

fn perm(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn composition_is_associative((a, b, c) in (1usize..9).prop_flat_map(|n| (perm(n), perm(n), perm(n)))) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert!((&a * &a.inverse()).is_identity());
    }

    #[test]
    fn chain_is_closed_under_products(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let s = gen::random_generator_set(&mut rng, 6, 3);
        let chain = StabilizerChain::build(&s);
        let (x, y) = (random_element(&mut rng, &s), random_element(&mut rng, &s));
        prop_assert!(chain.contains(&(&x * &y)).unwrap());
        prop_assert!(chain.contains(&x.inverse()).unwrap());
    }

    #[test]
    fn morphisms_are_multiplicative(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let (s, m) = random_morphism_instance(&mut rng).unwrap();
        for _ in 0..10 {
            let (x, y) = (random_element(&mut rng, &s), random_element(&mut rng, &s));
            prop_assert_eq!(m.evaluate(&(&x * &y)).unwrap(), &m.evaluate(&x).unwrap() * &m.evaluate(&y).unwrap());
        }
        // ker(m ⊗ m) = ker m
        prop_assert_eq!(kernel_order(&tensor(&[m.clone(), m.clone()]).unwrap(), &s).unwrap(), kernel_order(&m, &s).unwrap());
        let x = random_element(&mut rng, &s);
        let c = MorphismCoset::new(s.clone(), m.clone(), m.evaluate(&x).unwrap()).unwrap();
        prop_assert!(c.contains(&x).unwrap());
    }

    #[test]
    fn canon_is_relabeling_invariant(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let f = gen::random_instance(&mut rng, 4, 5, 5000).unwrap();
        let raw = f.to_raw();
        let form = canonize(&validate(&raw).unwrap()).unwrap();
        let other = gen::relabel(&raw, &mut rng);
        prop_assert_eq!(&canonize(&validate(&other).unwrap()).unwrap(), &form);
        prop_assert_eq!(form.edges.len(), validate(&raw).unwrap().edges().len());
        prop_assert!(form.edges.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn canon_matches_oracle(seed in any::<u64>()) {
        let mut rng = gen::rng(seed);
        let g = gen::random_instance(&mut rng, 4, 5, 2000).unwrap().to_graph().unwrap();
        prop_assert_eq!(canonize(&g).unwrap(), canon_oracle(&g, 2000).unwrap());
    }
}
