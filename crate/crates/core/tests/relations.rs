use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use totmonoid::prefix_code::partitions_space;
use totmonoid::rel::{
    canonical_arrow, from_pair, p_w_word, parse_matrix, rel_mul, render_matrix, right_heavy,
    right_heavy_tuple, sigma_contains,
};
use totmonoid::tot::compose;
use totmonoid::{sample, LabeledGenSet, Params, RelElement, RootSystem};

fn params() -> impl Strategy<Value = Params> {
    prop_oneof![
        Just((1, 2, 1)),
        Just((2, 2, 1)),
        Just((1, 3, 2)),
        Just((2, 3, 1)),
        Just((1, 2, 2)),
    ]
    .prop_map(|(n, k, r)| Params::new(n, k, r).unwrap())
}

/// A labeled set on a random code whose labels are drawn from `pool`,
/// distinct when `injective`.
fn labeled_from(
    p: &Params,
    pool: &[u64],
    injective: bool,
    rng: &mut ChaCha8Rng,
) -> Option<LabeledGenSet> {
    let c = sample::code(p, 2, rng.gen_range(0..4), rng);
    if injective && c.len() > pool.len() {
        return None;
    }
    let mut labels = pool.to_vec();
    labels.shuffle(rng);
    let pairs = c.iter().enumerate().map(|(i, s)| {
        let l = if injective {
            labels[i]
        } else {
            *pool.choose(rng).unwrap()
        };
        (s.clone(), l)
    });
    Some(LabeledGenSet::new(p, pairs.collect::<Vec<_>>()).unwrap())
}

proptest! {
    #[test]
    fn products_reverse_composition(p in params(), seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = sample::tot(&p, 2, &mut rng);
        let g = sample::tot(&p, 2, &mut rng);
        let prod = rel_mul(&RelElement::from_carrier(&f), &RelElement::from_carrier(&g)).unwrap();
        prop_assert_eq!(prod.carrier(), &compose(&g, &f).unwrap());
    }

    #[test]
    fn products_compose_relations(p in params(), seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l1 = sample::labeled(&p, 2, &mut rng);
        let pool: Vec<u64> = l1.label_set().into_iter().collect();
        let Some(l2) = labeled_from(&p, &pool, true, &mut rng) else { return Ok(()) };
        let pool2: Vec<u64> = l2.label_set().into_iter().collect();
        let l3 = labeled_from(&p, &pool2, false, &mut rng).unwrap();
        let a = from_pair(&l1, &l2, &p).unwrap();
        let b = from_pair(&l2, &l3, &p).unwrap();
        prop_assert!(sigma_contains(&a, &l1, &l2));
        prop_assert!(sigma_contains(&b, &l2, &l3));
        let ab = rel_mul(&a, &b).unwrap();
        prop_assert!(sigma_contains(&ab, &l1, &l3));
        prop_assert_eq!(ab, from_pair(&l1, &l3, &p).unwrap());
    }

    #[test]
    fn canonical_arrows_are_in_the_relation(p in params(), seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = sample::rel(&p, 2, &mut rng);
        let (l1, l2) = canonical_arrow(&a).unwrap();
        prop_assert!(l1.is_injective());
        prop_assert!(sigma_contains(&a, &l1, &l2));
        prop_assert_eq!(from_pair(&l1, &l2, &p).unwrap(), a);
    }

    #[test]
    fn multiplication_is_associative(p in params(), seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b, c) = (
            sample::rel(&p, 2, &mut rng),
            sample::rel(&p, 2, &mut rng),
            sample::rel(&p, 2, &mut rng),
        );
        let lhs = rel_mul(&rel_mul(&a, &b).unwrap(), &c).unwrap();
        let rhs = rel_mul(&a, &rel_mul(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        let e = RelElement::identity(&p);
        prop_assert_eq!(rel_mul(&e, &a).unwrap(), a.clone());
        prop_assert_eq!(rel_mul(&a, &e).unwrap(), a);
    }

    #[test]
    fn depth_is_subadditive(p in params(), seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = sample::rel(&p, 2, &mut rng);
        let b = sample::rel(&p, 2, &mut rng);
        prop_assert!(rel_mul(&a, &b).unwrap().depth() <= a.depth() + b.depth());
    }

    #[test]
    fn rendered_matrices_reparse(p in params(), seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = sample::labeled(&p, 2, &mut rng);
        if let Ok(text) = render_matrix(&l, &p) {
            prop_assert_eq!(parse_matrix(&text, &p).unwrap(), l);
        }
    }

    #[test]
    fn one_dimensional_codes_always_render(k in 2usize..4, r in 1usize..3, seed: u64) {
        let p = Params::new(1, k, r).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = sample::labeled(&p, 3, &mut rng);
        prop_assert!(render_matrix(&l, &p).is_ok());
    }

    #[test]
    fn right_heavy_tuples_round_trip(k in 2usize..4, r in 1usize..3, i in 0usize..4, seed: u64) {
        let p = Params::new(1, k, r).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t: Vec<u64> = (0..r + i * (k - 1)).map(|_| rng.gen_range(0..5)).collect();
        let l = right_heavy(&p, &t).unwrap();
        prop_assert_eq!(right_heavy_tuple(&l, &p).unwrap(), t);
    }
}

#[test]
fn p_w_words_move_random_root_systems_onto_r1() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (n, k, r) in [(1, 2, 1), (1, 2, 2), (2, 2, 1), (1, 3, 1)] {
        let p = Params::new(n, k, r).unwrap();
        let target = RootSystem::r_j(&p, 1);
        let mut done = 0;
        while done < 10 {
            let w = sample::root_system(&p, 2, &mut rng);
            if w.as_r_j(&p).is_some() {
                continue;
            }
            if partitions_space(w.elements(), &p) {
                assert!(p_w_word(&p, &w).is_err());
                continue;
            }
            let word = p_w_word(&p, &w).unwrap();
            let mut prod = RelElement::identity(&p);
            for x in &word {
                assert!(x.is_invertible() && x.depth() <= 3);
                prod = rel_mul(&prod, x).unwrap();
            }
            for (wi, ti) in w.elements().iter().zip(target.elements()) {
                assert_eq!(
                    prod.carrier().restricted_image(wi).as_ref(),
                    Some(ti),
                    "{w}"
                );
            }
            let mut back = prod.clone();
            for x in word.iter().rev() {
                back = rel_mul(&back, &x.inverse().unwrap()).unwrap();
            }
            assert_eq!(back, RelElement::identity(&p));
            done += 1;
        }
    }
}
