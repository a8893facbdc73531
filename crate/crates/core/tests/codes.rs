use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use totmonoid::prefix_code::{
    elementary_expansion, enumerate_complete_codes, expand_to_flat, is_complete,
    multiset_is_complete, partitions_space, pst, ShrubberyMultiset,
};
use totmonoid::{sample, Params, PrefixCode};

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

proptest! {
    #[test]
    fn random_codes_are_complete_by_both_routes(p in params(), seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = sample::code(&p, 2, 6, &mut rng);
        prop_assert!(is_complete(&c, &p));
        prop_assert!(partitions_space(c.iter(), &p));
    }

    #[test]
    fn dropping_an_element_breaks_completeness(p in params(), seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = sample::code(&p, 2, 6, &mut rng);
        for s in c.iter() {
            let rest = PrefixCode::new(&p, c.iter().filter(|t| *t != s).cloned()).unwrap();
            prop_assert!(!is_complete(&rest, &p));
            prop_assert!(!partitions_space(rest.iter(), &p));
        }
    }

    #[test]
    fn elementary_expansions_preserve_completeness(p in params(), seed: u64, dim in 0usize..2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = sample::code(&p, 2, 4, &mut rng);
        let m = c.to_multiset();
        let dim = dim % p.n();
        for s in c.iter() {
            let e = elementary_expansion(&m, s, dim, &p).unwrap();
            prop_assert_eq!(e.len(), m.len() + p.k() - 1);
            prop_assert!(multiset_is_complete(&e, &p));
        }
    }

    #[test]
    fn pseudotree_leaves_recover_the_code(p in params(), seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = sample::code(&p, 2, 6, &mut rng);
        let t = pst(&c, &p).unwrap();
        prop_assert_eq!(t.leaves(), c.clone());
        prop_assert_eq!(t.depth(), c.depth());
    }

    #[test]
    fn flat_expansion_has_the_full_grid(p in params(), seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = sample::code(&p, 2, 5, &mut rng);
        let flat: Vec<_> = expand_to_flat(&c, 2, &p)
            .unwrap()
            .into_iter()
            .flat_map(|(_, below)| below)
            .collect();
        let expected = p.r() * p.k().pow(2 * p.n() as u32);
        prop_assert_eq!(flat.len(), expected);
        let m: ShrubberyMultiset = flat.iter().cloned().collect();
        prop_assert!(!m.has_duplicates());
        prop_assert!(flat.iter().all(|s| s.is_flat() && s.depth() == 2));
    }
}

#[test]
fn enumeration_counts_follow_the_recurrence() {
    // t_0 = 1, t_{d+1} = 1 + t_d^k
    let p = Params::new(1, 2, 1).unwrap();
    let mut t = 1usize;
    for d in 0..=3 {
        assert_eq!(
            enumerate_complete_codes(d, &p).unwrap().len(),
            t,
            "depth {d}"
        );
        t = 1 + t * t;
    }
}

#[test]
fn duplicated_element_is_rejected() {
    let p = Params::new(1, 2, 1).unwrap();
    let c = PrefixCode::parse("{(0,(0)); (0,(1))}", &p).unwrap();
    let mut m: ShrubberyMultiset = c.iter().cloned().collect();
    m.insert(c.iter().next().unwrap().clone());
    assert!(!multiset_is_complete(&m, &p));
}
