use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use totmonoid::term::{normalize, normalize_outermost, term_eq_flat, tree_decode, tree_encode};
use totmonoid::{sample, term_eq, Digit, Params, Term};

fn params() -> impl Strategy<Value = Params> {
    prop_oneof![Just((1, 2)), Just((2, 2)), Just((1, 3)), Just((2, 3))]
        .prop_map(|(n, k)| Params::new(n, k, 2).unwrap())
}

fn two_dims() -> impl Strategy<Value = Params> {
    prop_oneof![Just(2usize), Just(3)].prop_map(|k| Params::new(2, k, 2).unwrap())
}

fn terms(p: &Params, count: usize, rng: &mut ChaCha8Rng) -> Vec<Term> {
    (0..count).map(|_| sample::term(p, 2, 2, rng)).collect()
}

fn digit(p: &Params, rng: &mut ChaCha8Rng) -> Digit {
    rng.gen_range(0..p.k()) as Digit
}

proptest! {
    #[test]
    fn lambda_of_projections_is_identity(p in params(), seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = sample::term(&p, 3, 2, &mut rng);
        let i = rng.gen_range(0..p.n());
        let lhs = Term::lambda(i, (0..p.k()).map(|j| x.clone().alpha(i, j as Digit)).collect());
        prop_assert!(term_eq(&lhs, &x, &p).unwrap());
    }

    #[test]
    fn projection_of_lambda_picks_a_child(p in params(), seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let xs = terms(&p, p.k(), &mut rng);
        let i = rng.gen_range(0..p.n());
        let j = digit(&p, &mut rng);
        let lhs = Term::lambda(i, xs.clone()).alpha(i, j);
        prop_assert!(term_eq(&lhs, &xs[j as usize], &p).unwrap());
    }

    #[test]
    fn projections_in_different_dimensions_commute(p in two_dims(), seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = sample::term(&p, 3, 2, &mut rng);
        let (l, m) = (digit(&p, &mut rng), digit(&p, &mut rng));
        let lhs = x.clone().alpha(0, l).alpha(1, m);
        let rhs = x.alpha(1, m).alpha(0, l);
        prop_assert!(term_eq(&lhs, &rhs, &p).unwrap());
    }

    #[test]
    fn projection_through_another_dimension(p in two_dims(), seed: u64, swap: bool) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (i, i2) = if swap { (1, 0) } else { (0, 1) };
        let xs = terms(&p, p.k(), &mut rng);
        let (l, m) = (digit(&p, &mut rng), digit(&p, &mut rng));
        let lhs = Term::lambda(i, xs.clone()).alpha(i2, l).alpha(i, m);
        let rhs = xs[m as usize].clone().alpha(i2, l);
        prop_assert!(term_eq(&lhs, &rhs, &p).unwrap());
    }

    #[test]
    fn lambda_commutes_with_other_projections(p in two_dims(), seed: u64, swap: bool) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (i, i2) = if swap { (1, 0) } else { (0, 1) };
        let xs = terms(&p, p.k(), &mut rng);
        let l = digit(&p, &mut rng);
        let lhs = Term::lambda(i, xs.iter().map(|x| x.clone().alpha(i2, l)).collect());
        let rhs = Term::lambda(i, xs).alpha(i2, l);
        prop_assert!(term_eq(&lhs, &rhs, &p).unwrap());
    }

    #[test]
    fn lambdas_in_different_dimensions_interchange(p in two_dims(), seed: u64, swap: bool) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (i, i2) = if swap { (1, 0) } else { (0, 1) };
        let k = p.k();
        let x: Vec<Vec<Term>> = (0..k).map(|_| terms(&p, k, &mut rng)).collect();
        let lhs = Term::lambda(i2, (0..k).map(|a| Term::lambda(i, x[a].clone())).collect());
        let rhs = Term::lambda(
            i,
            (0..k).map(|b| Term::lambda(i2, (0..k).map(|a| x[a][b].clone()).collect())).collect(),
        );
        prop_assert!(term_eq(&lhs, &rhs, &p).unwrap());
    }

    #[test]
    fn normalization_is_idempotent_and_strategy_free(p in params(), seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = sample::term(&p, 4, 3, &mut rng);
        let nf = normalize(&t, &p).unwrap();
        prop_assert_eq!(normalize(&nf, &p).unwrap(), nf.clone());
        prop_assert_eq!(normalize_outermost(&t, &p).unwrap(), nf.clone());
        prop_assert!(term_eq(&t, &nf, &p).unwrap());
        prop_assert!(nf.lambda_count() <= t.lambda_count());
    }

    #[test]
    fn joint_descent_agrees_with_flattening(p in params(), seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = sample::term(&p, 3, 2, &mut rng);
        let b = if rng.gen_bool(0.5) {
            sample::term(&p, 3, 2, &mut rng)
        } else {
            Term::lambda(0, (0..p.k()).map(|j| a.clone().alpha(0, j as Digit)).collect())
        };
        prop_assert_eq!(term_eq(&a, &b, &p).unwrap(), term_eq_flat(&a, &b, &p).unwrap());
    }

    #[test]
    fn tree_encoding_round_trips(p in params(), seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = sample::shrubbery(&p, 3, &mut rng);
        prop_assert_eq!(tree_decode(&tree_encode(&s), &p).unwrap(), s);
    }

    #[test]
    fn printed_terms_reparse(p in params(), seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = sample::term(&p, 4, 3, &mut rng);
        prop_assert_eq!(Term::parse(&t.to_string(), &p).unwrap(), t);
    }
}
