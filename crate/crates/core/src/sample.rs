//! Random generators for tests and experiments. Every generator takes the
//! caller's RNG, so seeded runs are reproducible.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::endo::Endo;
use crate::params::Params;
use crate::prefix_code::PrefixCode;
use crate::rel::{LabeledGenSet, RelElement};
use crate::shrubbery::{Digit, Shrubbery};
use crate::term::Term;
use crate::tot::{RootSystem, TotElement};

/// A complete code reached from the roots by up to `expansions` random
/// elementary expansions, never going deeper than `max_depth`.
pub fn code(p: &Params, max_depth: usize, expansions: usize, rng: &mut impl Rng) -> PrefixCode {
    let mut leaves: Vec<Shrubbery> = (0..p.r()).map(|i| Shrubbery::root_of(p, i)).collect();
    for _ in 0..expansions {
        let open: Vec<(usize, usize)> = leaves
            .iter()
            .enumerate()
            .flat_map(|(i, s)| {
                (0..p.n())
                    .filter(move |&d| s.word(d).len() < max_depth)
                    .map(move |d| (i, d))
            })
            .collect();
        let Some(&(i, d)) = open.choose(rng) else {
            break;
        };
        let s = leaves.swap_remove(i);
        leaves.extend((0..p.k() as Digit).map(|j| s.child(d, j)));
    }
    PrefixCode::new(p, leaves).expect("expansions keep a prefix code")
}

/// A random shrubbery with every word of length at most `max_depth`.
pub fn shrubbery(p: &Params, max_depth: usize, rng: &mut impl Rng) -> Shrubbery {
    let mut s = Shrubbery::root_of(p, rng.gen_range(0..p.r()));
    for d in 0..p.n() {
        for _ in 0..rng.gen_range(0..=max_depth) {
            s = s.child(d, rng.gen_range(0..p.k()) as Digit);
        }
    }
    s
}

/// A random total map: a random domain code with random images.
pub fn tot(p: &Params, max_depth: usize, rng: &mut impl Rng) -> TotElement {
    let expansions = rng.gen_range(0..=2 * max_depth);
    let domain = code(p, max_depth, expansions, rng);
    let pairs = domain
        .iter()
        .map(|d| (d.clone(), shrubbery(p, max_depth, rng)))
        .collect::<Vec<_>>();
    TotElement::new(p, pairs).expect("complete domain")
}

/// Two complete codes of equal size, from the same number of expansions.
pub fn code_pair(
    p: &Params,
    max_depth: usize,
    expansions: usize,
    rng: &mut impl Rng,
) -> (PrefixCode, PrefixCode) {
    loop {
        let a = code(p, max_depth, expansions, rng);
        let b = code(p, max_depth, expansions, rng);
        if a.len() == b.len() {
            return (a, b);
        }
    }
}

/// A random invertible total map: a random bijection between the leaves of
/// two complete codes of equal size.
pub fn invertible(p: &Params, max_depth: usize, rng: &mut impl Rng) -> TotElement {
    let expansions = rng.gen_range(0..=2 * max_depth);
    let (a, b) = code_pair(p, max_depth, expansions, rng);
    let mut images: Vec<Shrubbery> = b.iter().cloned().collect();
    images.shuffle(rng);
    TotElement::new(p, a.iter().cloned().zip(images)).expect("complete domain")
}

/// The same map with a few random leaves split further, so the
/// presentation differs while the map does not.
pub fn re_present(f: &TotElement, splits: usize, rng: &mut impl Rng) -> TotElement {
    let p = f.params();
    let mut g = f.clone();
    for _ in 0..splits {
        let leaves: Vec<Shrubbery> = g.map().keys().cloned().collect();
        let leaf = leaves.choose(rng).expect("nonempty domain");
        g = g
            .expand(leaf, rng.gen_range(0..p.n()))
            .expect("leaf of the domain");
    }
    g
}

/// A random root system: `r` distinct elements of a random complete code,
/// in random order.
pub fn root_system(p: &Params, max_depth: usize, rng: &mut impl Rng) -> RootSystem {
    loop {
        let c = code(p, max_depth, rng.gen_range(0..=2 * max_depth), rng);
        if c.len() < p.r() {
            continue;
        }
        let mut all: Vec<Shrubbery> = c.iter().cloned().collect();
        all.shuffle(rng);
        all.truncate(p.r());
        return RootSystem::new(p, all).expect("distinct code elements");
    }
}

/// A random term with at most `lambdas` `λ` nodes and `α` chains of length
/// at most `alphas`.
pub fn term(p: &Params, lambdas: usize, alphas: usize, rng: &mut impl Rng) -> Term {
    let mut t = if lambdas == 0 || rng.gen_bool(0.3) {
        Term::gen(rng.gen_range(0..p.r()))
    } else {
        let mut budget = lambdas - 1;
        let children = (0..p.k())
            .map(|_| {
                let share = rng.gen_range(0..=budget);
                budget -= share;
                term(p, share, alphas, rng)
            })
            .collect();
        Term::lambda(rng.gen_range(0..p.n()), children)
    };
    for _ in 0..rng.gen_range(0..=alphas) {
        t = t.alpha(rng.gen_range(0..p.n()), rng.gen_range(0..p.k()) as Digit);
    }
    t
}

/// A random endomorphism whose generator images have at most `lambdas` `λ`
/// nodes each.
pub fn endo(p: &Params, lambdas: usize, alphas: usize, rng: &mut impl Rng) -> Endo {
    let images = (0..p.r()).map(|_| term(p, lambdas, alphas, rng)).collect();
    Endo::new(p, images).expect("terms in range")
}

/// A random injective labeling of a random complete code.
pub fn labeled(p: &Params, max_depth: usize, rng: &mut impl Rng) -> LabeledGenSet {
    let c = code(p, max_depth, rng.gen_range(0..=2 * max_depth), rng);
    let mut labels: Vec<u64> = (0..c.len() as u64).collect();
    labels.shuffle(rng);
    LabeledGenSet::new(p, c.iter().cloned().zip(labels)).expect("complete code")
}

/// A random element of the relation monoid.
pub fn rel(p: &Params, max_depth: usize, rng: &mut impl Rng) -> RelElement {
    RelElement::from_carrier(&tot(p, max_depth, rng))
}
