//! Endomorphisms of the free algebra, given by the images of the `r`
//! generators, and the translations to and from total maps.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::params::Params;
use crate::prefix_code::{split_dimension, GRID_GUARD};
use crate::shrubbery::{flat_shrubs, Digit, Shrubbery};
use crate::syntax::Cursor;
use crate::term::{self, normalize_unchecked, parse_term, tree_encode, Term};
use crate::tot::TotElement;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Endo {
    images: Vec<Term>,
}

impl Endo {
    pub fn new(p: &Params, images: Vec<Term>) -> Result<Self> {
        if images.len() != p.r() {
            return Err(Error::OutOfRange(format!(
                "expected {} generator images, found {}",
                p.r(),
                images.len()
            )));
        }
        for t in &images {
            t.check(p)?;
        }
        Ok(Endo { images })
    }

    pub fn identity(p: &Params) -> Self {
        Endo {
            images: (0..p.r()).map(Term::Gen).collect(),
        }
    }

    pub fn images(&self) -> &[Term] {
        &self.images
    }

    pub fn normalized(&self, p: &Params) -> Endo {
        Endo {
            images: self
                .images
                .iter()
                .map(|t| normalize_unchecked(t, p.n()))
                .collect(),
        }
    }

    pub fn parse(src: &str, p: &Params) -> Result<Endo> {
        let mut c = Cursor::new(src);
        c.expect('[')?;
        let mut images = vec![parse_term(&mut c, p)?];
        while c.eat(';') {
            images.push(parse_term(&mut c, p)?);
        }
        c.expect(']')?;
        c.finish()?;
        Endo::new(p, images)
    }
}

impl fmt::Display for Endo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, t) in self.images.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str("]")
    }
}

/// Substitutes the generator images into `t` and normalizes.
pub fn endo_apply(e: &Endo, t: &Term, p: &Params) -> Result<Term> {
    t.check(p)?;
    Ok(normalize_unchecked(&t.substitute(&e.images), p.n()))
}

/// `e1` then `e2`: generator `i` goes to `e2` applied to `e1`'s image.
pub fn endo_compose(e1: &Endo, e2: &Endo, p: &Params) -> Result<Endo> {
    let images = e1
        .images
        .iter()
        .map(|t| endo_apply(e2, t, p))
        .collect::<Result<Vec<_>>>()?;
    Ok(Endo { images })
}

pub fn endo_eq(e1: &Endo, e2: &Endo, p: &Params) -> Result<bool> {
    for (a, b) in e1.images.iter().zip(&e2.images) {
        if !term::term_eq(a, b, p)? {
            return Ok(false);
        }
    }
    Ok(e1.images.len() == e2.images.len())
}

/// The endomorphism sending each leaf `d` of `f` to the image of `h(d)`.
///
/// Generator `i` is written over the leaves below root `i` by descending
/// the cone structure: a cone lying under a leaf becomes that leaf's image
/// extended by the remaining digits, and any other cone becomes a `λ_d` of
/// its `k` children in a dimension that refines the leaves it meets.
pub fn phi(f: &TotElement) -> Endo {
    let p = f.params();
    let images = (0..p.r())
        .map(|i| {
            let root = Shrubbery::root_of(&p, i);
            let leaves: Vec<(&Shrubbery, &Shrubbery)> =
                f.map().iter().filter(|(c, _)| c.root() == i).collect();
            phi_term(&root, &leaves, &p)
        })
        .collect();
    Endo { images }
}

fn phi_term(u: &Shrubbery, leaves: &[(&Shrubbery, &Shrubbery)], p: &Params) -> Term {
    if let Some((c, img)) = leaves.iter().find(|(c, _)| c.leq(u)) {
        let v = u.suffix_after(c).expect("c is below u");
        return tree_encode(&img.concat(&v).expect("same dimension"));
    }
    let dim = split_dimension(u, leaves.iter().map(|(c, _)| *c), p.n())
        .expect("a complete code has a leaf below or strictly inside every cone");
    let children = (0..p.k() as Digit)
        .map(|j| {
            let child = u.child(dim, j);
            let sub: Vec<_> = leaves
                .iter()
                .copied()
                .filter(|(c, _)| c.meets(&child))
                .collect();
            phi_term(&child, &sub, p)
        })
        .collect();
    normalize_unchecked(&Term::Lambda(dim, children), p.n())
}

/// The total map of an endomorphism: with `N` the largest `λ` count among
/// the normalized images, every flat shrubbery `(i, w)` of depth `N` is sent
/// to the value of image `i` at address `w`. The result is reduced.
pub fn psi(e: &Endo, p: &Params) -> Result<TotElement> {
    let e = e.normalized(p);
    let depth = e.images.iter().map(Term::lambda_count).max().unwrap_or(0);
    let size = p
        .k()
        .checked_pow((p.n() * depth) as u32)
        .and_then(|s| s.checked_mul(p.r()));
    if size.is_none_or(|s| s > GRID_GUARD) {
        return Err(Error::SizeGuard(format!(
            "flat code of depth {depth} for {p}"
        )));
    }
    let mut map = BTreeMap::new();
    for (i, t) in e.images.iter().enumerate() {
        let values = term::flatten(t, depth, p)?;
        for w in flat_shrubs(p, depth) {
            let leaf = Shrubbery::new(p, i, w.clone())?;
            map.insert(leaf, values[&w].clone());
        }
    }
    Ok(TotElement::new(p, map)?.reduce())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tot::{compose, tot_eq};

    fn p2() -> Params {
        Params::new(2, 2, 1).unwrap()
    }

    fn bakers_f() -> TotElement {
        TotElement::parse("{(0,(e,0)) -> (0,(0,e)); (0,(e,1)) -> (0,(1,e))}", &p2()).unwrap()
    }

    fn bakers_g() -> TotElement {
        TotElement::parse("{(0,(e,e)) -> (0,(0,e))}", &p2()).unwrap()
    }

    fn t(src: &str, p: &Params) -> Term {
        Term::parse(src, p).unwrap()
    }

    #[test]
    fn endo_apply_examples() {
        let p = Params::new(1, 2, 1).unwrap();
        let x = t("l0(a0_0(g0),g0)", &p);
        assert!(term::term_eq(&endo_apply(&Endo::identity(&p), &x, &p).unwrap(), &x, &p).unwrap());
        let e = Endo::parse("[a0_0(g0)]", &p).unwrap();
        assert_eq!(
            endo_apply(&e, &t("l0(g0,g0)", &p), &p).unwrap(),
            t("l0(a0_0(g0),a0_0(g0))", &p)
        );
        let q = p2();
        assert_eq!(
            endo_apply(&phi(&bakers_f()), &t("a1_0(g0)", &q), &q).unwrap(),
            t("a0_0(g0)", &q)
        );
    }

    #[test]
    fn phi_examples() {
        let p = p2();
        assert_eq!(phi(&TotElement::identity(&p)), Endo::identity(&p));
        assert_eq!(phi(&bakers_f()).to_string(), "[l1(a0_0(g0),a0_1(g0))]");
        assert_eq!(phi(&bakers_g()).to_string(), "[a0_0(g0)]");
    }

    #[test]
    fn psi_examples() {
        let p = p2();
        assert_eq!(
            psi(&Endo::identity(&p), &p).unwrap(),
            TotElement::identity(&p)
        );
        assert_eq!(psi(&phi(&bakers_f()), &p).unwrap(), bakers_f());
        let p1 = Params::new(1, 2, 1).unwrap();
        let e = Endo::parse("[a0_0(g0)]", &p1).unwrap();
        assert_eq!(psi(&e, &p1).unwrap().to_string(), "{(0,(e)) -> (0,(0))}");
    }

    #[test]
    fn composition_matches_on_both_sides() {
        let p = p2();
        let (f, g) = (bakers_f(), bakers_g());
        let lhs = phi(&compose(&f, &g).unwrap());
        let rhs = endo_compose(&phi(&f), &phi(&g), &p).unwrap();
        assert!(endo_eq(&lhs, &rhs, &p).unwrap());
        assert!(tot_eq(&psi(&rhs, &p).unwrap(), &compose(&f, &g).unwrap()));
    }

    #[test]
    fn endo_literal_errors() {
        let p = Params::new(1, 2, 2).unwrap();
        assert!(Endo::parse("[g0]", &p).is_err());
        assert!(Endo::parse("[g0; g2]", &p).is_err());
        assert_eq!(Endo::parse("[g1; g0]", &p).unwrap().to_string(), "[g1; g0]");
    }
}
