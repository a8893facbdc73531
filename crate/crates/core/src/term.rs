//! Terms of the absolutely free algebra with `n` operations `λ_d` of arity
//! `k`, `n·k` unary operations `α_{d,j}` and `r` generators, together with
//! normalization and the equality decision procedure for the free
//! Jónsson–Tarski algebra.
//!
//! Terms are written postfix in the usual algebraic way, so `a0_1(t)` is
//! `t·α_{0,1}`. A term denotes a continuous map from the single-rooted
//! Cantor space to the `r`-rooted one:
//!
//! - `g<i>` sends `x` to `(i, x)`;
//! - `a<d>_<j>(t)` sends `x` to `t(j·x)`, with `j` prepended in dimension `d`;
//! - `l<d>(t_0, ..., t_{k-1})` reads the first dimension-`d` digit `j` of
//!   `x` and continues with `t_j` on the rest.
//!
//! Under this reading every identity of the variety is an equality of maps,
//! and two terms are equal in the free algebra exactly when their maps
//! agree.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::params::Params;
use crate::shrubbery::{flat_shrubs, Digit, Shrub, Shrubbery, Word};
use crate::syntax::Cursor;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Gen(usize),
    Lambda(usize, Vec<Term>),
    Alpha(usize, Digit, Box<Term>),
}

impl Term {
    pub fn gen(i: usize) -> Term {
        Term::Gen(i)
    }

    /// `self·α_{d,j}` without any rewriting.
    pub fn alpha(self, d: usize, j: Digit) -> Term {
        Term::Alpha(d, j, Box::new(self))
    }

    /// `(children)λ_d` without any rewriting.
    pub fn lambda(d: usize, children: Vec<Term>) -> Term {
        Term::Lambda(d, children)
    }

    pub fn check(&self, p: &Params) -> Result<()> {
        match self {
            Term::Gen(i) if *i >= p.r() => Err(Error::OutOfRange(format!(
                "generator g{i} with r={}",
                p.r()
            ))),
            Term::Gen(_) => Ok(()),
            Term::Lambda(d, cs) => {
                if *d >= p.n() {
                    return Err(Error::OutOfRange(format!("l{d} with n={}", p.n())));
                }
                if cs.len() != p.k() {
                    return Err(Error::OutOfRange(format!(
                        "l{d} has {} children, expected {}",
                        cs.len(),
                        p.k()
                    )));
                }
                cs.iter().try_for_each(|c| c.check(p))
            }
            Term::Alpha(d, j, c) => {
                if *d >= p.n() || *j as usize >= p.k() {
                    return Err(Error::OutOfRange(format!("a{d}_{j} for {p}")));
                }
                c.check(p)
            }
        }
    }

    pub fn lambda_count(&self) -> usize {
        match self {
            Term::Gen(_) => 0,
            Term::Lambda(_, cs) => 1 + cs.iter().map(Term::lambda_count).sum::<usize>(),
            Term::Alpha(_, _, c) => c.lambda_count(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Gen(_) => 1,
            Term::Lambda(_, cs) => 1 + cs.iter().map(Term::size).sum::<usize>(),
            Term::Alpha(_, _, c) => 1 + c.size(),
        }
    }

    pub fn has_lambda(&self) -> bool {
        match self {
            Term::Gen(_) => false,
            Term::Lambda(..) => true,
            Term::Alpha(_, _, c) => c.has_lambda(),
        }
    }

    /// Replaces every generator `g_i` by `images[i]`, without rewriting.
    pub fn substitute(&self, images: &[Term]) -> Term {
        match self {
            Term::Gen(i) => images[*i].clone(),
            Term::Lambda(d, cs) => {
                Term::Lambda(*d, cs.iter().map(|c| c.substitute(images)).collect())
            }
            Term::Alpha(d, j, c) => Term::Alpha(*d, *j, Box::new(c.substitute(images))),
        }
    }

    pub fn parse(src: &str, p: &Params) -> Result<Term> {
        let mut c = Cursor::new(src);
        let t = parse_term(&mut c, p)?;
        c.finish()?;
        Ok(t)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Gen(i) => write!(f, "g{i}"),
            Term::Alpha(d, j, c) => write!(f, "a{d}_{j}({c})"),
            Term::Lambda(d, cs) => {
                write!(f, "l{d}(")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str(")")
            }
        }
    }
}

pub(crate) fn parse_term(c: &mut Cursor<'_>, p: &Params) -> Result<Term> {
    let Some(name) = c.ident() else {
        return c.error("expected a term (`g<i>`, `a<d>_<j>(..)` or `l<d>(..)`)");
    };
    let num = |s: &str| -> Option<usize> {
        (!s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()))
            .then(|| s.parse().ok())
            .flatten()
    };
    if let Some(i) = name.strip_prefix('g').and_then(num) {
        if i >= p.r() {
            return c.error(format!("generator g{i} is out of range for r={}", p.r()));
        }
        return Ok(Term::Gen(i));
    }
    if let Some(rest) = name.strip_prefix('a') {
        if let Some((d, j)) = rest.split_once('_') {
            if let (Some(d), Some(j)) = (num(d), num(j)) {
                if d >= p.n() || j >= p.k() {
                    return c.error(format!("a{d}_{j} is out of range for {p}"));
                }
                c.expect('(')?;
                let inner = parse_term(c, p)?;
                c.expect(')')?;
                return Ok(inner.alpha(d, j as Digit));
            }
        }
    }
    if let Some(d) = name.strip_prefix('l').and_then(num) {
        if d >= p.n() {
            return c.error(format!("l{d} is out of range for n={}", p.n()));
        }
        c.expect('(')?;
        let mut cs = vec![parse_term(c, p)?];
        while c.eat(',') {
            cs.push(parse_term(c, p)?);
        }
        c.expect(')')?;
        if cs.len() != p.k() {
            return c.error(format!(
                "l{d} takes {} arguments, found {}",
                p.k(),
                cs.len()
            ));
        }
        return Ok(Term::Lambda(d, cs));
    }
    c.error(format!("unknown term head `{name}`"))
}

/// The image of a shrubbery in the free algebra: its root generator followed
/// by the digits of each coordinate, dimension by dimension.
pub fn tree_encode(s: &Shrubbery) -> Term {
    let mut t = Term::Gen(s.root());
    for (d, w) in s.shrub().words().iter().enumerate() {
        for &j in w.digits() {
            t = t.alpha(d, j);
        }
    }
    t
}

/// Inverse of [`tree_encode`] on terms built from a generator and `α`s.
/// Digits of one dimension are read in application order; digits of
/// different dimensions commute.
pub fn tree_decode(t: &Term, p: &Params) -> Result<Shrubbery> {
    let mut digits = Vec::new();
    let mut cur = t;
    loop {
        match cur {
            Term::Alpha(d, j, c) => {
                digits.push((*d, *j));
                cur = c;
            }
            Term::Gen(i) => {
                let mut words = vec![Vec::new(); p.n()];
                for &(d, j) in digits.iter().rev() {
                    if d >= p.n() {
                        return Err(Error::OutOfRange(format!("dimension {d} with n={}", p.n())));
                    }
                    words[d].push(j);
                }
                let shrub = Shrub::new(words.into_iter().map(Word::from).collect());
                return Shrubbery::new(p, *i, shrub);
            }
            Term::Lambda(..) => return Err(Error::NotTreeImage(t.to_string())),
        }
    }
}

fn atom_of(t: &Term, n: usize) -> Option<Shrubbery> {
    let mut digits = Vec::new();
    let mut cur = t;
    loop {
        match cur {
            Term::Alpha(d, j, c) => {
                digits.push((*d, *j));
                cur = c;
            }
            Term::Gen(i) => {
                let mut words = vec![Vec::new(); n];
                for &(d, j) in digits.iter().rev() {
                    words[d].push(j);
                }
                let shrub = Shrub::new(words.into_iter().map(Word::from).collect());
                return Some(Shrubbery::from_parts(*i, shrub));
            }
            Term::Lambda(..) => return None,
        }
    }
}

/// Pushes `α_{d,j}` into a normal term, keeping it normal.
fn push_alpha(t: &Term, d: usize, j: Digit, n: usize) -> Term {
    match t {
        Term::Lambda(e, cs) if *e == d => cs[j as usize].clone(),
        Term::Lambda(e, cs) => {
            smart_lambda(*e, cs.iter().map(|c| push_alpha(c, d, j, n)).collect(), n)
        }
        _ => {
            let s = atom_of(t, n).expect("normal term without lambda is an atom");
            tree_encode(&s.child(d, j))
        }
    }
}

/// Some `x` with `push_alpha(x, d, j)` equal to `t` as a map, found
/// structurally.
fn strip_alpha(t: &Term, d: usize, j: Digit, n: usize) -> Option<Term> {
    match t {
        Term::Lambda(e, _) if *e == d => None,
        Term::Lambda(e, cs) => {
            let xs = cs
                .iter()
                .map(|c| strip_alpha(c, d, j, n))
                .collect::<Option<Vec<_>>>()?;
            Some(smart_lambda(*e, xs, n))
        }
        _ => {
            let s = atom_of(t, n)?;
            let w = s.word(d).digits();
            if w.last() != Some(&j) {
                return None;
            }
            let mut words = s.shrub().words().to_vec();
            words[d] = Word::from(&w[..w.len() - 1]);
            Some(tree_encode(&Shrubbery::from_parts(
                s.root(),
                Shrub::new(words),
            )))
        }
    }
}

/// `(children)λ_d`, collapsed to `x` when the children are `xα_{d,0}, ...,
/// xα_{d,k-1}`.
fn smart_lambda(d: usize, children: Vec<Term>, n: usize) -> Term {
    let mut common: Option<Term> = None;
    for (j, c) in children.iter().enumerate() {
        match strip_alpha(c, d, j as Digit, n) {
            Some(x) if common.as_ref().is_none_or(|y| *y == x) => common = Some(x),
            _ => return Term::Lambda(d, children),
        }
    }
    common.unwrap_or(Term::Lambda(d, children))
}

/// `t·α_{d,j}`, reduced: the `α` is pushed under every `λ_{d'}` with
/// `d' ≠ d` and cancels against the first `λ_d` it reaches.
pub fn apply_alpha(t: &Term, d: usize, j: Digit, p: &Params) -> Result<Term> {
    t.check(p)?;
    if d >= p.n() || j as usize >= p.k() {
        return Err(Error::OutOfRange(format!("a{d}_{j} for {p}")));
    }
    Ok(push_alpha(&normalize_unchecked(t, p.n()), d, j, p.n()))
}

/// Bottom-up normalization. The result has no `α` applied to a `λ`, every
/// `α` chain is sorted by dimension, and no `λ` node is collapsible.
pub fn normalize(t: &Term, p: &Params) -> Result<Term> {
    t.check(p)?;
    Ok(normalize_unchecked(t, p.n()))
}

pub(crate) fn normalize_unchecked(t: &Term, n: usize) -> Term {
    match t {
        Term::Gen(_) => t.clone(),
        Term::Alpha(d, j, c) => push_alpha(&normalize_unchecked(c, n), *d, *j, n),
        Term::Lambda(d, cs) => smart_lambda(
            *d,
            cs.iter().map(|c| normalize_unchecked(c, n)).collect(),
            n,
        ),
    }
}

/// Cap on rewrite steps for [`normalize_outermost`].
pub const OUTERMOST_STEP_LIMIT: usize = 1_000_000;

/// Leftmost-outermost small-step rewriting with the same rules as
/// [`normalize`], one redex at a time. Used to cross-check confluence.
pub fn normalize_outermost(t: &Term, p: &Params) -> Result<Term> {
    t.check(p)?;
    let mut cur = t.clone();
    for _ in 0..OUTERMOST_STEP_LIMIT {
        match step_outermost(&cur, p.n()) {
            Some(next) => cur = next,
            None => return Ok(cur),
        }
    }
    Err(Error::Budget(format!(
        "outermost rewriting exceeded {OUTERMOST_STEP_LIMIT} steps"
    )))
}

fn step_outermost(t: &Term, n: usize) -> Option<Term> {
    match t {
        Term::Gen(_) => None,
        Term::Alpha(d, j, c) => match &**c {
            Term::Lambda(e, cs) if e == d => Some(cs[*j as usize].clone()),
            Term::Lambda(e, cs) => Some(Term::Lambda(
                *e,
                cs.iter().map(|x| x.clone().alpha(*d, *j)).collect(),
            )),
            Term::Alpha(e, l, x) if e > d => Some(Term::Alpha(
                *e,
                *l,
                Box::new(Term::Alpha(*d, *j, x.clone())),
            )),
            _ => step_outermost(c, n).map(|c2| Term::Alpha(*d, *j, Box::new(c2))),
        },
        Term::Lambda(d, cs) => {
            if let Some(x) = collapse_raw(*d, cs, n) {
                return Some(x);
            }
            for (i, c) in cs.iter().enumerate() {
                if let Some(c2) = step_outermost(c, n) {
                    let mut out = cs.clone();
                    out[i] = c2;
                    return Some(Term::Lambda(*d, out));
                }
            }
            None
        }
    }
}

fn collapse_raw(d: usize, cs: &[Term], n: usize) -> Option<Term> {
    let mut common: Option<Term> = None;
    for (j, c) in cs.iter().enumerate() {
        let x = strip_alpha(c, d, j as Digit, n)?;
        if common.as_ref().is_some_and(|y| *y != x) {
            return None;
        }
        common = Some(x);
    }
    common
}

/// The value of `t` on every flat address of depth `depth`: resolving `t` by
/// the address leaves a generator under a chain of `α`s, decoded as a
/// shrubbery. Any `depth` at least the number of `λ`s in `t` suffices.
pub fn flatten(t: &Term, depth: usize, p: &Params) -> Result<BTreeMap<Shrub, Shrubbery>> {
    let t = normalize(t, p)?;
    let mut out = BTreeMap::new();
    for addr in flat_shrubs(p, depth) {
        let mut cur = t.clone();
        for (d, w) in addr.words().iter().enumerate() {
            for &j in w.digits() {
                cur = push_alpha(&cur, d, j, p.n());
            }
        }
        if cur.has_lambda() {
            return Err(Error::ResidualLambda(depth));
        }
        out.insert(addr, tree_decode(&cur, p)?);
    }
    Ok(out)
}

/// Equality in the free algebra.
///
/// Both sides are normalized, then compared by joint descent: an atom
/// against an atom compares the shrubberies, and a `λ_d` node on either side
/// is matched childwise against the other side pushed through `α_{d,j}`.
/// Each step removes a `λ`, so the descent terminates.
pub fn term_eq(t1: &Term, t2: &Term, p: &Params) -> Result<bool> {
    let a = normalize(t1, p)?;
    let b = normalize(t2, p)?;
    Ok(eq_normal(&a, &b, p.n()))
}

fn eq_normal(a: &Term, b: &Term, n: usize) -> bool {
    match (a, b) {
        (Term::Lambda(d, cs), other) | (other, Term::Lambda(d, cs)) => cs
            .iter()
            .enumerate()
            .all(|(j, c)| eq_normal(c, &push_alpha(other, *d, j as Digit, n), n)),
        _ => atom_of(a, n) == atom_of(b, n),
    }
}

/// Equality by comparing [`flatten`] at the larger `λ` count. Exponential
/// in that count; kept as an independent check of [`term_eq`].
pub fn term_eq_flat(t1: &Term, t2: &Term, p: &Params) -> Result<bool> {
    let a = normalize(t1, p)?;
    let b = normalize(t2, p)?;
    let depth = a.lambda_count().max(b.lambda_count());
    Ok(flatten(&a, depth, p)? == flatten(&b, depth, p)?)
}
