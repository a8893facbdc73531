//! Words, shrubs and shrubberies: the nodes of the multi-rooted
//! `n`-dimensional `k`-ary tree, with the prefix order and concatenation.

use std::fmt;

use crate::error::{Error, Result};
use crate::params::Params;
use crate::syntax::Cursor;

pub type Digit = u8;

/// A finite word over `{0, ..., k-1}`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Digit>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn digits(&self) -> &[Digit] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn comparable(&self, other: &Word) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    pub fn push(&mut self, d: Digit) {
        self.0.push(d);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        out.extend_from_slice(&other.0);
        Word(out)
    }

    fn valid(&self, k: usize) -> bool {
        self.0.iter().all(|&d| (d as usize) < k)
    }
}

impl From<Vec<Digit>> for Word {
    fn from(v: Vec<Digit>) -> Self {
        Word(v)
    }
}

impl From<&[Digit]> for Word {
    fn from(v: &[Digit]) -> Self {
        Word(v.to_vec())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        for d in &self.0 {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// An `n`-tuple of words.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Shrub(Vec<Word>);

impl Shrub {
    pub fn new(words: Vec<Word>) -> Self {
        Shrub(words)
    }

    /// The shrub with every coordinate empty.
    pub fn empty(n: usize) -> Self {
        Shrub(vec![Word::empty(); n])
    }

    /// The shrub holding the single digit `digit` in coordinate `dim`.
    pub fn unit(n: usize, dim: usize, digit: Digit) -> Self {
        let mut s = Shrub::empty(n);
        s.0[dim].push(digit);
        s
    }

    pub fn words(&self) -> &[Word] {
        &self.0
    }

    pub fn word(&self, dim: usize) -> &Word {
        &self.0[dim]
    }

    pub fn dims(&self) -> usize {
        self.0.len()
    }

    pub fn depth(&self) -> usize {
        self.0.iter().map(Word::len).max().unwrap_or(0)
    }

    pub fn is_flat(&self) -> bool {
        let d = self.depth();
        self.0.iter().all(|w| w.len() == d)
    }

    pub fn total_len(&self) -> usize {
        self.0.iter().map(Word::len).sum()
    }

    pub fn concat(&self, other: &Shrub) -> Result<Shrub> {
        if self.dims() != other.dims() {
            return Err(Error::ParamMismatch(format!(
                "shrub dimensions {} and {}",
                self.dims(),
                other.dims()
            )));
        }
        Ok(Shrub(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.concat(b))
                .collect(),
        ))
    }

    pub fn is_prefix_of(&self, other: &Shrub) -> bool {
        self.dims() == other.dims() && self.0.iter().zip(&other.0).all(|(a, b)| a.is_prefix_of(b))
    }

    /// Strips `prefix` coordinatewise; `None` unless `prefix` is a prefix.
    pub fn strip_prefix(&self, prefix: &Shrub) -> Option<Shrub> {
        if !prefix.is_prefix_of(self) {
            return None;
        }
        Some(Shrub(
            self.0
                .iter()
                .zip(&prefix.0)
                .map(|(w, p)| Word(w.0[p.len()..].to_vec()))
                .collect(),
        ))
    }

    /// Strips `suffix` coordinatewise; `None` unless each word ends with it.
    pub fn strip_suffix(&self, suffix: &Shrub) -> Option<Shrub> {
        if self.dims() != suffix.dims() {
            return None;
        }
        let mut out = Vec::with_capacity(self.dims());
        for (w, s) in self.0.iter().zip(&suffix.0) {
            if !w.0.ends_with(&s.0) {
                return None;
            }
            out.push(Word(w.0[..w.len() - s.len()].to_vec()));
        }
        Some(Shrub(out))
    }

    fn valid(&self, p: &Params) -> bool {
        self.dims() == p.n() && self.0.iter().all(|w| w.valid(p.k()))
    }

    pub fn parse(src: &str, p: &Params) -> Result<Shrub> {
        let mut c = Cursor::new(src);
        let s = parse_shrub(&mut c, p)?;
        c.finish()?;
        Ok(s)
    }
}

impl fmt::Display for Shrub {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, w) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{w}")?;
        }
        f.write_str(")")
    }
}

/// A node of the tree: a root index together with a shrub.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Shrubbery {
    root: usize,
    shrub: Shrub,
}

impl Shrubbery {
    pub fn new(p: &Params, root: usize, shrub: Shrub) -> Result<Self> {
        if root >= p.r() {
            return Err(Error::OutOfRange(format!("root {root} with r={}", p.r())));
        }
        if !shrub.valid(p) {
            return Err(Error::OutOfRange(format!(
                "shrub {shrub} is not an {}-tuple of words over {} digits",
                p.n(),
                p.k()
            )));
        }
        Ok(Shrubbery { root, shrub })
    }

    /// Builds a shrubbery from digit slices, for tests and constructors with
    /// statically known values. Panics on out-of-range input.
    pub fn from_digits(p: &Params, root: usize, words: &[&[Digit]]) -> Self {
        let shrub = Shrub(words.iter().map(|w| Word::from(*w)).collect());
        Shrubbery::new(p, root, shrub).expect("shrubbery out of range")
    }

    /// The root shrubbery `(root,(e,...,e))`. Panics if `root >= r`.
    pub fn root_of(p: &Params, root: usize) -> Self {
        assert!(root < p.r(), "root out of range");
        Shrubbery {
            root,
            shrub: Shrub::empty(p.n()),
        }
    }

    pub(crate) fn from_parts(root: usize, shrub: Shrub) -> Self {
        Shrubbery { root, shrub }
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn shrub(&self) -> &Shrub {
        &self.shrub
    }

    pub fn word(&self, dim: usize) -> &Word {
        self.shrub.word(dim)
    }

    pub fn dims(&self) -> usize {
        self.shrub.dims()
    }

    pub fn depth(&self) -> usize {
        self.shrub.depth()
    }

    pub fn is_flat(&self) -> bool {
        self.shrub.is_flat()
    }

    /// `uv`: same root, coordinatewise concatenation.
    pub fn concat(&self, v: &Shrub) -> Result<Shrubbery> {
        Ok(Shrubbery {
            root: self.root,
            shrub: self.shrub.concat(v)?,
        })
    }

    /// The child obtained by appending `digit` to coordinate `dim`.
    pub fn child(&self, dim: usize, digit: Digit) -> Shrubbery {
        let mut out = self.clone();
        out.shrub.0[dim].push(digit);
        out
    }

    /// Same root and every word a prefix of the corresponding word.
    pub fn leq(&self, other: &Shrubbery) -> bool {
        self.root == other.root && self.shrub.is_prefix_of(&other.shrub)
    }

    /// True when the cones under the two shrubberies intersect.
    pub fn meets(&self, other: &Shrubbery) -> bool {
        self.root == other.root
            && self.dims() == other.dims()
            && self
                .shrub
                .0
                .iter()
                .zip(&other.shrub.0)
                .all(|(a, b)| a.comparable(b))
    }

    /// Coordinatewise longer word; only meaningful when `meets` holds.
    pub(crate) fn join(&self, other: &Shrubbery) -> Shrubbery {
        debug_assert!(self.meets(other));
        let words = self
            .shrub
            .0
            .iter()
            .zip(&other.shrub.0)
            .map(|(a, b)| {
                if a.len() >= b.len() {
                    a.clone()
                } else {
                    b.clone()
                }
            })
            .collect();
        Shrubbery {
            root: self.root,
            shrub: Shrub(words),
        }
    }

    /// The shrub `v` with `self = prefix · v`.
    pub fn suffix_after(&self, prefix: &Shrubbery) -> Option<Shrub> {
        if prefix.root != self.root {
            return None;
        }
        self.shrub.strip_prefix(&prefix.shrub)
    }

    /// Re-roots this shrubbery under `base`: `base · shrub(self)`.
    pub(crate) fn rebased(&self, base: &Shrubbery) -> Shrubbery {
        Shrubbery {
            root: base.root,
            shrub: base.shrub.concat(&self.shrub).expect("same dimension"),
        }
    }

    pub(crate) fn valid(&self, p: &Params) -> bool {
        self.root < p.r() && self.shrub.valid(p)
    }

    pub fn parse(src: &str, p: &Params) -> Result<Shrubbery> {
        let mut c = Cursor::new(src);
        let s = parse_shrubbery(&mut c, p)?;
        c.finish()?;
        Ok(s)
    }
}

impl fmt::Display for Shrubbery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.root, self.shrub)
    }
}

pub(crate) fn parse_word(c: &mut Cursor<'_>, p: &Params) -> Result<Word> {
    if c.eat('e') {
        return Ok(Word::empty());
    }
    let digits = c.digit_run();
    if digits.is_empty() {
        return c.error("expected a word (`e` or digits)");
    }
    if let Some(d) = digits.iter().find(|&&d| d as usize >= p.k()) {
        return c.error(format!("digit {d} is out of range for k={}", p.k()));
    }
    Ok(Word(digits))
}

pub(crate) fn parse_shrub(c: &mut Cursor<'_>, p: &Params) -> Result<Shrub> {
    c.expect('(')?;
    let mut words = vec![parse_word(c, p)?];
    while c.eat(',') {
        words.push(parse_word(c, p)?);
    }
    c.expect(')')?;
    if words.len() != p.n() {
        return c.error(format!("expected {} words, found {}", p.n(), words.len()));
    }
    Ok(Shrub(words))
}

pub(crate) fn parse_shrubbery(c: &mut Cursor<'_>, p: &Params) -> Result<Shrubbery> {
    c.expect('(')?;
    let root = c.nat()? as usize;
    if root >= p.r() {
        return c.error(format!("root {root} is out of range for r={}", p.r()));
    }
    c.expect(',')?;
    let shrub = parse_shrub(c, p)?;
    c.expect(')')?;
    Ok(Shrubbery { root, shrub })
}

/// All flat shrubs of depth `depth`, in lexicographic order.
pub fn flat_shrubs(p: &Params, depth: usize) -> Vec<Shrub> {
    let words = all_words(p.k(), depth);
    let mut out = vec![Vec::<Word>::new()];
    for _ in 0..p.n() {
        let mut next = Vec::with_capacity(out.len() * words.len());
        for prefix in &out {
            for w in &words {
                let mut t = prefix.clone();
                t.push(w.clone());
                next.push(t);
            }
        }
        out = next;
    }
    out.into_iter().map(Shrub).collect()
}

/// All flat shrubberies of depth `depth`, root-major.
pub fn flat_shrubberies(p: &Params, depth: usize) -> Vec<Shrubbery> {
    let shrubs = flat_shrubs(p, depth);
    (0..p.r())
        .flat_map(|root| {
            shrubs.iter().map(move |s| Shrubbery {
                root,
                shrub: s.clone(),
            })
        })
        .collect()
}

/// All shrubs whose coordinate `i` has length exactly `lens[i]`.
pub(crate) fn shrubs_with_lengths(k: usize, lens: &[usize]) -> Vec<Shrub> {
    let mut out = vec![Vec::<Word>::new()];
    for &len in lens {
        let words = all_words(k, len);
        let mut next = Vec::with_capacity(out.len() * words.len());
        for prefix in &out {
            for w in &words {
                let mut t = prefix.clone();
                t.push(w.clone());
                next.push(t);
            }
        }
        out = next;
    }
    out.into_iter().map(Shrub).collect()
}

fn all_words(k: usize, len: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w: Vec<Digit>| {
                (0..k as Digit).map(move |d| {
                    let mut w = w.clone();
                    w.push(d);
                    w
                })
            })
            .collect();
    }
    out.into_iter().map(Word).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2() -> Params {
        Params::new(2, 2, 2).unwrap()
    }

    fn s(src: &str) -> Shrubbery {
        Shrubbery::parse(src, &p2()).unwrap()
    }

    #[test]
    fn concat_examples() {
        let p = p2();
        let v = Shrub::parse("(1,0)", &p).unwrap();
        assert_eq!(s("(0,(e,e))").concat(&v).unwrap(), s("(0,(1,0))"));
        assert_eq!(s("(1,(0,e))").concat(&v).unwrap(), s("(1,(01,0))"));
        assert_eq!(
            s("(0,(0,e))").concat(&Shrub::empty(2)).unwrap(),
            s("(0,(0,e))")
        );
        let bad = Shrub::new(vec![Word::empty()]);
        assert!(s("(0,(0,e))").concat(&bad).is_err());
    }

    #[test]
    fn leq_examples() {
        assert!(s("(0,(e,e))").leq(&s("(0,(01,1))")));
        assert!(!s("(0,(0,e))").leq(&s("(1,(0,e))")));
        assert!(!s("(0,(01,e))").leq(&s("(0,(0,1))")));
    }

    #[test]
    fn depth_and_flatness() {
        assert_eq!(s("(0,(01,1))").depth(), 2);
        assert!(!s("(0,(01,1))").is_flat());
        assert_eq!(s("(0,(e,e))").depth(), 0);
        assert!(s("(0,(e,e))").is_flat());
        assert_eq!(s("(1,(10,11))").depth(), 2);
        assert!(s("(1,(10,11))").is_flat());
    }

    #[test]
    fn textual_round_trip_and_errors() {
        let p = p2();
        for src in ["(0,(e,e))", "(1,(0101,1))", "(0,(e,10))"] {
            assert_eq!(s(src).to_string(), src);
        }
        assert!(Shrubbery::parse("(2,(e,e))", &p).is_err());
        assert!(Shrubbery::parse("(0,(2,e))", &p).is_err());
        assert!(Shrubbery::parse("(0,(e))", &p).is_err());
        assert!(Shrubbery::parse("(0,(e,e)", &p).is_err());
        assert_eq!(
            Shrubbery::parse(" ( 0 , ( 01 , e ) ) ", &p).unwrap(),
            s("(0,(01,e))")
        );
    }

    #[test]
    fn flat_enumeration_sizes() {
        let p = p2();
        assert_eq!(flat_shrubberies(&p, 0).len(), 2);
        assert_eq!(flat_shrubberies(&p, 2).len(), 2 * 16);
        assert!(flat_shrubberies(&p, 2)
            .iter()
            .all(|w| w.is_flat() && w.depth() == 2));
    }

    #[test]
    fn meets_and_join() {
        let a = s("(0,(0,e))");
        let b = s("(0,(e,1))");
        assert!(a.meets(&b));
        assert_eq!(a.join(&b), s("(0,(0,1))"));
        assert!(!a.meets(&s("(0,(1,1))")));
        assert!(!a.meets(&s("(1,(0,e))")));
    }
}
