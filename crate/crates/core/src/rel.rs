//! Labeled free generating sets and the relation monoid.
//!
//! A labeled generating set assigns a natural-number label to every element
//! of a complete prefix code. An element of the relation monoid relates
//! `(L1, L2)` when its carrier sends every key of `L2` (as a whole cone) to
//! a key of `L1` carrying the same label. Multiplication reverses the order
//! of composition of carriers: `a·b` first applies `b`'s carrier, then
//! `a`'s.
//!
//! Matrices are drawn for `n ≤ 2`. With `n = 1` a split is a column
//! `[a;b]`. With `n = 2` a dimension-0 split is a row `[a b]`, a
//! dimension-1 split is a column `[a;b]`, and a cone split in both
//! dimensions at once is a grid whose rows follow dimension 1 and whose
//! columns follow dimension 0. Several roots are written as a tuple.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::params::Params;
use crate::prefix_code::{complement_code, complete_around, split_dimension, PrefixCode};
use crate::shrubbery::{flat_shrubs, parse_shrubbery, Digit, Shrub, Shrubbery};
use crate::syntax::Cursor;
use crate::tot::{compose, RootSystem, TotElement};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabeledGenSet {
    labels: BTreeMap<Shrubbery, u64>,
}

impl LabeledGenSet {
    pub fn new(p: &Params, pairs: impl IntoIterator<Item = (Shrubbery, u64)>) -> Result<Self> {
        let mut labels = BTreeMap::new();
        for (s, l) in pairs {
            if !s.valid(p) {
                return Err(Error::OutOfRange(format!("{s} for {p}")));
            }
            if labels.insert(s.clone(), l).is_some() {
                return Err(Error::InvalidLabeling(format!("{s} labeled twice")));
            }
        }
        let code = PrefixCode::new(p, labels.keys().cloned())?;
        if !crate::prefix_code::partitions_space(code.iter(), p) {
            return Err(Error::NotComplete(code.to_string()));
        }
        Ok(LabeledGenSet { labels })
    }

    pub fn labels(&self) -> &BTreeMap<Shrubbery, u64> {
        &self.labels
    }

    pub fn code(&self) -> PrefixCode {
        PrefixCode::from_set_unchecked(self.labels.keys().cloned().collect())
    }

    /// Distinct keys carry distinct labels.
    pub fn is_injective(&self) -> bool {
        let set: BTreeSet<u64> = self.labels.values().copied().collect();
        set.len() == self.labels.len()
    }

    pub fn label_set(&self) -> BTreeSet<u64> {
        self.labels.values().copied().collect()
    }

    pub fn parse(src: &str, p: &Params) -> Result<Self> {
        let mut c = Cursor::new(src);
        let l = parse_labeled(&mut c, p)?;
        c.finish()?;
        Ok(l)
    }
}

impl fmt::Display for LabeledGenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (s, l)) in self.labels.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{s} : {l}")?;
        }
        f.write_str("}")
    }
}

fn parse_labeled(c: &mut Cursor<'_>, p: &Params) -> Result<LabeledGenSet> {
    c.expect('{')?;
    let mut pairs = Vec::new();
    if !c.eat('}') {
        loop {
            let s = parse_shrubbery(c, p)?;
            c.expect(':')?;
            pairs.push((s, c.nat()?));
            if c.eat(';') {
                continue;
            }
            c.expect('}')?;
            break;
        }
    }
    LabeledGenSet::new(p, pairs)
}

/// An element of the relation monoid, stored as its reduced carrier.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RelElement {
    carrier: TotElement,
}

impl RelElement {
    pub fn from_carrier(t: &TotElement) -> Self {
        RelElement {
            carrier: t.reduce(),
        }
    }

    pub fn identity(p: &Params) -> Self {
        RelElement {
            carrier: TotElement::identity(p),
        }
    }

    pub fn carrier(&self) -> &TotElement {
        &self.carrier
    }

    pub fn params(&self) -> Params {
        self.carrier.params()
    }

    pub fn depth(&self) -> usize {
        self.carrier.representation_depth()
    }

    pub fn is_invertible(&self) -> bool {
        self.carrier.is_invertible()
    }

    pub fn inverse(&self) -> Result<RelElement> {
        Ok(RelElement {
            carrier: self.carrier.inverse()?,
        })
    }
}

impl fmt::Display for RelElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.carrier)
    }
}

/// `a·b`: the carrier of `b` followed by the carrier of `a`.
pub fn rel_mul(a: &RelElement, b: &RelElement) -> Result<RelElement> {
    Ok(RelElement {
        carrier: compose(&b.carrier, &a.carrier)?,
    })
}

pub fn depth_rel(a: &RelElement) -> usize {
    a.depth()
}

/// Whether `(l1, l2)` belongs to the relation of `a`: every key of `l2` is
/// sent, as a whole cone, onto a key of `l1` with the same label.
pub fn sigma_contains(a: &RelElement, l1: &LabeledGenSet, l2: &LabeledGenSet) -> bool {
    l2.labels.iter().all(|(y, label)| {
        a.carrier
            .restricted_image(y)
            .is_some_and(|s| l1.labels.get(&s) == Some(label))
    })
}

/// The unique element relating an injective `l1` to `l2`.
pub fn from_pair(l1: &LabeledGenSet, l2: &LabeledGenSet, p: &Params) -> Result<RelElement> {
    if !l1.is_injective() {
        return Err(Error::InvalidLabeling(
            "the first labeled set must be injective".into(),
        ));
    }
    let by_label: BTreeMap<u64, &Shrubbery> = l1.labels.iter().map(|(s, l)| (*l, s)).collect();
    let mut pairs = Vec::new();
    for (y, l) in &l2.labels {
        let Some(x) = by_label.get(l) else {
            return Err(Error::InvalidLabeling(format!(
                "label {l} of the second set does not occur in the first"
            )));
        };
        pairs.push((y.clone(), (*x).clone()));
    }
    Ok(RelElement::from_carrier(&TotElement::new(p, pairs)?))
}

/// A pair `(l1, l2)` in the relation of `a` whose second set has keys
/// `right` (refined where needed). `l1` is labeled `0, 1, ...` in matrix
/// reading order and `l2` inherits labels through the carrier.
pub fn arrow_with_domain(
    a: &RelElement,
    right: &PrefixCode,
) -> Result<(LabeledGenSet, LabeledGenSet)> {
    let p = a.params();
    let mut keys: Vec<Shrubbery> = right.iter().cloned().collect();
    loop {
        let mut pairs = Vec::with_capacity(keys.len());
        for y in &keys {
            match a.carrier.restricted_image(y) {
                Some(s) => pairs.push((y.clone(), s)),
                None => {
                    return Err(Error::InsufficientDepth(y.clone()));
                }
            }
        }
        let images: BTreeSet<Shrubbery> = pairs.iter().map(|(_, s)| s.clone()).collect();
        let antichain = images
            .iter()
            .all(|s| images.iter().all(|t| s == t || !s.meets(t)));
        let left = if antichain {
            complete_around(&images, &p)
        } else {
            BTreeSet::new()
        };
        // a key is refined when its image is cut by the completed code or
        // overlaps an image that is longer in some dimension; the split
        // dimension moves it towards that image
        let split: Vec<Option<usize>> = pairs
            .iter()
            .map(|(_, s)| {
                if antichain && left.contains(s) {
                    return None;
                }
                let others: Vec<&Shrubbery> = if antichain {
                    left.iter().filter(|t| t.meets(s)).collect()
                } else {
                    images.iter().filter(|t| *t != s && t.meets(s)).collect()
                };
                split_dimension(s, others.iter().copied(), p.n())
            })
            .collect();
        if split.iter().all(Option::is_none) {
            let order = reading_order(&left, &p)?;
            let labels: BTreeMap<Shrubbery, u64> = order
                .into_iter()
                .enumerate()
                .map(|(i, s)| (s, i as u64))
                .collect();
            let l2 = pairs.iter().map(|(y, s)| (y.clone(), labels[s])).collect();
            return Ok((LabeledGenSet { labels }, LabeledGenSet { labels: l2 }));
        }
        let mut next = Vec::new();
        for ((y, _), dim) in pairs.iter().zip(split) {
            match dim {
                None => next.push(y.clone()),
                Some(d) => next.extend((0..p.k() as Digit).map(|j| y.child(d, j))),
            }
        }
        keys = next;
    }
}

/// [`arrow_with_domain`] on the canonical domain of the carrier.
pub fn canonical_arrow(a: &RelElement) -> Result<(LabeledGenSet, LabeledGenSet)> {
    arrow_with_domain(a, &a.carrier.domain())
}

enum Block {
    Leaf(Shrubbery),
    Column(Vec<Block>),
    Row(Vec<Block>),
    Grid(Vec<Vec<Block>>),
}

fn layout(code: &BTreeSet<Shrubbery>, u: &Shrubbery, p: &Params) -> Result<Block> {
    if code.contains(u) {
        return Ok(Block::Leaf(u.clone()));
    }
    let meeting: Vec<&Shrubbery> = code.iter().filter(|c| c.meets(u)).collect();
    let splits =
        |d: usize| !meeting.is_empty() && meeting.iter().all(|c| c.word(d).len() > u.word(d).len());
    let k = p.k() as Digit;
    match p.n() {
        1 if splits(0) => Ok(Block::Column(
            (0..k)
                .map(|j| layout(code, &u.child(0, j), p))
                .collect::<Result<_>>()?,
        )),
        2 if splits(0) && splits(1) => Ok(Block::Grid(
            (0..k)
                .map(|b| {
                    (0..k)
                        .map(|a| layout(code, &u.child(0, a).child(1, b), p))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<_>>()?,
        )),
        2 if splits(0) => Ok(Block::Row(
            (0..k)
                .map(|j| layout(code, &u.child(0, j), p))
                .collect::<Result<_>>()?,
        )),
        2 if splits(1) => Ok(Block::Column(
            (0..k)
                .map(|j| layout(code, &u.child(1, j), p))
                .collect::<Result<_>>()?,
        )),
        1 | 2 => Err(Error::NotMatrixRepresentable(format!(
            "the cone of {u} is not split uniformly in one dimension"
        ))),
        n => Err(Error::NotMatrixRepresentable(format!(
            "matrices are only drawn for n <= 2, got n={n}"
        ))),
    }
}

fn leaves_in_order(b: &Block, out: &mut Vec<Shrubbery>) {
    match b {
        Block::Leaf(s) => out.push(s.clone()),
        Block::Column(v) | Block::Row(v) => v.iter().for_each(|c| leaves_in_order(c, out)),
        Block::Grid(rows) => rows.iter().flatten().for_each(|c| leaves_in_order(c, out)),
    }
}

/// Keys of a complete code in matrix reading order. Codes that cannot be
/// drawn fall back to the sorted order.
fn reading_order(code: &BTreeSet<Shrubbery>, p: &Params) -> Result<Vec<Shrubbery>> {
    let mut out = Vec::with_capacity(code.len());
    for i in 0..p.r() {
        match layout(code, &Shrubbery::root_of(p, i), p) {
            Ok(b) => leaves_in_order(&b, &mut out),
            Err(Error::NotMatrixRepresentable(_)) => return Ok(code.iter().cloned().collect()),
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

fn write_block(b: &Block, labels: &BTreeMap<Shrubbery, u64>, out: &mut String) {
    let list = |items: &[Block], sep: &str, out: &mut String| {
        out.push('[');
        for (i, c) in items.iter().enumerate() {
            if i > 0 {
                out.push_str(sep);
            }
            write_block(c, labels, out);
        }
        out.push(']');
    };
    match b {
        Block::Leaf(s) => out.push_str(&labels[s].to_string()),
        Block::Column(v) => list(v, ";", out),
        Block::Row(v) => list(v, " ", out),
        Block::Grid(rows) => {
            out.push('[');
            for (i, row) in rows.iter().enumerate() {
                if i > 0 {
                    out.push(';');
                }
                for (j, c) in row.iter().enumerate() {
                    if j > 0 {
                        out.push(' ');
                    }
                    write_block(c, labels, out);
                }
            }
            out.push(']');
        }
    }
}

/// Nested-matrix text for a labeled set.
pub fn render_matrix(l: &LabeledGenSet, p: &Params) -> Result<String> {
    let code: BTreeSet<Shrubbery> = l.labels.keys().cloned().collect();
    let mut parts = Vec::with_capacity(p.r());
    for i in 0..p.r() {
        let b = layout(&code, &Shrubbery::root_of(p, i), p)?;
        let mut s = String::new();
        write_block(&b, &l.labels, &mut s);
        parts.push(s);
    }
    Ok(if p.r() == 1 {
        parts.pop().expect("one root")
    } else {
        format!("({})", parts.join(", "))
    })
}

/// `left -> right` with both sides drawn as matrices.
pub fn render_arrow(l1: &LabeledGenSet, l2: &LabeledGenSet, p: &Params) -> Result<String> {
    Ok(format!(
        "{} -> {}",
        render_matrix(l1, p)?,
        render_matrix(l2, p)?
    ))
}

enum Entry {
    Label(u64),
    Bracket(Vec<Vec<Entry>>),
}

fn parse_entry(c: &mut Cursor<'_>) -> Result<Entry> {
    if !c.eat('[') {
        return Ok(Entry::Label(c.nat()?));
    }
    let mut rows = vec![Vec::new()];
    loop {
        if c.eat(']') {
            break;
        }
        if c.eat(';') {
            rows.push(Vec::new());
            continue;
        }
        if c.peek().is_none() {
            return c.error("unterminated matrix");
        }
        rows.last_mut().expect("nonempty").push(parse_entry(c)?);
    }
    Ok(Entry::Bracket(rows))
}

fn place(
    e: Entry,
    u: &Shrubbery,
    p: &Params,
    c: &Cursor<'_>,
    out: &mut Vec<(Shrubbery, u64)>,
) -> Result<()> {
    let k = p.k();
    let rows = match e {
        Entry::Label(l) => {
            out.push((u.clone(), l));
            return Ok(());
        }
        Entry::Bracket(rows) => rows,
    };
    let shape: Vec<usize> = rows.iter().map(Vec::len).collect();
    let column = shape.len() == k && shape.iter().all(|&w| w == 1);
    let row = shape == [k];
    let grid = shape.len() == k && shape.iter().all(|&w| w == k);
    match p.n() {
        1 if column => {
            for (j, mut r) in rows.into_iter().enumerate() {
                place(r.remove(0), &u.child(0, j as Digit), p, c, out)?;
            }
        }
        2 if row => {
            let r = rows.into_iter().next().expect("one row");
            for (j, e) in r.into_iter().enumerate() {
                place(e, &u.child(0, j as Digit), p, c, out)?;
            }
        }
        2 if column => {
            for (j, mut r) in rows.into_iter().enumerate() {
                place(r.remove(0), &u.child(1, j as Digit), p, c, out)?;
            }
        }
        2 if grid => {
            for (b, r) in rows.into_iter().enumerate() {
                for (a, e) in r.into_iter().enumerate() {
                    place(e, &u.child(0, a as Digit).child(1, b as Digit), p, c, out)?;
                }
            }
        }
        1 | 2 => return c.error(format!("matrix of shape {shape:?} does not fit k={k}")),
        n => return c.error(format!("matrices are only drawn for n <= 2, got n={n}")),
    }
    Ok(())
}

fn parse_matrix_at(c: &mut Cursor<'_>, p: &Params) -> Result<LabeledGenSet> {
    let mut out = Vec::new();
    if p.r() == 1 {
        let e = parse_entry(c)?;
        place(e, &Shrubbery::root_of(p, 0), p, c, &mut out)?;
    } else {
        c.expect('(')?;
        for i in 0..p.r() {
            if i > 0 {
                c.expect(',')?;
            }
            let e = parse_entry(c)?;
            place(e, &Shrubbery::root_of(p, i), p, c, &mut out)?;
        }
        c.expect(')')?;
    }
    LabeledGenSet::new(p, out)
}

/// Inverse of [`render_matrix`].
pub fn parse_matrix(src: &str, p: &Params) -> Result<LabeledGenSet> {
    let mut c = Cursor::new(src);
    let l = parse_matrix_at(&mut c, p)?;
    c.finish()?;
    Ok(l)
}

fn parse_side(c: &mut Cursor<'_>, p: &Params) -> Result<LabeledGenSet> {
    if c.peek() == Some('{') {
        parse_labeled(c, p)
    } else {
        parse_matrix_at(c, p)
    }
}

/// `left -> right`, each side a labeled-set literal or a matrix.
pub fn parse_arrow(src: &str, p: &Params) -> Result<(LabeledGenSet, LabeledGenSet)> {
    let mut c = Cursor::new(src);
    let l1 = parse_side(&mut c, p)?;
    c.expect_str("->")?;
    let l2 = parse_side(&mut c, p)?;
    c.finish()?;
    Ok((l1, l2))
}

/// A total-map literal `{a -> b; ...}` or an arrow `L1 -> L2`, as an
/// element of the relation monoid.
pub fn parse_element(src: &str, p: &Params) -> Result<RelElement> {
    let trimmed = src.trim_start();
    if trimmed.starts_with('{') && !src.contains(':') {
        Ok(RelElement::from_carrier(&TotElement::parse(src, p)?))
    } else {
        let (l1, l2) = parse_arrow(src, p)?;
        from_pair(&l1, &l2, p)
    }
}

fn roots_except(p: &Params, root: usize, offset: u64) -> Vec<(Shrubbery, u64)> {
    (0..p.r())
        .filter(|&l| l != root)
        .map(|l| (Shrubbery::root_of(p, l), l as u64 + offset))
        .collect()
}

/// Splits every root into its `k^n` flat depth-1 children, each keeping
/// the root's label.
pub fn u_arrow(p: &Params) -> (LabeledGenSet, LabeledGenSet) {
    let left = (0..p.r()).map(|l| (Shrubbery::root_of(p, l), l as u64));
    let right = (0..p.r()).flat_map(|l| {
        flat_shrubs(p, 1)
            .into_iter()
            .map(move |s| (Shrubbery::from_parts(l, s), l as u64))
    });
    (
        LabeledGenSet::new(p, left).expect("roots"),
        LabeledGenSet::new(p, right.collect::<Vec<_>>()).expect("flat code"),
    )
}

pub fn gen_u(p: &Params) -> RelElement {
    let (l1, l2) = u_arrow(p);
    from_pair(&l1, &l2, p).expect("well-formed arrow")
}

/// Splits root 0 in dimension 0, repeating its label.
pub fn u_dim0_arrow(p: &Params) -> (LabeledGenSet, LabeledGenSet) {
    let root = Shrubbery::root_of(p, 0);
    let mut left = vec![(root.clone(), 0)];
    left.extend(roots_except(p, 0, 0));
    let mut right: Vec<_> = (0..p.k() as Digit).map(|i| (root.child(0, i), 0)).collect();
    right.extend(roots_except(p, 0, 0));
    (
        LabeledGenSet::new(p, left).expect("roots"),
        LabeledGenSet::new(p, right).expect("code"),
    )
}

pub fn gen_u_dim0(p: &Params) -> RelElement {
    let (l1, l2) = u_dim0_arrow(p);
    from_pair(&l1, &l2, p).expect("well-formed arrow")
}

/// Single-dimension depth-1 shrubberies: the index set of the `π^w`.
pub fn pi_index(p: &Params) -> Vec<Shrubbery> {
    let mut out = Vec::new();
    for l in 0..p.r() {
        for d in 0..p.n() {
            for j in 0..p.k() as Digit {
                out.push(Shrubbery::root_of(p, l).child(d, j));
            }
        }
    }
    out
}

/// The children of `rt(w)` in the dimension of `w`, labeled by their
/// digit, are sent to the single key `rt(w)` labeled by `w`'s digit; the
/// other roots `l` keep label `k + l`.
pub fn pi_w_arrow(p: &Params, w: &Shrubbery) -> Result<(LabeledGenSet, LabeledGenSet)> {
    let nonempty: Vec<usize> = (0..p.n()).filter(|&d| !w.word(d).is_empty()).collect();
    if !w.valid(p) || w.depth() != 1 || nonempty.len() != 1 {
        return Err(Error::OutOfRange(format!(
            "{w} is not a depth-1 shrubbery with a single nonempty coordinate"
        )));
    }
    let d = nonempty[0];
    let digit = w.word(d).digits()[0];
    let k = p.k() as u64;
    let root = Shrubbery::root_of(p, w.root());
    let mut left: Vec<_> = (0..p.k() as Digit)
        .map(|i| (root.child(d, i), i as u64))
        .collect();
    left.extend(roots_except(p, w.root(), k));
    let mut right = vec![(root, digit as u64)];
    right.extend(roots_except(p, w.root(), k));
    Ok((LabeledGenSet::new(p, left)?, LabeledGenSet::new(p, right)?))
}

pub fn gen_pi_w(p: &Params, w: &Shrubbery) -> Result<RelElement> {
    let (l1, l2) = pi_w_arrow(p, w)?;
    from_pair(&l1, &l2, p)
}

/// `π_0`: merges the dimension-0 children of root 0.
pub fn pi0_arrow(p: &Params) -> (LabeledGenSet, LabeledGenSet) {
    let w = Shrubbery::root_of(p, 0).child(0, 0);
    pi_w_arrow(p, &w).expect("valid index")
}

pub fn gen_pi0(p: &Params) -> RelElement {
    let (l1, l2) = pi0_arrow(p);
    from_pair(&l1, &l2, p).expect("well-formed arrow")
}

/// The element of the submonoid generated by the `π^w` that prefixes
/// `shrubs[l]` on root `l`.
pub fn gen_p(p: &Params, shrubs: &[Shrub]) -> Result<RelElement> {
    if shrubs.len() != p.r() {
        return Err(Error::OutOfRange(format!("expected {} shrubs", p.r())));
    }
    let pairs = shrubs
        .iter()
        .enumerate()
        .map(|(l, s)| Ok((Shrubbery::root_of(p, l), Shrubbery::new(p, l, s.clone())?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(RelElement::from_carrier(&TotElement::new(p, pairs)?))
}

/// `π^s` for a flat depth-1 shrubbery `s`: prefixes `shrub(s)` on root
/// `rt(s)` only.
pub fn gen_pi_s(p: &Params, s: &Shrubbery) -> Result<RelElement> {
    if !s.valid(p) || !s.is_flat() || s.depth() != 1 {
        return Err(Error::OutOfRange(format!(
            "{s} is not a flat depth-1 shrubbery"
        )));
    }
    let mut shrubs = vec![Shrub::empty(p.n()); p.r()];
    shrubs[s.root()] = s.shrub().clone();
    gen_p(p, &shrubs)
}

/// A right-heavy labeled set from its label tuple: root `r-1` is expanded
/// `i` times along its last dimension-0 child. Labels are read from
/// shallow to deep, leftmost first.
pub fn right_heavy(p: &Params, tuple: &[u64]) -> Result<LabeledGenSet> {
    let k1 = p.k() - 1;
    if tuple.len() < p.r() || !(tuple.len() - p.r()).is_multiple_of(k1) {
        return Err(Error::InvalidLabeling(format!(
            "a right-heavy tuple has length r + i(k-1), got {}",
            tuple.len()
        )));
    }
    let expansions = (tuple.len() - p.r()) / k1;
    let mut labels = tuple.iter().copied();
    let mut pairs = Vec::with_capacity(tuple.len());
    for l in 0..p.r() - 1 {
        pairs.push((
            Shrubbery::root_of(p, l),
            labels.next().expect("length checked"),
        ));
    }
    let mut spine = Shrubbery::root_of(p, p.r() - 1);
    for _ in 0..expansions {
        for j in 0..k1 as Digit {
            pairs.push((spine.child(0, j), labels.next().expect("length checked")));
        }
        spine = spine.child(0, k1 as Digit);
    }
    pairs.push((spine, labels.next().expect("length checked")));
    LabeledGenSet::new(p, pairs)
}

/// The label tuple of a right-heavy labeled set.
pub fn right_heavy_tuple(l: &LabeledGenSet, p: &Params) -> Option<Vec<u64>> {
    let k1 = p.k() - 1;
    let n = l.labels.len();
    if n < p.r() || !(n - p.r()).is_multiple_of(k1) {
        return None;
    }
    let tuple: Vec<u64> = (0..n).map(|_| 0).collect();
    let candidate = right_heavy(p, &tuple).ok()?;
    if candidate.labels.keys().ne(l.labels.keys()) {
        return None;
    }
    // recover the reading order from the shape
    let mut out = Vec::with_capacity(n);
    for lr in 0..p.r() - 1 {
        out.push(l.labels[&Shrubbery::root_of(p, lr)]);
    }
    let mut spine = Shrubbery::root_of(p, p.r() - 1);
    for _ in 0..(n - p.r()) / k1 {
        for j in 0..k1 as Digit {
            out.push(l.labels[&spine.child(0, j)]);
        }
        spine = spine.child(0, k1 as Digit);
    }
    out.push(l.labels[&spine]);
    Some(out)
}

/// Largest depth allowed for a letter.
pub const LETTER_DEPTH: usize = 3;

/// A word of invertible elements whose product's carrier sends `w_i·x` to
/// `(r_1)_i·x`.
///
/// Built directly as a single invertible element: the cones of `w` go to
/// the cones of `r_1`, and the complement of `w` is matched with the
/// complement of `r_1` after expanding the shallower side until both have
/// the same number of pieces. A root system covering the whole space has
/// no such word, since `r_1` never does.
pub fn p_w_word(p: &Params, w: &RootSystem) -> Result<Vec<RelElement>> {
    let target = RootSystem::r_j(p, 1);
    let set = |rs: &RootSystem| rs.elements().iter().cloned().collect::<BTreeSet<_>>();
    let mut from: Vec<Shrubbery> = complement_code(&set(w), p).into_iter().collect();
    let mut to: Vec<Shrubbery> = complement_code(&set(&target), p).into_iter().collect();
    if from.is_empty() {
        return Err(Error::InvalidRootSystem(format!(
            "{w} covers the whole space, so no invertible element maps it onto {target}"
        )));
    }
    while from.len() != to.len() {
        let side = if from.len() < to.len() {
            &mut from
        } else {
            &mut to
        };
        let (idx, _) = side
            .iter()
            .enumerate()
            .min_by_key(|(_, s)| (s.depth(), s.shrub().total_len()))
            .expect("nonempty complement");
        let s = side.remove(idx);
        let dim = (0..p.n()).min_by_key(|&d| s.word(d).len()).expect("n >= 1");
        for j in 0..p.k() as Digit {
            side.push(s.child(dim, j));
        }
        side.sort();
    }
    let mut pairs: Vec<(Shrubbery, Shrubbery)> = w
        .elements()
        .iter()
        .cloned()
        .zip(target.elements().iter().cloned())
        .collect();
    pairs.extend(from.into_iter().zip(to));
    let letter = RelElement::from_carrier(&TotElement::new(p, pairs)?);
    if letter.depth() > LETTER_DEPTH {
        return Err(Error::Budget(format!(
            "no invertible letter of depth at most {LETTER_DEPTH} for {w}"
        )));
    }
    Ok(vec![letter])
}
