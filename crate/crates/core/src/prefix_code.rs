//! Prefix codes, pseudotrees and elementary expansions.
//!
//! A finite set of shrubberies is a complete prefix code when the cones
//! under its elements partition the Cantor space. [`is_complete`] decides
//! this by the flat-address criterion: every flat shrubbery at the code's
//! depth has exactly one element of the code below it.
//! [`partitions_space`] is an independent structural check (recursive cone
//! splitting) that stays cheap for deep codes; the two are cross-checked in
//! the tests.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::params::Params;
use crate::shrubbery::{flat_shrubberies, parse_shrubbery, shrubs_with_lengths, Shrubbery};
use crate::syntax::Cursor;

/// Refuse flat-address grids larger than this.
pub const GRID_GUARD: usize = 1 << 20;

/// Cap on the number of codes returned by [`enumerate_complete_codes`].
pub const ENUMERATION_CAP: usize = 1_000_000;

/// A finite multiset of shrubberies.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ShrubberyMultiset {
    entries: BTreeMap<Shrubbery, usize>,
}

impl ShrubberyMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, s: Shrubbery) {
        *self.entries.entry(s).or_insert(0) += 1;
    }

    pub fn count(&self, s: &Shrubbery) -> usize {
        self.entries.get(s).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.entries.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn has_duplicates(&self) -> bool {
        self.entries.values().any(|&m| m > 1)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Shrubbery, usize)> {
        self.entries.iter().map(|(s, &m)| (s, m))
    }

    /// The underlying set, when every multiplicity is one.
    pub fn to_code(&self) -> Option<Vec<Shrubbery>> {
        (!self.has_duplicates()).then(|| self.entries.keys().cloned().collect())
    }
}

impl FromIterator<Shrubbery> for ShrubberyMultiset {
    fn from_iter<I: IntoIterator<Item = Shrubbery>>(iter: I) -> Self {
        let mut m = ShrubberyMultiset::new();
        for s in iter {
            m.insert(s);
        }
        m
    }
}

/// Removes one copy of `a` and adds its `k` children in dimension `dim`.
pub fn elementary_expansion(
    m: &ShrubberyMultiset,
    a: &Shrubbery,
    dim: usize,
    p: &Params,
) -> Result<ShrubberyMultiset> {
    if dim >= p.n() {
        return Err(Error::OutOfRange(format!(
            "dimension {dim} with n={}",
            p.n()
        )));
    }
    if m.count(a) == 0 {
        return Err(Error::NotInMultiset(a.clone()));
    }
    let mut out = m.clone();
    match out.entries.get_mut(a) {
        Some(c) if *c > 1 => *c -= 1,
        _ => {
            out.entries.remove(a);
        }
    }
    for l in 0..p.k() {
        out.insert(a.child(dim, l as u8));
    }
    Ok(out)
}

/// A finite set of shrubberies with pairwise disjoint cones.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrefixCode {
    elements: BTreeSet<Shrubbery>,
}

impl PrefixCode {
    pub fn new(p: &Params, elements: impl IntoIterator<Item = Shrubbery>) -> Result<Self> {
        let elements: BTreeSet<Shrubbery> = elements.into_iter().collect();
        if let Some(bad) = elements.iter().find(|s| !s.valid(p)) {
            return Err(Error::OutOfRange(format!("{bad} for {p}")));
        }
        let v: Vec<&Shrubbery> = elements.iter().collect();
        for (i, a) in v.iter().enumerate() {
            for b in &v[i + 1..] {
                if a.meets(b) {
                    return Err(Error::NotPrefixCode((*a).clone(), (*b).clone()));
                }
            }
        }
        Ok(PrefixCode { elements })
    }

    /// The `r` roots: the coarsest complete code.
    pub fn roots(p: &Params) -> Self {
        PrefixCode {
            elements: (0..p.r()).map(|i| Shrubbery::root_of(p, i)).collect(),
        }
    }

    pub(crate) fn from_set_unchecked(elements: BTreeSet<Shrubbery>) -> Self {
        PrefixCode { elements }
    }

    pub fn elements(&self) -> &BTreeSet<Shrubbery> {
        &self.elements
    }

    pub fn iter(&self) -> impl Iterator<Item = &Shrubbery> {
        self.elements.iter()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, s: &Shrubbery) -> bool {
        self.elements.contains(s)
    }

    pub fn depth(&self) -> usize {
        self.elements
            .iter()
            .map(Shrubbery::depth)
            .max()
            .unwrap_or(0)
    }

    pub fn to_multiset(&self) -> ShrubberyMultiset {
        self.elements.iter().cloned().collect()
    }

    pub fn parse(src: &str, p: &Params) -> Result<Self> {
        let mut c = Cursor::new(src);
        let elements = parse_code_body(&mut c, p)?;
        c.finish()?;
        PrefixCode::new(p, elements)
    }
}

pub(crate) fn parse_code_body(c: &mut Cursor<'_>, p: &Params) -> Result<Vec<Shrubbery>> {
    c.expect('{')?;
    let mut out = Vec::new();
    if c.eat('}') {
        return Ok(out);
    }
    loop {
        out.push(parse_shrubbery(c, p)?);
        if c.eat(';') {
            continue;
        }
        c.expect('}')?;
        return Ok(out);
    }
}

impl fmt::Display for PrefixCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, s) in self.elements.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str("}")
    }
}

fn grid_size(p: &Params, depth: usize) -> Option<usize> {
    let per_root = p.k().checked_pow(u32::try_from(p.n() * depth).ok()?)?;
    per_root.checked_mul(p.r())
}

/// Flat-address completeness: every flat shrubbery of depth `d(code)` lies
/// above exactly one element of `code`.
pub fn is_complete(code: &PrefixCode, p: &Params) -> bool {
    flat_address_check(code.elements.iter(), code.depth(), p)
}

/// Flat-address completeness for a multiset; duplicates make it fail.
pub fn multiset_is_complete(m: &ShrubberyMultiset, p: &Params) -> bool {
    if m.has_duplicates() {
        return false;
    }
    let depth = m.entries.keys().map(Shrubbery::depth).max().unwrap_or(0);
    flat_address_check(m.entries.keys(), depth, p)
}

fn flat_address_check<'a>(
    elements: impl Iterator<Item = &'a Shrubbery>,
    depth: usize,
    p: &Params,
) -> bool {
    let Some(grid) = grid_size(p, depth) else {
        return false;
    };
    assert!(
        grid <= GRID_GUARD,
        "flat-address grid of size {grid} exceeds guard"
    );
    let mut seen = HashSet::with_capacity(grid);
    for c in elements {
        if !c.valid(p) {
            return false;
        }
        let lens: Vec<usize> = c.shrub().words().iter().map(|w| depth - w.len()).collect();
        for ext in shrubs_with_lengths(p.k(), &lens) {
            let cell = c.concat(&ext).expect("same dimension");
            if !seen.insert(cell) {
                return false;
            }
        }
    }
    seen.len() == grid
}

/// Structural completeness: recursively split cones until each piece sits
/// under exactly one element. Works for codes of any depth.
pub fn partitions_space<'a>(elements: impl IntoIterator<Item = &'a Shrubbery>, p: &Params) -> bool {
    let elements: Vec<&Shrubbery> = elements.into_iter().collect();
    if elements.iter().any(|c| !c.valid(p)) {
        return false;
    }
    (0..p.r()).all(|root| {
        let u = Shrubbery::root_of(p, root);
        let meeting: Vec<&Shrubbery> = elements.iter().copied().filter(|c| c.meets(&u)).collect();
        covers_exactly(&u, &meeting, p)
    })
}

fn covers_exactly(u: &Shrubbery, meeting: &[&Shrubbery], p: &Params) -> bool {
    if meeting.is_empty() {
        return false;
    }
    if meeting.iter().any(|c| c.leq(u)) {
        return meeting.len() == 1;
    }
    // some element is strictly longer than u in at least one coordinate
    let dim = (0..p.n())
        .find(|&d| meeting.iter().any(|c| c.word(d).len() > u.word(d).len()))
        .expect("a meeting element that is not below u is longer somewhere");
    (0..p.k()).all(|l| {
        let child = u.child(dim, l as u8);
        let sub: Vec<&Shrubbery> = meeting
            .iter()
            .copied()
            .filter(|c| c.meets(&child))
            .collect();
        covers_exactly(&child, &sub, p)
    })
}

/// Picks a dimension in which to split `u` so that the cones of `others`
/// meeting `u` are refined: a dimension in which every one of them is
/// strictly longer than `u` if there is one, otherwise the first dimension
/// in which some of them is longer.
pub(crate) fn split_dimension<'a>(
    u: &Shrubbery,
    others: impl Iterator<Item = &'a Shrubbery> + Clone,
    n: usize,
) -> Option<usize> {
    let longer = |d: usize, c: &Shrubbery| c.word(d).len() > u.word(d).len();
    (0..n)
        .find(|&d| others.clone().next().is_some() && others.clone().all(|c| longer(d, c)))
        .or_else(|| (0..n).find(|&d| others.clone().any(|c| longer(d, c))))
}

/// A downward-closed finite set of shrubberies whose maximal elements form
/// a complete prefix code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pseudotree {
    nodes: BTreeSet<Shrubbery>,
}

impl Pseudotree {
    pub fn nodes(&self) -> &BTreeSet<Shrubbery> {
        &self.nodes
    }

    pub fn depth(&self) -> usize {
        self.nodes.iter().map(Shrubbery::depth).max().unwrap_or(0)
    }

    pub fn contains(&self, s: &Shrubbery) -> bool {
        self.nodes.contains(s)
    }

    /// Maximal nodes.
    pub fn leaves(&self) -> PrefixCode {
        let leaves = self
            .nodes
            .iter()
            .filter(|a| !self.nodes.iter().any(|b| b != *a && a.leq(b)))
            .cloned()
            .collect();
        PrefixCode::from_set_unchecked(leaves)
    }
}

/// The pseudotree whose maximal elements are `code`: its downward closure.
pub fn pst(code: &PrefixCode, p: &Params) -> Result<Pseudotree> {
    if !partitions_space(code.iter(), p) {
        return Err(Error::NotComplete(code.to_string()));
    }
    let mut nodes = BTreeSet::new();
    for c in code.iter() {
        let mut prefixes = vec![Vec::new()];
        for w in c.shrub().words() {
            let mut next = Vec::new();
            for pre in &prefixes {
                for len in 0..=w.len() {
                    let mut t: Vec<_> = Clone::clone(pre);
                    t.push(crate::shrubbery::Word::from(&w.digits()[..len]));
                    next.push(t);
                }
            }
            prefixes = next;
        }
        for words in prefixes {
            nodes.insert(Shrubbery::from_parts(
                c.root(),
                crate::shrubbery::Shrub::new(words),
            ));
        }
    }
    Ok(Pseudotree { nodes })
}

/// For each element of a complete code, the flat shrubberies of depth
/// `depth` above it. Together they list every flat shrubbery of that depth
/// exactly once.
pub fn expand_to_flat(
    code: &PrefixCode,
    depth: usize,
    p: &Params,
) -> Result<Vec<(Shrubbery, Vec<Shrubbery>)>> {
    if depth < code.depth() {
        return Err(Error::DepthTooSmall {
            requested: depth,
            needed: code.depth(),
        });
    }
    if !partitions_space(code.iter(), p) {
        return Err(Error::NotComplete(code.to_string()));
    }
    Ok(code
        .iter()
        .map(|c| {
            let lens: Vec<usize> = c.shrub().words().iter().map(|w| depth - w.len()).collect();
            let cells = shrubs_with_lengths(p.k(), &lens)
                .into_iter()
                .map(|ext| c.concat(&ext).expect("same dimension"))
                .collect();
            (c.clone(), cells)
        })
        .collect())
}

/// Every complete prefix code of depth at most `max_depth`, each once.
///
/// Exact cover over the flat cells at depth `max_depth`: the first
/// uncovered cell (in lexicographic order) must lie under the next chosen
/// element, which is one of that cell's prefixes.
pub fn enumerate_complete_codes(max_depth: usize, p: &Params) -> Result<Vec<PrefixCode>> {
    if max_depth > 3 {
        return Err(Error::SizeGuard(format!("max_depth {max_depth} exceeds 3")));
    }
    match grid_size(p, max_depth) {
        Some(g) if g <= GRID_GUARD => {}
        _ => {
            return Err(Error::SizeGuard(format!(
                "flat-address grid for depth {max_depth} and {p} exceeds 2^20"
            )))
        }
    }
    let cells = flat_shrubberies(p, max_depth);
    let mut covered = vec![false; cells.len()];
    let index: std::collections::HashMap<&Shrubbery, usize> =
        cells.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut chosen = Vec::new();
    let mut out = Vec::new();
    exact_cover(
        p,
        max_depth,
        &cells,
        &index,
        &mut covered,
        0,
        &mut chosen,
        &mut out,
    )?;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn exact_cover(
    p: &Params,
    depth: usize,
    cells: &[Shrubbery],
    index: &std::collections::HashMap<&Shrubbery, usize>,
    covered: &mut [bool],
    start: usize,
    chosen: &mut Vec<Shrubbery>,
    out: &mut Vec<PrefixCode>,
) -> Result<()> {
    let Some(first) = (start..cells.len()).find(|&i| !covered[i]) else {
        out.push(PrefixCode::from_set_unchecked(
            chosen.iter().cloned().collect(),
        ));
        if out.len() > ENUMERATION_CAP {
            return Err(Error::SizeGuard(format!(
                "more than {ENUMERATION_CAP} complete codes"
            )));
        }
        return Ok(());
    };
    let cell = &cells[first];
    // candidate elements: all prefixes of the cell
    let mut candidates = vec![Vec::new()];
    for w in cell.shrub().words() {
        let mut next = Vec::new();
        for pre in &candidates {
            for len in 0..=w.len() {
                let mut t: Vec<crate::shrubbery::Word> = Clone::clone(pre);
                t.push(crate::shrubbery::Word::from(&w.digits()[..len]));
                next.push(t);
            }
        }
        candidates = next;
    }
    for words in candidates {
        let cand = Shrubbery::from_parts(cell.root(), crate::shrubbery::Shrub::new(words));
        let lens: Vec<usize> = cand
            .shrub()
            .words()
            .iter()
            .map(|w| depth - w.len())
            .collect();
        let idxs: Vec<usize> = shrubs_with_lengths(p.k(), &lens)
            .into_iter()
            .map(|ext| index[&cand.concat(&ext).expect("same dimension")])
            .collect();
        if idxs.iter().any(|&i| covered[i]) {
            continue;
        }
        for &i in &idxs {
            covered[i] = true;
        }
        chosen.push(cand);
        exact_cover(p, depth, cells, index, covered, first + 1, chosen, out)?;
        chosen.pop();
        for &i in &idxs {
            covered[i] = false;
        }
    }
    Ok(())
}

/// Refines the roots into a code that contains every element of `targets`
/// (a prefix code, not necessarily complete), splitting only towards the
/// targets. Returns the completed code.
pub(crate) fn complete_around(targets: &BTreeSet<Shrubbery>, p: &Params) -> BTreeSet<Shrubbery> {
    let mut out = BTreeSet::new();
    for root in 0..p.r() {
        let u = Shrubbery::root_of(p, root);
        complete_rec(&u, targets, p, &mut out);
    }
    out
}

fn complete_rec(
    u: &Shrubbery,
    targets: &BTreeSet<Shrubbery>,
    p: &Params,
    out: &mut BTreeSet<Shrubbery>,
) {
    let meeting: Vec<&Shrubbery> = targets.iter().filter(|t| t.meets(u)).collect();
    if meeting.is_empty() || meeting.iter().any(|t| t.leq(u)) {
        out.insert(u.clone());
        return;
    }
    let dim = split_dimension(u, meeting.iter().copied(), p.n())
        .expect("meeting target strictly below u");
    for l in 0..p.k() {
        complete_rec(&u.child(dim, l as u8), targets, p, out);
    }
}

/// The complement of the cones under a prefix code, as a finite prefix
/// code obtained by splitting the roots towards the code's elements.
pub fn complement_code(code: &BTreeSet<Shrubbery>, p: &Params) -> BTreeSet<Shrubbery> {
    complete_around(code, p)
        .into_iter()
        .filter(|u| !code.iter().any(|t| t.meets(u)))
        .collect()
}
