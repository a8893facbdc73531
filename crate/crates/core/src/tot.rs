//! Total maps of the `r`-rooted Cantor space given by a complete prefix code
//! `D` and a leaf map `h`: the point `d·x` with `d ∈ D` goes to `h(d)·x`.
//!
//! Representations are not unique. [`TotElement::reduce`] picks a canonical
//! one that depends only on the map: among all representations whose leaves
//! and images have depth at most the element's depth, the one with fewest
//! leaves, splitting cones in the lowest possible dimension on ties.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::params::Params;
use crate::prefix_code::{
    complement_code, partitions_space, split_dimension, PrefixCode, GRID_GUARD,
};
use crate::shrubbery::{flat_shrubberies, parse_shrubbery, Digit, Shrub, Shrubbery};
use crate::syntax::Cursor;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TotElement {
    params: (usize, usize, usize),
    map: BTreeMap<Shrubbery, Shrubbery>,
}

impl TotElement {
    /// Validates that the keys form a complete prefix code and every value
    /// is a shrubbery for `p`.
    pub fn new(
        p: &Params,
        pairs: impl IntoIterator<Item = (Shrubbery, Shrubbery)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (d, img) in pairs {
            if !d.valid(p) || !img.valid(p) {
                return Err(Error::OutOfRange(format!("{d} -> {img} for {p}")));
            }
            if map.insert(d.clone(), img).is_some() {
                return Err(Error::NotComplete(format!("leaf {d} listed twice")));
            }
        }
        let keys: Vec<&Shrubbery> = map.keys().collect();
        for (i, a) in keys.iter().enumerate() {
            for b in &keys[i + 1..] {
                if a.meets(b) {
                    return Err(Error::NotPrefixCode((*a).clone(), (*b).clone()));
                }
            }
        }
        if !partitions_space(map.keys(), p) {
            return Err(Error::NotComplete(
                map.keys()
                    .map(|k| k.to_string())
                    .collect::<Vec<_>>()
                    .join("; "),
            ));
        }
        Ok(TotElement::from_map(p, map))
    }

    pub(crate) fn from_map(p: &Params, map: BTreeMap<Shrubbery, Shrubbery>) -> Self {
        TotElement {
            params: (p.n(), p.k(), p.r()),
            map,
        }
    }

    pub fn identity(p: &Params) -> Self {
        let map = (0..p.r())
            .map(|i| (Shrubbery::root_of(p, i), Shrubbery::root_of(p, i)))
            .collect();
        TotElement::from_map(p, map)
    }

    pub fn params(&self) -> Params {
        let (n, k, r) = self.params;
        Params::new(n, k, r).expect("stored parameters are valid")
    }

    pub fn map(&self) -> &BTreeMap<Shrubbery, Shrubbery> {
        &self.map
    }

    pub fn domain(&self) -> PrefixCode {
        PrefixCode::from_set_unchecked(self.map.keys().cloned().collect())
    }

    pub fn image(&self, leaf: &Shrubbery) -> Option<&Shrubbery> {
        self.map.get(leaf)
    }

    /// Largest depth among leaves and images of this representation.
    pub fn representation_depth(&self) -> usize {
        self.map
            .iter()
            .map(|(d, i)| d.depth().max(i.depth()))
            .max()
            .unwrap_or(0)
    }

    pub fn domain_depth(&self) -> usize {
        self.map.keys().map(Shrubbery::depth).max().unwrap_or(0)
    }

    fn leaves_meeting<'a>(
        &'a self,
        u: &'a Shrubbery,
    ) -> impl Iterator<Item = (&'a Shrubbery, &'a Shrubbery)> + 'a {
        self.map.iter().filter(move |(c, _)| c.meets(u))
    }

    /// `h̃(w)`: the image of a finite prefix lying below a leaf.
    pub fn eval_prefix(&self, w: &Shrubbery) -> Result<Shrubbery> {
        for (c, img) in self.leaves_meeting(w) {
            if let Some(v) = w.suffix_after(c) {
                return img.concat(&v);
            }
        }
        Err(Error::InsufficientDepth(w.clone()))
    }

    /// When the map is `u·x ↦ s·x` on the whole cone of `u`, returns `s`.
    pub fn restricted_image(&self, u: &Shrubbery) -> Option<Shrubbery> {
        let mut s: Option<Shrubbery> = None;
        for (c, img) in self.leaves_meeting(u) {
            let m = c.join(u);
            let v = m.suffix_after(u).expect("join lies above u");
            let fm = img
                .concat(&m.suffix_after(c).expect("join lies above c"))
                .ok()?;
            let cand = Shrubbery::from_parts(fm.root(), fm.shrub().strip_suffix(&v)?);
            match &s {
                Some(prev) if *prev != cand => return None,
                Some(_) => {}
                None => s = Some(cand),
            }
        }
        s
    }

    /// Replaces `leaf` by its `k` children in dimension `dim`.
    pub fn expand(&self, leaf: &Shrubbery, dim: usize) -> Result<TotElement> {
        let p = self.params();
        if dim >= p.n() {
            return Err(Error::OutOfRange(format!(
                "dimension {dim} with n={}",
                p.n()
            )));
        }
        let Some(img) = self.map.get(leaf).cloned() else {
            return Err(Error::NotInMultiset(leaf.clone()));
        };
        let mut map = self.map.clone();
        map.remove(leaf);
        for j in 0..p.k() as Digit {
            map.insert(leaf.child(dim, j), img.child(dim, j));
        }
        Ok(TotElement::from_map(&p, map))
    }

    /// The canonical representative of the same map.
    pub fn reduce(&self) -> TotElement {
        let p = self.params();
        let upper = self.representation_depth();
        for bound in 0..=upper {
            if let Some(map) = Canon::new(self, &p, bound).run() {
                return TotElement::from_map(&p, map);
            }
        }
        unreachable!("the given representation fits within its own depth")
    }

    /// The smallest `m` admitting a representation whose leaves and images
    /// all have depth at most `m`.
    pub fn depth(&self) -> usize {
        self.reduce().representation_depth()
    }

    /// Injective and onto: the images are pairwise disjoint cones covering
    /// the whole space.
    pub fn is_invertible(&self) -> bool {
        let imgs: Vec<&Shrubbery> = self.map.values().collect();
        for (i, a) in imgs.iter().enumerate() {
            for b in &imgs[i + 1..] {
                if a.meets(b) {
                    return false;
                }
            }
        }
        partitions_space(imgs, &self.params())
    }

    pub fn inverse(&self) -> Result<TotElement> {
        if !self.is_invertible() {
            return Err(Error::NotInvertible);
        }
        let p = self.params();
        let map = self
            .map
            .iter()
            .map(|(d, i)| (i.clone(), d.clone()))
            .collect();
        Ok(TotElement::from_map(&p, map).reduce())
    }

    pub fn parse(src: &str, p: &Params) -> Result<TotElement> {
        let mut c = Cursor::new(src);
        let t = parse_tot(&mut c, p)?;
        c.finish()?;
        Ok(t)
    }
}

pub(crate) fn parse_tot(c: &mut Cursor<'_>, p: &Params) -> Result<TotElement> {
    c.expect('{')?;
    let mut pairs = Vec::new();
    if !c.eat('}') {
        loop {
            let d = parse_shrubbery(c, p)?;
            c.expect_str("->")?;
            let img = parse_shrubbery(c, p)?;
            pairs.push((d, img));
            if c.eat(';') {
                continue;
            }
            c.expect('}')?;
            break;
        }
    }
    TotElement::new(p, pairs)
}

impl fmt::Display for TotElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (d, img)) in self.map.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{d} -> {img}")?;
        }
        f.write_str("}")
    }
}

#[derive(Clone)]
enum Choice {
    Leaf(Shrubbery),
    Split(usize),
}

/// Memoized search for the fewest-leaf representation within `bound`.
struct Canon<'a> {
    f: &'a TotElement,
    p: &'a Params,
    bound: usize,
    memo: HashMap<Shrubbery, Option<(usize, Choice)>>,
}

impl<'a> Canon<'a> {
    fn new(f: &'a TotElement, p: &'a Params, bound: usize) -> Self {
        Canon {
            f,
            p,
            bound,
            memo: HashMap::new(),
        }
    }

    fn run(mut self) -> Option<BTreeMap<Shrubbery, Shrubbery>> {
        let mut out = BTreeMap::new();
        for i in 0..self.p.r() {
            let root = Shrubbery::root_of(self.p, i);
            self.solve(&root)?;
            self.collect(&root, &mut out);
        }
        Some(out)
    }

    fn solve(&mut self, u: &Shrubbery) -> Option<usize> {
        if let Some(r) = self.memo.get(u) {
            return r.as_ref().map(|(c, _)| *c);
        }
        let result = self.compute(u);
        let count = result.as_ref().map(|(c, _)| *c);
        self.memo.insert(u.clone(), result);
        count
    }

    fn compute(&mut self, u: &Shrubbery) -> Option<(usize, Choice)> {
        if u.depth() <= self.bound {
            if let Some(s) = self.f.restricted_image(u) {
                if s.depth() <= self.bound {
                    return Some((1, Choice::Leaf(s)));
                }
            }
        }
        let mut best: Option<(usize, Choice)> = None;
        for dim in 0..self.p.n() {
            if u.word(dim).len() >= self.bound {
                continue;
            }
            let mut total = 0;
            let mut ok = true;
            for j in 0..self.p.k() as Digit {
                match self.solve(&u.child(dim, j)) {
                    Some(c) => total += c,
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok && best.as_ref().is_none_or(|(b, _)| total < *b) {
                best = Some((total, Choice::Split(dim)));
            }
        }
        best
    }

    fn collect(&self, u: &Shrubbery, out: &mut BTreeMap<Shrubbery, Shrubbery>) {
        match &self.memo[u] {
            Some((_, Choice::Leaf(s))) => {
                out.insert(u.clone(), s.clone());
            }
            Some((_, Choice::Split(dim))) => {
                for j in 0..self.p.k() as Digit {
                    self.collect(&u.child(*dim, j), out);
                }
            }
            None => unreachable!("collect is only called on solved nodes"),
        }
    }
}

/// The map `x ↦ g(f(x))`, reduced.
pub fn compose(f: &TotElement, g: &TotElement) -> Result<TotElement> {
    let p = f.params();
    p.check_same(&g.params())?;
    Ok(compose_unreduced(f, g).reduce())
}

/// Composition by expanding leaves of `f` until each image lies under a
/// leaf of `g`.
pub fn compose_unreduced(f: &TotElement, g: &TotElement) -> TotElement {
    let p = f.params();
    let mut out = BTreeMap::new();
    for (d, img) in &f.map {
        compose_rec(d.clone(), img.clone(), g, &p, &mut out);
    }
    TotElement::from_map(&p, out)
}

fn compose_rec(
    d: Shrubbery,
    img: Shrubbery,
    g: &TotElement,
    p: &Params,
    out: &mut BTreeMap<Shrubbery, Shrubbery>,
) {
    let meeting: Vec<&Shrubbery> = g.map.keys().filter(|c| c.meets(&img)).collect();
    if let Some(c) = meeting.iter().find(|c| c.leq(&img)) {
        let v = img.suffix_after(c).expect("c is below img");
        out.insert(d, g.map[*c].concat(&v).expect("same dimension"));
        return;
    }
    let dim = split_dimension(&img, meeting.iter().copied(), p.n())
        .expect("a leaf of g meeting img but not below it is longer somewhere");
    for j in 0..p.k() as Digit {
        compose_rec(d.child(dim, j), img.child(dim, j), g, p, out);
    }
}

/// Equality of maps via canonical representatives.
pub fn tot_eq(f: &TotElement, g: &TotElement) -> bool {
    f.params == g.params && f.reduce() == g.reduce()
}

/// Equality of maps by comparing images of every flat shrubbery at the
/// larger domain depth.
pub fn tot_eq_flat(f: &TotElement, g: &TotElement) -> Result<bool> {
    let p = f.params();
    p.check_same(&g.params())?;
    let depth = f.domain_depth().max(g.domain_depth());
    let size = p
        .k()
        .checked_pow((p.n() * depth) as u32)
        .and_then(|s| s.checked_mul(p.r()));
    if size.is_none_or(|s| s > GRID_GUARD) {
        return Err(Error::SizeGuard(format!(
            "flat comparison at depth {depth}"
        )));
    }
    for w in flat_shrubberies(&p, depth) {
        if f.eval_prefix(&w)? != g.eval_prefix(&w)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Collapses `k` sibling leaves whose images extend a common shrubbery by
/// the same digits, one collapse at a time in the order picked by `choose`
/// among the available ones, until none remains. Only for `n = 1`, where the
/// fixpoint is the canonical form regardless of the order.
pub fn collapse_siblings(
    f: &TotElement,
    mut choose: impl FnMut(usize) -> usize,
) -> Result<TotElement> {
    let p = f.params();
    if p.n() != 1 {
        return Err(Error::InvalidParams(
            "sibling collapse is only order independent for n = 1".into(),
        ));
    }
    let mut map = f.map.clone();
    loop {
        let mut candidates = Vec::new();
        for leaf in map.keys() {
            let w = leaf.word(0).digits();
            if w.last() != Some(&0) {
                continue;
            }
            let parent = Shrubbery::from_parts(
                leaf.root(),
                Shrub::new(vec![crate::shrubbery::Word::from(&w[..w.len() - 1])]),
            );
            let mut common = None;
            let mut ok = true;
            for j in 0..p.k() as Digit {
                let child = parent.child(0, j);
                let Some(img) = map.get(&child) else {
                    ok = false;
                    break;
                };
                let unit = Shrub::unit(1, 0, j);
                match img.shrub().strip_suffix(&unit) {
                    Some(s) => {
                        let v = Shrubbery::from_parts(img.root(), s);
                        if common.as_ref().is_some_and(|c| *c != v) {
                            ok = false;
                            break;
                        }
                        common = Some(v);
                    }
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                candidates.push((parent, common.expect("k >= 2 children")));
            }
        }
        if candidates.is_empty() {
            return Ok(TotElement::from_map(&p, map));
        }
        let (parent, v) = candidates.swap_remove(choose(candidates.len()) % candidates.len());
        for j in 0..p.k() as Digit {
            map.remove(&parent.child(0, j));
        }
        map.insert(parent, v);
    }
}

/// An ordered prefix code of size `r`, not necessarily complete.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootSystem {
    elements: Vec<Shrubbery>,
}

impl RootSystem {
    pub fn new(p: &Params, elements: Vec<Shrubbery>) -> Result<Self> {
        if elements.len() != p.r() {
            return Err(Error::InvalidRootSystem(format!(
                "expected {} shrubberies, found {}",
                p.r(),
                elements.len()
            )));
        }
        for (i, a) in elements.iter().enumerate() {
            if !a.valid(p) {
                return Err(Error::InvalidRootSystem(format!(
                    "{a} is out of range for {p}"
                )));
            }
            for b in &elements[i + 1..] {
                if a.meets(b) {
                    return Err(Error::InvalidRootSystem(format!("{a} and {b} overlap")));
                }
            }
        }
        Ok(RootSystem { elements })
    }

    /// The roots themselves.
    pub fn trivial(p: &Params) -> Self {
        RootSystem {
            elements: (0..p.r()).map(|i| Shrubbery::root_of(p, i)).collect(),
        }
    }

    /// `r_j`: root 0 with `j` zeros in dimension 0, then the other roots.
    pub fn r_j(p: &Params, j: usize) -> Self {
        let mut elements: Vec<Shrubbery> = (0..p.r()).map(|i| Shrubbery::root_of(p, i)).collect();
        for _ in 0..j {
            elements[0] = elements[0].child(0, 0);
        }
        RootSystem { elements }
    }

    pub fn elements(&self) -> &[Shrubbery] {
        &self.elements
    }

    pub fn depth(&self) -> usize {
        self.elements
            .iter()
            .map(Shrubbery::depth)
            .max()
            .unwrap_or(0)
    }

    /// `Some(j)` when this is `r_j`.
    pub fn as_r_j(&self, p: &Params) -> Option<usize> {
        let j = self.elements[0].word(0).len();
        (*self == RootSystem::r_j(p, j)).then_some(j)
    }

    pub fn parse(src: &str, p: &Params) -> Result<RootSystem> {
        let mut c = Cursor::new(src);
        let rs = parse_root_system(&mut c, p)?;
        c.finish()?;
        Ok(rs)
    }
}

pub(crate) fn parse_root_system(c: &mut Cursor<'_>, p: &Params) -> Result<RootSystem> {
    c.expect('[')?;
    let mut elements = vec![parse_shrubbery(c, p)?];
    while c.eat(';') {
        elements.push(parse_shrubbery(c, p)?);
    }
    c.expect(']')?;
    RootSystem::new(p, elements)
}

impl fmt::Display for RootSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, s) in self.elements.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str("]")
    }
}

/// `f_w`: acts on the cone of `w_i` as `f` acts on root `i`, re-rooting the
/// result through `w`, and is the identity off the cones of `w`.
pub fn deferment(f: &TotElement, w: &RootSystem) -> Result<TotElement> {
    let p = f.params();
    if w.elements.len() != p.r() || w.elements.iter().any(|s| !s.valid(&p)) {
        return Err(Error::InvalidRootSystem(w.to_string()));
    }
    let mut map = BTreeMap::new();
    for (d, img) in f.reduce().map {
        map.insert(
            d.rebased(&w.elements[d.root()]),
            img.rebased(&w.elements[img.root()]),
        );
    }
    let set: BTreeSet<Shrubbery> = w.elements.iter().cloned().collect();
    for c in complement_code(&set, &p) {
        map.insert(c.clone(), c);
    }
    Ok(TotElement::from_map(&p, map).reduce())
}
