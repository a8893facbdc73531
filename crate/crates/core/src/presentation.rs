//! Words over a finite alphabet of relation-monoid elements, their
//! evaluation, the deferment substitutions on words, and the eight relation
//! families of the finite presentation.
//!
//! The alphabet is always an explicit finite sub-alphabet of the depth-3
//! elements. Deferment words are looked up, never invented: a letter whose
//! deferment to `r_1` has not been registered makes every family that needs
//! it skip that letter, with a note in the build report.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::params::Params;
use crate::rel::{
    gen_p, gen_pi0, gen_pi_w, gen_u, gen_u_dim0, p_w_word, parse_element, pi_index, rel_mul,
    RelElement, LETTER_DEPTH,
};
use crate::shrubbery::{flat_shrubs, Digit, Shrub, Shrubbery};
use crate::syntax::Cursor;
use crate::tot::{deferment, parse_root_system, RootSystem, TotElement};

/// A finite sequence of letter names.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonoidWord(Vec<String>);

impl MonoidWord {
    pub fn empty() -> Self {
        MonoidWord(Vec::new())
    }

    pub fn letter(name: &str) -> Self {
        MonoidWord(vec![name.to_string()])
    }

    pub fn letters(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &MonoidWord) -> MonoidWord {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        MonoidWord(v)
    }

    /// Reversed, with every letter replaced by its registered inverse.
    pub fn inverse(&self, a: &GenAlphabet) -> Result<MonoidWord> {
        self.0
            .iter()
            .rev()
            .map(|x| {
                a.inverse_of(x).map(str::to_string).ok_or_else(|| {
                    Error::InvalidLabeling(format!("letter `{x}` has no registered inverse"))
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(MonoidWord)
    }

    /// Whitespace-separated letter names; `ε` is the empty word.
    pub fn parse(src: &str) -> Result<MonoidWord> {
        let mut c = Cursor::new(src);
        if c.eat('ε') {
            c.finish()?;
            return Ok(MonoidWord::empty());
        }
        let mut v = Vec::new();
        while c.peek().is_some() {
            match c.ident() {
                Some(x) => v.push(x.to_string()),
                None => return c.error("expected a letter name"),
            }
        }
        Ok(MonoidWord(v))
    }
}

impl From<Vec<String>> for MonoidWord {
    fn from(v: Vec<String>) -> Self {
        MonoidWord(v)
    }
}

impl fmt::Display for MonoidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        f.write_str(&self.0.join(" "))
    }
}

/// A named finite alphabet of elements of depth at most 3, together with
/// the bookkeeping the relation families need: inverse pairs, the `π^w`
/// letters, the letter playing `U`, deferment words to `r_1`, and the words
/// `p^w`.
#[derive(Debug, Clone)]
pub struct GenAlphabet {
    params: Params,
    letters: Vec<(String, RelElement)>,
    index: HashMap<String, usize>,
    inverses: BTreeMap<String, String>,
    pi: BTreeMap<Shrubbery, String>,
    u: Option<String>,
    sdef: BTreeMap<String, MonoidWord>,
    p_words: BTreeMap<RootSystem, MonoidWord>,
}

impl GenAlphabet {
    pub fn new(p: &Params) -> Self {
        GenAlphabet {
            params: *p,
            letters: Vec::new(),
            index: HashMap::new(),
            inverses: BTreeMap::new(),
            pi: BTreeMap::new(),
            u: None,
            sdef: BTreeMap::new(),
            p_words: BTreeMap::new(),
        }
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn insert(&mut self, name: &str, x: RelElement) -> Result<()> {
        self.params.check_same(&x.params())?;
        if self.index.contains_key(name) {
            return Err(Error::InvalidLabeling(format!(
                "letter `{name}` defined twice"
            )));
        }
        if x.depth() > LETTER_DEPTH {
            return Err(Error::OutOfRange(format!(
                "letter `{name}` has depth {}, letters have depth at most {LETTER_DEPTH}",
                x.depth()
            )));
        }
        self.index.insert(name.to_string(), self.letters.len());
        self.letters.push((name.to_string(), x));
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<&RelElement> {
        self.index
            .get(name)
            .map(|&i| &self.letters[i].1)
            .ok_or_else(|| Error::UnknownLetter(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn letters(&self) -> impl Iterator<Item = (&str, &RelElement)> {
        self.letters.iter().map(|(n, x)| (n.as_str(), x))
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Registers `a` and `b` as mutually inverse; checked on the elements.
    pub fn set_inverses(&mut self, a: &str, b: &str) -> Result<()> {
        let (x, y) = (self.get(a)?, self.get(b)?);
        let e = RelElement::identity(&self.params);
        if rel_mul(x, y)? != e || rel_mul(y, x)? != e {
            return Err(Error::NotInvertible);
        }
        self.inverses.insert(a.to_string(), b.to_string());
        self.inverses.insert(b.to_string(), a.to_string());
        Ok(())
    }

    pub fn inverse_of(&self, name: &str) -> Option<&str> {
        self.inverses.get(name).map(String::as_str)
    }

    pub fn inverse_pairs(&self) -> Vec<(&str, &str)> {
        self.inverses
            .iter()
            .filter(|(a, b)| a <= b)
            .map(|(a, b)| (a.as_str(), b.as_str()))
            .collect()
    }

    /// Inserts `π^w` under `name`.
    pub fn insert_pi(&mut self, name: &str, w: &Shrubbery) -> Result<()> {
        self.insert(name, gen_pi_w(&self.params, w)?)?;
        self.pi.insert(w.clone(), name.to_string());
        Ok(())
    }

    pub fn pi_letter(&self, w: &Shrubbery) -> Option<&str> {
        self.pi.get(w).map(String::as_str)
    }

    pub fn pi_letters(&self) -> impl Iterator<Item = (&Shrubbery, &str)> {
        self.pi.iter().map(|(w, n)| (w, n.as_str()))
    }

    /// Inserts the element splitting every root into its flat depth-1
    /// children under `name`, and uses it wherever the families need `U`.
    pub fn insert_u(&mut self, name: &str) -> Result<()> {
        self.insert(name, gen_u(&self.params))?;
        self.u = Some(name.to_string());
        Ok(())
    }

    pub fn u_letter(&self) -> Option<&str> {
        self.u.as_deref()
    }

    /// Registers the deferment word of `x` to `r_1`, checked on the elements.
    pub fn set_sdef(&mut self, x: &str, word: MonoidWord) -> Result<()> {
        let expected = defer_element(self.get(x)?, &RootSystem::r_j(&self.params, 1))?;
        if phi_word(&word, self)? != expected {
            return Err(Error::MissingDeferment(format!(
                "{x}: `{word}` is not its deferment to r_1"
            )));
        }
        self.sdef.insert(x.to_string(), word);
        Ok(())
    }

    pub fn sdef_of(&self, x: &str) -> Option<&MonoidWord> {
        self.sdef.get(x)
    }

    /// Registers `p^w`: a word of invertible letters whose value maps `w`
    /// onto `r_1`.
    pub fn set_p_word(&mut self, w: &RootSystem, word: MonoidWord) -> Result<()> {
        word.inverse(self)?;
        let x = phi_word(&word, self)?;
        let target = RootSystem::r_j(&self.params, 1);
        for (wi, ti) in w.elements().iter().zip(target.elements()) {
            if x.carrier().restricted_image(wi).as_ref() != Some(ti) {
                return Err(Error::InvalidRootSystem(format!(
                    "`{word}` does not map {w} onto r_1"
                )));
            }
        }
        self.p_words.insert(w.clone(), word);
        Ok(())
    }

    pub fn p_word(&self, w: &RootSystem) -> Option<&MonoidWord> {
        self.p_words.get(w)
    }

    /// Inserts the letters of a word `p^w` built by [`p_w_word`], named
    /// `name`, `name_1`, ..., each with an inverse named `<letter>^-1`.
    pub fn insert_p_word(&mut self, name: &str, w: &RootSystem) -> Result<MonoidWord> {
        let letters = p_w_word(&self.params, w)?;
        let mut word = Vec::with_capacity(letters.len());
        for (i, x) in letters.into_iter().enumerate() {
            let n = if i == 0 {
                name.to_string()
            } else {
                format!("{name}_{i}")
            };
            let inv = format!("{n}^-1");
            let xi = x.inverse()?;
            self.insert(&n, x)?;
            self.insert(&inv, xi)?;
            self.set_inverses(&n, &inv)?;
            word.push(n);
        }
        let word = MonoidWord(word);
        self.set_p_word(w, word.clone())?;
        Ok(word)
    }

    /// Reads an alphabet file: one `name = expression` per line, `#`
    /// comments. Expressions are `identity()`, `U()`, `U0()`, `pi0()`,
    /// `pi(<shrubbery>)`, `inverse(<letter>)`, `defer(<letter>, <root
    /// system>)`, `pw(<root system>)`, or an element literal.
    pub fn parse(src: &str, p: &Params) -> Result<GenAlphabet> {
        let mut a = GenAlphabet::new(p);
        for (i, line) in src.lines().enumerate() {
            let body = line.split('#').next().unwrap_or("");
            if body.trim().is_empty() {
                continue;
            }
            a.parse_line(body).map_err(|e| match e {
                Error::Parse {
                    column, message, ..
                } => Error::Parse {
                    line: i + 1,
                    column,
                    message,
                },
                other => Error::Parse {
                    line: i + 1,
                    column: 1,
                    message: other.to_string(),
                },
            })?;
        }
        Ok(a)
    }

    fn parse_line(&mut self, line: &str) -> Result<()> {
        let p = self.params;
        let mut c = Cursor::new(line);
        let Some(name) = c.ident() else {
            return c.error("expected a letter name");
        };
        let name = name.to_string();
        c.expect('=')?;
        let call = |c: &mut Cursor<'_>, f: &str| c.peek_str(&format!("{f}(")) && c.eat_str(f);
        if call(&mut c, "identity") {
            c.expect('(')?;
            c.expect(')')?;
            c.finish()?;
            self.insert(&name, RelElement::identity(&p))
        } else if call(&mut c, "U0") {
            c.expect('(')?;
            c.expect(')')?;
            c.finish()?;
            self.insert(&name, gen_u_dim0(&p))
        } else if call(&mut c, "U") {
            c.expect('(')?;
            c.expect(')')?;
            c.finish()?;
            self.insert_u(&name)
        } else if call(&mut c, "pi0") {
            c.expect('(')?;
            c.expect(')')?;
            c.finish()?;
            let w = Shrubbery::root_of(&p, 0).child(0, 0);
            self.insert(&name, gen_pi0(&p))?;
            self.pi.insert(w, name);
            Ok(())
        } else if call(&mut c, "pi") {
            c.expect('(')?;
            let w = crate::shrubbery::parse_shrubbery(&mut c, &p)?;
            c.expect(')')?;
            c.finish()?;
            self.insert_pi(&name, &w)
        } else if call(&mut c, "inverse") {
            c.expect('(')?;
            let Some(of) = c.ident() else {
                return c.error("expected a letter name");
            };
            let of = of.to_string();
            c.expect(')')?;
            c.finish()?;
            let x = self.get(&of)?.inverse()?;
            self.insert(&name, x)?;
            self.set_inverses(&of, &name)
        } else if call(&mut c, "defer") {
            c.expect('(')?;
            let Some(of) = c.ident() else {
                return c.error("expected a letter name");
            };
            let of = of.to_string();
            c.expect(',')?;
            let w = parse_root_system(&mut c, &p)?;
            c.expect(')')?;
            c.finish()?;
            let x = defer_element(self.get(&of)?, &w)?;
            self.insert(&name, x)?;
            if w.as_r_j(&p) == Some(1) {
                self.set_sdef(&of, MonoidWord::letter(&name))?;
            }
            Ok(())
        } else if call(&mut c, "pw") {
            c.expect('(')?;
            let w = parse_root_system(&mut c, &p)?;
            c.expect(')')?;
            c.finish()?;
            self.insert_p_word(&name, &w).map(|_| ())
        } else {
            let rest = &line[line.find('=').expect("expected above") + 1..];
            self.insert(&name, parse_element(rest, &p)?)
        }
    }
}

fn defer_element(x: &RelElement, w: &RootSystem) -> Result<RelElement> {
    Ok(RelElement::from_carrier(&deferment(x.carrier(), w)?))
}

/// `Φ`: the product of the letters, left to right; the empty word is the
/// identity.
pub fn phi_word(w: &MonoidWord, a: &GenAlphabet) -> Result<RelElement> {
    let mut acc = RelElement::identity(&a.params);
    for x in &w.0 {
        acc = rel_mul(&acc, a.get(x)?)?;
    }
    Ok(acc)
}

/// Letterwise deferment to `r_1`.
pub fn sdef(w: &MonoidWord, a: &GenAlphabet) -> Result<MonoidWord> {
    let mut out = Vec::new();
    for x in &w.0 {
        a.get(x)?;
        let d = a
            .sdef_of(x)
            .ok_or_else(|| Error::MissingDeferment(x.clone()))?;
        out.extend(d.0.iter().cloned());
    }
    Ok(MonoidWord(out))
}

/// Deferment of a word to `rs`: `SDef^j` when `rs` is `r_j`, otherwise
/// `(p^rs)^{-1} (w)SDef p^rs`.
pub fn def_w(w: &MonoidWord, rs: &RootSystem, a: &GenAlphabet) -> Result<MonoidWord> {
    if let Some(j) = rs.as_r_j(&a.params) {
        let mut out = w.clone();
        for _ in 0..j {
            out = sdef(&out, a)?;
        }
        return Ok(out);
    }
    let p = a
        .p_word(rs)
        .ok_or_else(|| Error::MissingDeferment(format!("p^w for {rs}")))?;
    Ok(p.inverse(a)?.concat(&sdef(w, a)?).concat(p))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub left: MonoidWord,
    pub right: MonoidWord,
    pub family: u8,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "family {}: {} =? {}", self.family, self.left, self.right)
    }
}

/// Search limits for [`build_r0`].
#[derive(Debug, Clone, Copy)]
pub struct R0Options {
    /// Longest `π`-word tried after the letter in family 4.
    pub family4_max_left: usize,
    /// Number of evaluations allowed in the family-4 search.
    pub family4_budget: usize,
    /// Largest number of family-5 instances kept, spread evenly over all.
    pub family5_limit: usize,
}

impl Default for R0Options {
    fn default() -> Self {
        R0Options {
            family4_max_left: 2,
            family4_budget: 20_000,
            family5_limit: 64,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct R0Build {
    pub relations: Vec<Relation>,
    pub notes: Vec<String>,
}

/// The flat depth-1 shrubs in the fixed order used for products over `B`.
pub fn b_shrubs(p: &Params) -> Vec<Shrub> {
    flat_shrubs(p, 1)
}

/// The root system putting `w` on every root.
pub fn b_root_system(p: &Params, w: &Shrub) -> RootSystem {
    let elements = (0..p.r())
        .map(|l| Shrubbery::new(p, l, w.clone()).expect("flat depth-1 shrub"))
        .collect();
    RootSystem::new(p, elements).expect("distinct roots")
}

/// The `π`-word prefixing `shrubs[l]` on root `l`, one `π^w` letter per
/// digit, roots and dimensions in order.
pub fn pi_word(shrubs: &[Shrub], a: &GenAlphabet) -> Result<MonoidWord> {
    let p = a.params;
    let mut out = Vec::new();
    for (l, s) in shrubs.iter().enumerate() {
        for d in 0..p.n() {
            for &j in s.word(d).digits() {
                let w = Shrubbery::root_of(&p, l).child(d, j);
                let name = a
                    .pi_letter(&w)
                    .ok_or_else(|| Error::UnknownLetter(format!("pi letter for {w}")))?;
                out.push(name.to_string());
            }
        }
    }
    Ok(MonoidWord(out))
}

/// `π^{(0)s} ... π^{(r-1)s}` for the element of `B` built from `w`.
fn pi_b_word(w: &Shrub, a: &GenAlphabet) -> Result<MonoidWord> {
    pi_word(&vec![w.clone(); a.params.r()], a)
}

/// When `x` lies in the submonoid generated by the `π^w`, the shrub it
/// prefixes on each root.
pub fn as_p_tuple(x: &RelElement) -> Option<Vec<Shrub>> {
    let p = x.params();
    let map = x.carrier().map();
    if map.len() != p.r() {
        return None;
    }
    map.iter()
        .enumerate()
        .map(|(l, (d, img))| {
            (d.root() == l && d.depth() == 0 && img.root() == l).then(|| img.shrub().clone())
        })
        .collect()
}

fn words_over(letters: &[&str], max_len: usize) -> Vec<MonoidWord> {
    let mut out = vec![MonoidWord::empty()];
    let mut layer = vec![MonoidWord::empty()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for x in letters {
                next.push(w.concat(&MonoidWord::letter(x)));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Instances of the eight relation families over `a`.
pub fn build_r0(a: &GenAlphabet, opts: &R0Options) -> Result<R0Build> {
    let p = a.params;
    let mut out = R0Build::default();
    let eps = MonoidWord::empty();
    let identity = RelElement::identity(&p);
    let push = |out: &mut R0Build, family, left: MonoidWord, right: MonoidWord| {
        out.relations.push(Relation {
            left,
            right,
            family,
        });
    };

    // 1: identity letters
    for (name, x) in a.letters() {
        if *x == identity {
            push(&mut out, 1, MonoidWord::letter(name), eps.clone());
        }
    }

    // 2: inverse pairs
    for (x, y) in a.inverse_pairs() {
        let xy = MonoidWord(vec![x.to_string(), y.to_string()]);
        push(&mut out, 2, xy.clone(), eps.clone());
        if x != y {
            push(
                &mut out,
                2,
                MonoidWord(vec![y.to_string(), x.to_string()]),
                eps.clone(),
            );
        }
    }

    // 3: commuting π letters
    let pis: Vec<&str> = a.pi_letters().map(|(_, n)| n).collect();
    for (i, v) in pis.iter().enumerate() {
        for w in &pis[i + 1..] {
            let vw = MonoidWord(vec![v.to_string(), w.to_string()]);
            let wv = MonoidWord(vec![w.to_string(), v.to_string()]);
            if phi_word(&vw, a)? == phi_word(&wv, a)? {
                push(&mut out, 3, vw, wv);
            }
        }
    }

    // 4: a letter followed by a π-word, equal to a π-word
    let tails = words_over(&pis, opts.family4_max_left);
    let tail_values = tails
        .iter()
        .map(|t| phi_word(t, a))
        .collect::<Result<Vec<_>>>()?;
    let mut evaluations = 0;
    'family4: for (name, x) in a.letters() {
        for (t, tv) in tails.iter().zip(&tail_values) {
            if evaluations >= opts.family4_budget {
                out.notes.push(format!(
                    "family 4: evaluation budget of {} reached, list is partial",
                    opts.family4_budget
                ));
                break 'family4;
            }
            evaluations += 1;
            let Some(tuple) = as_p_tuple(&rel_mul(x, tv)?) else {
                continue;
            };
            if tuple.iter().map(Shrub::total_len).sum::<usize>() > 6 * p.r() {
                continue;
            }
            let left = MonoidWord::letter(name).concat(t);
            let right = pi_word(&tuple, a)?;
            if left != right {
                push(&mut out, 4, left, right);
            }
        }
    }

    let bs = b_shrubs(&p);
    let b_systems: Vec<RootSystem> = bs.iter().map(|w| b_root_system(&p, w)).collect();
    let deferrable: Vec<&str> = a
        .letters()
        .map(|(n, _)| n)
        .filter(|n| a.sdef_of(n).is_some())
        .collect();
    let skipped = a.len() - deferrable.len();
    if skipped > 0 {
        out.notes.push(format!(
            "families 5-8: {skipped} letters without a registered deferment are skipped"
        ));
    }

    // 5: deferments into disjoint cones commute
    let mut xs = Vec::new();
    for x in &deferrable {
        xs.push(MonoidWord::letter(x));
    }
    for x in &deferrable {
        for w in &bs {
            if let Ok(pw) = pi_b_word(w, a) {
                xs.push(MonoidWord::letter(x).concat(&pw));
            }
        }
    }
    let mut fam5 = Vec::new();
    for x in &xs {
        for y in &xs {
            for (i, v) in b_systems.iter().enumerate() {
                for (j, w) in b_systems.iter().enumerate() {
                    if i == j {
                        continue;
                    }
                    fam5.push((x, v, y, w));
                }
            }
        }
    }
    let total5 = fam5.len();
    let step = total5.div_ceil(opts.family5_limit.max(1)).max(1);
    let mut kept5 = 0;
    let mut failed5 = 0;
    for (x, v, y, w) in fam5.into_iter().step_by(step) {
        match (def_w(x, v, a), def_w(y, w, a)) {
            (Ok(dx), Ok(dy)) => {
                push(&mut out, 5, dx.concat(&dy), dy.concat(&dx));
                kept5 += 1;
            }
            _ => failed5 += 1,
        }
    }
    if kept5 < total5 {
        out.notes
            .push(format!("family 5: kept {kept5} of {total5} instances"));
    }
    if failed5 > 0 {
        out.notes.push(format!(
            "family 5: {failed5} sampled instances skipped for missing deferment words"
        ));
    }

    // 6 and 7: splitting through U
    match a.u_letter() {
        None => out
            .notes
            .push("families 6-7: no U letter registered".to_string()),
        Some(u) => {
            let uw = MonoidWord::letter(u);
            for x in &deferrable {
                let xw = MonoidWord::letter(x);
                let mut six = Some(uw.clone());
                let mut seven = Some(uw.clone());
                for (w, s) in bs.iter().zip(&b_systems) {
                    let with_pi = pi_b_word(w, a).and_then(|pw| def_w(&xw.concat(&pw), s, a));
                    six = match (six, with_pi) {
                        (Some(acc), Ok(d)) => Some(acc.concat(&d)),
                        _ => None,
                    };
                    seven = match (seven, def_w(&xw, s, a)) {
                        (Some(acc), Ok(d)) => Some(acc.concat(&d)),
                        _ => None,
                    };
                }
                match six {
                    Some(r) => push(&mut out, 6, xw.clone(), r),
                    None => out
                        .notes
                        .push(format!("family 6: `{x}` skipped, missing deferment words")),
                }
                match seven {
                    Some(r) => push(&mut out, 7, xw.concat(&uw), r),
                    None => out
                        .notes
                        .push(format!("family 7: `{x}` skipped, missing deferment words")),
                }
            }
        }
    }

    // 8: deferring twice is conjugation by p^{r_2}
    let r2 = RootSystem::r_j(&p, 2);
    match a.p_word(&r2) {
        None => out
            .notes
            .push("family 8: no p^w registered for r_2".to_string()),
        Some(p2) => {
            let p2inv = p2.inverse(a)?;
            for x in &deferrable {
                let once = a.sdef_of(x).expect("filtered above");
                match sdef(once, a) {
                    Ok(twice) => push(&mut out, 8, twice, p2inv.concat(once).concat(p2)),
                    Err(_) => out.notes.push(format!(
                        "family 8: `{x}` skipped, `{once}` has no deferment word"
                    )),
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct Check {
    pub relation: Relation,
    pub left: RelElement,
    pub right: RelElement,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.left == self.right
    }
}

#[derive(Debug, Clone, Default)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn all_passed(&self) -> bool {
        self.failures().next().is_none()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let verdict = if c.passed() { "PASS" } else { "FAIL" };
            writeln!(f, "{} : {verdict}", c.relation)?;
            if !c.passed() {
                writeln!(f, "  left  = {}", c.left)?;
                writeln!(f, "  right = {}", c.right)?;
            }
        }
        Ok(())
    }
}

/// Evaluates both sides of every relation, spread over the available
/// threads; the report keeps the input order.
pub fn verify_relations(rels: &[Relation], a: &GenAlphabet) -> Result<VerifyReport> {
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    let chunk = rels.len().div_ceil(threads).max(1);
    let results: Vec<Result<Vec<Check>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = rels
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || {
                    part.iter()
                        .map(|r| {
                            Ok(Check {
                                relation: r.clone(),
                                left: phi_word(&r.left, a)?,
                                right: phi_word(&r.right, a)?,
                            })
                        })
                        .collect()
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    let mut checks = Vec::with_capacity(rels.len());
    for part in results {
        checks.extend(part?);
    }
    Ok(VerifyReport { checks })
}

/// Replaces one letter of the relation with a different letter of the
/// alphabet. Positions and letters are chosen by `rng`.
pub fn mutate(rel: &Relation, a: &GenAlphabet, rng: &mut impl rand::Rng) -> Relation {
    let names: Vec<&str> = a.letters().map(|(n, _)| n).collect();
    let mut out = rel.clone();
    let total = out.left.len() + out.right.len();
    if total == 0 || names.len() < 2 {
        out.left
            .0
            .push(names[rng.gen_range(0..names.len())].to_string());
        return out;
    }
    let pos = rng.gen_range(0..total);
    let slot = if pos < out.left.len() {
        &mut out.left.0[pos]
    } else {
        &mut out.right.0[pos - rel.left.len()]
    };
    loop {
        let cand = names[rng.gen_range(0..names.len())];
        if cand != slot.as_str() {
            *slot = cand.to_string();
            break;
        }
    }
    out
}

/// Largest `P_d` that will be materialized.
pub const P_D_GUARD: usize = 1 << 16;

/// All `r`-tuples of flat depth-`d` shrubs.
pub fn p_d_tuples(d: usize, p: &Params) -> Result<Vec<Vec<Shrub>>> {
    let size = p
        .k()
        .checked_pow((p.n() * d * p.r()) as u32)
        .filter(|&s| s <= P_D_GUARD);
    if size.is_none() {
        return Err(Error::Budget(format!(
            "P_{d} for {p} exceeds {P_D_GUARD} elements"
        )));
    }
    let shrubs = flat_shrubs(p, d);
    let mut tuples = vec![Vec::new()];
    for _ in 0..p.r() {
        tuples = tuples
            .into_iter()
            .flat_map(|t: Vec<Shrub>| {
                shrubs.iter().map(move |s| {
                    let mut t = t.clone();
                    t.push(s.clone());
                    t
                })
            })
            .collect();
    }
    Ok(tuples)
}

/// `P_d`: the elements prefixing a flat depth-`d` shrub on every root.
pub fn p_d(d: usize, p: &Params) -> Result<Vec<RelElement>> {
    p_d_tuples(d, p)?.iter().map(|t| gen_p(p, t)).collect()
}

/// The right-hand side of the splitting identity through `U`, evaluated
/// with element-level deferments.
pub fn u_split(x: &RelElement) -> Result<RelElement> {
    let p = x.params();
    let mut acc = gen_u(&p);
    for w in b_shrubs(&p) {
        let pw = gen_p(&p, &vec![w.clone(); p.r()])?;
        let d = defer_element(&rel_mul(x, &pw)?, &b_root_system(&p, &w))?;
        acc = rel_mul(&acc, &d)?;
    }
    Ok(acc)
}

/// `Φ(x) = U ∏_s (Φ(x) π^{(0)s}...π^{(r-1)s})_s`.
pub fn u_split_holds(x: &MonoidWord, a: &GenAlphabet) -> Result<bool> {
    let v = phi_word(x, a)?;
    Ok(u_split(&v)? == v)
}

/// A `π ∈ P_d` with `gπ ≠ hπ`, if there is one.
pub fn distinguishing_pi(g: &RelElement, h: &RelElement, d: usize) -> Result<Option<RelElement>> {
    for pi in p_d(d, &g.params())? {
        if rel_mul(g, &pi)? != rel_mul(h, &pi)? {
            return Ok(Some(pi));
        }
    }
    Ok(None)
}

/// Whether "`gπ = hπ` for every `π ∈ P_d`" agrees with "`g = h`".
pub fn p_d_separates(g: &RelElement, h: &RelElement, d: usize) -> Result<bool> {
    Ok(distinguishing_pi(g, h, d)?.is_none() == (g == h))
}

/// Cyclic shift of the dimension-0 children of root 0.
pub fn shift_letter(p: &Params) -> RelElement {
    let root = Shrubbery::root_of(p, 0);
    let k = p.k() as Digit;
    let mut pairs: Vec<_> = (0..k)
        .map(|j| (root.child(0, j), root.child(0, (j + 1) % k)))
        .collect();
    pairs.extend((1..p.r()).map(|l| (Shrubbery::root_of(p, l), Shrubbery::root_of(p, l))));
    RelElement::from_carrier(&TotElement::new(p, pairs).expect("complete code"))
}

/// Exchanges roots 0 and 1.
pub fn swap_letter(p: &Params) -> Result<RelElement> {
    if p.r() < 2 {
        return Err(Error::OutOfRange("swapping roots needs r >= 2".into()));
    }
    let pairs = (0..p.r()).map(|l| {
        let m = match l {
            0 => 1,
            1 => 0,
            l => l,
        };
        (Shrubbery::root_of(p, l), Shrubbery::root_of(p, m))
    });
    TotElement::new(p, pairs).map(|t| RelElement::from_carrier(&t))
}

fn digits_name(s: &Shrub) -> String {
    s.words().iter().map(|w| w.to_string()).collect()
}

/// The standard sub-alphabet: the identity `e`, `U`, `U0`, one `π^w` letter
/// `pi_<root>_<dim>_<digit>` for every `w ∈ F`, the shift `t` and its
/// inverse, the root swap `sw` when `r ≥ 2`, deferments `x@r1` and
/// `x@r1@r1` of all of these where the depth allows, and the words `p^w`
/// for `r_2` and for the elements of `B` other than `r_1`.
pub fn standard_alphabet(p: &Params) -> Result<GenAlphabet> {
    let mut a = GenAlphabet::new(p);
    a.insert("e", RelElement::identity(p))?;
    a.insert_u("U")?;
    a.insert("U0", gen_u_dim0(p))?;
    for w in pi_index(p) {
        let d = (0..p.n())
            .find(|&d| !w.word(d).is_empty())
            .expect("one nonempty word");
        let name = format!("pi_{}_{}_{}", w.root(), d, w.word(d).digits()[0]);
        a.insert_pi(&name, &w)?;
    }
    let t = shift_letter(p);
    a.insert("t^-1", t.inverse()?)?;
    a.insert("t", t)?;
    a.set_inverses("t", "t^-1")?;
    if p.r() >= 2 {
        a.insert("sw", swap_letter(p)?)?;
        a.set_inverses("sw", "sw")?;
    }

    let r1 = RootSystem::r_j(p, 1);
    let base: Vec<String> = a.letters().map(|(n, _)| n.to_string()).collect();
    let mut level = base;
    for _ in 0..2 {
        let mut next = Vec::new();
        for x in &level {
            let d = defer_element(a.get(x)?, &r1)?;
            if d.depth() > LETTER_DEPTH {
                continue;
            }
            let name = format!("{x}@r1");
            a.insert(&name, d)?;
            a.set_sdef(x, MonoidWord::letter(&name))?;
            next.push(name);
        }
        for x in &next {
            let base = &x[..x.len() - 3];
            if let Some(inv) = a.inverse_of(base).map(str::to_string) {
                let inv_d = format!("{inv}@r1");
                if a.contains(&inv_d) && !a.inverses.contains_key(x) {
                    a.set_inverses(x, &inv_d)?;
                }
            }
        }
        level = next;
    }

    a.insert_p_word("p_r2", &RootSystem::r_j(p, 2))?;
    for w in b_shrubs(p) {
        let rs = b_root_system(p, &w);
        if rs.as_r_j(p).is_none() {
            a.insert_p_word(&format!("p_s{}", digits_name(&w)), &rs)?;
        }
    }
    Ok(a)
}
