//! Concrete group arithmetic through per-family normal forms.
//!
//! A [`Group`] is a closed family together with a symmetric list of named
//! generators. Words are sequences of indices into that list.

mod ball;
mod element;
mod config;
mod subgroup;
mod transversal;

pub use ball::{word_metric, Ball};
pub use element::Element;
pub use config::{parse_group_spec, GroupSpec, SubgroupSpec};
pub use subgroup::{Membership, Side, SubgroupEmbedding};
pub use transversal::Transversal;

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};

/// A named generator. The generator list of a group is symmetric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub element: Element,
}

/// Multiplication table of a finite group, validated at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteTable {
    table: Vec<Vec<u32>>,
    identity: u32,
    inverse: Vec<u32>,
}

impl FiniteTable {
    pub fn new(table: Vec<Vec<u32>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::invalid("empty multiplication table"));
        }
        for row in &table {
            if row.len() != n || row.iter().any(|&x| x as usize >= n) {
                return Err(Error::invalid("multiplication table is not square"));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] as usize == x && table[x][e] as usize == x))
            .ok_or_else(|| Error::invalid("multiplication table has no identity"))?
            as u32;
        let mut inverse = vec![0u32; n];
        for (x, inv) in inverse.iter_mut().enumerate() {
            *inv = (0..n)
                .find(|&y| table[x][y] == identity)
                .ok_or_else(|| Error::invalid(format!("element {x} has no inverse")))?
                as u32;
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let l = table[table[x][y] as usize][z];
                    let r = table[x][table[y][z] as usize];
                    if l != r {
                        return Err(Error::invalid(format!(
                            "multiplication table is not associative at ({x},{y},{z})"
                        )));
                    }
                }
            }
        }
        Ok(Self {
            table,
            identity,
            inverse,
        })
    }

    /// Cyclic group of order `n`.
    pub fn cyclic(n: usize) -> Self {
        let table = (0..n)
            .map(|i| (0..n).map(|j| ((i + j) % n) as u32).collect())
            .collect();
        Self::new(table).expect("cyclic table is valid")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }
}

/// The closed set of supported group families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    Free { rank: usize },
    FreeAbelian { rank: usize },
    Finite(FiniteTable),
    /// `BS(1,m) = <a, b | b^-1 a b = a^m>`.
    BaumslagSolitar { m: i64 },
    /// `<a, b, t | t^2 = 1, t^-1 a t = b>`.
    F2SemidirectZ2,
    /// `Z^n x| Z/2` with the generator of `Z/2` acting by inversion.
    AbelianInversion { rank: usize },
    DirectProduct(Box<Group>, Box<Group>),
    FreeProduct(Box<Group>, Box<Group>),
}

/// A group oracle: multiplication, inversion and equality through normal forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Group {
    family: Family,
    gens: Vec<Generator>,
}

fn letter(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("x{i}")
    }
}

fn free_reduce_push(word: &mut Vec<i32>, l: i32) {
    if word.last() == Some(&-l) {
        word.pop();
    } else {
        word.push(l);
    }
}

fn swap_ab(l: i32) -> i32 {
    match l.abs() {
        1 => 2 * l.signum(),
        2 => l.signum(),
        _ => l,
    }
}

fn pow_i128(m: i64, e: u32) -> i128 {
    (m as i128).pow(e)
}

/// Normalizes `num / m^den_exp` so that `m` does not divide `num` when `den_exp > 0`.
fn normalize_affine(m: i64, level: i64, mut num: i128, mut den_exp: u32) -> Element {
    let mm = m as i128;
    while den_exp > 0 && num % mm == 0 {
        num /= mm;
        den_exp -= 1;
    }
    if num == 0 {
        den_exp = 0;
    }
    Element::Affine {
        level,
        num,
        den_exp,
    }
}

impl Group {
    pub fn free(rank: usize) -> Self {
        let mut gens = Vec::with_capacity(2 * rank);
        for i in 0..rank {
            let l = i as i32 + 1;
            gens.push(Generator {
                name: letter(i),
                element: Element::Free(vec![l]),
            });
            gens.push(Generator {
                name: format!("{}^-1", letter(i)),
                element: Element::Free(vec![-l]),
            });
        }
        Self {
            family: Family::Free { rank },
            gens,
        }
    }

    pub fn free_abelian(rank: usize) -> Self {
        let mut gens = Vec::with_capacity(2 * rank);
        for i in 0..rank {
            let mut v = vec![0; rank];
            v[i] = 1;
            gens.push(Generator {
                name: letter(i),
                element: Element::Abelian(v.clone()),
            });
            v[i] = -1;
            gens.push(Generator {
                name: format!("{}^-1", letter(i)),
                element: Element::Abelian(v),
            });
        }
        Self {
            family: Family::FreeAbelian { rank },
            gens,
        }
    }

    /// Finite group from a table; `generators` are element indices, closed
    /// under inversion automatically. `None` uses every non-identity element.
    pub fn finite(table: FiniteTable, generators: Option<Vec<u32>>) -> Result<Self> {
        let n = table.order() as u32;
        let mut chosen: Vec<u32> = match generators {
            Some(g) => {
                if let Some(bad) = g.iter().find(|&&x| x >= n) {
                    return Err(Error::invalid(format!("generator {bad} outside table")));
                }
                g
            }
            None => (0..n).filter(|&x| x != table.identity).collect(),
        };
        let extra: Vec<u32> = chosen
            .iter()
            .map(|&x| table.inverse[x as usize])
            .filter(|y| !chosen.contains(y))
            .collect();
        for y in extra {
            if !chosen.contains(&y) {
                chosen.push(y);
            }
        }
        let gens = chosen
            .into_iter()
            .map(|x| Generator {
                name: format!("g{x}"),
                element: Element::Finite(x),
            })
            .collect();
        Ok(Self {
            family: Family::Finite(table),
            gens,
        })
    }

    pub fn cyclic(n: usize) -> Self {
        let table = FiniteTable::cyclic(n);
        let gens = if n > 1 { Some(vec![1]) } else { Some(vec![]) };
        Self::finite(table, gens).expect("cyclic group")
    }

    pub fn baumslag_solitar(m: i64) -> Result<Self> {
        if m.abs() < 2 {
            return Err(Error::invalid("BS(1,m) requires |m| >= 2"));
        }
        if m < 0 {
            return Err(Error::Unsupported("BS(1,m) with negative m".into()));
        }
        let a = normalize_affine(m, 0, 1, 0);
        let ai = normalize_affine(m, 0, -1, 0);
        let b = normalize_affine(m, -1, 0, 0);
        let bi = normalize_affine(m, 1, 0, 0);
        Ok(Self {
            family: Family::BaumslagSolitar { m },
            gens: vec![
                Generator { name: "a".into(), element: a },
                Generator { name: "a^-1".into(), element: ai },
                Generator { name: "b".into(), element: b },
                Generator { name: "b^-1".into(), element: bi },
            ],
        })
    }

    pub fn f2_semidirect_z2() -> Self {
        let tw = |w: Vec<i32>, flip| Element::Twisted { word: w, flip };
        Self {
            family: Family::F2SemidirectZ2,
            gens: vec![
                Generator { name: "a".into(), element: tw(vec![1], false) },
                Generator { name: "a^-1".into(), element: tw(vec![-1], false) },
                Generator { name: "b".into(), element: tw(vec![2], false) },
                Generator { name: "b^-1".into(), element: tw(vec![-2], false) },
                Generator { name: "t".into(), element: tw(vec![], true) },
            ],
        }
    }

    pub fn abelian_inversion(rank: usize) -> Self {
        let mut gens = Vec::with_capacity(2 * rank + 1);
        for i in 0..rank {
            let mut v = vec![0; rank];
            v[i] = 1;
            gens.push(Generator {
                name: letter(i),
                element: Element::Signed { vector: v.clone(), flip: false },
            });
            v[i] = -1;
            gens.push(Generator {
                name: format!("{}^-1", letter(i)),
                element: Element::Signed { vector: v, flip: false },
            });
        }
        gens.push(Generator {
            name: "t".into(),
            element: Element::Signed { vector: vec![0; rank], flip: true },
        });
        Self {
            family: Family::AbelianInversion { rank },
            gens,
        }
    }

    fn combined_names(left: &Group, right: &Group) -> Vec<String> {
        // right-factor names are re-lettered when they collide with the left factor
        let left_names: Vec<&str> = left.gens.iter().map(|g| g.name.as_str()).collect();
        let collides = right.gens.iter().any(|g| left_names.contains(&g.name.as_str()));
        if !collides {
            return right.gens.iter().map(|g| g.name.clone()).collect();
        }
        let mut rename: HashMap<String, String> = HashMap::new();
        let mut next = 0usize;
        let mut used: Vec<String> = left
            .gens
            .iter()
            .map(|g| g.name.trim_end_matches("^-1").to_string())
            .collect();
        right
            .gens
            .iter()
            .map(|g| {
                let (base, suffix) = match g.name.strip_suffix("^-1") {
                    Some(b) => (b.to_string(), "^-1"),
                    None => (g.name.clone(), ""),
                };
                let fresh = rename
                    .entry(base.clone())
                    .or_insert_with(|| loop {
                        let cand = letter(next);
                        next += 1;
                        if !used.contains(&cand) {
                            used.push(cand.clone());
                            break cand;
                        }
                    })
                    .clone();
                format!("{fresh}{suffix}")
            })
            .collect()
    }

    pub fn direct_product(left: Group, right: Group) -> Self {
        let right_names = Self::combined_names(&left, &right);
        let lid = left.identity();
        let rid = right.identity();
        let mut gens: Vec<Generator> = left
            .gens
            .iter()
            .map(|g| Generator {
                name: g.name.clone(),
                element: Element::Pair(Box::new(g.element.clone()), Box::new(rid.clone())),
            })
            .collect();
        gens.extend(right.gens.iter().zip(right_names).map(|(g, name)| Generator {
            name,
            element: Element::Pair(Box::new(lid.clone()), Box::new(g.element.clone())),
        }));
        Self {
            family: Family::DirectProduct(Box::new(left), Box::new(right)),
            gens,
        }
    }

    pub fn free_product(left: Group, right: Group) -> Self {
        let right_names = Self::combined_names(&left, &right);
        let mut gens: Vec<Generator> = left
            .gens
            .iter()
            .map(|g| Generator {
                name: g.name.clone(),
                element: Element::Alternating(vec![(0, g.element.clone())]),
            })
            .collect();
        gens.extend(right.gens.iter().zip(right_names).map(|(g, name)| Generator {
            name,
            element: Element::Alternating(vec![(1, g.element.clone())]),
        }));
        Self {
            family: Family::FreeProduct(Box::new(left), Box::new(right)),
            gens,
        }
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn family_tag(&self) -> String {
        match &self.family {
            Family::Free { rank } => format!("free({rank})"),
            Family::FreeAbelian { rank } => format!("free_abelian({rank})"),
            Family::Finite(t) => format!("finite({})", t.order()),
            Family::BaumslagSolitar { m } => format!("bs(1,{m})"),
            Family::F2SemidirectZ2 => "f2_semidirect_z2".into(),
            Family::AbelianInversion { rank } => format!("abelian_inversion({rank})"),
            Family::DirectProduct(l, r) => format!("direct_product({},{})", l.family_tag(), r.family_tag()),
            Family::FreeProduct(l, r) => format!("free_product({},{})", l.family_tag(), r.family_tag()),
        }
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn generator_elements(&self) -> Vec<Element> {
        self.gens.iter().map(|g| g.element.clone()).collect()
    }

    pub fn generator(&self, index: usize) -> Result<&Element> {
        self.gens
            .get(index)
            .map(|g| &g.element)
            .ok_or(Error::InvalidGenerator {
                index,
                count: self.gens.len(),
            })
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    pub fn identity(&self) -> Element {
        match &self.family {
            Family::Free { .. } => Element::Free(vec![]),
            Family::FreeAbelian { rank } => Element::Abelian(vec![0; *rank]),
            Family::Finite(t) => Element::Finite(t.identity),
            Family::BaumslagSolitar { .. } => Element::Affine {
                level: 0,
                num: 0,
                den_exp: 0,
            },
            Family::F2SemidirectZ2 => Element::Twisted {
                word: vec![],
                flip: false,
            },
            Family::AbelianInversion { rank } => Element::Signed {
                vector: vec![0; *rank],
                flip: false,
            },
            Family::DirectProduct(l, r) => {
                Element::Pair(Box::new(l.identity()), Box::new(r.identity()))
            }
            Family::FreeProduct(..) => Element::Alternating(vec![]),
        }
    }

    pub fn is_identity(&self, g: &Element) -> bool {
        *g == self.identity()
    }

    /// Whether `g` is a normal form of this group's family.
    pub fn contains(&self, g: &Element) -> bool {
        match (&self.family, g) {
            (Family::Free { rank }, Element::Free(w)) => {
                w.iter().all(|l| l.unsigned_abs() as usize <= *rank && *l != 0)
                    && w.windows(2).all(|p| p[0] != -p[1])
            }
            (Family::FreeAbelian { rank }, Element::Abelian(v)) => v.len() == *rank,
            (Family::Finite(t), Element::Finite(i)) => (*i as usize) < t.order(),
            (Family::BaumslagSolitar { m }, Element::Affine { num, den_exp, .. }) => {
                *den_exp == 0 || num % (*m as i128) != 0
            }
            (Family::F2SemidirectZ2, Element::Twisted { word, .. }) => {
                word.iter().all(|l| l.abs() <= 2 && *l != 0)
                    && word.windows(2).all(|p| p[0] != -p[1])
            }
            (Family::AbelianInversion { rank }, Element::Signed { vector, .. }) => {
                vector.len() == *rank
            }
            (Family::DirectProduct(l, r), Element::Pair(a, b)) => l.contains(a) && r.contains(b),
            (Family::FreeProduct(l, r), Element::Alternating(s)) => {
                s.iter().all(|(side, e)| {
                    let f = if *side == 0 { l } else { r };
                    *side <= 1 && f.contains(e) && !f.is_identity(e)
                }) && s.windows(2).all(|p| p[0].0 != p[1].0)
            }
            _ => false,
        }
    }

    pub fn multiply(&self, x: &Element, y: &Element) -> Element {
        match (&self.family, x, y) {
            (Family::Free { .. }, Element::Free(a), Element::Free(b)) => {
                let mut w = a.clone();
                for &l in b {
                    free_reduce_push(&mut w, l);
                }
                Element::Free(w)
            }
            (Family::FreeAbelian { .. }, Element::Abelian(a), Element::Abelian(b)) => {
                Element::Abelian(a.iter().zip(b).map(|(p, q)| p + q).collect())
            }
            (Family::Finite(t), Element::Finite(a), Element::Finite(b)) => {
                Element::Finite(t.table[*a as usize][*b as usize])
            }
            (
                Family::BaumslagSolitar { m },
                Element::Affine { level: l1, num: n1, den_exp: e1 },
                Element::Affine { level: l2, num: n2, den_exp: e2 },
            ) => {
                // (g h)(z) = g(h(z)) = m^(l1+l2) z + x1 + m^l1 x2
                let (sn, se) = if *l1 >= 0 {
                    (n2 * pow_i128(*m, *l1 as u32), *e2)
                } else {
                    (*n2, e2 + (-*l1) as u32)
                };
                let e = (*e1).max(se);
                let num = n1 * pow_i128(*m, e - e1) + sn * pow_i128(*m, e - se);
                normalize_affine(*m, l1 + l2, num, e)
            }
            (
                Family::F2SemidirectZ2,
                Element::Twisted { word: w1, flip: f1 },
                Element::Twisted { word: w2, flip: f2 },
            ) => {
                let mut w = w1.clone();
                for &l in w2 {
                    free_reduce_push(&mut w, if *f1 { swap_ab(l) } else { l });
                }
                Element::Twisted {
                    word: w,
                    flip: f1 ^ f2,
                }
            }
            (
                Family::AbelianInversion { .. },
                Element::Signed { vector: v1, flip: f1 },
                Element::Signed { vector: v2, flip: f2 },
            ) => {
                let s = if *f1 { -1 } else { 1 };
                Element::Signed {
                    vector: v1.iter().zip(v2).map(|(p, q)| p + s * q).collect(),
                    flip: f1 ^ f2,
                }
            }
            (Family::DirectProduct(l, r), Element::Pair(a1, b1), Element::Pair(a2, b2)) => {
                Element::Pair(Box::new(l.multiply(a1, a2)), Box::new(r.multiply(b1, b2)))
            }
            (Family::FreeProduct(l, r), Element::Alternating(s1), Element::Alternating(s2)) => {
                let mut out = s1.clone();
                for (side, e) in s2 {
                    let factor = if *side == 0 { l } else { r };
                    match out.last_mut() {
                        Some((top_side, top)) if top_side == side => {
                            let p = factor.multiply(top, e);
                            if factor.is_identity(&p) {
                                out.pop();
                            } else {
                                *top = p;
                            }
                        }
                        _ => out.push((*side, e.clone())),
                    }
                }
                Element::Alternating(out)
            }
            _ => panic!(
                "element family mismatch in {}: {x} * {y}",
                self.family_tag()
            ),
        }
    }

    pub fn inverse(&self, x: &Element) -> Element {
        match (&self.family, x) {
            (Family::Free { .. }, Element::Free(w)) => {
                Element::Free(w.iter().rev().map(|l| -l).collect())
            }
            (Family::FreeAbelian { .. }, Element::Abelian(v)) => {
                Element::Abelian(v.iter().map(|p| -p).collect())
            }
            (Family::Finite(t), Element::Finite(a)) => Element::Finite(t.inverse[*a as usize]),
            (Family::BaumslagSolitar { m }, Element::Affine { level, num, den_exp }) => {
                // inverse of z -> m^l z + x is z -> m^-l z - m^-l x
                let (n, e) = if *level <= 0 {
                    (-num * pow_i128(*m, (-*level) as u32), *den_exp)
                } else {
                    (-num, den_exp + *level as u32)
                };
                normalize_affine(*m, -level, n, e)
            }
            (Family::F2SemidirectZ2, Element::Twisted { word, flip }) => Element::Twisted {
                word: word
                    .iter()
                    .rev()
                    .map(|l| if *flip { -swap_ab(*l) } else { -l })
                    .collect(),
                flip: *flip,
            },
            (Family::AbelianInversion { .. }, Element::Signed { vector, flip }) => {
                let s = if *flip { 1 } else { -1 };
                Element::Signed {
                    vector: vector.iter().map(|p| s * p).collect(),
                    flip: *flip,
                }
            }
            (Family::DirectProduct(l, r), Element::Pair(a, b)) => {
                Element::Pair(Box::new(l.inverse(a)), Box::new(r.inverse(b)))
            }
            (Family::FreeProduct(l, r), Element::Alternating(s)) => Element::Alternating(
                s.iter()
                    .rev()
                    .map(|(side, e)| {
                        let f = if *side == 0 { l } else { r };
                        (*side, f.inverse(e))
                    })
                    .collect(),
            ),
            _ => panic!("element family mismatch in {}: {x}", self.family_tag()),
        }
    }

    /// `x^-1 y`.
    pub fn divide(&self, x: &Element, y: &Element) -> Element {
        self.multiply(&self.inverse(x), y)
    }

    pub fn pow(&self, x: &Element, n: i64) -> Element {
        let base = if n < 0 { self.inverse(x) } else { x.clone() };
        let mut acc = self.identity();
        for _ in 0..n.unsigned_abs() {
            acc = self.multiply(&acc, &base);
        }
        acc
    }

    /// Product of the generators named by `word`, left to right.
    pub fn evaluate_word(&self, word: &[usize]) -> Result<Element> {
        let mut acc = self.identity();
        for &i in word {
            let g = self.generator(i)?;
            acc = self.multiply(&acc, g);
        }
        Ok(acc)
    }

    /// Parses a whitespace-separated word such as `b^-1 a b` or `a^3 t`.
    pub fn parse_word(&self, text: &str) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for token in text.split_whitespace() {
            if token == "1" {
                continue;
            }
            if let Some(i) = self.generator_index(token) {
                out.push(i);
                continue;
            }
            let (base, exp) = match token.rsplit_once('^') {
                Some((b, e)) => (
                    b,
                    e.parse::<i64>()
                        .map_err(|_| Error::UnknownGenerator(token.to_string()))?,
                ),
                None => return Err(Error::UnknownGenerator(token.to_string())),
            };
            let gi = self
                .generator_index(base)
                .ok_or_else(|| Error::UnknownGenerator(base.to_string()))?;
            let idx = if exp < 0 {
                let inv = self.inverse(&self.gens[gi].element);
                self.gens
                    .iter()
                    .position(|g| g.element == inv)
                    .ok_or_else(|| Error::UnknownGenerator(format!("{base}^-1")))?
            } else {
                gi
            };
            out.extend(std::iter::repeat_n(idx, exp.unsigned_abs() as usize));
        }
        Ok(out)
    }

    /// Parses and evaluates a word.
    pub fn element(&self, text: &str) -> Result<Element> {
        let w = self.parse_word(text)?;
        self.evaluate_word(&w)
    }

    /// Some word in the standard generators that evaluates to `g`.
    pub fn word_for(&self, g: &Element) -> Vec<usize> {
        match (&self.family, g) {
            (Family::Free { .. }, Element::Free(w)) => w
                .iter()
                .map(|&l| {
                    let i = (l.unsigned_abs() - 1) as usize;
                    if l > 0 {
                        2 * i
                    } else {
                        2 * i + 1
                    }
                })
                .collect(),
            (Family::FreeAbelian { .. }, Element::Abelian(v)) => v
                .iter()
                .enumerate()
                .flat_map(|(i, &x)| {
                    let idx = if x >= 0 { 2 * i } else { 2 * i + 1 };
                    std::iter::repeat_n(idx, x.unsigned_abs() as usize)
                })
                .collect(),
            (Family::Finite(_), Element::Finite(_)) => self.finite_word(g),
            (Family::BaumslagSolitar { m }, Element::Affine { level, num, den_exp }) => {
                // canonical word b^p a^q b^-r
                let p = (*den_exp as i64).max(-level).max(0);
                let q = num * pow_i128(*m, (p - *den_exp as i64) as u32);
                let r = level + p;
                let mut w = Vec::new();
                w.extend(std::iter::repeat_n(2, p as usize));
                let a = if q >= 0 { 0 } else { 1 };
                w.extend(std::iter::repeat_n(a, q.unsigned_abs() as usize));
                w.extend(std::iter::repeat_n(3, r as usize));
                w
            }
            (Family::F2SemidirectZ2, Element::Twisted { word, flip }) => {
                let mut w: Vec<usize> = word
                    .iter()
                    .map(|&l| {
                        let i = (l.unsigned_abs() - 1) as usize;
                        if l > 0 {
                            2 * i
                        } else {
                            2 * i + 1
                        }
                    })
                    .collect();
                if *flip {
                    w.push(4);
                }
                w
            }
            (Family::AbelianInversion { rank }, Element::Signed { vector, flip }) => {
                let mut w: Vec<usize> = vector
                    .iter()
                    .enumerate()
                    .flat_map(|(i, &x)| {
                        let idx = if x >= 0 { 2 * i } else { 2 * i + 1 };
                        std::iter::repeat_n(idx, x.unsigned_abs() as usize)
                    })
                    .collect();
                if *flip {
                    w.push(2 * rank);
                }
                w
            }
            (Family::DirectProduct(l, r), Element::Pair(a, b)) => {
                let off = l.gens.len();
                let mut w = l.word_for(a);
                w.extend(r.word_for(b).into_iter().map(|i| i + off));
                w
            }
            (Family::FreeProduct(l, r), Element::Alternating(s)) => {
                let off = l.gens.len();
                s.iter()
                    .flat_map(|(side, e)| {
                        if *side == 0 {
                            l.word_for(e)
                        } else {
                            r.word_for(e).into_iter().map(|i| i + off).collect()
                        }
                    })
                    .collect()
            }
            _ => panic!("element family mismatch in {}: {g}", self.family_tag()),
        }
    }

    fn finite_word(&self, target: &Element) -> Vec<usize> {
        let id = self.identity();
        let mut prev: HashMap<Element, (Element, usize)> = HashMap::new();
        let mut queue = VecDeque::from([id.clone()]);
        let mut seen = std::collections::HashSet::from([id.clone()]);
        while let Some(u) = queue.pop_front() {
            if u == *target {
                let mut word = Vec::new();
                let mut cur = u;
                while let Some((p, gi)) = prev.get(&cur) {
                    word.push(*gi);
                    cur = p.clone();
                }
                word.reverse();
                return word;
            }
            for (gi, g) in self.gens.iter().enumerate() {
                let v = self.multiply(&u, &g.element);
                if seen.insert(v.clone()) {
                    prev.insert(v.clone(), (u.clone(), gi));
                    queue.push_back(v);
                }
            }
        }
        panic!("finite element {target} not generated by the generating set")
    }

    /// Embeds an element of the left (`side = 0`) or right factor of a product.
    pub fn embed_factor(&self, side: u8, e: &Element) -> Result<Element> {
        match &self.family {
            Family::DirectProduct(l, r) => Ok(if side == 0 {
                Element::Pair(Box::new(e.clone()), Box::new(r.identity()))
            } else {
                Element::Pair(Box::new(l.identity()), Box::new(e.clone()))
            }),
            Family::FreeProduct(l, r) => {
                let f = if side == 0 { l } else { r };
                Ok(if f.is_identity(e) {
                    Element::Alternating(vec![])
                } else {
                    Element::Alternating(vec![(side, e.clone())])
                })
            }
            _ => Err(Error::invalid("embed_factor on a non-product group")),
        }
    }

    /// Index of a standard generator equal to `e`, if any.
    pub fn find_generator(&self, e: &Element) -> Option<usize> {
        self.gens.iter().position(|g| g.element == *e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_cancellation() {
        let g = Group::free(2);
        let e = g.element("a a^-1").unwrap();
        assert!(g.is_identity(&e));
        assert!(g.is_identity(&g.evaluate_word(&[]).unwrap()));
    }

    #[test]
    fn bs12_conjugation_relation() {
        let g = Group::baumslag_solitar(2).unwrap();
        let lhs = g.element("b^-1 a b").unwrap();
        assert_eq!(lhs, g.element("a^2").unwrap());
        // a^(2^k) = b^-k a b^k
        for k in 1..6 {
            let w = format!("b^-{k} a b^{k}");
            assert_eq!(g.element(&w).unwrap(), g.element(&format!("a^{}", 1 << k)).unwrap());
        }
    }

    #[test]
    fn vfree_conjugation_relation() {
        let g = Group::f2_semidirect_z2();
        assert_eq!(g.element("t^-1 a t").unwrap(), g.element("b").unwrap());
        assert!(g.is_identity(&g.element("t t").unwrap()));
    }

    #[test]
    fn invalid_generator_index() {
        let g = Group::free(2);
        assert!(matches!(
            g.evaluate_word(&[7]),
            Err(Error::InvalidGenerator { index: 7, count: 4 })
        ));
        assert!(g.element("c").is_err());
    }

    #[test]
    fn word_for_round_trips() {
        let groups = vec![
            Group::free(2),
            Group::free_abelian(2),
            Group::baumslag_solitar(2).unwrap(),
            Group::baumslag_solitar(3).unwrap(),
            Group::f2_semidirect_z2(),
            Group::abelian_inversion(2),
            Group::cyclic(5),
            Group::direct_product(Group::free(1), Group::cyclic(3)),
            Group::free_product(Group::cyclic(2), Group::cyclic(3)),
        ];
        for g in groups {
            let ball = Ball::enumerate(&g, &g.generator_elements(), 4, 100_000).unwrap();
            for e in ball.elements() {
                let w = g.word_for(e);
                assert_eq!(&g.evaluate_word(&w).unwrap(), e, "{}", g.family_tag());
                assert!(g.contains(e));
            }
        }
    }

    #[test]
    fn product_generators_renamed() {
        let g = Group::direct_product(Group::free(1), Group::free(1));
        let names: Vec<_> = g.generators().iter().map(|x| x.name.as_str()).collect();
        assert_eq!(names, ["a", "a^-1", "b", "b^-1"]);
    }

    #[test]
    fn finite_table_rejects_nonassociative() {
        // a loop that is not a group
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(FiniteTable::new(t).is_err());
    }
}
