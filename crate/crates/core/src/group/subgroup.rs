use std::collections::BTreeSet;

use crate::error::{Error, Result};

use super::{Element, Family, FiniteTable, Group};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn index(self) -> u8 {
        match self {
            Side::Left => 0,
            Side::Right => 1,
        }
    }
}

/// How membership and coset representatives are decided for a subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    /// `H = G`.
    Whole,
    /// Free factor spanned by a subset of the basis letters of a free group.
    FreeLetters(Vec<i32>),
    /// `<a>` in `BS(1,m)`: the integer translations.
    BaseTranslations,
    /// `F(a,b)` in `F(a,b) x| Z/2`: the elements with no `t`.
    Unflipped,
    /// A sublattice of the translation part of a free abelian group or of
    /// `Z^n x| Z/2`.
    Lattice(Lattice),
    /// One factor of a direct product.
    Factor(Side),
    /// One factor of a free product.
    FreeFactor(Side),
    /// Arbitrary subgroup of a finite group, as a sorted element list.
    FiniteSet(Vec<u32>),
}

/// Integer row lattice in Hermite normal form with the unimodular transform
/// relating it to the original basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    basis: Vec<Vec<i64>>,
    hnf: Vec<Vec<i64>>,
    pivots: Vec<usize>,
    transform: Vec<Vec<i64>>,
}

impl Lattice {
    pub fn new(basis: Vec<Vec<i64>>) -> Result<Self> {
        let r = basis.len();
        let n = basis.first().map_or(0, |v| v.len());
        if basis.iter().any(|v| v.len() != n) {
            return Err(Error::invalid("lattice basis vectors have different lengths"));
        }
        let mut h = basis.clone();
        let mut u: Vec<Vec<i64>> = (0..r)
            .map(|i| (0..r).map(|j| i64::from(i == j)).collect())
            .collect();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..n {
            if row == r {
                break;
            }
            loop {
                // Euclid on column `col` over rows row..r
                let nz: Vec<usize> = (row..r).filter(|&i| h[i][col] != 0).collect();
                if nz.is_empty() {
                    break;
                }
                let m = *nz.iter().min_by_key(|&&i| h[i][col].abs()).unwrap();
                h.swap(row, m);
                u.swap(row, m);
                let mut done = true;
                for i in row + 1..r {
                    let q = h[i][col].div_euclid(h[row][col]);
                    if q != 0 {
                        for j in 0..n {
                            h[i][j] -= q * h[row][j];
                        }
                        for j in 0..r {
                            u[i][j] -= q * u[row][j];
                        }
                    }
                    if h[i][col] != 0 {
                        done = false;
                    }
                }
                if done {
                    break;
                }
            }
            if h[row][col] == 0 {
                continue;
            }
            if h[row][col] < 0 {
                h[row].iter_mut().for_each(|x| *x = -*x);
                u[row].iter_mut().for_each(|x| *x = -*x);
            }
            for i in 0..row {
                let q = h[i][col].div_euclid(h[row][col]);
                if q != 0 {
                    for j in 0..n {
                        h[i][j] -= q * h[row][j];
                    }
                    for j in 0..r {
                        u[i][j] -= q * u[row][j];
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        if pivots.len() != r {
            return Err(Error::invalid("lattice basis vectors are linearly dependent"));
        }
        Ok(Self {
            basis,
            hnf: h,
            pivots,
            transform: u,
        })
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    /// Canonical representative of `v + L` and the HNF coefficients removed.
    fn reduce(&self, v: &[i64]) -> (Vec<i64>, Vec<i64>) {
        let mut v = v.to_vec();
        let mut c = vec![0; self.rank()];
        for (i, &p) in self.pivots.iter().enumerate() {
            let q = v[p].div_euclid(self.hnf[i][p]);
            if q != 0 {
                for (x, y) in v.iter_mut().zip(&self.hnf[i]) {
                    *x -= q * y;
                }
                c[i] += q;
            }
        }
        (v, c)
    }

    /// Coordinates of `v` in the original basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[i64]) -> Option<Vec<i64>> {
        let (rest, c) = self.reduce(v);
        if rest.iter().any(|&x| x != 0) {
            return None;
        }
        let r = self.rank();
        Some(
            (0..r)
                .map(|j| (0..r).map(|i| c[i] * self.transform[i][j]).sum())
                .collect(),
        )
    }
}

/// `H <= G` with an oracle for `H`, the injection and its partial inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupEmbedding {
    name: String,
    ambient: Group,
    sub: Group,
    images: Vec<Element>,
    kind: Membership,
}

fn affine_parts(g: &Element) -> (i64, i128, u32) {
    match g {
        Element::Affine { level, num, den_exp } => (*level, *num, *den_exp),
        _ => panic!("expected a BS(1,m) element, got {g}"),
    }
}

fn strip_trailing(word: &[i32], letters: &[i32]) -> Vec<i32> {
    let mut end = word.len();
    while end > 0 && letters.contains(&word[end - 1].abs()) {
        end -= 1;
    }
    word[..end].to_vec()
}

fn generator_images_free(images: &[Element], group: &Group) -> Vec<Element> {
    images
        .iter()
        .flat_map(|x| [x.clone(), group.inverse(x)])
        .collect()
}

impl SubgroupEmbedding {
    pub fn whole(g: &Group) -> Self {
        Self {
            name: "G".into(),
            ambient: g.clone(),
            sub: g.clone(),
            images: g.generator_elements(),
            kind: Membership::Whole,
        }
    }

    /// Free factor of a free group spanned by the given basis letters
    /// (0-based indices).
    pub fn free_letters(g: &Group, letters: &[usize]) -> Result<Self> {
        let rank = match g.family() {
            Family::Free { rank } => *rank,
            _ => return Err(Error::invalid("free_letters needs a free group")),
        };
        let mut seen = BTreeSet::new();
        for &l in letters {
            if l >= rank || !seen.insert(l) {
                return Err(Error::invalid(format!("bad basis letter {l}")));
            }
        }
        let ls: Vec<i32> = letters.iter().map(|&l| l as i32 + 1).collect();
        let gens: Vec<Element> = ls.iter().map(|&l| Element::Free(vec![l])).collect();
        Ok(Self {
            name: "H".into(),
            ambient: g.clone(),
            sub: Group::free(ls.len()),
            images: generator_images_free(&gens, g),
            kind: Membership::FreeLetters(ls),
        })
    }

    /// Sublattice spanned by `basis` in the translation part of a free
    /// abelian group or of `Z^n x| Z/2`.
    pub fn lattice(g: &Group, basis: Vec<Vec<i64>>) -> Result<Self> {
        let wrap: Box<dyn Fn(Vec<i64>) -> Element> = match g.family() {
            Family::FreeAbelian { rank } => {
                let rank = *rank;
                if basis.iter().any(|v| v.len() != rank) {
                    return Err(Error::invalid("lattice vector has wrong length"));
                }
                Box::new(Element::Abelian)
            }
            Family::AbelianInversion { rank } => {
                let rank = *rank;
                if basis.iter().any(|v| v.len() != rank) {
                    return Err(Error::invalid("lattice vector has wrong length"));
                }
                Box::new(|v| Element::Signed {
                    vector: v,
                    flip: false,
                })
            }
            _ => return Err(Error::invalid("lattice subgroup needs an abelian translation part")),
        };
        let lat = Lattice::new(basis.clone())?;
        let gens: Vec<Element> = basis.into_iter().map(wrap).collect();
        Ok(Self {
            name: "H".into(),
            ambient: g.clone(),
            sub: Group::free_abelian(lat.rank()),
            images: generator_images_free(&gens, g),
            kind: Membership::Lattice(lat),
        })
    }

    /// `<a>` in `BS(1,m)`.
    pub fn base_translations(g: &Group) -> Result<Self> {
        if !matches!(g.family(), Family::BaumslagSolitar { .. }) {
            return Err(Error::invalid("base translations need BS(1,m)"));
        }
        let a = g.generator(0)?.clone();
        Ok(Self {
            name: "H".into(),
            ambient: g.clone(),
            sub: Group::free_abelian(1),
            images: generator_images_free(&[a], g),
            kind: Membership::BaseTranslations,
        })
    }

    /// `F(a,b)` in `F(a,b) x| Z/2`.
    pub fn unflipped(g: &Group) -> Result<Self> {
        if !matches!(g.family(), Family::F2SemidirectZ2) {
            return Err(Error::invalid("unflipped subgroup needs F(a,b) x| Z/2"));
        }
        Ok(Self {
            name: "H".into(),
            ambient: g.clone(),
            sub: Group::free(2),
            images: g.generator_elements()[..4].to_vec(),
            kind: Membership::Unflipped,
        })
    }

    pub fn factor(g: &Group, side: Side) -> Result<Self> {
        let (f, kind) = match (g.family(), side) {
            (Family::DirectProduct(l, _), Side::Left) => (l, Membership::Factor(side)),
            (Family::DirectProduct(_, r), Side::Right) => (r, Membership::Factor(side)),
            (Family::FreeProduct(l, _), Side::Left) => (l, Membership::FreeFactor(side)),
            (Family::FreeProduct(_, r), Side::Right) => (r, Membership::FreeFactor(side)),
            _ => return Err(Error::invalid("factor subgroup needs a product")),
        };
        let images = f
            .generator_elements()
            .iter()
            .map(|x| g.embed_factor(side.index(), x))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            name: "H".into(),
            ambient: g.clone(),
            sub: (**f).clone(),
            images,
            kind,
        })
    }

    /// Subgroup of a finite group generated by `gens`.
    pub fn finite_generated(g: &Group, gens: &[Element]) -> Result<Self> {
        let table = match g.family() {
            Family::Finite(t) => t,
            _ => return Err(Error::invalid("finite subgroup needs a finite group")),
        };
        let mut set = BTreeSet::from([table.identity]);
        let mut frontier = vec![table.identity];
        let gi: Vec<u32> = gens
            .iter()
            .map(|x| match x {
                Element::Finite(i) => Ok(*i),
                _ => Err(Error::invalid("not a finite-group element")),
            })
            .collect::<Result<_>>()?;
        while let Some(u) = frontier.pop() {
            for &x in &gi {
                let v = table.table[u as usize][x as usize];
                if set.insert(v) {
                    frontier.push(v);
                }
            }
        }
        let elems: Vec<u32> = set.into_iter().collect();
        let pos = |x: u32| elems.binary_search(&x).unwrap() as u32;
        let sub_table = FiniteTable::new(
            elems
                .iter()
                .map(|&x| {
                    elems
                        .iter()
                        .map(|&y| pos(table.table[x as usize][y as usize]))
                        .collect()
                })
                .collect(),
        )?;
        let sub_gens: Vec<u32> = gi.iter().map(|&x| pos(x)).collect();
        let sub = Group::finite(sub_table, Some(sub_gens))?;
        let images = sub
            .generator_elements()
            .iter()
            .map(|e| match e {
                Element::Finite(i) => Element::Finite(elems[*i as usize]),
                _ => unreachable!(),
            })
            .collect();
        Ok(Self {
            name: "H".into(),
            ambient: g.clone(),
            sub,
            images,
            kind: Membership::FiniteSet(elems),
        })
    }

    /// Infers a supported subgroup shape from generator images in `G`.
    pub fn from_generators(g: &Group, gens: &[Element]) -> Result<Self> {
        for x in gens {
            if !g.contains(x) {
                return Err(Error::invalid(format!("{x} is not an element of {}", g.family_tag())));
            }
        }
        let closure: BTreeSet<Element> = gens.iter().flat_map(|x| [x.clone(), g.inverse(x)]).collect();
        let all: BTreeSet<Element> = g.generator_elements().into_iter().collect();
        if closure == all {
            return Ok(Self::whole(g));
        }
        let unsupported = || {
            Error::Unsupported(format!(
                "subgroup generated by [{}] in {}",
                gens.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "),
                g.family_tag()
            ))
        };
        match g.family() {
            Family::Free { .. } => {
                let mut letters = Vec::new();
                for x in gens {
                    match x {
                        Element::Free(w) if w.len() == 1 => {
                            let l = (w[0].unsigned_abs() - 1) as usize;
                            if !letters.contains(&l) {
                                letters.push(l);
                            }
                        }
                        _ => return Err(unsupported()),
                    }
                }
                Self::free_letters(g, &letters)
            }
            Family::BaumslagSolitar { .. } => {
                let a = g.generator(0)?.clone();
                if closure == BTreeSet::from([a.clone(), g.inverse(&a)]) {
                    Self::base_translations(g)
                } else {
                    Err(unsupported())
                }
            }
            Family::F2SemidirectZ2 => {
                let base: BTreeSet<Element> = g.generator_elements()[..4].iter().cloned().collect();
                if closure == base {
                    Self::unflipped(g)
                } else {
                    Err(unsupported())
                }
            }
            Family::FreeAbelian { .. } | Family::AbelianInversion { .. } => {
                let mut basis = Vec::new();
                for x in gens {
                    match x {
                        Element::Abelian(v) | Element::Signed { vector: v, flip: false } => {
                            basis.push(v.clone())
                        }
                        _ => return Err(unsupported()),
                    }
                }
                Self::lattice(g, basis)
            }
            Family::DirectProduct(..) | Family::FreeProduct(..) => {
                for side in [Side::Left, Side::Right] {
                    if let Ok(h) = Self::factor(g, side) {
                        let hs: BTreeSet<Element> = h.images.iter().cloned().collect();
                        if hs == closure {
                            return Ok(h);
                        }
                    }
                }
                Err(unsupported())
            }
            Family::Finite(_) => Self::finite_generated(g, gens),
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ambient(&self) -> &Group {
        &self.ambient
    }

    /// Oracle for `H` itself.
    pub fn subgroup(&self) -> &Group {
        &self.sub
    }

    pub fn kind(&self) -> &Membership {
        &self.kind
    }

    /// Images in `G` of the generators of `H`, aligned with
    /// `subgroup().generators()`.
    pub fn generator_images(&self) -> &[Element] {
        &self.images
    }

    pub fn inject(&self, h: &Element) -> Element {
        let g = &self.ambient;
        match (&self.kind, h) {
            (Membership::Whole, _) => h.clone(),
            (Membership::FreeLetters(ls), Element::Free(w)) => Element::Free(
                w.iter()
                    .map(|&l| ls[(l.unsigned_abs() - 1) as usize] * l.signum())
                    .collect(),
            ),
            (Membership::Factor(side), _) | (Membership::FreeFactor(side), _) => {
                g.embed_factor(side.index(), h).expect("product ambient")
            }
            (Membership::FiniteSet(elems), Element::Finite(i)) => Element::Finite(elems[*i as usize]),
            (Membership::Lattice(lat), Element::Abelian(c)) => {
                let n = lat.basis.first().map_or(0, |v| v.len());
                let mut v = vec![0; n];
                for (ci, b) in c.iter().zip(&lat.basis) {
                    for (x, y) in v.iter_mut().zip(b) {
                        *x += ci * y;
                    }
                }
                match g.family() {
                    Family::FreeAbelian { .. } => Element::Abelian(v),
                    _ => Element::Signed {
                        vector: v,
                        flip: false,
                    },
                }
            }
            (Membership::BaseTranslations, Element::Abelian(c)) => {
                Element::Affine { level: 0, num: c[0] as i128, den_exp: 0 }
            }
            (Membership::Unflipped, Element::Free(w)) => Element::Twisted {
                word: w.clone(),
                flip: false,
            },
            _ => {
                let word = self.sub.word_for(h);
                word.iter().fold(g.identity(), |acc, &i| g.multiply(&acc, &self.images[i]))
            }
        }
    }

    pub fn member(&self, g: &Element) -> bool {
        self.pull_back(g).is_some()
    }

    /// The `H`-element mapping to `g`, if `g` lies in the image.
    pub fn pull_back(&self, g: &Element) -> Option<Element> {
        match (&self.kind, g) {
            (Membership::Whole, _) => Some(g.clone()),
            (Membership::FreeLetters(ls), Element::Free(w)) => w
                .iter()
                .map(|&l| {
                    ls.iter()
                        .position(|&x| x == l.abs())
                        .map(|p| (p as i32 + 1) * l.signum())
                })
                .collect::<Option<Vec<_>>>()
                .map(Element::Free),
            (Membership::BaseTranslations, _) => {
                let (level, num, den_exp) = affine_parts(g);
                (level == 0 && den_exp == 0).then(|| Element::Abelian(vec![num as i64]))
            }
            (Membership::Unflipped, Element::Twisted { word, flip }) => {
                (!flip).then(|| Element::Free(word.clone()))
            }
            (Membership::Lattice(lat), Element::Abelian(v))
            | (Membership::Lattice(lat), Element::Signed { vector: v, flip: false }) => {
                lat.coordinates(v).map(Element::Abelian)
            }
            (Membership::Lattice(_), Element::Signed { flip: true, .. }) => None,
            (Membership::Factor(side), Element::Pair(l, r)) => {
                let (this, other, of) = match (side, self.ambient.family()) {
                    (Side::Left, Family::DirectProduct(_, rf)) => (l, r, rf),
                    (Side::Right, Family::DirectProduct(lf, _)) => (r, l, lf),
                    _ => unreachable!(),
                };
                of.is_identity(other).then(|| (**this).clone())
            }
            (Membership::FreeFactor(side), Element::Alternating(s)) => match s.as_slice() {
                [] => Some(self.sub.identity()),
                [(sd, e)] if *sd == side.index() => Some(e.clone()),
                _ => None,
            },
            (Membership::FiniteSet(elems), Element::Finite(i)) => {
                elems.binary_search(i).ok().map(|p| Element::Finite(p as u32))
            }
            _ => None,
        }
    }

    /// A canonical element of the left coset `gH`; equal to `1` on `H`.
    pub fn left_coset_key(&self, g: &Element) -> Element {
        let amb = &self.ambient;
        match (&self.kind, g) {
            (Membership::Whole, _) => amb.identity(),
            (Membership::FreeLetters(ls), Element::Free(w)) => Element::Free(strip_trailing(w, ls)),
            (Membership::BaseTranslations, _) => {
                let m = match amb.family() {
                    Family::BaumslagSolitar { m } => *m as i128,
                    _ => unreachable!(),
                };
                let (level, num, den_exp) = affine_parts(g);
                // g a^n = (level, x + m^level n): reduce x modulo m^level Z
                let d = (den_exp as i64).max(-level).max(0);
                let x = num * m.pow((d - den_exp as i64) as u32);
                let step = m.pow((level + d) as u32);
                let r = x.rem_euclid(step);
                let mut num = r;
                let mut e = d as u32;
                while e > 0 && num % m == 0 {
                    num /= m;
                    e -= 1;
                }
                if num == 0 {
                    e = 0;
                }
                Element::Affine { level, num, den_exp: e }
            }
            (Membership::Unflipped, Element::Twisted { flip, .. }) => Element::Twisted {
                word: vec![],
                flip: *flip,
            },
            (Membership::Lattice(lat), Element::Abelian(v)) => Element::Abelian(lat.reduce(v).0),
            (Membership::Lattice(lat), Element::Signed { vector, flip }) => Element::Signed {
                vector: lat.reduce(vector).0,
                flip: *flip,
            },
            (Membership::Factor(side), Element::Pair(l, r)) => match (side, amb.family()) {
                (Side::Left, Family::DirectProduct(lf, _)) => {
                    Element::Pair(Box::new(lf.identity()), r.clone())
                }
                (Side::Right, Family::DirectProduct(_, rf)) => {
                    Element::Pair(l.clone(), Box::new(rf.identity()))
                }
                _ => unreachable!(),
            },
            (Membership::FreeFactor(side), Element::Alternating(s)) => {
                let mut s = s.clone();
                if s.last().is_some_and(|(sd, _)| *sd == side.index()) {
                    s.pop();
                }
                Element::Alternating(s)
            }
            (Membership::FiniteSet(elems), _) => {
                if self.member(g) {
                    return amb.identity();
                }
                elems
                    .iter()
                    .map(|&h| amb.multiply(g, &Element::Finite(h)))
                    .min()
                    .expect("subgroup contains identity")
            }
            _ => panic!("element {g} does not belong to {}", amb.family_tag()),
        }
    }

    /// A canonical element of the right coset `Hg`; equal to `1` on `H`.
    pub fn right_coset_key(&self, g: &Element) -> Element {
        let amb = &self.ambient;
        amb.inverse(&self.left_coset_key(&amb.inverse(g)))
    }

    /// Whether `x` and `y` lie in the same left coset.
    pub fn same_left_coset(&self, x: &Element, y: &Element) -> bool {
        self.member(&self.ambient.divide(x, y))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Ball;

    fn samples() -> Vec<(Group, SubgroupEmbedding)> {
        let f2 = Group::free(2);
        let bs = Group::baumslag_solitar(2).unwrap();
        let vf = Group::f2_semidirect_z2();
        let z2 = Group::free_abelian(2);
        let ai = Group::abelian_inversion(2);
        let dp = Group::direct_product(Group::free(1), Group::free(1));
        let fp = Group::free_product(Group::free(1), Group::free(1));
        let s3 = Group::finite(
            FiniteTable::new(vec![
                vec![0, 1, 2, 3, 4, 5],
                vec![1, 2, 0, 4, 5, 3],
                vec![2, 0, 1, 5, 3, 4],
                vec![3, 5, 4, 0, 2, 1],
                vec![4, 3, 5, 1, 0, 2],
                vec![5, 4, 3, 2, 1, 0],
            ])
            .unwrap(),
            None,
        )
        .unwrap();
        vec![
            (f2.clone(), SubgroupEmbedding::free_letters(&f2, &[0]).unwrap()),
            (f2.clone(), SubgroupEmbedding::whole(&f2)),
            (bs.clone(), SubgroupEmbedding::base_translations(&bs).unwrap()),
            (vf.clone(), SubgroupEmbedding::unflipped(&vf).unwrap()),
            (z2.clone(), SubgroupEmbedding::lattice(&z2, vec![vec![1, 1]]).unwrap()),
            (z2.clone(), SubgroupEmbedding::lattice(&z2, vec![vec![2, 1], vec![0, 3]]).unwrap()),
            (ai.clone(), SubgroupEmbedding::lattice(&ai, vec![vec![1, 1]]).unwrap()),
            (dp.clone(), SubgroupEmbedding::factor(&dp, Side::Left).unwrap()),
            (fp.clone(), SubgroupEmbedding::factor(&fp, Side::Left).unwrap()),
            (
                s3.clone(),
                SubgroupEmbedding::finite_generated(&s3, &[Element::Finite(3)]).unwrap(),
            ),
        ]
    }

    #[test]
    fn inject_is_homomorphism_and_pull_back_inverts() {
        for (g, h) in samples() {
            let hb = Ball::enumerate(h.subgroup(), &h.subgroup().generator_elements(), 3, 10_000).unwrap();
            for x in hb.elements() {
                let gx = h.inject(x);
                assert!(h.member(&gx), "{}", g.family_tag());
                assert_eq!(h.pull_back(&gx).as_ref(), Some(x));
                for y in hb.elements().iter().take(20) {
                    let lhs = h.inject(&h.subgroup().multiply(x, y));
                    let rhs = g.multiply(&gx, &h.inject(y));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn coset_keys_are_canonical() {
        for (g, h) in samples() {
            let gb = Ball::enumerate(&g, &g.generator_elements(), 3, 10_000).unwrap();
            let hb = Ball::enumerate(h.subgroup(), &h.subgroup().generator_elements(), 2, 10_000).unwrap();
            for x in gb.elements() {
                let k = h.left_coset_key(x);
                assert!(h.same_left_coset(&k, x), "{} {x} {k}", g.family_tag());
                assert_eq!(h.left_coset_key(&k), k);
                for y in hb.elements() {
                    let xy = g.multiply(x, &h.inject(y));
                    assert_eq!(h.left_coset_key(&xy), k);
                    let yx = g.multiply(&h.inject(y), x);
                    assert_eq!(h.right_coset_key(&yx), h.right_coset_key(x));
                }
                if h.member(x) {
                    assert!(g.is_identity(&k));
                }
            }
        }
    }

    #[test]
    fn inference_from_generators() {
        let f2 = Group::free(2);
        let h = SubgroupEmbedding::from_generators(&f2, &[f2.element("a").unwrap()]).unwrap();
        assert_eq!(h.kind(), &Membership::FreeLetters(vec![1]));
        let vf = Group::f2_semidirect_z2();
        let h = SubgroupEmbedding::from_generators(&vf, &[vf.element("a").unwrap(), vf.element("b").unwrap()]).unwrap();
        assert_eq!(h.kind(), &Membership::Unflipped);
        let h = SubgroupEmbedding::from_generators(&f2, &[f2.element("a b").unwrap()]);
        assert!(matches!(h, Err(Error::Unsupported(_))));
        let h = SubgroupEmbedding::from_generators(&f2, &f2.generator_elements()).unwrap();
        assert_eq!(h.kind(), &Membership::Whole);
    }

    #[test]
    fn dependent_lattice_rejected() {
        assert!(Lattice::new(vec![vec![1, 1], vec![2, 2]]).is_err());
    }
}
