//! Subgroup metrics, weight functions and the induced metric `d_{C,X}`.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap};
use std::fmt::Write as _;

use serde::Serialize;

use crate::action::{group_norm, GraphAction, Vertex};
use crate::dist::{ExtDist, Measured};
use crate::error::{Error, Result};
use crate::group::{Ball, Element, Group, SubgroupEmbedding};

/// A left-invariant metric on a subgroup `H`, described by `d(1, h)`.
#[derive(Clone, Debug)]
pub enum SubgroupMetric {
    /// `scale · |h|_Y` for the standard generators `Y` of `H`.
    Word { scale: u64 },
    /// `d_R(b, h b)` for an action of `H` on a graph `R`.
    Action { action: GraphAction, base: Vertex },
}

impl SubgroupMetric {
    pub fn word() -> Self {
        SubgroupMetric::Word { scale: 1 }
    }

    pub fn scaled(scale: u64) -> Self {
        SubgroupMetric::Word { scale }
    }

    pub fn from_action(action: GraphAction, base: Vertex) -> Self {
        SubgroupMetric::Action { action, base }
    }

    pub fn describe(&self) -> String {
        match self {
            SubgroupMetric::Word { scale: 1 } => "word metric".into(),
            SubgroupMetric::Word { scale } => format!("{scale} x word metric"),
            SubgroupMetric::Action { action, base } => format!("orbit metric of {} at {base}", action.describe()),
        }
    }

    /// `d(1, h)` for `h` in the subgroup oracle `sub`.
    pub fn norm(&self, sub: &Group, h: &Element) -> u64 {
        match self {
            SubgroupMetric::Word { scale } => scale * group_norm(sub, h),
            SubgroupMetric::Action { action, base } => action
                .distance(base, &action.act(h, base))
                .expect("acted-upon graph is connected"),
        }
    }

    pub fn distance(&self, sub: &Group, h1: &Element, h2: &Element) -> u64 {
        self.norm(sub, &sub.divide(h1, h2))
    }

    /// True if some `h != 1` may have `d(1,h) = 0`.
    pub fn is_pseudo(&self) -> bool {
        match self {
            SubgroupMetric::Word { scale } => *scale == 0,
            SubgroupMetric::Action { action, .. } => !action.vertex_free(),
        }
    }

    /// `{ h : d(1,h) <= r }` with values, and whether the list is complete.
    pub fn enumerate(&self, sub: &Group, r: u64, word_cap: u32, budget: usize) -> Result<(Vec<(Element, u64)>, bool)> {
        let gens = sub.generator_elements();
        let (radius, complete) = match self {
            SubgroupMetric::Word { scale: 0 } => (word_cap, false),
            SubgroupMetric::Word { scale } => ((r / scale).min(u32::MAX as u64) as u32, true),
            SubgroupMetric::Action { action, .. } => match action.word_ratio() {
                Some(c) => (c.saturating_mul(r).min(u32::MAX as u64) as u32, true),
                None => (word_cap, false),
            },
        };
        let ball = Ball::enumerate(sub, &gens, radius, budget)?;
        let complete = complete || ball.is_closed();
        let out = ball
            .elements()
            .iter()
            .map(|h| (h.clone(), self.norm(sub, h)))
            .filter(|(_, d)| *d <= r)
            .collect();
        Ok((out, complete))
    }
}

/// A finite table of a metric on listed points.
#[derive(Clone, Debug, Serialize)]
pub struct MetricBall {
    pub points: Vec<String>,
    pub dist: Vec<Vec<ExtDist>>,
    pub certified: Vec<Vec<bool>>,
    pub basepoint: usize,
    pub certification_radius: u64,
    pub left_invariant: bool,
    pub warnings: Vec<String>,
}

impl MetricBall {
    /// Violations of symmetry, the triangle inequality and separation.
    pub fn axiom_violations(&self) -> Vec<String> {
        let n = self.points.len();
        let mut bad = Vec::new();
        for i in 0..n {
            if self.dist[i][i] != ExtDist::ZERO {
                bad.push(format!("d({0},{0}) != 0", self.points[i]));
            }
            for j in 0..n {
                if self.dist[i][j] != self.dist[j][i] {
                    bad.push(format!("asymmetric at {},{}", self.points[i], self.points[j]));
                }
                if i != j && self.dist[i][j] == ExtDist::ZERO {
                    bad.push(format!("d({},{}) = 0", self.points[i], self.points[j]));
                }
                for k in 0..n {
                    if self.certified[i][j] && self.certified[j][k] && self.certified[i][k]
                        && self.dist[i][k] > self.dist[i][j] + self.dist[j][k]
                    {
                        bad.push(format!(
                            "triangle {} {} {}",
                            self.points[i], self.points[j], self.points[k]
                        ));
                    }
                }
            }
        }
        bad
    }

    /// `point,point,dist,certified` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("point_a,point_b,dist,certified\n");
        for (i, row) in self.dist.iter().enumerate() {
            for (j, d) in row.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "\"{}\",\"{}\",{},{}",
                    self.points[i], self.points[j], d, self.certified[i][j]
                );
            }
        }
        out
    }
}

/// The subgroup metric `d(h1,h2) = d_R(h1 b, h2 b)` on the word ball of
/// radius `radius` in `H`.
pub fn subgroup_metric_from_action(action: &GraphAction, base: &Vertex, radius: u32, budget: usize) -> Result<MetricBall> {
    let sub = action.group();
    let ball = Ball::enumerate(sub, &sub.generator_elements(), radius, budget)?;
    let orbit: Vec<Vertex> = ball.elements().iter().map(|h| action.act(h, base)).collect();
    let n = ball.len();
    let mut dist = vec![vec![ExtDist::ZERO; n]; n];
    let mut warnings = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let d = action.distance(&orbit[i], &orbit[j]).map_or(ExtDist::Infinite, ExtDist::new);
            dist[i][j] = d;
            if i < j && d == ExtDist::ZERO && warnings.is_empty() {
                warnings.push(format!(
                    "pseudo-metric: {} and {} have the same orbit point",
                    ball.element(i),
                    ball.element(j)
                ));
            }
        }
    }
    Ok(MetricBall {
        points: ball.elements().iter().map(|e| e.to_string()).collect(),
        dist,
        certified: vec![vec![true; n]; n],
        basepoint: 0,
        certification_radius: radius as u64,
        left_invariant: true,
        warnings,
    })
}

/// Word metric `|g|_X` as an extended distance.
pub fn word_metric(group: &Group, x: &[Element], g: &Element, budget: usize) -> Measured {
    crate::group::word_metric(group, x, g, u32::MAX, budget)
}

/// The data `(G, X, {H_λ}, C = {d_λ})` defining the weight `w_{C,X}`.
#[derive(Clone, Debug)]
pub struct InducedSetup {
    pub group: Group,
    pub x: Vec<Element>,
    pub subgroups: Vec<SubgroupEmbedding>,
    pub metrics: Vec<SubgroupMetric>,
    /// Word-length cap used when a subgroup metric ball cannot be
    /// enumerated completely.
    pub word_cap: u32,
}

/// One point of an induced metric ball.
#[derive(Clone, Debug, Serialize)]
pub struct InducedPoint {
    pub element: String,
    pub dist: u64,
    pub factors: u32,
}

impl InducedSetup {
    pub fn new(group: &Group, x: Vec<Element>, subgroups: Vec<SubgroupEmbedding>, metrics: Vec<SubgroupMetric>) -> Result<Self> {
        if subgroups.len() != metrics.len() {
            return Err(Error::invalid("one metric per subgroup is required"));
        }
        for s in &subgroups {
            if s.ambient() != group {
                return Err(Error::invalid(format!("subgroup {} lives in another group", s.name())));
            }
        }
        let mut xs = Vec::new();
        for e in x {
            if !group.contains(&e) {
                return Err(Error::invalid(format!("{e} is not an element of {}", group.family_tag())));
            }
            let inv = group.inverse(&e);
            for y in [e, inv] {
                if !xs.contains(&y) {
                    xs.push(y);
                }
            }
        }
        Ok(Self {
            group: group.clone(),
            x: xs,
            subgroups,
            metrics,
            word_cap: 8,
        })
    }

    /// `w_{C,X}(g)`: `0` at `1`, `1` on `X \ {1}`, the least subgroup-metric
    /// value over the subgroups containing `g`, and `∞` otherwise. Orbit
    /// pseudo-metrics are clamped to at least `1` off the identity.
    pub fn weight(&self, g: &Element) -> ExtDist {
        if self.group.is_identity(g) {
            return ExtDist::ZERO;
        }
        if self.x.contains(g) {
            return ExtDist::new(1);
        }
        self.subgroups
            .iter()
            .zip(&self.metrics)
            .filter_map(|(s, m)| s.pull_back(g).map(|h| m.norm(s.subgroup(), &h).max(1)))
            .min()
            .map_or(ExtDist::Infinite, ExtDist::new)
    }

    /// Every letter of weight at most `r`, with its weight, and whether the
    /// subgroup parts were enumerated completely.
    pub fn letters(&self, r: u64, budget: usize) -> Result<(Vec<(Element, u64)>, bool)> {
        let mut out: BTreeMap<Element, u64> = BTreeMap::new();
        if r >= 1 {
            for x in &self.x {
                if !self.group.is_identity(x) {
                    out.insert(x.clone(), 1);
                }
            }
        }
        let mut complete = true;
        for (s, m) in self.subgroups.iter().zip(&self.metrics) {
            let (list, c) = m.enumerate(s.subgroup(), r, self.word_cap, budget)?;
            complete &= c;
            for (h, _) in list {
                let g = s.inject(&h);
                if self.group.is_identity(&g) {
                    continue;
                }
                if let Some(w) = self.weight(&g).finite() {
                    if w <= r {
                        out.insert(g, w);
                    }
                }
            }
        }
        Ok((out.into_iter().collect(), complete))
    }

    /// Uniform-cost search for `d_{C,X}(1, g) <= radius`.
    pub fn induced_ball(&self, radius: u64, budget: usize) -> Result<InducedBall> {
        let (letters, complete) = self.letters(radius, budget)?;
        let id = self.group.identity();
        let mut best: HashMap<Element, (u64, u32)> = HashMap::from([(id.clone(), (0, 0))]);
        let mut heap = BinaryHeap::from([Reverse((0u64, 0u32, id.clone()))]);
        let mut elements = Vec::new();
        let mut dist = Vec::new();
        let mut factors = Vec::new();
        let mut parent: Vec<Option<(u32, u32)>> = Vec::new();
        let mut index: HashMap<Element, u32> = HashMap::new();
        let mut pending_parent: HashMap<Element, (Element, u32)> = HashMap::new();
        while let Some(Reverse((d, f, u))) = heap.pop() {
            if index.contains_key(&u) || best.get(&u) != Some(&(d, f)) {
                continue;
            }
            let ui = elements.len() as u32;
            index.insert(u.clone(), ui);
            let par = pending_parent.remove(&u).map(|(p, li)| (index[&p], li));
            elements.push(u.clone());
            dist.push(d);
            factors.push(f);
            parent.push(par);
            if elements.len() > budget {
                return Err(Error::budget("induced metric search", budget));
            }
            for (li, (s, w)) in letters.iter().enumerate() {
                let nd = d + w;
                if nd > radius {
                    continue;
                }
                let v = self.group.multiply(&u, s);
                if index.contains_key(&v) {
                    continue;
                }
                let key = (nd, f + 1);
                let better = match best.get(&v) {
                    None => true,
                    Some(&old) => key < old || (key == old && pending_parent.get(&v).is_some_and(|(p, _)| u < *p)),
                };
                if better {
                    best.insert(v.clone(), key);
                    pending_parent.insert(v.clone(), (u.clone(), li as u32));
                    heap.push(Reverse((nd, f + 1, v)));
                }
            }
        }
        Ok(InducedBall {
            group: self.group.clone(),
            letters: letters.into_iter().map(|(e, _)| e).collect(),
            elements,
            dist,
            factors,
            parent,
            index,
            radius,
            certified: complete,
        })
    }
}

/// The ball `{ g : d_{C,X}(1,g) <= R }` with exact values when `certified`.
#[derive(Clone, Debug)]
pub struct InducedBall {
    group: Group,
    letters: Vec<Element>,
    elements: Vec<Element>,
    dist: Vec<u64>,
    factors: Vec<u32>,
    parent: Vec<Option<(u32, u32)>>,
    index: HashMap<Element, u32>,
    radius: u64,
    certified: bool,
}

impl InducedBall {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn radius(&self) -> u64 {
        self.radius
    }

    /// False when some subgroup metric ball could not be enumerated
    /// completely; values are then upper bounds.
    pub fn is_certified(&self) -> bool {
        self.certified
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Element, u64)> {
        self.elements.iter().zip(self.dist.iter().copied())
    }

    /// `d_{C,X}(1, g)`, or `None` when it exceeds the radius.
    pub fn norm(&self, g: &Element) -> Option<Measured> {
        self.index.get(g).map(|&i| Measured {
            value: ExtDist::new(self.dist[i as usize]),
            certified: self.certified,
        })
    }

    /// `d_{C,X}(f, g) = d_{C,X}(1, f^-1 g)` by left invariance.
    pub fn distance(&self, f: &Element, g: &Element) -> Option<Measured> {
        self.norm(&self.group.divide(f, g))
    }

    /// Deterministic geodesic decomposition `g = f_1 ... f_k`.
    pub fn decomposition(&self, g: &Element) -> Option<Vec<Element>> {
        let mut i = *self.index.get(g)? as usize;
        let mut out = Vec::new();
        while let Some((p, li)) = self.parent[i] {
            out.push(self.letters[li as usize].clone());
            i = p as usize;
        }
        out.reverse();
        Some(out)
    }

    pub fn factors(&self, g: &Element) -> Option<u32> {
        self.index.get(g).map(|&i| self.factors[i as usize])
    }

    pub fn points(&self) -> Vec<InducedPoint> {
        self.elements
            .iter()
            .zip(&self.dist)
            .zip(&self.factors)
            .map(|((e, d), f)| InducedPoint {
                element: e.to_string(),
                dist: *d,
                factors: *f,
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn free_setup(metric: SubgroupMetric) -> (Group, InducedSetup) {
        let g = Group::free(2);
        let h = SubgroupEmbedding::free_letters(&g, &[0]).unwrap();
        let b = g.element("b").unwrap();
        let s = InducedSetup::new(&g, vec![b], vec![h], vec![metric]).unwrap();
        (g, s)
    }

    #[test]
    fn weight_cases() {
        let (g, s) = free_setup(SubgroupMetric::scaled(7));
        assert_eq!(s.weight(&g.identity()), ExtDist::ZERO);
        assert_eq!(s.weight(&g.element("b^-1").unwrap()), ExtDist::new(1));
        assert_eq!(s.weight(&g.element("a").unwrap()), ExtDist::new(7));
        assert_eq!(s.weight(&g.element("a b").unwrap()), ExtDist::Infinite);
    }

    #[test]
    fn weight_is_symmetric() {
        let (g, s) = free_setup(SubgroupMetric::scaled(3));
        let ball = Ball::enumerate(&g, &g.generator_elements(), 3, 10_000).unwrap();
        for e in ball.elements() {
            assert_eq!(s.weight(e), s.weight(&g.inverse(e)));
        }
    }

    #[test]
    fn scaled_metric_induced_value() {
        let (g, s) = free_setup(SubgroupMetric::scaled(3));
        let ball = s.induced_ball(6, 100_000).unwrap();
        assert!(ball.is_certified());
        assert_eq!(ball.norm(&g.element("a").unwrap()).unwrap().value, ExtDist::new(3));
        assert_eq!(ball.norm(&g.element("b a b^-1").unwrap()).unwrap().value, ExtDist::new(5));
        assert!(ball.norm(&g.element("a^3").unwrap()).is_none());
        let dec = ball.decomposition(&g.element("b a").unwrap()).unwrap();
        assert_eq!(dec.len(), 2);
    }

    #[test]
    fn no_subgroups_gives_word_metric() {
        let g = Group::free(2);
        let s = InducedSetup::new(&g, g.generator_elements(), vec![], vec![]).unwrap();
        let ball = s.induced_ball(3, 100_000).unwrap();
        let wb = Ball::enumerate(&g, &g.generator_elements(), 3, 100_000).unwrap();
        assert_eq!(ball.len(), wb.len());
        for (e, l) in wb.iter() {
            assert_eq!(ball.norm(e).unwrap().value, ExtDist::new(l as u64));
        }
    }

    #[test]
    fn orbit_metric_from_line() {
        let z = Group::free(1);
        let act = GraphAction::line(&z, &[1]).unwrap();
        let mb = subgroup_metric_from_action(&act, &Vertex::Int(0), 3, 1000).unwrap();
        assert!(mb.warnings.is_empty());
        assert!(mb.axiom_violations().is_empty());
        let pt = GraphAction::point(&z);
        let mb = subgroup_metric_from_action(&pt, &Vertex::Node(0), 2, 1000).unwrap();
        assert!(!mb.warnings.is_empty());
        assert!(!mb.axiom_violations().is_empty());
    }

    #[test]
    fn vfree_orbit_metric_values() {
        let f2 = Group::free(2);
        let act = GraphAction::line(&f2, &[1, 0]).unwrap();
        let m = SubgroupMetric::from_action(act, Vertex::Int(0));
        let ball = Ball::enumerate(&f2, &f2.generator_elements(), 4, 10_000).unwrap();
        for w in ball.elements() {
            let a_sum: i64 = match w {
                Element::Free(l) => l.iter().filter(|x| x.abs() == 1).map(|x| x.signum() as i64).sum(),
                _ => unreachable!(),
            };
            assert_eq!(m.norm(&f2, w), a_sum.unsigned_abs());
        }
        assert!(m.is_pseudo());
    }
}
