//! Relative Cayley graphs `Γ(G, X ⊔ H)`, the metrics `d_λ`, `H_λ`-components
//! and equivariant nearest point projections.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::dist::{ExtDist, Measured};
use crate::error::{Error, Result};
use crate::graph::{EdgeStyle, Graph, UNREACHED};
use crate::group::{Ball, Element, Group, SubgroupEmbedding};
use crate::hyperbolicity::{delta_thin, DeltaMode, DeltaReport};
use crate::metric::{InducedBall, SubgroupMetric};

/// Label of an edge of a relative Cayley graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum EdgeLabel {
    X,
    Sub(usize),
}

/// `(G, X, {H_λ})` for relative Cayley graphs.
#[derive(Clone, Debug)]
pub struct RelativeSetup {
    pub group: Group,
    pub x: Vec<Element>,
    pub subgroups: Vec<SubgroupEmbedding>,
}

/// A path given by its vertices and the label of each edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelPath {
    pub vertices: Vec<Element>,
    pub labels: Vec<EdgeLabel>,
}

impl RelPath {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn start(&self) -> &Element {
        &self.vertices[0]
    }

    pub fn end(&self) -> &Element {
        self.vertices.last().expect("path has a vertex")
    }
}

/// A maximal `H_λ`-subpath, as the edge range `start..=end` (indices into
/// the path's edges; `start > end` wraps around a closed path).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Component {
    pub lambda: usize,
    pub start: usize,
    pub end: usize,
    pub isolated: bool,
}

impl RelativeSetup {
    pub fn new(group: &Group, x: Vec<Element>, subgroups: Vec<SubgroupEmbedding>) -> Result<Self> {
        let mut xs: Vec<Element> = Vec::new();
        for e in x {
            if !group.contains(&e) {
                return Err(Error::invalid(format!("{e} is not an element of {}", group.family_tag())));
            }
            let inv = group.inverse(&e);
            for y in [e, inv] {
                if !group.is_identity(&y) && !xs.contains(&y) {
                    xs.push(y);
                }
            }
        }
        Ok(Self {
            group: group.clone(),
            x: xs,
            subgroups,
        })
    }

    /// Checks that `u^-1 v` is a letter with the given label.
    pub fn check_edge(&self, u: &Element, v: &Element, label: EdgeLabel) -> bool {
        let s = self.group.divide(u, v);
        match label {
            EdgeLabel::X => self.x.contains(&s),
            EdgeLabel::Sub(l) => !self.group.is_identity(&s) && self.subgroups[l].member(&s),
        }
    }

    pub fn validate_path(&self, p: &RelPath) -> Result<()> {
        if p.vertices.len() != p.labels.len() + 1 {
            return Err(Error::invalid("path needs one more vertex than edges"));
        }
        for (i, l) in p.labels.iter().enumerate() {
            if let EdgeLabel::Sub(k) = l {
                if *k >= self.subgroups.len() {
                    return Err(Error::invalid(format!("edge {i} names subgroup {k}")));
                }
            }
            if !self.check_edge(&p.vertices[i], &p.vertices[i + 1], *l) {
                return Err(Error::invalid(format!(
                    "edge {i} from {} to {} is not labeled {l:?}",
                    p.vertices[i],
                    p.vertices[i + 1]
                )));
            }
        }
        Ok(())
    }

    /// Maximal `H_λ`-subpaths of `p` (closed when `cyclic`) with the
    /// isolation flag: two components of the same subgroup are connected when
    /// their vertices lie in one left coset.
    pub fn h_components(&self, p: &RelPath, cyclic: bool) -> Result<Vec<Component>> {
        self.validate_path(p)?;
        if cyclic && p.start() != p.end() {
            return Err(Error::invalid("closed path must end where it starts"));
        }
        let n = p.labels.len();
        if n == 0 {
            return Ok(vec![]);
        }
        let lam = |i: usize| match p.labels[i % n] {
            EdgeLabel::Sub(l) => Some(l),
            EdgeLabel::X => None,
        };
        let mut comps: Vec<(usize, usize, usize)> = Vec::new();
        if cyclic && (0..n).all(|i| lam(i).is_some() && lam(i) == lam(0)) {
            comps.push((lam(0).unwrap(), 0, n - 1));
        } else {
            // start scanning just after a label change so no run is split
            let offset = if cyclic {
                (0..n).find(|&i| lam(i) != lam(i + n - 1)).unwrap_or(0)
            } else {
                0
            };
            let mut i = 0;
            while i < n {
                let e = (offset + i) % n;
                match lam(e) {
                    None => i += 1,
                    Some(l) => {
                        let mut j = i;
                        while j + 1 < n && lam(offset + j + 1) == Some(l) {
                            j += 1;
                        }
                        comps.push((l, e, (offset + j) % n));
                        i = j + 1;
                    }
                }
            }
        }
        let out = comps
            .iter()
            .enumerate()
            .map(|(ci, &(l, s, e))| {
                let connected = comps.iter().enumerate().any(|(cj, &(l2, s2, _))| {
                    cj != ci && l2 == l && self.subgroups[l].same_left_coset(&p.vertices[s], &p.vertices[s2])
                });
                Component {
                    lambda: l,
                    start: s,
                    end: e,
                    isolated: !connected,
                }
            })
            .collect();
        Ok(out)
    }

    /// Builds the ball of radius `radius` around `1` in `Γ(G, X ⊔ H)`,
    /// reaching new vertices through `X` and subgroup letters of word length
    /// at most `letter_cap`, and then adding every subgroup edge between
    /// enumerated vertices.
    pub fn build_ball(&self, radius: u32, letter_cap: u32, budget: usize) -> Result<RelativeBall> {
        let g = &self.group;
        let mut letters: Vec<Element> = self.x.clone();
        for s in &self.subgroups {
            let hb = Ball::enumerate(s.subgroup(), &s.subgroup().generator_elements(), letter_cap, budget)?;
            for h in hb.elements() {
                let e = s.inject(h);
                if !g.is_identity(&e) && !letters.contains(&e) {
                    letters.push(e);
                }
            }
        }
        let ball = Ball::enumerate(g, &letters, radius, budget)?;
        let elements = ball.elements().to_vec();
        let index: HashMap<Element, u32> = elements.iter().enumerate().map(|(i, e)| (e.clone(), i as u32)).collect();
        let n = elements.len();
        let mut labels: BTreeMap<(u32, u32), u64> = BTreeMap::new();
        let add = |u: usize, v: usize, bit: u64, labels: &mut BTreeMap<(u32, u32), u64>| {
            let key = (u.min(v) as u32, u.max(v) as u32);
            *labels.entry(key).or_insert(0) |= bit;
        };
        for (u, e) in elements.iter().enumerate() {
            for x in &self.x {
                if let Some(&v) = index.get(&g.multiply(e, x)) {
                    add(u, v as usize, 1, &mut labels);
                }
            }
        }
        let mut membership = vec![0u64; n];
        let mut edge_budget = budget;
        for (l, s) in self.subgroups.iter().enumerate() {
            let bit = 1u64 << (l + 1);
            let mut cosets: HashMap<Element, Vec<usize>> = HashMap::new();
            for (u, e) in elements.iter().enumerate() {
                cosets.entry(s.left_coset_key(e)).or_default().push(u);
                if s.member(e) {
                    membership[u] |= bit;
                }
            }
            let mut groups: Vec<Vec<usize>> = cosets.into_values().collect();
            groups.sort();
            for members in groups {
                let k = members.len();
                let pairs = k * k.saturating_sub(1) / 2;
                if pairs > edge_budget {
                    return Err(Error::budget("relative ball subgroup edges", budget));
                }
                edge_budget -= pairs;
                for a in 0..k {
                    for b in a + 1..k {
                        add(members[a], members[b], bit, &mut labels);
                    }
                }
            }
        }
        let graph = Graph::from_edges(n, labels.keys().map(|&(u, v)| (u as usize, v as usize)));
        let dist = graph.bfs(0);
        Ok(RelativeBall {
            setup: self.clone(),
            elements,
            index,
            depth: ball.lengths().to_vec(),
            dist,
            graph,
            labels,
            membership,
            radius,
            letter_cap,
        })
    }
}

/// A finite ball of a relative Cayley graph.
///
/// Distances are exact for the graph whose subgroup alphabets are cut off at
/// `letter_cap`; the clique edges inside each coset are complete.
#[derive(Clone, Debug)]
pub struct RelativeBall {
    setup: RelativeSetup,
    elements: Vec<Element>,
    index: HashMap<Element, u32>,
    depth: Vec<u32>,
    dist: Vec<u32>,
    graph: Graph,
    labels: BTreeMap<(u32, u32), u64>,
    membership: Vec<u64>,
    radius: u32,
    letter_cap: u32,
}

/// Counts `|{ h ∈ H_λ ∩ ball : d_λ(1,h) <= r }|` for `r = 0..=R`.
#[derive(Clone, Debug, Serialize)]
pub struct PropernessTable {
    pub lambda: usize,
    pub letter_cap: u32,
    pub subgroup_points: usize,
    pub counts: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Consistent,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct EmbeddingCertificate {
    pub delta: DeltaReport,
    pub tables: Vec<PropernessTable>,
    pub verdicts: Vec<Verdict>,
    pub verdict: Verdict,
    /// `(λ, r)` at which the `d_λ`-ball of radius `r` keeps growing with
    /// the letter cap.
    pub witnesses: Vec<(usize, usize)>,
}

/// The result of a nearest point projection on one point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projected {
    pub image: Element,
    pub certified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LipschitzReport {
    pub lambda: usize,
    pub radius: u64,
    /// `K = max d_H(π f, π g) / d_{C,X}(f,g)` as a reduced fraction.
    pub k_num: u64,
    pub k_den: u64,
    pub k: f64,
    pub witness: Option<(String, String)>,
    pub pairs: usize,
    pub uncertified_pairs: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpreadReport {
    pub components: Vec<Component>,
    pub spreads: Vec<Option<u64>>,
    pub max_spread: u64,
    pub certified: bool,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl RelativeBall {
    pub fn setup(&self) -> &RelativeSetup {
        &self.setup
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn letter_cap(&self) -> u32 {
        self.letter_cap
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn index_of(&self, g: &Element) -> Option<usize> {
        self.index.get(g).map(|&i| i as usize)
    }

    /// Labels on the edge `u - v` (vertex indices).
    pub fn edge_labels(&self, u: usize, v: usize) -> Vec<EdgeLabel> {
        let bits = self
            .labels
            .get(&(u.min(v) as u32, u.max(v) as u32))
            .copied()
            .unwrap_or(0);
        let mut out = Vec::new();
        if bits & 1 != 0 {
            out.push(EdgeLabel::X);
        }
        for l in 0..self.setup.subgroups.len() {
            if bits & (1 << (l + 1)) != 0 {
                out.push(EdgeLabel::Sub(l));
            }
        }
        out
    }

    /// `d_{X ⊔ H}(1, g)` within the ball.
    pub fn norm(&self, g: &Element) -> Option<u32> {
        self.index_of(g).map(|i| self.dist[i]).filter(|&d| d != UNREACHED)
    }

    /// `d_{X ⊔ H}(u, v)` by BFS inside the ball.
    pub fn distance(&self, u: &Element, v: &Element) -> Result<Measured> {
        let (a, b) = self.pair(u, v)?;
        let d = self.graph.bfs(a)[b];
        if d == UNREACHED {
            return Ok(Measured::bound(ExtDist::Infinite));
        }
        let certified = self.dist[a] as u64 + self.dist[b] as u64 + d as u64 <= 2 * self.radius as u64;
        Ok(Measured {
            value: ExtDist::new(d as u64),
            certified,
        })
    }

    fn pair(&self, u: &Element, v: &Element) -> Result<(usize, usize)> {
        match (self.index_of(u), self.index_of(v)) {
            (Some(a), Some(b)) => Ok((a, b)),
            _ => Err(Error::invalid(format!("{u} or {v} lies outside the relative ball"))),
        }
    }

    fn delta_bfs(&self, lambda: usize, src: usize) -> Vec<u32> {
        let bit = 1u64 << (lambda + 1);
        let mut dist = vec![UNREACHED; self.len()];
        dist[src] = 0;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for &v in self.graph.neighbors(u) {
                let v = v as usize;
                if dist[v] != UNREACHED {
                    continue;
                }
                let bits = self.labels[&(u.min(v) as u32, u.max(v) as u32)];
                let internal = self.membership[u] & bit != 0 && self.membership[v] & bit != 0;
                if internal && bits == bit {
                    continue;
                }
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
        dist
    }

    /// `d_λ(h, k)`: distance after deleting the edges of `Γ(H_λ, H_λ)`,
    /// extended to `G` by left invariance and `∞` off a common coset.
    pub fn d_lambda(&self, lambda: usize, h: &Element, k: &Element) -> Result<Measured> {
        if lambda >= self.setup.subgroups.len() {
            return Err(Error::invalid(format!("no subgroup {lambda}")));
        }
        let g = &self.setup.group;
        let q = g.divide(h, k);
        if !self.setup.subgroups[lambda].member(&q) {
            return Ok(Measured::exact(ExtDist::Infinite));
        }
        let target = self
            .index_of(&q)
            .ok_or_else(|| Error::invalid(format!("{q} lies outside the relative ball")))?;
        let d = self.delta_bfs(lambda, 0);
        if d[target] != UNREACHED {
            let certified = self.dist[target] as u64 + d[target] as u64 <= 2 * self.radius as u64;
            return Ok(Measured {
                value: ExtDist::new(d[target] as u64),
                certified,
            });
        }
        // the component of 1 is closed when it avoids the outer shell
        let closed = (0..self.len()).all(|v| d[v] == UNREACHED || self.depth[v] < self.radius);
        Ok(Measured {
            value: ExtDist::Infinite,
            certified: closed,
        })
    }

    pub fn properness_table(&self, lambda: usize) -> PropernessTable {
        let bit = 1u64 << (lambda + 1);
        let d = self.delta_bfs(lambda, 0);
        let members: Vec<usize> = (0..self.len()).filter(|&v| self.membership[v] & bit != 0).collect();
        let counts = (0..=self.radius as usize)
            .map(|r| members.iter().filter(|&&v| d[v] != UNREACHED && d[v] as usize <= r).count())
            .collect();
        PropernessTable {
            lambda,
            letter_cap: self.letter_cap,
            subgroup_points: members.len(),
            counts,
        }
    }

    /// Equivariant nearest point projection onto `H_λ` of each point:
    /// `π(g) = g t^-1 π(t)` with `t` the canonical right coset representative
    /// of `H_λ g` and `π(t)` a closest point of `H_λ` to `t`, ties broken by
    /// normal form.
    pub fn project(&self, lambda: usize, points: &[Element]) -> Vec<Projected> {
        let g = &self.setup.group;
        let s = &self.setup.subgroups[lambda];
        let mut by_coset: HashMap<Element, Vec<usize>> = HashMap::new();
        for (i, e) in self.elements.iter().enumerate() {
            if self.dist[i] != UNREACHED {
                by_coset.entry(s.left_coset_key(e)).or_default().push(i);
            }
        }
        let mut cache: HashMap<Element, Projected> = HashMap::new();
        points
            .iter()
            .map(|p| {
                let t = s.right_coset_key(p);
                let head = g.multiply(p, &g.inverse(&t));
                let pt = cache
                    .entry(t.clone())
                    .or_insert_with(|| {
                        // d(t, h) = d(1, t^-1 h): search the coset t^-1 H_λ
                        let ti = g.inverse(&t);
                        match by_coset.get(&s.left_coset_key(&ti)) {
                            Some(members) => {
                                let best = members
                                    .iter()
                                    .map(|&i| (self.dist[i], g.multiply(&t, &self.elements[i])))
                                    .min()
                                    .expect("nonempty coset");
                                Projected {
                                    image: best.1,
                                    certified: true,
                                }
                            }
                            None => Projected {
                                image: g.identity(),
                                certified: false,
                            },
                        }
                    })
                    .clone();
                Projected {
                    image: g.multiply(&head, &pt.image),
                    certified: pt.certified,
                }
            })
            .collect()
    }

    /// `max d_H(π f, π g) / d_{C,X}(f, g)` over pairs of points with
    /// `d_{C,X}(1, ·) <= radius`; `induced` must reach `2 · radius`.
    pub fn projection_lipschitz(
        &self,
        lambda: usize,
        metric: &SubgroupMetric,
        induced: &InducedBall,
        radius: u64,
    ) -> Result<LipschitzReport> {
        if induced.radius() < 2 * radius {
            return Err(Error::invalid("induced ball must reach twice the sample radius"));
        }
        let s = &self.setup.subgroups[lambda];
        let points: Vec<Element> = induced
            .iter()
            .filter(|(_, d)| *d <= radius)
            .map(|(e, _)| e.clone())
            .collect();
        let proj = self.project(lambda, &points);
        let images: Vec<Option<Element>> = proj
            .iter()
            .map(|p| s.pull_back(&p.image))
            .collect();
        let mut best: (u64, u64) = (0, 1);
        let mut witness = None;
        let mut pairs = 0;
        let mut uncertified = 0;
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                let d = match induced.distance(&points[i], &points[j]) {
                    Some(m) => m,
                    None => {
                        uncertified += 1;
                        continue;
                    }
                };
                let den = d.value.finite().expect("finite inside the ball");
                if !(d.certified && proj[i].certified && proj[j].certified) {
                    uncertified += 1;
                    continue;
                }
                pairs += 1;
                let num = match (&images[i], &images[j]) {
                    (Some(a), Some(b)) => metric.distance(s.subgroup(), a, b),
                    _ => return Err(Error::Consistency("projection left the subgroup".into())),
                };
                if (num as u128) * (best.1 as u128) > (best.0 as u128) * (den as u128) {
                    best = (num, den);
                    witness = Some((points[i].to_string(), points[j].to_string()));
                }
            }
        }
        if pairs == 0 {
            return Err(Error::Empty("no certified pairs for the projection".into()));
        }
        let gd = gcd(best.0, best.1).max(1);
        Ok(LipschitzReport {
            lambda,
            radius,
            k_num: best.0 / gd,
            k_den: best.1 / gd,
            k: best.0 as f64 / best.1 as f64,
            witness,
            pairs,
            uncertified_pairs: uncertified,
        })
    }

    /// For a closed polygon with geodesic sides, `d_λ(a_-, a_+)` for every
    /// isolated `H_λ`-component `a`.
    pub fn isolated_component_spread(&self, sides: &[RelPath]) -> Result<SpreadReport> {
        for (i, side) in sides.iter().enumerate() {
            self.setup.validate_path(side)?;
            let d = self.distance(side.start(), side.end())?;
            if d.value != ExtDist::new(side.len() as u64) {
                return Err(Error::NotGeodesic(format!(
                    "side {i} has length {} but its endpoints are {} apart",
                    side.len(),
                    d.value
                )));
            }
            let next = &sides[(i + 1) % sides.len()];
            if side.end() != next.start() {
                return Err(Error::invalid(format!("side {i} does not end where side {} starts", (i + 1) % sides.len())));
            }
        }
        let mut loop_path = RelPath {
            vertices: vec![],
            labels: vec![],
        };
        for side in sides {
            if loop_path.vertices.is_empty() {
                loop_path.vertices.push(side.start().clone());
            }
            loop_path.vertices.extend(side.vertices[1..].iter().cloned());
            loop_path.labels.extend(side.labels.iter().copied());
        }
        if loop_path.vertices.is_empty() {
            return Ok(SpreadReport {
                components: vec![],
                spreads: vec![],
                max_spread: 0,
                certified: true,
            });
        }
        let comps = self.setup.h_components(&loop_path, true)?;
        let n = loop_path.labels.len();
        let mut spreads = Vec::new();
        let mut certified = true;
        let mut max_spread = 0;
        for c in &comps {
            if !c.isolated {
                spreads.push(None);
                continue;
            }
            let a = &loop_path.vertices[c.start];
            let b = &loop_path.vertices[(c.end + 1) % n];
            let d = self.d_lambda(c.lambda, a, b)?;
            certified &= d.certified;
            let v = d.value.finite().unwrap_or(u64::MAX);
            max_spread = max_spread.max(v);
            spreads.push(Some(v));
        }
        Ok(SpreadReport {
            components: comps,
            spreads,
            max_spread,
            certified,
        })
    }

    /// DOT rendering with edge labels and one color per subgroup.
    pub fn to_dot(&self, name: &str) -> String {
        const COLORS: [&str; 6] = ["red", "blue", "darkgreen", "orange", "purple", "brown"];
        let labels: Vec<String> = self.elements.iter().map(|e| e.to_string()).collect();
        let styled: Vec<EdgeStyle> = self
            .labels
            .iter()
            .map(|(&(u, v), &bits)| {
                let names: Vec<String> = self
                    .edge_labels(u as usize, v as usize)
                    .iter()
                    .map(|l| match l {
                        EdgeLabel::X => "X".to_string(),
                        EdgeLabel::Sub(k) => self.setup.subgroups[*k].name().to_string(),
                    })
                    .collect();
                let color = (bits & 1 == 0)
                    .then(|| (0..64).find(|b| bits & (1 << (b + 1)) != 0).unwrap_or(0))
                    .map(|k| COLORS[k % COLORS.len()].to_string());
                EdgeStyle {
                    u: u as usize,
                    v: v as usize,
                    label: names.join(","),
                    color,
                }
            })
            .collect();
        crate::graph::to_dot(name, &self.graph, &labels, None, &styled)
    }
}

/// Builds relative balls at each letter cap and compares properness tables:
/// `FAIL` for `λ` when at some radius `r` the number of elements of `H_λ`
/// within `d_λ`-distance `r` strictly grows with every increase of the cap.
pub fn hyperbolic_embedding_certificate(
    setup: &RelativeSetup,
    radius: u32,
    caps: &[u32],
    budget: usize,
) -> Result<EmbeddingCertificate> {
    if caps.len() < 2 {
        return Err(Error::invalid("at least two letter caps are needed"));
    }
    let balls = caps
        .iter()
        .map(|&c| setup.build_ball(radius, c, budget))
        .collect::<Result<Vec<_>>>()?;
    let last = balls.last().expect("caps nonempty");
    let mode = if last.len() <= 400 {
        DeltaMode::Exhaustive
    } else {
        DeltaMode::Sampled { count: 20_000, seed: 7 }
    };
    let delta = delta_thin(last.graph(), mode)?;
    let mut tables = Vec::new();
    let mut verdicts = Vec::new();
    let mut witnesses = Vec::new();
    for l in 0..setup.subgroups.len() {
        let ts: Vec<PropernessTable> = balls.iter().map(|b| b.properness_table(l)).collect();
        let growing = ts.windows(2).all(|w| w[1].subgroup_points > w[0].subgroup_points);
        let unbounded_at = (0..=radius as usize)
            .find(|&r| ts.windows(2).all(|w| w[1].counts[r] > w[0].counts[r]));
        let verdict = match unbounded_at {
            Some(r) if growing && ts[0].subgroup_points > 1 => {
                witnesses.push((l, r));
                Verdict::Fail
            }
            _ => Verdict::Consistent,
        };
        verdicts.push(verdict);
        tables.extend(ts);
    }
    let verdict = if verdicts.contains(&Verdict::Fail) {
        Verdict::Fail
    } else {
        Verdict::Consistent
    };
    Ok(EmbeddingCertificate {
        delta,
        tables,
        verdicts,
        verdict,
        witnesses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Side;

    fn free_product() -> RelativeSetup {
        let g = Group::free(2);
        let a = SubgroupEmbedding::free_letters(&g, &[0]).unwrap().with_name("A");
        let b = SubgroupEmbedding::free_letters(&g, &[1]).unwrap().with_name("B");
        RelativeSetup::new(&g, vec![], vec![a, b]).unwrap()
    }

    #[test]
    fn free_product_distances() {
        let s = free_product();
        let ball = s.build_ball(2, 3, 100_000).unwrap();
        let g = &s.group;
        assert_eq!(ball.norm(&g.element("a b").unwrap()), Some(2));
        assert_eq!(ball.norm(&g.element("a^3 b^-2").unwrap()), Some(2));
        assert_eq!(
            ball.d_lambda(0, &g.identity(), &g.identity()).unwrap(),
            Measured::exact(0u64)
        );
    }

    #[test]
    fn whole_group_is_complete() {
        let g = Group::free(1);
        let s = RelativeSetup::new(&g, vec![], vec![SubgroupEmbedding::whole(&g)]).unwrap();
        let ball = s.build_ball(1, 3, 1000).unwrap();
        let n = ball.len();
        assert_eq!(n, 7);
        assert_eq!(ball.graph().edge_count(), n * (n - 1) / 2);
    }

    #[test]
    fn whole_group_certificate_is_consistent() {
        let g = Group::free(1);
        let s = RelativeSetup::new(&g, vec![], vec![SubgroupEmbedding::whole(&g)]).unwrap();
        let c = hyperbolic_embedding_certificate(&s, 2, &[2, 4, 6], 100_000).unwrap();
        assert_eq!(c.verdict, Verdict::Consistent);
    }

    #[test]
    fn direct_product_d_lambda_is_three() {
        let g = Group::direct_product(Group::free(1), Group::free(1));
        let h = SubgroupEmbedding::factor(&g, Side::Left).unwrap();
        let b = g.element("b").unwrap();
        let s = RelativeSetup::new(&g, vec![b], vec![h]).unwrap();
        let ball = s.build_ball(3, 4, 100_000).unwrap();
        for n in 1..=4 {
            let an = g.pow(&g.element("a").unwrap(), n);
            assert_eq!(ball.d_lambda(0, &g.identity(), &an).unwrap().value, ExtDist::new(3));
        }
    }

    #[test]
    fn components_and_isolation() {
        let g = Group::free(2);
        let a = SubgroupEmbedding::free_letters(&g, &[0]).unwrap();
        let s = RelativeSetup::new(&g, vec![g.element("b").unwrap()], vec![a]).unwrap();
        let e = |w: &str| g.element(w).unwrap();
        let only_x = RelPath {
            vertices: vec![e("1"), e("b"), e("b b")],
            labels: vec![EdgeLabel::X, EdgeLabel::X],
        };
        assert!(s.h_components(&only_x, false).unwrap().is_empty());
        // a, then b, then b^-1 back into H, then a: two connected components
        let p = RelPath {
            vertices: vec![e("1"), e("a"), e("a b"), e("a"), e("a^2")],
            labels: vec![EdgeLabel::Sub(0), EdgeLabel::X, EdgeLabel::X, EdgeLabel::Sub(0)],
        };
        let c = s.h_components(&p, false).unwrap();
        assert_eq!(c.len(), 2);
        assert!(c.iter().all(|x| !x.isolated));
        let bad = RelPath {
            vertices: vec![e("1"), e("b")],
            labels: vec![EdgeLabel::Sub(0)],
        };
        assert!(s.h_components(&bad, false).is_err());
    }

    #[test]
    fn isolated_edge_in_triangle() {
        let g = Group::free(2);
        let e = |w: &str| g.element(w).unwrap();
        let h = SubgroupEmbedding::free_letters(&g, &[0]).unwrap();
        let s = RelativeSetup::new(&g, vec![e("b"), e("a b")], vec![h]).unwrap();
        let ball = s.build_ball(3, 3, 100_000).unwrap();
        let proj = ball.project(0, &[e("b"), e("a^-1"), e("a^2 b")]);
        assert_eq!(proj[0].image, e("1"));
        assert_eq!(proj[1].image, e("a^-1"));
        assert_eq!(proj[2].image, e("a^2"));
        let side = |a: &str, b: &str, l| RelPath {
            vertices: vec![e(a), e(b)],
            labels: vec![l],
        };
        let sides = [
            side("1", "b", EdgeLabel::X),
            side("b", "a^-1", EdgeLabel::X),
            side("a^-1", "1", EdgeLabel::Sub(0)),
        ];
        let r = ball.isolated_component_spread(&sides).unwrap();
        assert_eq!(r.components.len(), 1);
        assert!(r.components[0].isolated);
        assert_eq!(r.max_spread, 2);
        assert!(r.certified);
        let long = RelPath {
            vertices: vec![e("1"), e("b"), e("a^-1"), e("1")],
            labels: vec![EdgeLabel::X, EdgeLabel::X, EdgeLabel::Sub(0)],
        };
        assert!(matches!(ball.isolated_component_spread(&[long]), Err(Error::NotGeodesic(_))));
    }
}
