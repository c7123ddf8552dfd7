//! The induced action: a space glued from `Γ(G, X)` and one copy of `R_i` per
//! left coset of each `H_i`, with the action
//! `g(aH_i, r) = (gaH_i, α_i(g, a) r)` and `α_i(g, a) = t_i(ga)^-1 g t_i(a)`.
//!
//! Vertices are canonical keys. When every `H_i` acts freely on vertices, a
//! pair `(tH_i, h b_i)` is the glued point `t h` of `Γ(G, X)` and is stored
//! as [`SVertex::Point`]. With a single subgroup acting non-freely the
//! space is the quotient in which `g ↦ (t(g)H, t(g)^-1 g b)`; `X`-edges at
//! a pair are then generated from a finite sample of the stabilizer of `b`,
//! and distances are upper bounds.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::action::{ActionKind, GraphAction, Vertex};
use crate::analysis::qi::{PairSample, QiReport};
use crate::dist::{ExtDist, Measured};
use crate::error::{Error, Result};
use crate::graph::{Graph, SpaceBall, UNREACHED};
use crate::group::{Ball, Element, Family, Group, Transversal};
use crate::metric::InducedBall;
use crate::relative::Verdict;

/// A vertex of the induced space.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SVertex {
    /// A vertex of `Γ(G, X)`.
    Point(Element),
    /// `(coset H_index, v)` with `coset` the transversal representative.
    Pair { index: usize, coset: Element, v: Vertex },
}

impl fmt::Display for SVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SVertex::Point(g) => write!(f, "{g}"),
            SVertex::Pair { index, coset, v } => write!(f, "({coset}H{index}, {v})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GluingMode {
    Free,
    Quotient,
}

/// `X`, transversals `T`, basepoints `B` and actions `A` of an induced action.
#[derive(Clone, Debug)]
pub struct InducedSpace {
    group: Group,
    x: Vec<Element>,
    transversals: Vec<Transversal>,
    bases: Vec<Vertex>,
    actions: Vec<GraphAction>,
    mode: GluingMode,
    /// Elements of `H_0` fixing `b_0`, as subgroup elements (quotient mode).
    stabilizer: Vec<Element>,
}

fn symmetrize(group: &Group, x: Vec<Element>) -> Result<Vec<Element>> {
    let mut out: Vec<Element> = Vec::new();
    for e in x {
        if !group.contains(&e) {
            return Err(Error::invalid(format!("{e} is not an element of {}", group.family_tag())));
        }
        let inv = group.inverse(&e);
        for y in [e, inv] {
            if !group.is_identity(&y) && !out.contains(&y) {
                out.push(y);
            }
        }
    }
    Ok(out)
}

impl InducedSpace {
    pub fn new(
        group: &Group,
        x: Vec<Element>,
        transversals: Vec<Transversal>,
        bases: Vec<Vertex>,
        actions: Vec<GraphAction>,
    ) -> Result<Self> {
        let n = transversals.len();
        if n == 0 {
            return Err(Error::config("subgroups", "at least one subgroup is needed"));
        }
        if bases.len() != n || actions.len() != n {
            return Err(Error::config(
                "actions",
                format!("{n} subgroups but {} basepoints and {} actions", bases.len(), actions.len()),
            ));
        }
        for (i, (t, a)) in transversals.iter().zip(&actions).enumerate() {
            if t.subgroup().ambient() != group {
                return Err(Error::config("subgroups", format!("subgroup {i} lives in another group")));
            }
            if a.group() != t.subgroup().subgroup() {
                return Err(Error::config(
                    "actions",
                    format!("action {i} is an action of {}, not of the subgroup", a.group().family_tag()),
                ));
            }
            if let ActionKind::Explicit { graph, .. } = a.kind() {
                graph.require_connected("acted-upon graph")?;
            }
        }
        let x = symmetrize(group, x)?;
        let free = actions.iter().all(|a| a.vertex_free());
        let mode = if free {
            GluingMode::Free
        } else if n == 1 {
            GluingMode::Quotient
        } else {
            return Err(Error::Unsupported(
                "several subgroups with non-free vertex actions".into(),
            ));
        };
        let space = Self {
            group: group.clone(),
            x,
            transversals,
            bases,
            actions,
            mode,
            stabilizer: vec![],
        };
        space.check_generation()?;
        let space = space.with_stabilizer_sample(1, 8)?;
        Ok(space)
    }

    /// `X ∪ ⋃ H_i` must generate `G`; each standard generator is searched in
    /// a small ball over these letters.
    fn check_generation(&self) -> Result<()> {
        let mut letters = self.x.clone();
        for t in &self.transversals {
            let s = t.subgroup();
            for y in s.subgroup().generator_elements() {
                letters.push(s.inject(&y));
            }
        }
        let missing: Vec<Element> = self
            .group
            .generator_elements()
            .into_iter()
            .filter(|g| !letters.contains(g) && !self.transversals.iter().any(|t| t.subgroup().member(g)))
            .collect();
        if missing.is_empty() {
            return Ok(());
        }
        let ball = match Ball::enumerate(&self.group, &letters, 6, 200_000) {
            Ok(b) => b,
            // undecided within the budget
            Err(Error::Budget { .. }) => return Ok(()),
            Err(e) => return Err(e),
        };
        for g in missing {
            if ball.index_of(&g).is_none() {
                return Err(Error::config(
                    "x",
                    format!("X together with the subgroups does not generate {g}"),
                ));
            }
        }
        Ok(())
    }

    /// Replaces the stabilizer sample used for `X`-edges at non-orbit-free
    /// pairs: elements of `H_0` of word length at most `radius` fixing `b_0`,
    /// together with their powers up to `power`.
    pub fn with_stabilizer_sample(mut self, radius: u32, power: u32) -> Result<Self> {
        if self.mode != GluingMode::Quotient {
            return Ok(self);
        }
        let a = &self.actions[0];
        let h = a.group();
        let base = self.bases[0].clone();
        let mut seen: HashSet<Element> = HashSet::new();
        let mut out = vec![h.identity()];
        seen.insert(h.identity());
        for s in a.stabilizer_sample(&base, radius, 1 << 20)? {
            if h.is_identity(&s) {
                continue;
            }
            for k in 1..=power as i64 {
                for e in [h.pow(&s, k), h.pow(&s, -k)] {
                    if seen.insert(e.clone()) {
                        out.push(e);
                    }
                }
            }
        }
        self.stabilizer = out;
        Ok(self)
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn x(&self) -> &[Element] {
        &self.x
    }

    pub fn len(&self) -> usize {
        self.transversals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transversals.is_empty()
    }

    pub fn mode(&self) -> GluingMode {
        self.mode
    }

    pub fn transversal(&self, i: usize) -> &Transversal {
        &self.transversals[i]
    }

    pub fn action(&self, i: usize) -> &GraphAction {
        &self.actions[i]
    }

    pub fn base(&self, i: usize) -> &Vertex {
        &self.bases[i]
    }

    pub fn stabilizer_sample_len(&self) -> usize {
        self.stabilizer.len()
    }

    pub fn with_x(&self, x: Vec<Element>) -> Result<Self> {
        let mut s = self.clone();
        s.x = symmetrize(&self.group, x)?;
        s.check_generation()?;
        Ok(s)
    }

    pub fn with_transversals(&self, transversals: Vec<Transversal>) -> Result<Self> {
        Self::new(&self.group, self.x.clone(), transversals, self.bases.clone(), self.actions.clone())
    }

    /// `α_i(g, a) = t_i(ga)^-1 g t_i(a)`, an element of `H_i` (ambient form).
    pub fn alpha(&self, i: usize, g: &Element, a: &Element) -> Result<Element> {
        let t = &self.transversals[i];
        let ga = self.group.multiply(g, a);
        let r = self.group.multiply(&self.group.divide(&t.rep(&ga), g), &t.rep(a));
        if !t.subgroup().member(&r) {
            return Err(Error::Consistency(format!("alpha({g}, {a}) = {r} is not in the subgroup")));
        }
        Ok(r)
    }

    fn act_sub(&self, i: usize, h: &Element, v: &Vertex) -> Result<Vertex> {
        let sub = self.transversals[i].subgroup();
        let hh = sub
            .pull_back(h)
            .ok_or_else(|| Error::Consistency(format!("{h} is not in subgroup {i}")))?;
        Ok(self.actions[i].act(&hh, v))
    }

    /// The vertex `g` of `Γ(G, X)`.
    pub fn point(&self, g: &Element) -> Result<SVertex> {
        match self.mode {
            GluingMode::Free => Ok(SVertex::Point(g.clone())),
            GluingMode::Quotient => {
                let t = self.transversals[0].rep(g);
                let v = self.act_sub(0, &self.group.divide(&t, g), &self.bases[0])?;
                Ok(SVertex::Pair { index: 0, coset: t, v })
            }
        }
    }

    /// The class of `(aH_i, v)`.
    pub fn pair(&self, i: usize, a: &Element, v: Vertex) -> Result<SVertex> {
        let t = self.transversals[i].rep(a);
        if self.mode == GluingMode::Free {
            if let Some(h) = self.actions[i].orbit_element(&self.bases[i], &v)? {
                let h = self.transversals[i].subgroup().inject(&h);
                return Ok(SVertex::Point(self.group.multiply(&t, &h)));
            }
        }
        Ok(SVertex::Pair { index: i, coset: t, v })
    }

    /// Every pair `(i, t_i, v)` representing the vertex.
    pub fn representatives(&self, p: &SVertex) -> Result<Vec<(usize, Element, Vertex)>> {
        match p {
            SVertex::Point(g) => (0..self.len())
                .map(|i| {
                    let t = self.transversals[i].rep(g);
                    let v = self.act_sub(i, &self.group.divide(&t, g), &self.bases[i])?;
                    Ok((i, t, v))
                })
                .collect(),
            SVertex::Pair { index, coset, v } => Ok(vec![(*index, coset.clone(), v.clone())]),
        }
    }

    /// `g · p`.
    pub fn act(&self, g: &Element, p: &SVertex) -> Result<SVertex> {
        match p {
            SVertex::Point(f) if self.mode == GluingMode::Free => Ok(SVertex::Point(self.group.multiply(g, f))),
            SVertex::Point(_) => Err(Error::invalid("point vertices only exist for free gluing")),
            SVertex::Pair { index, coset, v } => {
                let i = *index;
                let alpha = self.alpha(i, g, coset)?;
                let v2 = self.act_sub(i, &alpha, v)?;
                self.pair(i, &self.group.multiply(g, coset), v2)
            }
        }
    }

    pub fn neighbors(&self, p: &SVertex) -> Result<Vec<SVertex>> {
        let mut out = Vec::new();
        match p {
            SVertex::Point(g) => {
                for x in &self.x {
                    out.push(SVertex::Point(self.group.multiply(g, x)));
                }
                for (i, t, v) in self.representatives(p)? {
                    for w in self.actions[i].neighbors(&v) {
                        out.push(self.pair(i, &t, w)?);
                    }
                }
            }
            SVertex::Pair { index, coset, v } => {
                let i = *index;
                for w in self.actions[i].neighbors(v) {
                    out.push(self.pair(i, coset, w)?);
                }
                if self.mode == GluingMode::Quotient {
                    let h = self.actions[0].group();
                    if let Some(h0) = self.actions[0].orbit_element(&self.bases[0], v)? {
                        let sub = self.transversals[0].subgroup();
                        for s in &self.stabilizer {
                            let g = self.group.multiply(coset, &sub.inject(&h.multiply(&h0, s)));
                            for x in &self.x {
                                out.push(self.point(&self.group.multiply(&g, x))?);
                            }
                        }
                    }
                }
            }
        }
        out.retain(|q| q != p);
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// Materializes every vertex within `radius` of the basepoint `1` and all
    /// edges among them.
    pub fn build_ball(&self, radius: u32, budget: usize) -> Result<InducedSpaceBall> {
        let base = self.point(&self.group.identity())?;
        let mut vertices = vec![base.clone()];
        let mut index: HashMap<SVertex, u32> = HashMap::from([(base, 0)]);
        let mut depth = vec![0u32];
        let mut edges: Vec<(usize, usize)> = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(u) = queue.pop_front() {
            let du = depth[u];
            for w in self.neighbors(&vertices[u].clone())? {
                match index.get(&w) {
                    Some(&j) => edges.push((u, j as usize)),
                    None if du < radius => {
                        if vertices.len() >= budget {
                            return Err(Error::budget("induced space ball", budget));
                        }
                        let j = vertices.len();
                        index.insert(w.clone(), j as u32);
                        vertices.push(w);
                        depth.push(du + 1);
                        edges.push((u, j));
                        queue.push_back(j);
                    }
                    None => {}
                }
            }
        }
        let graph = Graph::from_edges(vertices.len(), edges);
        let complete = self.mode == GluingMode::Free || self.actions[0].vertex_free();
        Ok(InducedSpaceBall {
            vertices,
            index,
            dist: graph.bfs(0),
            graph,
            radius,
            complete,
        })
    }

    /// Breadth-first search from `u` without materializing a ball; returns
    /// the distance to `v` if found within `max_depth`.
    pub fn search_distance(&self, u: &SVertex, v: &SVertex, max_depth: u32, budget: usize) -> Result<Option<u32>> {
        let mut seen: HashMap<SVertex, u32> = HashMap::from([(u.clone(), 0)]);
        let mut queue = VecDeque::from([u.clone()]);
        while let Some(p) = queue.pop_front() {
            let d = seen[&p];
            if &p == v {
                return Ok(Some(d));
            }
            if d >= max_depth {
                continue;
            }
            for w in self.neighbors(&p)? {
                if !seen.contains_key(&w) {
                    if seen.len() >= budget {
                        return Err(Error::budget("induced space search", budget));
                    }
                    seen.insert(w.clone(), d + 1);
                    queue.push_back(w);
                }
            }
        }
        Ok(None)
    }
}

/// A materialized ball of the induced space around the basepoint.
#[derive(Clone, Debug)]
pub struct InducedSpaceBall {
    vertices: Vec<SVertex>,
    index: HashMap<SVertex, u32>,
    dist: Vec<u32>,
    graph: Graph,
    radius: u32,
    complete: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConnectivityReport {
    pub connected: bool,
    pub components: usize,
    /// Components other than the basepoint's that touch the outer shell.
    pub boundary_components: usize,
}

impl InducedSpaceBall {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    /// Whether every edge at every vertex was generated, so that BFS
    /// distances inside the certified region are exact.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn vertices(&self) -> &[SVertex] {
        &self.vertices
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn index_of(&self, p: &SVertex) -> Option<usize> {
        self.index.get(p).map(|&i| i as usize)
    }

    /// Distance from the basepoint.
    pub fn depth(&self, i: usize) -> u32 {
        self.dist[i]
    }

    pub fn norm(&self, p: &SVertex) -> Option<Measured> {
        let i = self.index_of(p)?;
        let d = self.dist[i];
        Some(Measured {
            value: ExtDist::new(d as u64),
            certified: self.complete && d <= self.radius,
        })
    }

    pub fn distances_from(&self, i: usize) -> Vec<u32> {
        self.graph.bfs(i)
    }

    pub fn pair_certified(&self, a: usize, b: usize, d: u32) -> bool {
        self.complete && d != UNREACHED && self.dist[a] as u64 + self.dist[b] as u64 + d as u64 <= 2 * self.radius as u64
    }

    pub fn distance(&self, p: &SVertex, q: &SVertex) -> Result<Measured> {
        let (a, b) = match (self.index_of(p), self.index_of(q)) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::Truncated(format!("{p} or {q} lies outside the induced ball"))),
        };
        let d = self.graph.bfs(a)[b];
        if d == UNREACHED {
            return Ok(Measured::bound(ExtDist::Infinite));
        }
        Ok(Measured {
            value: ExtDist::new(d as u64),
            certified: self.pair_certified(a, b, d),
        })
    }

    pub fn check_connectivity(&self) -> ConnectivityReport {
        let (comp, count) = self.graph.components();
        let boundary = (0..count)
            .filter(|&c| c != comp[0])
            .filter(|&c| (0..self.len()).any(|v| comp[v] == c && self.dist[v] >= self.radius))
            .count();
        ConnectivityReport {
            connected: count == 1,
            components: count,
            boundary_components: boundary,
        }
    }

    pub fn space_ball(&self) -> SpaceBall {
        SpaceBall {
            graph: self.graph.clone(),
            labels: self.vertices.iter().map(|v| v.to_string()).collect(),
            basepoint: 0,
            certified_radius: if self.complete { self.radius } else { 0 },
        }
    }

    pub fn to_dot(&self, name: &str) -> String {
        let labels: Vec<String> = self.vertices.iter().map(|v| v.to_string()).collect();
        crate::graph::to_dot(name, &self.graph, &labels, Some(&self.dist), &[])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FreenessReport {
    pub checked: usize,
    pub free: bool,
    pub witness: Option<(String, String)>,
}

/// Checks `g · v != v` for every sampled `g != 1` and ball vertex `v`.
pub fn check_freeness(space: &InducedSpace, ball: &InducedSpaceBall, samples: &[Element]) -> Result<FreenessReport> {
    let mut checked = 0;
    for g in samples.iter().filter(|g| !space.group().is_identity(g)) {
        for v in ball.vertices() {
            checked += 1;
            if space.act(g, v)? == *v {
                return Ok(FreenessReport {
                    checked,
                    free: false,
                    witness: Some((g.to_string(), v.to_string())),
                });
            }
        }
    }
    Ok(FreenessReport {
        checked,
        free: true,
        witness: None,
    })
}

/// Triples violating `α_i(fg, a) = α_i(f, ga) α_i(g, a)`.
pub fn cocycle_violations(space: &InducedSpace, i: usize, elements: &[Element]) -> Result<Vec<[String; 3]>> {
    let g_ = space.group();
    let mut bad = Vec::new();
    for f in elements {
        for g in elements {
            let fg = g_.multiply(f, g);
            for a in elements {
                let lhs = space.alpha(i, &fg, a)?;
                let rhs = g_.multiply(&space.alpha(i, f, &g_.multiply(g, a))?, &space.alpha(i, g, a)?);
                if lhs != rhs {
                    bad.push([f.to_string(), g.to_string(), a.to_string()]);
                }
            }
        }
    }
    Ok(bad)
}

/// Samples violating `(fg) p = f (g p)`.
pub fn action_law_violations(space: &InducedSpace, elements: &[Element], points: &[SVertex]) -> Result<Vec<String>> {
    let g_ = space.group();
    let mut bad = Vec::new();
    for p in points {
        if space.act(&g_.identity(), p)? != *p {
            bad.push(format!("1 moves {p}"));
        }
        for f in elements {
            for g in elements {
                if space.act(&g_.multiply(f, g), p)? != space.act(f, &space.act(g, p)?)? {
                    bad.push(format!("({f})({g}) on {p}"));
                }
            }
        }
    }
    Ok(bad)
}

/// A map between acted-upon graphs used by `φ2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VertexMap {
    Identity,
    /// `n ↦ mul·n + add` on line vertices.
    Affine { mul: i64, add: i64 },
}

impl VertexMap {
    pub fn apply(&self, v: &Vertex) -> Result<Vertex> {
        match (self, v) {
            (VertexMap::Identity, _) => Ok(v.clone()),
            (VertexMap::Affine { mul, add }, Vertex::Int(n)) => Ok(Vertex::Int(mul * n + add)),
            _ => Err(Error::invalid(format!("affine map applied to {v}"))),
        }
    }
}

/// Which ingredient two induced-action configurations differ in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence {
    /// `φ1(aH_i, v) = (aH_i, t'_i(a)^-1 t_i(a) v)`.
    Transversal,
    /// `φ2`: orbit points `h b_i ↦ h b'_i`, all other vertices `v ↦ ρ_i(v)`.
    Action(Vec<VertexMap>),
    /// `φ3`: the identity on pairs.
    GeneratingSet,
}

fn same_x(a: &InducedSpace, b: &InducedSpace) -> bool {
    a.x.len() == b.x.len() && a.x.iter().all(|e| b.x.contains(e))
}

fn same_actions(a: &InducedSpace, b: &InducedSpace) -> bool {
    a.bases == b.bases && a.actions.iter().zip(&b.actions).all(|(p, q)| p.describe() == q.describe())
}

fn validate_equivalence(src: &InducedSpace, dst: &InducedSpace, kind: &Equivalence) -> Result<()> {
    if src.group != dst.group || src.len() != dst.len() {
        return Err(Error::config("equivalence", "configurations use different groups or subgroups"));
    }
    let ok = match kind {
        Equivalence::Transversal => same_x(src, dst) && same_actions(src, dst),
        Equivalence::Action(rho) => same_x(src, dst) && rho.len() == src.len(),
        Equivalence::GeneratingSet => same_actions(src, dst),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::config(
            "equivalence",
            "configurations must differ in exactly the named ingredient; compose maps instead",
        ))
    }
}

/// The image of `p` under `φ1`, `φ2` or `φ3`.
pub fn equivalence_map(src: &InducedSpace, dst: &InducedSpace, kind: &Equivalence, p: &SVertex) -> Result<SVertex> {
    match p {
        SVertex::Point(g) => dst.point(g),
        SVertex::Pair { index, coset, v } => {
            let i = *index;
            match kind {
                Equivalence::Transversal => {
                    let t2 = dst.transversals[i].rep(coset);
                    let h = src.group.divide(&t2, coset);
                    let v2 = src.act_sub(i, &h, v)?;
                    dst.pair(i, &t2, v2)
                }
                Equivalence::Action(rho) => {
                    let v2 = match src.actions[i].orbit_element(&src.bases[i], v)? {
                        Some(h) => dst.actions[i].act(&h, &dst.bases[i]),
                        None => rho[i].apply(v)?,
                    };
                    dst.pair(i, coset, v2)
                }
                Equivalence::GeneratingSet => dst.pair(i, coset, v.clone()),
            }
        }
    }
}

/// QI constants, equivariance defect and coarse surjectivity of an
/// equivalence map measured on the source ball of radius `radius`.
pub fn equivalence_report(
    src: &InducedSpace,
    dst: &InducedSpace,
    kind: &Equivalence,
    radius: u32,
    target_radius: u32,
    sample_radius: u32,
    budget: usize,
) -> Result<QiReport> {
    validate_equivalence(src, dst, kind)?;
    let sb = src.build_ball(radius, budget)?;
    let tb = dst.build_ball(target_radius, budget)?;
    let images: Vec<SVertex> = sb
        .vertices()
        .iter()
        .map(|p| equivalence_map(src, dst, kind, p))
        .collect::<Result<_>>()?;
    let img_idx: Vec<Option<usize>> = images.iter().map(|q| tb.index_of(q)).collect();
    let mut pairs = Vec::new();
    let mut certified = sb.is_complete() && tb.is_complete();
    for a in 0..sb.len() {
        let ds = sb.distances_from(a);
        let dt = img_idx[a].map(|i| tb.distances_from(i));
        for b in a + 1..sb.len() {
            if !sb.pair_certified(a, b, ds[b]) {
                continue;
            }
            match (&dt, img_idx[b]) {
                (Some(dt), Some(j)) if tb.pair_certified(img_idx[a].unwrap(), j, dt[j]) => {
                    pairs.push(PairSample {
                        x: sb.vertices[a].to_string(),
                        y: sb.vertices[b].to_string(),
                        d_src: ds[b] as u64,
                        d_tgt: dt[j] as u64,
                    });
                }
                _ => certified = false,
            }
        }
    }
    let gens = src.group.generator_elements();
    let samples = Ball::enumerate(&src.group, &gens, sample_radius, budget)?;
    let mut defects = Vec::new();
    for g in samples.elements() {
        for (a, p) in sb.vertices().iter().enumerate() {
            if sb.depth(a) + sample_radius > radius {
                continue;
            }
            let lhs = equivalence_map(src, dst, kind, &src.act(g, p)?)?;
            let rhs = dst.act(g, &images[a])?;
            let d = if lhs == rhs {
                Some(0)
            } else {
                tb.distance(&lhs, &rhs).ok().and_then(|m| m.value.finite())
            };
            if let Some(d) = d {
                defects.push((g.to_string(), p.to_string(), d));
            }
        }
    }
    let sources: Vec<usize> = img_idx.iter().flatten().copied().collect();
    let near = multi_source_bfs(tb.graph(), &sources);
    let cover_radius = radius.min(target_radius);
    let cosurj: Vec<(String, u64)> = (0..tb.len())
        .filter(|&v| tb.depth(v) <= cover_radius)
        .map(|v| (tb.vertices[v].to_string(), near[v] as u64))
        .collect();
    let report = QiReport::from_pairs(&pairs)
        .with_defects(defects)
        .with_cosurjectivity(cosurj);
    Ok(if certified { report } else { report.uncertified() })
}

fn multi_source_bfs(graph: &Graph, sources: &[usize]) -> Vec<u32> {
    let mut dist = vec![UNREACHED; graph.len()];
    let mut queue = VecDeque::new();
    for &s in sources {
        if dist[s] != 0 {
            dist[s] = 0;
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        for &v in graph.neighbors(u) {
            if dist[v as usize] == UNREACHED {
                dist[v as usize] = dist[u] + 1;
                queue.push_back(v as usize);
            }
        }
    }
    dist
}

/// Vertices of `R_i` within `radius` of `b_i` with their distances.
fn action_ball(action: &GraphAction, base: &Vertex, radius: u32, budget: usize) -> Result<Vec<(Vertex, u32)>> {
    let mut seen: HashMap<Vertex, u32> = HashMap::from([(base.clone(), 0)]);
    let mut order = vec![base.clone()];
    let mut i = 0;
    while i < order.len() {
        let v = order[i].clone();
        i += 1;
        let d = seen[&v];
        if d >= radius {
            continue;
        }
        for w in action.neighbors(&v) {
            if !seen.contains_key(&w) {
                if seen.len() >= budget {
                    return Err(Error::budget("acted-upon graph ball", budget));
                }
                seen.insert(w.clone(), d + 1);
                order.push(w);
            }
        }
    }
    Ok(order.into_iter().map(|v| {
        let d = seen[&v];
        (v, d)
    }).collect())
}

/// QI report of `ψ_i : R_i → S, r ↦ (H_i, r)` on the ball of radius
/// `source_radius` around `b_i`; `ball` supplies the target distances.
pub fn extension_report(
    space: &InducedSpace,
    i: usize,
    source_radius: u32,
    ball: &InducedSpaceBall,
    budget: usize,
) -> Result<QiReport> {
    let action = space.action(i);
    let pts = action_ball(action, space.base(i), source_radius, budget)?;
    let id = space.group().identity();
    let images: Vec<Option<usize>> = pts
        .iter()
        .map(|(v, _)| space.pair(i, &id, v.clone()).map(|p| ball.index_of(&p)))
        .collect::<Result<_>>()?;
    let mut pairs = Vec::new();
    let mut certified = ball.is_complete();
    for a in 0..pts.len() {
        let Some(ia) = images[a] else {
            certified = false;
            continue;
        };
        let dt = ball.distances_from(ia);
        for b in a + 1..pts.len() {
            let Some(ib) = images[b] else { continue };
            let ds = action
                .distance(&pts[a].0, &pts[b].0)
                .ok_or_else(|| Error::Disconnected("acted-upon graph".into()))?;
            if dt[ib] == UNREACHED {
                certified = false;
                continue;
            }
            certified &= ball.pair_certified(ia, ib, dt[ib]);
            pairs.push(PairSample {
                x: pts[a].0.to_string(),
                y: pts[b].0.to_string(),
                d_src: ds,
                d_tgt: dt[ib] as u64,
            });
        }
    }
    let r = QiReport::from_pairs(&pairs);
    Ok(if certified { r } else { r.uncertified() })
}

/// Extension reports at growing radii.
#[derive(Clone, Debug, Serialize)]
pub struct ExtensionSeries {
    pub rows: Vec<(u32, QiReport)>,
    pub verdict: Verdict,
    pub threshold: f64,
}

/// `FAIL` when the multiplicative constant strictly grows over the last two
/// radius steps and ends above `threshold`.
pub fn extension_series(
    space: &InducedSpace,
    i: usize,
    radii: &[u32],
    ball: &InducedSpaceBall,
    threshold: f64,
    budget: usize,
) -> Result<ExtensionSeries> {
    let rows: Vec<(u32, QiReport)> = radii
        .iter()
        .map(|&r| extension_report(space, i, r, ball, budget).map(|q| (r, q)))
        .collect::<Result<_>>()?;
    let c: Vec<f64> = rows.iter().map(|(_, q)| q.mult_constant).collect();
    let growing = c.len() >= 3 && c[c.len() - 3] < c[c.len() - 2] && c[c.len() - 2] < c[c.len() - 1];
    let verdict = if growing && c.last().copied().unwrap_or(0.0) > threshold {
        Verdict::Fail
    } else {
        Verdict::Consistent
    };
    Ok(ExtensionSeries { rows, verdict, threshold })
}

#[derive(Clone, Debug, Serialize)]
pub struct DcxDsReport {
    pub pairs: usize,
    pub equalities: usize,
    pub violations: Vec<(String, String)>,
    pub uncertified: usize,
}

/// Checks `d_{C,X}(g1, g2) <= d_S(g1 p, g2 p)` for all pairs of `elements`,
/// using `d_S(g1 p, g2 p) = d_S(p, g1^-1 g2 p)` and left invariance.
pub fn dcx_ds_check(
    space: &InducedSpace,
    ball: &InducedSpaceBall,
    metric: &InducedBall,
    elements: &[Element],
) -> Result<DcxDsReport> {
    let g_ = space.group();
    let mut cache: HashMap<Element, Option<Measured>> = HashMap::new();
    let mut report = DcxDsReport {
        pairs: 0,
        equalities: 0,
        violations: vec![],
        uncertified: 0,
    };
    for g1 in elements {
        for g2 in elements {
            let q = g_.divide(g1, g2);
            let ds = match cache.get(&q) {
                Some(m) => *m,
                None => {
                    let m = ball.norm(&space.point(&q)?);
                    cache.insert(q.clone(), m);
                    m
                }
            };
            let ds = match ds {
                Some(m) if m.certified => m.value.finite().expect("finite"),
                _ => {
                    report.uncertified += 1;
                    continue;
                }
            };
            report.pairs += 1;
            match metric.norm(&q) {
                Some(dcx) => {
                    let dcx = dcx.value.finite().expect("finite");
                    if dcx > ds {
                        report.violations.push((g1.to_string(), g2.to_string()));
                    } else if dcx == ds {
                        report.equalities += 1;
                    }
                }
                None if ds <= metric.radius() => report.violations.push((g1.to_string(), g2.to_string())),
                None => report.uncertified += 1,
            }
        }
    }
    Ok(report)
}

/// The complete graph on a finite metric space with each edge `{x, y}`
/// subdivided into `d(x, y)` unit edges, and the induced action.
///
/// Returns the action and the vertex ids of the original points.
pub fn geodesicize(
    group: &Group,
    dist: &[Vec<u64>],
    labels: &[String],
    perms: &[Vec<u32>],
) -> Result<(GraphAction, Vec<u32>)> {
    let n = dist.len();
    for (i, row) in dist.iter().enumerate() {
        if row.len() != n || row[i] != 0 || (0..n).any(|j| j != i && (row[j] == 0 || row[j] != dist[j][i])) {
            return Err(Error::invalid("distance matrix must be a symmetric metric"));
        }
    }
    for p in perms {
        if p.len() != n || (0..n).any(|i| (0..n).any(|j| dist[p[i] as usize][p[j] as usize] != dist[i][j])) {
            return Err(Error::invalid("permutations must be isometries"));
        }
    }
    // interior vertex k (1-based from x) of edge (x, y), x < y
    let mut interior: HashMap<(usize, usize), Vec<u32>> = HashMap::new();
    let mut names: Vec<String> = labels.to_vec();
    let mut graph = Graph::new(n);
    for x in 0..n {
        for y in x + 1..n {
            let d = dist[x][y] as usize;
            let mut chain = vec![x as u32];
            let mut ids = Vec::new();
            for k in 1..d {
                let v = graph.add_vertex() as u32;
                names.push(format!("{}~{}:{k}", labels[x], labels[y]));
                ids.push(v);
                chain.push(v);
            }
            chain.push(y as u32);
            for w in chain.windows(2) {
                graph.add_edge(w[0] as usize, w[1] as usize);
            }
            interior.insert((x, y), ids);
        }
    }
    graph.finalize();
    let total = graph.len();
    let full: Vec<Vec<u32>> = perms
        .iter()
        .map(|p| {
            let mut q: Vec<u32> = (0..total as u32).collect();
            q[..n].copy_from_slice(p);
            for (&(x, y), ids) in &interior {
                let (px, py) = (p[x] as usize, p[y] as usize);
                let target = &interior[&(px.min(py), px.max(py))];
                for (k, &v) in ids.iter().enumerate() {
                    let kk = if px < py { k } else { ids.len() - 1 - k };
                    q[v as usize] = target[kk];
                }
            }
            q
        })
        .collect();
    let action = GraphAction::explicit(group, graph, names, full)?;
    Ok((action, (0..n as u32).collect()))
}

/// For a finite group acting on a finite graph `S`: the graph on `G × S`
/// with `(g1, s1) ~ (g2, s2)` iff `d_S(s1, s2) <= 1`, the free action
/// `g (g', s) = (g g', g s)`, and the QI report of `s ↦ (1, s)`.
pub fn to_free_graph_action(action: &GraphAction) -> Result<(GraphAction, QiReport)> {
    let group = action.group();
    let order = match group.family() {
        Family::Finite(t) => t.order(),
        _ => return Err(Error::Unsupported("free graph actions are built for finite groups".into())),
    };
    let (s_graph, s_labels) = match action.kind() {
        ActionKind::Explicit { graph, labels, .. } => (graph.clone(), labels.clone()),
        ActionKind::Point => (Graph::new(1), vec!["*".to_string()]),
        _ => return Err(Error::Unsupported(format!("free graph action of {}", action.describe()))),
    };
    let gens = group.generator_elements();
    let elems: Vec<Element> = Ball::enumerate(group, &gens, u32::MAX, 1 << 20)?.elements().to_vec();
    if elems.len() != order {
        return Err(Error::Consistency("generators do not reach the whole finite group".into()));
    }
    let m = s_graph.len();
    let sd = s_graph.all_pairs();
    let gi: HashMap<&Element, usize> = elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let id = |g: usize, s: usize| g * m + s;
    let mut graph = Graph::new(order * m);
    for g1 in 0..order {
        for s1 in 0..m {
            for g2 in 0..order {
                for s2 in 0..m {
                    if id(g1, s1) < id(g2, s2) && sd[s1][s2] <= 1 {
                        graph.add_edge(id(g1, s1), id(g2, s2));
                    }
                }
            }
        }
    }
    graph.finalize();
    let labels: Vec<String> = (0..order * m)
        .map(|v| format!("({}, {})", elems[v / m], s_labels[v % m]))
        .collect();
    let perms: Vec<Vec<u32>> = gens
        .iter()
        .map(|x| {
            (0..order * m)
                .map(|v| {
                    let g = gi[&group.multiply(x, &elems[v / m])];
                    let s = match action.act(x, &Vertex::Node((v % m) as u32)) {
                        Vertex::Node(s) => s as usize,
                        _ => unreachable!(),
                    };
                    id(g, s) as u32
                })
                .collect()
        })
        .collect();
    let identity_index = gi[&group.identity()];
    let big = graph.all_pairs();
    let mut pairs = Vec::new();
    for s1 in 0..m {
        for s2 in s1 + 1..m {
            pairs.push(PairSample {
                x: s_labels[s1].clone(),
                y: s_labels[s2].clone(),
                d_src: sd[s1][s2] as u64,
                d_tgt: big[id(identity_index, s1)][id(identity_index, s2)] as u64,
            });
        }
    }
    let image: Vec<usize> = (0..m).map(|s| id(identity_index, s)).collect();
    let near = multi_source_bfs(&graph, &image);
    let report = QiReport::from_pairs(&pairs).with_cosurjectivity(
        (0..graph.len()).map(|v| (labels[v].clone(), near[v] as u64)),
    );
    Ok((GraphAction::explicit(group, graph, labels, perms)?, report))
}
