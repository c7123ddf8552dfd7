//! Actions of groups on graphs by graph automorphisms.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{Ball, Element, Family, Group};
use crate::graph::{Graph, UNREACHED};

/// A vertex of an acted-upon graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Vertex {
    Int(i64),
    Elem(Element),
    Node(u32),
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::Int(n) => write!(f, "{n}"),
            Vertex::Elem(e) => write!(f, "{e}"),
            Vertex::Node(i) => write!(f, "v{i}"),
        }
    }
}

#[derive(Clone, Debug)]
pub enum ActionKind {
    /// Translations of the integer line; `shifts[i]` is the shift of generator `i`.
    Line { shifts: Vec<i64> },
    /// Left multiplication on the Cayley graph for the standard generators.
    Cayley,
    /// The trivial action on a single vertex.
    Point,
    /// A finite graph; `perms[i]` is the vertex permutation of generator `i`.
    Explicit {
        graph: Graph,
        labels: Vec<String>,
        perms: Vec<Vec<u32>>,
    },
    /// `g` acts as `rho(g)` on the inner action; `images[i]` is `rho` of generator `i`.
    Pullback {
        inner: Box<GraphAction>,
        images: Vec<Element>,
    },
}

/// A group acting on a connected graph.
#[derive(Clone, Debug)]
pub struct GraphAction {
    group: Group,
    kind: ActionKind,
}

fn paired_shifts(group: &Group, basis: &[i64]) -> Result<Vec<i64>> {
    match group.family() {
        Family::Free { rank } | Family::FreeAbelian { rank } => {
            if basis.len() != *rank {
                return Err(Error::invalid(format!(
                    "line action needs {rank} shifts, got {}",
                    basis.len()
                )));
            }
            Ok(basis.iter().flat_map(|&s| [s, -s]).collect())
        }
        _ => Err(Error::Unsupported(format!(
            "line action of {} (only free and free abelian groups)",
            group.family_tag()
        ))),
    }
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a.abs(), a.signum(), 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

impl GraphAction {
    /// `H` acting on the line by translations; `basis_shifts[i]` is the shift
    /// of the `i`-th basis generator.
    pub fn line(group: &Group, basis_shifts: &[i64]) -> Result<Self> {
        Ok(Self {
            group: group.clone(),
            kind: ActionKind::Line {
                shifts: paired_shifts(group, basis_shifts)?,
            },
        })
    }

    pub fn cayley(group: &Group) -> Self {
        Self {
            group: group.clone(),
            kind: ActionKind::Cayley,
        }
    }

    pub fn point(group: &Group) -> Self {
        Self {
            group: group.clone(),
            kind: ActionKind::Point,
        }
    }

    /// An action on a finite connected graph given by one vertex permutation
    /// per generator. Checks that each permutation is a graph automorphism
    /// and that inverse generators act by inverse permutations.
    pub fn explicit(group: &Group, graph: Graph, labels: Vec<String>, perms: Vec<Vec<u32>>) -> Result<Self> {
        let n = graph.len();
        if perms.len() != group.generators().len() {
            return Err(Error::invalid(format!(
                "{} permutations for {} generators",
                perms.len(),
                group.generators().len()
            )));
        }
        graph.require_connected("acted-upon graph")?;
        for (gi, p) in perms.iter().enumerate() {
            let mut seen = vec![false; n];
            if p.len() != n || p.iter().any(|&x| (x as usize) >= n || std::mem::replace(&mut seen[x as usize], true)) {
                return Err(Error::invalid(format!("generator {gi} does not permute the vertices")));
            }
            for (u, v) in graph.edges() {
                if !graph.has_edge(p[u] as usize, p[v] as usize) {
                    return Err(Error::invalid(format!("generator {gi} does not preserve edge {u}-{v}")));
                }
            }
            let inv = group.inverse(&group.generators()[gi].element);
            if let Some(j) = group.find_generator(&inv) {
                if (0..n).any(|v| perms[j][p[v] as usize] as usize != v) {
                    return Err(Error::invalid(format!("generators {gi} and {j} are not inverse permutations")));
                }
            }
        }
        let action = Self {
            group: group.clone(),
            kind: ActionKind::Explicit { graph, labels, perms },
        };
        if let Family::Finite(_) = group.family() {
            let ball = Ball::enumerate(group, &group.generator_elements(), u32::MAX, 1 << 20)?;
            for g in ball.elements() {
                for h in group.generator_elements() {
                    let gh = group.multiply(g, &h);
                    for v in 0..n as u32 {
                        let lhs = action.act(&gh, &Vertex::Node(v));
                        let rhs = action.act(g, &action.act(&h, &Vertex::Node(v)));
                        if lhs != rhs {
                            return Err(Error::invalid("permutations do not define an action of the group"));
                        }
                    }
                }
            }
        }
        Ok(action)
    }

    /// `G` acting through a homomorphism `rho: G -> H` given by generator images.
    pub fn pullback(group: &Group, inner: GraphAction, images: Vec<Element>) -> Result<Self> {
        if images.len() != group.generators().len() {
            return Err(Error::invalid("pullback needs one image per generator"));
        }
        for x in &images {
            if !inner.group.contains(x) {
                return Err(Error::invalid(format!("{x} is not in the acting group")));
            }
        }
        Ok(Self {
            group: group.clone(),
            kind: ActionKind::Pullback {
                inner: Box::new(inner),
                images,
            },
        })
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn kind(&self) -> &ActionKind {
        &self.kind
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            ActionKind::Line { shifts } => format!(
                "line translations {:?}",
                shifts.iter().step_by(2).collect::<Vec<_>>()
            ),
            ActionKind::Cayley => format!("Cayley graph of {}", self.group.family_tag()),
            ActionKind::Point => "point".into(),
            ActionKind::Explicit { graph, .. } => format!("explicit graph on {} vertices", graph.len()),
            ActionKind::Pullback { inner, .. } => format!("pullback of {}", inner.describe()),
        }
    }

    /// A default basepoint.
    pub fn default_base(&self) -> Vertex {
        match &self.kind {
            ActionKind::Line { .. } => Vertex::Int(0),
            ActionKind::Cayley => Vertex::Elem(self.group.identity()),
            ActionKind::Point | ActionKind::Explicit { .. } => Vertex::Node(0),
            ActionKind::Pullback { inner, .. } => inner.default_base(),
        }
    }

    /// Image of `g` under the pullback homomorphism.
    pub fn rho(&self, g: &Element) -> Option<Element> {
        match &self.kind {
            ActionKind::Pullback { inner, images } => {
                let word = self.group.word_for(g);
                Some(
                    word.iter()
                        .fold(inner.group.identity(), |acc, &i| inner.group.multiply(&acc, &images[i])),
                )
            }
            _ => None,
        }
    }

    fn shift(&self, shifts: &[i64], g: &Element) -> i64 {
        match g {
            Element::Free(w) => w
                .iter()
                .map(|&l| {
                    let s = shifts[2 * (l.unsigned_abs() as usize - 1)];
                    if l > 0 {
                        s
                    } else {
                        -s
                    }
                })
                .sum(),
            Element::Abelian(v) => v.iter().enumerate().map(|(i, x)| x * shifts[2 * i]).sum(),
            _ => unreachable!("line actions are built only for free and free abelian groups"),
        }
    }

    pub fn act(&self, g: &Element, v: &Vertex) -> Vertex {
        match (&self.kind, v) {
            (ActionKind::Line { shifts }, Vertex::Int(n)) => Vertex::Int(n + self.shift(shifts, g)),
            (ActionKind::Cayley, Vertex::Elem(x)) => Vertex::Elem(self.group.multiply(g, x)),
            (ActionKind::Point, _) => v.clone(),
            (ActionKind::Explicit { perms, .. }, Vertex::Node(i)) => {
                let word = self.group.word_for(g);
                // g = x1 ... xk acts as x1(x2(...xk(v)))
                Vertex::Node(word.iter().rev().fold(*i, |acc, &gi| perms[gi][acc as usize]))
            }
            (ActionKind::Pullback { inner, .. }, _) => {
                inner.act(&self.rho(g).expect("pullback"), v)
            }
            _ => panic!("vertex {v} does not belong to the acted-upon graph"),
        }
    }

    pub fn neighbors(&self, v: &Vertex) -> Vec<Vertex> {
        match (&self.kind, v) {
            (ActionKind::Line { .. }, Vertex::Int(n)) => vec![Vertex::Int(n - 1), Vertex::Int(n + 1)],
            (ActionKind::Cayley, Vertex::Elem(x)) => {
                let mut out: Vec<Vertex> = self
                    .group
                    .generators()
                    .iter()
                    .map(|y| Vertex::Elem(self.group.multiply(x, &y.element)))
                    .filter(|w| w != v)
                    .collect();
                out.sort();
                out.dedup();
                out
            }
            (ActionKind::Point, _) => vec![],
            (ActionKind::Explicit { graph, .. }, Vertex::Node(i)) => {
                graph.neighbors(*i as usize).iter().map(|&j| Vertex::Node(j)).collect()
            }
            (ActionKind::Pullback { inner, .. }, _) => inner.neighbors(v),
            _ => panic!("vertex {v} does not belong to the acted-upon graph"),
        }
    }

    /// Graph distance; `None` only for vertices in different components.
    pub fn distance(&self, u: &Vertex, v: &Vertex) -> Option<u64> {
        match (&self.kind, u, v) {
            (ActionKind::Line { .. }, Vertex::Int(a), Vertex::Int(b)) => Some(a.abs_diff(*b)),
            (ActionKind::Cayley, Vertex::Elem(x), Vertex::Elem(y)) => {
                Some(group_norm(&self.group, &self.group.divide(x, y)))
            }
            (ActionKind::Point, _, _) => Some(0),
            (ActionKind::Explicit { graph, .. }, Vertex::Node(a), Vertex::Node(b)) => {
                let d = graph.bfs(*a as usize)[*b as usize];
                (d != UNREACHED).then_some(d as u64)
            }
            (ActionKind::Pullback { inner, .. }, _, _) => inner.distance(u, v),
            _ => panic!("vertices {u}, {v} do not belong to the acted-upon graph"),
        }
    }

    /// Whether the action on vertices is known to be free.
    pub fn vertex_free(&self) -> bool {
        match &self.kind {
            ActionKind::Line { shifts } => match self.group.family() {
                Family::Free { rank } | Family::FreeAbelian { rank } => {
                    *rank == 0 || (*rank == 1 && shifts[0] != 0)
                }
                _ => false,
            },
            ActionKind::Cayley => true,
            ActionKind::Point => is_trivial(&self.group),
            ActionKind::Explicit { graph, .. } => match self.group.family() {
                Family::Finite(_) => {
                    let gens = self.group.generator_elements();
                    match Ball::enumerate(&self.group, &gens, u32::MAX, 1 << 20) {
                        Ok(ball) => ball.elements().iter().filter(|g| !self.group.is_identity(g)).all(|g| {
                            (0..graph.len() as u32).all(|v| self.act(g, &Vertex::Node(v)) != Vertex::Node(v))
                        }),
                        Err(_) => false,
                    }
                }
                _ => is_trivial(&self.group),
            },
            ActionKind::Pullback { inner, images } => {
                images == &inner.group.generator_elements() && self.group == inner.group && inner.vertex_free()
            }
        }
    }

    /// Some `h` with `h·base = v`, or `None` when `v` is not in the orbit.
    pub fn orbit_element(&self, base: &Vertex, v: &Vertex) -> Result<Option<Element>> {
        match (&self.kind, base, v) {
            (ActionKind::Line { shifts }, Vertex::Int(b), Vertex::Int(x)) => {
                let diff = x - b;
                let gens = self.group.generator_elements();
                let mut g = 0i64;
                let mut elem = self.group.identity();
                for i in (0..shifts.len()).step_by(2) {
                    let s = shifts[i];
                    if s == 0 {
                        continue;
                    }
                    if g == 0 {
                        g = s.abs();
                        elem = self.group.pow(&gens[i], s.signum());
                        continue;
                    }
                    let (ng, p, q) = ext_gcd(g, s);
                    if ng < g {
                        elem = self.group.multiply(&self.group.pow(&elem, p), &self.group.pow(&gens[i], q));
                        g = ng;
                    }
                }
                if diff == 0 {
                    return Ok(Some(self.group.identity()));
                }
                if g == 0 || diff % g != 0 {
                    return Ok(None);
                }
                // prefer a single generator power when one suffices
                for i in (0..shifts.len()).step_by(2) {
                    if shifts[i] != 0 && diff % shifts[i] == 0 {
                        return Ok(Some(self.group.pow(&gens[i], diff / shifts[i])));
                    }
                }
                Ok(Some(self.group.pow(&elem, diff / g)))
            }
            (ActionKind::Cayley, Vertex::Elem(b), Vertex::Elem(x)) => {
                Ok(Some(self.group.multiply(x, &self.group.inverse(b))))
            }
            (ActionKind::Point, _, _) => Ok(Some(self.group.identity())),
            (ActionKind::Explicit { .. }, _, _) if matches!(self.group.family(), Family::Finite(_)) => {
                let ball = Ball::enumerate(&self.group, &self.group.generator_elements(), u32::MAX, 1 << 20)?;
                Ok(ball.elements().iter().find(|g| self.act(g, base) == *v).cloned())
            }
            _ => Err(Error::Unsupported(format!("orbit membership for {}", self.describe()))),
        }
    }

    /// Elements `h` with `|h| <= radius` in the group's word metric fixing `v`.
    pub fn stabilizer_sample(&self, v: &Vertex, radius: u32, budget: usize) -> Result<Vec<Element>> {
        let ball = Ball::enumerate(&self.group, &self.group.generator_elements(), radius, budget)?;
        Ok(ball
            .elements()
            .iter()
            .filter(|h| self.act(h, v) == *v)
            .cloned()
            .collect())
    }

    /// Upper bound `c` with `|h|_Y <= c · d(b, h b) + c0` used to enumerate
    /// `{ h : d(b, h b) <= r }` completely; `None` when no such bound is known.
    pub fn word_ratio(&self) -> Option<u64> {
        match &self.kind {
            ActionKind::Line { shifts } => match self.group.family() {
                Family::Free { rank: 1 } | Family::FreeAbelian { rank: 1 } if shifts[0] != 0 => Some(1),
                _ => None,
            },
            ActionKind::Cayley => Some(1),
            ActionKind::Point | ActionKind::Explicit { .. } => {
                matches!(self.group.family(), Family::Finite(_)).then_some(u64::MAX)
            }
            ActionKind::Pullback { .. } => None,
        }
    }

    /// Checks `1·v = v`, `(gh)·v = g·(h·v)` and edge preservation on the given
    /// samples. Returns the violations found.
    pub fn check_axioms(&self, elements: &[Element], vertices: &[Vertex]) -> Vec<String> {
        let mut bad = Vec::new();
        let id = self.group.identity();
        for v in vertices {
            if self.act(&id, v) != *v {
                bad.push(format!("identity moves {v}"));
            }
            for g in elements {
                let gv = self.act(g, v);
                for h in elements {
                    let lhs = self.act(&self.group.multiply(g, h), v);
                    let rhs = self.act(g, &self.act(h, v));
                    if lhs != rhs {
                        bad.push(format!("({g})({h}) on {v}"));
                    }
                }
                for w in self.neighbors(v) {
                    let gw = self.act(g, &w);
                    if !self.neighbors(&gv).contains(&gw) {
                        bad.push(format!("{g} breaks edge {v}-{w}"));
                    }
                }
            }
        }
        bad
    }
}

fn is_trivial(g: &Group) -> bool {
    match g.family() {
        Family::Finite(t) => t.order() == 1,
        Family::Free { rank } | Family::FreeAbelian { rank } | Family::AbelianInversion { rank } => {
            *rank == 0 && !matches!(g.family(), Family::AbelianInversion { .. })
        }
        _ => false,
    }
}

/// Word length for the group's standard generators.
pub fn group_norm(group: &Group, g: &Element) -> u64 {
    match g {
        Element::Free(w) => w.len() as u64,
        Element::Abelian(v) => v.iter().map(|x| x.unsigned_abs()).sum(),
        _ => {
            let gens = group.generator_elements();
            let m = crate::group::word_metric(group, &gens, g, 64, 1 << 22);
            m.value.finite().expect("element within search radius")
        }
    }
}

/// Parses the adjacency-list graph format:
///
/// ```text
/// # comment
/// v0: v1 v2
/// v1: v0
/// @g0: v0>v1 v1>v2 v2>v0
/// ```
///
/// Vertex lines list neighbors (edges may be listed from either end).
/// `@name:` lines give the vertex permutation of the named generator as
/// `from>to` pairs. Returns the graph, labels in order of first appearance
/// and the permutations by generator name.
pub fn parse_graph_file(text: &str) -> Result<(Graph, Vec<String>, Vec<(String, Vec<u32>)>)> {
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut edges = Vec::new();
    let mut perm_lines = Vec::new();
    let mut intern = |s: &str, labels: &mut Vec<String>| -> usize {
        *ids.entry(s.to_string()).or_insert_with(|| {
            labels.push(s.to_string());
            labels.len() - 1
        })
    };
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (head, rest) = line
            .split_once(':')
            .ok_or_else(|| Error::config(format!("line {}", ln + 1), "expected `vertex: neighbors`"))?;
        let head = head.trim();
        if let Some(name) = head.strip_prefix('@') {
            perm_lines.push((ln + 1, name.trim().to_string(), rest.to_string()));
            continue;
        }
        let u = intern(head, &mut labels);
        for nb in rest.split_whitespace() {
            let v = intern(nb, &mut labels);
            edges.push((u, v));
        }
    }
    let n = labels.len();
    let graph = Graph::from_edges(n, edges);
    let lookup: HashMap<&str, usize> = labels.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let mut perms = Vec::new();
    for (ln, name, rest) in perm_lines {
        let mut p = vec![u32::MAX; n];
        for pair in rest.split_whitespace() {
            let (a, b) = pair
                .split_once('>')
                .ok_or_else(|| Error::config(format!("line {ln}"), format!("expected `from>to`, got `{pair}`")))?;
            let (a, b) = match (lookup.get(a), lookup.get(b)) {
                (Some(&a), Some(&b)) => (a, b),
                _ => return Err(Error::config(format!("line {ln}"), format!("unknown vertex in `{pair}`"))),
            };
            p[a] = b as u32;
        }
        if p.contains(&u32::MAX) {
            return Err(Error::config(format!("line {ln}"), format!("permutation `{name}` is not total")));
        }
        perms.push((name, p));
    }
    Ok((graph, labels, perms))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_action_on_free_group() {
        let f2 = Group::free(2);
        let act = GraphAction::line(&f2, &[1, 0]).unwrap();
        let w = f2.element("a b a^-1 a^3 b").unwrap();
        assert_eq!(act.act(&w, &Vertex::Int(0)), Vertex::Int(3));
        assert!(!act.vertex_free());
        let elems: Vec<Element> = ["a", "b", "a b^-1"].iter().map(|s| f2.element(s).unwrap()).collect();
        assert!(act.check_axioms(&elems, &[Vertex::Int(0), Vertex::Int(5)]).is_empty());
    }

    #[test]
    fn orbit_elements() {
        let z = Group::free(1);
        let act = GraphAction::line(&z, &[2]).unwrap();
        assert!(act.vertex_free());
        assert_eq!(act.orbit_element(&Vertex::Int(0), &Vertex::Int(3)).unwrap(), None);
        let h = act.orbit_element(&Vertex::Int(0), &Vertex::Int(-4)).unwrap().unwrap();
        assert_eq!(act.act(&h, &Vertex::Int(0)), Vertex::Int(-4));
        let z2 = Group::free_abelian(2);
        let act = GraphAction::line(&z2, &[4, 6]).unwrap();
        let h = act.orbit_element(&Vertex::Int(1), &Vertex::Int(3)).unwrap().unwrap();
        assert_eq!(act.act(&h, &Vertex::Int(1)), Vertex::Int(3));
    }

    #[test]
    fn explicit_action_validation() {
        let c3 = Group::cyclic(3);
        let g = Graph::cycle(3);
        let labels = vec!["x".into(), "y".into(), "z".into()];
        let ok = GraphAction::explicit(&c3, g.clone(), labels.clone(), vec![vec![1, 2, 0], vec![2, 0, 1]]).unwrap();
        assert!(ok.vertex_free());
        let bad = GraphAction::explicit(&c3, g, labels, vec![vec![1, 0, 2], vec![1, 0, 2]]);
        assert!(bad.is_err());
    }

    #[test]
    fn graph_file_round_trip() {
        let text = "# triangle\nx: y z\ny: z\n@g1: x>y y>z z>x\n@g2: x>z y>x z>y\n";
        let (g, labels, perms) = parse_graph_file(text).unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(labels, ["x", "y", "z"]);
        assert_eq!(perms[0], ("g1".to_string(), vec![1, 2, 0]));
        assert!(parse_graph_file("x y").is_err());
        assert!(parse_graph_file("x: y\n@g: x>y\n").is_err());
    }

    #[test]
    fn point_action() {
        let z = Group::free(1);
        let p = GraphAction::point(&z);
        assert!(!p.vertex_free());
        assert!(GraphAction::point(&Group::cyclic(1)).vertex_free());
    }
}
