//! Finite unit-edge graphs, breadth-first search and DOT export.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

pub const UNREACHED: u32 = u32::MAX;

/// Undirected simple graph with unit edges on vertices `0..n`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Self {
            adj: vec![Vec::new(); n],
        }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Self::new(n);
        for (u, v) in edges {
            g.add_edge(u, v);
        }
        g.finalize();
        g
    }

    /// Path graph `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Self {
        Self::from_edges(n, (1..n).map(|i| (i - 1, i)))
    }

    /// Cycle on `n >= 3` vertices.
    pub fn cycle(n: usize) -> Self {
        Self::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    pub fn add_vertex(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    /// Adds an edge; loops are ignored. Call [`Graph::finalize`] afterwards
    /// to sort and deduplicate adjacency lists.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        if u != v {
            self.adj[u].push(v as u32);
            self.adj[v].push(u as u32);
        }
    }

    pub fn finalize(&mut self) {
        for a in &mut self.adj {
            a.sort_unstable();
            a.dedup();
        }
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&(v as u32)).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, a)| {
            a.iter()
                .filter(move |&&v| (v as usize) > u)
                .map(move |&v| (u, v as usize))
        })
    }

    /// BFS distances from `src`; [`UNREACHED`] for other components.
    pub fn bfs(&self, src: usize) -> Vec<u32> {
        self.bfs_bounded(src, u32::MAX)
    }

    /// BFS that stops expanding at depth `limit`.
    pub fn bfs_bounded(&self, src: usize, limit: u32) -> Vec<u32> {
        let mut dist = vec![UNREACHED; self.len()];
        dist[src] = 0;
        let mut queue = VecDeque::from([src as u32]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u as usize];
            if du >= limit {
                continue;
            }
            for &v in &self.adj[u as usize] {
                if dist[v as usize] == UNREACHED {
                    dist[v as usize] = du + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// BFS tree in which every vertex's parent is its smallest-id neighbor one
    /// level closer to `src`. Returns `(dist, parent)`.
    pub fn canonical_bfs(&self, src: usize) -> (Vec<u32>, Vec<u32>) {
        let dist = self.bfs(src);
        let parent = (0..self.len())
            .map(|v| {
                if v == src || dist[v] == UNREACHED {
                    UNREACHED
                } else {
                    *self.adj[v]
                        .iter()
                        .find(|&&u| dist[u as usize] + 1 == dist[v])
                        .expect("bfs parent")
                }
            })
            .collect();
        (dist, parent)
    }

    /// Distances between all pairs, computed in parallel over sources.
    pub fn all_pairs(&self) -> Vec<Vec<u32>> {
        (0..self.len()).into_par_iter().map(|s| self.bfs(s)).collect()
    }

    /// Connected components as a vertex-to-component map plus the count.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let mut comp = vec![usize::MAX; self.len()];
        let mut count = 0;
        for s in 0..self.len() {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = count;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &v in &self.adj[u] {
                    if comp[v as usize] == usize::MAX {
                        comp[v as usize] = count;
                        stack.push(v as usize);
                    }
                }
            }
            count += 1;
        }
        (comp, count)
    }

    pub fn is_connected(&self) -> bool {
        self.len() <= 1 || self.components().1 == 1
    }

    pub fn require_connected(&self, what: &str) -> Result<()> {
        if self.is_connected() {
            Ok(())
        } else {
            Err(Error::Disconnected(what.to_string()))
        }
    }

    /// Largest finite distance, or an error when disconnected.
    pub fn diameter(&self) -> Result<u32> {
        self.require_connected("diameter")?;
        Ok(self
            .all_pairs()
            .iter()
            .flat_map(|r| r.iter().copied())
            .max()
            .unwrap_or(0))
    }

    /// Graph on the same vertices after relabeling by the permutation `perm`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        Graph::from_edges(self.len(), self.edges().map(|(u, v)| (perm[u], perm[v])))
    }
}

/// A finite piece of a graph around a basepoint, with vertex labels and the
/// radius up to which it coincides with the true ball.
#[derive(Clone, Debug)]
pub struct SpaceBall {
    pub graph: Graph,
    pub labels: Vec<String>,
    pub basepoint: usize,
    /// The stored graph equals the induced subgraph on the true ball of this
    /// radius around the basepoint.
    pub certified_radius: u32,
}

impl SpaceBall {
    pub fn len(&self) -> usize {
        self.graph.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    /// Whether a distance `d` between vertices at distances `du`, `dv` from
    /// the basepoint is exact: every geodesic of length `d` then stays inside
    /// the certified ball.
    pub fn pair_certified(&self, du: u32, dv: u32, d: u32) -> bool {
        du != UNREACHED
            && dv != UNREACHED
            && d != UNREACHED
            && du as u64 + dv as u64 + d as u64 <= 2 * self.certified_radius as u64
    }

    pub fn to_dot(&self, name: &str) -> String {
        to_dot(name, &self.graph, &self.labels, None, &[])
    }
}

/// An edge attribute row for DOT export.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeStyle {
    pub u: usize,
    pub v: usize,
    pub label: String,
    pub color: Option<String>,
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Byte-stable DOT rendering. `rank` optionally groups vertices into
/// same-rank layers; `styled` edges replace the plain rendering of the
/// corresponding graph edge.
pub fn to_dot(
    name: &str,
    graph: &Graph,
    labels: &[String],
    rank: Option<&[u32]>,
    styled: &[EdgeStyle],
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "graph \"{}\" {{", dot_escape(name));
    for v in 0..graph.len() {
        let label = labels.get(v).map(String::as_str).unwrap_or("");
        let _ = writeln!(out, "  {v} [label=\"{}\"];", dot_escape(label));
    }
    if let Some(rank) = rank {
        let levels: BTreeSet<u32> = rank.iter().copied().collect();
        for l in levels {
            let members: Vec<String> = (0..graph.len())
                .filter(|&v| rank[v] == l)
                .map(|v| v.to_string())
                .collect();
            let _ = writeln!(out, "  {{ rank=same; {} }}", members.join("; "));
        }
    }
    let styled_set: BTreeSet<(usize, usize)> = styled.iter().map(|e| (e.u.min(e.v), e.u.max(e.v))).collect();
    for (u, v) in graph.edges() {
        if !styled_set.contains(&(u, v)) {
            let _ = writeln!(out, "  {u} -- {v};");
        }
    }
    for e in styled {
        let color = e
            .color
            .as_ref()
            .map(|c| format!(", color=\"{}\"", dot_escape(c)))
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "  {} -- {} [label=\"{}\"{color}];",
            e.u,
            e.v,
            dot_escape(&e.label)
        );
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_distances() {
        let c = Graph::cycle(6);
        assert_eq!(c.bfs(0), vec![0, 1, 2, 3, 2, 1]);
        assert_eq!(c.diameter().unwrap(), 3);
        assert_eq!(c.edge_count(), 6);
    }

    #[test]
    fn canonical_parents_pick_smallest() {
        let c = Graph::cycle(4);
        let (d, p) = c.canonical_bfs(0);
        assert_eq!(d[2], 2);
        assert_eq!(p[2], 1);
    }

    #[test]
    fn disconnected_detected() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]);
        assert!(!g.is_connected());
        assert!(matches!(g.diameter(), Err(Error::Disconnected(_))));
        assert_eq!(g.bfs(0)[2], UNREACHED);
    }

    #[test]
    fn dot_is_stable() {
        let g = Graph::path(5);
        let labels: Vec<String> = (0..5).map(|i| format!("v{i}")).collect();
        let a = to_dot("p", &g, &labels, None, &[]);
        let b = to_dot("p", &g.clone(), &labels, None, &[]);
        assert_eq!(a, b);
        assert!(a.contains("  3 -- 4;"));
    }
}
