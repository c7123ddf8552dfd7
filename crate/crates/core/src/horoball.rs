//! Combinatorial horoballs over finite connected graphs, truncated at a
//! maximal level.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dist::{ExtDist, Measured};
use crate::error::{Error, Result};
use crate::graph::{Graph, UNREACHED};

/// Levels `0..=depth` over `base`; vertex `(v, k)` has id `k * n + v`.
#[derive(Clone, Debug)]
pub struct HoroballGraph {
    base: Graph,
    labels: Vec<String>,
    base_dist: Vec<Vec<u32>>,
    depth: u32,
    graph: Graph,
}

/// Smallest `k` with `2^k >= d`.
pub fn ceil_log2(d: u32) -> u32 {
    if d <= 1 {
        0
    } else {
        32 - (d - 1).leading_zeros()
    }
}

/// `⌈log2 diam⌉ + 2`.
pub fn default_depth(base: &Graph) -> Result<u32> {
    Ok(ceil_log2(base.diameter()?) + 2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeVerdict {
    Pass,
    Fail,
    Uncertified,
}

/// A depth-0 pair with the levels of its vertical-short-vertical geodesic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShapeWitness {
    pub u: usize,
    pub v: usize,
    pub distance: u32,
    /// `(climb at u, middle length, climb at v)`, or `None` if no geodesic
    /// of that shape exists.
    pub shape: Option<(u32, u32, u32)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ShapeReport {
    pub verdict: ShapeVerdict,
    pub pairs: usize,
    pub passing: usize,
    pub failures: Vec<ShapeWitness>,
    /// Pair needing the highest climb.
    pub highest: Option<ShapeWitness>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DepthBoundReport {
    pub pairs: usize,
    pub violations: Vec<(usize, usize, u32, u32)>,
}

impl HoroballGraph {
    pub fn build(base: &Graph, labels: &[String], depth: u32) -> Result<Self> {
        base.require_connected("horoball base")?;
        if base.is_empty() {
            return Err(Error::Empty("horoball base".into()));
        }
        if depth > 30 {
            return Err(Error::invalid("horoball depth above 30"));
        }
        let n = base.len();
        let base_dist = base.all_pairs();
        let mut graph = Graph::new(n * (depth as usize + 1));
        for (u, v) in base.edges() {
            graph.add_edge(u, v);
        }
        for k in 1..=depth as usize {
            let reach = 1u64 << k;
            for u in 0..n {
                graph.add_edge((k - 1) * n + u, k * n + u);
                for v in u + 1..n {
                    if base_dist[u][v] as u64 <= reach {
                        graph.add_edge(k * n + u, k * n + v);
                    }
                }
            }
        }
        graph.finalize();
        let labels = if labels.len() == n {
            labels.to_vec()
        } else {
            (0..n).map(|i| i.to_string()).collect()
        };
        Ok(Self {
            base: base.clone(),
            labels,
            base_dist,
            depth,
            graph,
        })
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn id(&self, v: usize, level: u32) -> usize {
        level as usize * self.base.len() + v
    }

    pub fn level_of(&self, id: usize) -> (usize, u32) {
        let n = self.base.len();
        (id % n, (id / n) as u32)
    }

    fn base_diameter(&self) -> u32 {
        self.base_dist.iter().flat_map(|r| r.iter().copied()).max().unwrap_or(0)
    }

    /// Whether depth-0 distances equal those of the infinite horoball.
    pub fn depth0_certified(&self) -> bool {
        self.depth > ceil_log2(self.base_diameter())
    }

    /// BFS distance between `(u, ku)` and `(v, kv)` in the truncation.
    pub fn distance(&self, u: (usize, u32), v: (usize, u32)) -> Result<Measured> {
        if u.1 > self.depth || v.1 > self.depth || u.0 >= self.base.len() || v.0 >= self.base.len() {
            return Err(Error::invalid("vertex outside the horoball"));
        }
        let d = self.graph.bfs(self.id(u.0, u.1))[self.id(v.0, v.1)];
        let certified = u.1 == 0 && v.1 == 0 && self.depth0_certified();
        Ok(Measured {
            value: ExtDist::new(d as u64),
            certified,
        })
    }

    /// For every depth-0 pair, looks for a geodesic made of a vertical climb,
    /// at most three further edges, and a vertical descent.
    pub fn geodesic_shape_check(&self) -> ShapeReport {
        let n = self.base.len();
        let levels = self.depth + 1;
        // distances from every (u, k) to every vertex
        let from: Vec<Vec<u32>> = (0..n * levels as usize)
            .into_par_iter()
            .map(|s| self.graph.bfs(s))
            .collect();
        let witnesses: Vec<ShapeWitness> = (0..n)
            .into_par_iter()
            .flat_map_iter(|u| {
                let from = &from;
                (u + 1..n).map(move |v| {
                    let d = from[u][v];
                    let mut shape = None;
                    'search: for ku in 0..levels {
                        for kv in 0..levels {
                            let mid = from[self.id(u, ku)][self.id(v, kv)];
                            if mid != UNREACHED && mid <= 3 && ku + mid + kv == d {
                                shape = Some((ku, mid, kv));
                                break 'search;
                            }
                        }
                    }
                    ShapeWitness { u, v, distance: d, shape }
                })
            })
            .collect();
        let pairs = witnesses.len();
        let passing = witnesses.iter().filter(|w| w.shape.is_some()).count();
        let highest = witnesses
            .iter()
            .filter(|w| w.shape.is_some())
            .max_by_key(|w| {
                let (a, _, b) = w.shape.unwrap();
                (a.max(b), std::cmp::Reverse((w.u, w.v)))
            })
            .cloned();
        let failures: Vec<ShapeWitness> = witnesses.into_iter().filter(|w| w.shape.is_none()).collect();
        let verdict = if !self.depth0_certified() {
            ShapeVerdict::Uncertified
        } else if failures.is_empty() {
            ShapeVerdict::Pass
        } else {
            ShapeVerdict::Fail
        };
        ShapeReport {
            verdict,
            pairs,
            passing,
            failures,
            highest,
        }
    }

    /// Checks `d((u,0),(v,0)) <= 2⌈log2 d_Γ(u,v)⌉ + 3` on all depth-0 pairs.
    pub fn depth0_bound_check(&self) -> DepthBoundReport {
        let n = self.base.len();
        let mut violations = Vec::new();
        let mut pairs = 0;
        for u in 0..n {
            let d = self.graph.bfs(u);
            for v in u + 1..n {
                pairs += 1;
                let bound = 2 * ceil_log2(self.base_dist[u][v]) + 3;
                if d[v] > bound {
                    violations.push((u, v, d[v], bound));
                }
            }
        }
        DepthBoundReport { pairs, violations }
    }

    /// DOT export with one rank layer per level.
    pub fn to_dot(&self, name: &str) -> String {
        let labels: Vec<String> = (0..self.graph.len())
            .map(|i| {
                let (v, k) = self.level_of(i);
                format!("({},{k})", self.labels[v])
            })
            .collect();
        let rank: Vec<u32> = (0..self.graph.len()).map(|i| self.level_of(i).1).collect();
        crate::graph::to_dot(name, &self.graph, &labels, Some(&rank), &[])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_vertex_is_a_path() {
        let h = HoroballGraph::build(&Graph::new(1), &[], 3).unwrap();
        assert_eq!(h.graph(), &Graph::path(4));
        assert_eq!(h.distance((0, 0), (0, 3)).unwrap().value, ExtDist::new(3));
    }

    #[test]
    fn edge_has_all_levels() {
        let h = HoroballGraph::build(&Graph::path(2), &[], 2).unwrap();
        assert!(h.graph().has_edge(h.id(0, 1), h.id(1, 1)));
        assert!(h.graph().has_edge(h.id(0, 2), h.id(1, 2)));
        assert_eq!(h.graph().edge_count(), 1 + 2 + 4);
    }

    #[test]
    fn top_level_of_c16_is_complete() {
        let h = HoroballGraph::build(&Graph::cycle(16), &[], 4).unwrap();
        for u in 0..16 {
            for v in u + 1..16 {
                assert!(h.graph().has_edge(h.id(u, 4), h.id(v, 4)));
            }
        }
    }

    #[test]
    fn antipodal_pair_of_c16() {
        // climbing 1 or 2 levels gives 1 + 4 + 1 = 2 + 2 + 2 = 6
        let h = HoroballGraph::build(&Graph::cycle(16), &[], 5).unwrap();
        let d = h.distance((0, 0), (8, 0)).unwrap();
        assert_eq!(d.value, ExtDist::new(6));
        assert!(d.certified);
    }

    #[test]
    fn log_depths() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(8), 3);
        assert_eq!(ceil_log2(9), 4);
        assert_eq!(default_depth(&Graph::cycle(16)).unwrap(), 5);
    }

    #[test]
    fn disconnected_base_rejected() {
        assert!(HoroballGraph::build(&Graph::from_edges(2, []), &[], 1).is_err());
    }

    #[test]
    fn shallow_truncation_is_uncertified() {
        let h = HoroballGraph::build(&Graph::cycle(16), &[], 2).unwrap();
        assert_eq!(h.geodesic_shape_check().verdict, ShapeVerdict::Uncertified);
    }
}
