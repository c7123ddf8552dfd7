//! Thin-triangle δ for finite graphs.
//!
//! Every unordered pair `{x, y}` with `x < y` gets one canonical geodesic:
//! walk from `x` towards `y`, always stepping to the smallest-id neighbor one
//! level closer. δ is the least value for which every checked triangle built
//! from these geodesics is δ-thin.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, UNREACHED};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DeltaMode {
    Exhaustive,
    Sampled { count: usize, seed: u64 },
}

/// The worst triangle: its corners and a point on one side that is
/// `delta` away from the other two sides.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub corners: [usize; 3],
    pub point: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaReport {
    pub delta: u32,
    pub mode: DeltaMode,
    pub triangles: usize,
    pub witness: Option<Witness>,
    /// Always `"canonical-geodesic"`, or `"tree"` when the graph is a tree
    /// and all geodesics are unique.
    pub notion: &'static str,
}

struct Geodesics<'a> {
    graph: &'a Graph,
    dist: Vec<Vec<u32>>,
}

impl Geodesics<'_> {
    fn d(&self, u: usize, v: usize) -> u32 {
        self.dist[u][v]
    }

    /// Canonical geodesic between `u` and `v`, listed from `u` to `v`.
    fn path(&self, u: usize, v: usize) -> Vec<usize> {
        let (from, to) = if u < v { (u, v) } else { (v, u) };
        let mut p = vec![from];
        let mut cur = from;
        while cur != to {
            let want = self.dist[to][cur] - 1;
            cur = *self
                .graph
                .neighbors(cur)
                .iter()
                .find(|&&w| self.dist[to][w as usize] == want)
                .expect("geodesic step") as usize;
            p.push(cur);
        }
        if u > v {
            p.reverse();
        }
        p
    }

    /// `(thinness, point)` of the triangle on `x, y, z`.
    fn triangle(&self, x: usize, y: usize, z: usize) -> (u32, usize) {
        let sides = [self.path(x, y), self.path(y, z), self.path(z, x)];
        let mut worst = (0, x);
        for i in 0..3 {
            for &p in &sides[i] {
                let near = sides
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .flat_map(|(_, s)| s.iter())
                    .map(|&q| self.d(p, q))
                    .min()
                    .unwrap_or(0);
                if near > worst.0 {
                    worst = (near, p);
                }
            }
        }
        worst
    }
}

fn is_tree(graph: &Graph) -> bool {
    graph.is_connected() && graph.edge_count() + 1 == graph.len()
}

/// δ over triangles whose corners are all allowed (`allowed = None` allows
/// every vertex).
pub fn delta_thin_restricted(graph: &Graph, mode: DeltaMode, allowed: Option<&[bool]>) -> Result<DeltaReport> {
    graph.require_connected("thin-triangle estimate")?;
    let corners: Vec<usize> = (0..graph.len())
        .filter(|&v| allowed.is_none_or(|a| a[v]))
        .collect();
    if corners.is_empty() {
        return Err(Error::Empty("no triangle corners".into()));
    }
    if is_tree(graph) {
        let k = corners.len();
        return Ok(DeltaReport {
            delta: 0,
            mode,
            triangles: k * k.saturating_sub(1) * k.saturating_sub(2) / 6,
            witness: None,
            notion: "tree",
        });
    }
    let geo = Geodesics {
        graph,
        dist: graph.all_pairs(),
    };
    debug_assert!(geo.dist.iter().all(|r| r.iter().all(|&d| d != UNREACHED)));
    let best = |a: (u32, Witness), b: (u32, Witness)| {
        // larger delta wins; ties go to the lexicographically first triangle
        if b.0 > a.0 || (b.0 == a.0 && (b.1.corners, b.1.point) < (a.1.corners, a.1.point)) {
            b
        } else {
            a
        }
    };
    let zero = (
        0u32,
        Witness {
            corners: [corners[0]; 3],
            point: corners[0],
        },
    );
    let (worst, triangles) = match mode {
        DeltaMode::Exhaustive => {
            let k = corners.len();
            let worst = (0..k)
                .into_par_iter()
                .map(|i| {
                    let mut w = zero;
                    for j in i + 1..k {
                        for l in j + 1..k {
                            let (x, y, z) = (corners[i], corners[j], corners[l]);
                            let (d, p) = geo.triangle(x, y, z);
                            w = best(w, (d, Witness { corners: [x, y, z], point: p }));
                        }
                    }
                    w
                })
                .reduce(|| zero, best);
            (worst, k * k.saturating_sub(1) * k.saturating_sub(2) / 6)
        }
        DeltaMode::Sampled { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let triples: Vec<[usize; 3]> = (0..count)
                .map(|_| {
                    let mut t = [0; 3];
                    for c in &mut t {
                        *c = corners[rng.gen_range(0..corners.len())];
                    }
                    t
                })
                .collect();
            let worst = triples
                .par_iter()
                .map(|t| {
                    let (d, p) = geo.triangle(t[0], t[1], t[2]);
                    (d, Witness { corners: *t, point: p })
                })
                .reduce(|| zero, best);
            (worst, count)
        }
    };
    Ok(DeltaReport {
        delta: worst.0,
        mode,
        triangles,
        witness: (worst.0 > 0).then_some(worst.1),
        notion: "canonical-geodesic",
    })
}

pub fn delta_thin(graph: &Graph, mode: DeltaMode) -> Result<DeltaReport> {
    delta_thin_restricted(graph, mode, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cycles() {
        assert_eq!(delta_thin(&Graph::cycle(3), DeltaMode::Exhaustive).unwrap().delta, 0);
        assert_eq!(delta_thin(&Graph::cycle(12), DeltaMode::Exhaustive).unwrap().delta, 3);
    }

    #[test]
    fn trees_are_zero() {
        let r = delta_thin(&Graph::path(9), DeltaMode::Exhaustive).unwrap();
        assert_eq!(r.delta, 0);
        assert_eq!(r.notion, "tree");
    }

    #[test]
    fn sampled_is_a_lower_bound() {
        let g = Graph::cycle(10);
        let ex = delta_thin(&g, DeltaMode::Exhaustive).unwrap().delta;
        let s = delta_thin(&g, DeltaMode::Sampled { count: 50, seed: 3 }).unwrap().delta;
        assert!(s <= ex);
    }

    #[test]
    fn disconnected_rejected() {
        let g = Graph::from_edges(3, [(0, 1)]);
        assert!(delta_thin(&g, DeltaMode::Exhaustive).is_err());
    }
}
