//! Acceptance criteria. Each test is one criterion; expected values come from
//! the small oracles in `oracle`, which share no code with the library beyond
//! element constructors.

use std::time::{Duration, Instant};

use grpact::action::{GraphAction, Vertex};
use grpact::analysis::distortion::distortion_profile;
use grpact::analysis::incompressibility::backward_bound;
use grpact::graph::Graph;
use grpact::group::{Ball, Element, Group, Side, SubgroupEmbedding, Transversal};
use grpact::horoball::{HoroballGraph, ShapeVerdict};
use grpact::hyperbolicity::{delta_thin, DeltaMode};
use grpact::induced::{
    cocycle_violations, dcx_ds_check, equivalence_report, extension_series, Equivalence, InducedSpace, VertexMap,
};
use grpact::metric::{InducedSetup, SubgroupMetric};
use grpact::relative::{hyperbolic_embedding_certificate, RelativeSetup, Verdict};
use grpact::scenario::{builtin, builtin_names, run, RunOptions};

const BUDGET: usize = 1_000_000;

mod oracle {
    use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

    /// BS(1,2) as affine maps `z -> 2^p z + q / 2^SHIFT`, right multiplication
    /// by `a: z -> z + 1` and `b: z -> 2z` and their inverses.
    const SHIFT: u32 = 40;

    pub fn bs12_profile(radius: u32) -> (Vec<u64>, HashMap<i64, u32>) {
        let one: i128 = 1 << SHIFT;
        let compose = |(p, q): (i64, i128), (gp, gq): (i64, i128)| -> (i64, i128) {
            // (f o g)(z) = 2^p (2^gp z + gq) + q
            let scaled = if p >= 0 { gq << p } else { gq >> (-p) };
            (p + gp, scaled + q)
        };
        let gens = [(0, one), (0, -one), (1, 0), (-1, 0)];
        let mut dist: HashMap<(i64, i128), u32> = HashMap::new();
        let mut queue = VecDeque::new();
        dist.insert((0, 0), 0);
        queue.push_back((0i64, 0i128));
        while let Some(g) = queue.pop_front() {
            let d = dist[&g];
            if d == radius {
                continue;
            }
            for &x in &gens {
                let h = compose(g, x);
                if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(h) {
                    e.insert(d + 1);
                    queue.push_back(h);
                }
            }
        }
        let mut best = vec![0u64; radius as usize + 1];
        let mut a_len = HashMap::new();
        for (&(p, q), &d) in &dist {
            if p == 0 && q % one == 0 {
                let n = (q / one) as i64;
                a_len.insert(n, d);
                best[d as usize] = best[d as usize].max(n.unsigned_abs());
            }
        }
        for r in 1..best.len() {
            best[r] = best[r].max(best[r - 1]);
        }
        (best, a_len)
    }

    /// Freely reduced words over letters `±1, ±2` of length at most `radius`.
    pub fn free2_words(radius: usize) -> Vec<Vec<i32>> {
        let mut out = vec![vec![]];
        let mut layer = vec![vec![]];
        for _ in 0..radius {
            let mut next = vec![];
            for w in &layer {
                for x in [1, -1, 2, -2] {
                    if w.last() != Some(&-x) {
                        let mut v: Vec<i32> = w.clone();
                        v.push(x);
                        next.push(v);
                    }
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    pub fn free_reduce(letters: impl IntoIterator<Item = i32>) -> Vec<i32> {
        let mut out: Vec<i32> = vec![];
        for x in letters {
            if out.last() == Some(&-x) {
                out.pop();
            } else {
                out.push(x);
            }
        }
        out
    }

    pub fn free_inverse(w: &[i32]) -> Vec<i32> {
        w.iter().rev().map(|x| -x).collect()
    }

    /// Cayley graph of a free-group ball on the given reduced words.
    pub fn free_ball_graph(words: &[Vec<i32>]) -> (usize, Vec<(usize, usize)>) {
        let index: HashMap<&Vec<i32>, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let mut edges = vec![];
        for (i, w) in words.iter().enumerate() {
            if w.is_empty() {
                continue;
            }
            let parent = w[..w.len() - 1].to_vec();
            edges.push((index[&parent], i));
        }
        (words.len(), edges)
    }

    pub fn bfs(adj: &[Vec<usize>], s: usize) -> Vec<u32> {
        let mut d = vec![u32::MAX; adj.len()];
        d[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &v in &adj[u] {
                if d[v] == u32::MAX {
                    d[v] = d[u] + 1;
                    q.push_back(v);
                }
            }
        }
        d
    }

    pub fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
        let mut adj = vec![vec![]; n];
        for &(u, v) in edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    /// Counts depth-0 pairs of the horoball of the given depth that admit a
    /// geodesic climbing at `u`, crossing at most 3 edges, and descending at `v`.
    pub fn horoball_shape(n: usize, edges: &[(usize, usize)], depth: usize) -> (usize, usize) {
        let base = bfs_all(&adjacency(n, edges));
        let id = |v: usize, k: usize| k * n + v;
        let mut hedges = vec![];
        for k in 0..=depth {
            for u in 0..n {
                if k > 0 {
                    hedges.push((id(u, k - 1), id(u, k)));
                }
                for v in u + 1..n {
                    if base[u][v] as u64 <= 1u64 << k {
                        hedges.push((id(u, k), id(v, k)));
                    }
                }
            }
        }
        let adj = adjacency(n * (depth + 1), &hedges);
        let all: Vec<Vec<u32>> = (0..adj.len()).map(|s| bfs(&adj, s)).collect();
        let (mut pairs, mut good) = (0, 0);
        for u in 0..n {
            for v in u + 1..n {
                pairs += 1;
                let d = all[u][v];
                let ok = (0..=depth).any(|ku| {
                    (0..=depth).any(|kv| {
                        let mid = all[id(u, ku)][id(v, kv)];
                        mid <= 3 && ku as u32 + mid + kv as u32 == d
                    })
                });
                good += ok as usize;
            }
        }
        (pairs, good)
    }

    fn bfs_all(adj: &[Vec<usize>]) -> Vec<Vec<u32>> {
        (0..adj.len()).map(|s| bfs(adj, s)).collect()
    }

    /// All geodesics from `s` to `t`, as vertex sets.
    fn geodesics(adj: &[Vec<usize>], d: &[Vec<u32>], s: usize, t: usize) -> Vec<HashSet<usize>> {
        if s == t {
            return vec![HashSet::from([s])];
        }
        let mut out = vec![];
        for &v in &adj[s] {
            if d[v][t] + 1 == d[s][t] {
                for mut rest in geodesics(adj, d, v, t) {
                    rest.insert(s);
                    out.push(rest);
                }
            }
        }
        out
    }

    /// Thin-triangle constant over every triangle and every choice of
    /// geodesic sides.
    pub fn all_geodesic_delta(n: usize, edges: &[(usize, usize)]) -> u32 {
        let adj = adjacency(n, edges);
        let d = bfs_all(&adj);
        let mut memo: BTreeMap<(usize, usize), Vec<HashSet<usize>>> = BTreeMap::new();
        let mut geo = |s: usize, t: usize| memo.entry((s, t)).or_insert_with(|| geodesics(&adj, &d, s, t)).clone();
        let near = |p: usize, a: &HashSet<usize>, b: &HashSet<usize>| {
            a.iter().chain(b.iter()).map(|&q| d[p][q]).min().unwrap_or(u32::MAX)
        };
        let mut delta = 0;
        for x in 0..n {
            for y in x..n {
                for z in y..n {
                    for sxy in geo(x, y) {
                        for syz in geo(y, z) {
                            for szx in geo(z, x) {
                                for (side, o1, o2) in [(&sxy, &syz, &szx), (&syz, &szx, &sxy), (&szx, &sxy, &syz)] {
                                    for &p in side {
                                        delta = delta.max(near(p, o1, o2));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        delta
    }

    /// `d_{C,X}` on `Z^2 x| Z/2` with `X = {a, b, t}` and the diagonal
    /// `<(1,1)>` carrying `scale` times its word metric, by Dijkstra on a box.
    pub fn inversion_diagonal_ratio(scale: u64, radius: u64) -> f64 {
        use std::cmp::Reverse;
        use std::collections::BinaryHeap;
        let lim = 3 * radius as i64 + 2;
        let mut dist: HashMap<(i64, i64, bool), u64> = HashMap::new();
        let mut heap = BinaryHeap::from([Reverse((0u64, (0i64, 0i64, false)))]);
        while let Some(Reverse((d, g))) = heap.pop() {
            if dist.contains_key(&g) || d > radius {
                continue;
            }
            dist.insert(g, d);
            let (x, y, f) = g;
            let s = if f { -1 } else { 1 };
            let steps = [
                ((x + s, y, f), 1),
                ((x - s, y, f), 1),
                ((x, y + s, f), 1),
                ((x, y - s, f), 1),
                ((x, y, !f), 1),
                ((x + s, y + s, f), scale),
                ((x - s, y - s, f), scale),
            ];
            for (h, w) in steps {
                if h.0.abs() <= lim && h.1.abs() <= lim && !dist.contains_key(&h) {
                    heap.push(Reverse((d + w, h)));
                }
            }
        }
        dist.iter()
            .filter(|(&(x, y, f), &d)| !f && x == y && d > 0)
            .map(|(&(x, _, _), &d)| (scale * x.unsigned_abs()) as f64 / d as f64)
            .fold(0.0, f64::max)
    }
}

fn free_el(w: &[i32]) -> Element {
    Element::Free(w.to_vec())
}

fn line_space(g: &Group, x: &str, h: SubgroupEmbedding, shifts: &[i64]) -> InducedSpace {
    let line = GraphAction::line(h.subgroup(), shifts).unwrap();
    InducedSpace::new(
        g,
        vec![g.element(x).unwrap()],
        vec![Transversal::canonical(h)],
        vec![Vertex::Int(0)],
        vec![line],
    )
    .unwrap()
}

fn report(n: u32, failures: &[String]) {
    if failures.is_empty() {
        println!("criterion {n}: PASS");
    } else {
        println!("criterion {n}: FAIL");
        for f in failures {
            println!("  {f}");
        }
    }
    assert!(failures.is_empty(), "criterion {n} failed: {failures:?}");
}

#[test]
fn criterion_01_bs12_distortion_profile() {
    const FROZEN: [u64; 12] = [0, 1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 48];
    let (oracle, a_len) = oracle::bs12_profile(11);
    assert_eq!(oracle, FROZEN);

    let t = Instant::now();
    let g = Group::baumslag_solitar(2).unwrap();
    let h = SubgroupEmbedding::base_translations(&g).unwrap();
    let p = distortion_profile(&h, &g.generator_elements(), &SubgroupMetric::word(), 11, BUDGET).unwrap();
    let elapsed = t.elapsed();

    let mut fails = vec![];
    let rows: Vec<u64> = p.rows.iter().map(|r| r.value).collect();
    if rows != FROZEN {
        fails.push(format!("profile {rows:?}"));
    }
    for k in 1..=5u32 {
        let n = 1i64 << k;
        match a_len.get(&n) {
            Some(&len) if len <= 2 * k + 1 => {}
            other => fails.push(format!("|a^{n}| = {other:?} > {}", 2 * k + 1)),
        }
        let row = &p.rows[(2 * k + 1) as usize];
        if row.value < n as u64 {
            fails.push(format!("row {} = {} < 2^{k}", row.r, row.value));
        }
    }
    if !p.certified {
        fails.push("profile not certified".into());
    }
    if elapsed >= Duration::from_secs(30) {
        fails.push(format!("took {elapsed:?}"));
    }
    report(1, &fails);
}

#[test]
fn criterion_02_vfree_collapse() {
    let t = Instant::now();
    let g = Group::f2_semidirect_z2();
    let h = SubgroupEmbedding::unflipped(&g).unwrap();
    let space = line_space(&g, "t", h, &[1, 0]).with_stabilizer_sample(1, 20).unwrap();
    let id = g.identity();
    let origin = space.pair(0, &id, Vertex::Int(0)).unwrap();
    let t_el = g.element("t").unwrap();

    let mut fails = vec![];
    for n in -20i64..=20 {
        let p = space.pair(0, &id, Vertex::Int(n)).unwrap();
        // explicit path (H, n) = a^n ~ a^n t = t b^n ~ t ~ 1 = (H, 0)
        let an = g.pow(&g.element("a").unwrap(), n);
        let path = [an.clone(), g.multiply(&an, &t_el), t_el.clone(), id.clone()];
        let pts: Vec<_> = path.iter().map(|e| space.point(e).unwrap()).collect();
        if pts[0] != p || pts[3] != origin || pts[1] != pts[2] {
            fails.push(format!("explicit path for n = {n} does not close up"));
        }
        match space.search_distance(&p, &origin, 2, BUDGET).unwrap() {
            Some(d) if d <= 2 => {}
            other => fails.push(format!("d_S((H,{n}),(H,0)) = {other:?}")),
        }
        let line = space.action(0);
        if line.distance(&Vertex::Int(n), &Vertex::Int(0)) != Some(n.unsigned_abs()) {
            fails.push(format!("d_R({n}, 0) != {}", n.abs()));
        }
    }
    let ball = space.build_ball(3, BUDGET).unwrap();
    let s = extension_series(&space, 0, &[5, 10, 20], &ball, 4.0, 100_000).unwrap();
    if s.verdict != Verdict::Fail {
        fails.push(format!("extension verdict {:?}", s.verdict));
    }
    let last = &s.rows.last().unwrap().1;
    match &last.witnesses.compress {
        Some(w) if w.d_tgt <= 2 && w.d_src >= 20 => {}
        w => fails.push(format!("compress witness {w:?}")),
    }
    let elapsed = t.elapsed();
    if elapsed >= Duration::from_secs(10) {
        fails.push(format!("took {elapsed:?}"));
    }
    report(2, &fails);
}

#[test]
fn criterion_03_induced_metric_is_word_metric() {
    let g = Group::free(2);
    let h = SubgroupEmbedding::free_letters(&g, &[0]).unwrap();
    let setup = InducedSetup::new(&g, vec![g.element("b").unwrap()], vec![h], vec![SubgroupMetric::word()]).unwrap();
    let ball = setup.induced_ball(4, BUDGET).unwrap();
    let words = oracle::free2_words(4);

    let mut fails = vec![];
    if ball.len() != words.len() {
        fails.push(format!("{} points, oracle {}", ball.len(), words.len()));
    }
    for w in &words {
        match ball.norm(&free_el(w)) {
            Some(m) if m.certified && m.value.finite() == Some(w.len() as u64) => {}
            other => fails.push(format!("{w:?}: {other:?} vs {}", w.len())),
        }
    }
    let inner = oracle::free2_words(2);
    for u in &inner {
        for v in &inner {
            let q = oracle::free_reduce(oracle::free_inverse(u).into_iter().chain(v.iter().copied()));
            match ball.distance(&free_el(u), &free_el(v)) {
                Some(m) if m.value.finite() == Some(q.len() as u64) => {}
                other => fails.push(format!("d({u:?}, {v:?}) = {other:?} vs {}", q.len())),
            }
        }
    }
    report(3, &fails);
}

#[test]
fn criterion_04_cocycle_identity() {
    let mut fails = vec![];

    let f2 = Group::free(2);
    let a = SubgroupEmbedding::free_letters(&f2, &[0]).unwrap();
    let cayley = GraphAction::cayley(a.subgroup());
    let free_product = InducedSpace::new(
        &f2,
        vec![f2.element("b").unwrap()],
        vec![Transversal::canonical(a)],
        vec![cayley.default_base()],
        vec![cayley],
    )
    .unwrap();

    let v = Group::f2_semidirect_z2();
    let h = SubgroupEmbedding::unflipped(&v).unwrap();
    let vfree = line_space(&v, "t", h, &[1, 0]);

    for (name, space) in [("free product", &free_product), ("vfree", &vfree)] {
        let g = space.group();
        let els = Ball::enumerate(g, &g.generator_elements(), 3, BUDGET).unwrap();
        let els = els.elements();
        let bad = cocycle_violations(space, 0, els).unwrap();
        if !bad.is_empty() {
            fails.push(format!("{name}: {} violations, first {:?}", bad.len(), bad[0]));
        }
        // alpha(g, a) = t(ga)^-1 g t(a), recomputed from the transversal
        let tr = space.transversal(0);
        let alpha = |x: &Element, y: &Element| {
            let t_xy = tr.rep(&g.multiply(x, y));
            g.multiply(&g.inverse(&t_xy), &g.multiply(x, &tr.rep(y)))
        };
        let mut count = 0;
        for f in els {
            for x in els {
                for y in els {
                    let lhs = alpha(&g.multiply(f, x), y);
                    let rhs = g.multiply(&alpha(f, &g.multiply(x, y)), &alpha(x, y));
                    if lhs != rhs || space.alpha(0, x, y).unwrap() != alpha(x, y) {
                        count += 1;
                    }
                }
            }
        }
        if count > 0 {
            fails.push(format!("{name}: {count} oracle violations"));
        }
    }
    report(4, &fails);
}

#[test]
fn criterion_05_horoball_geodesic_shape() {
    let mut fails = vec![];
    let c16: Vec<(usize, usize)> = (0..16).map(|i| (i, (i + 1) % 16)).collect();
    let words = oracle::free2_words(3);
    let (n_f2, f2_edges) = oracle::free_ball_graph(&words);
    for (name, n, edges) in [("C16", 16, c16), ("free(2) radius 3", n_f2, f2_edges)] {
        let (pairs, good) = oracle::horoball_shape(n, &edges, 5);
        if good != pairs {
            fails.push(format!("{name}: oracle {good}/{pairs}"));
        }
        let hb = HoroballGraph::build(&Graph::from_edges(n, edges), &[], 5).unwrap();
        let r = hb.geodesic_shape_check();
        if r.verdict != ShapeVerdict::Pass || r.passing != r.pairs || r.pairs != pairs {
            fails.push(format!("{name}: {:?} {}/{}", r.verdict, r.passing, r.pairs));
        }
    }
    report(5, &fails);
}

#[test]
fn criterion_06_delta() {
    const C12_ORACLE: u32 = 3;
    let mut fails = vec![];

    let words = oracle::free2_words(6);
    let (n, edges) = oracle::free_ball_graph(&words);
    let r = delta_thin(&Graph::from_edges(n, edges), DeltaMode::Exhaustive).unwrap();
    if r.delta != 0 {
        fails.push(format!("free(2) radius 6: delta {}", r.delta));
    }

    let c12: Vec<(usize, usize)> = (0..12).map(|i| (i, (i + 1) % 12)).collect();
    let oracle = oracle::all_geodesic_delta(12, &c12);
    assert_eq!(oracle, C12_ORACLE);
    let r = delta_thin(&Graph::from_edges(12, c12), DeltaMode::Exhaustive).unwrap();
    if r.delta > C12_ORACLE + 1 || r.delta + 1 < C12_ORACLE {
        fails.push(format!("C12: delta {} vs oracle {C12_ORACLE}", r.delta));
    }
    report(6, &fails);
}

#[test]
fn criterion_07_equivalence_maps() {
    let mut fails = vec![];
    let g = Group::free(2);
    let h = SubgroupEmbedding::free_letters(&g, &[0]).unwrap();
    let el = |s: &str| g.element(s).unwrap();
    let build = |t: Transversal, shift: i64| {
        let line = GraphAction::line(h.subgroup(), &[shift]).unwrap();
        InducedSpace::new(&g, vec![el("b")], vec![t], vec![Vertex::Int(0)], vec![line]).unwrap()
    };
    let canonical = Transversal::canonical(h.clone());
    let src = build(canonical.clone(), 1);

    let choices = [
        vec![("b", "b a")],
        vec![("b^-1", "b^-1 a^-3"), ("b a", "b a^2")],
    ];
    for c in &choices {
        let t = c.iter().fold(canonical.clone(), |t, (k, v)| t.with_choice(&el(k), el(v)));
        let dst = build(t, 1);
        let q = equivalence_report(&src, &dst, &Equivalence::Transversal, 3, 5, 1, BUDGET).unwrap();
        if q.equivariance_defect != 0 || q.upper_ratio > 1.0 || q.pairs == 0 {
            fails.push(format!(
                "phi1 {c:?}: defect {}, Lipschitz {}, {} pairs",
                q.equivariance_defect, q.upper_ratio, q.pairs
            ));
        }
    }

    let doubled = build(canonical, 2);
    let rho = Equivalence::Action(vec![VertexMap::Affine { mul: 2, add: 0 }]);
    let q = equivalence_report(&src, &doubled, &rho, 4, 8, 1, BUDGET).unwrap();
    if !(1.8..=2.2).contains(&q.mult_constant) {
        fails.push(format!("phi2 C = {}", q.mult_constant));
    }
    report(7, &fails);
}

#[test]
fn criterion_08_dcx_below_ds() {
    let g = Group::free(2);
    let h = SubgroupEmbedding::free_letters(&g, &[0]).unwrap();
    let cayley = GraphAction::cayley(h.subgroup());
    let x = vec![g.element("b").unwrap()];
    let space = InducedSpace::new(
        &g,
        x.clone(),
        vec![Transversal::canonical(h.clone())],
        vec![cayley.default_base()],
        vec![cayley],
    )
    .unwrap();
    let setup = InducedSetup::new(&g, x, vec![h], vec![SubgroupMetric::word()]).unwrap();
    let metric = setup.induced_ball(8, BUDGET).unwrap();
    let sball = space.build_ball(8, BUDGET).unwrap();
    let words = oracle::free2_words(4);
    let els: Vec<Element> = words.iter().map(|w| free_el(w)).collect();
    let r = dcx_ds_check(&space, &sball, &metric, &els).unwrap();

    let mut fails = vec![];
    if !r.violations.is_empty() {
        fails.push(format!("{} violations, first {:?}", r.violations.len(), r.violations[0]));
    }
    if r.pairs != els.len() * els.len() {
        fails.push(format!("{} certified pairs of {}", r.pairs, els.len() * els.len()));
    }
    // oracle side: d_{C,X} is the word length of g1^-1 g2
    for u in &words {
        for v in &words {
            let q = oracle::free_reduce(oracle::free_inverse(u).into_iter().chain(v.iter().copied()));
            let ds = sball.norm(&space.point(&free_el(&q)).unwrap()).and_then(|m| m.value.finite());
            if ds.is_none_or(|d| (q.len() as u64) > d) {
                fails.push(format!("oracle: |{q:?}| = {} vs d_S {ds:?}", q.len()));
            }
        }
    }
    report(8, &fails);
}

#[test]
fn criterion_09_backward_bound() {
    let g = Group::abelian_inversion(2);
    let diagonal = SubgroupEmbedding::lattice(&g, vec![vec![1, 1]]).unwrap();
    let z2 = SubgroupEmbedding::lattice(&g, vec![vec![1, 0], vec![0, 1]]).unwrap();
    let setup = InducedSetup::new(&g, g.generator_elements(), vec![diagonal], vec![SubgroupMetric::scaled(3)]).unwrap();
    let mut fails = vec![];
    let mut ratios = vec![];
    for r in 3..=5u64 {
        let b = backward_bound(&setup, &z2, r, BUDGET).unwrap();
        let expected = oracle::inversion_diagonal_ratio(3, r);
        if b.ratio.max_ratio != expected {
            fails.push(format!("R = {r}: ratio {} vs oracle {expected}", b.ratio.max_ratio));
        }
        if !b.holds || b.ratio.max_ratio > b.bound {
            fails.push(format!("R = {r}: ratio {} > M D + 1 = {}", b.ratio.max_ratio, b.bound));
        }
        ratios.push(b.ratio.max_ratio);
    }
    if ratios.windows(2).any(|w| w[0] != w[1]) {
        fails.push(format!("ratios not stable: {ratios:?}"));
    }
    report(9, &fails);
}

#[test]
fn criterion_10_projection_lipschitz_and_certificate() {
    let mut fails = vec![];
    let g = Group::free(2);
    let h = SubgroupEmbedding::free_letters(&g, &[0]).unwrap();
    let x = vec![g.element("b").unwrap()];
    let rel = RelativeSetup::new(&g, x.clone(), vec![h.clone()]).unwrap();
    let rb = rel.build_ball(4, 8, BUDGET).unwrap();
    let line = GraphAction::line(h.subgroup(), &[2]).unwrap();
    let metrics = [
        SubgroupMetric::word(),
        SubgroupMetric::scaled(3),
        SubgroupMetric::from_action(line, Vertex::Int(0)),
    ];
    for m in metrics {
        let setup = InducedSetup::new(&g, x.clone(), vec![h.clone()], vec![m.clone()]).unwrap();
        let ib = setup.induced_ball(8, BUDGET).unwrap();
        let ks: Vec<f64> = (2..=4)
            .map(|r| rb.projection_lipschitz(0, &m, &ib, r).unwrap().k)
            .collect();
        if !ks.iter().all(|k| k.is_finite()) || ks.windows(2).any(|w| w[1] > w[0]) {
            fails.push(format!("{}: K = {ks:?} at R = 2, 3, 4", m.describe()));
        }
    }

    let z2 = Group::direct_product(Group::free(1), Group::free(1));
    let f = SubgroupEmbedding::factor(&z2, Side::Left).unwrap();
    let direct = RelativeSetup::new(&z2, vec![z2.element("b").unwrap()], vec![f]).unwrap();
    let c = hyperbolic_embedding_certificate(&direct, 3, &[4, 8, 12], BUDGET).unwrap();
    if c.verdict != Verdict::Fail || c.witnesses.is_empty() {
        fails.push(format!("direct product certificate {:?}", c.verdict));
    }
    report(10, &fails);
}

#[test]
fn criterion_11_orbit_growth_on_builtins() {
    let mut fails = vec![];
    let mut checked = 0;
    for name in builtin_names() {
        let r = run(&builtin(name).unwrap(), &RunOptions::default()).unwrap();
        for op in &r.operations {
            for c in op.checks.iter().filter(|c| c.name.contains("M |g|") || c.name.contains("orbit growth")) {
                checked += 1;
                if !c.passed {
                    fails.push(format!("{name} [{} {}] {}: {}", op.index, op.op, c.name, c.detail));
                }
            }
        }
    }
    if checked == 0 {
        fails.push("no orbit checks found".into());
    }
    report(11, &fails);
}
