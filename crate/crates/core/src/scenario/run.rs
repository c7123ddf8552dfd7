use std::path::PathBuf;

use serde::Serialize;
use serde_json::{json, Value};

use crate::action::{parse_graph_file, GraphAction, Vertex};
use crate::analysis::distortion::distortion_profile;
use crate::analysis::incompressibility::{backward_bound, incompressibility_report};
use crate::analysis::orbit::{orbit_growth_check, orbit_growth_check_induced};
use crate::analysis::retract::retract_extension;
use crate::error::{Error, Result};
use crate::graph::{self, Graph};
use crate::group::{word_metric, Ball, Element, Group, SubgroupEmbedding, SubgroupSpec, Transversal};
use crate::horoball::{default_depth, HoroballGraph};
use crate::hyperbolicity::{delta_thin, DeltaMode};
use crate::induced::{
    action_law_violations, check_freeness, cocycle_violations, dcx_ds_check, equivalence_report, extension_series,
    Equivalence, InducedSpace, InducedSpaceBall, VertexMap,
};
use crate::metric::{InducedSetup, SubgroupMetric};
use crate::relative::{hyperbolic_embedding_certificate, RelativeSetup};

use super::{ActionDecl, GraphSource, MapDecl, MetricDecl, Operation, Scenario, SCHEMA_VERSION};

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Stop at the first operation with a failing check.
    pub fail_fast: bool,
    /// Directory against which `file` references are resolved.
    pub base_dir: Option<PathBuf>,
}

/// Command-line overrides applied on top of a scenario document.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    /// Replaces the primary radius of every operation that has one.
    pub radius: Option<u32>,
    /// Replaces the depth of every horoball operation.
    pub depth: Option<u32>,
    pub budget_vertices: Option<usize>,
    pub seed: Option<u64>,
}

impl Overrides {
    pub fn apply(&self, sc: &mut Scenario) -> Result<()> {
        if let Some(b) = self.budget_vertices {
            sc.budget_vertices = b;
        }
        if let Some(s) = self.seed {
            sc.seed = s;
        }
        if let Some(r) = self.radius {
            for op in &mut sc.operations {
                set_radius(op, r);
            }
        }
        if let Some(d) = self.depth {
            for op in &mut sc.operations {
                if let Operation::Horoball { depth, .. } = op {
                    *depth = Some(d);
                }
            }
        }
        sc.validate()
    }
}

fn set_radius(op: &mut Operation, r: u32) {
    let source = |g: &mut GraphSource| match g {
        GraphSource::GroupBall { radius } | GraphSource::SpaceBall { radius } | GraphSource::RelativeBall { radius, .. } => {
            *radius = r
        }
        _ => {}
    };
    match op {
        Operation::Distortion { radius, .. }
        | Operation::RelativeBall { radius, .. }
        | Operation::EmbeddingCertificate { radius, .. }
        | Operation::DcxDs { radius }
        | Operation::Retract { radius, .. }
        | Operation::OrbitGrowth { radius } => *radius = r,
        Operation::InducedMetric { radius, .. } | Operation::BackwardBound { radius, .. } => *radius = r as u64,
        Operation::Horoball { graph, .. } | Operation::Delta { graph, .. } => source(graph),
        _ => {}
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

/// Rows for CSV output.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

macro_rules! row {
    ($($e:expr),* $(,)?) => { vec![$($e.to_string()),*] };
}

#[derive(Clone, Debug, Serialize)]
pub struct OpReport {
    pub index: usize,
    pub op: &'static str,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub report: Value,
    #[serde(skip)]
    pub table: Table,
    #[serde(skip)]
    pub dot: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub scenario: String,
    pub group: String,
    pub seed: u64,
    pub budget_vertices: usize,
    pub passed: bool,
    pub stopped_early: bool,
    pub operations: Vec<OpReport>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One block per operation: a `#` marker row, the header, the rows,
    /// then one row per check.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
        for op in &self.operations {
            let marker = ["#".to_string(), op.index.to_string(), op.op.to_string()];
            w.write_record(&marker).expect("in-memory write");
            if !op.table.header.is_empty() {
                w.write_record(&op.table.header).expect("in-memory write");
                for r in &op.table.rows {
                    w.write_record(r).expect("in-memory write");
                }
            }
            for c in &op.checks {
                let status = if c.passed { "pass" } else { "fail" };
                w.write_record(["check", status, c.name.as_str(), c.detail.as_str()])
                    .expect("in-memory write");
            }
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
    }

    /// Concatenated DOT exports of every operation that built a graph.
    pub fn to_dot(&self) -> String {
        self.operations.iter().filter_map(|o| o.dot.clone()).collect()
    }

    /// Lines of the form `PASS name: detail`.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for op in &self.operations {
            for c in &op.checks {
                let tag = if c.passed { "PASS" } else { "FAIL" };
                out.push_str(&format!("{tag} [{} {}] {}: {}\n", op.index, op.op, c.name, c.detail));
            }
        }
        out
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report serializes")
}

/// Prefixes budget errors with the stage that ran out.
fn staged(stage: &str, e: Error) -> Error {
    match e {
        Error::Budget { stage: inner, budget } => Error::Budget {
            stage: format!("{stage}: {inner}"),
            budget,
        },
        e => e,
    }
}

fn word(group: &Group, w: &str, field: &str) -> Result<Element> {
    group.element(w).map_err(|e| Error::config(field, e.to_string()))
}

fn words(group: &Group, ws: &[String], field: &str) -> Result<Vec<Element>> {
    ws.iter().map(|w| word(group, w, field)).collect()
}

fn load_text(text: &Option<String>, file: &Option<String>, base: &Option<PathBuf>, field: &str) -> Result<String> {
    match (text, file) {
        (Some(t), None) => Ok(t.clone()),
        (None, Some(f)) => {
            let path = match base {
                Some(b) => b.join(f),
                None => PathBuf::from(f),
            };
            std::fs::read_to_string(&path).map_err(|e| Error::config(field, format!("{}: {e}", path.display())))
        }
        _ => Err(Error::config(field, "give exactly one of `text` and `file`")),
    }
}

fn invert(p: &[u32]) -> Vec<u32> {
    let mut q = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        q[j as usize] = i as u32;
    }
    q
}

fn build_action(
    decl: &ActionDecl,
    base: Option<&str>,
    sub: &Group,
    dir: &Option<PathBuf>,
    field: &str,
) -> Result<(GraphAction, Vertex)> {
    let bad_base = |b: &str| Error::config(format!("{field}.base"), format!("`{b}` is not a vertex"));
    Ok(match decl {
        ActionDecl::Line { shifts } => {
            let a = GraphAction::line(sub, shifts)?;
            let v = match base {
                Some(b) => Vertex::Int(b.trim().parse().map_err(|_| bad_base(b))?),
                None => a.default_base(),
            };
            (a, v)
        }
        ActionDecl::Cayley => {
            let a = GraphAction::cayley(sub);
            let v = match base {
                Some(b) => Vertex::Elem(sub.element(b).map_err(|_| bad_base(b))?),
                None => a.default_base(),
            };
            (a, v)
        }
        ActionDecl::Point => {
            let a = GraphAction::point(sub);
            let v = a.default_base();
            (a, v)
        }
        ActionDecl::Graph { text, file } => {
            let text = load_text(text, file, dir, field)?;
            let (g, labels, named) = parse_graph_file(&text)?;
            let mut perms = Vec::new();
            for gen in sub.generators() {
                let direct = named.iter().find(|(n, _)| *n == gen.name).map(|(_, p)| p.clone());
                let p = match direct {
                    Some(p) => p,
                    None => gen
                        .name
                        .strip_suffix("^-1")
                        .and_then(|b| named.iter().find(|(n, _)| n == b))
                        .map(|(_, p)| invert(p))
                        .ok_or_else(|| Error::config(field, format!("no permutation for generator `{}`", gen.name)))?,
                };
                perms.push(p);
            }
            let v = match base {
                Some(b) => Vertex::Node(labels.iter().position(|l| l == b).ok_or_else(|| bad_base(b))? as u32),
                None => Vertex::Node(0),
            };
            (GraphAction::explicit(sub, g, labels, perms)?, v)
        }
    })
}

struct Ctx<'a> {
    sc: &'a Scenario,
    dir: Option<PathBuf>,
    budget: usize,
    group: Group,
    x: Vec<Element>,
    subgroups: Vec<SubgroupEmbedding>,
    actions: Vec<Option<(GraphAction, Vertex)>>,
    metrics: Vec<SubgroupMetric>,
    space: Option<(InducedSpace, InducedSpaceBall)>,
}

impl<'a> Ctx<'a> {
    fn prepare(sc: &'a Scenario, opts: &RunOptions) -> Result<Self> {
        let group = sc.group.build().map_err(|e| match e {
            Error::Config { .. } => e,
            e => Error::config("group", e.to_string()),
        })?;
        let x = words(&group, &sc.x, "x")?;
        let mut subgroups = Vec::new();
        let mut actions = Vec::new();
        let mut metrics = Vec::new();
        for (i, d) in sc.subgroups.iter().enumerate() {
            let field = format!("subgroups[{i}]");
            let h = SubgroupSpec {
                name: d.name.clone(),
                generators: d.generators.clone(),
            }
            .build(&group)
            .map_err(|e| Error::config(format!("{field}.generators"), e.to_string()))?;
            let action = d
                .action
                .as_ref()
                .map(|a| build_action(a, d.base.as_deref(), h.subgroup(), &opts.base_dir, &format!("{field}.action")))
                .transpose()?;
            metrics.push(metric_of(&d.metric, action.as_ref(), &field)?);
            actions.push(action);
            subgroups.push(h);
        }
        let mut ctx = Ctx {
            sc,
            dir: opts.base_dir.clone(),
            budget: sc.budget_vertices,
            group,
            x,
            subgroups,
            actions,
            metrics,
            space: None,
        };
        if let Some(sd) = &sc.space {
            let transversals = ctx.transversals()?;
            let space = ctx.induced_space(transversals, ctx.actions_or_err()?)?;
            let ball = space.build_ball(sd.radius, ctx.budget).map_err(|e| staged("space", e))?;
            ctx.space = Some((space, ball));
        }
        Ok(ctx)
    }

    fn actions_or_err(&self) -> Result<Vec<(GraphAction, Vertex)>> {
        self.actions
            .iter()
            .enumerate()
            .map(|(i, a)| {
                a.clone()
                    .ok_or_else(|| Error::config(format!("subgroups[{i}].action"), "the induced space needs an action"))
            })
            .collect()
    }

    fn transversals(&self) -> Result<Vec<Transversal>> {
        self.sc
            .subgroups
            .iter()
            .zip(&self.subgroups)
            .enumerate()
            .map(|(i, (d, h))| self.with_choices(Transversal::canonical(h.clone()), &d.transversal, &format!("subgroups[{i}].transversal")))
            .collect()
    }

    fn with_choices(&self, mut t: Transversal, choices: &[[String; 2]], field: &str) -> Result<Transversal> {
        for [g, r] in choices {
            let g = word(&self.group, g, field)?;
            let r = word(&self.group, r, field)?;
            let h = t.subgroup();
            if !h.same_left_coset(&g, &r) {
                return Err(Error::config(field, format!("{r} is not in the coset of {g}")));
            }
            if h.member(&g) && !self.group.is_identity(&r) {
                return Err(Error::config(field, "the representative of H itself must be 1"));
            }
            t = t.with_choice(&g, r);
        }
        Ok(t)
    }

    fn induced_space(&self, transversals: Vec<Transversal>, actions: Vec<(GraphAction, Vertex)>) -> Result<InducedSpace> {
        let (acts, bases): (Vec<_>, Vec<_>) = actions.into_iter().unzip();
        let space = InducedSpace::new(&self.group, self.x.clone(), transversals, bases, acts)?;
        match self.sc.space.as_ref().and_then(|s| s.stabilizer_sample) {
            Some([r, p]) => space.with_stabilizer_sample(r, p),
            None => Ok(space),
        }
    }

    fn space(&self) -> Result<&(InducedSpace, InducedSpaceBall)> {
        self.space
            .as_ref()
            .ok_or_else(|| Error::config("space", "this operation needs a `space` section"))
    }

    fn sub_index(&self, name: &str) -> usize {
        self.sc
            .subgroups
            .iter()
            .position(|s| s.name == name)
            .expect("validated subgroup reference")
    }

    fn gens(&self) -> Vec<Element> {
        self.group.generator_elements()
    }

    fn induced_setup(&self, metrics: Vec<SubgroupMetric>) -> Result<InducedSetup> {
        InducedSetup::new(&self.group, self.x.clone(), self.subgroups.clone(), metrics)
    }

    fn relative_setup(&self) -> Result<RelativeSetup> {
        RelativeSetup::new(&self.group, self.x.clone(), self.subgroups.clone())
    }

    fn graph_source(&self, src: &GraphSource) -> Result<(Graph, Vec<String>)> {
        let numbered = |n: usize| (0..n).map(|i| i.to_string()).collect::<Vec<_>>();
        Ok(match src {
            GraphSource::Cycle { n } => (Graph::cycle(*n), numbered(*n)),
            GraphSource::Path { n } => (Graph::path(*n), numbered(*n)),
            GraphSource::GroupBall { radius } => {
                let gens = self.gens();
                let b = Ball::enumerate(&self.group, &gens, *radius, self.budget)?;
                (
                    b.cayley_graph(&self.group, &gens),
                    b.elements().iter().map(|e| e.to_string()).collect(),
                )
            }
            GraphSource::RelativeBall { radius, letter_cap } => {
                let b = self.relative_setup()?.build_ball(*radius, *letter_cap, self.budget)?;
                (b.graph().clone(), b.elements().iter().map(|e| e.to_string()).collect())
            }
            GraphSource::SpaceBall { radius } => {
                let b = self.space()?.0.build_ball(*radius, self.budget)?;
                (b.graph().clone(), b.vertices().iter().map(|v| v.to_string()).collect())
            }
            GraphSource::Graph { text, file } => {
                let text = load_text(text, file, &self.dir, "graph")?;
                let (g, labels, _) = parse_graph_file(&text)?;
                (g, labels)
            }
        })
    }

    fn dot_name(&self, index: usize) -> String {
        format!("{}-{index}", self.sc.name)
    }

    fn run_op(&self, index: usize, op: &Operation) -> Result<OpReport> {
        let budget = self.budget;
        let g = &self.group;
        let mut checks = Vec::new();
        let mut table = Table::default();
        let mut dot = None;
        let report = match op {
            Operation::Distortion {
                subgroup,
                radius,
                witnesses,
            } => {
                let i = self.sub_index(subgroup);
                let h = &self.subgroups[i];
                let gens = self.gens();
                let p = distortion_profile(h, &gens, &self.metrics[i], *radius, budget)?;
                table = Table::new(&["r", "value", "witness", "subgroup_points"]);
                for r in &p.rows {
                    table.push(row![r.r, r.value, r.witness, r.subgroup_points]);
                }
                let mut rows = Vec::new();
                for w in witnesses {
                    let e = word(g, &w.element, "witnesses.element")?;
                    let sub = h
                        .pull_back(&e)
                        .ok_or_else(|| Error::config("witnesses.element", format!("{} is not in {subgroup}", w.element)))?;
                    let len = word_metric(g, &gens, &e, w.max_length, budget);
                    let m = self.metrics[i].norm(h.subgroup(), &sub);
                    let len_ok = len.certified && len.value.finite().is_some_and(|l| l <= w.max_length as u64);
                    checks.push(Check::new(
                        format!("|{}|_X <= {}", w.element, w.max_length),
                        len_ok,
                        format!("BFS length {} (certified: {})", len.value, len.certified),
                    ));
                    checks.push(Check::new(
                        format!("d_H(1, {}) = {}", w.element, w.metric),
                        m == w.metric,
                        format!("measured {m}"),
                    ));
                    rows.push(json!({
                        "element": w.element,
                        "length": len.value.finite(),
                        "certified": len.certified,
                        "metric": m,
                    }));
                }
                json!({ "profile": to_value(&p), "witnesses": rows })
            }
            Operation::InducedMetric {
                radius,
                expect_word_metric,
            } => {
                let setup = self.induced_setup(self.metrics.clone())?;
                let ball = setup.induced_ball(*radius, budget)?;
                table = Table::new(&["element", "dist", "factors"]);
                for p in ball.points() {
                    table.push(row![p.element, p.dist, p.factors]);
                }
                let mut out = json!({
                    "radius": radius,
                    "points": ball.len(),
                    "certified": ball.is_certified(),
                });
                if *expect_word_metric {
                    let mut gens: Vec<Element> = Vec::new();
                    for e in self.x.iter().chain(self.subgroups.iter().flat_map(|h| h.generator_images())) {
                        for y in [e.clone(), g.inverse(e)] {
                            if !g.is_identity(&y) && !gens.contains(&y) {
                                gens.push(y);
                            }
                        }
                    }
                    let wb = Ball::enumerate(g, &gens, *radius as u32, budget)?;
                    let mut compared = 0;
                    let mut mismatches = Vec::new();
                    for (e, l) in wb.iter() {
                        compared += 1;
                        match ball.norm(e) {
                            Some(m) if m.certified && m.value.finite() == Some(l as u64) => {}
                            other => mismatches.push(format!(
                                "{e}: word {l}, induced {}",
                                other.map_or("missing".to_string(), |m| format!("{} (certified: {})", m.value, m.certified))
                            )),
                        }
                    }
                    for (e, d) in ball.iter() {
                        if d <= *radius && wb.length_of(e).map(u64::from) != Some(d) {
                            mismatches.push(format!("{e}: induced {d}, word {:?}", wb.length_of(e)));
                        }
                    }
                    checks.push(Check::new(
                        "d_{C,X} equals the word metric on X and the subgroup generators",
                        mismatches.is_empty(),
                        format!("{compared} elements compared, {} mismatches", mismatches.len()),
                    ));
                    out["compared"] = json!(compared);
                    out["mismatches"] = json!(mismatches);
                }
                out
            }
            Operation::RelativeBall { radius, letter_cap } => {
                let b = self.relative_setup()?.build_ball(*radius, *letter_cap, budget)?;
                let mode = if b.len() <= 400 {
                    DeltaMode::Exhaustive
                } else {
                    DeltaMode::Sampled {
                        count: 20_000,
                        seed: self.sc.seed,
                    }
                };
                let delta = delta_thin(b.graph(), mode)?;
                let tables: Vec<_> = (0..self.subgroups.len()).map(|l| b.properness_table(l)).collect();
                table = Table::new(&["lambda", "r", "count", "subgroup_points"]);
                for t in &tables {
                    for (r, c) in t.counts.iter().enumerate() {
                        table.push(row![t.lambda, r, c, t.subgroup_points]);
                    }
                }
                dot = Some(b.to_dot(&self.dot_name(index)));
                json!({
                    "vertices": b.len(),
                    "edges": b.graph().edge_count(),
                    "delta": to_value(&delta),
                    "tables": to_value(&tables),
                })
            }
            Operation::EmbeddingCertificate { radius, caps, expect } => {
                let c = hyperbolic_embedding_certificate(&self.relative_setup()?, *radius, caps, budget)?;
                table = Table::new(&["lambda", "letter_cap", "r", "count", "subgroup_points"]);
                for t in &c.tables {
                    for (r, n) in t.counts.iter().enumerate() {
                        table.push(row![t.lambda, t.letter_cap, r, n, t.subgroup_points]);
                    }
                }
                if let Some(v) = expect {
                    checks.push(Check::new(
                        format!("certificate verdict is {}", to_value(v).as_str().unwrap_or("")),
                        c.verdict == *v,
                        format!("verdict {:?}, witnesses {:?}, delta {}", c.verdict, c.witnesses, c.delta.delta),
                    ));
                }
                to_value(&c)
            }
            Operation::ProjectionLipschitz {
                subgroup,
                radii,
                metric,
                relative_radius,
                letter_cap,
                expect_non_increasing,
            } => {
                let i = self.sub_index(subgroup);
                let mut metrics = self.metrics.clone();
                if let Some(m) = metric {
                    metrics[i] = metric_of(m, self.actions[i].as_ref(), "metric")?;
                }
                let setup = self.induced_setup(metrics.clone())?;
                let rb = self.relative_setup()?.build_ball(*relative_radius, *letter_cap, budget)?;
                let max_r = radii.iter().copied().max().unwrap_or(1);
                let ib = setup.induced_ball(2 * max_r, budget)?;
                let rows = radii
                    .iter()
                    .map(|&r| rb.projection_lipschitz(i, &metrics[i], &ib, r))
                    .collect::<Result<Vec<_>>>()?;
                table = Table::new(&["radius", "k", "k_num", "k_den", "pairs", "uncertified_pairs"]);
                for r in &rows {
                    table.push(row![r.radius, r.k, r.k_num, r.k_den, r.pairs, r.uncertified_pairs]);
                }
                let ks: Vec<f64> = rows.iter().map(|r| r.k).collect();
                checks.push(Check::new(
                    "projection Lipschitz constant is finite",
                    ks.iter().all(|k| k.is_finite()),
                    format!("K = {ks:?}"),
                ));
                if *expect_non_increasing {
                    checks.push(Check::new(
                        "K is non-increasing in R",
                        ks.windows(2).all(|w| w[1] <= w[0]),
                        format!("K = {ks:?} at R = {radii:?}"),
                    ));
                }
                json!({ "metric": metrics[i].describe(), "rows": to_value(&rows) })
            }
            Operation::LineCollapse {
                subgroup,
                span,
                max_depth,
                expect_at_most,
            } => {
                let (space, _) = self.space()?;
                let i = self.sub_index(subgroup);
                let id = g.identity();
                let origin = space.pair(i, &id, Vertex::Int(0))?;
                table = Table::new(&["n", "d_S", "d_R"]);
                let mut worst: Option<u32> = Some(0);
                let mut rows = Vec::new();
                for n in -*span..=*span {
                    let p = space.pair(i, &id, Vertex::Int(n))?;
                    let d = space.search_distance(&p, &origin, *max_depth, budget)?;
                    let dr = space.action(i).distance(&Vertex::Int(n), &Vertex::Int(0));
                    worst = match (worst, d) {
                        (Some(a), Some(b)) => Some(a.max(b)),
                        _ => None,
                    };
                    table.push(row![n, d.map_or("-".into(), |d| d.to_string()), dr.map_or("-".into(), |d| d.to_string())]);
                    rows.push(json!({ "n": n, "d_s": d, "d_r": dr }));
                }
                if let Some(bound) = expect_at_most {
                    checks.push(Check::new(
                        format!("d_S((H,n),(H,0)) <= {bound} for |n| <= {span}"),
                        worst.is_some_and(|w| w <= *bound),
                        format!("largest distance found {worst:?}"),
                    ));
                }
                json!({ "rows": rows, "max_d_s": worst })
            }
            Operation::Extension {
                subgroup,
                radii,
                threshold,
                expect,
            } => {
                let (space, ball) = self.space()?;
                let i = self.sub_index(subgroup);
                let s = extension_series(space, i, radii, ball, *threshold, budget)?;
                table = Table::new(&["radius", "mult_constant", "upper", "lower", "pairs", "certified", "compress_x", "compress_y"]);
                for (r, q) in &s.rows {
                    let (cx, cy) = q
                        .witnesses
                        .compress
                        .as_ref()
                        .map_or((String::new(), String::new()), |p| (p.x.clone(), p.y.clone()));
                    table.push(row![r, q.mult_constant, q.upper_ratio, q.lower_ratio, q.pairs, q.certified, cx, cy]);
                }
                if let Some(v) = expect {
                    checks.push(Check::new(
                        format!("extension verdict is {}", to_value(v).as_str().unwrap_or("")),
                        s.verdict == *v,
                        format!(
                            "constants {:?}",
                            s.rows.iter().map(|(r, q)| (*r, q.mult_constant)).collect::<Vec<_>>()
                        ),
                    ));
                }
                to_value(&s)
            }
            Operation::Cocycle { length } => {
                let (space, _) = self.space()?;
                let ball = Ball::enumerate(g, &self.gens(), *length, budget)?;
                let n = ball.len();
                let mut out = Vec::new();
                table = Table::new(&["subgroup", "triples", "violations"]);
                for i in 0..space.len() {
                    let v = cocycle_violations(space, i, ball.elements())?;
                    table.push(row![self.subgroups[i].name(), n * n * n, v.len()]);
                    checks.push(Check::new(
                        format!("cocycle identity for {}", self.subgroups[i].name()),
                        v.is_empty(),
                        format!("{} triples, {} violations", n * n * n, v.len()),
                    ));
                    out.push(json!({ "subgroup": self.subgroups[i].name(), "triples": n * n * n, "violations": v }));
                }
                json!(out)
            }
            Operation::ActionLaw { length } => {
                let (space, ball) = self.space()?;
                let els = Ball::enumerate(g, &self.gens(), *length, budget)?;
                let v = action_law_violations(space, els.elements(), ball.vertices())?;
                checks.push(Check::new(
                    "1 acts trivially and (fg)p = f(gp)",
                    v.is_empty(),
                    format!("{} elements, {} points, {} violations", els.len(), ball.len(), v.len()),
                ));
                json!({ "elements": els.len(), "points": ball.len(), "violations": v })
            }
            Operation::Freeness { length, expect_free } => {
                let (space, ball) = self.space()?;
                let els = Ball::enumerate(g, &self.gens(), *length, budget)?;
                let r = check_freeness(space, ball, els.elements())?;
                if let Some(f) = expect_free {
                    checks.push(Check::new(
                        if *f { "action is free" } else { "action is not free" },
                        r.free == *f,
                        format!("{} checks, witness {:?}", r.checked, r.witness),
                    ));
                }
                to_value(&r)
            }
            Operation::DcxDs { radius } => {
                let (space, _) = self.space()?;
                let setup = self.induced_setup(self.metrics.clone())?;
                let metric = setup.induced_ball(2 * *radius as u64, budget)?;
                let sball = space.build_ball(2 * radius, budget)?;
                let els = Ball::enumerate(g, &self.gens(), *radius, budget)?;
                let r = dcx_ds_check(space, &sball, &metric, els.elements())?;
                checks.push(Check::new(
                    "d_{C,X}(g1, g2) <= d_S(g1 p, g2 p)",
                    r.violations.is_empty(),
                    format!(
                        "{} certified pairs, {} equalities, {} violations, {} uncertified",
                        r.pairs,
                        r.equalities,
                        r.violations.len(),
                        r.uncertified
                    ),
                ));
                to_value(&r)
            }
            Operation::Incompressibility {
                radii,
                threshold,
                expect,
            } => {
                let setup = self.induced_setup(self.metrics.clone())?;
                let r = incompressibility_report(&setup, radii, *threshold, budget)?;
                table = Table::new(&["subgroup", "radius", "max_ratio", "num", "den", "witness", "points", "certified"]);
                for (l, rows) in r.rows.iter().enumerate() {
                    for x in rows {
                        table.push(row![
                            self.subgroups[l].name(),
                            x.radius,
                            x.max_ratio,
                            x.num,
                            x.den,
                            x.witness.clone().unwrap_or_default(),
                            x.points,
                            x.certified
                        ]);
                    }
                }
                if let Some(v) = expect {
                    for (l, got) in r.verdicts.iter().enumerate() {
                        checks.push(Check::new(
                            format!("incompressibility verdict for {}", self.subgroups[l].name()),
                            got == v,
                            format!("{got:?}"),
                        ));
                    }
                }
                to_value(&r)
            }
            Operation::BackwardBound { abelian, radius } => {
                let setup = self.induced_setup(self.metrics.clone())?;
                let a = SubgroupEmbedding::from_generators(g, &words(g, abelian, "abelian")?)?;
                let b = backward_bound(&setup, &a, *radius, budget)?;
                checks.push(Check::new(
                    "d_H / d_{C,X} <= M D + 1",
                    b.holds,
                    format!(
                        "M = {}, D = {}, bound {}, ratio {}, {} conjugation violations",
                        b.m,
                        b.d,
                        b.bound,
                        b.ratio.max_ratio,
                        b.conjugation_violations.len()
                    ),
                ));
                to_value(&b)
            }
            Operation::TransversalChange {
                subgroup,
                choices,
                radius,
                target_radius,
                sample_radius,
                expect_defect,
                expect_max_upper,
            } => {
                let (space, _) = self.space()?;
                let i = self.sub_index(subgroup);
                let mut ts: Vec<Transversal> = (0..space.len()).map(|j| space.transversal(j).clone()).collect();
                ts[i] = self.with_choices(ts[i].clone(), choices, "choices")?;
                let dst = self.induced_space(ts, self.actions_or_err()?)?;
                let q = equivalence_report(space, &dst, &Equivalence::Transversal, *radius, *target_radius, *sample_radius, budget)?;
                if let Some(d) = expect_defect {
                    checks.push(Check::new(
                        format!("equivariance defect = {d}"),
                        q.equivariance_defect == *d,
                        format!("{} over {} samples", q.equivariance_defect, q.defect_samples),
                    ));
                }
                if let Some(c) = expect_max_upper {
                    checks.push(Check::new(
                        format!("Lipschitz constant <= {c}"),
                        q.upper_ratio <= *c,
                        format!("{} over {} certified pairs", q.upper_ratio, q.pairs),
                    ));
                }
                to_value(&q)
            }
            Operation::ActionChange {
                subgroup,
                action,
                base,
                map,
                radius,
                target_radius,
                sample_radius,
                expect_constant,
            } => {
                let (space, _) = self.space()?;
                let i = self.sub_index(subgroup);
                let mut actions = self.actions_or_err()?;
                actions[i] = build_action(action, base.as_deref(), self.subgroups[i].subgroup(), &self.dir, "action")?;
                let ts: Vec<Transversal> = (0..space.len()).map(|j| space.transversal(j).clone()).collect();
                let dst = self.induced_space(ts, actions)?;
                let maps: Vec<VertexMap> = (0..space.len())
                    .map(|j| match (j == i, map) {
                        (true, MapDecl::Affine { mul, add }) => VertexMap::Affine { mul: *mul, add: *add },
                        _ => VertexMap::Identity,
                    })
                    .collect();
                let q = equivalence_report(space, &dst, &Equivalence::Action(maps), *radius, *target_radius, *sample_radius, budget)?;
                if let Some([lo, hi]) = expect_constant {
                    checks.push(Check::new(
                        format!("multiplicative constant in [{lo}, {hi}]"),
                        *lo <= q.mult_constant && q.mult_constant <= *hi,
                        format!("{} over {} pairs, defect {}", q.mult_constant, q.pairs, q.equivariance_defect),
                    ));
                }
                to_value(&q)
            }
            Operation::Retract {
                subgroup,
                images,
                radius,
            } => {
                let i = self.sub_index(subgroup);
                let h = &self.subgroups[i];
                let (action, base) = self.actions[i]
                    .clone()
                    .ok_or_else(|| Error::config("subgroup", format!("{subgroup} has no action")))?;
                let imgs = words(g, images, "images")?
                    .iter()
                    .map(|e| {
                        h.pull_back(e)
                            .ok_or_else(|| Error::config("images", format!("{e} is not in {subgroup}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let r = retract_extension(h, &action, &base, imgs, *radius, budget)?;
                let orbit = orbit_growth_check(&r.action, &self.gens(), &base, *radius, budget)?;
                checks.push(Check::new(
                    "the images define a retraction",
                    r.retraction_violations.is_empty(),
                    format!("{} violations", r.retraction_violations.len()),
                ));
                checks.push(Check::new(
                    "orbit growth of the extended action",
                    orbit.passed(),
                    format!("M = {}, {} checked", orbit.m, orbit.checked),
                ));
                json!({ "extension": r.to_json(), "orbit": to_value(&orbit) })
            }
            Operation::Horoball { graph: src, depth, expect } => {
                let (base, labels) = self.graph_source(src)?;
                let depth = match depth {
                    Some(d) => *d,
                    None => default_depth(&base)?,
                };
                let hb = HoroballGraph::build(&base, &labels, depth)?;
                let shape = hb.geodesic_shape_check();
                let bound = hb.depth0_bound_check();
                table = Table::new(&["base_vertices", "depth", "pairs", "passing", "verdict", "bound_violations"]);
                table.push(row![
                    base.len(),
                    depth,
                    shape.pairs,
                    shape.passing,
                    to_value(&shape.verdict).as_str().unwrap_or(""),
                    bound.violations.len()
                ]);
                if let Some(v) = expect {
                    checks.push(Check::new(
                        format!(
                            "vertical, at most 3 horizontal, vertical geodesics: {}",
                            to_value(v).as_str().unwrap_or("")
                        ),
                        shape.verdict == *v,
                        format!("{}/{} pairs, verdict {:?}", shape.passing, shape.pairs, shape.verdict),
                    ));
                }
                dot = Some(hb.to_dot(&self.dot_name(index)));
                json!({
                    "base_vertices": base.len(),
                    "depth": depth,
                    "depth0_certified": hb.depth0_certified(),
                    "shape": to_value(&shape),
                    "depth0_bound": to_value(&bound),
                })
            }
            Operation::Delta {
                graph: src,
                samples,
                expect,
            } => {
                let (gr, labels) = self.graph_source(src)?;
                let mode = match samples {
                    Some(count) => DeltaMode::Sampled {
                        count: *count,
                        seed: self.sc.seed,
                    },
                    None => DeltaMode::Exhaustive,
                };
                let d = delta_thin(&gr, mode)?;
                if let Some(e) = expect {
                    checks.push(Check::new(
                        format!("delta = {e}"),
                        d.delta == *e,
                        format!("delta {} ({}, {} triangles)", d.delta, d.notion, d.triangles),
                    ));
                }
                dot = Some(graph::to_dot(&self.dot_name(index), &gr, &labels, None, &[]));
                json!({ "vertices": gr.len(), "edges": gr.edge_count(), "delta": to_value(&d) })
            }
            Operation::OrbitGrowth { radius } => {
                table = Table::new(&["action", "m", "checked", "skipped", "violations"]);
                let mut out = Vec::new();
                for (i, a) in self.actions.iter().enumerate() {
                    let Some((action, base)) = a else { continue };
                    let sub = self.subgroups[i].subgroup();
                    let r = orbit_growth_check(action, &sub.generator_elements(), base, *radius, budget)?;
                    let name = format!("{} on {}", self.subgroups[i].name(), action.describe());
                    out.push((name, r));
                }
                if let Some((space, ball)) = &self.space {
                    let r = orbit_growth_check_induced(space, ball, *radius, budget)?;
                    out.push(("induced action".to_string(), r));
                }
                for (name, r) in &out {
                    table.push(row![name, r.m, r.checked, r.skipped, r.violations.len()]);
                    checks.push(Check::new(
                        format!("d(b, g b) <= M |g| for {name}"),
                        r.passed(),
                        format!("M = {}, {} checked, {} skipped", r.m, r.checked, r.skipped),
                    ));
                }
                json!(out
                    .iter()
                    .map(|(n, r)| json!({ "action": n, "report": to_value(r) }))
                    .collect::<Vec<_>>())
            }
        };
        Ok(OpReport {
            index,
            op: op.name(),
            passed: checks.iter().all(|c| c.passed),
            checks,
            report,
            table,
            dot,
        })
    }
}

fn metric_of(decl: &MetricDecl, action: Option<&(GraphAction, Vertex)>, field: &str) -> Result<SubgroupMetric> {
    Ok(match decl {
        MetricDecl::Word => SubgroupMetric::word(),
        MetricDecl::Scaled { scale } => SubgroupMetric::scaled(*scale),
        MetricDecl::Action => {
            let (a, b) = action.ok_or_else(|| Error::config(field, "orbit metric needs an action"))?;
            SubgroupMetric::from_action(a.clone(), b.clone())
        }
    })
}

/// Runs every operation of `sc` in order. Budget errors name the stage.
pub fn run(sc: &Scenario, opts: &RunOptions) -> Result<RunReport> {
    sc.validate()?;
    let ctx = Ctx::prepare(sc, opts).map_err(|e| staged("setup", e))?;
    let mut operations = Vec::new();
    let mut passed = true;
    let mut stopped_early = false;
    for (index, op) in sc.operations.iter().enumerate() {
        let out = ctx
            .run_op(index, op)
            .map_err(|e| staged(&format!("operations[{index}] {}", op.name()), e))?;
        passed &= out.passed;
        let failed = !out.passed;
        operations.push(out);
        if failed && opts.fail_fast {
            stopped_early = index + 1 < sc.operations.len();
            break;
        }
    }
    Ok(RunReport {
        schema: SCHEMA_VERSION,
        scenario: sc.name.clone(),
        group: ctx.group.family_tag(),
        seed: sc.seed,
        budget_vertices: sc.budget_vertices,
        passed,
        stopped_early,
        operations,
    })
}
