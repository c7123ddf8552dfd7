//! Versioned JSON scenarios: a group, subgroups with metrics and actions,
//! and a list of measurements with optional expectations.
//!
//! A scenario document looks like
//!
//! ```json
//! {
//!   "schema": 1,
//!   "name": "line-scaling",
//!   "group": { "family": "free", "rank": 2 },
//!   "x": ["b"],
//!   "subgroups": [
//!     { "name": "A", "generators": ["a"], "action": { "kind": "line", "shifts": [1] } }
//!   ],
//!   "space": { "radius": 4 },
//!   "operations": [ { "op": "orbit_growth", "radius": 3 } ]
//! }
//! ```
//!
//! See the README for every operation and its fields.

mod run;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::horoball::ShapeVerdict;
use crate::relative::Verdict;

pub use run::{run, Check, OpReport, Overrides, RunOptions, RunReport, Table};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_BUDGET: usize = 1_000_000;

fn default_budget() -> usize {
    DEFAULT_BUDGET
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema: u32,
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub group: GroupSpec,
    /// Words of `G` forming the relative generating set `X`.
    #[serde(default)]
    pub x: Vec<String>,
    #[serde(default)]
    pub subgroups: Vec<SubgroupDecl>,
    /// The induced-action space, needed by the operations that measure it.
    #[serde(default)]
    pub space: Option<SpaceDecl>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_budget")]
    pub budget_vertices: usize,
    pub operations: Vec<Operation>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubgroupDecl {
    pub name: String,
    /// Words of `G` generating the subgroup.
    pub generators: Vec<String>,
    #[serde(default)]
    pub metric: MetricDecl,
    #[serde(default)]
    pub action: Option<ActionDecl>,
    /// Base vertex of the action: an integer on lines, a vertex label on
    /// graphs. Defaults to the action's natural base.
    #[serde(default)]
    pub base: Option<String>,
    /// Transversal overrides as `[coset element, representative]` pairs.
    #[serde(default)]
    pub transversal: Vec<[String; 2]>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MetricDecl {
    #[default]
    Word,
    Scaled {
        scale: u64,
    },
    /// Orbit metric of the subgroup's action at its base vertex.
    Action,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ActionDecl {
    /// Translations of the integer line, one shift per basis generator.
    Line { shifts: Vec<i64> },
    Cayley,
    Point,
    /// Adjacency-list graph with `@generator:` permutation lines, given
    /// inline or as a path relative to the scenario file.
    Graph {
        #[serde(default)]
        text: Option<String>,
        #[serde(default)]
        file: Option<String>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDecl {
    pub radius: u32,
    /// `[radius, power]` of the stabilizer sample used when the actions
    /// are not free.
    #[serde(default)]
    pub stabilizer_sample: Option<[u32; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GraphSource {
    Cycle { n: usize },
    Path { n: usize },
    /// Cayley graph of the ball of radius `radius` for the standard generators.
    GroupBall { radius: u32 },
    RelativeBall { radius: u32, letter_cap: u32 },
    /// Ball of the induced-action space.
    SpaceBall { radius: u32 },
    Graph {
        #[serde(default)]
        text: Option<String>,
        #[serde(default)]
        file: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MapDecl {
    Identity,
    Affine { mul: i64, add: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessRow {
    pub element: String,
    /// Certified upper bound on `|element|_X`.
    pub max_length: u32,
    /// Exact subgroup-metric value of the element.
    pub metric: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum Operation {
    /// Distortion profile of a subgroup in the standard word metric of `G`.
    Distortion {
        subgroup: String,
        radius: u32,
        #[serde(default)]
        witnesses: Vec<WitnessRow>,
    },
    /// Ball of the induced metric `d_{C,X}`.
    InducedMetric {
        radius: u64,
        /// Require equality with the word metric on `X` plus the subgroup generators.
        #[serde(default)]
        expect_word_metric: bool,
    },
    RelativeBall {
        radius: u32,
        letter_cap: u32,
    },
    EmbeddingCertificate {
        radius: u32,
        caps: Vec<u32>,
        #[serde(default)]
        expect: Option<Verdict>,
    },
    ProjectionLipschitz {
        subgroup: String,
        radii: Vec<u64>,
        #[serde(default)]
        metric: Option<MetricDecl>,
        relative_radius: u32,
        letter_cap: u32,
        #[serde(default)]
        expect_non_increasing: bool,
    },
    /// `d_S((H, n), (H, 0))` for `|n| <= span` on a line action.
    LineCollapse {
        subgroup: String,
        span: i64,
        max_depth: u32,
        #[serde(default)]
        expect_at_most: Option<u32>,
    },
    Extension {
        subgroup: String,
        radii: Vec<u32>,
        threshold: f64,
        #[serde(default)]
        expect: Option<Verdict>,
    },
    /// Cocycle identity over all triples from the ball of radius `length`.
    Cocycle {
        length: u32,
    },
    ActionLaw {
        length: u32,
    },
    Freeness {
        length: u32,
        #[serde(default)]
        expect_free: Option<bool>,
    },
    /// `d_{C,X}(g1, g2) <= d_S(g1 p, g2 p)` over the ball of radius `radius`.
    DcxDs {
        radius: u32,
    },
    Incompressibility {
        radii: Vec<u64>,
        threshold: f64,
        #[serde(default)]
        expect: Option<Verdict>,
    },
    BackwardBound {
        /// Generators of the abelian subgroup normalized up to inversion.
        abelian: Vec<String>,
        radius: u64,
    },
    TransversalChange {
        subgroup: String,
        choices: Vec<[String; 2]>,
        radius: u32,
        target_radius: u32,
        sample_radius: u32,
        #[serde(default)]
        expect_defect: Option<u64>,
        #[serde(default)]
        expect_max_upper: Option<f64>,
    },
    ActionChange {
        subgroup: String,
        action: ActionDecl,
        #[serde(default)]
        base: Option<String>,
        map: MapDecl,
        radius: u32,
        target_radius: u32,
        sample_radius: u32,
        /// Inclusive range for the multiplicative constant.
        #[serde(default)]
        expect_constant: Option<[f64; 2]>,
    },
    /// Extends the subgroup's action along a retraction `G → H` given by
    /// the images of the generators of `G`.
    Retract {
        subgroup: String,
        images: Vec<String>,
        radius: u32,
    },
    Horoball {
        graph: GraphSource,
        #[serde(default)]
        depth: Option<u32>,
        #[serde(default)]
        expect: Option<ShapeVerdict>,
    },
    Delta {
        graph: GraphSource,
        /// Sampled triangles; exhaustive when absent.
        #[serde(default)]
        samples: Option<usize>,
        #[serde(default)]
        expect: Option<u32>,
    },
    /// `d(b, g b) <= M |g|` for every declared action and the induced action.
    OrbitGrowth {
        radius: u32,
    },
}

impl Operation {
    pub fn name(&self) -> &'static str {
        match self {
            Operation::Distortion { .. } => "distortion",
            Operation::InducedMetric { .. } => "induced_metric",
            Operation::RelativeBall { .. } => "relative_ball",
            Operation::EmbeddingCertificate { .. } => "embedding_certificate",
            Operation::ProjectionLipschitz { .. } => "projection_lipschitz",
            Operation::LineCollapse { .. } => "line_collapse",
            Operation::Extension { .. } => "extension",
            Operation::Cocycle { .. } => "cocycle",
            Operation::ActionLaw { .. } => "action_law",
            Operation::Freeness { .. } => "freeness",
            Operation::DcxDs { .. } => "dcx_ds",
            Operation::Incompressibility { .. } => "incompressibility",
            Operation::BackwardBound { .. } => "backward_bound",
            Operation::TransversalChange { .. } => "transversal_change",
            Operation::ActionChange { .. } => "action_change",
            Operation::Retract { .. } => "retract",
            Operation::Horoball { .. } => "horoball",
            Operation::Delta { .. } => "delta",
            Operation::OrbitGrowth { .. } => "orbit_growth",
        }
    }

    /// Radii that must be positive, with their field names.
    fn radii(&self) -> Vec<(&'static str, u64)> {
        let src = |g: &GraphSource| match g {
            GraphSource::GroupBall { radius } | GraphSource::SpaceBall { radius } => vec![("graph.radius", *radius as u64)],
            GraphSource::RelativeBall { radius, letter_cap } => {
                vec![("graph.radius", *radius as u64), ("graph.letter_cap", *letter_cap as u64)]
            }
            GraphSource::Cycle { n } | GraphSource::Path { n } => vec![("graph.n", *n as u64)],
            GraphSource::Graph { .. } => vec![],
        };
        match self {
            Operation::Distortion { radius, .. } => vec![("radius", *radius as u64)],
            Operation::InducedMetric { radius, .. } => vec![("radius", *radius)],
            Operation::RelativeBall { radius, letter_cap } => {
                vec![("radius", *radius as u64), ("letter_cap", *letter_cap as u64)]
            }
            Operation::EmbeddingCertificate { radius, caps, .. } => {
                let mut v = vec![("radius", *radius as u64)];
                v.extend(caps.iter().map(|&c| ("caps", c as u64)));
                v
            }
            Operation::ProjectionLipschitz {
                radii,
                relative_radius,
                letter_cap,
                ..
            } => {
                let mut v: Vec<_> = radii.iter().map(|&r| ("radii", r)).collect();
                v.push(("relative_radius", *relative_radius as u64));
                v.push(("letter_cap", *letter_cap as u64));
                v
            }
            Operation::LineCollapse { max_depth, .. } => vec![("max_depth", *max_depth as u64)],
            Operation::Extension { radii, .. } => radii.iter().map(|&r| ("radii", r as u64)).collect(),
            Operation::Cocycle { length } | Operation::ActionLaw { length } | Operation::Freeness { length, .. } => {
                vec![("length", *length as u64)]
            }
            Operation::DcxDs { radius } | Operation::OrbitGrowth { radius } | Operation::Retract { radius, .. } => {
                vec![("radius", *radius as u64)]
            }
            Operation::Incompressibility { radii, .. } => radii.iter().map(|&r| ("radii", r)).collect(),
            Operation::BackwardBound { radius, .. } => vec![("radius", *radius)],
            Operation::TransversalChange {
                radius, target_radius, ..
            }
            | Operation::ActionChange {
                radius, target_radius, ..
            } => vec![("radius", *radius as u64), ("target_radius", *target_radius as u64)],
            Operation::Horoball { graph, .. } | Operation::Delta { graph, .. } => src(graph),
        }
    }
}

impl Scenario {
    /// Parses and validates a scenario document. Errors name the line and
    /// column or the offending field.
    pub fn from_json(text: &str) -> Result<Self> {
        let sc: Scenario = serde_json::from_str(text)
            .map_err(|e| Error::config(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
        sc.validate()?;
        Ok(sc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema != SCHEMA_VERSION {
            return Err(Error::config(
                "schema",
                format!("unsupported schema {} (expected {SCHEMA_VERSION})", self.schema),
            ));
        }
        if self.name.trim().is_empty() {
            return Err(Error::config("name", "must not be empty"));
        }
        if self.budget_vertices == 0 {
            return Err(Error::config("budget_vertices", "must be positive"));
        }
        if let Some(s) = &self.space {
            if s.radius == 0 {
                return Err(Error::config("space.radius", "must be positive"));
            }
        }
        for (i, s) in self.subgroups.iter().enumerate() {
            if self.subgroups[..i].iter().any(|t| t.name == s.name) {
                return Err(Error::config(format!("subgroups[{i}].name"), format!("duplicate name `{}`", s.name)));
            }
            if s.metric == MetricDecl::Action && s.action.is_none() {
                return Err(Error::config(format!("subgroups[{i}].metric"), "orbit metric needs an action"));
            }
        }
        for (i, op) in self.operations.iter().enumerate() {
            for (field, r) in op.radii() {
                if r == 0 {
                    return Err(Error::config(format!("operations[{i}].{field}"), "must be positive"));
                }
            }
            let sub = match op {
                Operation::Distortion { subgroup, .. }
                | Operation::ProjectionLipschitz { subgroup, .. }
                | Operation::LineCollapse { subgroup, .. }
                | Operation::Extension { subgroup, .. }
                | Operation::TransversalChange { subgroup, .. }
                | Operation::ActionChange { subgroup, .. }
                | Operation::Retract { subgroup, .. } => Some(subgroup),
                _ => None,
            };
            if let Some(name) = sub {
                if !self.subgroups.iter().any(|s| &s.name == name) {
                    return Err(Error::config(
                        format!("operations[{i}].subgroup"),
                        format!("unknown subgroup `{name}`"),
                    ));
                }
            }
        }
        Ok(())
    }
}

const BUILTINS: &[(&str, &str)] = &[
    ("bs12-distortion", include_str!("../../scenarios/bs12-distortion.json")),
    ("vfree-collapse", include_str!("../../scenarios/vfree-collapse.json")),
    ("horoball-shape", include_str!("../../scenarios/horoball-shape.json")),
    ("induced-free-product", include_str!("../../scenarios/induced-free-product.json")),
    ("relative-free-product", include_str!("../../scenarios/relative-free-product.json")),
    ("relative-direct-product", include_str!("../../scenarios/relative-direct-product.json")),
    ("line-scaling", include_str!("../../scenarios/line-scaling.json")),
    ("abelian-inversion", include_str!("../../scenarios/abelian-inversion.json")),
    ("cyclic-retract", include_str!("../../scenarios/cyclic-retract.json")),
    ("thin-triangles", include_str!("../../scenarios/thin-triangles.json")),
];

pub fn builtin_names() -> Vec<&'static str> {
    BUILTINS.iter().map(|(n, _)| *n).collect()
}

/// The raw JSON of a builtin scenario.
pub fn builtin_source(name: &str) -> Option<&'static str> {
    BUILTINS.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn builtin(name: &str) -> Result<Scenario> {
    let src = builtin_source(name).ok_or_else(|| Error::config("scenario", format!("unknown builtin `{name}`")))?;
    Scenario::from_json(src)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_parse() {
        for name in builtin_names() {
            let sc = builtin(name).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(sc.name, name);
            assert!(!sc.description.is_empty(), "{name}");
        }
    }

    #[test]
    fn unknown_builtin() {
        assert!(matches!(builtin("nope"), Err(Error::Config { .. })));
    }

    #[test]
    fn schema_and_radius_checks() {
        let base = r#"{"schema":1,"name":"t","group":{"family":"free","rank":1},"operations":[{"op":"cocycle","length":LEN}]}"#;
        assert!(Scenario::from_json(&base.replace("LEN", "2")).is_ok());
        match Scenario::from_json(&base.replace("LEN", "0")) {
            Err(Error::Config { field, .. }) => assert_eq!(field, "operations[0].length"),
            r => panic!("{r:?}"),
        }
        match Scenario::from_json(&base.replace("LEN", "2").replace("\"schema\":1", "\"schema\":7")) {
            Err(Error::Config { field, .. }) => assert_eq!(field, "schema"),
            r => panic!("{r:?}"),
        }
        match Scenario::from_json("{\"schema\":1,\n\"name\":\"t\",\n\"bogus\":1}") {
            Err(Error::Config { field, message }) => {
                assert!(field.starts_with("line 3"), "{field}");
                assert!(message.contains("bogus"), "{message}");
            }
            r => panic!("{r:?}"),
        }
    }

    #[test]
    fn subgroup_references_resolve() {
        let text = r#"{"schema":1,"name":"t","group":{"family":"free","rank":2},
            "subgroups":[{"name":"A","generators":["a"]}],
            "operations":[{"op":"distortion","subgroup":"B","radius":2}]}"#;
        match Scenario::from_json(text) {
            Err(Error::Config { field, message }) => {
                assert_eq!(field, "operations[0].subgroup");
                assert!(message.contains('B'));
            }
            r => panic!("{r:?}"),
        }
    }
}
