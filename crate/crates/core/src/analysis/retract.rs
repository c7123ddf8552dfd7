//! Extending an action of `H` along a retraction `ρ : G → H`.

use serde::Serialize;

use super::qi::{PairSample, QiReport};
use crate::action::{GraphAction, Vertex};
use crate::error::{Error, Result};
use crate::group::{Ball, Element, SubgroupEmbedding};

#[derive(Clone, Debug)]
pub struct RetractExtension {
    /// `g · x = ρ(g) · x`.
    pub action: GraphAction,
    /// QI report of the identity map from the `H`-action to the restricted
    /// `G`-action.
    pub report: QiReport,
    pub retraction_violations: Vec<String>,
}

#[derive(Serialize)]
struct Summary<'a> {
    report: &'a QiReport,
    retraction_violations: &'a [String],
}

impl RetractExtension {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(Summary {
            report: &self.report,
            retraction_violations: &self.retraction_violations,
        })
        .expect("serializable")
    }
}

/// `images[i]` is `ρ` of the `i`-th generator of `G`, as an element of `H`.
/// Checks `ρ(h) = h` on `H` and `ρ(fg) = ρ(f)ρ(g)` on sampled pairs.
pub fn retract_extension(
    h: &SubgroupEmbedding,
    action: &GraphAction,
    base: &Vertex,
    images: Vec<Element>,
    sample_radius: u32,
    budget: usize,
) -> Result<RetractExtension> {
    if action.group() != h.subgroup() {
        return Err(Error::invalid("the action must be an action of the subgroup"));
    }
    let g = h.ambient();
    let ext = GraphAction::pullback(g, action.clone(), images)?;
    let hg = h.subgroup();
    let mut bad = Vec::new();
    let hball = Ball::enumerate(hg, &hg.generator_elements(), sample_radius, budget)?;
    for e in hball.elements() {
        let rho = ext.rho(&h.inject(e)).expect("pullback");
        if &rho != e {
            bad.push(format!("rho({e}) = {rho}"));
        }
    }
    let gball = Ball::enumerate(g, &g.generator_elements(), sample_radius, budget)?;
    for a in gball.elements() {
        for b in gball.elements() {
            let lhs = ext.rho(&g.multiply(a, b)).expect("pullback");
            let rhs = hg.multiply(&ext.rho(a).expect("pullback"), &ext.rho(b).expect("pullback"));
            if lhs != rhs {
                bad.push(format!("rho({a} {b})"));
            }
        }
    }
    // orbit points of H and their images under the identity map
    let pts: Vec<Vertex> = hball.elements().iter().map(|e| action.act(e, base)).collect();
    let mut pairs = Vec::new();
    for (i, p) in pts.iter().enumerate() {
        for q in &pts[i + 1..] {
            let d = action.distance(p, q).ok_or_else(|| Error::Disconnected("acted-upon graph".into()))?;
            let d2 = ext.distance(p, q).expect("same graph");
            pairs.push(PairSample {
                x: p.to_string(),
                y: q.to_string(),
                d_src: d,
                d_tgt: d2,
            });
        }
    }
    let defects = hball.elements().iter().flat_map(|e| {
        let he = h.inject(e);
        pts.iter()
            .map(|p| {
                let d = ext.distance(&ext.act(&he, p), &action.act(e, p)).unwrap_or(u64::MAX);
                (e.to_string(), p.to_string(), d)
            })
            .collect::<Vec<_>>()
    });
    let report = QiReport::from_pairs(&pairs).with_defects(defects.collect::<Vec<_>>());
    Ok(RetractExtension {
        action: ext,
        report,
        retraction_violations: bad,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{Group, Side};

    #[test]
    fn finite_factor_is_a_retract() {
        let g = Group::direct_product(Group::free(1), Group::cyclic(2));
        let h = SubgroupEmbedding::factor(&g, Side::Left).unwrap();
        let line = GraphAction::line(h.subgroup(), &[1]).unwrap();
        let hg = h.subgroup().clone();
        let images: Vec<Element> = g
            .generator_elements()
            .iter()
            .map(|x| h.pull_back(x).unwrap_or_else(|| hg.identity()))
            .collect();
        let r = retract_extension(&h, &line, &Vertex::Int(0), images, 3, 10_000).unwrap();
        assert!(r.retraction_violations.is_empty());
        assert_eq!(r.report.mult_constant, 1.0);
        assert_eq!(r.report.equivariance_defect, 0);
    }

    #[test]
    fn killing_b_gives_trivial_b_action() {
        let g = Group::free(2);
        let h = SubgroupEmbedding::free_letters(&g, &[0]).unwrap();
        let line = GraphAction::line(h.subgroup(), &[1]).unwrap();
        let a = h.subgroup().generator_elements();
        let id = h.subgroup().identity();
        let images = vec![a[0].clone(), a[1].clone(), id.clone(), id];
        let r = retract_extension(&h, &line, &Vertex::Int(0), images, 3, 10_000).unwrap();
        assert!(r.retraction_violations.is_empty());
        let b = g.element("b").unwrap();
        assert_eq!(r.action.act(&b, &Vertex::Int(5)), Vertex::Int(5));
    }
}
