//! Ratios `d_{H_λ}(1,h) / d_{C,X}(1,h)` over subgroup points of induced
//! metric balls, and the bound `d_H <= (MD + 1) d_{C,X}` for subgroups of
//! an abelian normal subgroup on which `G` acts by `±1`.

use serde::Serialize;

use crate::action::group_norm;
use crate::error::{Error, Result};
use crate::group::{Ball, Element, SubgroupEmbedding};
use crate::metric::InducedSetup;
use crate::relative::Verdict;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioRow {
    pub radius: u64,
    pub max_ratio: f64,
    pub num: u64,
    pub den: u64,
    pub witness: Option<String>,
    pub points: usize,
    pub certified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct IncompressibilityReport {
    /// `rows[λ]` has one row per radius.
    pub rows: Vec<Vec<RatioRow>>,
    pub verdicts: Vec<Verdict>,
    pub threshold: f64,
}

/// Compares a nondecreasing sequence of maxima over growing radii: stable
/// over the last two steps is `Consistent`, strictly growing past
/// `threshold` is `Fail`, anything else is `Inconclusive`.
pub fn trend_verdict(values: &[f64], threshold: f64) -> Verdict {
    let n = values.len();
    if n < 3 {
        return Verdict::Inconclusive;
    }
    let (a, b, c) = (values[n - 3], values[n - 2], values[n - 1]);
    if (a - b).abs() < 1e-12 && (b - c).abs() < 1e-12 {
        Verdict::Consistent
    } else if a < b && b < c && c > threshold {
        Verdict::Fail
    } else {
        Verdict::Inconclusive
    }
}

fn ratio_row(setup: &InducedSetup, lambda: usize, radius: u64, budget: usize) -> Result<RatioRow> {
    let ball = setup.induced_ball(radius, budget)?;
    let s = &setup.subgroups[lambda];
    let m = &setup.metrics[lambda];
    let mut best = (0u64, 1u64);
    let mut witness = None;
    let mut points = 0;
    for (g, d) in ball.iter() {
        if d == 0 {
            continue;
        }
        if let Some(h) = s.pull_back(g) {
            points += 1;
            let n = m.norm(s.subgroup(), &h);
            if (n as u128) * (best.1 as u128) > (best.0 as u128) * (d as u128) {
                best = (n, d);
                witness = Some(g.to_string());
            }
        }
    }
    Ok(RatioRow {
        radius,
        max_ratio: best.0 as f64 / best.1 as f64,
        num: best.0,
        den: best.1,
        witness,
        points,
        certified: ball.is_certified(),
    })
}

/// One ratio row per radius and subgroup.
pub fn incompressibility_report(
    setup: &InducedSetup,
    radii: &[u64],
    threshold: f64,
    budget: usize,
) -> Result<IncompressibilityReport> {
    if radii.is_empty() || radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("radii must be increasing"));
    }
    let mut rows = Vec::new();
    let mut verdicts = Vec::new();
    for l in 0..setup.subgroups.len() {
        let r: Vec<RatioRow> = radii
            .iter()
            .map(|&rad| ratio_row(setup, l, rad, budget))
            .collect::<Result<_>>()?;
        let vals: Vec<f64> = r.iter().map(|x| x.max_ratio).collect();
        verdicts.push(trend_verdict(&vals, threshold));
        rows.push(r);
    }
    Ok(IncompressibilityReport {
        rows,
        verdicts,
        threshold,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BackwardBound {
    pub radius: u64,
    /// `M = max_{y ∈ Y} d_H(1, y)`.
    pub m: u64,
    /// `D = max |h|_Y / |h|_X` over `h ∈ H` in the `X`-ball.
    pub d: f64,
    pub d_witness: Option<String>,
    pub bound: f64,
    pub ratio: RatioRow,
    /// Pairs `(g, a)` with `g a g^-1 ∉ {a, a^-1}`.
    pub conjugation_violations: Vec<(String, String)>,
    pub holds: bool,
}

/// Measures `M`, `D` and `max d_H / d_{C,X}` on the ball of radius
/// `radius` for the single subgroup of `setup`, and checks
/// `g a g^-1 = a^{±1}` for `a` in the sampled part of `abelian`.
pub fn backward_bound(
    setup: &InducedSetup,
    abelian: &SubgroupEmbedding,
    radius: u64,
    budget: usize,
) -> Result<BackwardBound> {
    if setup.subgroups.len() != 1 {
        return Err(Error::invalid("the bound concerns a single subgroup"));
    }
    let g = &setup.group;
    let s = &setup.subgroups[0];
    let metric = &setup.metrics[0];
    let sub = s.subgroup();
    let m = sub
        .generator_elements()
        .iter()
        .map(|y| metric.norm(sub, y))
        .max()
        .unwrap_or(0);
    let xs: Vec<Element> = setup.x.iter().filter(|e| !g.is_identity(e)).cloned().collect();
    let ball = Ball::enumerate(g, &xs, radius as u32, budget)?;
    let mut d = (0u64, 1u64);
    let mut d_witness = None;
    for (e, len) in ball.iter() {
        if len == 0 {
            continue;
        }
        if let Some(h) = s.pull_back(e) {
            let y = group_norm(sub, &h);
            if (y as u128) * (d.1 as u128) > (d.0 as u128) * (len as u128) {
                d = (y, len as u64);
                d_witness = Some(e.to_string());
            }
        }
    }
    let mut violations = Vec::new();
    let small = Ball::enumerate(g, &xs, radius.min(3) as u32, budget)?;
    for a in small.elements().iter().filter(|e| abelian.member(e)) {
        let ai = g.inverse(a);
        for x in small.elements() {
            let c = g.multiply(&g.multiply(x, a), &g.inverse(x));
            if c != *a && c != ai {
                violations.push((x.to_string(), a.to_string()));
            }
        }
    }
    let dval = d.0 as f64 / d.1 as f64;
    let bound = m as f64 * dval + 1.0;
    let ratio = ratio_row(setup, 0, radius, budget)?;
    let holds = ratio.max_ratio <= bound + 1e-12 && violations.is_empty();
    Ok(BackwardBound {
        radius,
        m,
        d: dval,
        d_witness,
        bound,
        ratio,
        conjugation_violations: violations,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Group;
    use crate::metric::SubgroupMetric;

    #[test]
    fn verdict_rules() {
        assert_eq!(trend_verdict(&[1.0, 1.5, 1.5, 1.5], 4.0), Verdict::Consistent);
        assert_eq!(trend_verdict(&[2.0, 4.0, 8.0], 4.0), Verdict::Fail);
        assert_eq!(trend_verdict(&[1.0, 2.0, 3.0], 4.0), Verdict::Inconclusive);
        assert_eq!(trend_verdict(&[1.0], 4.0), Verdict::Inconclusive);
    }

    #[test]
    fn free_factor_word_metric_ratio_is_one() {
        let g = Group::free(2);
        let h = SubgroupEmbedding::free_letters(&g, &[0]).unwrap();
        let setup = InducedSetup::new(&g, vec![g.element("b").unwrap()], vec![h], vec![SubgroupMetric::word()]).unwrap();
        let r = incompressibility_report(&setup, &[2, 3, 4], 4.0, 100_000).unwrap();
        assert!(r.rows[0].iter().all(|row| row.max_ratio == 1.0));
        assert_eq!(r.verdicts[0], Verdict::Consistent);
    }
}
