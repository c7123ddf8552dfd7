//! Distortion profiles `r ↦ max { d_H(1,h) : h ∈ H, |h|_X <= r }`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{Ball, Element, SubgroupEmbedding};
use crate::metric::SubgroupMetric;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthClass {
    Linear,
    Polynomial,
    Exponential,
    UnboundedUnknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProfileRow {
    pub r: u32,
    pub value: u64,
    /// A subgroup element with `|h|_X <= r` attaining `value`.
    pub witness: String,
    pub subgroup_points: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct DistortionProfile {
    pub rows: Vec<ProfileRow>,
    /// Advisory tag fitted from the rows.
    pub growth_class: GrowthClass,
    pub certified: bool,
}

/// Exact rows for `r = 0..=radius`: the `X`-ball is enumerated by BFS, so
/// every `|h|_X` is exact, and `d_H` is evaluated by `metric`.
pub fn distortion_profile(
    h: &SubgroupEmbedding,
    x: &[Element],
    metric: &SubgroupMetric,
    radius: u32,
    budget: usize,
) -> Result<DistortionProfile> {
    let g = h.ambient();
    let mut letters: Vec<Element> = Vec::new();
    for e in x {
        for y in [e.clone(), g.inverse(e)] {
            if !g.is_identity(&y) && !letters.contains(&y) {
                letters.push(y);
            }
        }
    }
    if letters.is_empty() {
        return Err(Error::invalid("empty generating set"));
    }
    let ball = Ball::enumerate(g, &letters, radius, budget)?;
    let mut best: Vec<(u64, Element, usize)> = vec![(0, g.identity(), 0); radius as usize + 1];
    for (e, len) in ball.iter() {
        if let Some(sub) = h.pull_back(e) {
            let v = metric.norm(h.subgroup(), &sub);
            let slot = &mut best[len as usize];
            slot.2 += 1;
            if v > slot.0 || (v == slot.0 && slot.0 > 0 && e < &slot.1) {
                slot.0 = v;
                slot.1 = e.clone();
            }
        }
    }
    let mut rows: Vec<ProfileRow> = Vec::new();
    let mut acc = (0u64, g.identity(), 0usize);
    for (r, (v, e, count)) in best.into_iter().enumerate() {
        acc.2 += count;
        if v > acc.0 {
            acc.0 = v;
            acc.1 = e;
        }
        rows.push(ProfileRow {
            r: r as u32,
            value: acc.0,
            witness: acc.1.to_string(),
            subgroup_points: acc.2,
        });
    }
    let growth_class = classify(&rows);
    Ok(DistortionProfile {
        rows,
        growth_class,
        certified: true,
    })
}

/// Ratio tests on the rows with `r >= 1`; needs at least four of them.
pub fn classify(rows: &[ProfileRow]) -> GrowthClass {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.r >= 1 && r.value > 0)
        .map(|r| (r.r as f64, r.value as f64))
        .collect();
    if pts.len() < 4 {
        return GrowthClass::UnboundedUnknown;
    }
    let tail = &pts[pts.len() / 2..];
    let per_r: Vec<f64> = tail.iter().map(|(r, v)| v / r).collect();
    let lo = per_r.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = per_r.iter().cloned().fold(0.0, f64::max);
    // growth factor per unit of r over the tail
    let (r0, v0) = tail[0];
    let (r1, v1) = tail[tail.len() - 1];
    let factor = (v1 / v0).powf(1.0 / (r1 - r0).max(1.0));
    // log-log slope over the tail
    let slope = (v1.ln() - v0.ln()) / (r1.ln() - r0.ln()).max(1e-9);
    if hi <= 1.5 * lo && slope < 1.3 {
        GrowthClass::Linear
    } else if factor >= 1.25 && slope > 2.5 {
        GrowthClass::Exponential
    } else {
        GrowthClass::Polynomial
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Group;

    #[test]
    fn free_factor_is_linear() {
        let g = Group::free(2);
        let h = SubgroupEmbedding::free_letters(&g, &[0]).unwrap();
        let p = distortion_profile(&h, &g.generator_elements(), &SubgroupMetric::word(), 6, 100_000).unwrap();
        let values: Vec<u64> = p.rows.iter().map(|r| r.value).collect();
        assert_eq!(values, vec![0, 1, 2, 3, 4, 5, 6]);
        assert_eq!(p.growth_class, GrowthClass::Linear);
    }

    #[test]
    fn diagonal_is_linear() {
        let g = Group::free_abelian(2);
        let h = SubgroupEmbedding::lattice(&g, vec![vec![1, 1]]).unwrap();
        let p = distortion_profile(&h, &g.generator_elements(), &SubgroupMetric::word(), 8, 100_000).unwrap();
        let values: Vec<u64> = p.rows.iter().map(|r| r.value).collect();
        assert_eq!(values, vec![0, 0, 1, 1, 2, 2, 3, 3, 4]);
    }
}
