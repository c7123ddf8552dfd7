//! Orbit growth: `d_S(s, g s) <= M |g|_X` with `M = max_{x ∈ X} d_S(s, x s)`.

use serde::Serialize;

use crate::action::{GraphAction, Vertex};
use crate::error::{Error, Result};
use crate::group::{Ball, Element};
use crate::induced::{InducedSpace, InducedSpaceBall};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitReport {
    pub m: u64,
    pub checked: usize,
    pub skipped: usize,
    /// `(g, |g|_X, d_S(s, g s))` breaking the bound.
    pub violations: Vec<(String, u32, u64)>,
}

impl OrbitReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn check(
    ball: &Ball,
    x: &[Element],
    mut dist: impl FnMut(&Element) -> Result<Option<u64>>,
) -> Result<OrbitReport> {
    let mut m = 0;
    for e in x {
        m = m.max(dist(e)?.ok_or_else(|| Error::Truncated(format!("orbit point of generator {e}")))?);
    }
    let mut report = OrbitReport {
        m,
        checked: 0,
        skipped: 0,
        violations: vec![],
    };
    for (g, len) in ball.iter() {
        match dist(g)? {
            Some(d) => {
                report.checked += 1;
                if d > m * len as u64 {
                    report.violations.push((g.to_string(), len, d));
                }
            }
            None => report.skipped += 1,
        }
    }
    Ok(report)
}

/// Checks every `g` with `|g|_X <= radius` for an action on a graph.
pub fn orbit_growth_check(
    action: &GraphAction,
    x: &[Element],
    base: &Vertex,
    radius: u32,
    budget: usize,
) -> Result<OrbitReport> {
    let ball = Ball::enumerate(action.group(), x, radius, budget)?;
    check(&ball, x, |g| Ok(action.distance(base, &action.act(g, base))))
}

/// The same check for the induced action on a materialized ball; elements
/// whose orbit point lies outside the ball are skipped.
pub fn orbit_growth_check_induced(
    space: &InducedSpace,
    ball: &InducedSpaceBall,
    radius: u32,
    budget: usize,
) -> Result<OrbitReport> {
    let x = space.group().generator_elements();
    let gball = Ball::enumerate(space.group(), &x, radius, budget)?;
    check(&gball, &x, |g| {
        Ok(ball
            .norm(&space.point(g)?)
            .and_then(|m| m.value.finite()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Group;

    #[test]
    fn trivial_and_translation() {
        let g = Group::free(1);
        let p = orbit_growth_check(&GraphAction::point(&g), &g.generator_elements(), &Vertex::Node(0), 4, 100).unwrap();
        assert_eq!(p.m, 0);
        assert!(p.passed());
        let line = GraphAction::line(&g, &[1]).unwrap();
        let r = orbit_growth_check(&line, &g.generator_elements(), &Vertex::Int(0), 6, 100).unwrap();
        assert_eq!(r.m, 1);
        assert_eq!(r.checked, 13);
        assert!(r.passed());
    }
}
