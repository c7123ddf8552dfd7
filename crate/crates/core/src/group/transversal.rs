use std::collections::HashMap;

use super::{Ball, Element, SubgroupEmbedding};

/// A choice of representative `t(g)` for each left coset `gH`, with `t(h) = 1`
/// on `H`.
///
/// Cosets without an explicit choice fall back to the canonical coset key of
/// the subgroup.
#[derive(Clone, Debug)]
pub struct Transversal {
    subgroup: SubgroupEmbedding,
    chosen: HashMap<Element, Element>,
}

impl Transversal {
    /// Representatives given by the canonical coset keys.
    pub fn canonical(subgroup: SubgroupEmbedding) -> Self {
        Self {
            subgroup,
            chosen: HashMap::new(),
        }
    }

    /// For every coset meeting `ball`, the shortest element of the coset in
    /// the ball, ties broken by normal form order; `1` for `H` itself.
    pub fn from_ball(subgroup: SubgroupEmbedding, ball: &Ball) -> Self {
        let mut best: HashMap<Element, (u32, Element)> = HashMap::new();
        for (g, len) in ball.iter() {
            let key = subgroup.left_coset_key(g);
            match best.get(&key) {
                Some((l, e)) if (*l, e) <= (len, g) => {}
                _ => {
                    best.insert(key, (len, g.clone()));
                }
            }
        }
        let id = subgroup.ambient().identity();
        let chosen = best
            .into_iter()
            .map(|(k, (_, g))| {
                let rep = if subgroup.ambient().is_identity(&k) { id.clone() } else { g };
                (k, rep)
            })
            .collect();
        Self { subgroup, chosen }
    }

    /// Replaces the representative of the coset `gH` by `rep`.
    ///
    /// Panics if `rep` is not in `gH`, or if `gH = H` and `rep != 1`.
    pub fn with_choice(mut self, g: &Element, rep: Element) -> Self {
        assert!(self.subgroup.same_left_coset(g, &rep), "{rep} not in the coset of {g}");
        let key = self.subgroup.left_coset_key(g);
        assert!(
            !self.subgroup.ambient().is_identity(&key) || self.subgroup.ambient().is_identity(&rep),
            "representative of H must be 1"
        );
        self.chosen.insert(key, rep);
        self
    }

    pub fn subgroup(&self) -> &SubgroupEmbedding {
        &self.subgroup
    }

    /// Number of explicitly chosen cosets.
    pub fn chosen_len(&self) -> usize {
        self.chosen.len()
    }

    /// `t(g)`.
    pub fn rep(&self, g: &Element) -> Element {
        let key = self.subgroup.left_coset_key(g);
        match self.chosen.get(&key) {
            Some(r) => r.clone(),
            None => key,
        }
    }

    /// Coset representatives of all cosets meeting `ball`, deduplicated, in
    /// ball order of first appearance.
    pub fn reps_on(&self, ball: &Ball) -> Vec<Element> {
        let mut seen = std::collections::HashSet::new();
        ball.elements()
            .iter()
            .map(|g| self.rep(g))
            .filter(|r| seen.insert(r.clone()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Group;

    #[test]
    fn whole_group_single_coset() {
        let g = Group::free(2);
        let ball = Ball::enumerate(&g, &g.generator_elements(), 3, 10_000).unwrap();
        let t = Transversal::from_ball(SubgroupEmbedding::whole(&g), &ball);
        assert_eq!(t.reps_on(&ball), vec![g.identity()]);
    }

    #[test]
    fn free_factor_reps() {
        let g = Group::free(2);
        let ball = Ball::enumerate(&g, &g.generator_elements(), 2, 10_000).unwrap();
        let h = SubgroupEmbedding::free_letters(&g, &[0]).unwrap();
        let t = Transversal::from_ball(h.clone(), &ball);
        for k in -2..=2 {
            let ak = g.pow(&g.element("a").unwrap(), k);
            assert!(g.is_identity(&t.rep(&ak)));
        }
        let ab = g.element("a b").unwrap();
        assert_eq!(t.rep(&ab), ab);
        assert_eq!(t.rep(&g.element("b a").unwrap()), g.element("b").unwrap());
        for x in ball.elements() {
            assert!(h.member(&g.divide(&t.rep(x), x)));
        }
    }

    #[test]
    fn index_two_reps() {
        let g = Group::f2_semidirect_z2();
        let ball = Ball::enumerate(&g, &g.generator_elements(), 3, 100_000).unwrap();
        let h = SubgroupEmbedding::unflipped(&g).unwrap();
        let t = Transversal::from_ball(h, &ball);
        let mut reps: Vec<String> = t.reps_on(&ball).iter().map(|e| e.to_string()).collect();
        reps.sort();
        assert_eq!(reps, ["1", "t"]);
    }
}
