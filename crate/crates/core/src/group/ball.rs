use std::collections::HashMap;

use crate::dist::{ExtDist, Measured};
use crate::error::{Error, Result};
use crate::graph::Graph;

use super::{Element, Group};

/// Breadth-first enumeration of `{ g : |g|_X <= R }`.
///
/// Elements are stored in BFS order; within a level, in discovery order
/// (parents in order, generators in list order).
#[derive(Clone, Debug)]
pub struct Ball {
    elements: Vec<Element>,
    lengths: Vec<u32>,
    parents: Vec<Option<(u32, u32)>>,
    index: HashMap<Element, u32>,
    radius: u32,
    closed: bool,
}

impl Ball {
    /// Enumerates the ball of radius `radius` for the generator list `gens`.
    /// Fails with [`Error::Budget`] when more than `budget` elements appear.
    pub fn enumerate(group: &Group, gens: &[Element], radius: u32, budget: usize) -> Result<Self> {
        Self::grow(group, gens, radius, budget, |_| false).map(|(b, _)| b)
    }

    /// Like [`Ball::enumerate`] but stops at the end of the first level that
    /// contains an element satisfying `stop`. Returns the ball and whether
    /// the stop condition fired.
    pub fn grow(
        group: &Group,
        gens: &[Element],
        radius: u32,
        budget: usize,
        mut stop: impl FnMut(&Element) -> bool,
    ) -> Result<(Self, bool)> {
        let id = group.identity();
        let mut ball = Ball {
            elements: vec![id.clone()],
            lengths: vec![0],
            parents: vec![None],
            index: HashMap::from([(id.clone(), 0)]),
            radius: 0,
            closed: false,
        };
        if stop(&id) {
            return Ok((ball, true));
        }
        let mut level_start = 0usize;
        let mut hit = false;
        for depth in 1..=radius {
            let level_end = ball.elements.len();
            if level_start == level_end {
                ball.closed = true;
                break;
            }
            for u in level_start..level_end {
                for (gi, x) in gens.iter().enumerate() {
                    let v = group.multiply(&ball.elements[u], x);
                    if ball.index.contains_key(&v) {
                        continue;
                    }
                    if ball.elements.len() >= budget {
                        return Err(Error::budget("ball enumeration", budget));
                    }
                    hit |= stop(&v);
                    ball.index.insert(v.clone(), ball.elements.len() as u32);
                    ball.elements.push(v);
                    ball.lengths.push(depth);
                    ball.parents.push(Some((u as u32, gi as u32)));
                }
            }
            ball.radius = depth;
            level_start = level_end;
            if hit {
                break;
            }
        }
        if !hit && level_start == ball.elements.len() {
            ball.closed = true;
        }
        Ok((ball, hit))
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    /// True when the generated subgroup was exhausted before the radius was
    /// reached, so every element of `<X>` is listed.
    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Element {
        &self.elements[i]
    }

    pub fn lengths(&self) -> &[u32] {
        &self.lengths
    }

    pub fn index_of(&self, g: &Element) -> Option<usize> {
        self.index.get(g).map(|&i| i as usize)
    }

    pub fn length_of(&self, g: &Element) -> Option<u32> {
        self.index_of(g).map(|i| self.lengths[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Element, u32)> {
        self.elements.iter().zip(self.lengths.iter().copied())
    }

    /// Elements of length at most `r`.
    pub fn within(&self, r: u32) -> impl Iterator<Item = &Element> {
        self.iter().filter(move |(_, l)| *l <= r).map(|(e, _)| e)
    }

    /// A geodesic word (indices into the generator list used to build the ball).
    pub fn geodesic_word(&self, g: &Element) -> Option<Vec<usize>> {
        let mut i = self.index_of(g)?;
        let mut word = Vec::new();
        while let Some((p, gi)) = self.parents[i] {
            word.push(gi as usize);
            i = p as usize;
        }
        word.reverse();
        Some(word)
    }

    /// Cayley graph induced on the ball: `g ~ g x` for `x` in `gens` with
    /// both ends in the ball. Vertex ids follow [`Ball::elements`].
    pub fn cayley_graph(&self, group: &Group, gens: &[Element]) -> Graph {
        let mut graph = Graph::new(self.len());
        for (u, g) in self.elements.iter().enumerate() {
            for x in gens {
                if let Some(v) = self.index_of(&group.multiply(g, x)) {
                    graph.add_edge(u, v);
                }
            }
        }
        graph.finalize();
        graph
    }

    /// `|g|_X` with extended semantics: exact inside the ball, certified `∞`
    /// when the ball is closed, otherwise an uncertified `∞`.
    pub fn word_length(&self, g: &Element) -> Measured {
        match self.length_of(g) {
            Some(l) => Measured::exact(l as u64),
            None if self.closed => Measured::exact(ExtDist::Infinite),
            None => Measured::bound(ExtDist::Infinite),
        }
    }
}

/// `|g|_X`, searching outward until `g` is found, the subgroup closes, the
/// radius cap is reached or the budget runs out. Budget exhaustion yields an
/// uncertified answer rather than an error.
pub fn word_metric(group: &Group, gens: &[Element], g: &Element, max_radius: u32, budget: usize) -> Measured {
    match Ball::grow(group, gens, max_radius, budget, |e| e == g) {
        Ok((ball, _)) => ball.word_length(g),
        Err(_) => Measured::bound(ExtDist::Infinite),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_ball_counts() {
        let f2 = Group::free(2);
        let b = Ball::enumerate(&f2, &f2.generator_elements(), 1, 100).unwrap();
        assert_eq!(b.len(), 5);
        let z2 = Group::free_abelian(2);
        let b = Ball::enumerate(&z2, &z2.generator_elements(), 2, 100).unwrap();
        assert_eq!(b.len(), 13);
        let g = b.cayley_graph(&z2, &z2.generator_elements());
        assert_eq!(g.edge_count(), 16);
    }

    #[test]
    fn budget_is_reported() {
        let f2 = Group::free(2);
        let err = Ball::enumerate(&f2, &f2.generator_elements(), 6, 50).unwrap_err();
        assert_eq!(err, Error::budget("ball enumeration", 50));
    }

    #[test]
    fn free_word_length() {
        let f2 = Group::free(2);
        let g = f2.element("a b a b^-1").unwrap();
        let m = word_metric(&f2, &f2.generator_elements(), &g, 10, 10_000);
        assert_eq!(m, Measured::exact(4));
        let m = word_metric(&f2, &f2.generator_elements(), &f2.identity(), 10, 10_000);
        assert_eq!(m, Measured::exact(0));
    }

    #[test]
    fn closed_subgroup_gives_certified_infinity() {
        let f2 = Group::free(2);
        let a = f2.element("a").unwrap();
        let b = f2.element("b").unwrap();
        let c3 = Group::cyclic(3);
        let m = word_metric(&c3, &c3.generator_elements(), &c3.identity(), 5, 100);
        assert_eq!(m, Measured::exact(0));
        // <a> is infinite: never closes, so b stays uncertified
        let m = word_metric(&f2, &[a.clone(), f2.inverse(&a)], &b, 6, 1000);
        assert!(!m.certified);
        let z6 = Group::cyclic(6);
        let two = Element::Finite(2);
        let one = Element::Finite(1);
        let m = word_metric(&z6, &[two.clone(), z6.inverse(&two)], &one, 10, 100);
        assert_eq!(m, Measured::exact(ExtDist::Infinite));
    }

    #[test]
    fn geodesic_words_evaluate() {
        let g = Group::baumslag_solitar(2).unwrap();
        let gens = g.generator_elements();
        let b = Ball::enumerate(&g, &gens, 4, 100_000).unwrap();
        for (e, l) in b.iter() {
            let w = b.geodesic_word(e).unwrap();
            assert_eq!(w.len() as u32, l);
            assert_eq!(&g.evaluate_word(&w).unwrap(), e);
        }
    }
}
