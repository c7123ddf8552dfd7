//! Quasi-isometry constants, equivariance defects and coarse surjectivity.

use serde::Serialize;

/// One measured pair: `d_src(x, y)` and `d_tgt(f x, f y)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairSample {
    pub x: String,
    pub y: String,
    pub d_src: u64,
    pub d_tgt: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct QiWitnesses {
    /// Pair attaining the upper ratio `d_tgt / d_src`.
    pub stretch: Option<PairSample>,
    /// Pair attaining the lower ratio `d_src / d_tgt`.
    pub compress: Option<PairSample>,
    /// `(g, x)` attaining the equivariance defect.
    pub defect: Option<(String, String)>,
    /// Target point farthest from the image.
    pub far_point: Option<String>,
}

/// Constants of `d/C - A <= d' <= C d + A` measured over explicit samples.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QiReport {
    pub mult_constant: f64,
    pub additive_constant: f64,
    pub upper_ratio: f64,
    pub lower_ratio: f64,
    /// Pairs at positive source distance sent to one point.
    pub collapsed_pairs: usize,
    pub pairs: usize,
    pub equivariance_defect: u64,
    pub defect_samples: usize,
    pub cosurjectivity_radius: Option<u64>,
    /// False when some target distance was only an upper bound.
    pub certified: bool,
    pub witnesses: QiWitnesses,
}

impl QiReport {
    /// Best `C` with `A = 0` wherever possible; collapsed pairs go into `A`.
    pub fn from_pairs(pairs: &[PairSample]) -> Self {
        let mut upper = 1.0f64;
        let mut lower = 1.0f64;
        let mut w = QiWitnesses::default();
        let mut collapsed = Vec::new();
        let mut counted = 0;
        for p in pairs {
            if p.d_src == 0 {
                continue;
            }
            counted += 1;
            if p.d_tgt == 0 {
                collapsed.push(p);
                continue;
            }
            let up = p.d_tgt as f64 / p.d_src as f64;
            let lo = p.d_src as f64 / p.d_tgt as f64;
            if up > upper {
                upper = up;
                w.stretch = Some(p.clone());
            }
            if lo > lower {
                lower = lo;
                w.compress = Some(p.clone());
            }
        }
        let c = upper.max(lower);
        let additive = collapsed
            .iter()
            .map(|p| p.d_src as f64 / c)
            .fold(0.0, f64::max);
        if w.compress.is_none() {
            w.compress = collapsed.iter().max_by_key(|p| p.d_src).map(|p| (*p).clone());
        }
        Self {
            mult_constant: c,
            additive_constant: additive,
            upper_ratio: upper,
            lower_ratio: lower,
            collapsed_pairs: collapsed.len(),
            pairs: counted,
            equivariance_defect: 0,
            defect_samples: 0,
            cosurjectivity_radius: None,
            certified: true,
            witnesses: w,
        }
    }

    /// Records samples `(g, x, d(f(g x), g f(x)))`.
    pub fn with_defects(mut self, samples: impl IntoIterator<Item = (String, String, u64)>) -> Self {
        for (g, x, d) in samples {
            self.defect_samples += 1;
            if d > self.equivariance_defect {
                self.equivariance_defect = d;
                self.witnesses.defect = Some((g, x));
            }
        }
        self
    }

    /// Records `(y, d(y, f(R)))` for target points `y`.
    pub fn with_cosurjectivity(mut self, samples: impl IntoIterator<Item = (String, u64)>) -> Self {
        let mut best: Option<(u64, String)> = None;
        for (y, d) in samples {
            if best.as_ref().is_none_or(|(b, _)| d > *b) {
                best = Some((d, y));
            }
        }
        if let Some((d, y)) = best {
            self.cosurjectivity_radius = Some(d);
            self.witnesses.far_point = Some(y);
        }
        self
    }

    pub fn uncertified(mut self) -> Self {
        self.certified = false;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(a: u64, b: u64) -> PairSample {
        PairSample {
            x: "x".into(),
            y: "y".into(),
            d_src: a,
            d_tgt: b,
        }
    }

    #[test]
    fn identity_is_perfect() {
        let r = QiReport::from_pairs(&[pair(1, 1), pair(3, 3), pair(0, 0)]);
        assert_eq!(r.mult_constant, 1.0);
        assert_eq!(r.additive_constant, 0.0);
        assert_eq!(r.pairs, 2);
    }

    #[test]
    fn scaling_and_collapse() {
        let r = QiReport::from_pairs(&[pair(1, 2), pair(5, 10)]);
        assert_eq!(r.mult_constant, 2.0);
        let r = QiReport::from_pairs(&[pair(1, 1), pair(20, 2), pair(4, 0)]);
        assert_eq!(r.mult_constant, 10.0);
        assert_eq!(r.collapsed_pairs, 1);
        assert!((r.additive_constant - 0.4).abs() < 1e-12);
    }

    #[test]
    fn defect_keeps_max() {
        let r = QiReport::from_pairs(&[]).with_defects([
            ("g".into(), "x".into(), 0),
            ("h".into(), "y".into(), 3),
            ("k".into(), "z".into(), 1),
        ]);
        assert_eq!(r.equivariance_defect, 3);
        assert_eq!(r.witnesses.defect, Some(("h".into(), "y".into())));
    }
}
