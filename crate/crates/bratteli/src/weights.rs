//! Weight functions on the two halves of a diagram.

use num_bigint::BigUint;

use crate::diagram::{split_cuts, DiagramSpec, Half, ValidationReport, ViolationKind};
use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

/// Weights on one half in its native orientation: `root[v]` for level 0 and
/// `edges[i-1][k]` for edge `k` into level `i` (same indexing as [`Half`]).
#[derive(Clone, Debug, PartialEq)]
pub struct HalfWeights<S> {
    pub root: Vec<S>,
    pub edges: Vec<Vec<S>>,
}

impl<S: Scalar> HalfWeights<S> {
    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> HalfWeights<T> {
        HalfWeights {
            root: self.root.iter().map(&f).collect(),
            edges: self.edges.iter().map(|l| l.iter().map(&f).collect()).collect(),
        }
    }

    pub fn truncated(&self, depth: usize) -> HalfWeights<S> {
        HalfWeights { root: self.root.clone(), edges: self.edges[..depth.min(self.edges.len())].to_vec() }
    }

    pub fn total(&self) -> S {
        self.root.iter().cloned().fold(S::zero(), |a, b| a + b)
    }

    fn check_shape(&self, half: &Half, name: &str) -> Result<()> {
        if self.root.len() != half.count(0) {
            return Err(Error::MissingWeight(format!("{name}: {} root weights for {} vertices", self.root.len(), half.count(0))));
        }
        if self.edges.len() < half.depth() {
            return Err(Error::MissingWeight(format!("{name}: no edge weights beyond level {}", self.edges.len())));
        }
        for i in 1..=half.depth() {
            if self.edges[i - 1].len() != half.edges(i).len() {
                return Err(Error::MissingWeight(format!("{name}: level {i} has {} edges but {} weights", half.edges(i).len(), self.edges[i - 1].len())));
            }
        }
        Ok(())
    }
}

/// The pair `w+` (positive half) and `w-` (negative half, native orientation).
#[derive(Clone, Debug, PartialEq)]
pub struct WeightPair<S> {
    pub plus: HalfWeights<S>,
    pub minus: HalfWeights<S>,
}

impl<S: Scalar> WeightPair<S> {
    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> WeightPair<T> {
        WeightPair { plus: self.plus.map(f), minus: self.minus.map(f) }
    }

    pub fn check_shape(&self, spec: &DiagramSpec) -> Result<()> {
        self.plus.check_shape(&spec.positive_half(), "w+")?;
        self.minus.check_shape(&spec.negative_half(), "w-")
    }
}

impl WeightPair<Rational> {
    pub fn to_float<T: Scalar>(&self) -> WeightPair<T> {
        self.map(T::from_rational)
    }
}

/// A half bundled with its weights and the derived vertex weights.
#[derive(Clone, Debug)]
pub struct WeightedHalf<S> {
    pub half: Half,
    pub weights: HalfWeights<S>,
    /// `vertex[i][v]`, computed along r-minimal incoming edges.
    pub vertex: Vec<Vec<S>>,
}

impl<S: Scalar> WeightedHalf<S> {
    pub fn new(half: Half, weights: HalfWeights<S>) -> Result<Self> {
        weights.check_shape(&half, "weights")?;
        let weights = weights.truncated(half.depth());
        let vertex = vertex_weights(&half, &weights)?;
        Ok(WeightedHalf { half, weights, vertex })
    }

    pub fn depth(&self) -> usize {
        self.half.depth()
    }

    pub fn edge_weight(&self, level: usize, idx: usize) -> &S {
        &self.weights.edges[level - 1][idx]
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> WeightedHalf<T> {
        WeightedHalf {
            half: self.half.clone(),
            weights: self.weights.map(f),
            vertex: self.vertex.iter().map(|l| l.iter().map(f).collect()).collect(),
        }
    }

    pub fn truncated(&self, depth: usize) -> WeightedHalf<S> {
        let depth = depth.min(self.depth());
        WeightedHalf {
            half: self.half.truncated(depth),
            weights: self.weights.truncated(depth),
            vertex: self.vertex[..=depth].to_vec(),
        }
    }

    /// Sum of vertex weights at `level`.
    pub fn level_mass(&self, level: usize) -> S {
        self.vertex[level].iter().cloned().fold(S::zero(), |a, b| a + b)
    }
}

/// Vertex weights along r-minimal incoming edges. Only meaningful when path
/// independence holds; [`check_weight_conditions`] verifies that.
pub fn vertex_weights<S: Scalar>(half: &Half, w: &HalfWeights<S>) -> Result<Vec<Vec<S>>> {
    let mut out = vec![w.root.clone()];
    for i in 1..=half.depth() {
        let mut level = Vec::with_capacity(half.count(i));
        for v in 0..half.count(i) {
            let Some(&k) = half.incoming(i, v).first() else {
                return Err(Error::InvalidDiagram(format!("vertex {v} of level {i} has no incoming edge")));
            };
            let e = half.edge(i, k);
            level.push(out[i - 1][e.src].clone() * w.edges[i - 1][k].clone());
        }
        out.push(level);
    }
    Ok(out)
}

/// `w(v)` for a vertex of the welded diagram at `level` (either sign).
pub fn vertex_weight<S: Scalar>(spec: &DiagramSpec, weights: &WeightPair<S>, level: i64, v: usize) -> Result<S> {
    let (half, w) = if level >= 0 {
        (spec.positive_half(), &weights.plus)
    } else {
        (spec.negative_half(), &weights.minus)
    };
    let depth = level.unsigned_abs() as usize;
    if depth > half.depth() {
        return Err(Error::DepthExceedsWindow { requested: depth, available: half.depth() });
    }
    if v >= half.count(depth) {
        return Err(Error::InvalidPath(format!("no vertex {v} at level {level}")));
    }
    let wh = WeightedHalf::new(half.truncated(depth), w.truncated(depth))?;
    Ok(wh.vertex[depth][v].clone())
}

/// Measure of the cylinder of a finite path from level 0, given as edge
/// indices into levels `1..=n`.
pub fn measure_of_cylinder<S: Scalar>(wh: &WeightedHalf<S>, path: &[usize]) -> Result<S> {
    crate::pathspace::check_path(&wh.half, path)?;
    let Some(&first) = path.first() else {
        return Err(Error::InvalidPath("empty path".into()));
    };
    let mut m = wh.weights.root[wh.half.edge(1, first).src].clone();
    for (j, &k) in path.iter().enumerate() {
        m = m * wh.edge_weight(j + 1, k).clone();
    }
    Ok(m)
}

fn check_half<S: Scalar>(
    report: &mut ValidationReport,
    name: &str,
    sign: i64,
    half: &Half,
    w: &HalfWeights<S>,
    depth: usize,
    threshold: Option<&S>,
) -> Result<()> {
    let depth = depth.min(half.depth());
    w.check_shape(&half.truncated(depth), name)?;
    for (v, x) in w.root.iter().enumerate() {
        if *x <= S::zero() {
            report.push(ViolationKind::NonPositiveWeight, Some(0), Some(v), format!("{name} root weight of vertex {v} is {x}"));
        }
    }
    let mut vertex: Vec<Vec<S>> = vec![w.root.clone()];
    let mut periodic_chain = vec![vec![true; half.count(0)]];
    let mut max_weight = Vec::new();
    for i in 1..=depth {
        let es = half.edges(i);
        for (k, x) in w.edges[i - 1].iter().enumerate() {
            if *x <= S::zero() {
                report.push(ViolationKind::NonPositiveWeight, Some(sign * i as i64), Some(es[k].dst), format!("{name} edge {k} into level {i} has weight {x}"));
            }
        }
        // (ii) outgoing sums
        for u in 0..half.count(i - 1) {
            let sum = half.outgoing(i, u).iter().fold(S::zero(), |a, &k| a + w.edges[i - 1][k].clone());
            if sum != S::one() {
                report.push(
                    ViolationKind::OutgoingSumNotOne,
                    Some(sign * (i as i64 - 1)),
                    Some(u),
                    format!("{name}: outgoing weights of vertex {u} at level {} sum to {sum}, not 1", i - 1),
                );
            }
        }
        // (i) path independence, level by level
        let mut level = Vec::with_capacity(half.count(i));
        for v in 0..half.count(i) {
            let ins = half.incoming(i, v);
            let vals: Vec<S> = ins.iter().map(|&k| vertex[i - 1][es[k].src].clone() * w.edges[i - 1][k].clone()).collect();
            let Some(first) = vals.first().cloned() else {
                level.push(S::zero());
                continue;
            };
            if vals.iter().any(|x| *x != first) {
                report.push(
                    ViolationKind::PathDependentWeight,
                    Some(sign * i as i64),
                    Some(v),
                    format!("{name}: vertex {v} at level {i} gets path weights {}", vals.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")),
                );
            }
            level.push(first);
        }
        vertex.push(level);
        let chain: Vec<bool> = (0..half.count(i))
            .map(|v| {
                let ins = half.incoming(i, v);
                ins.len() == 1 && periodic_chain[i - 1][es[ins[0]].src]
            })
            .collect();
        let mx = (0..half.count(i))
            .filter(|&v| !chain[v])
            .map(|v| vertex[i][v].clone())
            .fold(None, |m: Option<S>, x| match m {
                Some(m) if m >= x => Some(m),
                _ => Some(x),
            });
        periodic_chain.push(chain);
        max_weight.push(mx);
    }
    // Mass conservation: sum over depth-k paths of cylinder measures.
    if report.has(&ViolationKind::OutgoingSumNotOne) || report.has(&ViolationKind::PathDependentWeight) {
        let counts = half.truncated(depth).path_counts();
        let total0 = w.total();
        for i in 1..=depth {
            let mass = (0..half.count(i)).fold(S::zero(), |a, v| a + vertex[i][v].clone() * S::from_rational(&Rational::from_integer(biguint_to_bigint(&counts[i][v]))));
            if mass != total0 {
                report.push(ViolationKind::MassNotConserved, Some(sign * i as i64), None, format!("{name}: total cylinder mass at level {i} is {mass}, level 0 has {total0}"));
                break;
            }
        }
    }
    // (iii) surrogate: the largest path weight off certified periodic chains.
    let mut prev: Option<S> = None;
    for (i, m) in max_weight.iter().enumerate() {
        if let (Some(p), Some(m)) = (&prev, m) {
            if m > p {
                report.push(ViolationKind::NotDecaying, Some(sign * (i as i64 + 1)), None, format!("{name}: max path weight rises from {p} to {m} at level {}", i + 1));
            }
        }
        if m.is_some() {
            prev = m.clone();
        }
    }
    if let Some(Some(last)) = max_weight.last() {
        report.notes.push(format!("{name}: max path weight at depth {depth} is {last}"));
        if let Some(t) = threshold {
            if last > t {
                report.push(ViolationKind::NotDecaying, Some(sign * depth as i64), None, format!("{name}: max path weight {last} at depth {depth} exceeds threshold {t}"));
            }
        }
    }
    Ok(())
}

fn biguint_to_bigint(x: &BigUint) -> num_bigint::BigInt {
    num_bigint::BigInt::from(x.clone())
}

/// Exact checks of path independence and outgoing normalization to depth `K`
/// on both halves, the decay surrogate, and the bi-infinite normalization.
pub fn check_weight_conditions<S: Scalar>(
    spec: &DiagramSpec,
    weights: &WeightPair<S>,
    depth: usize,
    decay_threshold: Option<&S>,
) -> Result<ValidationReport> {
    let mut report = ValidationReport::default();
    let pos = spec.positive_half();
    let neg = spec.negative_half();
    check_half(&mut report, "w+", 1, &pos, &weights.plus, depth, decay_threshold)?;
    check_half(&mut report, "w-", -1, &neg, &weights.minus, depth, None)?;
    let area = weights
        .plus
        .root
        .iter()
        .zip(&weights.minus.root)
        .fold(S::zero(), |a, (p, m)| a + p.clone() * m.clone());
    if area != S::one() {
        report.push(ViolationKind::BiInfiniteNormalization, Some(0), None, format!("sum of w+(v)w-(v) over level 0 is {area}, not 1"));
    }
    Ok(report)
}

/// Compose edge weights along the telescoped paths.
pub fn telescope_weights<S: Scalar>(spec: &DiagramSpec, weights: &WeightPair<S>, cuts: &[i64]) -> Result<WeightPair<S>> {
    let (pc, nc) = split_cuts(cuts)?;
    let compose = |half: Half, w: &HalfWeights<S>, cuts: &[usize]| -> Result<HalfWeights<S>> {
        let (_, compos) = half.telescope(cuts)?;
        let edges = compos
            .iter()
            .enumerate()
            .map(|(n, paths)| {
                let base = cuts[n];
                paths
                    .iter()
                    .map(|p| p.iter().enumerate().fold(S::one(), |a, (j, &k)| a * w.edges[base + j][k].clone()))
                    .collect()
            })
            .collect();
        Ok(HalfWeights { root: w.root.clone(), edges })
    };
    Ok(WeightPair {
        plus: compose(spec.positive_half(), &weights.plus, &pc)?,
        minus: compose(spec.negative_half(), &weights.minus, &nc)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{generate, FamilyParams};
    use crate::scalar::{int, rat};

    #[test]
    fn odometer_weights_pass() {
        let (spec, w) = generate(&FamilyParams::Odometer { base: 2 }, 6).unwrap();
        let r = check_weight_conditions(&spec, &w, 6, None).unwrap();
        assert!(r.is_ok(), "{:?}", r.violations);
    }

    #[test]
    fn odometer_thirds_fail_condition_two() {
        let (spec, mut w) = generate(&FamilyParams::Odometer { base: 2 }, 3).unwrap();
        for l in &mut w.plus.edges {
            for x in l.iter_mut() {
                *x = rat(1, 3);
            }
        }
        let r = check_weight_conditions(&spec, &w, 3, None).unwrap();
        let v = r.violations.iter().find(|v| v.kind == ViolationKind::OutgoingSumNotOne).unwrap();
        assert!(v.message.contains("2/3"), "{}", v.message);
    }

    #[test]
    fn pascal_third_passes() {
        let (spec, w) = generate(&FamilyParams::Pascal { p: rat(1, 3) }, 6).unwrap();
        let r = check_weight_conditions(&spec, &w, 6, None).unwrap();
        assert!(r.is_ok(), "{:?}", r.violations);
    }

    #[test]
    fn missing_weights_are_errors() {
        let (spec, mut w) = generate(&FamilyParams::Odometer { base: 2 }, 3).unwrap();
        w.plus.edges[1].pop();
        assert!(matches!(check_weight_conditions(&spec, &w, 3, None), Err(Error::MissingWeight(_))));
    }

    #[test]
    fn vertex_weights_of_examples() {
        let (spec, w) = generate(&FamilyParams::Odometer { base: 2 }, 5).unwrap();
        assert_eq!(vertex_weight(&spec, &w, 5, 0).unwrap(), rat(1, 32));
        let (spec, w) = generate(&FamilyParams::Chacon, 2).unwrap();
        assert_eq!(vertex_weight(&spec, &w, 1, 0).unwrap(), rat(2, 9));
        assert_eq!(vertex_weight(&spec, &w, 1, 1).unwrap(), rat(1, 9));
    }

    #[test]
    fn cylinder_of_depth_three_odometer_path() {
        let (spec, w) = generate(&FamilyParams::Odometer { base: 2 }, 3).unwrap();
        let wh = WeightedHalf::new(spec.positive_half(), w.plus).unwrap();
        assert_eq!(measure_of_cylinder(&wh, &[0, 1, 0]).unwrap(), rat(1, 8));
        assert!(measure_of_cylinder(&wh, &[]).is_err());
    }

    #[test]
    fn telescoped_weights_multiply() {
        let (spec, w) = generate(&FamilyParams::Odometer { base: 2 }, 4).unwrap();
        let tw = telescope_weights(&spec, &w, &[-4, -2, 0, 2, 4]).unwrap();
        assert!(tw.plus.edges[0].iter().all(|x| *x == rat(1, 4)));
        assert_eq!(tw.plus.root, vec![int(1)]);
    }
}
