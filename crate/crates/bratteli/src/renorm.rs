//! The shift on diagrams, renormalization times, and a pointwise check that
//! shifting matches Teichmuller deformation followed by cutting and stacking.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::diagram::{heights, DiagramSpec, Half};
use crate::error::{Error, Result};
use crate::pathspace::{all_paths, Path};
use crate::scalar::{fmt_rational, Rational, Scalar};
use crate::surface::{build_surface_lazy, FlatSurfaceModel, GlueResult};
use crate::weights::{vertex_weights, HalfWeights, WeightPair, WeightedHalf};

/// `e^{t_k} = 1 / sum of w+ over level k`, for `k = 0..=depth`.
pub fn renorm_scales<S: Scalar>(spec: &DiagramSpec, weights: &WeightPair<S>, depth: usize) -> Result<Vec<S>> {
    let half = spec.positive_half();
    if depth > half.depth() {
        return Err(Error::DepthExceedsWindow { requested: depth, available: half.depth() });
    }
    let half = half.truncated(depth);
    let vw = vertex_weights(&half, &weights.plus.truncated(depth))?;
    Ok(vw.iter().map(|l| S::one() / l.iter().cloned().fold(S::zero(), |a, b| a + b)).collect())
}

/// `t_0..t_K` as floats, for display.
pub fn renorm_times<S: Scalar>(spec: &DiagramSpec, weights: &WeightPair<S>, depth: usize) -> Result<Vec<f64>> {
    Ok(renorm_scales(spec, weights, depth)?.iter().map(|s| s.to_f64().ln()).collect())
}

/// A diagram shifted by `offset` levels with its rescaled weights.
#[derive(Clone, Debug)]
pub struct RenormState<S> {
    pub spec: DiagramSpec,
    pub weights: WeightPair<S>,
    pub offset: usize,
    /// `e^{t_1}..e^{t_offset}` of the original diagram.
    pub scales: Vec<S>,
}

impl<S: Scalar> RenormState<S> {
    pub fn scale(&self) -> S {
        self.scales.last().cloned().unwrap_or_else(S::one)
    }
}

/// Relabel level `k` as level 0. The positive root weights become the
/// normalized level-`k` widths and the negative root weights the level-`k`
/// heights shrunk by the same factor. The result carries no generator, so
/// its window is what the input window allowed.
pub fn shift<S: Scalar>(spec: &DiagramSpec, weights: &WeightPair<S>, k: usize) -> Result<RenormState<S>> {
    weights.check_shape(spec)?;
    if k as i64 > spec.max_level() {
        return Err(Error::DepthExceedsWindow { requested: k, available: spec.max_level() as usize });
    }
    let scales = renorm_scales(spec, weights, k)?;
    let lambda = scales[k].clone();
    let pos = spec.positive_half();
    let vw = vertex_weights(&pos.truncated(k), &weights.plus.truncated(k))?;
    let h: Vec<Vec<S>> = heights(spec, &weights.minus.root, k)?;

    let plus = HalfWeights {
        root: vw[k].iter().map(|x| x.clone() * lambda.clone()).collect(),
        edges: weights.plus.edges[k..].to_vec(),
    };
    let mut minus_edges = Vec::new();
    for j in (1..=k).rev() {
        let level = pos
            .edges(j)
            .iter()
            .map(|e| h[j - 1][e.src].clone() / h[j][e.dst].clone())
            .collect();
        minus_edges.push(level);
    }
    minus_edges.extend(weights.minus.edges.iter().cloned());
    let minus = HalfWeights { root: h[k].iter().map(|x| x.clone() / lambda.clone()).collect(), edges: minus_edges };

    let transitions: Vec<_> = spec.uppers().map(|u| spec.edges(u).to_vec()).collect();
    let shifted = DiagramSpec::new(spec.min_level() - k as i64, spec.counts().to_vec(), transitions)?;
    Ok(RenormState { spec: shifted, weights: WeightPair { plus, minus }, offset: k, scales: scales[1..].to_vec() })
}

/// Positive cuts such that the level mass drops at least by `ratio` between
/// consecutive cuts; all negative levels are kept.
pub fn auto_telescope<S: Scalar>(spec: &DiagramSpec, weights: &WeightPair<S>, depth: usize, ratio: &S) -> Result<Vec<i64>> {
    let scales = renorm_scales(spec, weights, depth)?;
    let mut cuts: Vec<i64> = (spec.min_level()..=0).collect();
    let mut last = 0usize;
    for j in 1..=depth {
        // mass ratio = scale[last] / scale[j]
        if scales[last].clone() <= ratio.clone() * scales[j].clone() {
            cuts.push(j as i64);
            last = j;
        }
    }
    Ok(cuts)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FunctorialityReport {
    pub shift: usize,
    pub depth: usize,
    pub seed: u64,
    #[serde(serialize_with = "crate::scalar::ser::rational")]
    pub scale: Rational,
    pub rect_mismatches: Vec<String>,
    pub plus_checked: usize,
    pub minus_checked: usize,
    pub skipped: usize,
    pub mismatches: Vec<String>,
}

impl FunctorialityReport {
    pub fn ok(&self) -> bool {
        self.rect_mismatches.is_empty() && self.mismatches.is_empty()
    }
}

/// Columns of the original surface over level-`k` vertices, cut into strips.
struct Restacked {
    lambda: Rational,
    plus: WeightedHalf<Rational>,
    /// Per level-`k` vertex, its paths bottom to top.
    columns: Vec<Vec<Path>>,
    /// Per level-`k` vertex, the strip heights' running sums (original units).
    cum: Vec<Vec<Rational>>,
    /// Column index and position of each path.
    place: BTreeMap<Path, (usize, usize)>,
    /// Paths from each level-0 vertex in left-to-right order.
    by_source: Vec<Vec<Path>>,
    x0: Vec<Rational>,
    y0: Vec<Rational>,
    widths: Vec<Rational>,
    heights: Vec<Rational>,
}

fn restack(spec: &DiagramSpec, weights: &WeightPair<Rational>, k: usize, lambda: Rational) -> Result<Restacked> {
    let pos = spec.positive_half();
    let plus = WeightedHalf::new(pos.clone(), weights.plus.clone())?;
    let half: Half = pos.truncated(k);
    let paths = all_paths(&half, k, 1 << 20)?;
    let mut columns: Vec<Vec<Path>> = vec![Vec::new(); half.count(k)];
    for p in paths {
        let v = half.edge(k, p[k - 1]).dst;
        columns[v].push(p);
    }
    let src = |p: &Path| half.edge(1, p[0]).src;
    let mut cum = Vec::new();
    let mut place = BTreeMap::new();
    let mut widths = Vec::new();
    let mut heights = Vec::new();
    for (v, col) in columns.iter().enumerate() {
        let mut acc = Rational::from_integer(0.into());
        let mut c = Vec::new();
        for (i, p) in col.iter().enumerate() {
            c.push(acc.clone());
            acc += weights.minus.root[src(p)].clone();
            place.insert(p.clone(), (v, i));
        }
        widths.push(plus.vertex[k][v].clone() * lambda.clone());
        heights.push(acc / lambda.clone());
        cum.push(c);
    }
    let mut by_source: Vec<Vec<Path>> = vec![Vec::new(); half.count(0)];
    let mut all: Vec<&Path> = place.keys().collect();
    let s_key = |p: &Path| -> Vec<usize> { p.iter().enumerate().map(|(j, &e)| half.edge(j + 1, e).s).collect() };
    all.sort_by_key(|p| s_key(p));
    for p in all {
        by_source[src(p)].push(p.clone());
    }
    let running = |v: &[Rational]| -> Vec<Rational> {
        let mut out = Vec::new();
        let mut acc = Rational::from_integer(0.into());
        for x in v {
            out.push(acc.clone());
            acc += x.clone();
        }
        out
    };
    let x0 = running(&widths);
    let y0 = running(&heights);
    Ok(Restacked { lambda, plus, columns, cum, place, by_source, x0, y0, widths, heights })
}

impl Restacked {
    fn locate(starts: &[Rational], lens: &[Rational], u: &Rational) -> Option<(usize, Rational)> {
        (0..starts.len()).find_map(|i| {
            let d = u.clone() - starts[i].clone();
            (d > Rational::from_integer(0.into()) && d < lens[i]).then_some((i, d))
        })
    }

    fn path_lo(&self, p: &Path) -> Rational {
        crate::cas::path_interval(&self.plus, p).expect("valid path").0
    }

    /// Top-to-bottom gluing in restacked coordinates.
    fn plus_map(&self, original: &FlatSurfaceModel<Rational>, xb: &Rational) -> Result<Option<Rational>> {
        let Some((v, x)) = Self::locate(&self.x0, &self.widths, xb) else { return Ok(None) };
        let top = self.columns[v].last().expect("nonempty column");
        let xo = self.path_lo(top) + x / self.lambda.clone();
        let GlueResult::Image(y) = original.plus.apply(&xo)? else { return Ok(None) };
        // the image sits on the bottom of some column
        for (w, col) in self.columns.iter().enumerate() {
            let bottom = &col[0];
            let lo = self.path_lo(bottom);
            let d = y.clone() - lo;
            if d > Rational::from_integer(0.into()) && d * self.lambda.clone() < self.widths[w] {
                return Ok(Some(self.x0[w].clone() + (y - self.path_lo(bottom)) * self.lambda.clone()));
            }
        }
        Err(Error::Unsupported(format!("image {} of a column top is not a column bottom", fmt_rational(&y))))
    }

    /// Right-to-left gluing in restacked coordinates.
    fn minus_map(&self, original: &FlatSurfaceModel<Rational>, yb: &Rational) -> Result<Option<Rational>> {
        let Some((v, y)) = Self::locate(&self.y0, &self.heights, yb) else { return Ok(None) };
        let yo = y * self.lambda.clone();
        let col = &self.columns[v];
        let zero = Rational::from_integer(0.into());
        let Some(i) = (0..col.len()).rev().find(|&i| self.cum[v][i] <= yo) else { return Ok(None) };
        let within = yo.clone() - self.cum[v][i].clone();
        if within == zero {
            return Ok(None);
        }
        let p = &col[i];
        let src = self.plus.half.edge(1, p[0]).src;
        let row = &self.by_source[src];
        let pos = row.iter().position(|q| q == p).expect("path listed");
        let (next, height) = if pos + 1 < row.len() {
            (row[pos + 1].clone(), within)
        } else {
            let r = &original.rects[src];
            let GlueResult::Image(y2) = original.minus.apply(&(r.y0.clone() + within))? else { return Ok(None) };
            let Some(j) = (0..original.rects.len())
                .find(|&j| y2 > original.rects[j].y0 && y2 < original.rects[j].y0.clone() + original.rects[j].height.clone())
            else {
                return Ok(None);
            };
            (self.by_source[j][0].clone(), y2 - original.rects[j].y0.clone())
        };
        let (w, idx) = self.place[&next];
        Ok(Some(self.y0[w].clone() + (self.cum[w][idx].clone() + height) / self.lambda.clone()))
    }
}

fn sample(rng: &mut ChaCha8Rng, hi: &Rational) -> Rational {
    let den: i64 = rng.random_range(1_000..1_000_000);
    let num: i64 = rng.random_range(1..den);
    hi.clone() * Rational::new(num.into(), den.into())
}

/// Compare the surface of the `k`-fold shift against the Teichmuller
/// deformed original surface restacked over level `k`, on `samples` seeded
/// random points of each gluing. Gluings are evaluated lazily to `depth`.
pub fn check_functoriality(
    spec: &DiagramSpec,
    weights: &WeightPair<Rational>,
    k: usize,
    samples: usize,
    depth: usize,
    seed: u64,
) -> Result<FunctorialityReport> {
    let (spec, weights) = if spec.max_level() >= (depth + k) as i64 && -spec.min_level() >= depth as i64 {
        (spec.clone(), weights.clone())
    } else {
        match &spec.generator {
            Some(g) => crate::families::generate(g, depth + k)?,
            None => return Err(Error::DepthExceedsWindow { requested: depth + k, available: spec.max_level() as usize }),
        }
    };
    let state = shift(&spec, &weights, k)?;
    let lambda = state.scale();
    let side_a = build_surface_lazy(&state.spec, &state.weights, depth)?;
    let original = build_surface_lazy(&spec, &weights, depth + k)?;
    let mut report = FunctorialityReport {
        shift: k,
        depth,
        seed,
        scale: lambda.clone(),
        rect_mismatches: Vec::new(),
        plus_checked: 0,
        minus_checked: 0,
        skipped: 0,
        mismatches: Vec::new(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if k == 0 {
        for _ in 0..samples {
            let x = sample(&mut rng, &side_a.total_width());
            let (a, b) = (side_a.plus.apply(&x)?, original.plus.apply(&x)?);
            if a != b {
                report.mismatches.push(format!("top at {}", fmt_rational(&x)));
            }
            report.plus_checked += 1;
        }
        return Ok(report);
    }
    let b = restack(&spec, &weights, k, lambda)?;
    for (v, r) in side_a.rects.iter().enumerate() {
        if r.width != b.widths[v] || r.height != b.heights[v] {
            report.rect_mismatches.push(format!(
                "rectangle {v}: shifted {} x {}, restacked {} x {}",
                fmt_rational(&r.width),
                fmt_rational(&r.height),
                fmt_rational(&b.widths[v]),
                fmt_rational(&b.heights[v])
            ));
        }
    }
    for _ in 0..samples {
        let x = sample(&mut rng, &side_a.total_width());
        match (side_a.plus.apply(&x)?, b.plus_map(&original, &x)?) {
            (GlueResult::Image(a), Some(bb)) => {
                report.plus_checked += 1;
                if a != bb {
                    report.mismatches.push(format!("top at {}: {} vs {}", fmt_rational(&x), fmt_rational(&a), fmt_rational(&bb)));
                }
            }
            _ => report.skipped += 1,
        }
        let y = sample(&mut rng, &side_a.total_height());
        match (side_a.minus.apply(&y)?, b.minus_map(&original, &y)?) {
            (GlueResult::Image(a), Some(bb)) => {
                report.minus_checked += 1;
                if a != bb {
                    report.mismatches.push(format!("right at {}: {} vs {}", fmt_rational(&y), fmt_rational(&a), fmt_rational(&bb)));
                }
            }
            _ => report.skipped += 1,
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{generate, FamilyParams, Seq};
    use crate::scalar::{int, rat};
    use crate::weights::check_weight_conditions;

    #[test]
    fn odometer_scales_are_powers_of_two() {
        let (spec, w) = generate(&FamilyParams::Odometer { base: 2 }, 6).unwrap();
        let s: Vec<Rational> = renorm_scales(&spec, &w, 6).unwrap();
        for (k, x) in s.iter().enumerate() {
            assert_eq!(*x, int(1 << k));
        }
        assert_eq!(renorm_times(&spec, &w, 0).unwrap(), vec![0.0]);
    }

    #[test]
    fn shifted_odometer_is_itself() {
        let (spec, w) = generate(&FamilyParams::Chamanara { base: 2 }, 6).unwrap();
        let st = shift(&spec, &w, 1).unwrap();
        assert_eq!(st.weights.plus.root, vec![int(1)]);
        assert_eq!(st.weights.minus.root, vec![int(1)]);
        assert_eq!(st.weights.minus.edges[0], vec![rat(1, 2), rat(1, 2)]);
        assert_eq!(st.spec.positive_half(), spec.positive_half().truncated(5));
        let same = shift(&spec, &w, 0).unwrap();
        assert_eq!(same.weights, w);
    }

    #[test]
    fn shifted_symmetric_widths() {
        let (spec, w) = generate(&FamilyParams::Symmetric { p: 2, n: Seq::Const(2) }, 6).unwrap();
        let st = shift(&spec, &w, 2).unwrap();
        assert_eq!(st.weights.plus.root, vec![rat(1, 2), rat(1, 2)]);
        let report = check_weight_conditions(&st.spec, &st.weights, 3, None).unwrap();
        assert!(report.is_ok(), "{:?}", report.violations);
    }

    #[test]
    fn shifts_compose() {
        let (spec, w) = generate(&FamilyParams::Chacon, 6).unwrap();
        let ab = shift(&spec, &w, 1).unwrap();
        let ab = shift(&ab.spec, &ab.weights, 2).unwrap();
        let c = shift(&spec, &w, 3).unwrap();
        assert_eq!(ab.weights, c.weights);
        assert_eq!(ab.spec, c.spec);
    }

    #[test]
    fn telescoping_halves_the_mass() {
        let (spec, w) = generate(&FamilyParams::Chacon, 6).unwrap();
        let cuts = auto_telescope(&spec, &w, 6, &rat(1, 2)).unwrap();
        assert!(cuts.contains(&0) && cuts.last() == Some(&6));
        let (spec, w) = generate(&FamilyParams::Symmetric { p: 2, n: Seq::Const(2) }, 6).unwrap();
        // mass ratio 1/3 per level after the first
        assert_eq!(auto_telescope(&spec, &w, 6, &rat(1, 2)).unwrap().iter().filter(|&&c| c > 0).count(), 5);
    }

    #[test]
    fn functoriality_small() {
        for f in [FamilyParams::Chamanara { base: 2 }, FamilyParams::Chacon] {
            let (spec, w) = generate(&f, 4).unwrap();
            let r = check_functoriality(&spec, &w, 1, 20, 24, 7).unwrap();
            assert!(r.ok(), "{f}: {:?} {:?}", r.rect_mismatches, r.mismatches);
            assert!(r.plus_checked > 10 && r.minus_checked > 10, "{r:?}");
            let r0 = check_functoriality(&spec, &w, 0, 10, 12, 7).unwrap();
            assert!(r0.ok());
        }
    }
}
