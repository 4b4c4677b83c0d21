//! Pointwise evaluation of the adic map by coding points as paths, without
//! materializing the stacks. Reaches depths where the stacks would not fit.

use crate::cas::{closed_columns, Endpoints};
use crate::error::{Error, Result};
use crate::pathspace::Path;
use crate::scalar::Scalar;
use crate::weights::WeightedHalf;

#[derive(Clone, Debug, PartialEq)]
pub enum AdicImage<S> {
    /// The image and the depth at which it was resolved.
    Image { x: S, depth: usize },
    /// On a level boundary at some depth (or within the float hit tolerance).
    Singular,
    /// Still in a top level at the deepest available level.
    DepthExceeded { depth: usize },
}

/// Path coding of a point: the path, the left end of its level and the
/// offset of the point inside it.
#[derive(Clone, Debug, PartialEq)]
pub struct Coding<S> {
    pub start: usize,
    pub path: Path,
    pub lo: S,
    pub offset: S,
}

#[derive(Clone, Debug)]
pub struct AdicMap<S> {
    wh: WeightedHalf<S>,
    /// `s_offset[i-1][k]`: mass of the edges before `k` in the s-order of its
    /// source, relative to the source's weight.
    s_offset: Vec<Vec<S>>,
    closed_top: Vec<Vec<bool>>,
    pub endpoints: Endpoints,
}

impl<S: Scalar> AdicMap<S> {
    pub fn new(wh: WeightedHalf<S>, endpoints: Endpoints) -> Result<Self> {
        crate::cas::check_compilable(&wh)?;
        let half = &wh.half;
        let mut s_offset = Vec::with_capacity(half.depth());
        for i in 1..=half.depth() {
            let mut off = vec![S::zero(); half.edges(i).len()];
            for u in 0..half.count(i - 1) {
                let mut acc = S::zero();
                for &k in half.outgoing(i, u) {
                    off[k] = acc.clone();
                    acc = acc + wh.edge_weight(i, k).clone();
                }
            }
            s_offset.push(off);
        }
        let closed_top = (0..=half.depth()).map(|n| closed_columns(half, n)).collect();
        Ok(AdicMap { wh, s_offset, closed_top, endpoints })
    }

    pub fn weighted(&self) -> &WeightedHalf<S> {
        &self.wh
    }

    pub fn max_depth(&self) -> usize {
        self.wh.depth()
    }

    pub fn total(&self) -> S {
        self.wh.weights.total()
    }

    fn tol(&self) -> S {
        S::hit_tolerance() * self.total()
    }

    fn on_boundary(&self, y: &S, cut: &S, tol: &S) -> bool {
        let d = (y.clone() - cut.clone()).abs();
        if S::EXACT {
            d.is_zero() && self.endpoints == Endpoints::Open
        } else {
            d <= *tol
        }
    }

    /// Code `x` to `depth` levels, or `None` if it lies on a level boundary.
    pub fn code(&self, x: &S, depth: usize) -> Result<Option<Coding<S>>> {
        let total = self.total();
        if *x < S::zero() || *x > total {
            return Err(Error::OutsideDomain(format!("{x} is outside [0, {total}]")));
        }
        if depth > self.max_depth() {
            return Err(Error::DepthExceedsWindow { requested: depth, available: self.max_depth() });
        }
        let tol = self.tol();
        let mut lo = S::zero();
        let mut start = None;
        for (v, w) in self.wh.weights.root.iter().enumerate() {
            let y = x.clone() - lo.clone();
            if self.on_boundary(&y, &S::zero(), &tol) || self.on_boundary(&y, w, &tol) {
                return Ok(None);
            }
            if y < *w {
                start = Some(v);
                break;
            }
            lo = lo + w.clone();
        }
        let Some(start) = start else { return Ok(None) };
        let mut coding = Coding { start, path: Vec::new(), lo: lo.clone(), offset: x.clone() - lo };
        for _ in 0..depth {
            if !self.descend(&mut coding, &tol) {
                return Ok(None);
            }
        }
        Ok(Some(coding))
    }

    fn current_vertex(&self, c: &Coding<S>) -> usize {
        match c.path.last() {
            Some(&k) => self.wh.half.edge(c.path.len(), k).dst,
            None => c.start,
        }
    }

    /// One more level of coding; false on a boundary.
    fn descend(&self, c: &mut Coding<S>, tol: &S) -> bool {
        let level = c.path.len() + 1;
        let u = self.current_vertex(c);
        let wu = &self.wh.vertex[level - 1][u];
        let outs = self.wh.half.outgoing(level, u);
        for &k in outs {
            let cut = wu.clone() * self.s_offset[level - 1][k].clone();
            let width = wu.clone() * self.wh.edge_weight(level, k).clone();
            let y = c.offset.clone() - cut.clone();
            if self.on_boundary(&y, &S::zero(), tol) || self.on_boundary(&y, &width, tol) {
                return false;
            }
            if y < width {
                c.path.push(k);
                c.lo = c.lo.clone() + cut;
                c.offset = y;
                return true;
            }
        }
        false
    }

    /// Left end of the level of a full path from `start`.
    pub fn level_start(&self, start: usize, path: &[usize]) -> S {
        let mut lo = self.wh.weights.root[..start].iter().cloned().fold(S::zero(), |a, b| a + b);
        let mut u = start;
        for (j, &k) in path.iter().enumerate() {
            lo = lo + self.wh.vertex[j][u].clone() * self.s_offset[j][k].clone();
            u = self.wh.half.edge(j + 1, k).dst;
        }
        lo
    }

    pub fn eval(&self, x: &S) -> Result<AdicImage<S>> {
        self.eval_to(x, self.max_depth())
    }

    /// Deepen the coding until the point leaves the top levels, up to `limit`.
    pub fn eval_to(&self, x: &S, limit: usize) -> Result<AdicImage<S>> {
        let limit = limit.min(self.max_depth());
        let Some(mut c) = self.code(x, 0)? else { return Ok(AdicImage::Singular) };
        let half = &self.wh.half;
        let tol = self.tol();
        for n in 1..=limit {
            if !self.descend(&mut c, &tol) {
                return Ok(AdicImage::Singular);
            }
            let Some(i) = (1..=n).find(|&i| !half.is_r_max(i, c.path[i - 1])) else {
                if self.closed_top[n][self.current_vertex(&c)] {
                    // one-path column glued to itself
                    return Ok(AdicImage::Image { x: x.clone(), depth: n });
                }
                continue;
            };
            let k = c.path[i - 1];
            let e = half.edge(i, k);
            let ins = half.incoming(i, e.dst);
            let pos = ins.iter().position(|&j| j == k).expect("listed");
            let mut next = c.path.clone();
            next[i - 1] = ins[pos + 1];
            let below = crate::pathspace::min_path_into(half, i - 1, half.edge(i, next[i - 1]).src);
            next[..i - 1].copy_from_slice(&below);
            let start = half.edge(1, next[0]).src;
            let lo = self.level_start(start, &next);
            return Ok(AdicImage::Image { x: lo + c.offset.clone(), depth: n });
        }
        Ok(AdicImage::DepthExceeded { depth: limit })
    }
}
