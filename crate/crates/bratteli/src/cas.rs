//! Cutting and stacking: stage-k stacks of one weighted half and the depth-K
//! interval exchange they define.

use std::cmp::Ordering;

use serde::Serialize;

use crate::diagram::Half;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::weights::WeightedHalf;

/// Whether a piece's left endpoint belongs to it. Levels are open intervals
/// by default; `LeftClosed` is the usual `[a, b)` reading of the same map.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum Endpoints {
    #[default]
    Open,
    LeftClosed,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Column<S> {
    pub vertex: usize,
    pub width: S,
    /// Left endpoints of the levels, bottom first.
    pub levels: Vec<S>,
    /// The column's top is glued back to its bottom.
    pub closed: bool,
}

impl<S: Scalar> Column<S> {
    pub fn height(&self) -> usize {
        self.levels.len()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StackStage<S> {
    pub stage: usize,
    pub columns: Vec<Column<S>>,
}

/// Vertices of `stage` whose column is final: its one-to-one history reaches
/// back to level 0 (at the window end) or it feeds a single final column.
pub fn closed_columns(half: &Half, stage: usize) -> Vec<bool> {
    let one_to_one = |i: usize, v: usize| match half.incoming(i, v) {
        [k] => Some(half.edge(i, *k).src).filter(|&u| half.outgoing(i, u).len() == 1),
        _ => None,
    };
    // a window without transitions carries no evidence of closure
    let mut closed = vec![half.depth() > 0; half.count(0)];
    for i in 1..=stage {
        closed = (0..half.count(i)).map(|v| one_to_one(i, v).is_some_and(|u| closed[u])).collect();
    }
    for (u, c) in closed.iter_mut().enumerate() {
        let mut cur = u;
        for i in stage + 1..=half.depth() {
            if !*c {
                break;
            }
            match half.outgoing(i, cur) {
                [k] => {
                    cur = half.edge(i, *k).dst;
                    *c = half.incoming(i, cur).len() == 1;
                }
                _ => *c = false,
            }
        }
    }
    closed
}

fn tolerance<S: Scalar>(scale: &S) -> S {
    S::hit_tolerance() * scale.clone()
}

fn near<S: Scalar>(a: &S, b: &S, tol: &S) -> bool {
    (a.clone() - b.clone()).abs() <= *tol
}

/// Path independence and outgoing normalization, exactly for rationals and
/// up to the hit tolerance for floats.
pub fn check_compilable<S: Scalar>(wh: &WeightedHalf<S>) -> Result<()> {
    let half = &wh.half;
    let tol = S::hit_tolerance() * S::from_int(1 << 10);
    for i in 1..=wh.depth() {
        for u in 0..half.count(i - 1) {
            let sum = half.outgoing(i, u).iter().fold(S::zero(), |a, &k| a + wh.edge_weight(i, k).clone());
            if !near(&sum, &S::one(), &tol) {
                return Err(Error::InvalidWeights(format!("outgoing weights of vertex {u} at level {} sum to {sum}", i - 1)));
            }
        }
        for v in 0..half.count(i) {
            for &k in half.incoming(i, v) {
                let e = half.edge(i, k);
                let w = wh.vertex[i - 1][e.src].clone() * wh.edge_weight(i, k).clone();
                if !near(&w, &wh.vertex[i][v], &(tol.clone() * wh.vertex[i][v].clone())) {
                    return Err(Error::InvalidWeights(format!("vertex {v} at level {i} has path-dependent weight")));
                }
            }
        }
    }
    Ok(())
}

/// Stages `0..=depth`, built by literally cutting each column along the
/// s-order and restacking along the r-order.
pub fn build_stacks<S: Scalar>(wh: &WeightedHalf<S>, depth: usize) -> Result<Vec<StackStage<S>>> {
    if depth > wh.depth() {
        return Err(Error::DepthExceedsWindow { requested: depth, available: wh.depth() });
    }
    check_compilable(wh)?;
    let half = wh.half.truncated(depth);
    let mut x = S::zero();
    let mut columns = Vec::new();
    for (v, w) in wh.weights.root.iter().enumerate() {
        columns.push(Column { vertex: v, width: w.clone(), levels: vec![x.clone()], closed: false });
        x = x + w.clone();
    }
    let mut stages = vec![StackStage { stage: 0, columns }];
    for i in 1..=depth {
        let prev = &stages[i - 1].columns;
        // subcolumn per edge: the previous column shifted by its s-offset
        let mut sub: Vec<Vec<S>> = vec![Vec::new(); half.edges(i).len()];
        for (u, col) in prev.iter().enumerate() {
            let mut off = S::zero();
            for &k in half.outgoing(i, u) {
                sub[k] = col.levels.iter().map(|a| a.clone() + off.clone()).collect();
                off = off + col.width.clone() * wh.edge_weight(i, k).clone();
            }
        }
        let columns = (0..half.count(i))
            .map(|v| Column {
                vertex: v,
                width: wh.vertex[i][v].clone(),
                levels: half.incoming(i, v).iter().flat_map(|&k| sub[k].iter().cloned()).collect(),
                closed: false,
            })
            .collect();
        stages.push(StackStage { stage: i, columns });
    }
    for st in &mut stages {
        let closed = closed_columns(&half, st.stage);
        for c in &mut st.columns {
            c.closed = closed[c.vertex];
        }
    }
    Ok(stages)
}

/// Left endpoint and width of the level assigned to a depth-n path.
pub fn path_interval<S: Scalar>(wh: &WeightedHalf<S>, path: &[usize]) -> Result<(S, S)> {
    crate::pathspace::check_path(&wh.half, path)?;
    let half = &wh.half;
    let start = match path.first() {
        Some(&k) => half.edge(1, k).src,
        None => return Err(Error::InvalidPath("empty path".into())),
    };
    let mut lo = wh.weights.root[..start].iter().cloned().fold(S::zero(), |a, b| a + b);
    for (j, &k) in path.iter().enumerate() {
        let level = j + 1;
        let e = half.edge(level, k);
        for &k2 in half.outgoing(level, e.src) {
            if k2 == k {
                break;
            }
            lo = lo + wh.vertex[level - 1][e.src].clone() * wh.edge_weight(level, k2).clone();
        }
    }
    let width = wh.vertex[path.len()][half.edge(path.len(), path[path.len() - 1]).dst].clone();
    Ok((lo, width))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Piece<S> {
    pub lo: S,
    pub hi: S,
    pub offset: S,
}

#[derive(Clone, Debug, PartialEq)]
pub enum IetImage<S> {
    Image(S),
    /// In a top level, on a breakpoint, or within the float hit tolerance of one.
    Undefined,
}

/// Piecewise translation of `[domain.0, domain.1]`. `pieces` and `undefined`
/// (the top levels) together tile the domain.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalExchange<S> {
    pub domain: (S, S),
    pub pieces: Vec<Piece<S>>,
    pub undefined: Vec<(S, S)>,
    pub endpoints: Endpoints,
}

fn cmp<S: Scalar>(a: &S, b: &S) -> Ordering {
    a.partial_cmp(b).unwrap_or(Ordering::Equal)
}

impl<S: Scalar> IntervalExchange<S> {
    pub fn with_endpoints(mut self, endpoints: Endpoints) -> Self {
        self.endpoints = endpoints;
        self
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn apply(&self, x: &S) -> Result<IetImage<S>> {
        let (a, b) = &self.domain;
        if x < a || x > b {
            return Err(Error::OutsideDomain(format!("{x} is outside [{a}, {b}]")));
        }
        let tol = tolerance(&(b.clone() - a.clone()));
        // last piece with lo <= x
        let idx = self.pieces.partition_point(|p| p.lo <= *x);
        if idx == 0 {
            return Ok(IetImage::Undefined);
        }
        let p = &self.pieces[idx - 1];
        if *x >= p.hi || near(x, &p.hi, &tol) {
            return Ok(IetImage::Undefined);
        }
        if near(x, &p.lo, &tol) && !(self.endpoints == Endpoints::LeftClosed && *x == p.lo) {
            return Ok(IetImage::Undefined);
        }
        Ok(IetImage::Image(x.clone() + p.offset.clone()))
    }

    /// Total length of the pieces and of their images, and whether the images
    /// are pairwise disjoint.
    pub fn measure_check(&self) -> (S, S, bool) {
        let src = self.pieces.iter().fold(S::zero(), |a, p| a + (p.hi.clone() - p.lo.clone()));
        let mut images: Vec<(S, S)> =
            self.pieces.iter().map(|p| (p.lo.clone() + p.offset.clone(), p.hi.clone() + p.offset.clone())).collect();
        images.sort_by(|x, y| cmp(&x.0, &y.0));
        let img = images.iter().fold(S::zero(), |a, (l, h)| a + (h.clone() - l.clone()));
        let disjoint = images.windows(2).all(|w| w[0].1 <= w[1].0);
        (src, img, disjoint)
    }

    /// Adjacent pieces with equal offsets fused.
    pub fn merged(&self) -> Vec<Piece<S>> {
        let mut out: Vec<Piece<S>> = Vec::new();
        for p in &self.pieces {
            match out.last_mut() {
                Some(q) if q.hi == p.lo && q.offset == p.offset => q.hi = p.hi.clone(),
                _ => out.push(p.clone()),
            }
        }
        out
    }

    pub fn undefined_length(&self) -> S {
        self.undefined.iter().fold(S::zero(), |a, (l, h)| a + (h.clone() - l.clone()))
    }

    /// Same map with all coordinates multiplied by `factor`.
    pub fn scaled(&self, factor: &S) -> IntervalExchange<S> {
        let f = |x: &S| x.clone() * factor.clone();
        IntervalExchange {
            domain: (f(&self.domain.0), f(&self.domain.1)),
            pieces: self.pieces.iter().map(|p| Piece { lo: f(&p.lo), hi: f(&p.hi), offset: f(&p.offset) }).collect(),
            undefined: self.undefined.iter().map(|(a, b)| (f(a), f(b))).collect(),
            endpoints: self.endpoints,
        }
    }
}

/// The map defined by one stage: each level moves to the one above it and
/// closed columns wrap from top to bottom.
pub fn iet_from_stage<S: Scalar>(stage: &StackStage<S>, domain: (S, S)) -> IntervalExchange<S> {
    let mut pieces = Vec::new();
    let mut undefined = Vec::new();
    for col in &stage.columns {
        let w = &col.width;
        for pair in col.levels.windows(2) {
            pieces.push(Piece { lo: pair[0].clone(), hi: pair[0].clone() + w.clone(), offset: pair[1].clone() - pair[0].clone() });
        }
        let (Some(top), Some(bottom)) = (col.levels.last(), col.levels.first()) else { continue };
        if col.closed {
            pieces.push(Piece { lo: top.clone(), hi: top.clone() + w.clone(), offset: bottom.clone() - top.clone() });
        } else {
            undefined.push((top.clone(), top.clone() + w.clone()));
        }
    }
    pieces.sort_by(|a, b| cmp(&a.lo, &b.lo));
    undefined.sort_by(|a, b| cmp(&a.0, &b.0));
    IntervalExchange { domain, pieces, undefined, endpoints: Endpoints::Open }
}

/// The depth-K approximation `f_K` of the cutting-and-stacking map.
pub fn iet_at_depth<S: Scalar>(wh: &WeightedHalf<S>, depth: usize) -> Result<IntervalExchange<S>> {
    let stages = build_stacks(wh, depth)?;
    let domain = (S::zero(), wh.weights.total());
    Ok(iet_from_stage(stages.last().expect("stage 0 exists"), domain))
}
