//! Flat surfaces from a weighted diagram: diagonal rectangles whose top and
//! bottom sides are glued by the positive-half map and whose right and left
//! sides are glued by the negative-half map.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cas::{iet_at_depth, Endpoints, IetImage, IntervalExchange};
use crate::diagram::DiagramSpec;
use crate::error::{Error, Result};
use crate::lazy::{AdicImage, AdicMap};
use crate::scalar::{rat, Scalar};
use crate::weights::{WeightPair, WeightedHalf};

/// Default cap on how deep lazily evaluated gluings may look.
pub const MAX_REFINE_DEPTH: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Rect<S> {
    pub width: S,
    pub height: S,
    /// Lower-left corner; rectangles sit on the diagonal.
    pub x0: S,
    pub y0: S,
}

#[derive(Clone, Debug)]
enum GluingKind<S> {
    Stacks { iet: IntervalExchange<S>, depth: usize },
    Lazy(AdicMap<S>),
}

/// One side gluing in surface coordinates: the diagram map conjugated by a
/// linear rescaling.
#[derive(Clone, Debug)]
pub struct Gluing<S> {
    kind: GluingKind<S>,
    scale: S,
}

#[derive(Clone, Debug, PartialEq)]
pub enum GlueResult<S> {
    Image(S),
    Singular,
    DepthExceeded { suggested_depth: usize },
}

impl<S: Scalar> Gluing<S> {
    fn stacks(iet: IntervalExchange<S>, depth: usize) -> Self {
        Gluing { kind: GluingKind::Stacks { iet, depth }, scale: S::one() }
    }

    fn lazy(map: AdicMap<S>) -> Self {
        Gluing { kind: GluingKind::Lazy(map), scale: S::one() }
    }

    pub fn scale(&self) -> &S {
        &self.scale
    }

    pub fn depth(&self) -> usize {
        match &self.kind {
            GluingKind::Stacks { depth, .. } => *depth,
            GluingKind::Lazy(m) => m.max_depth(),
        }
    }

    pub fn is_lazy(&self) -> bool {
        matches!(self.kind, GluingKind::Lazy(_))
    }

    pub fn apply(&self, x: &S) -> Result<GlueResult<S>> {
        let u = x.clone() / self.scale.clone();
        Ok(match &self.kind {
            GluingKind::Stacks { iet, depth } => match iet.apply(&u)? {
                IetImage::Image(y) => GlueResult::Image(y * self.scale.clone()),
                IetImage::Undefined => {
                    if iet.undefined.iter().any(|(a, b)| *a < u && u < *b) {
                        GlueResult::DepthExceeded { suggested_depth: (2 * depth).clamp(1, MAX_REFINE_DEPTH) }
                    } else {
                        GlueResult::Singular
                    }
                }
            },
            GluingKind::Lazy(m) => match m.eval(&u)? {
                AdicImage::Image { x, .. } => GlueResult::Image(x * self.scale.clone()),
                AdicImage::Singular => GlueResult::Singular,
                AdicImage::DepthExceeded { depth } => {
                    GlueResult::DepthExceeded { suggested_depth: (2 * depth).clamp(1, MAX_REFINE_DEPTH) }
                }
            },
        })
    }

    /// The depth-`depth` interval exchange, in surface coordinates.
    pub fn materialize(&self, depth: usize) -> Result<IntervalExchange<S>> {
        let iet = match &self.kind {
            GluingKind::Stacks { iet, depth: d } if *d == depth => iet.clone(),
            GluingKind::Stacks { depth: d, .. } => {
                return Err(Error::DepthExceedsWindow { requested: depth, available: *d });
            }
            GluingKind::Lazy(m) => iet_at_depth(&m.weighted().truncated(depth), depth)?,
        };
        Ok(iet.scaled(&self.scale))
    }
}

/// Rectangles plus the two gluings. `hscale`/`vscale` record the
/// Teichmuller stretch applied since construction.
#[derive(Clone, Debug)]
pub struct FlatSurfaceModel<S> {
    pub rects: Vec<Rect<S>>,
    pub plus: Gluing<S>,
    pub minus: Gluing<S>,
    pub depth: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SurfacePoint<S> {
    pub rect: usize,
    pub x: S,
    pub y: S,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Direction {
    Vertical,
    Horizontal,
}

#[derive(Clone, Debug, PartialEq)]
pub enum FlowOutcome<S> {
    Arrived(SurfacePoint<S>),
    /// Reached a point of the singular set after flowing for `time`.
    SingularHit { at: SurfacePoint<S>, time: S },
    /// Entered a region where the gluing is undefined at the current depth.
    DepthExceeded { at: SurfacePoint<S>, time: S, suggested_depth: usize },
}

/// One straight piece of a trajectory inside a rectangle.
#[derive(Clone, Debug, PartialEq)]
pub struct Segment<S> {
    pub start: SurfacePoint<S>,
    pub length: S,
    pub t0: S,
}

fn rects_from<S: Scalar>(plus: &[S], minus: &[S]) -> Vec<Rect<S>> {
    let (mut x, mut y) = (S::zero(), S::zero());
    plus.iter()
        .zip(minus)
        .map(|(w, h)| {
            let r = Rect { width: w.clone(), height: h.clone(), x0: x.clone(), y0: y.clone() };
            x = x.clone() + w.clone();
            y = y.clone() + h.clone();
            r
        })
        .collect()
}

fn halves<S: Scalar>(spec: &DiagramSpec, weights: &WeightPair<S>, depth: usize) -> Result<(WeightedHalf<S>, WeightedHalf<S>)> {
    let grown = spec.ensure_window(depth, depth)?;
    // a regenerated window needs the generator's weights to match
    let weights = match &spec.generator {
        Some(g) if weights.check_shape(&grown).is_err() => {
            crate::families::generate(g, depth.max(grown.max_level() as usize))?.1.map(S::from_rational)
        }
        _ => weights.clone(),
    };
    let spec = grown;
    weights.check_shape(&spec)?;
    let pos = WeightedHalf::new(spec.positive_half().truncated(depth), weights.plus.truncated(depth))?;
    let neg = WeightedHalf::new(spec.negative_half().truncated(depth), weights.minus.truncated(depth))?;
    Ok((pos, neg))
}

/// Surface with both gluings materialized as depth-`depth` stacks.
pub fn build_surface<S: Scalar>(spec: &DiagramSpec, weights: &WeightPair<S>, depth: usize) -> Result<FlatSurfaceModel<S>> {
    let (pos, neg) = halves(spec, weights, depth)?;
    let rects = rects_from(&pos.weights.root, &neg.weights.root);
    let plus = Gluing::stacks(iet_at_depth(&pos, depth)?, depth);
    let minus = Gluing::stacks(iet_at_depth(&neg, depth)?, depth);
    Ok(FlatSurfaceModel { rects, plus, minus, depth })
}

/// Surface whose gluings are evaluated pointwise, looking up to `depth`
/// levels deep. Suited to long flows.
pub fn build_surface_lazy<S: Scalar>(spec: &DiagramSpec, weights: &WeightPair<S>, depth: usize) -> Result<FlatSurfaceModel<S>> {
    let (pos, neg) = halves(spec, weights, depth)?;
    let rects = rects_from(&pos.weights.root, &neg.weights.root);
    let plus = Gluing::lazy(AdicMap::new(pos, Endpoints::Open)?);
    let minus = Gluing::lazy(AdicMap::new(neg, Endpoints::Open)?);
    Ok(FlatSurfaceModel { rects, plus, minus, depth })
}

impl<S: Scalar> FlatSurfaceModel<S> {
    pub fn area(&self) -> S {
        self.rects.iter().fold(S::zero(), |a, r| a + r.width.clone() * r.height.clone())
    }

    pub fn total_width(&self) -> S {
        self.rects.iter().fold(S::zero(), |a, r| a + r.width.clone())
    }

    pub fn total_height(&self) -> S {
        self.rects.iter().fold(S::zero(), |a, r| a + r.height.clone())
    }

    /// Seeded interior point with coordinates that are odd-denominator
    /// fractions of the rectangle sides, so they avoid dyadic breakpoints.
    /// The rectangle is drawn with probability proportional to its area.
    pub fn seeded_point(&self, seed: u64) -> SurfacePoint<S> {
        const DEN: i64 = 1_000_003;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pick = rng.random::<f64>() * self.area().to_f64();
        let mut rect = self.rects.len() - 1;
        for (i, r) in self.rects.iter().enumerate() {
            let a = r.width.to_f64() * r.height.to_f64();
            if pick < a {
                rect = i;
                break;
            }
            pick -= a;
        }
        let r = &self.rects[rect];
        let x = S::from_rational(&rat(rng.random_range(1..DEN), DEN)) * r.width.clone();
        let y = S::from_rational(&rat(rng.random_range(1..DEN), DEN)) * r.height.clone();
        SurfacePoint { rect, x, y }
    }

    /// Stretch horizontally by `stretch` (that is `e^t`) and shrink vertically
    /// by the same factor.
    pub fn teichmuller(&self, stretch: &S) -> Result<FlatSurfaceModel<S>> {
        if *stretch <= S::zero() {
            return Err(Error::InvalidParams(format!("stretch factor {stretch} must be positive")));
        }
        let inv = S::one() / stretch.clone();
        let rects = self
            .rects
            .iter()
            .map(|r| Rect {
                width: r.width.clone() * stretch.clone(),
                height: r.height.clone() * inv.clone(),
                x0: r.x0.clone() * stretch.clone(),
                y0: r.y0.clone() * inv.clone(),
            })
            .collect();
        let mut out = self.clone();
        out.rects = rects;
        out.plus.scale = self.plus.scale.clone() * stretch.clone();
        out.minus.scale = self.minus.scale.clone() * inv;
        Ok(out)
    }

    fn check_point(&self, p: &SurfacePoint<S>) -> Result<()> {
        let Some(r) = self.rects.get(p.rect) else {
            return Err(Error::OutsideDomain(format!("no rectangle {}", p.rect)));
        };
        if p.x < S::zero() || p.x > r.width || p.y < S::zero() || p.y > r.height {
            return Err(Error::OutsideDomain(format!("({}, {}) is outside rectangle {}", p.x, p.y, p.rect)));
        }
        Ok(())
    }

    /// Rectangle whose open horizontal (or vertical) extent contains `u`.
    fn locate(&self, u: &S, dir: Direction) -> Option<(usize, S)> {
        let tol = S::hit_tolerance() * self.total_width().max_abs(&self.total_height());
        for (i, r) in self.rects.iter().enumerate() {
            let (lo, len) = match dir {
                Direction::Vertical => (&r.x0, &r.width),
                Direction::Horizontal => (&r.y0, &r.height),
            };
            let d = u.clone() - lo.clone();
            if d > tol && d < len.clone() - tol.clone() {
                return Some((i, d));
            }
        }
        None
    }

    pub fn flow(&self, p: &SurfacePoint<S>, t: &S, dir: Direction) -> Result<FlowOutcome<S>> {
        self.flow_segments(p, t, dir, |_| {})
    }

    /// Flow for time `t >= 0`, reporting every straight segment.
    pub fn flow_segments(
        &self,
        p: &SurfacePoint<S>,
        t: &S,
        dir: Direction,
        mut seg: impl FnMut(&Segment<S>),
    ) -> Result<FlowOutcome<S>> {
        self.check_point(p)?;
        if *t < S::zero() {
            return Err(Error::InvalidParams("flow time must be nonnegative".into()));
        }
        let mut cur = p.clone();
        let mut left = t.clone();
        let mut elapsed = S::zero();
        loop {
            let r = &self.rects[cur.rect];
            let (along, extent) = match dir {
                Direction::Vertical => (&cur.y, &r.height),
                Direction::Horizontal => (&cur.x, &r.width),
            };
            let room = extent.clone() - along.clone();
            if left < room || left.is_zero() {
                seg(&Segment { start: cur.clone(), length: left.clone(), t0: elapsed.clone() });
                let mut end = cur.clone();
                match dir {
                    Direction::Vertical => end.y = end.y.clone() + left.clone(),
                    Direction::Horizontal => end.x = end.x.clone() + left.clone(),
                }
                return Ok(FlowOutcome::Arrived(end));
            }
            seg(&Segment { start: cur.clone(), length: room.clone(), t0: elapsed.clone() });
            left = left - room.clone();
            elapsed = elapsed + room;
            let (global, gluing) = match dir {
                Direction::Vertical => (r.x0.clone() + cur.x.clone(), &self.plus),
                Direction::Horizontal => (r.y0.clone() + cur.y.clone(), &self.minus),
            };
            let mut at_edge = cur.clone();
            match dir {
                Direction::Vertical => at_edge.y = r.height.clone(),
                Direction::Horizontal => at_edge.x = r.width.clone(),
            }
            let image = match gluing.apply(&global)? {
                GlueResult::Image(u) => u,
                GlueResult::Singular => return Ok(FlowOutcome::SingularHit { at: at_edge, time: elapsed }),
                GlueResult::DepthExceeded { suggested_depth } => {
                    return Ok(FlowOutcome::DepthExceeded { at: at_edge, time: elapsed, suggested_depth })
                }
            };
            let Some((j, d)) = self.locate(&image, dir) else {
                return Ok(FlowOutcome::SingularHit { at: at_edge, time: elapsed });
            };
            cur = match dir {
                Direction::Vertical => SurfacePoint { rect: j, x: d, y: S::zero() },
                Direction::Horizontal => SurfacePoint { rect: j, x: S::zero(), y: d },
            };
        }
    }

    /// Time average of the indicator of `region` along the trajectory.
    pub fn birkhoff_average(
        &self,
        p: &SurfacePoint<S>,
        t: &S,
        dir: Direction,
        region: &Region<S>,
        max_samples: usize,
    ) -> Result<BirkhoffReport<S>> {
        let mut inside = S::zero();
        let mut samples = Vec::new();
        let outcome = self.flow_segments(p, t, dir, |s| {
            inside = inside.clone() + region.time_inside(self, s, dir);
            if samples.len() < max_samples {
                samples.push(s.start.clone());
            }
        })?;
        let covered = match &outcome {
            FlowOutcome::Arrived(_) => t.clone(),
            FlowOutcome::SingularHit { time, .. } | FlowOutcome::DepthExceeded { time, .. } => time.clone(),
        };
        let mean = if covered.is_zero() { None } else { Some(inside.clone() / covered.clone()) };
        Ok(BirkhoffReport { time: covered, inside, mean, samples, outcome })
    }
}

trait MaxAbs {
    fn max_abs(&self, other: &Self) -> Self;
}

impl<S: Scalar> MaxAbs for S {
    fn max_abs(&self, other: &S) -> S {
        if self.abs() >= other.abs() {
            self.abs()
        } else {
            other.abs()
        }
    }
}

/// Observable regions: an axis-parallel box inside one rectangle (local
/// coordinates), or the whole surface.
#[derive(Clone, Debug, PartialEq)]
pub enum Region<S> {
    Everything,
    Box { rect: usize, x: (S, S), y: (S, S) },
}

fn overlap<S: Scalar>(a: &S, b: &S, lo: &S, hi: &S) -> S {
    let l = if a > lo { a.clone() } else { lo.clone() };
    let h = if b < hi { b.clone() } else { hi.clone() };
    if h > l {
        h - l
    } else {
        S::zero()
    }
}

impl<S: Scalar> Region<S> {
    fn time_inside(&self, _surface: &FlatSurfaceModel<S>, s: &Segment<S>, dir: Direction) -> S {
        match self {
            Region::Everything => s.length.clone(),
            Region::Box { rect, x, y } => {
                if s.start.rect != *rect {
                    return S::zero();
                }
                let (fixed, range, moving, span) = match dir {
                    Direction::Vertical => (&s.start.x, x, &s.start.y, y),
                    Direction::Horizontal => (&s.start.y, y, &s.start.x, x),
                };
                if *fixed < range.0 || *fixed >= range.1 {
                    return S::zero();
                }
                overlap(moving, &(moving.clone() + s.length.clone()), &span.0, &span.1)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BirkhoffReport<S> {
    /// Time actually flowed; shorter than requested if the flow stopped.
    pub time: S,
    pub inside: S,
    pub mean: Option<S>,
    pub samples: Vec<SurfacePoint<S>>,
    pub outcome: FlowOutcome<S>,
}
