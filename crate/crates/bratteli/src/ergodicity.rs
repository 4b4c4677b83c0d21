//! Tunneling distances, the per-level quantities of the summability
//! criterion, and verdicts.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::diagram::{heights, DiagramSpec};
use crate::error::{Error, Result};
use crate::families::{FamilyParams, Seq};
use crate::renorm::{auto_telescope, renorm_scales};
use crate::scalar::{fmt_rational, Rational, Scalar};
use crate::weights::{telescope_weights, vertex_weights, WeightPair};

pub const DEFAULT_SEARCH_BOUND: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Tunnel {
    Finite(usize),
    /// No connection within `searched` levels. `disconnected` means the
    /// searched window splits the level into separate components.
    ExceedsBound { searched: usize, disconnected: bool },
}

impl Tunnel {
    pub fn finite(&self) -> Option<usize> {
        match self {
            Tunnel::Finite(m) => Some(*m),
            Tunnel::ExceedsBound { .. } => None,
        }
    }
}

impl fmt::Display for Tunnel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tunnel::Finite(m) => write!(f, "{m}"),
            Tunnel::ExceedsBound { searched, disconnected: true } => write!(f, "inf(>{searched})"),
            Tunnel::ExceedsBound { searched, .. } => write!(f, ">{searched}"),
        }
    }
}

/// Boolean incidence of the welded transition into `upper`: `m[dst][src]`.
fn bool_matrix(spec: &DiagramSpec, upper: i64) -> Vec<Vec<bool>> {
    let mut m = vec![vec![false; spec.count(upper - 1)]; spec.count(upper)];
    for e in spec.edges(upper) {
        m[e.dst][e.src] = true;
    }
    m
}

fn bool_product(a: &[Vec<bool>], b: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let inner = b.len();
    a.iter()
        .map(|row| (0..b[0].len()).map(|j| (0..inner).any(|t| row[t] && b[t][j])).collect())
        .collect()
}

/// Every pair of columns shares a nonzero row.
fn columns_meet(p: &[Vec<bool>]) -> bool {
    let cols = p.first().map_or(0, Vec::len);
    (0..cols).all(|a| (a..cols).all(|b| p.iter().any(|row| row[a] && row[b])))
}

fn transpose(p: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let cols = p.first().map_or(0, Vec::len);
    (0..cols).map(|j| p.iter().map(|row| row[j]).collect()).collect()
}

/// Whether the level-`k` vertices fall into one weak component of the
/// subgraph on levels `lo..=hi`.
fn connected(spec: &DiagramSpec, k: i64, lo: i64, hi: i64) -> bool {
    let offset = |l: i64| -> usize { (lo..l).map(|x| spec.count(x)).sum() };
    let n = offset(hi + 1);
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for u in lo + 1..=hi {
        for e in spec.edges(u) {
            let (a, b) = (find(&mut parent, offset(u - 1) + e.src), find(&mut parent, offset(u) + e.dst));
            parent[a] = b;
        }
    }
    let base = offset(k);
    let root = find(&mut parent, base);
    (1..spec.count(k)).all(|v| find(&mut parent, base + v) == root)
}

fn window_for(spec: &DiagramSpec, k: i64, up: usize, down: usize) -> Result<DiagramSpec> {
    let pos = (k + up as i64).max(0) as usize;
    let neg = (down as i64 - k).max(0) as usize;
    let spec = match spec.ensure_window(pos, neg) {
        Ok(s) => s,
        Err(e) if e.is_depth_error() => match &spec.generator {
            Some(g) if g.max_depth() as i64 > spec.max_level() => crate::families::generate(g, g.max_depth())?.0,
            _ => spec.clone(),
        },
        Err(e) => return Err(e),
    };
    if !spec.contains_level(k) {
        return Err(Error::LevelOutOfWindow { level: k, min: spec.min_level(), max: spec.max_level() });
    }
    Ok(spec)
}

/// `(Δ+(k), Δ-(k))` from positivity of `P^T P` (descendants) and `Q Q^T`
/// (ancestors) of the transition products. Generator-backed windows grow
/// only as far as the search needs.
pub fn tunneling(spec: &DiagramSpec, k: i64, bound: usize) -> Result<(Tunnel, Tunnel)> {
    let mut spec = window_for(spec, k, 1, 1)?;
    let mut up = None;
    let mut p: Option<Vec<Vec<bool>>> = None;
    let mut searched = 0;
    for m in 1..=bound {
        if spec.max_level() < k + m as i64 {
            spec = window_for(&spec, k, (2 * m).min(bound), 1)?;
            if spec.max_level() < k + m as i64 {
                break;
            }
        }
        searched = m;
        let f = bool_matrix(&spec, k + m as i64);
        let next = match &p {
            None => f,
            Some(p) => bool_product(&f, p),
        };
        if columns_meet(&next) {
            up = Some(m);
            break;
        }
        p = Some(next);
    }
    let up = match up {
        Some(m) => Tunnel::Finite(m),
        None => Tunnel::ExceedsBound { searched, disconnected: !connected(&spec, k, k, k + searched as i64) },
    };
    let mut down = None;
    let mut q: Option<Vec<Vec<bool>>> = None;
    let mut searched = 0;
    for m in 1..=bound {
        if spec.min_level() > k - m as i64 {
            spec = window_for(&spec, k, 0, (2 * m).min(bound))?;
            if spec.min_level() > k - m as i64 {
                break;
            }
        }
        searched = m;
        let f = bool_matrix(&spec, k - m as i64 + 1);
        let next = match &q {
            None => f,
            Some(q) => bool_product(q, &f),
        };
        if columns_meet(&transpose(&next)) {
            down = Some(m);
            break;
        }
        q = Some(next);
    }
    let down = match down {
        Some(m) => Tunnel::Finite(m),
        None => Tunnel::ExceedsBound { searched, disconnected: !connected(&spec, k, k - searched as i64, k) },
    };
    Ok((up, down))
}

/// The same distances from the path definition: enumerate explicit paths out
/// of each level-`k` vertex and look for a shared endpoint.
pub fn tunneling_bruteforce(spec: &DiagramSpec, k: i64, bound: usize) -> Result<(Option<usize>, Option<usize>)> {
    let spec = window_for(spec, k, bound, bound)?;
    let endpoints = |v: usize, m: usize, upward: bool| -> Vec<usize> {
        // depth-first over explicit edge sequences
        let mut out = Vec::new();
        let mut stack = vec![(v, 0usize)];
        while let Some((x, d)) = stack.pop() {
            if d == m {
                out.push(x);
                continue;
            }
            let (upper, forward) = if upward { (k + d as i64 + 1, true) } else { (k - d as i64, false) };
            for e in spec.edges(upper) {
                if forward && e.src == x {
                    stack.push((e.dst, d + 1));
                } else if !forward && e.dst == x {
                    stack.push((e.src, d + 1));
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    };
    let search = |upward: bool, avail: usize| -> Option<usize> {
        (1..=avail).find(|&m| {
            let sets: Vec<Vec<usize>> = (0..spec.count(k)).map(|v| endpoints(v, m, upward)).collect();
            (0..sets.len()).all(|a| (a..sets.len()).all(|b| sets[a].iter().any(|x| sets[b].binary_search(x).is_ok())))
        })
    };
    let up_avail = (spec.max_level() - k).clamp(0, bound as i64) as usize;
    let down_avail = (k - spec.min_level()).clamp(0, bound as i64) as usize;
    Ok((search(true, up_avail), search(false, down_avail)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionRow {
    pub k: usize,
    pub delta_plus: Tunnel,
    pub delta_minus: Tunnel,
    #[serde(serialize_with = "crate::scalar::ser::rational")]
    pub scale: Rational,
    #[serde(serialize_with = "crate::scalar::ser::rationals")]
    pub widths: Vec<Rational>,
    #[serde(serialize_with = "crate::scalar::ser::rationals")]
    pub heights: Vec<Rational>,
    #[serde(serialize_with = "crate::scalar::ser::opt_rational")]
    pub delta: Option<Rational>,
    /// The systole used the fallback without the negative term.
    pub delta_fallback: bool,
    #[serde(serialize_with = "crate::scalar::ser::rational")]
    pub sigma: Rational,
    #[serde(serialize_with = "crate::scalar::ser::rational")]
    pub epsilon: Rational,
    #[serde(serialize_with = "crate::scalar::ser::opt_rational")]
    pub summand: Option<Rational>,
    #[serde(serialize_with = "crate::scalar::ser::rational")]
    pub partial_sum: Rational,
}

impl CriterionRow {
    pub fn min_width(&self) -> &Rational {
        min_of(&self.widths)
    }
}

fn min_of(v: &[Rational]) -> &Rational {
    v.iter().min().expect("nonempty level")
}

/// Window large enough for rows `1..=depth` and their tunneling searches.
fn extended(spec: &DiagramSpec, weights: &WeightPair<Rational>, pos: usize, neg: usize) -> Result<(DiagramSpec, WeightPair<Rational>)> {
    if spec.max_level() >= pos as i64 && -spec.min_level() >= neg as i64 {
        return Ok((spec.clone(), weights.clone()));
    }
    match &spec.generator {
        Some(g) => crate::families::generate(g, pos.max(neg).min(g.max_depth()).max(spec.max_level() as usize)),
        None => Ok((spec.clone(), weights.clone())),
    }
}

/// Rows `k = 1..=depth` with `ε_k` chosen as large as the constraints allow.
pub fn criterion_terms(
    spec: &DiagramSpec,
    weights: &WeightPair<Rational>,
    eta: &Rational,
    depth: usize,
    bound: usize,
) -> Result<Vec<CriterionRow>> {
    let (spec, weights) = extended(spec, weights, depth, 0)?;
    if spec.max_level() < depth as i64 {
        return Err(Error::DepthExceedsWindow { requested: depth, available: spec.max_level() as usize });
    }
    let tunnels = (1..=depth).map(|k| tunneling(&spec, k as i64, bound)).collect::<Result<Vec<_>>>()?;
    let pos = tunnels.iter().zip(1..).filter_map(|((t, _), k)| t.finite().map(|m| k + m)).max().unwrap_or(depth);
    let neg = tunnels.iter().zip(1..).filter_map(|((_, t), k)| t.finite().map(|m| m.saturating_sub(k))).max().unwrap_or(0);
    let (spec, weights) = extended(&spec, &weights, pos.max(depth), neg)?;
    if spec.max_level() < depth as i64 {
        return Err(Error::DepthExceedsWindow { requested: depth, available: spec.max_level() as usize });
    }
    let top = spec.max_level() as usize;
    let scales: Vec<Rational> = renorm_scales(&spec, &weights, top)?;
    let half = spec.positive_half();
    let plus = vertex_weights(&half, &weights.plus.truncated(top))?;
    let h: Vec<Vec<Rational>> = heights(&spec, &weights.minus.root, top)?;
    let neg = spec.negative_half();
    let minus = vertex_weights(&neg, &weights.minus)?;
    let two = Rational::from_integer(2.into());
    let mut rows = Vec::new();
    let mut partial = Rational::from_integer(0.into());
    for k in 1..=depth {
        let lam = scales[k].clone();
        let widths: Vec<Rational> = plus[k].iter().map(|x| x.clone() * lam.clone()).collect();
        let hbar: Vec<Rational> = h[k].iter().map(|x| x.clone() / lam.clone()).collect();
        let sigma = hbar.iter().fold(Rational::from_integer(1.into()), |a, b| a + b.clone());
        let epsilon = [eta.clone() / (two.clone() * sigma.clone()), min_of(&hbar).clone() / two.clone(), min_of(&widths).clone() / two.clone()]
            .into_iter()
            .min()
            .expect("three candidates");
        let (dp, dm) = tunnels[k - 1];
        let first = dp
            .finite()
            .filter(|m| k + m <= top)
            .map(|m| lam.clone() * min_of(&plus[k + m]).clone() / two.clone());
        // w-_k on level k - Δ- of the original diagram
        let second = dm.finite().map(|m| {
            let j = k as i64 - m as i64;
            let base = if j >= 0 { min_of(&h[j as usize]).clone() } else { min_of(&minus[(-j) as usize]).clone() };
            base / lam.clone() / two.clone()
        });
        let (delta, fallback) = match (first, second) {
            (Some(a), Some(b)) => (Some(a.min(b)), false),
            (Some(a), None) => (Some(a), true),
            (None, _) => (None, false),
        };
        let summand = delta.as_ref().map(|d| {
            let c = spec.count(k as i64) as i64 - 1;
            let inner = sigma.clone() / (epsilon.clone() * epsilon.clone()) + Rational::from_integer(c.into()) / d.clone();
            Rational::from_integer(1.into()) / (inner.clone() * inner)
        });
        if let Some(s) = &summand {
            partial += s.clone();
        }
        rows.push(CriterionRow {
            k,
            delta_plus: dp,
            delta_minus: dm,
            scale: lam,
            widths,
            heights: hbar,
            delta,
            delta_fallback: fallback,
            sigma,
            epsilon,
            summand,
            partial_sum: partial.clone(),
        });
    }
    Ok(rows)
}

/// Growth class of a parameter sequence, as declared by the caller.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Growth {
    Bounded,
    Poly(u32),
    Exp,
}

impl FromStr for Growth {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        Ok(match t {
            "bounded" | "const" => Growth::Bounded,
            "exp" | "2^k" => Growth::Exp,
            "k" | "linear" => Growth::Poly(1),
            _ => {
                let d = t.strip_prefix("poly").or_else(|| t.strip_prefix("k^")).map(|d| d.trim_start_matches(':'));
                match d.and_then(|d| d.parse().ok()) {
                    Some(0) => Growth::Bounded,
                    Some(d) => Growth::Poly(d),
                    None => return Err(Error::InvalidParams(format!("unknown growth class '{t}'"))),
                }
            }
        })
    }
}

impl fmt::Display for Growth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Growth::Bounded => write!(f, "bounded"),
            Growth::Poly(d) => write!(f, "poly{d}"),
            Growth::Exp => write!(f, "exp"),
        }
    }
}

impl Growth {
    pub fn of(seq: &Seq) -> Growth {
        match seq {
            Seq::Const(_) | Seq::List(_) => Growth::Bounded,
            Seq::Affine { a: 0, .. } => Growth::Bounded,
            Seq::Affine { .. } => Growth::Poly(1),
            Seq::Geometric { base } if *base <= 1 => Growth::Bounded,
            Seq::Geometric { .. } => Growth::Exp,
        }
    }
}

/// Declared family and growth of its parameters, e.g. `symmetric:n=bounded`
/// or `explosive:p=bounded,n=bounded`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum FamilyHint {
    Symmetric { n: Growth },
    Explosive { p: Growth, n: Growth },
}

impl FromStr for FamilyHint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParams(format!("cannot read family hint '{s}'"));
        let (name, rest) = s.split_once(':').ok_or_else(bad)?;
        let mut n = None;
        let mut p = None;
        for part in rest.split(',') {
            let (key, val) = part.split_once('=').ok_or_else(bad)?;
            match key.trim() {
                "n" => n = Some(val.parse()?),
                "p" => p = Some(val.parse()?),
                _ => return Err(bad()),
            }
        }
        match name.trim() {
            "symmetric" => Ok(FamilyHint::Symmetric { n: n.ok_or_else(bad)? }),
            "explosive" => Ok(FamilyHint::Explosive { p: p.ok_or_else(bad)?, n: n.ok_or_else(bad)? }),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for FamilyHint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyHint::Symmetric { n } => write!(f, "symmetric:n={n}"),
            FamilyHint::Explosive { p, n } => write!(f, "explosive:p={p},n={n}"),
        }
    }
}

impl FamilyHint {
    /// Hint implied by a generator's own parameter rules.
    pub fn from_family(f: &FamilyParams) -> Option<FamilyHint> {
        match f {
            FamilyParams::Symmetric { n, .. } => Some(FamilyHint::Symmetric { n: Growth::of(n) }),
            FamilyParams::Explosive { p, n } => Some(FamilyHint::Explosive { p: Growth::of(p), n: Growth::of(n) }),
            _ => None,
        }
    }

    /// Whether the closed-form series is known to diverge for this class.
    pub fn diverges(&self) -> bool {
        match self {
            // terms behave like n_k^-2
            FamilyHint::Symmetric { n } => *n == Growth::Bounded,
            // terms behave like ((p_k+1)^3 + p_{k-1} n_{k-1})^-2
            FamilyHint::Explosive { p, n } => *p == Growth::Bounded && *n == Growth::Bounded,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    ErgodicByStationarity,
    ErgodicByEventualStationarity,
    ErgodicByClosedForm,
    Inconclusive,
    Obstructed,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::ErgodicByStationarity => "ergodic_by_stationarity",
            Verdict::ErgodicByEventualStationarity => "ergodic_by_eventual_stationarity",
            Verdict::ErgodicByClosedForm => "ergodic_by_closed_form",
            Verdict::Inconclusive => "inconclusive",
            Verdict::Obstructed => "obstructed",
        };
        f.write_str(s)
    }
}

/// `(start, period)` such that positive transitions repeat with `period`
/// from upper level `start` on, over the whole window; smallest start, then
/// smallest period. Needs at least two full periods in view.
pub fn stationarity(spec: &DiagramSpec) -> Option<(usize, usize)> {
    let top = spec.max_level().max(0) as usize;
    for start in 1..=top {
        for period in 1..=(top + 1 - start) / 2 {
            let same = (start..=top - period).all(|u| {
                spec.count(u as i64) == spec.count((u + period) as i64)
                    && spec.edges(u as i64) == spec.edges((u + period) as i64)
            });
            if same && spec.count(start as i64 - 1) == spec.count((start + period) as i64 - 1) {
                return Some((start, period));
            }
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErgodicityReport {
    #[serde(serialize_with = "crate::scalar::ser::rational")]
    pub eta: Rational,
    pub depth: usize,
    pub rows: Vec<CriterionRow>,
    /// Rows after telescoping so level masses at least halve, if requested.
    pub telescoped: Option<Vec<CriterionRow>>,
    pub verdict: Verdict,
    pub rationale: String,
}

#[derive(Clone, Debug)]
pub struct CriterionOptions {
    pub eta: Rational,
    pub depth: usize,
    pub bound: usize,
    pub hint: Option<FamilyHint>,
    pub telescope: bool,
}

pub fn verdict(spec: &DiagramSpec, weights: &WeightPair<Rational>, opts: &CriterionOptions) -> Result<ErgodicityReport> {
    if opts.eta <= Rational::from_integer(0.into()) {
        return Err(Error::InvalidParams("eta must be positive".into()));
    }
    let rows = criterion_terms(spec, weights, &opts.eta, opts.depth, opts.bound)?;
    let telescoped = if opts.telescope {
        let (s, w) = extended(spec, weights, opts.depth, 0)?;
        let cuts = auto_telescope(&s, &w, opts.depth, &Rational::new(1.into(), 2.into()))?;
        let ts = crate::diagram::telescope(&s, &cuts)?;
        let tw = telescope_weights(&s, &w, &cuts)?;
        // the last telescoped level has nothing above it in the window
        let d = (ts.max_level() as usize).saturating_sub(1);
        if d == 0 {
            None
        } else {
            Some(criterion_terms(&ts, &tw, &opts.eta, d, opts.bound)?)
        }
    } else {
        None
    };
    let (s0, _) = extended(spec, weights, opts.depth, 0)?;
    let (dp0, _) = tunneling(&s0, 0, opts.bound)?;
    let obstructed = std::iter::once(dp0)
        .chain(rows.iter().map(|r| r.delta_plus))
        .find(|t| matches!(t, Tunnel::ExceedsBound { disconnected: true, .. }));
    let (verdict, rationale) = if let Some(t) = obstructed {
        (Verdict::Obstructed, format!("positive tunneling distance {t}: the diagram splits beyond some level"))
    } else if let Some(h) = &opts.hint {
        if h.diverges() {
            (Verdict::ErgodicByClosedForm, format!("declared {h}: the closed-form series diverges"))
        } else {
            (Verdict::Inconclusive, format!("declared {h}: the closed-form series converges, so the criterion is silent; S_K = {}", partial_text(&rows)))
        }
    } else {
        match (stationarity(&s0), dp0.finite()) {
            (Some((1, period)), Some(_)) => (Verdict::ErgodicByStationarity, format!("transitions repeat with period {period} from level 1 and Δ+(0) is finite")),
            (Some((start, period)), _) if rows.iter().any(|r| r.delta_plus.finite().is_some()) => (
                Verdict::ErgodicByEventualStationarity,
                format!("transitions repeat with period {period} from level {start} and Δ+ is finite"),
            ),
            _ => (Verdict::Inconclusive, format!("no certificate; S_K = {}", partial_text(&rows))),
        }
    };
    Ok(ErgodicityReport { eta: opts.eta.clone(), depth: opts.depth, rows, telescoped, verdict, rationale })
}

fn partial_text(rows: &[CriterionRow]) -> String {
    rows.last().map_or("0".into(), |r| format!("{:.6e}", r.partial_sum.to_f64()))
}

impl fmt::Display for ErgodicityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:>3} {:>8} {:>8} {:>14} {:>10} {:>14} {:>14} {:>14}", "k", "Δ+", "Δ-", "δ", "σ", "ε", "summand", "partial")?;
        let fl = |r: &Rational| format!("{:.6e}", r.to_f64());
        for r in &self.rows {
            writeln!(
                f,
                "{:>3} {:>8} {:>8} {:>14} {:>10} {:>14} {:>14} {:>14}",
                r.k,
                r.delta_plus.to_string(),
                r.delta_minus.to_string(),
                r.delta.as_ref().map_or("-".into(), fl),
                fmt_rational(&r.sigma),
                fl(&r.epsilon),
                r.summand.as_ref().map_or("-".into(), fl),
                fl(&r.partial_sum)
            )?;
        }
        if let Some(t) = &self.telescoped {
            writeln!(f, "telescoped partial sum: {}", t.last().map_or("-".into(), |r| fl(&r.partial_sum)))?;
        }
        writeln!(f, "verdict: {}", self.verdict)?;
        write!(f, "rationale: {}", self.rationale)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::generate;
    use crate::scalar::{int, rat};

    fn opts(depth: usize, hint: Option<FamilyHint>) -> CriterionOptions {
        CriterionOptions { eta: rat(1, 10), depth, bound: DEFAULT_SEARCH_BOUND, hint, telescope: false }
    }

    #[test]
    fn chacon_tunnels_in_one_step() {
        let (spec, _) = generate(&FamilyParams::Chacon, 4).unwrap();
        for k in 0..=10 {
            assert_eq!(tunneling(&spec, k, 16).unwrap().0, Tunnel::Finite(1), "k={k}");
            assert_eq!(tunneling_bruteforce(&spec, k, 16).unwrap().0, Some(1));
        }
    }

    #[test]
    fn disconnected_diagram_never_tunnels() {
        let (spec, w) = generate(&FamilyParams::DisjointOdometers { base: 2 }, 4).unwrap();
        for bound in [1, 4, 16] {
            let (up, _) = tunneling(&spec, 1, bound).unwrap();
            assert!(matches!(up, Tunnel::ExceedsBound { disconnected: true, .. }), "{up:?}");
        }
        let r = verdict(&spec, &w, &opts(4, None)).unwrap();
        assert_eq!(r.verdict, Verdict::Obstructed);
    }

    #[test]
    fn telescoped_rows_are_reported() {
        let (spec, w) = generate(&FamilyParams::Pascal { p: rat(1, 3) }, 8).unwrap();
        let mut o = opts(8, None);
        o.telescope = true;
        let r = verdict(&spec, &w, &o).unwrap();
        let t = r.telescoped.unwrap();
        assert!(!t.is_empty() && t.len() < 8);
        assert!(t[0].summand.is_some());
    }

    #[test]
    fn stationary_examples() {
        for f in [FamilyParams::Odometer { base: 2 }, FamilyParams::Chacon, FamilyParams::Chamanara { base: 2 }] {
            let (spec, w) = generate(&f, 6).unwrap();
            assert_eq!(verdict(&spec, &w, &opts(6, None)).unwrap().verdict, Verdict::ErgodicByStationarity, "{f}");
        }
        let f = FamilyParams::Symmetric { p: 2, n: Seq::Const(3) };
        let (spec, w) = generate(&f, 6).unwrap();
        assert_eq!(verdict(&spec, &w, &opts(6, None)).unwrap().verdict, Verdict::ErgodicByEventualStationarity);
        let (spec, w) = generate(&FamilyParams::Pascal { p: rat(1, 2) }, 6).unwrap();
        assert_eq!(verdict(&spec, &w, &opts(6, None)).unwrap().verdict, Verdict::Inconclusive);
    }

    #[test]
    fn hints_decide_closed_forms() {
        let f = FamilyParams::Symmetric { p: 2, n: Seq::Const(3) };
        let (spec, w) = generate(&f, 6).unwrap();
        let hint: FamilyHint = "symmetric:n=bounded".parse().unwrap();
        assert_eq!(verdict(&spec, &w, &opts(6, Some(hint))).unwrap().verdict, Verdict::ErgodicByClosedForm);
        let f = FamilyParams::Symmetric { p: 2, n: Seq::Geometric { base: 2 } };
        let (spec, w) = generate(&f, 6).unwrap();
        let hint: FamilyHint = "symmetric:n=exp".parse().unwrap();
        assert_eq!(verdict(&spec, &w, &opts(6, Some(hint))).unwrap().verdict, Verdict::Inconclusive);
        assert!("explosive:n=bounded".parse::<FamilyHint>().is_err());
    }

    #[test]
    fn symmetric_rows() {
        let f = FamilyParams::Symmetric { p: 2, n: Seq::Const(3) };
        let (spec, w) = generate(&f, 6).unwrap();
        let rows = criterion_terms(&spec, &w, &rat(1, 10), 4, 16).unwrap();
        let r = &rows[2];
        assert_eq!(r.sigma, int(3));
        assert_eq!(r.epsilon, rat(1, 60));
        // positive term 1/(2p(n+p-1)) is below the negative term 1/(2(n+p-1))
        assert_eq!(r.delta, Some(rat(1, 16)));
        assert_eq!(r.summand, Some(int(1) / (int(10800 + 16) * int(10800 + 16))));
    }

    #[test]
    fn odometer_summands_are_constant() {
        let (spec, w) = generate(&FamilyParams::Odometer { base: 2 }, 8).unwrap();
        let rows = criterion_terms(&spec, &w, &rat(1, 10), 8, 16).unwrap();
        let s1 = rows[0].summand.clone().unwrap();
        for r in &rows {
            assert_eq!(r.summand.as_ref(), Some(&s1));
            assert_eq!(r.partial_sum, s1.clone() * int(r.k as i64));
        }
    }
}
