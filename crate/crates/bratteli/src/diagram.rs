//! Truncated bi-infinite ordered Bratteli diagrams.
//!
//! Storage uses the welded orientation throughout: every edge points from
//! level `u-1` to level `u`, including on the negative half. A transition is
//! addressed by its upper level `u`. The text format and the incidence-matrix
//! API use the conventional level label instead, which is `u` for `u > 0` and
//! `u - 1` for `u <= 0`.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::FamilyParams;
use crate::scalar::Scalar;

/// One edge. Ranks are 1-based positions in the r-order (among edges sharing
/// `dst`) and the s-order (among edges sharing `src`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub r: usize,
    pub s: usize,
}

impl Edge {
    pub fn new(src: usize, dst: usize, r: usize, s: usize) -> Self {
        Edge { src, dst, r, s }
    }

    /// Swap direction and orders; maps between welded and native negative form.
    pub fn reversed(&self) -> Edge {
        Edge { src: self.dst, dst: self.src, r: self.s, s: self.r }
    }
}

/// Conventional label of the transition whose upper level is `upper`.
pub fn label_of_upper(upper: i64) -> i64 {
    if upper > 0 {
        upper
    } else {
        upper - 1
    }
}

/// Inverse of [`label_of_upper`]. Label 0 does not exist.
pub fn upper_of_label(label: i64) -> Option<i64> {
    match label {
        0 => None,
        l if l > 0 => Some(l),
        l => Some(l + 1),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramSpec {
    min_level: i64,
    counts: Vec<usize>,
    transitions: Vec<Vec<Edge>>,
    pub generator: Option<FamilyParams>,
}

impl DiagramSpec {
    /// `counts[j]` is the vertex count of level `min_level + j`;
    /// `transitions[j]` holds the edges into level `min_level + j + 1`.
    pub fn new(min_level: i64, counts: Vec<usize>, transitions: Vec<Vec<Edge>>) -> Result<Self> {
        if min_level > 0 {
            return Err(Error::InvalidDiagram("window must contain level 0".into()));
        }
        if counts.is_empty() || (counts.len() as i64) <= -min_level {
            return Err(Error::InvalidDiagram("window must contain level 0".into()));
        }
        if transitions.len() + 1 != counts.len() {
            return Err(Error::InvalidDiagram(format!(
                "{} levels need {} transitions, got {}",
                counts.len(),
                counts.len() - 1,
                transitions.len()
            )));
        }
        for (j, edges) in transitions.iter().enumerate() {
            let (lo, hi) = (counts[j], counts[j + 1]);
            let upper = min_level + j as i64 + 1;
            for (k, e) in edges.iter().enumerate() {
                if e.src >= lo || e.dst >= hi {
                    return Err(Error::InvalidDiagram(format!(
                        "edge {k} at level {}: vertex index out of range",
                        label_of_upper(upper)
                    )));
                }
            }
        }
        Ok(DiagramSpec { min_level, counts, transitions, generator: None })
    }

    pub fn with_generator(mut self, generator: FamilyParams) -> Self {
        self.generator = Some(generator);
        self
    }

    pub fn min_level(&self) -> i64 {
        self.min_level
    }

    pub fn max_level(&self) -> i64 {
        self.min_level + self.counts.len() as i64 - 1
    }

    pub fn contains_level(&self, level: i64) -> bool {
        level >= self.min_level && level <= self.max_level()
    }

    pub fn count(&self, level: i64) -> usize {
        self.counts[(level - self.min_level) as usize]
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// Edges between `upper - 1` and `upper`, welded orientation.
    pub fn edges(&self, upper: i64) -> &[Edge] {
        &self.transitions[(upper - self.min_level - 1) as usize]
    }

    /// Upper levels of all transitions, ascending.
    pub fn uppers(&self) -> impl Iterator<Item = i64> + '_ {
        (self.min_level + 1)..=self.max_level()
    }

    pub fn edge_count(&self) -> usize {
        self.transitions.iter().map(Vec::len).sum()
    }

    /// Same diagram with the window grown to at least `pos` positive and `neg`
    /// negative levels, regenerating from the attached family when needed.
    pub fn ensure_window(&self, pos: usize, neg: usize) -> Result<DiagramSpec> {
        if self.max_level() >= pos as i64 && -self.min_level >= neg as i64 {
            return Ok(self.clone());
        }
        match &self.generator {
            Some(g) => {
                let depth = pos.max(neg).max(self.max_level() as usize);
                let (spec, _) = crate::families::generate(g, depth)?;
                Ok(spec)
            }
            None => Err(Error::DepthExceedsWindow {
                requested: pos.max(neg),
                available: if self.max_level() < pos as i64 {
                    self.max_level() as usize
                } else {
                    (-self.min_level) as usize
                },
            }),
        }
    }

    pub fn positive_half(&self) -> Half {
        let depth = self.max_level() as usize;
        let counts: Vec<usize> = (0..=depth as i64).map(|l| self.count(l)).collect();
        let edges = (1..=depth as i64).map(|u| self.edges(u).to_vec()).collect();
        Half::new(counts, edges)
    }

    /// The negative half as a one-sided diagram in its own orientation:
    /// level `n` is welded level `-n` and both orders are swapped back.
    pub fn negative_half(&self) -> Half {
        let depth = (-self.min_level) as usize;
        let counts: Vec<usize> = (0..=depth as i64).map(|n| self.count(-n)).collect();
        let edges = (1..=depth as i64)
            .map(|n| self.edges(1 - n).iter().map(Edge::reversed).collect())
            .collect();
        Half::new(counts, edges)
    }
}

/// Dense incidence matrix; `entries[v][w]` counts edges from lower-level
/// vertex `w` to upper-level vertex `v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IncidenceMatrix {
    pub level: i64,
    pub entries: Vec<Vec<u64>>,
}

impl IncidenceMatrix {
    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.entries.first().map_or(0, Vec::len)
    }

    pub fn transpose(&self) -> IncidenceMatrix {
        let (r, c) = (self.rows(), self.cols());
        let entries = (0..c).map(|j| (0..r).map(|i| self.entries[i][j]).collect()).collect();
        IncidenceMatrix { level: self.level, entries }
    }
}

fn count_matrix(rows: usize, cols: usize, edges: &[Edge]) -> Vec<Vec<u64>> {
    let mut m = vec![vec![0u64; cols]; rows];
    for e in edges {
        m[e.dst][e.src] += 1;
    }
    m
}

/// Incidence matrix at conventional level `label` (nonzero). Positive labels
/// give `F_i`; negative labels give the welded matrix, the transpose of the
/// native negative-half matrix.
pub fn incidence_matrix(spec: &DiagramSpec, label: i64) -> Result<IncidenceMatrix> {
    let upper = upper_of_label(label).filter(|&u| u > spec.min_level() && u <= spec.max_level());
    let Some(upper) = upper else {
        return Err(Error::LevelOutOfWindow {
            level: label,
            min: label_of_upper(spec.min_level() + 1),
            max: spec.max_level(),
        });
    };
    let entries = count_matrix(spec.count(upper), spec.count(upper - 1), spec.edges(upper));
    Ok(IncidenceMatrix { level: label, entries })
}

/// `h^0..h^K` with `h^i = F_i h^{i-1}` on the positive half.
pub fn heights<S: Scalar>(spec: &DiagramSpec, h0: &[S], depth: usize) -> Result<Vec<Vec<S>>> {
    if h0.len() != spec.count(0) {
        return Err(Error::InvalidDiagram(format!(
            "h0 has length {}, level 0 has {} vertices",
            h0.len(),
            spec.count(0)
        )));
    }
    let spec = spec.ensure_window(depth, 0)?;
    let mut out = vec![h0.to_vec()];
    for upper in 1..=depth as i64 {
        let prev = out.last().expect("nonempty");
        let mut next = vec![S::zero(); spec.count(upper)];
        for e in spec.edges(upper) {
            next[e.dst] = next[e.dst].clone() + prev[e.src].clone();
        }
        out.push(next);
    }
    Ok(out)
}

/// One-sided ordered diagram in its own orientation (edges from level `i-1`
/// to `i`), with per-vertex edge lists sorted by rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Half {
    counts: Vec<usize>,
    edges: Vec<Vec<Edge>>,
    in_by_r: Vec<Vec<Vec<usize>>>,
    out_by_s: Vec<Vec<Vec<usize>>>,
}

impl Half {
    /// `edges[i-1]` is the transition into level `i`. Indices must be in range;
    /// rank consistency is the caller's business (see [`validate_diagram`]).
    pub fn new(counts: Vec<usize>, edges: Vec<Vec<Edge>>) -> Half {
        assert_eq!(counts.len(), edges.len() + 1, "one transition per level above 0");
        let mut in_by_r = Vec::with_capacity(edges.len());
        let mut out_by_s = Vec::with_capacity(edges.len());
        for (i, es) in edges.iter().enumerate() {
            let mut ins = vec![Vec::new(); counts[i + 1]];
            let mut outs = vec![Vec::new(); counts[i]];
            for (k, e) in es.iter().enumerate() {
                ins[e.dst].push(k);
                outs[e.src].push(k);
            }
            for l in &mut ins {
                l.sort_by_key(|&k| (es[k].r, k));
            }
            for l in &mut outs {
                l.sort_by_key(|&k| (es[k].s, k));
            }
            in_by_r.push(ins);
            out_by_s.push(outs);
        }
        Half { counts, edges, in_by_r, out_by_s }
    }

    pub fn depth(&self) -> usize {
        self.edges.len()
    }

    pub fn count(&self, level: usize) -> usize {
        self.counts[level]
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// Edges into level `level` (1-based).
    pub fn edges(&self, level: usize) -> &[Edge] {
        &self.edges[level - 1]
    }

    pub fn edge(&self, level: usize, idx: usize) -> &Edge {
        &self.edges[level - 1][idx]
    }

    /// Edge indices into vertex `v` of `level`, ascending r-order.
    pub fn incoming(&self, level: usize, v: usize) -> &[usize] {
        &self.in_by_r[level - 1][v]
    }

    /// Edge indices out of vertex `v` of `level - 1`, ascending s-order.
    pub fn outgoing(&self, level: usize, v: usize) -> &[usize] {
        &self.out_by_s[level - 1][v]
    }

    pub fn is_r_max(&self, level: usize, idx: usize) -> bool {
        let e = &self.edges[level - 1][idx];
        self.incoming(level, e.dst).last() == Some(&idx)
    }

    pub fn is_r_min(&self, level: usize, idx: usize) -> bool {
        let e = &self.edges[level - 1][idx];
        self.incoming(level, e.dst).first() == Some(&idx)
    }

    /// Number of paths from level 0 into each vertex, levels `0..=depth`.
    pub fn path_counts(&self) -> Vec<Vec<BigUint>> {
        let mut out = vec![vec![BigUint::one(); self.counts[0]]];
        for i in 1..=self.depth() {
            let prev = &out[i - 1];
            let mut next = vec![BigUint::zero(); self.counts[i]];
            for e in self.edges(i) {
                next[e.dst] += &prev[e.src];
            }
            out.push(next);
        }
        out
    }

    /// Truncate to the first `depth` transitions.
    pub fn truncated(&self, depth: usize) -> Half {
        let depth = depth.min(self.depth());
        Half::new(self.counts[..=depth].to_vec(), self.edges[..depth].to_vec())
    }

    /// Telescope to `cuts` (strictly increasing, starting at 0). Returns the new
    /// half and, for each new edge, the list of original edge indices from the
    /// bottom up.
    pub fn telescope(&self, cuts: &[usize]) -> Result<(Half, Vec<Vec<Vec<usize>>>)> {
        if cuts.first() != Some(&0) {
            return Err(Error::BadCuts("cuts must start at 0".into()));
        }
        if cuts.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::BadCuts("cuts must be strictly increasing".into()));
        }
        if let Some(&last) = cuts.last() {
            if last > self.depth() {
                return Err(Error::DepthExceedsWindow { requested: last, available: self.depth() });
            }
        }
        let counts = cuts.iter().map(|&c| self.counts[c]).collect();
        let mut edges = Vec::new();
        let mut compos = Vec::new();
        for w in cuts.windows(2) {
            let (es, cs) = self.segment_edges(w[0], w[1]);
            edges.push(es);
            compos.push(cs);
        }
        Ok((Half::new(counts, edges), compos))
    }

    /// Paths from level `a` to level `b` as edges, with lexicographic orders:
    /// r compares the top edge first, s compares the bottom edge first.
    fn segment_edges(&self, a: usize, b: usize) -> (Vec<Edge>, Vec<Vec<usize>>) {
        // Each partial path: (start vertex, current vertex, edge list)
        let mut partial: Vec<(usize, usize, Vec<usize>)> =
            (0..self.counts[a]).map(|v| (v, v, Vec::new())).collect();
        for level in a + 1..=b {
            let mut next = Vec::new();
            for (start, cur, path) in &partial {
                for &k in self.outgoing(level, *cur) {
                    let mut p = path.clone();
                    p.push(k);
                    next.push((*start, self.edges(level)[k].dst, p));
                }
            }
            partial = next;
        }
        let r_key = |p: &Vec<usize>| -> Vec<usize> {
            p.iter().enumerate().rev().map(|(j, &k)| self.edges(a + j + 1)[k].r).collect()
        };
        let s_key = |p: &Vec<usize>| -> Vec<usize> {
            p.iter().enumerate().map(|(j, &k)| self.edges(a + j + 1)[k].s).collect()
        };
        let mut by_dst: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        let mut by_src: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, (src, dst, _)) in partial.iter().enumerate() {
            by_dst.entry(*dst).or_default().push(i);
            by_src.entry(*src).or_default().push(i);
        }
        let mut r_rank = vec![0; partial.len()];
        let mut s_rank = vec![0; partial.len()];
        for ids in by_dst.values_mut() {
            ids.sort_by_key(|&i| r_key(&partial[i].2));
            for (rank, &i) in ids.iter().enumerate() {
                r_rank[i] = rank + 1;
            }
        }
        for ids in by_src.values_mut() {
            ids.sort_by_key(|&i| s_key(&partial[i].2));
            for (rank, &i) in ids.iter().enumerate() {
                s_rank[i] = rank + 1;
            }
        }
        let edges = partial
            .iter()
            .enumerate()
            .map(|(i, (src, dst, _))| Edge::new(*src, *dst, r_rank[i], s_rank[i]))
            .collect();
        (edges, partial.into_iter().map(|(_, _, p)| p).collect())
    }
}

/// Weld a positive and a negative half along level 0; vertices are matched by
/// their position in the level-0 order.
pub fn weld(pos: &Half, neg: &Half) -> Result<DiagramSpec> {
    if pos.count(0) != neg.count(0) {
        return Err(Error::WeldMismatch { positive: pos.count(0), negative: neg.count(0) });
    }
    let nd = neg.depth();
    let mut counts: Vec<usize> = (0..=nd).rev().map(|n| neg.count(n)).collect();
    counts.extend((1..=pos.depth()).map(|i| pos.count(i)));
    let mut transitions: Vec<Vec<Edge>> =
        (1..=nd).rev().map(|n| neg.edges(n).iter().map(Edge::reversed).collect()).collect();
    transitions.extend((1..=pos.depth()).map(|i| pos.edges(i).to_vec()));
    DiagramSpec::new(-(nd as i64), counts, transitions)
}

/// Telescope a bi-infinite spec to `cuts`, which must contain 0 and be
/// strictly increasing. Both halves are composed lexicographically.
pub fn telescope(spec: &DiagramSpec, cuts: &[i64]) -> Result<DiagramSpec> {
    let (pos, neg) = split_cuts(cuts)?;
    let (p, _) = spec.positive_half().telescope(&pos)?;
    let (n, _) = spec.negative_half().telescope(&neg)?;
    weld(&p, &n)
}

pub(crate) fn split_cuts(cuts: &[i64]) -> Result<(Vec<usize>, Vec<usize>)> {
    if cuts.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::BadCuts("cuts must be strictly increasing".into()));
    }
    if !cuts.contains(&0) {
        return Err(Error::BadCuts("cuts must contain 0".into()));
    }
    let pos = cuts.iter().filter(|&&c| c >= 0).map(|&c| c as usize).collect();
    let neg = cuts.iter().rev().filter(|&&c| c <= 0).map(|&c| (-c) as usize).collect();
    Ok((pos, neg))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ViolationKind {
    EmptyLevel,
    NoIncomingEdge,
    NoOutgoingEdge,
    RankNotBijective,
    PathDependentWeight,
    OutgoingSumNotOne,
    NonPositiveWeight,
    MassNotConserved,
    NotDecaying,
    BiInfiniteNormalization,
    CountMismatch,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub level: Option<i64>,
    pub vertex: Option<usize>,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, kind: ViolationKind, level: Option<i64>, vertex: Option<usize>, message: String) {
        self.violations.push(Violation { kind, level, vertex, message });
    }

    pub fn has(&self, kind: &ViolationKind) -> bool {
        self.violations.iter().any(|v| &v.kind == kind)
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
        self.notes.extend(other.notes);
    }
}

fn check_ranks(
    report: &mut ValidationReport,
    label: i64,
    what: &str,
    level: i64,
    groups: BTreeMap<usize, Vec<usize>>,
) {
    for (v, mut ranks) in groups {
        ranks.sort_unstable();
        if ranks.iter().enumerate().any(|(i, &r)| r != i + 1) {
            report.push(
                ViolationKind::RankNotBijective,
                Some(level),
                Some(v),
                format!("{what}-ranks at level {label} around vertex {v} of level {level} are {ranks:?}, not 1..{}", ranks.len()),
            );
        }
    }
}

/// Structural checks. An empty report means the spec is a valid truncation.
pub fn validate_diagram(spec: &DiagramSpec) -> ValidationReport {
    let mut report = ValidationReport::default();
    for level in spec.min_level()..=spec.max_level() {
        if spec.count(level) == 0 {
            report.push(ViolationKind::EmptyLevel, Some(level), None, format!("level {level} has no vertices"));
        }
    }
    for upper in spec.uppers() {
        let label = label_of_upper(upper);
        let edges = spec.edges(upper);
        let mut indeg = vec![0usize; spec.count(upper)];
        let mut outdeg = vec![0usize; spec.count(upper - 1)];
        let mut r_groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        let mut s_groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for e in edges {
            indeg[e.dst] += 1;
            outdeg[e.src] += 1;
            r_groups.entry(e.dst).or_default().push(e.r);
            s_groups.entry(e.src).or_default().push(e.s);
        }
        for (v, d) in indeg.iter().enumerate() {
            if *d == 0 {
                report.push(
                    ViolationKind::NoIncomingEdge,
                    Some(upper),
                    Some(v),
                    format!("zero row at level {label}: vertex {v} of level {upper} receives no edge"),
                );
            }
        }
        for (w, d) in outdeg.iter().enumerate() {
            if *d == 0 {
                report.push(
                    ViolationKind::NoOutgoingEdge,
                    Some(upper - 1),
                    Some(w),
                    format!("zero column at level {label}: vertex {w} of level {} emits no edge", upper - 1),
                );
            }
        }
        check_ranks(&mut report, label, "r", upper, r_groups);
        check_ranks(&mut report, label, "s", upper - 1, s_groups);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::scalar::{int, Rational};

    fn odometer_spec(depth: usize) -> DiagramSpec {
        families::generate(&FamilyParams::Chamanara { base: 2 }, depth).unwrap().0
    }

    #[test]
    fn odometer_is_valid_with_matrix_two() {
        let spec = odometer_spec(5);
        assert!(validate_diagram(&spec).is_ok());
        for label in [1, 3, -1, -4] {
            assert_eq!(incidence_matrix(&spec, label).unwrap().entries, vec![vec![2]]);
        }
        assert!(incidence_matrix(&spec, 9).unwrap_err().is_depth_error());
        assert!(incidence_matrix(&spec, 0).is_err());
    }

    #[test]
    fn missing_incoming_edge_is_reported() {
        let spec = DiagramSpec::new(0, vec![1, 2], vec![vec![Edge::new(0, 0, 1, 1)]]).unwrap();
        let report = validate_diagram(&spec);
        assert!(report.has(&ViolationKind::NoIncomingEdge));
        assert_eq!(report.violations[0].vertex, Some(1));
    }

    #[test]
    fn duplicate_ranks_are_reported() {
        let spec = DiagramSpec::new(
            0,
            vec![1, 1],
            vec![vec![Edge::new(0, 0, 1, 1), Edge::new(0, 0, 1, 2)]],
        )
        .unwrap();
        assert!(validate_diagram(&spec).has(&ViolationKind::RankNotBijective));
    }

    #[test]
    fn chacon_heights() {
        let (spec, _) = families::generate(&FamilyParams::Chacon, 3).unwrap();
        assert!(validate_diagram(&spec).is_ok());
        let h = heights(&spec, &[int(1), int(1)], 3).unwrap();
        assert_eq!(h[1], vec![int(4), int(1)]);
        assert_eq!(h[2], vec![int(13), int(1)]);
        assert_eq!(h[3], vec![int(40), int(1)]);
    }

    #[test]
    fn heights_extend_through_generator() {
        let spec = odometer_spec(2);
        let h: Vec<Vec<Rational>> = heights(&spec, &[int(1)], 6).unwrap();
        assert_eq!(h[6], vec![int(64)]);
    }

    #[test]
    fn heights_without_generator_report_depth() {
        let mut spec = odometer_spec(2);
        spec.generator = None;
        let err = heights::<Rational>(&spec, &[int(1)], 6).unwrap_err();
        assert!(err.is_depth_error());
    }

    #[test]
    fn telescoping_odometer_pairs() {
        let spec = odometer_spec(4);
        let t = telescope(&spec, &[-4, -2, 0, 2, 4]).unwrap();
        assert_eq!(t.min_level(), -2);
        assert_eq!(t.max_level(), 2);
        assert!(validate_diagram(&t).is_ok());
        assert_eq!(incidence_matrix(&t, 1).unwrap().entries, vec![vec![4]]);
        assert_eq!(incidence_matrix(&t, -1).unwrap().entries, vec![vec![4]]);
    }

    #[test]
    fn telescoping_all_levels_is_identity() {
        let (spec, _) = families::generate(&FamilyParams::Chacon, 3).unwrap();
        let cuts: Vec<i64> = (spec.min_level()..=spec.max_level()).collect();
        let t = telescope(&spec, &cuts).unwrap();
        assert_eq!(t.positive_half(), spec.positive_half());
        assert_eq!(t.negative_half(), spec.negative_half());
    }

    #[test]
    fn telescoping_rejects_bad_cuts() {
        let spec = odometer_spec(3);
        assert!(matches!(telescope(&spec, &[1, 2]), Err(Error::BadCuts(_))));
        assert!(matches!(telescope(&spec, &[0, 2, 1]), Err(Error::BadCuts(_))));
    }

    #[test]
    fn weld_roundtrip_and_mismatch() {
        let (spec, _) = families::generate(&FamilyParams::Chacon, 2).unwrap();
        let again = weld(&spec.positive_half(), &spec.negative_half()).unwrap();
        assert_eq!(again.counts(), spec.counts());
        let odo = odometer_spec(2);
        let err = weld(&spec.positive_half(), &odo.negative_half()).unwrap_err();
        assert_eq!(err, Error::WeldMismatch { positive: 2, negative: 1 });
    }

    #[test]
    fn negative_half_swaps_orders() {
        let spec = DiagramSpec::new(
            -1,
            vec![1, 1],
            vec![vec![Edge::new(0, 0, 1, 2), Edge::new(0, 0, 2, 1)]],
        )
        .unwrap();
        let neg = spec.negative_half();
        assert_eq!(neg.edges(1)[0], Edge::new(0, 0, 2, 1));
    }
}
