//! Finite paths, the Vershik successor, extremal paths and the
//! minimal/periodic decomposition, all relative to a truncation depth.

use num_bigint::BigUint;
use serde::Serialize;

use crate::diagram::Half;
use crate::error::{Error, Result};

/// Edge indices `e_1..e_n`; `path[i-1]` indexes `half.edges(i)`.
pub type Path = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Successor {
    Next(Path),
    /// Every edge is r-maximal and the column is not final within the window.
    Maximal,
}

pub fn check_path(half: &Half, path: &[usize]) -> Result<()> {
    if path.len() > half.depth() {
        return Err(Error::InvalidPath(format!("path of length {} exceeds window depth {}", path.len(), half.depth())));
    }
    for (j, &k) in path.iter().enumerate() {
        let level = j + 1;
        if k >= half.edges(level).len() {
            return Err(Error::InvalidPath(format!("no edge {k} into level {level}")));
        }
        if j > 0 && half.edge(level - 1, path[j - 1]).dst != half.edge(level, k).src {
            return Err(Error::InvalidPath(format!("edges at levels {} and {level} are not adjacent", level - 1)));
        }
    }
    Ok(())
}

/// Vertex reached by the path, or the start vertex for the empty path.
pub fn range_vertex(half: &Half, path: &[usize]) -> Option<usize> {
    path.last().map(|&k| half.edge(path.len(), k).dst)
}

/// The r-minimal path from level 0 into vertex `v` of `level`.
pub fn min_path_into(half: &Half, level: usize, v: usize) -> Path {
    extremal_path_into(half, level, v, false)
}

pub fn max_path_into(half: &Half, level: usize, v: usize) -> Path {
    extremal_path_into(half, level, v, true)
}

fn extremal_path_into(half: &Half, level: usize, v: usize, max: bool) -> Path {
    let mut path = vec![0; level];
    let mut cur = v;
    for i in (1..=level).rev() {
        let ins = half.incoming(i, cur);
        let k = if max { *ins.last().expect("valid diagram") } else { ins[0] };
        path[i - 1] = k;
        cur = half.edge(i, k).src;
    }
    path
}

pub fn is_maximal(half: &Half, path: &[usize]) -> bool {
    path.iter().enumerate().all(|(j, &k)| half.is_r_max(j + 1, k))
}

pub fn is_minimal(half: &Half, path: &[usize]) -> bool {
    path.iter().enumerate().all(|(j, &k)| half.is_r_min(j + 1, k))
}

/// For each level and vertex, the level where its run of single-incoming-edge
/// ancestors starts, if the vertex itself has exactly one incoming edge.
pub fn chain_starts(half: &Half) -> Vec<Vec<Option<usize>>> {
    let mut out = vec![vec![None; half.count(0)]];
    for i in 1..=half.depth() {
        let level = (0..half.count(i))
            .map(|v| match half.incoming(i, v) {
                [k] => {
                    let u = half.edge(i, *k).src;
                    Some(out[i - 1][u].unwrap_or(i - 1))
                }
                _ => None,
            })
            .collect();
        out.push(level);
    }
    out
}

/// Whether vertex `v` of `level` carries a certified finite tail class: its
/// single-edge run must span at least half of the levels seen so far.
pub fn certified_periodic(starts: &[Vec<Option<usize>>], level: usize, v: usize) -> Option<usize> {
    let m = starts[level][v]?;
    let span = level - m;
    (span >= 1 && 2 * span >= level).then_some(m)
}

/// Lexicographic successor at depth `n = path.len()`.
pub fn successor(half: &Half, path: &[usize]) -> Result<Successor> {
    check_path(half, path)?;
    let n = path.len();
    let Some(i) = (1..=n).find(|&i| !half.is_r_max(i, path[i - 1])) else {
        if n == 0 {
            return Ok(Successor::Maximal);
        }
        // wrap only where the column is final, as the stacking does
        let v = half.edge(n, path[n - 1]).dst;
        if crate::cas::closed_columns(half, n)[v] {
            return Ok(Successor::Next(min_path_into(half, n, v)));
        }
        return Ok(Successor::Maximal);
    };
    let e = half.edge(i, path[i - 1]);
    let ins = half.incoming(i, e.dst);
    let pos = ins.iter().position(|&k| k == path[i - 1]).expect("edge is listed");
    let next = ins[pos + 1];
    let mut out = path.to_vec();
    out[i - 1] = next;
    let below = min_path_into(half, i - 1, half.edge(i, next).src);
    out[..i - 1].copy_from_slice(&below);
    Ok(Successor::Next(out))
}

/// Successor without the periodic wraparound; used for enumeration.
fn plain_successor(half: &Half, path: &[usize]) -> Option<Path> {
    let n = path.len();
    let i = (1..=n).find(|&i| !half.is_r_max(i, path[i - 1]))?;
    let e = half.edge(i, path[i - 1]);
    let ins = half.incoming(i, e.dst);
    let pos = ins.iter().position(|&k| k == path[i - 1])?;
    let next = ins[pos + 1];
    let mut out = path.to_vec();
    out[i - 1] = next;
    let below = min_path_into(half, i - 1, half.edge(i, next).src);
    out[..i - 1].copy_from_slice(&below);
    Some(out)
}

/// All depth-`n` paths into `v`, ascending in the lexicographic r-order.
pub fn paths_into(half: &Half, n: usize, v: usize) -> impl Iterator<Item = Path> + '_ {
    let first = if n == 0 { Vec::new() } else { min_path_into(half, n, v) };
    std::iter::successors(Some(first), move |p| if p.is_empty() { None } else { plain_successor(half, p) })
}

/// All depth-`n` paths, grouped by range vertex then r-order. Returns an
/// error rather than allocating more than `limit` paths.
pub fn all_paths(half: &Half, n: usize, limit: usize) -> Result<Vec<Path>> {
    if n > half.depth() {
        return Err(Error::DepthExceedsWindow { requested: n, available: half.depth() });
    }
    let total: BigUint = half.truncated(n).path_counts()[n].iter().sum();
    if total > BigUint::from(limit) {
        return Err(Error::Unsupported(format!("{total} paths at depth {n} exceed the limit {limit}")));
    }
    if n == 0 {
        return Ok((0..half.count(0)).map(|_| Vec::new()).collect());
    }
    Ok((0..half.count(n)).flat_map(|v| paths_into(half, n, v)).collect())
}

/// One minimal and one maximal path per vertex of level `depth`.
pub fn min_max_paths(half: &Half, depth: usize) -> Result<(Vec<Path>, Vec<Path>)> {
    if depth > half.depth() {
        return Err(Error::DepthExceedsWindow { requested: depth, available: half.depth() });
    }
    let mins = (0..half.count(depth)).map(|v| min_path_into(half, depth, v)).collect();
    let maxs = (0..half.count(depth)).map(|v| max_path_into(half, depth, v)).collect();
    Ok((mins, maxs))
}

/// How many distinct depth-`depth` extremal prefixes survive as prefixes of
/// extremal paths at the end of the window. These approximate `|X_min|` and
/// `|X_max|`; a mismatch means the adic map has no canonical extension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtremalCounts {
    pub depth: usize,
    pub window: usize,
    pub min_count: usize,
    pub max_count: usize,
    pub mismatch: bool,
}

pub fn extremal_counts(half: &Half, depth: usize) -> Result<ExtremalCounts> {
    let window = half.depth();
    if depth > window {
        return Err(Error::DepthExceedsWindow { requested: depth, available: window });
    }
    let count = |max: bool| {
        let mut seen: Vec<Path> = (0..half.count(window))
            .map(|v| extremal_path_into(half, window, v, max)[..depth].to_vec())
            .collect();
        seen.sort();
        seen.dedup();
        seen.len()
    };
    let (min_count, max_count) = (count(false), count(true));
    Ok(ExtremalCounts { depth, window, min_count, max_count, mismatch: min_count != max_count })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ComponentKind {
    Minimal,
    Periodic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Component {
    pub kind: ComponentKind,
    /// `support[i]`: vertices of level `i` with a path into the component's
    /// level-`depth` vertices.
    pub support: Vec<Vec<usize>>,
    /// Periodic only: level and vertex after which all paths coincide.
    pub merge: Option<(usize, usize)>,
    /// Periodic only: number of paths in the tail class.
    pub period: Option<String>,
}

/// Decomposition as of depth `depth`; deeper levels may merge components.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentDecomposition {
    pub depth: usize,
    pub components: Vec<Component>,
}

impl ComponentDecomposition {
    pub fn minimal_count(&self) -> usize {
        self.components.iter().filter(|c| c.kind == ComponentKind::Minimal).count()
    }

    pub fn periodic_count(&self) -> usize {
        self.components.iter().filter(|c| c.kind == ComponentKind::Periodic).count()
    }
}

fn ancestors(half: &Half, depth: usize, tops: &[usize]) -> Vec<Vec<usize>> {
    let mut support = vec![Vec::new(); depth + 1];
    let mut cur = vec![false; half.count(depth)];
    for &v in tops {
        cur[v] = true;
    }
    for i in (0..=depth).rev() {
        support[i] = (0..cur.len()).filter(|&v| cur[v]).collect();
        if i == 0 {
            break;
        }
        let mut below = vec![false; half.count(i - 1)];
        for (v, &on) in cur.iter().enumerate() {
            if on {
                for &k in half.incoming(i, v) {
                    below[half.edge(i, k).src] = true;
                }
            }
        }
        cur = below;
    }
    support
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

pub fn components(half: &Half, depth: usize) -> Result<ComponentDecomposition> {
    if depth > half.depth() {
        return Err(Error::DepthExceedsWindow { requested: depth, available: half.depth() });
    }
    let half = half.truncated(depth);
    let starts = chain_starts(&half);
    let counts = half.path_counts();
    let mut components = Vec::new();
    let mut periodic_top = vec![false; half.count(depth)];
    for (v, flag) in periodic_top.iter_mut().enumerate() {
        if depth == 0 {
            break;
        }
        if let Some(m) = certified_periodic(&starts, depth, v) {
            *flag = true;
            // walk down the chain to the merge vertex
            let mut cur = v;
            for i in (m + 1..=depth).rev() {
                cur = half.edge(i, half.incoming(i, cur)[0]).src;
            }
            components.push(Component {
                kind: ComponentKind::Periodic,
                support: ancestors(&half, depth, &[v]),
                merge: Some((m, cur)),
                period: Some(counts[m][cur].to_string()),
            });
        }
    }
    // Minimal candidates: weak connectivity among vertices of the upper half
    // of the window that feed a non-periodic top vertex.
    let tops: Vec<usize> = (0..half.count(depth)).filter(|&v| !periodic_top[v]).collect();
    if !tops.is_empty() {
        let lo = if depth == 0 { 0 } else { (depth / 2).max(1).min(depth) };
        let live = ancestors(&half, depth, &tops);
        let mut offset = vec![0usize; depth + 2];
        for i in 0..=depth {
            offset[i + 1] = offset[i] + half.count(i);
        }
        let mut parent: Vec<usize> = (0..offset[depth + 1]).collect();
        let mut alive = vec![false; offset[depth + 1]];
        for i in lo..=depth {
            for &v in &live[i] {
                alive[offset[i] + v] = true;
            }
        }
        for i in lo + 1..=depth {
            for e in half.edges(i) {
                let (a, b) = (offset[i - 1] + e.src, offset[i] + e.dst);
                if alive[a] && alive[b] {
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    parent[ra] = rb;
                }
            }
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for &v in &tops {
            let root = find(&mut parent, offset[depth] + v);
            groups.entry(root).or_default().push(v);
        }
        for top in groups.values() {
            components.push(Component {
                kind: ComponentKind::Minimal,
                support: ancestors(&half, depth, top),
                merge: None,
                period: None,
            });
        }
    }
    Ok(ComponentDecomposition { depth, components })
}

/// r-ranks of the edges, first level first. Single digits are concatenated;
/// larger ranks are separated by dots.
pub fn rank_string(half: &Half, path: &[usize]) -> String {
    let ranks: Vec<usize> = path.iter().enumerate().map(|(j, &k)| half.edge(j + 1, k).r).collect();
    if ranks.iter().all(|&r| r < 10) {
        ranks.iter().map(|r| r.to_string()).collect()
    } else {
        ranks.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(".")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{generate, FamilyParams};

    fn half(p: FamilyParams, depth: usize) -> Half {
        generate(&p, depth).unwrap().0.positive_half()
    }

    #[test]
    fn odometer_successor_adds_one_with_carry() {
        let h = half(FamilyParams::Odometer { base: 2 }, 3);
        let min = min_path_into(&h, 3, 0);
        assert_eq!(rank_string(&h, &min), "111");
        let Successor::Next(p) = successor(&h, &min).unwrap() else { panic!() };
        assert_eq!(rank_string(&h, &p), "211");
        let Successor::Next(q) = successor(&h, &p).unwrap() else { panic!() };
        assert_eq!(rank_string(&h, &q), "121");
        let max = max_path_into(&h, 3, 0);
        assert_eq!(successor(&h, &max).unwrap(), Successor::Maximal);
    }

    #[test]
    fn odometer_enumeration_counts_in_binary() {
        let h = half(FamilyParams::Odometer { base: 2 }, 5);
        let all: Vec<String> = paths_into(&h, 5, 0).map(|p| rank_string(&h, &p)).collect();
        assert_eq!(all.len(), 32);
        for (n, s) in all.iter().enumerate() {
            let value: usize = s.chars().enumerate().map(|(j, c)| (c as usize - '1' as usize) << j).sum();
            assert_eq!(value, n);
        }
    }

    #[test]
    fn spacer_path_is_maximal_at_finite_depth() {
        // the spacer also feeds the main column, so its cylinder has no image yet
        let h = half(FamilyParams::Chacon, 4);
        let spacer = max_path_into(&h, 4, 1);
        assert_eq!(min_path_into(&h, 4, 1), spacer);
        assert_eq!(successor(&h, &spacer).unwrap(), Successor::Maximal);
        let top = max_path_into(&h, 4, 0);
        assert_eq!(successor(&h, &top).unwrap(), Successor::Maximal);
    }

    #[test]
    fn closed_chain_wraps_to_itself() {
        let e = || vec![crate::diagram::Edge::new(0, 0, 1, 1)];
        let h = Half::new(vec![1, 1, 1], vec![e(), e()]);
        assert_eq!(successor(&h, &[0, 0]).unwrap(), Successor::Next(vec![0, 0]));
    }

    #[test]
    fn invalid_paths_are_rejected() {
        let h = half(FamilyParams::Chacon, 2);
        // spacer->spacer edge followed by a main->main edge
        let ss = h.incoming(1, 1)[0];
        let mm = h.incoming(2, 0)[0];
        assert!(successor(&h, &[ss, mm]).is_err());
        assert!(successor(&h, &[99]).is_err());
    }

    #[test]
    fn extremal_paths_per_vertex() {
        let h = half(FamilyParams::Chacon, 5);
        let (mins, maxs) = min_max_paths(&h, 5).unwrap();
        assert_eq!((mins.len(), maxs.len()), (2, 2));
        let c = extremal_counts(&h, 3).unwrap();
        assert_eq!((c.min_count, c.max_count, c.mismatch), (2, 2, false));
        let h = half(FamilyParams::Odometer { base: 3 }, 4);
        let (mins, maxs) = min_max_paths(&h, 4).unwrap();
        assert_eq!((mins.len(), maxs.len()), (1, 1));
    }

    #[test]
    fn decompositions() {
        let d = components(&half(FamilyParams::Chacon, 6), 6).unwrap();
        assert_eq!((d.minimal_count(), d.periodic_count()), (1, 1));
        let p = d.components.iter().find(|c| c.kind == ComponentKind::Periodic).unwrap();
        assert_eq!(p.merge, Some((0, 1)));
        assert_eq!(p.period.as_deref(), Some("1"));
        let d = components(&half(FamilyParams::Odometer { base: 2 }, 6), 6).unwrap();
        assert_eq!((d.minimal_count(), d.periodic_count()), (1, 0));
        let d = components(&half(FamilyParams::DisjointOdometers { base: 2 }, 6), 6).unwrap();
        assert_eq!((d.minimal_count(), d.periodic_count()), (2, 0));
    }
}
