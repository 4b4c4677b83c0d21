//! The line-oriented `.bdg` diagram format.
//!
//! ```text
//! levels -1 2
//! level -1 1
//! level 0 1
//! ...
//! edge 1 0 0 1 1 w=1/2
//! w0+ 0 1
//! w0- 0 1
//! ```
//!
//! Edge lines use the conventional label and each half's own orientation:
//! on label `-n` the source is on level `-(n-1)` and the target on `-n`.
//! A file may instead hold a single `family <name> <params...> depth <K>`
//! line. `#` starts a comment.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::diagram::{label_of_upper, upper_of_label, DiagramSpec, Edge};
use crate::error::{Error, Result};
use crate::families::{generate, FamilyParams};
use crate::scalar::{fmt_rational, parse_rational, Rational};
use crate::weights::{HalfWeights, WeightPair};

#[derive(Clone, Debug, PartialEq)]
pub struct BdgFile {
    pub spec: DiagramSpec,
    /// Present when every edge and root vertex carries a weight.
    pub weights: Option<WeightPair<Rational>>,
}

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn num<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T> {
    tok.parse().map_err(|_| perr(line, format!("expected {what}, got '{tok}'")))
}

pub fn parse_bdg(text: &str) -> Result<BdgFile> {
    let mut family: Option<(usize, FamilyParams, usize)> = None;
    let mut range: Option<(i64, i64)> = None;
    let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
    // label -> (line, edge, weight)
    let mut edges: BTreeMap<i64, Vec<(usize, Edge, Option<Rational>)>> = BTreeMap::new();
    let mut roots: [BTreeMap<usize, Rational>; 2] = [BTreeMap::new(), BTreeMap::new()];
    let mut explicit_line = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        if toks[0] != "family" {
            explicit_line.get_or_insert(line);
        }
        match toks[0] {
            "family" => {
                if family.is_some() {
                    return Err(perr(line, "second family line"));
                }
                let d = toks.iter().position(|t| *t == "depth").ok_or_else(|| perr(line, "family line needs 'depth <K>'"))?;
                if d < 2 || d + 2 != toks.len() {
                    return Err(perr(line, "expected 'family <name> <params...> depth <K>'"));
                }
                let depth = num(toks[d + 1], line, "a depth")?;
                let f = FamilyParams::parse(toks[1], &toks[2..d]).map_err(|e| perr(line, e.to_string()))?;
                family = Some((line, f, depth));
            }
            "levels" => {
                if toks.len() != 3 {
                    return Err(perr(line, "expected 'levels <imin> <imax>'"));
                }
                if range.is_some() {
                    return Err(perr(line, "second levels header"));
                }
                let (lo, hi): (i64, i64) = (num(toks[1], line, "an integer")?, num(toks[2], line, "an integer")?);
                if lo > 0 || hi < 0 {
                    return Err(perr(line, "level range must contain 0"));
                }
                range = Some((lo, hi));
            }
            "level" => {
                if toks.len() != 3 {
                    return Err(perr(line, "expected 'level <i> <count>'"));
                }
                let i: i64 = num(toks[1], line, "a level")?;
                let c: usize = num(toks[2], line, "a vertex count")?;
                if c == 0 {
                    return Err(perr(line, format!("level {i} has no vertices")));
                }
                if counts.insert(i, c).is_some() {
                    return Err(perr(line, format!("level {i} declared twice")));
                }
            }
            "edge" => {
                if toks.len() != 6 && toks.len() != 7 {
                    return Err(perr(line, "expected 'edge <i> <src> <dst> <r> <s> [w=<p>/<q>]'"));
                }
                let label: i64 = num(toks[1], line, "a level")?;
                if label == 0 {
                    return Err(perr(line, "edges have nonzero level labels"));
                }
                let mut f = [0usize; 4];
                for (slot, tok) in f.iter_mut().zip(&toks[2..6]) {
                    *slot = num(tok, line, "a nonnegative integer")?;
                }
                if f[2] == 0 || f[3] == 0 {
                    return Err(perr(line, "ranks start at 1"));
                }
                let w = match toks.get(6) {
                    None => None,
                    Some(t) => {
                        let v = t.strip_prefix("w=").ok_or_else(|| perr(line, format!("expected w=<p>/<q>, got '{t}'")))?;
                        Some(positive(v, line)?)
                    }
                };
                edges.entry(label).or_default().push((line, Edge::new(f[0], f[1], f[2], f[3]), w));
            }
            "w0+" | "w0-" => {
                if toks.len() != 3 {
                    return Err(perr(line, format!("expected '{} <v> <p>/<q>'", toks[0])));
                }
                let v: usize = num(toks[1], line, "a vertex")?;
                let side = usize::from(toks[0] == "w0-");
                if roots[side].insert(v, positive(toks[2], line)?).is_some() {
                    return Err(perr(line, format!("vertex {v} weighted twice")));
                }
            }
            other => return Err(perr(line, format!("unknown directive '{other}'"))),
        }
    }

    if let Some((line, f, depth)) = family {
        if let Some(other) = explicit_line {
            return Err(perr(other, format!("family shorthand on line {line} cannot be mixed with explicit lines")));
        }
        let (spec, w) = generate(&f, depth).map_err(|e| perr(line, e.to_string()))?;
        return Ok(BdgFile { spec, weights: Some(w) });
    }

    let (lo, hi) = range.ok_or_else(|| perr(1, "missing 'levels <imin> <imax>' header"))?;
    let mut cvec = Vec::new();
    for i in lo..=hi {
        cvec.push(*counts.get(&i).ok_or_else(|| perr(text.lines().count().max(1), format!("level {i} not declared")))?);
    }
    if let Some((&i, _)) = counts.iter().find(|(i, _)| **i < lo || **i > hi) {
        return Err(perr(1, format!("level {i} outside the declared range")));
    }
    let count = |l: i64| cvec[(l - lo) as usize];

    let mut transitions = Vec::new();
    let mut plus_w: Vec<Vec<Option<Rational>>> = Vec::new();
    let mut minus_w: Vec<Vec<Option<Rational>>> = vec![Vec::new(); (-lo) as usize];
    let mut any_weight = !roots[0].is_empty() || !roots[1].is_empty();
    for upper in lo + 1..=hi {
        let label = label_of_upper(upper);
        let mut level_edges = Vec::new();
        let mut ws = Vec::new();
        for (line, e, w) in edges.remove(&label).unwrap_or_default() {
            // native endpoints: (lower |level|, higher |level|)
            let (near, far) = if label > 0 { (label - 1, label) } else { (label + 1, label) };
            if e.src >= count(near) || e.dst >= count(far) {
                return Err(perr(line, format!("edge {} -> {} out of range on level {label}", e.src, e.dst)));
            }
            any_weight |= w.is_some();
            ws.push(w);
            level_edges.push(if label > 0 { e } else { e.reversed() });
        }
        transitions.push(level_edges);
        if label > 0 {
            plus_w.push(ws);
        } else {
            minus_w[(-label - 1) as usize] = ws;
        }
    }
    if let Some((label, list)) = edges.into_iter().next() {
        return Err(perr(list[0].0, format!("level {label} outside the declared range")));
    }
    for (side, name) in [(0, "w0+"), (1, "w0-")] {
        if let Some((&v, _)) = roots[side].iter().find(|(v, _)| **v >= cvec[(-lo) as usize]) {
            return Err(perr(1, format!("{name} vertex {v} out of range")));
        }
    }
    let spec = DiagramSpec::new(lo, cvec.clone(), transitions).map_err(|e| perr(1, e.to_string()))?;

    let weights = if any_weight {
        let c0 = cvec[(-lo) as usize];
        let half = |side: usize, ws: Vec<Vec<Option<Rational>>>, name: &str| -> Result<HalfWeights<Rational>> {
            let root = (0..c0)
                .map(|v| roots[side].get(&v).cloned().ok_or_else(|| Error::MissingWeight(format!("{name} {v}"))))
                .collect::<Result<Vec<_>>>()?;
            let edges = ws
                .into_iter()
                .enumerate()
                .map(|(i, l)| {
                    l.into_iter()
                        .enumerate()
                        .map(|(k, w)| w.ok_or_else(|| Error::MissingWeight(format!("edge {k} on level {}{}", if side == 0 { "" } else { "-" }, i + 1))))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(HalfWeights { root, edges })
        };
        Some(WeightPair { plus: half(0, plus_w, "w0+")?, minus: half(1, minus_w, "w0-")? })
    } else {
        None
    };
    Ok(BdgFile { spec, weights })
}

fn positive(tok: &str, line: usize) -> Result<Rational> {
    let r = parse_rational(tok).ok_or_else(|| perr(line, format!("expected a rational, got '{tok}'")))?;
    if r <= Rational::from_integer(0.into()) {
        return Err(perr(line, format!("weight {tok} is not positive")));
    }
    Ok(r)
}

/// Explicit form of `spec`; edges within a level are written in storage order.
pub fn write_bdg(spec: &DiagramSpec, weights: Option<&WeightPair<Rational>>) -> String {
    let mut out = String::new();
    if let Some(g) = &spec.generator {
        let _ = writeln!(out, "# family {g} depth {}", spec.max_level().max(-spec.min_level()));
    }
    let _ = writeln!(out, "levels {} {}", spec.min_level(), spec.max_level());
    for l in spec.min_level()..=spec.max_level() {
        let _ = writeln!(out, "level {l} {}", spec.count(l));
    }
    let mut uppers: Vec<i64> = spec.uppers().filter(|u| *u > 0).collect();
    uppers.extend((spec.min_level() + 1..=0).rev());
    for upper in uppers {
        let label = label_of_upper(upper);
        debug_assert_eq!(upper_of_label(label), Some(upper));
        for (k, e) in spec.edges(upper).iter().enumerate() {
            let (e, w) = if label > 0 {
                (e.clone(), weights.map(|w| &w.plus.edges[(label - 1) as usize][k]))
            } else {
                (e.reversed(), weights.map(|w| &w.minus.edges[(-label - 1) as usize][k]))
            };
            let _ = write!(out, "edge {label} {} {} {} {}", e.src, e.dst, e.r, e.s);
            if let Some(w) = w {
                let _ = write!(out, " w={}", fmt_rational(w));
            }
            out.push('\n');
        }
    }
    if let Some(w) = weights {
        for (name, h) in [("w0+", &w.plus), ("w0-", &w.minus)] {
            for (v, r) in h.root.iter().enumerate() {
                let _ = writeln!(out, "{name} {v} {}", fmt_rational(r));
            }
        }
    }
    out
}

/// Shorthand form for a family.
pub fn write_family(family: &FamilyParams, depth: usize) -> String {
    format!("family {family} depth {depth}\n")
}
