//! Generators for the worked example families.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::diagram::{weld, DiagramSpec, Edge, Half};
use crate::error::{Error, Result};
use crate::scalar::{fmt_rational, int, parse_rational, rat, Rational};
use crate::weights::{HalfWeights, WeightPair};

/// Integer sequence `k -> a_k` for `k >= 1`, in a small closed-form grammar:
/// `3` (constant), `2k+1` / `k+1` / `k` (affine), `2^k` (geometric),
/// `list:1,2,3` (explicit; the last entry repeats).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Seq {
    Const(u64),
    Affine { a: u64, b: u64 },
    Geometric { base: u64 },
    List(Vec<u64>),
}

impl Seq {
    pub fn at(&self, k: usize) -> u64 {
        match self {
            Seq::Const(c) => *c,
            Seq::Affine { a, b } => a * k as u64 + b,
            Seq::Geometric { base } => base.pow(k as u32),
            Seq::List(v) => v.get(k.saturating_sub(1)).or(v.last()).copied().unwrap_or(0),
        }
    }

    pub fn is_bounded(&self) -> bool {
        match self {
            Seq::Const(_) | Seq::List(_) => true,
            Seq::Affine { a, .. } => *a == 0,
            Seq::Geometric { base } => *base <= 1,
        }
    }
}

impl fmt::Display for Seq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Seq::Const(c) => write!(f, "{c}"),
            Seq::Affine { a, b } => {
                let lead = if *a == 1 { "k".to_string() } else { format!("{a}k") };
                if *b == 0 {
                    write!(f, "{lead}")
                } else {
                    write!(f, "{lead}+{b}")
                }
            }
            Seq::Geometric { base } => write!(f, "{base}^k"),
            Seq::List(v) => {
                let parts: Vec<String> = v.iter().map(u64::to_string).collect();
                write!(f, "list:{}", parts.join(","))
            }
        }
    }
}

impl FromStr for Seq {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParams(format!("cannot read sequence '{s}'"));
        let t = s.trim().replace(' ', "");
        if let Some(rest) = t.strip_prefix("list:") {
            let v: Vec<u64> = rest.split(',').map(|x| x.parse().map_err(|_| bad())).collect::<Result<_>>()?;
            return if v.is_empty() { Err(bad()) } else { Ok(Seq::List(v)) };
        }
        if let Some(base) = t.strip_suffix("^k") {
            return Ok(Seq::Geometric { base: base.parse().map_err(|_| bad())? });
        }
        if let Some(pos) = t.find('k') {
            let a = match &t[..pos] {
                "" => 1,
                x => x.trim_end_matches('*').parse().map_err(|_| bad())?,
            };
            let b = match &t[pos + 1..] {
                "" => 0,
                x => x.strip_prefix('+').ok_or_else(bad)?.parse().map_err(|_| bad())?,
            };
            return Ok(Seq::Affine { a, b });
        }
        Ok(Seq::Const(t.parse().map_err(|_| bad())?))
    }
}

/// Spacers placed over the `j`-th subcolumn (1-based) of a staircase stage.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SpacerRule {
    /// `s_{n,j} = j`
    Index,
    Const(u64),
}

impl SpacerRule {
    fn at(&self, j: u64) -> u64 {
        match self {
            SpacerRule::Index => j,
            SpacerRule::Const(c) => *c,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum FamilyParams {
    Odometer { base: u64 },
    /// Odometer on both halves.
    Chamanara { base: u64 },
    Chacon,
    Pascal {
        #[serde(serialize_with = "crate::scalar::ser::rational")]
        p: Rational,
    },
    Staircase { cuts: Seq, spacers: SpacerRule },
    Symmetric { p: usize, n: Seq },
    Explosive { p: Seq, n: Seq },
    HajianKakutani,
    IndependentCas { q: usize },
    DisjointOdometers { base: u64 },
    Bowman,
}

impl FamilyParams {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyParams::Odometer { .. } => "odometer",
            FamilyParams::Chamanara { .. } => "chamanara",
            FamilyParams::Chacon => "chacon",
            FamilyParams::Pascal { .. } => "pascal",
            FamilyParams::Staircase { .. } => "staircase",
            FamilyParams::Symmetric { .. } => "symmetric",
            FamilyParams::Explosive { .. } => "explosive",
            FamilyParams::HajianKakutani => "hajian_kakutani",
            FamilyParams::IndependentCas { .. } => "independent_cas",
            FamilyParams::DisjointOdometers { .. } => "disjoint_odometers",
            FamilyParams::Bowman => "bowman",
        }
    }

    /// Parameters as they appear after the name in a `family` line.
    pub fn args(&self) -> Vec<String> {
        match self {
            FamilyParams::Odometer { base } | FamilyParams::Chamanara { base } | FamilyParams::DisjointOdometers { base } => {
                vec![base.to_string()]
            }
            FamilyParams::Pascal { p } => vec![fmt_rational(p)],
            FamilyParams::Staircase { cuts, spacers } => vec![
                cuts.to_string(),
                match spacers {
                    SpacerRule::Index => "j".into(),
                    SpacerRule::Const(c) => c.to_string(),
                },
            ],
            FamilyParams::Symmetric { p, n } => vec![p.to_string(), n.to_string()],
            FamilyParams::Explosive { p, n } => vec![p.to_string(), n.to_string()],
            FamilyParams::IndependentCas { q } => vec![q.to_string()],
            FamilyParams::Chacon | FamilyParams::HajianKakutani | FamilyParams::Bowman => vec![],
        }
    }

    /// Parse `name arg...`; missing args take the documented defaults.
    pub fn parse(name: &str, args: &[&str]) -> Result<FamilyParams> {
        let arg = |i: usize, default: &str| -> String { args.get(i).map_or(default.to_string(), |s| s.to_string()) };
        let int_arg = |i: usize, default: &str| -> Result<u64> {
            let s = arg(i, default);
            s.parse().map_err(|_| Error::InvalidParams(format!("{name}: expected an integer, got '{s}'")))
        };
        let fam = match name.replace('-', "_").as_str() {
            "odometer" => FamilyParams::Odometer { base: int_arg(0, "2")? },
            "chamanara" => FamilyParams::Chamanara { base: int_arg(0, "2")? },
            "disjoint_odometers" => FamilyParams::DisjointOdometers { base: int_arg(0, "2")? },
            "chacon" => FamilyParams::Chacon,
            "pascal" => {
                let s = arg(0, "1/2");
                let p = parse_rational(&s).ok_or_else(|| Error::InvalidParams(format!("pascal: cannot read p = '{s}'")))?;
                FamilyParams::Pascal { p }
            }
            "staircase" => FamilyParams::Staircase {
                cuts: arg(0, "k+1").parse()?,
                spacers: match arg(1, "j").as_str() {
                    "j" => SpacerRule::Index,
                    s => SpacerRule::Const(s.parse().map_err(|_| Error::InvalidParams(format!("staircase: bad spacer rule '{s}'")))?),
                },
            },
            "symmetric" => FamilyParams::Symmetric { p: int_arg(0, "2")? as usize, n: arg(1, "2").parse()? },
            "explosive" => FamilyParams::Explosive { p: arg(0, "k+1").parse()?, n: arg(1, "2").parse()? },
            "hajian_kakutani" => FamilyParams::HajianKakutani,
            "independent_cas" => FamilyParams::IndependentCas { q: int_arg(0, "2")? as usize },
            "bowman" => FamilyParams::Bowman,
            other => return Err(Error::InvalidParams(format!("unknown family '{other}'"))),
        };
        fam.check()?;
        Ok(fam)
    }

    pub fn check(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParams(m));
        match self {
            FamilyParams::Odometer { base } | FamilyParams::Chamanara { base } | FamilyParams::DisjointOdometers { base } if *base < 2 => {
                bad(format!("{}: base must be at least 2", self.name()))
            }
            FamilyParams::Pascal { p } if *p <= Rational::zero() || *p >= Rational::one() => bad(format!("pascal: p = {p} is not in (0,1)")),
            FamilyParams::Symmetric { p, .. } if *p < 1 => bad("symmetric: p must be positive".into()),
            FamilyParams::IndependentCas { q } if *q < 1 => bad("independent_cas: q must be positive".into()),
            _ => Ok(()),
        }
    }

    /// Largest depth this generator will produce; vertex counts explode past it.
    pub fn max_depth(&self) -> usize {
        match self {
            FamilyParams::IndependentCas { q } => match q {
                1 => 64,
                2 => 3,
                _ => 2,
            },
            FamilyParams::HajianKakutani => 8,
            FamilyParams::Explosive { .. } | FamilyParams::Pascal { .. } => 64,
            _ => 256,
        }
    }
}

impl fmt::Display for FamilyParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())?;
        for a in self.args() {
            write!(f, " {a}")?;
        }
        Ok(())
    }
}

/// Accumulates one half in native orientation with its weights.
struct HalfBuilder {
    counts: Vec<usize>,
    edges: Vec<Vec<Edge>>,
    weights: HalfWeights<Rational>,
}

impl HalfBuilder {
    fn new(root: Vec<Rational>) -> Self {
        HalfBuilder { counts: vec![root.len()], edges: Vec::new(), weights: HalfWeights { root, edges: Vec::new() } }
    }

    fn push(&mut self, count: usize, level: Vec<(Edge, Rational)>) {
        self.counts.push(count);
        let (es, ws) = level.into_iter().unzip();
        self.edges.push(es);
        self.weights.edges.push(ws);
    }

    fn finish(self) -> (Half, HalfWeights<Rational>) {
        (Half::new(self.counts, self.edges), self.weights)
    }
}

/// `c x c` identity diagram, weight 1 on every edge.
fn identity_half(root: Vec<Rational>, depth: usize) -> HalfBuilder {
    let c = root.len();
    let mut b = HalfBuilder::new(root);
    for _ in 0..depth {
        b.push(c, (0..c).map(|v| (Edge::new(v, v, 1, 1), Rational::one())).collect());
    }
    b
}

fn odometer_half(base: u64, depth: usize) -> HalfBuilder {
    let mut b = HalfBuilder::new(vec![Rational::one()]);
    for _ in 0..depth {
        let w = rat(1, base as i64);
        b.push(1, (1..=base as usize).map(|j| (Edge::new(0, 0, j, j), w.clone())).collect());
    }
    b
}

fn chacon_half(depth: usize) -> HalfBuilder {
    let mut b = HalfBuilder::new(vec![rat(2, 3), rat(1, 3)]);
    for _ in 0..depth {
        b.push(
            2,
            vec![
                (Edge::new(0, 0, 1, 1), rat(1, 3)),
                (Edge::new(0, 0, 2, 2), rat(1, 3)),
                (Edge::new(0, 0, 4, 3), rat(1, 3)),
                (Edge::new(1, 0, 3, 1), rat(2, 3)),
                (Edge::new(1, 1, 1, 2), rat(1, 3)),
            ],
        );
    }
    b
}

fn pascal_half(p: &Rational, depth: usize) -> HalfBuilder {
    let mut b = HalfBuilder::new(vec![Rational::one()]);
    let q = Rational::one() - p;
    for i in 1..=depth {
        let mut level = Vec::new();
        for j in 0..i {
            // into k=j it is the later of two incoming edges unless j=0
            let r_same = if j == 0 { 1 } else { 2 };
            level.push((Edge::new(j, j, r_same, 1), p.clone()));
            level.push((Edge::new(j, j + 1, 1, 2), q.clone()));
        }
        b.push(i + 1, level);
    }
    b
}

/// Main column (vertex 0) cut into `r_n` pieces with spacers over each;
/// the spacer reservoir is vertex 1. Weights leave exactly one main-level
/// width of spacer mass at the window end.
fn staircase_half(cuts: &Seq, spacers: &SpacerRule, depth: usize) -> Result<HalfBuilder> {
    let mut widths = vec![Rational::one()];
    let mut need = Rational::zero();
    for n in 1..=depth {
        let r = cuts.at(n);
        if r == 0 {
            return Err(Error::InvalidParams(format!("staircase: r_{n} = 0")));
        }
        let w = widths[n - 1].clone() / int(r as i64);
        let s: u64 = (1..=r).map(|j| spacers.at(j)).sum();
        need += w.clone() * int(s as i64);
        widths.push(w);
    }
    let reservoir0 = need + widths[depth].clone();
    let total = Rational::one() + reservoir0.clone();
    let main0 = Rational::one() / total.clone();
    let spare0 = reservoir0 / total;
    let mut b = HalfBuilder::new(vec![main0.clone(), spare0.clone()]);
    let mut spare = spare0;
    for n in 1..=depth {
        let r = cuts.at(n);
        let width = main0.clone() * widths[n].clone();
        let mut level = Vec::new();
        let mut rank = 0;
        let mut spacer_s = 0;
        for j in 1..=r {
            rank += 1;
            level.push((Edge::new(0, 0, rank, j as usize), rat(1, r as i64)));
            for _ in 0..spacers.at(j) {
                rank += 1;
                spacer_s += 1;
                level.push((Edge::new(1, 0, rank, spacer_s), width.clone() / spare.clone()));
            }
        }
        let used = width.clone() * int(spacer_s as i64);
        let left = spare.clone() - used;
        if left <= Rational::zero() {
            return Err(Error::InvalidParams(format!("staircase: spacer reservoir exhausted at stage {n}")));
        }
        level.push((Edge::new(1, 1, 1, spacer_s + 1), left.clone() / spare.clone()));
        spare = left;
        b.push(2, level);
    }
    Ok(b)
}

/// `p` vertices per level above 0, a single root fanning out to them, and
/// `n_k` parallel edges on the diagonal of transition `k -> k+1`.
fn symmetric_half(p: usize, n: &Seq, depth: usize) -> HalfBuilder {
    let mut b = HalfBuilder::new(vec![Rational::one()]);
    for i in 1..=depth {
        if i == 1 {
            b.push(p, (0..p).map(|v| (Edge::new(0, v, 1, v + 1), rat(1, p as i64))).collect());
            continue;
        }
        let nk = n.at(i - 1) as usize;
        let w = rat(1, (nk + p - 1) as i64);
        let mut level = Vec::new();
        for src in 0..p {
            let mut s = 0;
            for dst in 0..p {
                let copies = if src == dst { nk } else { 1 };
                // r-rank: incoming to dst sorted by (src, copy)
                let before: usize = (0..src).map(|u| if u == dst { nk } else { 1 }).sum();
                for c in 0..copies {
                    s += 1;
                    level.push((Edge::new(src, dst, before + c + 1, s), w.clone()));
                }
            }
        }
        b.push(p, level);
    }
    b
}

/// `p_k` vertices at level `k` (with `p_0 = 1`) and `n_k` edges between every
/// pair of vertices of levels `k` and `k+1` for `k >= 1`.
fn explosive_half(p: &Seq, n: &Seq, depth: usize) -> Result<HalfBuilder> {
    let count = |k: usize| if k == 0 { 1 } else { p.at(k) as usize };
    if (1..=depth).any(|k| count(k) == 0) {
        return Err(Error::InvalidParams("explosive: p_k must be positive".into()));
    }
    let mut b = HalfBuilder::new(vec![Rational::one()]);
    for i in 1..=depth {
        let (lo, hi) = (count(i - 1), count(i));
        if i == 1 {
            b.push(hi, (0..hi).map(|v| (Edge::new(0, v, 1, v + 1), rat(1, hi as i64))).collect());
            continue;
        }
        let nk = n.at(i - 1) as usize;
        let w = rat(1, (nk * hi) as i64);
        let mut level = Vec::with_capacity(lo * hi * nk);
        for src in 0..lo {
            for dst in 0..hi {
                for c in 0..nk {
                    level.push((Edge::new(src, dst, src * nk + c + 1, dst * nk + c + 1), w.clone()));
                }
            }
        }
        b.push(hi, level);
    }
    Ok(b)
}

/// Main column (vertex 0) halves at each step with `2*4^k` spacers from the
/// ghost tower (vertex 1) on the right half. The ghost's outgoing weights
/// cannot sum to 1, which is the documented failure.
fn hajian_kakutani_half(depth: usize) -> HalfBuilder {
    let mut b = HalfBuilder::new(vec![Rational::one(), Rational::one()]);
    for k in 0..depth {
        let spacers = 2 * 4usize.pow(k as u32);
        let mut level = vec![(Edge::new(0, 0, 1, 1), rat(1, 2)), (Edge::new(0, 0, 2, 2), rat(1, 2))];
        let w = Rational::new(1.into(), num_bigint::BigInt::from(2u8).pow(k as u32 + 1));
        for c in 0..spacers {
            level.push((Edge::new(1, 0, 3 + c, c + 1), w.clone()));
        }
        level.push((Edge::new(1, 1, 1, spacers + 1), Rational::one()));
        b.push(2, level);
    }
    b
}

/// Each of the `Q` columns is cut into `2Q` equal pieces; tower `(i,j)` of the
/// next stage is piece `j` of column `i` with piece `Q+i` of column `j` on top.
fn independent_cas_half(q: usize, depth: usize) -> HalfBuilder {
    let mut b = HalfBuilder::new(vec![rat(1, q as i64); q]);
    let mut c = q;
    for _ in 0..depth {
        let w = rat(1, 2 * c as i64);
        let mut level = Vec::with_capacity(2 * c * c);
        for i in 0..c {
            for j in 0..c {
                let tower = i * c + j;
                level.push((Edge::new(i, tower, 1, j + 1), w.clone()));
                level.push((Edge::new(j, tower, 2, c + i + 1), w.clone()));
            }
        }
        c *= c;
        b.push(c, level);
    }
    b
}

fn disjoint_odometers_half(base: u64, depth: usize) -> HalfBuilder {
    let mut b = HalfBuilder::new(vec![rat(1, 2), rat(1, 2)]);
    let w = rat(1, base as i64);
    for _ in 0..depth {
        let level = (0..2)
            .flat_map(|v| (1..=base as usize).map(move |j| (v, j)))
            .map(|(v, j)| (Edge::new(v, v, j, j), w.clone()))
            .collect();
        b.push(2, level);
    }
    b
}

/// Generate the family to `depth` levels on both sides of level 0. Unless the
/// family fixes one, the negative half is the identity diagram with unit
/// weights.
pub fn generate(family: &FamilyParams, depth: usize) -> Result<(DiagramSpec, WeightPair<Rational>)> {
    family.check()?;
    if depth > family.max_depth() {
        return Err(Error::DepthExceedsWindow { requested: depth, available: family.max_depth() });
    }
    let pos = match family {
        FamilyParams::Odometer { base } | FamilyParams::Chamanara { base } => odometer_half(*base, depth),
        FamilyParams::Chacon => chacon_half(depth),
        FamilyParams::Pascal { p } => pascal_half(p, depth),
        FamilyParams::Staircase { cuts, spacers } => staircase_half(cuts, spacers, depth)?,
        FamilyParams::Symmetric { p, n } => symmetric_half(*p, n, depth),
        FamilyParams::Explosive { p, n } => explosive_half(p, n, depth)?,
        FamilyParams::HajianKakutani => hajian_kakutani_half(depth),
        FamilyParams::IndependentCas { q } => independent_cas_half(*q, depth),
        FamilyParams::DisjointOdometers { base } => disjoint_odometers_half(*base, depth),
        // TODO: needs the edge multiset of the Arnoux-Yoccoz-Bowman diagram,
        // which is only given as a picture.
        FamilyParams::Bowman => return Err(Error::Unsupported("the bowman diagram is not available".into())),
    };
    let neg = match family {
        FamilyParams::Chamanara { base } => odometer_half(*base, depth),
        _ => identity_half(vec![Rational::one(); pos.counts[0]], depth),
    };
    let (ph, pw) = pos.finish();
    let (nh, nw) = neg.finish();
    let spec = weld(&ph, &nh)?.with_generator(family.clone());
    Ok((spec, WeightPair { plus: pw, minus: nw }))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Bundled {
    pub name: &'static str,
    pub family: FamilyParams,
    /// Depth used by exhaustive checks.
    pub depth: usize,
}

/// The example corpus used by cross-module checks.
pub fn bundled() -> Vec<Bundled> {
    let b = |name, family, depth| Bundled { name, family, depth };
    vec![
        b("odometer2", FamilyParams::Odometer { base: 2 }, 8),
        b("odometer3", FamilyParams::Odometer { base: 3 }, 6),
        b("chacon", FamilyParams::Chacon, 6),
        b("pascal1/3", FamilyParams::Pascal { p: rat(1, 3) }, 8),
        b("pascal1/2", FamilyParams::Pascal { p: rat(1, 2) }, 8),
        b("staircase", FamilyParams::Staircase { cuts: Seq::Affine { a: 1, b: 1 }, spacers: SpacerRule::Index }, 5),
        b("symmetric", FamilyParams::Symmetric { p: 2, n: Seq::Const(2) }, 6),
        b("explosive", FamilyParams::Explosive { p: Seq::Affine { a: 1, b: 1 }, n: Seq::Const(2) }, 4),
        b("independent_cas", FamilyParams::IndependentCas { q: 2 }, 3),
        b("chamanara", FamilyParams::Chamanara { base: 2 }, 8),
    ]
}

/// Topological entropy `w(C_0) log q_0` of independent cutting and stacking.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShieldsEntropy {
    #[serde(serialize_with = "crate::scalar::ser::rational")]
    pub total_width: Rational,
    pub towers: usize,
    pub value: f64,
}

/// `columns` are `(height, width)` pairs; their `h*w` must sum to 1.
pub fn shields_entropy(columns: &[(Rational, Rational)]) -> Result<ShieldsEntropy> {
    if columns.is_empty() {
        return Err(Error::InvalidParams("no columns".into()));
    }
    if columns.iter().any(|(h, w)| *h <= Rational::zero() || *w <= Rational::zero()) {
        return Err(Error::InvalidParams("column heights and widths must be positive".into()));
    }
    let total_width: Rational = columns.iter().map(|(_, w)| w.clone()).sum();
    let towers = columns.len();
    let value = crate::scalar::Scalar::to_f64(&total_width) * (towers as f64).ln();
    Ok(ShieldsEntropy { total_width, towers, value })
}
