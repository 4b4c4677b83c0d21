use std::fmt::Write as _;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use bratteli::bdg::{parse_bdg, write_bdg, write_family, BdgFile};
use bratteli::cas::{iet_at_depth, IntervalExchange};
use bratteli::diagram::validate_diagram;
use bratteli::ergodicity::{verdict, CriterionOptions, FamilyHint, DEFAULT_SEARCH_BOUND};
use bratteli::pathspace::{all_paths, components, extremal_counts, rank_string, successor, Successor};
use bratteli::renorm::{check_functoriality, renorm_scales, shift};
use bratteli::scalar::{fmt_rational, parse_rational};
use bratteli::surface::{build_surface, build_surface_lazy, Direction, FlatSurfaceModel, FlowOutcome, Region, SurfacePoint};
use bratteli::svg::{render_iet_svg, render_svg, RenderOptions};
use bratteli::weights::check_weight_conditions;
use bratteli::{generate, DiagramSpec, FamilyParams, Rational, Scalar, WeightPair, WeightedHalf};

#[derive(Parser)]
#[command(name = "bratteli", version, about = "Ordered Bratteli diagrams as adic maps, interval exchanges and flat surfaces")]
struct Cli {
    /// Print reports as JSON documents.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for every sampled check.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Input {
    /// `.bdg` file; `-` or nothing reads standard input.
    input: Option<PathBuf>,
    /// Family instead of a file, e.g. "chacon" or "symmetric 2 3".
    #[arg(long, short = 'f')]
    family: Option<String>,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Mode {
    Exact,
    Float,
}

#[derive(Clone, Copy, ValueEnum)]
enum Dir {
    V,
    H,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a family's diagram as `.bdg`.
    Gen {
        name: String,
        params: Vec<String>,
        #[arg(long)]
        depth: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Write the one-line family form instead of the expansion.
        #[arg(long)]
        shorthand: bool,
    },
    /// Structural and weight checks.
    Validate {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        depth: Option<usize>,
        /// Largest path weight at the window end accepted as decaying.
        #[arg(long)]
        decay_threshold: Option<String>,
    },
    /// Depth-n paths of the positive half as r-rank strings.
    Paths {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value_t = 100_000)]
        limit: usize,
        /// Also print each successor.
        #[arg(long)]
        successors: bool,
    },
    /// Pieces of the depth-K interval exchange of the positive half.
    Iet {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        depth: usize,
        /// Use the negative half.
        #[arg(long)]
        negative: bool,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Rectangles, area and gluings of the flat surface.
    Surface {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        depth: usize,
        /// Teichmuller stretch factor applied before reporting.
        #[arg(long)]
        stretch: Option<String>,
    },
    /// Vertical or horizontal flow from a point.
    Flow {
        #[command(flatten)]
        input: Input,
        /// `rect:x,y` in rectangle coordinates, or `random`.
        #[arg(long, default_value = "random")]
        start: String,
        #[arg(long)]
        time: String,
        #[arg(long, value_enum, default_value = "v")]
        dir: Dir,
        #[arg(long, default_value_t = 24)]
        depth: usize,
        #[arg(long, value_enum, default_value = "exact")]
        mode: Mode,
        /// Report the time share spent in `rect:x0,x1,y0,y1`.
        #[arg(long)]
        observe: Option<String>,
        /// Print only the summary, not every segment.
        #[arg(long)]
        quiet: bool,
    },
    /// Shift the diagram by k levels and rescale the weights.
    Shift {
        #[command(flatten)]
        input: Input,
        #[arg(long, short)]
        k: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compare the shifted surface with the deformed original.
    Functoriality {
        #[command(flatten)]
        input: Input,
        #[arg(long, short, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 24)]
        depth: usize,
    },
    /// Per-level criterion terms and a verdict.
    Criterion {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "0.1")]
        eta: String,
        #[arg(long)]
        depth: usize,
        /// e.g. `symmetric:n=bounded`, `explosive:p=bounded,n=bounded`, or `auto`.
        #[arg(long)]
        family_hint: Option<String>,
        #[arg(long, default_value_t = DEFAULT_SEARCH_BOUND)]
        bound: usize,
        /// Also report rows after auto-telescoping.
        #[arg(long)]
        telescope: bool,
    },
    /// SVG picture of the surface.
    Render {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        depth: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        no_labels: bool,
    },
}

/// Failure carrying its exit code.
struct Failure {
    code: u8,
    err: anyhow::Error,
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        let err = e.into();
        let code = match err.downcast_ref::<bratteli::Error>() {
            Some(e) if e.is_depth_error() => 2,
            _ => 1,
        };
        Failure { code, err }
    }
}

type Outcome = Result<Report, Failure>;

/// Text and JSON forms of one report, plus the exit code it implies.
struct Report {
    text: String,
    json: Value,
    code: u8,
}

impl Report {
    fn ok(text: String, json: Value) -> Report {
        Report { text, json, code: 0 }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(r) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&r.json).expect("json values serialize"));
            } else {
                print!("{}", r.text);
            }
            ExitCode::from(r.code)
        }
        Err(f) => {
            eprintln!("error: {:#}", f.err);
            ExitCode::from(f.code)
        }
    }
}

struct Loaded {
    spec: DiagramSpec,
    weights: Option<WeightPair<Rational>>,
}

impl Loaded {
    fn weights(&self) -> Result<&WeightPair<Rational>, Failure> {
        self.weights.as_ref().ok_or_else(|| Failure { code: 1, err: anyhow!("the diagram carries no weights") })
    }
}

fn family_from(text: &str) -> anyhow::Result<FamilyParams> {
    let toks: Vec<&str> = text.split_whitespace().collect();
    let (name, args) = toks.split_first().ok_or_else(|| anyhow!("empty family"))?;
    Ok(FamilyParams::parse(name, args)?)
}

/// Load the input, regenerating family-backed diagrams at `depth` if larger.
fn load(input: &Input, depth: usize) -> Result<Loaded, Failure> {
    if let Some(f) = &input.family {
        let fam = family_from(f)?;
        let (spec, w) = generate(&fam, depth.min(fam.max_depth()))?;
        return Ok(Loaded { spec, weights: Some(w) });
    }
    let text = match &input.input {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?,
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).context("reading standard input")?;
            s
        }
    };
    let BdgFile { spec, weights } = parse_bdg(&text)?;
    if let Some(g) = &spec.generator {
        if (spec.max_level() as usize) < depth {
            let (spec, w) = generate(g, depth.min(g.max_depth()))?;
            return Ok(Loaded { spec, weights: Some(w) });
        }
    }
    Ok(Loaded { spec, weights })
}

fn rational(s: &str, what: &str) -> anyhow::Result<Rational> {
    parse_rational(s).ok_or_else(|| anyhow!("{what}: cannot read '{s}' as a rational"))
}

fn write_out(path: &Option<PathBuf>, content: &str) -> anyhow::Result<bool> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            std::fs::write(p, content).with_context(|| format!("writing {}", p.display()))?;
            Ok(true)
        }
        _ => Ok(false),
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.cmd {
        Cmd::Gen { name, params, depth, output, shorthand } => {
            let args: Vec<&str> = params.iter().map(String::as_str).collect();
            let fam = FamilyParams::parse(name, &args)?;
            let text = if *shorthand {
                fam.check()?;
                write_family(&fam, *depth)
            } else {
                let (spec, w) = generate(&fam, *depth)?;
                write_bdg(&spec, Some(&w))
            };
            if write_out(output, &text)? {
                let p = output.as_ref().expect("written").display().to_string();
                Ok(Report::ok(format!("wrote {p}\n"), json!({ "family": fam.to_string(), "depth": depth, "output": p })))
            } else {
                Ok(Report::ok(text.clone(), json!({ "family": fam.to_string(), "depth": depth, "bdg": text })))
            }
        }
        Cmd::Validate { input, depth, decay_threshold } => validate(input, *depth, decay_threshold.as_deref()),
        Cmd::Paths { input, depth, limit, successors } => {
            let l = load(input, *depth)?;
            let half = l.spec.positive_half();
            if half.depth() < *depth {
                return Err(bratteli::Error::DepthExceedsWindow { requested: *depth, available: half.depth() }.into());
            }
            let half = half.truncated(*depth);
            let paths = all_paths(&half, *depth, *limit)?;
            let mut text = String::new();
            let mut rows = Vec::new();
            for p in &paths {
                let name = rank_string(&half, p);
                if *successors {
                    let next = match successor(&half, p)? {
                        Successor::Next(q) => rank_string(&half, &q),
                        Successor::Maximal => "max".to_string(),
                    };
                    let _ = writeln!(text, "{name} -> {next}");
                    rows.push(json!({ "path": name, "successor": next }));
                } else {
                    let _ = writeln!(text, "{name}");
                    rows.push(json!({ "path": name }));
                }
            }
            Ok(Report::ok(text, json!({ "depth": depth, "count": paths.len(), "paths": rows })))
        }
        Cmd::Iet { input, depth, negative, svg } => {
            let l = load(input, *depth)?;
            let w = l.weights()?;
            let spec = l.spec.ensure_window(*depth, if *negative { *depth } else { 0 })?;
            let wh = if *negative {
                WeightedHalf::new(spec.negative_half().truncated(*depth), w.minus.truncated(*depth))?
            } else {
                WeightedHalf::new(spec.positive_half().truncated(*depth), w.plus.truncated(*depth))?
            };
            let iet = iet_at_depth(&wh, *depth)?;
            if let Some(path) = svg {
                std::fs::write(path, render_iet_svg(&iet, &RenderOptions::default())).with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(iet_report(&iet, *depth))
        }
        Cmd::Surface { input, depth, stretch } => {
            let l = load(input, *depth)?;
            let mut s = build_surface(&l.spec, l.weights()?, *depth)?;
            if let Some(st) = stretch {
                s = s.teichmuller(&rational(st, "stretch")?)?;
            }
            Ok(surface_report(&s, *depth)?)
        }
        Cmd::Flow { input, start, time, dir, depth, mode, observe, quiet } => {
            let l = load(input, *depth)?;
            let w = l.weights()?;
            match mode {
                Mode::Exact => {
                    let s = build_surface_lazy(&l.spec, w, *depth)?;
                    flow::<Rational>(&s, cli.seed, start, time, *dir, observe.as_deref(), *quiet)
                }
                Mode::Float => {
                    let s = build_surface_lazy(&l.spec, &w.to_float::<f64>(), *depth)?;
                    flow::<f64>(&s, cli.seed, start, time, *dir, observe.as_deref(), *quiet)
                }
            }
        }
        Cmd::Shift { input, k, output } => {
            let l = load(input, *k + 1)?;
            let st = shift(&l.spec, l.weights()?, *k)?;
            let bdg = write_bdg(&st.spec, Some(&st.weights));
            let written = write_out(output, &bdg)?;
            let scales = renorm_scales(&l.spec, l.weights()?, *k)?;
            let mut text = String::new();
            let _ = writeln!(text, "{:>3} {:>24} {:>12}", "j", "scale", "time");
            for (j, s) in scales.iter().enumerate().skip(1) {
                let _ = writeln!(text, "{j:>3} {:>24} {:>12.6}", fmt_rational(s), s.to_f64().ln());
            }
            let _ = writeln!(text, "window {}..{}", st.spec.min_level(), st.spec.max_level());
            let _ = writeln!(text, "w0+ {}", join(&st.weights.plus.root));
            let _ = writeln!(text, "w0- {}", join(&st.weights.minus.root));
            if !written {
                text.push_str(&bdg);
            }
            Ok(Report::ok(
                text,
                json!({
                    "k": k,
                    "scale": scales.iter().skip(1).map(fmt_rational).collect::<Vec<_>>(),
                    "time": scales.iter().skip(1).map(|s| s.to_f64().ln()).collect::<Vec<_>>(),
                    "window": [st.spec.min_level(), st.spec.max_level()],
                    "w0+": st.weights.plus.root.iter().map(fmt_rational).collect::<Vec<_>>(),
                    "w0-": st.weights.minus.root.iter().map(fmt_rational).collect::<Vec<_>>(),
                    "bdg": bdg,
                }),
            ))
        }
        Cmd::Functoriality { input, k, samples, depth } => {
            let l = load(input, *depth + *k)?;
            let r = check_functoriality(&l.spec, l.weights()?, *k, *samples, *depth, cli.seed)?;
            let mut text = String::new();
            let _ = writeln!(text, "seed {}", r.seed);
            let _ = writeln!(text, "shift {} depth {} scale {}", r.shift, r.depth, fmt_rational(&r.scale));
            let _ = writeln!(text, "{:>10} {:>10} {:>10} {:>10}", "side", "checked", "skipped", "mismatches");
            let _ = writeln!(text, "{:>10} {:>10} {:>10} {:>10}", "plus", r.plus_checked, "-", "-");
            let _ = writeln!(text, "{:>10} {:>10} {:>10} {:>10}", "minus", r.minus_checked, "-", "-");
            let _ = writeln!(text, "{:>10} {:>10} {:>10} {:>10}", "total", r.plus_checked + r.minus_checked, r.skipped, r.mismatches.len() + r.rect_mismatches.len());
            for m in r.rect_mismatches.iter().chain(&r.mismatches) {
                let _ = writeln!(text, "mismatch: {m}");
            }
            let _ = writeln!(text, "{}", if r.ok() { "ok" } else { "FAILED" });
            let code = if r.ok() { 0 } else { 1 };
            Ok(Report { text, json: serde_json::to_value(&r)?, code })
        }
        Cmd::Criterion { input, eta, depth, family_hint, bound, telescope } => {
            let l = load(input, *depth)?;
            let hint = match family_hint.as_deref() {
                None => None,
                Some("auto") => l.spec.generator.as_ref().and_then(FamilyHint::from_family),
                Some(h) => Some(h.parse::<FamilyHint>()?),
            };
            let opts = CriterionOptions { eta: rational(eta, "eta")?, depth: *depth, bound: *bound, hint, telescope: *telescope };
            let r = verdict(&l.spec, l.weights()?, &opts)?;
            Ok(Report::ok(format!("{r}\n"), serde_json::to_value(&r)?))
        }
        Cmd::Render { input, depth, output, no_labels } => {
            let l = load(input, *depth)?;
            let s = build_surface(&l.spec, l.weights()?, *depth)?;
            let opts = RenderOptions { labels: !no_labels, ..RenderOptions::default() };
            let svg = render_svg(&s, &opts)?;
            if write_out(output, &svg)? {
                let p = output.as_ref().expect("written").display().to_string();
                Ok(Report::ok(format!("wrote {p}\n"), json!({ "output": p })))
            } else {
                Ok(Report::ok(svg.clone(), json!({ "svg": svg })))
            }
        }
    }
}

fn join(v: &[Rational]) -> String {
    v.iter().map(fmt_rational).collect::<Vec<_>>().join(" ")
}

fn validate(input: &Input, depth: Option<usize>, threshold: Option<&str>) -> Outcome {
    let l = load(input, depth.unwrap_or(0))?;
    let depth = depth.unwrap_or(l.spec.max_level() as usize).min(l.spec.max_level() as usize);
    let mut report = validate_diagram(&l.spec);
    if let Some(w) = &l.weights {
        let t = threshold.map(|t| rational(t, "decay threshold")).transpose()?;
        report.merge(check_weight_conditions(&l.spec, w, depth, t.as_ref())?);
    } else {
        report.notes.push("no weights; only structure checked".into());
    }
    let mut summary = json!({});
    if report.is_ok() && depth > 0 {
        let half = l.spec.positive_half().truncated(depth);
        let comp = components(&half, depth)?;
        let ext = extremal_counts(&half, depth)?;
        report.notes.push(format!("components at depth {depth}: {} minimal, {} periodic", comp.minimal_count(), comp.periodic_count()));
        report.notes.push(format!("extremal prefixes: {} minimal, {} maximal", ext.min_count, ext.max_count));
        summary = json!({ "minimal": comp.minimal_count(), "periodic": comp.periodic_count(), "extremal": ext });
    }
    let mut text = String::new();
    let _ = writeln!(text, "levels {}..{}", l.spec.min_level(), l.spec.max_level());
    for v in &report.violations {
        let _ = writeln!(text, "violation {:?}: {}", v.kind, v.message);
    }
    for n in &report.notes {
        let _ = writeln!(text, "note: {n}");
    }
    let _ = writeln!(text, "{}", if report.is_ok() { "valid" } else { "invalid" });
    let code = if report.is_ok() { 0 } else { 1 };
    Ok(Report { text, json: json!({ "valid": report.is_ok(), "report": report, "components": summary }), code })
}

fn iet_report(iet: &IntervalExchange<Rational>, depth: usize) -> Report {
    let mut text = String::new();
    let mut pieces = Vec::new();
    for p in &iet.pieces {
        let (a, b) = (fmt_rational(&p.lo), fmt_rational(&p.hi));
        let (c, d) = (fmt_rational(&(p.lo.clone() + p.offset.clone())), fmt_rational(&(p.hi.clone() + p.offset.clone())));
        let _ = writeln!(text, "{a} {b} -> {c} {d}");
        pieces.push(json!({ "src_lo": a, "src_hi": b, "img_lo": c, "img_hi": d }));
    }
    let undefined: Vec<Value> = iet.undefined.iter().map(|(l, h)| json!([fmt_rational(l), fmt_rational(h)])).collect();
    for (l, h) in &iet.undefined {
        let _ = writeln!(text, "# undefined {} {}", fmt_rational(l), fmt_rational(h));
    }
    let _ = writeln!(text, "# {} pieces", iet.pieces.len());
    Report::ok(
        text,
        json!({
            "depth": depth,
            "domain": [fmt_rational(&iet.domain.0), fmt_rational(&iet.domain.1)],
            "count": iet.pieces.len(),
            "pieces": pieces,
            "undefined": undefined,
        }),
    )
}

fn surface_report(s: &FlatSurfaceModel<Rational>, depth: usize) -> anyhow::Result<Report> {
    let mut text = String::new();
    let _ = writeln!(text, "{:>4} {:>16} {:>16} {:>16} {:>16}", "rect", "width", "height", "x0", "y0");
    let mut rects = Vec::new();
    for (i, r) in s.rects.iter().enumerate() {
        let f = [&r.width, &r.height, &r.x0, &r.y0].map(fmt_rational);
        let _ = writeln!(text, "{i:>4} {:>16} {:>16} {:>16} {:>16}", f[0], f[1], f[2], f[3]);
        rects.push(json!({ "rect": i, "width": f[0], "height": f[1], "x0": f[2], "y0": f[3] }));
    }
    let plus = s.plus.materialize(depth)?;
    let minus = s.minus.materialize(depth)?;
    let area = fmt_rational(&s.area());
    let _ = writeln!(text, "area {area}");
    let _ = writeln!(text, "top/bottom gluing: {} pieces, undefined length {}", plus.len(), fmt_rational(&plus.undefined_length()));
    let _ = writeln!(text, "right/left gluing: {} pieces, undefined length {}", minus.len(), fmt_rational(&minus.undefined_length()));
    Ok(Report::ok(
        text,
        json!({
            "depth": depth,
            "rects": rects,
            "area": area,
            "plus_pieces": plus.len(),
            "plus_undefined": fmt_rational(&plus.undefined_length()),
            "minus_pieces": minus.len(),
            "minus_undefined": fmt_rational(&minus.undefined_length()),
        }),
    ))
}

/// `rect:a,b[,c,d]` into the rectangle index and rationals.
fn rect_coords(s: &str, n: usize) -> anyhow::Result<(usize, Vec<Rational>)> {
    let (r, rest) = s.split_once(':').ok_or_else(|| anyhow!("expected rect:coordinates, got '{s}'"))?;
    let rect = r.trim().parse().with_context(|| format!("rectangle index '{r}'"))?;
    let vals = rest.split(',').map(|t| rational(t, "coordinate")).collect::<anyhow::Result<Vec<_>>>()?;
    if vals.len() != n {
        bail!("expected {n} coordinates in '{s}'");
    }
    Ok((rect, vals))
}

fn flow<S: Scalar>(s: &FlatSurfaceModel<S>, seed: u64, start: &str, time: &str, dir: Dir, observe: Option<&str>, quiet: bool) -> Outcome {
    let p = if start == "random" {
        s.seeded_point(seed)
    } else {
        let (rect, v) = rect_coords(start, 2)?;
        SurfacePoint { rect, x: S::from_rational(&v[0]), y: S::from_rational(&v[1]) }
    };
    let t = S::from_rational(&rational(time, "time")?);
    let dir = match dir {
        Dir::V => Direction::Vertical,
        Dir::H => Direction::Horizontal,
    };
    let region = match observe {
        None => Region::Everything,
        Some(o) => {
            let (rect, v) = rect_coords(o, 4)?;
            let c: Vec<S> = v.iter().map(S::from_rational).collect();
            Region::Box { rect, x: (c[0].clone(), c[1].clone()), y: (c[2].clone(), c[3].clone()) }
        }
    };
    let mut text = String::new();
    let _ = writeln!(text, "# seed {seed}");
    let _ = writeln!(text, "# t rect x y");
    let mut rows = Vec::new();
    let mut first = true;
    let report = s.birkhoff_average(&p, &t, dir, &region, 0)?;
    if !quiet {
        s.flow_segments(&p, &t, dir, |seg| {
            if first || seg.length != S::zero() {
                let _ = writeln!(text, "{} {} {} {}", seg.t0, seg.start.rect, seg.start.x, seg.start.y);
                rows.push(json!({ "t": seg.t0.to_string(), "rect": seg.start.rect, "x": seg.start.x.to_string(), "y": seg.start.y.to_string() }));
            }
            first = false;
        })?;
    }
    let (end, status, code) = match &report.outcome {
        FlowOutcome::Arrived(q) => (q.clone(), "arrived".to_string(), 0),
        FlowOutcome::SingularHit { at, .. } => (at.clone(), "singular".to_string(), 0),
        FlowOutcome::DepthExceeded { at, suggested_depth, .. } => (at.clone(), format!("depth exceeded, try depth {suggested_depth}"), 2),
    };
    if !quiet {
        let _ = writeln!(text, "{} {} {} {}", report.time, end.rect, end.x, end.y);
    }
    let _ = writeln!(text, "# status {status}");
    let _ = writeln!(text, "# time {}", report.time);
    if let Some(m) = &report.mean {
        let _ = writeln!(text, "# mean {m}");
    }
    Ok(Report {
        text,
        json: json!({
            "seed": seed,
            "start": { "rect": p.rect, "x": p.x.to_string(), "y": p.y.to_string() },
            "trajectory": rows,
            "end": { "rect": end.rect, "x": end.x.to_string(), "y": end.y.to_string() },
            "status": status,
            "time": report.time.to_string(),
            "mean": report.mean.as_ref().map(|m| m.to_string()),
        }),
        code,
    })
}
