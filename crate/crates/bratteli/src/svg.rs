//! SVG pictures of surfaces and interval exchanges. Output depends only on
//! the input, so identical inputs give byte-identical documents.

use std::fmt::Write as _;

use crate::cas::IntervalExchange;
use crate::error::Result;
use crate::scalar::Scalar;
use crate::surface::FlatSurfaceModel;

#[derive(Clone, Debug)]
pub struct RenderOptions {
    /// Side of the drawing area in pixels, excluding the margin.
    pub size: f64,
    pub margin: f64,
    pub labels: bool,
    pub ticks: bool,
    /// Gluing depth to draw; defaults to the surface's own depth.
    pub depth: Option<usize>,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions { size: 480.0, margin: 40.0, labels: true, ticks: true, depth: None }
    }
}

struct Canvas {
    out: String,
    scale: f64,
    margin: f64,
    height: f64,
}

impl Canvas {
    fn new(w: f64, h: f64, opts: &RenderOptions) -> Canvas {
        let scale = opts.size / w.max(h);
        let (pw, ph) = (w * scale + 2.0 * opts.margin, h * scale + 2.0 * opts.margin);
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{pw:.0}" height="{ph:.0}" viewBox="0 0 {pw:.0} {ph:.0}">"#
        );
        let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
        Canvas { out, scale, margin: opts.margin, height: h }
    }

    /// Model coordinates to pixels, y pointing up.
    fn px(&self, x: f64, y: f64) -> (f64, f64) {
        (self.margin + x * self.scale, self.margin + (self.height - y) * self.scale)
    }

    fn line(&mut self, a: (f64, f64), b: (f64, f64), style: &str) {
        let (p, q) = (self.px(a.0, a.1), self.px(b.0, b.1));
        let _ = writeln!(self.out, r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" {style}/>"#, p.0, p.1, q.0, q.1);
    }

    fn text(&mut self, at: (f64, f64), dx: f64, dy: f64, s: &str) {
        let p = self.px(at.0, at.1);
        let _ = writeln!(
            self.out,
            r#"<text x="{:.3}" y="{:.3}" font-family="serif" font-size="11" text-anchor="middle">{s}</text>"#,
            p.0 + dx,
            p.1 + dy
        );
    }

    fn finish(mut self) -> String {
        self.out.push_str("</svg>\n");
        self.out
    }
}

/// `(lo, hi, offset)` pieces cut further at every point of `cuts` on both the
/// source and the image side.
fn split_pieces<S: Scalar>(iet: &IntervalExchange<S>, cuts: &[S]) -> Vec<(S, S, S)> {
    let mut out = Vec::new();
    for p in iet.merged() {
        let mut pts: Vec<S> = vec![p.lo.clone(), p.hi.clone()];
        for c in cuts {
            if *c > p.lo && *c < p.hi {
                pts.push(c.clone());
            }
            let back = c.clone() - p.offset.clone();
            if back > p.lo && back < p.hi {
                pts.push(back);
            }
        }
        pts.sort_by(|a, b| a.partial_cmp(b).expect("ordered scalars"));
        pts.dedup();
        for w in pts.windows(2) {
            out.push((w[0].clone(), w[1].clone(), p.offset.clone()));
        }
    }
    out
}

/// Rectangles on the diagonal; top/bottom pieces glued by the positive map
/// carry `A_i`, right/left pieces glued by the negative map carry `B_i`.
/// Breakpoints are ticked and stretches where the gluing is undefined at the
/// drawn depth are dashed.
pub fn render_svg<S: Scalar>(surface: &FlatSurfaceModel<S>, opts: &RenderOptions) -> Result<String> {
    let depth = opts.depth.unwrap_or(surface.depth);
    let plus = surface.plus.materialize(depth)?;
    let minus = surface.minus.materialize(depth)?;
    let f = |s: &S| s.to_f64();
    let mut c = Canvas::new(f(&surface.total_width()), f(&surface.total_height()), opts);

    let xcuts: Vec<S> = surface.rects.iter().map(|r| r.x0.clone()).collect();
    let ycuts: Vec<S> = surface.rects.iter().map(|r| r.y0.clone()).collect();
    // rectangle containing a horizontal (or vertical) coordinate range
    let rect_at = |v: &S, horizontal: bool| -> usize {
        surface
            .rects
            .iter()
            .rposition(|r| if horizontal { r.x0 <= *v } else { r.y0 <= *v })
            .unwrap_or(0)
    };

    for (i, r) in surface.rects.iter().enumerate() {
        let (x0, y0, w, h) = (f(&r.x0), f(&r.y0), f(&r.width), f(&r.height));
        let a = c.px(x0, y0 + h);
        let _ = writeln!(
            c.out,
            r##"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="#eef3fa" stroke="black" stroke-width="1"/>"##,
            a.0,
            a.1,
            w * c.scale,
            h * c.scale
        );
        if opts.labels && surface.rects.len() > 1 {
            c.text((x0 + w / 2.0, y0 + h / 2.0), 0.0, 4.0, &format!("R{}", i + 1));
        }
    }

    let tick = |c: &mut Canvas, at: (f64, f64), vertical_edge: bool| {
        let (dx, dy) = if vertical_edge { (3.0 / c.scale, 0.0) } else { (0.0, 3.0 / c.scale) };
        c.line((at.0 - dx, at.1 - dy), (at.0 + dx, at.1 + dy), r#"stroke="black" stroke-width="1""#);
    };

    for (n, (lo, hi, off)) in split_pieces(&plus, &xcuts).into_iter().enumerate() {
        let name = format!("A<tspan baseline-shift=\"sub\" font-size=\"8\">{}</tspan>", n + 1);
        let top = surface.rects[rect_at(&lo, true)].clone();
        let (tlo, thi) = (lo.clone(), hi.clone());
        let (blo, bhi) = (lo + off.clone(), hi + off);
        let bot = surface.rects[rect_at(&blo, true)].clone();
        let ty = f(&top.y0) + f(&top.height);
        let by = f(&bot.y0);
        if opts.ticks {
            for (x, y) in [(f(&tlo), ty), (f(&thi), ty), (f(&blo), by), (f(&bhi), by)] {
                tick(&mut c, (x, y), false);
            }
        }
        if opts.labels {
            c.text(((f(&tlo) + f(&thi)) / 2.0, ty), 0.0, -5.0, &name);
            c.text(((f(&blo) + f(&bhi)) / 2.0, by), 0.0, 14.0, &name);
        }
    }
    for (n, (lo, hi, off)) in split_pieces(&minus, &ycuts).into_iter().enumerate() {
        let name = format!("B<tspan baseline-shift=\"sub\" font-size=\"8\">{}</tspan>", n + 1);
        let right = surface.rects[rect_at(&lo, false)].clone();
        let (rlo, rhi) = (lo.clone(), hi.clone());
        let (llo, lhi) = (lo + off.clone(), hi + off);
        let left = surface.rects[rect_at(&llo, false)].clone();
        let rx = f(&right.x0) + f(&right.width);
        let lx = f(&left.x0);
        if opts.ticks {
            for (x, y) in [(rx, f(&rlo)), (rx, f(&rhi)), (lx, f(&llo)), (lx, f(&lhi))] {
                tick(&mut c, (x, y), true);
            }
        }
        if opts.labels {
            c.text((rx, (f(&rlo) + f(&rhi)) / 2.0), 14.0, 4.0, &name);
            c.text((lx, (f(&llo) + f(&lhi)) / 2.0), -14.0, 4.0, &name);
        }
    }

    let dashed = r##"stroke="#c0392b" stroke-width="3" stroke-dasharray="4 3""##;
    for (lo, hi) in &plus.undefined {
        let r = &surface.rects[rect_at(lo, true)];
        let y = f(&r.y0) + f(&r.height);
        c.line((f(lo), y), (f(hi), y), dashed);
    }
    for (lo, hi) in &minus.undefined {
        let r = &surface.rects[rect_at(lo, false)];
        let x = f(&r.x0) + f(&r.width);
        c.line((x, f(lo)), (x, f(hi)), dashed);
    }
    Ok(c.finish())
}

/// Graph of an interval exchange: one segment per piece over the diagonal
/// box of its domain.
pub fn render_iet_svg<S: Scalar>(iet: &IntervalExchange<S>, opts: &RenderOptions) -> String {
    let (a, b) = (iet.domain.0.to_f64(), iet.domain.1.to_f64());
    let len = b - a;
    let mut c = Canvas::new(len, len, opts);
    let frame = r#"stroke="black" stroke-width="1""#;
    for (p, q) in [((0.0, 0.0), (len, 0.0)), ((len, 0.0), (len, len)), ((len, len), (0.0, len)), ((0.0, len), (0.0, 0.0))] {
        c.line(p, q, frame);
    }
    c.line((0.0, 0.0), (len, len), r##"stroke="#bbbbbb" stroke-width="0.5""##);
    for p in &iet.pieces {
        let (lo, hi, off) = (p.lo.to_f64() - a, p.hi.to_f64() - a, p.offset.to_f64());
        c.line((lo, lo + off), (hi, hi + off), r##"stroke="#1f4e9c" stroke-width="2""##);
        if opts.ticks {
            c.line((lo, 0.0), (lo, -0.01 * len), frame);
        }
    }
    c.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{generate, FamilyParams};
    use crate::surface::build_surface;

    #[test]
    fn chamanara_square_has_four_glued_pairs_each_way() {
        let (spec, w) = generate(&FamilyParams::Chamanara { base: 2 }, 4).unwrap();
        let s = build_surface(&spec, &w, 4).unwrap();
        let svg = render_svg(&s, &RenderOptions::default()).unwrap();
        for i in 1..=4 {
            let a = format!("A<tspan baseline-shift=\"sub\" font-size=\"8\">{i}</tspan>");
            let b = format!("B<tspan baseline-shift=\"sub\" font-size=\"8\">{i}</tspan>");
            assert_eq!(svg.matches(&a).count(), 2, "A_{i}");
            assert_eq!(svg.matches(&b).count(), 2, "B_{i}");
        }
        assert!(!svg.contains(">5</tspan>"));
        assert_eq!(svg.matches("<rect ").count(), 2);
    }

    #[test]
    fn output_is_deterministic() {
        let (spec, w) = generate(&FamilyParams::Chacon, 3).unwrap();
        let s = build_surface(&spec, &w, 3).unwrap();
        let a = render_svg(&s, &RenderOptions::default()).unwrap();
        let b = render_svg(&s, &RenderOptions::default()).unwrap();
        assert_eq!(a, b);
        assert!(a.starts_with("<svg") && a.ends_with("</svg>\n"));
    }
}
