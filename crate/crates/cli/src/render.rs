use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use serde_json::json;
use sofree::annular::is_annular_nc;
use sofree::perm::{AnnulusShape, Permutation};

use crate::error::{usage, Result};
use crate::output::{Format, Stamp, VERSION};

#[derive(clap::Args)]
pub struct Args {
    /// Circle sizes `m,n`.
    #[arg(long)]
    shape: AnnulusShape,
    /// Cycle notation on `1..=m+n`, e.g. `(1,5)(2,6)(3,4,7,8)`.
    #[arg(long)]
    perm: String,
    /// Write the SVG here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

const SIZE: f64 = 400.0;
const OUTER: f64 = 160.0;
const INNER: f64 = 80.0;
const COLORS: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"];

fn num(x: f64) -> String {
    let s = format!("{x:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

struct Layout {
    shape: AnnulusShape,
}

impl Layout {
    /// Angle of point `i`: clockwise from the top, equally spaced per circle.
    fn angle(&self, i: usize) -> f64 {
        let (k, count) = if self.shape.is_outer(i) { (i, self.shape.outer) } else { (i - self.shape.outer, self.shape.inner) };
        -PI / 2.0 + 2.0 * PI * k as f64 / count as f64
    }

    fn radius(&self, i: usize) -> f64 {
        if self.shape.is_outer(i) {
            OUTER
        } else {
            INNER
        }
    }

    fn at(&self, angle: f64, radius: f64) -> (f64, f64) {
        (SIZE / 2.0 + radius * angle.cos(), SIZE / 2.0 + radius * angle.sin())
    }

    fn point(&self, i: usize) -> (f64, f64) {
        self.at(self.angle(i), self.radius(i))
    }

    /// Straight within a circle; a quadratic curve through the middle of the
    /// annulus between circles.
    fn segment(&self, from: usize, to: usize) -> String {
        let (x, y) = self.point(to);
        if self.shape.is_outer(from) == self.shape.is_outer(to) {
            return format!(" L {} {}", num(x), num(y));
        }
        let (a, b) = (self.angle(from), self.angle(to));
        let (sx, sy) = (a.cos() + b.cos(), a.sin() + b.sin());
        let mid = if sx.hypot(sy) < 1e-9 { a + PI / 2.0 } else { sy.atan2(sx) };
        let (cx, cy) = self.at(mid, (OUTER + INNER) / 2.0);
        format!(" Q {} {} {} {}", num(cx), num(cy), num(x), num(y))
    }

    fn cycle_path(&self, cycle: &[usize]) -> String {
        let (x, y) = self.point(cycle[0]);
        let mut d = format!("M {} {}", num(x), num(y));
        let steps = if cycle.len() == 2 { 1 } else { cycle.len() };
        for t in 0..steps {
            d.push_str(&self.segment(cycle[t], cycle[(t + 1) % cycle.len()]));
        }
        d
    }
}

/// The diagram for an annular non-crossing `p`; anything else is rejected.
pub fn svg(p: &Permutation, shape: AnnulusShape, digest: &str) -> Result<String> {
    if p.size() != shape.total() {
        return Err(usage(format!("{p} does not act on the {} points of the ({shape}) annulus", shape.total())));
    }
    if !is_annular_nc(p, shape) {
        return Err(usage(format!("{p} is not annular non-crossing on ({shape})")));
    }
    let layout = Layout { shape };
    let c = SIZE / 2.0;
    let mut s = String::new();
    let w = &mut s;
    let _ = writeln!(w, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#);
    let _ = writeln!(w, "<!-- sofree {VERSION} digest {digest} -->");
    let _ = writeln!(w, "<title>{p} on ({shape})</title>");
    for r in [OUTER, INNER] {
        let _ = writeln!(w, r##"<circle class="boundary" cx="{c}" cy="{c}" r="{r}" fill="none" stroke="#999"/>"##);
    }
    let cycles: Vec<Vec<usize>> = p.cycles().into_iter().filter(|cy| cy.len() > 1).collect();
    for (k, cycle) in cycles.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let _ = writeln!(
            w,
            r#"<path class="cycle" d="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
            layout.cycle_path(cycle)
        );
    }
    for i in 0..shape.total() {
        let (x, y) = layout.point(i);
        let offset = if shape.is_outer(i) { 18.0 } else { -16.0 };
        let (lx, ly) = layout.at(layout.angle(i), layout.radius(i) + offset);
        let _ = writeln!(w, r#"<circle class="point" cx="{}" cy="{}" r="3.5" fill="black"/>"#, num(x), num(y));
        let _ = writeln!(
            w,
            r#"<text class="label" x="{}" y="{}" font-size="12" text-anchor="middle" dominant-baseline="middle">{}</text>"#,
            num(lx),
            num(ly),
            i + 1
        );
    }
    let _ = writeln!(w, "</svg>");
    Ok(s)
}

pub fn run(args: Args, format: Format, out: &mut dyn Write) -> Result<bool> {
    format.require("render", &[Format::Svg])?;
    let p = Permutation::parse_sized(&args.perm, args.shape.total())?;
    let stamp = Stamp::new(json!({ "command": "render", "shape": args.shape.to_string(), "perm": p.to_string() }), &[]);
    let doc = svg(&p, args.shape, &stamp.digest)?;
    match &args.output {
        Some(path) => std::fs::write(path, doc)?,
        None => out.write_all(doc.as_bytes())?,
    }
    Ok(true)
}
