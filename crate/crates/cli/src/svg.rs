//! SVG rendering of a traced curve and, optionally, its winding-one mask.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use qd_core::winding::{CurveTrace, DomainReport};
use qd_core::Error;

use crate::error::CliError;

/// Fraction of the bounding box added on each side of the view box.
const MARGIN: f64 = 0.1;

/// SVG text with one polyline per geometric component. The plane's `y`
/// axis is flipped so the picture has the usual orientation. Cells of the
/// mask with winding number one are drawn as row runs under the curve.
pub fn render_svg(trace: &CurveTrace, mask: Option<&DomainReport>) -> Result<String, CliError> {
    let polys = trace.component_polylines();
    if polys.iter().all(|p| p.is_empty()) {
        return Err(Error::NoData("trace has no points".into()).into());
    }
    let [x0, x1, y0, y1] = trace.bounding_box();
    let (mx, my) = (MARGIN * (x1 - x0).max(f64::EPSILON), MARGIN * (y1 - y0).max(f64::EPSILON));
    let (vx, vy, vw, vh) = (x0 - mx, -(y1 + my), x1 - x0 + 2.0 * mx, y1 - y0 + 2.0 * my);
    let stroke = 0.002 * vw.max(vh);

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{vx:.6} {vy:.6} {vw:.6} {vh:.6}">"#);
    if let Some(rep) = mask {
        let _ = writeln!(s, r##"<g id="domain" fill="#c6dbef" stroke="none">"##);
        let g = &rep.grid;
        for j in 0..g.height {
            let row = &rep.labels[j * g.width..(j + 1) * g.width];
            let mut i = 0;
            while i < g.width {
                if row[i] != 1 {
                    i += 1;
                    continue;
                }
                let start = i;
                while i < g.width && row[i] == 1 {
                    i += 1;
                }
                let x = g.x0 + start as f64 * g.dx;
                let y = -(g.y0 + (j + 1) as f64 * g.dy);
                let _ = writeln!(
                    s,
                    r#"<rect x="{x:.6}" y="{y:.6}" width="{:.6}" height="{:.6}"/>"#,
                    (i - start) as f64 * g.dx,
                    g.dy
                );
            }
        }
        s.push_str("</g>\n");
    }
    for (k, p) in polys.iter().enumerate() {
        let _ = write!(s, r##"<polyline id="component-{k}" fill="none" stroke="#08306b" stroke-width="{stroke:.6}" points=""##);
        for (n, z) in p.iter().enumerate() {
            if n > 0 {
                s.push(' ');
            }
            push_point(&mut s, *z);
        }
        s.push_str("\"/>\n");
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn push_point(s: &mut String, z: Complex64) {
    // Avoid "-0.000000" so equal curves render byte-identically.
    let fix = |v: f64| if v.abs() < 5e-7 { 0.0 } else { v };
    let _ = write!(s, "{:.6},{:.6}", fix(z.re), fix(-z.im));
}

pub fn emit_svg(trace: &CurveTrace, mask: Option<&DomainReport>, path: &Path) -> Result<(), CliError> {
    let text = render_svg(trace, mask)?;
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}
