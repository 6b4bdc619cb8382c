//! SVG rendering of a construction in the affine chart `z = 1`.
//!
//! Floating point appears only here. The curve is traced by marching squares
//! over a sampling grid; points and tangents come from the exact data and are
//! converted at the last moment.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use crate::cubic::{Cubic, MONOMIALS};
use crate::engine::PointPair;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlotOptions {
    pub width: u32,
    pub height: u32,
    /// Grid cells per side for curve tracing.
    pub resolution: usize,
    pub tangents: bool,
}

impl Default for PlotOptions {
    fn default() -> Self {
        Self { width: 800, height: 800, resolution: 240, tangents: false }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotOutput {
    pub svg: String,
    /// Problems with the viewport or with individual points; never fatal.
    pub warnings: Vec<String>,
}

/// Scales a list of big integers into `f64` without overflow, keeping ratios.
fn scaled_f64(values: &[BigInt]) -> Vec<f64> {
    let bits = values.iter().map(|v| v.bits()).max().unwrap_or(0);
    let shift = bits.saturating_sub(900);
    values
        .iter()
        .map(|v| {
            let v: BigInt = if shift > 0 {
                let mag = v.abs() >> shift;
                if v.is_negative() { -mag } else { mag }
            } else {
                v.clone()
            };
            v.to_f64().unwrap_or(0.0)
        })
        .collect()
}

fn affine_f64(coords: &[BigInt; 3]) -> Option<(f64, f64)> {
    let v = scaled_f64(coords);
    if v[2] == 0.0 {
        return None;
    }
    let (x, y) = (v[0] / v[2], v[1] / v[2]);
    (x.is_finite() && y.is_finite()).then_some((x, y))
}

struct Viewport {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    width: f64,
    height: f64,
}

impl Viewport {
    fn px(&self, x: f64, y: f64) -> (f64, f64) {
        (
            (x - self.x0) / (self.x1 - self.x0) * self.width,
            (self.y1 - y) / (self.y1 - self.y0) * self.height,
        )
    }

    fn contains(&self, x: f64, y: f64) -> bool {
        (self.x0..=self.x1).contains(&x) && (self.y0..=self.y1).contains(&y)
    }
}

fn span(values: &mut [f64], warnings: &mut Vec<String>, axis: &str) -> (f64, f64) {
    if values.is_empty() {
        return (-5.0, 5.0);
    }
    values.sort_by(f64::total_cmp);
    // large runs contain far outliers; frame the central bulk
    let trim = if values.len() > 20 { values.len() / 20 } else { 0 };
    let (lo, hi) = (values[trim], values[values.len() - 1 - trim]);
    let width = hi - lo;
    if width < 1e-9 * lo.abs().max(1.0) {
        warnings.push(format!("degenerate {axis} range at {lo}; using a unit window"));
        return (lo - 1.0, hi + 1.0);
    }
    (lo - 0.15 * width, hi + 0.15 * width)
}

fn color(id: usize) -> String {
    format!("hsl({:.1},70%,45%)", (id as f64 * 137.508) % 360.0)
}

fn trace_curve(curve: &Cubic, vp: &Viewport, n: usize, out: &mut String) {
    let coeffs = scaled_f64(curve.coeffs());
    let eval = |x: f64, y: f64| -> f64 {
        coeffs
            .iter()
            .zip(MONOMIALS)
            .map(|(c, [i, j, _])| c * x.powi(i as i32) * y.powi(j as i32))
            .sum()
    };
    let n = n.max(2);
    let xs: Vec<f64> = (0..=n).map(|i| vp.x0 + (vp.x1 - vp.x0) * i as f64 / n as f64).collect();
    let ys: Vec<f64> = (0..=n).map(|j| vp.y0 + (vp.y1 - vp.y0) * j as f64 / n as f64).collect();
    let grid: Vec<Vec<f64>> = ys.iter().map(|&y| xs.iter().map(|&x| eval(x, y)).collect()).collect();
    let mut path = String::new();
    for j in 0..n {
        for i in 0..n {
            let corners = [
                (xs[i], ys[j], grid[j][i]),
                (xs[i + 1], ys[j], grid[j][i + 1]),
                (xs[i + 1], ys[j + 1], grid[j + 1][i + 1]),
                (xs[i], ys[j + 1], grid[j + 1][i]),
            ];
            let mut hits = Vec::with_capacity(4);
            for k in 0..4 {
                let (ax, ay, av) = corners[k];
                let (bx, by, bv) = corners[(k + 1) % 4];
                if (av < 0.0) != (bv < 0.0) {
                    let t = av / (av - bv);
                    hits.push((ax + t * (bx - ax), ay + t * (by - ay)));
                }
            }
            if hits.len() == 4 {
                let centre = eval((xs[i] + xs[i + 1]) / 2.0, (ys[j] + ys[j + 1]) / 2.0);
                if (centre < 0.0) != (corners[0].2 < 0.0) {
                    hits.swap(1, 3);
                }
            }
            for seg in hits.chunks_exact(2) {
                let (ax, ay) = vp.px(seg[0].0, seg[0].1);
                let (bx, by) = vp.px(seg[1].0, seg[1].1);
                write!(path, "M{ax:.2} {ay:.2}L{bx:.2} {by:.2}").unwrap();
            }
        }
    }
    if !path.is_empty() {
        writeln!(out, r##"<path class="curve" d="{path}" fill="none" stroke="#222" stroke-width="1.2"/>"##).unwrap();
    }
}

/// Renders `pairs` (and `curve`, when given) as a standalone SVG document.
pub fn render_svg(curve: Option<&Cubic>, pairs: &[PointPair], opts: &PlotOptions) -> PlotOutput {
    let mut warnings = Vec::new();
    let mut placed = Vec::new();
    let mut at_infinity = 0;
    for (id, pair) in pairs.iter().enumerate() {
        for p in pair.members() {
            match affine_f64(p.coords()) {
                Some((x, y)) => placed.push((id, p, x, y)),
                None => at_infinity += 1,
            }
        }
    }
    if at_infinity > 0 {
        warnings.push(format!("{at_infinity} point(s) at infinity or out of floating range not drawn"));
    }
    let mut xs: Vec<f64> = placed.iter().map(|t| t.2).collect();
    let mut ys: Vec<f64> = placed.iter().map(|t| t.3).collect();
    let (x0, x1) = span(&mut xs, &mut warnings, "x");
    let (y0, y1) = span(&mut ys, &mut warnings, "y");
    let (w, h) = (opts.width.max(1) as f64, opts.height.max(1) as f64);
    let vp = Viewport { x0, x1, y0, y1, width: w, height: h };

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    )
    .unwrap();
    writeln!(svg, r##"<rect width="{w}" height="{h}" fill="#fff" stroke="#999"/>"##).unwrap();
    if (x0..=x1).contains(&0.0) {
        let (ax, _) = vp.px(0.0, 0.0);
        writeln!(svg, r##"<line class="axis" x1="{ax:.2}" y1="0" x2="{ax:.2}" y2="{h}" stroke="#bbb"/>"##).unwrap();
    }
    if (y0..=y1).contains(&0.0) {
        let (_, ay) = vp.px(0.0, 0.0);
        writeln!(svg, r##"<line class="axis" x1="0" y1="{ay:.2}" x2="{w}" y2="{ay:.2}" stroke="#bbb"/>"##).unwrap();
    }
    if let Some(curve) = curve {
        trace_curve(curve, &vp, opts.resolution, &mut svg);
    }
    if opts.tangents {
        if let Some(curve) = curve {
            let reach = 0.06 * (x1 - x0).max(y1 - y0);
            for (id, p, x, y) in placed.iter().filter(|t| vp.contains(t.2, t.3)) {
                let Ok(t) = curve.tangent_at(p) else {
                    warnings.push(format!("no tangent at {p}"));
                    continue;
                };
                let g = scaled_f64(t.coords());
                let (dx, dy) = (g[1], -g[0]);
                let norm = dx.hypot(dy);
                if norm == 0.0 || !norm.is_finite() {
                    continue;
                }
                let (ux, uy) = (dx / norm * reach, dy / norm * reach);
                let (ax, ay) = vp.px(x - ux, y - uy);
                let (bx, by) = vp.px(x + ux, y + uy);
                writeln!(
                    svg,
                    r#"<line class="tangent" x1="{ax:.2}" y1="{ay:.2}" x2="{bx:.2}" y2="{by:.2}" stroke="{}" stroke-width="1"/>"#,
                    color(*id)
                )
                .unwrap();
            }
        }
    }
    for (id, p, x, y) in placed.iter().filter(|t| vp.contains(t.2, t.3)) {
        let (cx, cy) = vp.px(*x, *y);
        writeln!(
            svg,
            r#"<circle class="point" data-pair="{id}" cx="{cx:.2}" cy="{cy:.2}" r="3.5" fill="{}"><title>{p}</title></circle>"#,
            color(*id)
        )
        .unwrap();
    }
    svg.push_str("</svg>\n");
    PlotOutput { svg, warnings }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projective::ProjPoint;

    fn pt(x: i64, y: i64, z: i64) -> ProjPoint {
        ProjPoint::from_ints(x, y, z).unwrap()
    }

    #[test]
    fn empty_plot_is_valid() {
        let out = render_svg(None, &[], &PlotOptions::default());
        assert!(out.svg.starts_with("<svg") && out.svg.ends_with("</svg>\n"));
        assert_eq!(out.svg.matches("class=\"axis\"").count(), 2);
        assert!(!out.svg.contains("<circle"));
    }

    #[test]
    fn torsion_points_and_curve() {
        let curve = Cubic::from_ints([1, 0, 5, 0, 0, 4, 0, -1, 0, 0]).unwrap();
        let pairs = [
            PointPair::new(pt(0, 1, 0), pt(0, 0, 1)).unwrap(),
            PointPair::new(pt(2, 6, 1), pt(2, -6, 1)).unwrap(),
            PointPair::new(pt(-2, 2, 1), pt(-2, -2, 1)).unwrap(),
            PointPair::new(pt(-1, 0, 1), pt(-4, 0, 1)).unwrap(),
        ];
        let opts = PlotOptions { tangents: true, ..PlotOptions::default() };
        let out = render_svg(Some(&curve), &pairs, &opts);
        assert_eq!(out.svg.matches("<circle").count(), 7);
        assert!(out.svg.contains("class=\"curve\""));
        assert!(out.svg.matches("class=\"tangent\"").count() >= 6);
        assert_eq!(out.warnings.len(), 1);
    }

    #[test]
    fn single_point_viewport_is_widened() {
        let pairs = [PointPair::new(pt(1, 1, 1), pt(1, 1, 0)).unwrap()];
        let out = render_svg(None, &pairs, &PlotOptions::default());
        assert!(out.warnings.iter().any(|w| w.contains("degenerate")));
        assert_eq!(out.svg.matches("<circle").count(), 1);
    }
}
