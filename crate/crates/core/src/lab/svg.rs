use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::loewner::CurveTrace;

/// A marked disc drawn on top of the curves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disc {
    pub center: [f64; 2],
    pub radius: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderOptions {
    /// At most this many vertices per polyline; the last tip is always kept.
    pub max_points_per_trace: usize,
    /// Width of the picture in pixels; the height follows the aspect ratio.
    pub width: f64,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions { max_points_per_trace: 2000, width: 800.0 }
    }
}

fn decimate(tips: &[Complex64], max: usize) -> Vec<Complex64> {
    let max = max.max(2);
    if tips.len() <= max {
        return tips.to_vec();
    }
    let stride = tips.len().div_ceil(max - 1);
    let mut out: Vec<Complex64> = tips.iter().step_by(stride).copied().collect();
    if out.last() != tips.last() {
        out.push(*tips.last().unwrap());
    }
    out
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// SVG document with one polyline per curve and one circle per disc. The view
/// box is the bounding box of everything drawn, enlarged by 10% on each side.
pub fn render_svg(traces: &[CurveTrace], discs: &[Disc], opts: &RenderOptions) -> Result<String> {
    if traces.is_empty() {
        return Err(Error::InvalidArgument("nothing to render: no traces".into()));
    }
    let lines: Vec<Vec<Complex64>> = traces.iter().map(|t| decimate(t.tips(), opts.max_points_per_trace)).collect();

    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, 0.0f64, f64::NEG_INFINITY);
    for p in lines.iter().flatten() {
        x0 = x0.min(p.re);
        x1 = x1.max(p.re);
        y0 = y0.min(p.im);
        y1 = y1.max(p.im);
    }
    for d in discs {
        x0 = x0.min(d.center[0] - d.radius);
        x1 = x1.max(d.center[0] + d.radius);
        y0 = y0.min(d.center[1] - d.radius);
        y1 = y1.max(d.center[1] + d.radius);
    }
    // degenerate boxes (a vertical segment, say) still need some width
    let span = (x1 - x0).max(y1 - y0).max(1e-9);
    if x1 - x0 < 1e-3 * span {
        x0 -= 0.05 * span;
        x1 += 0.05 * span;
    }
    if y1 - y0 < 1e-3 * span {
        y1 += 0.05 * span;
    }
    let (mx, my) = (0.1 * (x1 - x0), 0.1 * (y1 - y0));
    let (vx, vw) = (x0 - mx, x1 - x0 + 2.0 * mx);
    // y grows downwards in SVG, so plot -Im z
    let (vy, vh) = (-(y1 + my), y1 - y0 + 2.0 * my);
    let height = opts.width * vh / vw;
    let stroke = 0.002 * vw.max(vh);

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}" viewBox="{} {} {} {}">"#,
        opts.width,
        height.max(1.0),
        vx,
        vy,
        vw,
        vh
    )
    .unwrap();
    writeln!(
        s,
        r##"<line x1="{}" y1="0" x2="{}" y2="0" stroke="#888" stroke-width="{}"/>"##,
        vx,
        vx + vw,
        stroke
    )
    .unwrap();
    for (i, line) in lines.iter().enumerate() {
        let pts: Vec<String> = line.iter().map(|p| format!("{:.6},{:.6}", p.re, -p.im)).collect();
        writeln!(
            s,
            r#"<polyline fill="none" stroke="{}" stroke-width="{}" points="{}"/>"#,
            PALETTE[i % PALETTE.len()],
            stroke,
            pts.join(" ")
        )
        .unwrap();
    }
    for d in discs {
        writeln!(
            s,
            r##"<circle cx="{}" cy="{}" r="{}" fill="#00000022" stroke="#000" stroke-width="{}"/>"##,
            d.center[0],
            -d.center[1],
            d.radius,
            stroke
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn render_traces(traces: &[CurveTrace], discs: &[Disc], path: &Path, opts: &RenderOptions) -> Result<()> {
    let svg = render_svg(traces, discs, opts)?;
    std::fs::write(path, svg).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loewner::{sample_driving, trace_curve, DrivingPath};
    use crate::math::Kappa;

    fn k() -> Kappa {
        Kappa::new(8.0 / 3.0).unwrap()
    }

    #[test]
    fn one_trace_two_discs() {
        let tr = trace_curve(&sample_driving(k(), 0.5, 1e-3, 1).unwrap());
        let discs = [Disc { center: [0.0, 1.0], radius: 0.1 }, Disc { center: [1.0, 1.0], radius: 0.2 }];
        let svg = render_svg(&[tr], &discs, &RenderOptions::default()).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert_eq!(svg.matches("<circle").count(), 2);
    }

    #[test]
    fn zero_driving_is_a_vertical_segment() {
        let tr = trace_curve(&DrivingPath::from_fn(k(), 1.0, 1e-3, |_| 0.0).unwrap());
        let svg = render_svg(&[tr], &[], &RenderOptions::default()).unwrap();
        let pts = svg.split("points=\"").nth(1).unwrap().split('"').next().unwrap();
        for p in pts.split(' ') {
            let (x, _) = p.split_once(',').unwrap();
            assert!(x.parse::<f64>().unwrap().abs() < 1e-6);
        }
        assert!(pts.ends_with(",-2.000000"), "{}", &pts[pts.len() - 30..]);
    }

    #[test]
    fn view_box_has_ten_percent_margin() {
        let tr = trace_curve(&DrivingPath::from_fn(k(), 1.0, 1e-2, |t| t).unwrap());
        let disc = Disc { center: [0.0, 3.0], radius: 0.5 };
        let svg = render_svg(&[tr.clone()], &[disc], &RenderOptions::default()).unwrap();
        let vb: Vec<f64> = svg.split("viewBox=\"").nth(1).unwrap().split('"').next().unwrap()
            .split(' ').map(|v| v.parse().unwrap()).collect();
        let (lo, hi) = tr.tips().iter().fold((f64::INFINITY, f64::NEG_INFINITY), |a, p| (a.0.min(p.re), a.1.max(p.re)));
        let (x0, x1) = (lo.min(-0.5), hi.max(0.5));
        assert!((vb[0] - (x0 - 0.1 * (x1 - x0))).abs() < 1e-12);
        assert!((vb[2] - 1.2 * (x1 - x0)).abs() < 1e-12);
        assert!((vb[3] - 1.2 * 3.5).abs() < 1e-12);
    }

    #[test]
    fn decimation_bounds_size() {
        let traces: Vec<_> = (0..100).map(|s| trace_curve(&sample_driving(k(), 0.1, 1e-4, s).unwrap())).collect();
        let opts = RenderOptions { max_points_per_trace: 50, ..Default::default() };
        let svg = render_svg(&traces, &[], &opts).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 100);
        assert!(svg.len() < 100 * 51 * 24 + 10_000);
        for t in &traces {
            let d = decimate(t.tips(), 50);
            assert!(d.len() <= 51);
            assert_eq!(d.last(), t.tips().last());
        }
    }

    #[test]
    fn empty_trace_list_rejected() {
        assert!(matches!(render_svg(&[], &[], &RenderOptions::default()), Err(Error::InvalidArgument(_))));
    }
}
