//! Standalone SVG plots of spectra against sector wedges.

use std::fmt::Write as _;
use std::path::Path;

use accretia_core::Complex64;

const SIZE: f64 = 480.0;
const CENTER: f64 = SIZE / 2.0;
const RADIUS: f64 = 190.0;
const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

/// One plotted group of spectral points.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    pub label: String,
    pub points: Vec<Complex64>,
}

impl PointSet {
    pub fn new(label: impl Into<String>, points: Vec<Complex64>) -> Self {
        PointSet {
            label: label.into(),
            points,
        }
    }
}

/// Shaded wedge `|arg z − center| ≤ half_angle`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sector {
    pub center: f64,
    pub half_angle: f64,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Fixed three-decimal coordinates; `-0.000` is folded to `0.000`.
fn coord(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".to_string()
    } else {
        s
    }
}

fn screen(z: Complex64, scale: f64) -> (String, String) {
    (coord(CENTER + scale * z.re), coord(CENTER - scale * z.im))
}

fn polar(theta: f64, r: f64) -> (String, String) {
    (
        coord(CENTER + r * theta.cos()),
        coord(CENTER - r * theta.sin()),
    )
}

/// Renders the plot. Points are scaled so the largest modulus sits on the
/// outer circle; an empty input gives axes only.
pub fn render_spectrum_svg(title: &str, sets: &[PointSet], sectors: &[Sector]) -> String {
    let max_mod = sets
        .iter()
        .flat_map(|s| s.points.iter())
        .map(|z| z.norm())
        .filter(|m| m.is_finite())
        .fold(0.0, f64::max);
    let scale = if max_mod > 0.0 {
        RADIUS / max_mod
    } else {
        RADIUS
    };
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, "<title>{}</title>", escape(title));
    let _ = writeln!(
        out,
        r##"<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="#ffffff"/>"##
    );

    let reach = RADIUS * 1.1;
    for (k, s) in sectors.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let (x1, y1) = polar(s.center - s.half_angle, reach);
        if s.half_angle > 0.0 {
            let (x2, y2) = polar(s.center + s.half_angle, reach);
            let large = if 2.0 * s.half_angle > std::f64::consts::PI {
                1
            } else {
                0
            };
            let _ = writeln!(
                out,
                r#"<path class="sector" d="M {c} {c} L {x1} {y1} A {r} {r} 0 {large} 0 {x2} {y2} Z" fill="{color}" fill-opacity="0.12" stroke="{color}" stroke-opacity="0.4"/>"#,
                c = coord(CENTER),
                r = coord(reach),
            );
        } else {
            let _ = writeln!(
                out,
                r#"<line class="sector" x1="{c}" y1="{c}" x2="{x1}" y2="{y1}" stroke="{color}" stroke-opacity="0.6" stroke-width="2"/>"#,
                c = coord(CENTER),
            );
        }
    }

    let _ = writeln!(
        out,
        r##"<line class="axis" x1="10" y1="{c}" x2="{e}" y2="{c}" stroke="#000000"/>"##,
        c = coord(CENTER),
        e = coord(SIZE - 10.0)
    );
    let _ = writeln!(
        out,
        r##"<line class="axis" x1="{c}" y1="10" x2="{c}" y2="{e}" stroke="#000000"/>"##,
        c = coord(CENTER),
        e = coord(SIZE - 10.0)
    );
    let _ = writeln!(
        out,
        r##"<circle class="scale" cx="{c}" cy="{c}" r="{r}" fill="none" stroke="#999999" stroke-dasharray="4 4"/>"##,
        c = coord(CENTER),
        r = coord(RADIUS)
    );
    let _ = writeln!(
        out,
        r#"<text x="{x}" y="{y}" font-size="11" font-family="sans-serif">|z| = {m}</text>"#,
        x = coord(CENTER + RADIUS * std::f64::consts::FRAC_1_SQRT_2 + 4.0),
        y = coord(CENTER - RADIUS * std::f64::consts::FRAC_1_SQRT_2 - 4.0),
        m = if max_mod > 0.0 {
            format!("{max_mod:.4}")
        } else {
            "1".to_string()
        }
    );

    for (k, set) in sets.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        for z in set
            .points
            .iter()
            .filter(|z| z.re.is_finite() && z.im.is_finite())
        {
            let (x, y) = screen(*z, scale);
            let _ = writeln!(
                out,
                r#"<circle class="point" cx="{x}" cy="{y}" r="4" fill="{color}"/>"#
            );
        }
    }

    for (k, set) in sets.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let y = 20.0 + 18.0 * k as f64;
        let _ = writeln!(
            out,
            r#"<circle cx="20" cy="{cy}" r="5" fill="{color}"/><text x="32" y="{ty}" font-size="13" font-family="sans-serif">{label}</text>"#,
            cy = coord(y),
            ty = coord(y + 4.0),
            label = escape(&set.label)
        );
    }
    out.push_str("</svg>\n");
    out
}

pub fn emit_spectrum_svg(
    title: &str,
    sets: &[PointSet],
    sectors: &[Sector],
    path: &Path,
) -> std::io::Result<()> {
    std::fs::write(path, render_spectrum_svg(title, sets, sectors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn circles(svg: &str) -> Vec<(f64, f64)> {
        svg.lines()
            .filter(|l| l.starts_with(r#"<circle class="point""#))
            .map(|l| {
                let grab = |key: &str| {
                    let start = l.find(key).unwrap() + key.len();
                    l[start..]
                        .split('"')
                        .next()
                        .unwrap()
                        .parse::<f64>()
                        .unwrap()
                };
                (grab("cx=\"") - CENTER, CENTER - grab("cy=\""))
            })
            .collect()
    }

    #[test]
    fn cube_roots_of_one_land_on_the_scale_circle() {
        let pts: Vec<Complex64> = [0.0, 2.0 * PI / 3.0, -2.0 * PI / 3.0]
            .iter()
            .map(|&t| Complex64::from_polar(1.0, t))
            .collect();
        let sectors = [0.0, 2.0 * PI / 3.0, -2.0 * PI / 3.0].map(|c| Sector {
            center: c,
            half_angle: 0.0,
        });
        let svg = render_spectrum_svg("unit", &[PointSet::new("Λ", pts)], &sectors);
        let got = circles(&svg);
        assert_eq!(got.len(), 3);
        for ((x, y), t) in got.iter().zip([0.0, 2.0 * PI / 3.0, -2.0 * PI / 3.0]) {
            assert!((x.hypot(*y) - RADIUS).abs() < 1e-2);
            assert!((y.atan2(*x) - t).abs() < 1e-4);
        }
    }

    #[test]
    fn empty_input_gives_axes_only() {
        let svg = render_spectrum_svg("empty", &[], &[]);
        assert!(svg.contains(r#"class="axis""#));
        assert!(!svg.contains(r#"class="point""#));
        assert!(!svg.contains(r#"class="sector""#));
        assert!(svg.ends_with("</svg>\n"));
    }

    #[test]
    fn output_is_deterministic_and_escaped() {
        let sets = [PointSet::new("Γ<1>", vec![Complex64::new(1.0, -2.0)])];
        let sectors = [Sector {
            center: 0.0,
            half_angle: PI / 4.0,
        }];
        let a = render_spectrum_svg("t", &sets, &sectors);
        assert_eq!(a, render_spectrum_svg("t", &sets, &sectors));
        assert!(a.contains("Γ&lt;1&gt;"));
        assert!(a.contains(r#"class="sector" d="M"#));
    }
}
