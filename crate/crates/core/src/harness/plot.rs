use std::fmt::Write as _;
use std::path::Path;

use super::report::Summary;
use crate::error::{Error, Result};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const LEFT: f64 = 60.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 50.0;

const RECOVERY_COLOR: &str = "#1f77b4";
const CERTIFIED_COLOR: &str = "#ff7f0e";
const BOUND_COLOR: &str = "#2ca02c";

struct Frame {
    p_min: f64,
    p_max: f64,
}

impl Frame {
    fn x(&self, p: f64) -> f64 {
        let span = self.p_max - self.p_min;
        let t = if span > 0.0 {
            (p - self.p_min) / span
        } else {
            0.5
        };
        LEFT + t * (WIDTH - LEFT - RIGHT)
    }

    fn y(&self, rate: f64) -> f64 {
        TOP + (1.0 - rate.clamp(0.0, 1.0)) * (HEIGHT - TOP - BOTTOM)
    }
}

fn polyline(out: &mut String, pts: &[(f64, f64)], color: &str, dashed: bool) {
    let coords: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
    let dash = if dashed {
        r#" stroke-dasharray="6 4""#
    } else {
        ""
    };
    let _ = writeln!(
        out,
        r#"  <polyline fill="none" stroke="{color}" stroke-width="2"{dash} points="{}"/>"#,
        coords.join(" ")
    );
}

/// Renders recovery and certification rates against `p` as a standalone SVG
/// line chart. The `1 - ε1 - ε2` curve is overlaid wherever it is
/// non-vacuous; vacuous configurations get a text annotation instead.
pub fn render_svg(summary: &Summary) -> Result<String> {
    let pts = &summary.points;
    if pts.len() < 2 {
        return Err(Error::InvalidArgument(
            "plotting needs at least two p values; add points to p_grid".into(),
        ));
    }
    let frame = Frame {
        p_min: pts.iter().map(|s| s.p).fold(f64::INFINITY, f64::min),
        p_max: pts.iter().map(|s| s.p).fold(f64::NEG_INFINITY, f64::max),
    };

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"  <rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"  <text x="{LEFT}" y="18">{} n={} q={}</text>"#,
        summary.family, summary.n, summary.q
    );

    for k in 0..=4 {
        let rate = k as f64 / 4.0;
        let y = frame.y(rate);
        let _ = writeln!(
            out,
            r##"  <line class="gridline" x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#dddddd"/>"##,
            WIDTH - RIGHT
        );
        let _ = writeln!(
            out,
            r#"  <text x="{:.2}" y="{:.2}" text-anchor="end">{rate:.2}</text>"#,
            LEFT - 6.0,
            y + 4.0
        );
    }
    for s in pts {
        let x = frame.x(s.p);
        let _ = writeln!(
            out,
            r#"  <text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            HEIGHT - BOTTOM + 16.0,
            s.p
        );
    }
    let _ = writeln!(
        out,
        r#"  <text x="{:.2}" y="{:.2}" text-anchor="middle">edge noise p</text>"#,
        (LEFT + WIDTH - RIGHT) / 2.0,
        HEIGHT - 10.0
    );

    let series = |f: fn(&super::PointSummary) -> f64| -> Vec<(f64, f64)> {
        pts.iter().map(|s| (frame.x(s.p), frame.y(f(s)))).collect()
    };
    polyline(
        &mut out,
        &series(|s| s.recovery_rate),
        RECOVERY_COLOR,
        false,
    );
    polyline(
        &mut out,
        &series(|s| s.certification_rate),
        CERTIFIED_COLOR,
        false,
    );

    let bound: Vec<(f64, f64)> = pts
        .iter()
        .filter(|s| s.vacuous == Some(false))
        .filter_map(|s| s.combined_success.map(|b| (frame.x(s.p), frame.y(b))))
        .collect();
    let any_vacuous = pts.iter().any(|s| s.vacuous == Some(true));
    match bound.len() {
        0 => {}
        1 => {
            let (x, y) = bound[0];
            let _ = writeln!(
                out,
                r#"  <circle cx="{x:.2}" cy="{y:.2}" r="3" fill="{BOUND_COLOR}"/>"#
            );
        }
        _ => polyline(&mut out, &bound, BOUND_COLOR, true),
    }
    if any_vacuous {
        let note = if bound.is_empty() {
            "bound vacuous"
        } else {
            "bound vacuous at some p"
        };
        let _ = writeln!(
            out,
            r#"  <text class="annotation" x="{:.2}" y="{:.2}" fill="{BOUND_COLOR}">{note}</text>"#,
            LEFT + 8.0,
            HEIGHT - BOTTOM - 8.0
        );
    }

    let legend_x = WIDTH - RIGHT + 12.0;
    let mut entries = vec![
        ("recovery rate", RECOVERY_COLOR),
        ("certified rate", CERTIFIED_COLOR),
    ];
    if !bound.is_empty() {
        entries.push(("1 - eps1 - eps2", BOUND_COLOR));
    }
    for (k, (label, color)) in entries.iter().enumerate() {
        let y = TOP + 10.0 + 20.0 * k as f64;
        let _ = writeln!(
            out,
            r#"  <line x1="{legend_x:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{color}" stroke-width="2"/>"#,
            legend_x + 20.0
        );
        let _ = writeln!(
            out,
            r#"  <text x="{:.2}" y="{:.2}">{label}</text>"#,
            legend_x + 26.0,
            y + 4.0
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

pub fn plot_svg(summary: &Summary, path: &Path) -> Result<()> {
    let svg = render_svg(summary)?;
    std::fs::write(path, svg).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{GraphStats, PointSummary};

    fn point(p: f64, rate: f64, bound: Option<(f64, bool)>) -> PointSummary {
        PointSummary {
            p,
            trials: 10,
            recovery_rate: rate,
            sign_class_rate: rate,
            certification_rate: rate,
            mean_hamming: 0.0,
            brute_match_rate: None,
            eps1: None,
            eps2: None,
            combined_success: bound.map(|b| b.0),
            vacuous: bound.map(|b| b.1),
        }
    }

    fn summary(points: Vec<PointSummary>) -> Summary {
        Summary {
            family: "complete".into(),
            n: 12,
            q: 0.1,
            trials_per_point: 10,
            base_seed: 0,
            graph: GraphStats {
                n: 12,
                edges: 66,
                dmax: 11,
                phi: 6.0,
                phi_exact: true,
            },
            eps2: None,
            points,
        }
    }

    #[test]
    fn two_points_two_polylines() {
        let svg = render_svg(&summary(vec![point(0.0, 1.0, None), point(0.1, 1.0, None)])).unwrap();
        let lines: Vec<&str> = svg.lines().filter(|l| l.contains("<polyline")).collect();
        assert_eq!(lines.len(), 2);
        let top = format!("{:.2}", TOP);
        for l in lines {
            let pts = l
                .split("points=\"")
                .nth(1)
                .unwrap()
                .trim_end_matches("\"/>");
            let coords: Vec<&str> = pts.split(' ').collect();
            assert_eq!(coords.len(), 2);
            // all-ones rates sit on the top gridline
            assert!(coords.iter().all(|c| c.ends_with(&format!(",{top}"))));
        }
        assert!(svg.contains(&format!(r#"y1="{top}""#)));
        assert!(!svg.contains("bound vacuous"));
    }

    #[test]
    fn vacuous_bound_is_annotated() {
        let s = summary(vec![
            point(0.05, 1.0, Some((-3.0, true))),
            point(0.1, 0.9, Some((-180.0, true))),
        ]);
        let svg = render_svg(&s).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains(">bound vacuous<"));
    }

    #[test]
    fn non_vacuous_bound_is_drawn() {
        let s = summary(vec![
            point(0.05, 1.0, Some((0.9, false))),
            point(0.1, 1.0, Some((0.6, false))),
        ]);
        let svg = render_svg(&s).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 3);
        assert!(svg.contains("1 - eps1 - eps2"));
    }

    #[test]
    fn single_point_refused() {
        let err = render_svg(&summary(vec![point(0.1, 1.0, None)])).unwrap_err();
        assert!(err.to_string().contains("at least two"));
    }
}
