use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::args::{PlotArgs, PlotKind};
use crate::artifact::RunArtifact;
use crate::benchmark::parse_csv;
use crate::error::{read_file, write_file, CliError, CliResult};
use crate::stats::{resolve_algorithms, score_table};

const SIZE: f64 = 400.0;
const MARGIN: f64 = 40.0;
const ON_DIAGONAL: f64 = 1e-12;

/// Where each dataset falls relative to `y = x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DiagonalCounts {
    pub above: usize,
    pub on: usize,
    pub below: usize,
}

pub fn diagonal_counts(points: &[(f64, f64)]) -> DiagonalCounts {
    let mut c = DiagonalCounts::default();
    for &(x, y) in points {
        if (y - x).abs() <= ON_DIAGONAL {
            c.on += 1;
        } else if y > x {
            c.above += 1;
        } else {
            c.below += 1;
        }
    }
    c
}

struct Frame {
    lo: (f64, f64),
    hi: (f64, f64),
}

impl Frame {
    fn fit(points: &[(f64, f64)], square: bool) -> Self {
        let mut lo = (f64::INFINITY, f64::INFINITY);
        let mut hi = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        for &(x, y) in points {
            lo = (lo.0.min(x), lo.1.min(y));
            hi = (hi.0.max(x), hi.1.max(y));
        }
        if points.is_empty() {
            lo = (0.0, 0.0);
            hi = (1.0, 1.0);
        }
        if square {
            let (a, b) = (lo.0.min(lo.1), hi.0.max(hi.1));
            lo = (a, a);
            hi = (b, b);
        }
        let pad = |l: f64, h: f64| {
            if h - l > 0.0 {
                (l, h)
            } else {
                (l - 0.5, h + 0.5)
            }
        };
        let (x0, x1) = pad(lo.0, hi.0);
        let (y0, y1) = pad(lo.1, hi.1);
        Self {
            lo: (x0, y0),
            hi: (x1, y1),
        }
    }

    fn map(&self, (x, y): (f64, f64)) -> (f64, f64) {
        let span = SIZE - 2.0 * MARGIN;
        (
            MARGIN + (x - self.lo.0) / (self.hi.0 - self.lo.0) * span,
            SIZE - MARGIN - (y - self.lo.1) / (self.hi.1 - self.lo.1) * span,
        )
    }
}

fn svg_open(title: &str, xlabel: &str, ylabel: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{w}" height="{w}" fill="none" stroke="black"/>"#,
        w = SIZE - 2.0 * MARGIN
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{title}</text>"#,
        SIZE / 2.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="12">{xlabel}</text>"#,
        SIZE / 2.0,
        SIZE - 10.0
    );
    let _ = writeln!(
        s,
        r#"<text x="12" y="{}" text-anchor="middle" font-size="12" transform="rotate(-90 12 {})">{ylabel}</text>"#,
        SIZE / 2.0,
        SIZE / 2.0
    );
    s
}

fn with_ext(prefix: &Path, ext: &str) -> PathBuf {
    PathBuf::from(format!("{}.{ext}", prefix.display()))
}

fn scatter(args: &PlotArgs) -> CliResult<String> {
    let results = args
        .results
        .as_ref()
        .ok_or_else(|| CliError::Config("scatter needs --results".into()))?;
    let (x, y) = match (args.x, args.y) {
        (Some(x), Some(y)) => (x, y),
        _ => return Err(CliError::Config("scatter needs --x and --y".into())),
    };
    let records = parse_csv(&read_file(results)?)?;
    let algorithms = if x == y { vec![x] } else { vec![x, y] };
    resolve_algorithms(&records, &algorithms)?;
    let metric = args.metric;
    let table = score_table(&records, &algorithms, metric);
    // undo the better-is-larger orientation so points show raw means
    let sign = if metric.min_optimal() { -1.0 } else { 1.0 };
    let points: Vec<(f64, f64)> = table
        .scores
        .iter()
        .map(|r| (sign * r[0], sign * r[r.len() - 1]))
        .collect();
    let counts = diagonal_counts(&points);

    let mut text = String::from("dataset,x,y\n");
    for (d, (px, py)) in table.datasets.iter().zip(&points) {
        let _ = writeln!(text, "{d},{px},{py}");
    }
    write_file(&with_ext(&args.output, "csv"), &text)?;

    let frame = Frame::fit(&points, true);
    let mut svg = svg_open(
        &format!("{} ({} datasets)", metric.name(), points.len()),
        x.name(),
        y.name(),
    );
    let (a, b) = (
        frame.map((frame.lo.0, frame.lo.0)),
        frame.map((frame.hi.0, frame.hi.0)),
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="gray" stroke-dasharray="4 3"/>"#,
        a.0, a.1, b.0, b.1
    );
    for &p in &points {
        let (cx, cy) = frame.map(p);
        let _ = writeln!(
            svg,
            r#"<circle cx="{cx:.2}" cy="{cy:.2}" r="3" fill="steelblue"/>"#
        );
    }
    svg.push_str("</svg>\n");
    write_file(&with_ext(&args.output, "svg"), &svg)?;

    Ok(format!(
        "above {}\non {}\nbelow {}\n",
        counts.above, counts.on, counts.below
    ))
}

fn trace(args: &PlotArgs) -> CliResult<String> {
    let path = args
        .artifact
        .as_ref()
        .ok_or_else(|| CliError::Config("trace needs --artifact".into()))?;
    let artifact = RunArtifact::from_text(&read_file(path)?)?;
    let points: Vec<(f64, f64)> = artifact
        .objective_trace
        .iter()
        .enumerate()
        .map(|(i, &j)| ((i + 1) as f64, j))
        .collect();
    let mut text = String::from("iteration,objective\n");
    for (i, j) in &points {
        let _ = writeln!(text, "{i},{j}");
    }
    write_file(&with_ext(&args.output, "csv"), &text)?;

    let frame = Frame::fit(&points, false);
    let mut svg = svg_open(
        &format!("{} objective", artifact.config.algorithm),
        "iteration",
        "J",
    );
    let coords: Vec<String> = points
        .iter()
        .map(|&p| {
            let (a, b) = frame.map(p);
            format!("{a:.2},{b:.2}")
        })
        .collect();
    let _ = writeln!(
        svg,
        r#"<polyline points="{}" fill="none" stroke="firebrick"/>"#,
        coords.join(" ")
    );
    svg.push_str("</svg>\n");
    write_file(&with_ext(&args.output, "svg"), &svg)?;

    let increases = artifact
        .objective_trace
        .windows(2)
        .filter(|w| w[1] > w[0])
        .count();
    Ok(format!(
        "iterations {}\nincreases {increases}\n",
        points.len()
    ))
}

pub fn run(args: &PlotArgs) -> CliResult<String> {
    match args.kind {
        PlotKind::Scatter => scatter(args),
        PlotKind::Trace => trace(args),
    }
}
