//! Region CSV and SVG rendering. Both are pure functions of their input rows,
//! so identical inputs give byte-identical files.

use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Source {
    Capacity,
    Zf,
    Dpc,
    SdpcCorner,
}

impl Source {
    pub fn as_str(self) -> &'static str {
        match self {
            Source::Capacity => "capacity",
            Source::Zf => "zf",
            Source::Dpc => "dpc",
            Source::SdpcCorner => "sdpc-corner",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Source::Capacity, Source::Zf, Source::Dpc, Source::SdpcCorner]
            .into_iter()
            .find(|src| src.as_str() == s)
    }

    fn color(self) -> &'static str {
        match self {
            Source::Capacity => "#000000",
            Source::Zf => "#1f5fbf",
            Source::Dpc => "#c0392b",
            Source::SdpcCorner => "#2e8b57",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Row {
    pub r1: f64,
    pub r2: f64,
    pub source: Source,
}

/// Sorts by `R1`, then source, then `R2` descending.
pub fn sort_rows(rows: &mut [Row]) {
    rows.sort_by(|a, b| {
        a.r1.total_cmp(&b.r1)
            .then(a.source.cmp(&b.source))
            .then(b.r2.total_cmp(&a.r2))
    });
}

/// Decimal rendering with `digits` significant digits.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() { "0".into() } else { format!("{x}") };
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (digits as i32 - 1 - magnitude).clamp(0, 40) as usize;
    let s = format!("{x:.decimals$}");
    // rounding may have bumped the magnitude (9.99… → 10.0)
    let significant = s.chars().filter(char::is_ascii_digit).skip_while(|&d| d == '0').count();
    let s = if significant > digits && decimals > 0 {
        format!("{x:.prec$}", prec = decimals - 1)
    } else {
        s
    };
    if s.starts_with("-") && s.trim_start_matches(['-', '0', '.']).is_empty() {
        return "0".into();
    }
    s
}

pub fn to_csv(rows: &[Row]) -> String {
    let mut out = String::from("R1,R2,source\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{}",
            format_significant(r.r1, 12),
            format_significant(r.r2, 12),
            r.source.as_str()
        );
    }
    out
}

/// Parses a region CSV back into rows.
pub fn parse_csv(text: &str) -> Option<Vec<Row>> {
    let mut lines = text.lines();
    if lines.next()? != "R1,R2,source" {
        return None;
    }
    lines
        .map(|l| {
            let mut f = l.split(',');
            let r1 = f.next()?.parse().ok()?;
            let r2 = f.next()?.parse().ok()?;
            let source = Source::parse(f.next()?)?;
            Some(Row { r1, r2, source })
        })
        .collect()
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;
const TICKS: usize = 5;

/// Static plot: the staircase boundary of each source's rectangle union, the
/// S-DPC corner as a dot, axis ticks and a legend.
pub fn to_svg(rows: &[Row], title: &str, units: &str) -> String {
    let xmax = rows.iter().map(|r| r.r1).fold(0.0, f64::max).max(1e-9) * 1.05;
    let ymax = rows.iter().map(|r| r.r2).fold(0.0, f64::max).max(1e-9) * 1.05;
    let px = |x: f64| MARGIN + x / xmax * (WIDTH - 2.0 * MARGIN);
    let py = |y: f64| HEIGHT - MARGIN - y / ymax * (HEIGHT - 2.0 * MARGIN);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="24" font-family="sans-serif" font-size="16" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    // axes
    let (x0, y0) = (px(0.0), py(0.0));
    let _ = writeln!(
        out,
        r#"<path d="M{x0:.1} {:.1} L{x0:.1} {y0:.1} L{:.1} {y0:.1}" stroke="black" fill="none"/>"#,
        MARGIN,
        WIDTH - MARGIN
    );
    for k in 0..=TICKS {
        let fx = xmax * k as f64 / TICKS as f64;
        let fy = ymax * k as f64 / TICKS as f64;
        let (tx, ty) = (px(fx), py(fy));
        let _ = writeln!(
            out,
            r#"<line x1="{tx:.1}" y1="{y0:.1}" x2="{tx:.1}" y2="{:.1}" stroke="black"/><text x="{tx:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="middle">{fx:.3}</text>"#,
            y0 + 5.0,
            y0 + 18.0
        );
        let _ = writeln!(
            out,
            r#"<line x1="{:.1}" y1="{ty:.1}" x2="{x0:.1}" y2="{ty:.1}" stroke="black"/><text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="end">{fy:.3}</text>"#,
            x0 - 5.0,
            x0 - 8.0,
            ty + 4.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="13" text-anchor="middle">R1 ({units})</text>"#,
        WIDTH / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{:.1}" font-family="sans-serif" font-size="13" text-anchor="middle" transform="rotate(-90 16 {:.1})">R2 ({units})</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );

    let mut legend = 0;
    for src in [Source::Dpc, Source::Capacity, Source::Zf, Source::SdpcCorner] {
        let mut pts: Vec<&Row> = rows.iter().filter(|r| r.source == src).collect();
        if pts.is_empty() {
            continue;
        }
        pts.sort_by(|a, b| a.r1.total_cmp(&b.r1));
        if src == Source::SdpcCorner {
            for p in &pts {
                let _ = writeln!(
                    out,
                    r#"<circle cx="{:.1}" cy="{:.1}" r="4" fill="{}"/>"#,
                    px(p.r1),
                    py(p.r2),
                    src.color()
                );
            }
        } else {
            let mut d = format!("M{:.1} {:.1}", px(0.0), py(pts[0].r2));
            for (i, p) in pts.iter().enumerate() {
                let _ = write!(d, " L{:.1} {:.1}", px(p.r1), py(p.r2));
                let next_r2 = pts.get(i + 1).map_or(0.0, |q| q.r2);
                let _ = write!(d, " L{:.1} {:.1}", px(p.r1), py(next_r2));
            }
            let _ = writeln!(
                out,
                r#"<path d="{d}" stroke="{}" stroke-width="1.5" fill="none"/>"#,
                src.color()
            );
        }
        let ly = MARGIN + 16.0 * legend as f64;
        let _ = writeln!(
            out,
            r#"<rect x="{:.1}" y="{:.1}" width="12" height="3" fill="{}"/><text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="12">{}</text>"#,
            WIDTH - MARGIN - 90.0,
            ly - 4.0,
            src.color(),
            WIDTH - MARGIN - 72.0,
            ly,
            src.as_str()
        );
        legend += 1;
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
