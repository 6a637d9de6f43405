// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Log-log runtime plot of benchmark records as a standalone SVG.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::bench::{Algorithm, BenchRecord};
use symmap::Family;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;
type Series = ((Family, Algorithm), Vec<(f64, f64)>);

const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        (v[m - 1] + v[m]) / 2.0
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// One polyline per (family, algorithm); points are the median time over
/// patterns at each chip size.
pub fn render(records: &[BenchRecord]) -> String {
    let mut series: BTreeMap<(Family, Algorithm), BTreeMap<usize, Vec<f64>>> = BTreeMap::new();
    for r in records.iter().filter(|r| r.wall_time_s > 0.0) {
        series.entry((r.family, r.algorithm)).or_default().entry(r.n).or_default().push(r.wall_time_s);
    }
    let series: Vec<Series> = series
        .into_iter()
        .map(|(k, pts)| (k, pts.into_iter().map(|(n, ts)| ((n as f64).log10(), median(ts).log10())).collect()))
        .collect();

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let all: Vec<(f64, f64)> = series.iter().flat_map(|(_, p)| p.iter().copied()).collect();
    if all.is_empty() {
        let _ = writeln!(svg, r#"<text x="{}" y="{}">no data</text>"#, WIDTH / 2.0, HEIGHT / 2.0);
        svg.push_str("</svg>\n");
        return svg;
    }
    let (x0, x1) = bounds(all.iter().map(|p| p.0));
    let (y0, y1) = bounds(all.iter().map(|p| p.1));
    let px = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let py = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let _ = writeln!(
        svg,
        r#"<path d="M{m} {m} V{b} H{r}" fill="none" stroke="black"/>"#,
        m = MARGIN,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN
    );
    for d in (x0.floor() as i32)..=(x1.ceil() as i32) {
        let d = f64::from(d);
        if (x0..=x1).contains(&d) {
            let _ = writeln!(svg, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">1e{d}</text>"#, px(d), HEIGHT - MARGIN + 16.0);
        }
    }
    for d in (y0.floor() as i32)..=(y1.ceil() as i32) {
        let d = f64::from(d);
        if (y0..=y1).contains(&d) {
            let _ = writeln!(svg, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">1e{d}</text>"#, MARGIN - 6.0, py(d) + 4.0);
        }
    }
    let _ = writeln!(svg, r#"<text x="{}" y="{}" text-anchor="middle">chip vertices</text>"#, WIDTH / 2.0, HEIGHT - 16.0);
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">wall time (s)</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );

    for (i, ((family, algorithm), pts)) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let dash = if i / COLORS.len() % 2 == 1 { r#" stroke-dasharray="4 3""# } else { "" };
        let points: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.1},{:.1}", px(x), py(y))).collect();
        let _ = writeln!(svg, r#"<polyline points="{}" fill="none" stroke="{color}"{dash}/>"#, points.join(" "));
        for &(x, y) in pts {
            let _ = writeln!(svg, r#"<circle cx="{:.1}" cy="{:.1}" r="2.5" fill="{color}"/>"#, px(x), py(y));
        }
        let ly = MARGIN + 14.0 * i as f64;
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{ly:.1}" fill="{color}">{}</text>"#,
            MARGIN + 10.0,
            escape(&format!("{family} {algorithm}"))
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if hi - lo < 1e-9 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}
