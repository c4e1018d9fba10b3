//! Boxplot figures as plain SVG. Every box is a `<g class="box">` group whose
//! child elements carry the exact summary geometry, and the plot area and
//! axis range are recorded on the enclosing `<g class="plot">`, so the
//! numbers can be recovered from the document.

use std::fmt::Write;

use indexforge_core::simulation::{BoxplotSummary, SummaryCell};
use indexforge_core::weighting::Method;

const LEFT: f64 = 70.0;
const TOP: f64 = 50.0;
const PLOT_HEIGHT: f64 = 300.0;
const SLOT: f64 = 72.0;
const BOX_WIDTH: f64 = 36.0;
const CAP_WIDTH: f64 = 18.0;
const RIGHT_MARGIN: f64 = 30.0;
const BOTTOM_MARGIN: f64 = 60.0;
const TICKS: usize = 5;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Largest whisker of the method, or 1 when every weight is zero.
fn axis_max(cells: &[&SummaryCell]) -> f64 {
    let m = cells.iter().map(|c| c.max).fold(0.0, f64::max);
    if m > 0.0 {
        m
    } else {
        1.0
    }
}

struct Frame {
    axis_max: f64,
}

impl Frame {
    fn y(&self, v: f64) -> f64 {
        TOP + PLOT_HEIGHT * (1.0 - v / self.axis_max)
    }
}

/// One figure for one method: a box per indicator on a [0, max weight] axis.
pub fn render_boxplot(summary: &BoxplotSummary, method: Method, metadata: Option<&str>) -> String {
    let cells = summary.cells_for(method);
    let frame = Frame {
        axis_max: axis_max(&cells),
    };
    let plot_width = SLOT * cells.len().max(1) as f64;
    let width = LEFT + plot_width + RIGHT_MARGIN;
    let height = TOP + PLOT_HEIGHT + BOTTOM_MARGIN;
    let bottom = TOP + PLOT_HEIGHT;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif" font-size="12">"#
    );
    if let Some(meta) = metadata {
        let _ = writeln!(s, "<metadata>{}</metadata>", escape(meta));
    }
    let _ = writeln!(
        s,
        "<title>Boxplot of indicator weights: {method} ({} iterations)</title>",
        summary.iterations
    );
    let _ = writeln!(
        s,
        r#"<rect class="background" x="0" y="0" width="{width:.0}" height="{height:.0}" fill="white"/>"#
    );
    let _ = writeln!(
        s,
        r#"<text class="heading" x="{:.3}" y="{:.3}" text-anchor="middle" font-size="14">{method} weights</text>"#,
        LEFT + plot_width / 2.0,
        TOP / 2.0
    );
    let _ = writeln!(
        s,
        r#"<g class="plot" data-method="{method}" data-axis-min="0" data-axis-max="{}">"#,
        frame.axis_max
    );
    let _ = writeln!(
        s,
        r##"<rect class="plot-area" x="{LEFT:.3}" y="{TOP:.3}" width="{plot_width:.3}" height="{PLOT_HEIGHT:.3}" fill="none" stroke="#888"/>"##
    );

    let _ = writeln!(s, r#"<g class="axis">"#);
    for t in 0..=TICKS {
        let v = frame.axis_max * t as f64 / TICKS as f64;
        let y = frame.y(v);
        let _ = writeln!(
            s,
            r##"<line class="tick" x1="{:.3}" y1="{y:.3}" x2="{LEFT:.3}" y2="{y:.3}" stroke="#888"/>"##,
            LEFT - 5.0
        );
        let _ = writeln!(
            s,
            r#"<text class="tick-label" x="{:.3}" y="{:.3}" text-anchor="end">{v:.3}</text>"#,
            LEFT - 8.0,
            y + 4.0
        );
    }
    let _ = writeln!(s, "</g>");

    for (i, c) in cells.iter().enumerate() {
        let cx = LEFT + SLOT * (i as f64 + 0.5);
        let (x0, x1) = (cx - BOX_WIDTH / 2.0, cx + BOX_WIDTH / 2.0);
        let (c0, c1) = (cx - CAP_WIDTH / 2.0, cx + CAP_WIDTH / 2.0);
        let (ymin, yq1, ymed, yq3, ymax, ymean) = (
            frame.y(c.min),
            frame.y(c.q1),
            frame.y(c.median),
            frame.y(c.q3),
            frame.y(c.max),
            frame.y(c.mean),
        );
        let name = escape(&c.indicator);
        let _ = writeln!(
            s,
            r#"<g class="box" data-indicator="{name}" data-count="{}">"#,
            c.count
        );
        let _ = writeln!(
            s,
            r#"<line class="whisker-low" x1="{cx:.3}" y1="{ymin:.3}" x2="{cx:.3}" y2="{yq1:.3}" stroke="black"/>"#
        );
        let _ = writeln!(
            s,
            r#"<line class="whisker-high" x1="{cx:.3}" y1="{yq3:.3}" x2="{cx:.3}" y2="{ymax:.3}" stroke="black"/>"#
        );
        let _ = writeln!(
            s,
            r#"<line class="cap-min" x1="{c0:.3}" y1="{ymin:.3}" x2="{c1:.3}" y2="{ymin:.3}" stroke="black"/>"#
        );
        let _ = writeln!(
            s,
            r#"<line class="cap-max" x1="{c0:.3}" y1="{ymax:.3}" x2="{c1:.3}" y2="{ymax:.3}" stroke="black"/>"#
        );
        let _ = writeln!(
            s,
            r##"<rect class="iqr" x="{x0:.3}" y="{yq3:.3}" width="{BOX_WIDTH:.3}" height="{:.3}" fill="#9ecae1" stroke="black"/>"##,
            yq1 - yq3
        );
        let _ = writeln!(
            s,
            r##"<line class="median" x1="{x0:.3}" y1="{ymed:.3}" x2="{x1:.3}" y2="{ymed:.3}" stroke="#d62728" stroke-width="2"/>"##
        );
        let _ = writeln!(
            s,
            r#"<circle class="mean" cx="{cx:.3}" cy="{ymean:.3}" r="3" fill="black"/>"#
        );
        let _ = writeln!(
            s,
            r#"<text class="label" x="{cx:.3}" y="{:.3}" text-anchor="middle">{name}</text>"#,
            bottom + 18.0
        );
        let _ = writeln!(s, "</g>");
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, "</svg>");
    s
}

pub fn file_name(method: Method) -> String {
    format!("boxplot_{}.svg", method.tag().to_ascii_lowercase())
}
