//! Minimal SVG 1.1 line-chart writer.
//!
//! Charts are assembled from primitive path elements with fixed-precision
//! coordinates so that identical inputs always produce identical bytes.

pub(crate) const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];
pub(crate) const REFERENCE_COLOR: &str = "#d62728";
pub(crate) const AXIS_COLOR: &str = "#444444";

fn px(v: f64) -> String {
    format!("{v:.2}")
}

pub(crate) struct SvgDoc {
    width: f64,
    height: f64,
    body: String,
}

impl SvgDoc {
    pub fn new(width: f64, height: f64) -> Self {
        let mut doc = SvgDoc {
            width,
            height,
            body: String::new(),
        };
        doc.body.push_str(&format!(
            "<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"#ffffff\"/>\n",
            px(width),
            px(height)
        ));
        doc
    }

    pub fn finish(self) -> String {
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n{body}</svg>\n",
            w = px(self.width),
            h = px(self.height),
            body = self.body
        )
    }

    pub fn line(&mut self, x1: f64, y1: f64, x2: f64, y2: f64, stroke: &str, width: f64, dash: Option<&str>) {
        let dash = dash
            .map(|d| format!(" stroke-dasharray=\"{d}\""))
            .unwrap_or_default();
        self.body.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{stroke}\" stroke-width=\"{width}\"{dash}/>\n",
            px(x1), px(y1), px(x2), px(y2)
        ));
    }

    pub fn polyline(&mut self, points: &[(f64, f64)], stroke: &str, width: f64) {
        if points.len() < 2 {
            return;
        }
        let mut d = String::with_capacity(points.len() * 12);
        for (i, (x, y)) in points.iter().enumerate() {
            d.push_str(if i == 0 { "M" } else { " L" });
            d.push_str(&px(*x));
            d.push(' ');
            d.push_str(&px(*y));
        }
        self.body.push_str(&format!(
            "<path d=\"{d}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"{width}\"/>\n"
        ));
    }

    pub fn circle(&mut self, cx: f64, cy: f64, r: f64, fill: &str) {
        self.body.push_str(&format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{fill}\"/>\n",
            px(cx),
            px(cy),
            px(r)
        ));
    }

    pub fn rect_outline(&mut self, x: f64, y: f64, w: f64, h: f64, stroke: &str) {
        self.body.push_str(&format!(
            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"1\"/>\n",
            px(x), px(y), px(w), px(h)
        ));
    }

    pub fn text(&mut self, x: f64, y: f64, size: f64, anchor: &str, content: &str) {
        self.body.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"{}\" text-anchor=\"{anchor}\" fill=\"#222222\">{content}</text>\n",
            px(x), px(y), px(size)
        ));
    }
}

/// A plotting area with data-space ranges mapped onto a pixel rectangle.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Panel {
    pub x0: f64,
    pub y0: f64,
    pub w: f64,
    pub h: f64,
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Panel {
    pub fn map(&self, x: f64, y: f64) -> (f64, f64) {
        let fx = (x - self.x_min) / (self.x_max - self.x_min);
        let fy = (y - self.y_min) / (self.y_max - self.y_min);
        (self.x0 + fx * self.w, self.y0 + (1.0 - fy) * self.h)
    }

    pub fn frame(&self, doc: &mut SvgDoc) {
        doc.rect_outline(self.x0, self.y0, self.w, self.h, AXIS_COLOR);
        for i in 0..=4 {
            let fx = i as f64 / 4.0;
            let x = self.x_min + fx * (self.x_max - self.x_min);
            let (pxx, _) = self.map(x, self.y_min);
            doc.line(pxx, self.y0 + self.h, pxx, self.y0 + self.h + 4.0, AXIS_COLOR, 1.0, None);
            doc.text(pxx, self.y0 + self.h + 16.0, 11.0, "middle", &tick_label(x));
            let y = self.y_min + fx * (self.y_max - self.y_min);
            let (_, pyy) = self.map(self.x_min, y);
            doc.line(self.x0 - 4.0, pyy, self.x0, pyy, AXIS_COLOR, 1.0, None);
            doc.text(self.x0 - 7.0, pyy + 4.0, 11.0, "end", &tick_label(y));
        }
    }

    pub fn series(&self, doc: &mut SvgDoc, points: impl Iterator<Item = (f64, f64)>, color: &str, width: f64) {
        let mapped: Vec<(f64, f64)> = points.map(|(x, y)| self.map(x, y)).collect();
        doc.polyline(&mapped, color, width);
    }

    pub fn vline(&self, doc: &mut SvgDoc, x: f64, color: &str, dash: Option<&str>) {
        if x < self.x_min || x > self.x_max {
            return;
        }
        let (pxx, _) = self.map(x, self.y_min);
        doc.line(pxx, self.y0, pxx, self.y0 + self.h, color, 1.0, dash);
    }

    pub fn hline(&self, doc: &mut SvgDoc, y: f64, color: &str, dash: Option<&str>) {
        if y < self.y_min || y > self.y_max {
            return;
        }
        let (_, pyy) = self.map(self.x_min, y);
        doc.line(self.x0, pyy, self.x0 + self.w, pyy, color, 1.0, dash);
    }

    pub fn marker(&self, doc: &mut SvgDoc, x: f64, y: f64, color: &str) {
        let (pxx, pyy) = self.map(x, y);
        doc.circle(pxx, pyy, 3.5, color);
    }

    pub fn title(&self, doc: &mut SvgDoc, content: &str) {
        doc.text(self.x0 + 0.5 * self.w, self.y0 - 6.0, 12.0, "middle", content);
    }
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s.is_empty() || s == "-" {
        "0".to_string()
    } else {
        s.to_string()
    }
}
