//! Minimal SVG plots. Every plot can also dump the data it draws as CSV.

use std::fmt::Write as _;

const SIZE: f64 = 480.0;
const MARGIN: f64 = 24.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

#[derive(Clone, Debug)]
enum Shape {
    Point([f64; 2]),
    Marker([f64; 2]),
    Path(Vec<[f64; 2]>),
    Polygon(Vec<[f64; 2]>),
}

#[derive(Clone, Debug)]
struct Item {
    layer: String,
    shape: Shape,
}

/// A plot over the data box `[x0, x1] x [y0, y1]`.
#[derive(Clone, Debug)]
pub struct Plot {
    x: (f64, f64),
    y: (f64, f64),
    title: String,
    items: Vec<Item>,
    layers: Vec<String>,
}

impl Plot {
    pub fn new(x: (f64, f64), y: (f64, f64), title: impl Into<String>) -> Self {
        Plot {
            x,
            y,
            title: title.into(),
            items: Vec::new(),
            layers: Vec::new(),
        }
    }

    fn push(&mut self, layer: &str, shape: Shape) {
        if !self.layers.iter().any(|l| l == layer) {
            self.layers.push(layer.to_string());
        }
        self.items.push(Item {
            layer: layer.to_string(),
            shape,
        });
    }

    pub fn point(&mut self, layer: &str, p: [f64; 2]) {
        self.push(layer, Shape::Point(p));
    }

    pub fn marker(&mut self, layer: &str, p: [f64; 2]) {
        self.push(layer, Shape::Marker(p));
    }

    pub fn path(&mut self, layer: &str, pts: Vec<[f64; 2]>) {
        self.push(layer, Shape::Path(pts));
    }

    pub fn polygon(&mut self, layer: &str, pts: Vec<[f64; 2]>) {
        self.push(layer, Shape::Polygon(pts));
    }

    fn px(&self, p: [f64; 2]) -> (f64, f64) {
        let sx = (p[0] - self.x.0) / (self.x.1 - self.x.0);
        let sy = (p[1] - self.y.0) / (self.y.1 - self.y.0);
        (MARGIN + sx * SIZE, MARGIN + (1.0 - sy) * SIZE)
    }

    fn color(&self, layer: &str) -> &'static str {
        let i = self.layers.iter().position(|l| l == layer).unwrap_or(0);
        PALETTE[i % PALETTE.len()]
    }

    fn points_attr(&self, pts: &[[f64; 2]]) -> String {
        pts.iter()
            .map(|p| {
                let (a, b) = self.px(*p);
                format!("{a:.3},{b:.3}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn to_svg(&self) -> String {
        let full = SIZE + 2.0 * MARGIN;
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{full}" height="{full}" viewBox="0 0 {full} {full}">"#
        );
        let _ = writeln!(s, "<title>{}</title>", escape(&self.title));
        let _ = writeln!(
            s,
            r##"<rect class="frame" x="{MARGIN}" y="{MARGIN}" width="{SIZE}" height="{SIZE}" fill="none" stroke="#999"/>"##
        );
        let _ = writeln!(
            s,
            r##"<text x="{MARGIN}" y="16" font-size="11" font-family="sans-serif">{} [{:.6},{:.6}]x[{:.6},{:.6}]</text>"##,
            escape(&self.title),
            self.x.0,
            self.x.1,
            self.y.0,
            self.y.1
        );
        for item in &self.items {
            let color = self.color(&item.layer);
            let layer = escape(&item.layer);
            match &item.shape {
                Shape::Point(p) => {
                    let (a, b) = self.px(*p);
                    let _ = writeln!(
                        s,
                        r#"<circle class="point" data-layer="{layer}" cx="{a:.3}" cy="{b:.3}" r="0.8" fill="{color}"/>"#
                    );
                }
                Shape::Marker(p) => {
                    let (a, b) = self.px(*p);
                    let _ = writeln!(
                        s,
                        r#"<circle class="vertex" data-layer="{layer}" cx="{a:.3}" cy="{b:.3}" r="3.5" fill="{color}"/>"#
                    );
                }
                Shape::Path(pts) => {
                    let _ = writeln!(
                        s,
                        r#"<polyline class="cell" data-layer="{layer}" points="{}" fill="none" stroke="{color}" stroke-width="1.6"/>"#,
                        self.points_attr(pts)
                    );
                }
                Shape::Polygon(pts) => {
                    let _ = writeln!(
                        s,
                        r#"<polygon class="outline" data-layer="{layer}" points="{}" fill="none" stroke="{color}" stroke-width="1"/>"#,
                        self.points_attr(pts)
                    );
                }
            }
        }
        s.push_str("</svg>\n");
        s
    }

    /// `layer,kind,item,x,y`: one row per drawn coordinate.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("layer,kind,item,x,y\n");
        for (i, item) in self.items.iter().enumerate() {
            let (kind, pts): (&str, Vec<[f64; 2]>) = match &item.shape {
                Shape::Point(p) => ("point", vec![*p]),
                Shape::Marker(p) => ("marker", vec![*p]),
                Shape::Path(v) => ("path", v.clone()),
                Shape::Polygon(v) => ("polygon", v.clone()),
            };
            for p in pts {
                let _ = writeln!(s, "{},{kind},{i},{},{}", item.layer, p[0], p[1]);
            }
        }
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}
