//! Phase portrait of a sampled mesh.
//!
//! Triangles are filled by the quadrant most of their nodes share: 1 red,
//! 2 yellow, 3 green, 4 blue. Candidate edges are drawn thick and black,
//! region boundaries dotted.

use std::fmt::Write as _;
use std::path::Path;

use grpf::regions::CandidateRegion;
use grpf::{Mesh, Node, Point};

use crate::error::CliError;

const SIZE: f64 = 800.0;
const MARGIN: f64 = 10.0;

pub fn quadrant_color(q: i8) -> &'static str {
    match q {
        1 => "red",
        2 => "yellow",
        3 => "green",
        4 => "blue",
        _ => "white",
    }
}

/// Majority quadrant of the three nodes; with no majority, the first node's.
fn fill(samples: &[Node], tri: [usize; 3]) -> i8 {
    let q = tri.map(|n| samples[n].quadrant.map_or(0, |q| q.index()));
    if q[1] == q[2] {
        q[1]
    } else {
        q[0]
    }
}

struct View {
    x0: f64,
    y1: f64,
    k: f64,
    width: f64,
    height: f64,
}

impl View {
    fn new(mesh: &Mesh) -> Self {
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for p in mesh.nodes() {
            x0 = x0.min(p.re);
            x1 = x1.max(p.re);
            y0 = y0.min(p.im);
            y1 = y1.max(p.im);
        }
        if !x0.is_finite() {
            (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
        }
        let span = (x1 - x0).max(y1 - y0).max(f64::MIN_POSITIVE);
        let k = (SIZE - 2.0 * MARGIN) / span;
        Self { x0, y1, k, width: (x1 - x0) * k + 2.0 * MARGIN, height: (y1 - y0) * k + 2.0 * MARGIN }
    }

    fn xy(&self, p: &Point) -> (f64, f64) {
        (MARGIN + (p.re - self.x0) * self.k, MARGIN + (self.y1 - p.im) * self.k)
    }

    fn pair(&self, p: &Point) -> String {
        let (x, y) = self.xy(p);
        format!("{x:.3},{y:.3}")
    }
}

pub fn render_svg(mesh: &Mesh, samples: &[Node], regions: &[CandidateRegion], candidate_edges: &[usize]) -> String {
    let v = View::new(mesh);
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.3} {h:.3}">"#,
        w = v.width,
        h = v.height
    );
    let _ = writeln!(s, r##"<g id="triangles" stroke="#404040" stroke-width="0.3" stroke-linejoin="round">"##);
    for t in mesh.triangles() {
        let pts: Vec<String> = t.iter().map(|&n| v.pair(&mesh.nodes()[n])).collect();
        let _ = writeln!(s, r#"<polygon points="{}" fill="{}"/>"#, pts.join(" "), quadrant_color(fill(samples, *t)));
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g id="candidate-edges" stroke="black" stroke-width="3" stroke-linecap="round">"#);
    for &e in candidate_edges {
        let [a, b] = mesh.edges()[e].nodes;
        let (x1, y1) = v.xy(&mesh.nodes()[a]);
        let (x2, y2) = v.xy(&mesh.nodes()[b]);
        let _ = writeln!(s, r#"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}"/>"#);
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g id="regions" fill="none" stroke="black" stroke-width="1.5" stroke-dasharray="1,3">"#);
    for r in regions {
        for lp in r.loops() {
            let pts: Vec<String> = lp[..lp.len() - 1].iter().map(|&n| v.pair(&mesh.nodes()[n]).replace(',', " ")).collect();
            let _ = writeln!(s, r#"<path d="M {} Z"/>"#, pts.join(" L "));
        }
    }
    let _ = writeln!(s, "</g>");
    s.push_str("</svg>\n");
    s
}

pub fn emit_mesh_svg(
    mesh: &Mesh,
    samples: &[Node],
    regions: &[CandidateRegion],
    candidate_edges: &[usize],
    path: &Path,
) -> Result<(), CliError> {
    std::fs::write(path, render_svg(mesh, samples, regions, candidate_edges)).map_err(|e| CliError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use grpf::phase::evaluate_nodes;
    use grpf::C64;

    #[test]
    fn one_triangle() {
        let m = Mesh::from_parts(vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.0, 1.0)], vec![[0, 1, 2]]);
        let s = evaluate_nodes(&|z: C64| z + C64::new(2.0, 0.5), m.nodes());
        let svg = render_svg(&m, &s, &[], &[]);
        assert_eq!(svg.matches("<polygon").count(), 1);
        assert!(svg.contains(r#"fill="red""#));
        assert_eq!(svg.matches("<line").count(), 0);
        assert_eq!(svg, render_svg(&m, &s, &[], &[]));
    }

    #[test]
    fn majority_fill() {
        let s: Vec<Node> = [C64::new(1.0, 1.0), C64::new(-1.0, -1.0), C64::new(-1.0, -1.0)]
            .map(|v| Node::new(Point::default(), v))
            .to_vec();
        assert_eq!(fill(&s, [0, 1, 2]), 3);
        assert_eq!(fill(&s, [1, 0, 2]), 3);
        assert_eq!(fill(&s, [1, 2, 0]), 3);
    }
}
