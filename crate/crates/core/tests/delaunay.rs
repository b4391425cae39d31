use grpf::geometry::{initial_mesh, signed_area, triangulate, ComplexPoint, SearchDomain};
use proptest::prelude::*;

type P = ComplexPoint<f64>;

/// Plain determinant incircle test, scaled so the threshold is relative.
fn strictly_inside(a: P, b: P, c: P, d: P) -> bool {
    let (adx, ady) = (a.re - d.re, a.im - d.im);
    let (bdx, bdy) = (b.re - d.re, b.im - d.im);
    let (cdx, cdy) = (c.re - d.re, c.im - d.im);
    let (ad, bd, cd) = (adx * adx + ady * ady, bdx * bdx + bdy * bdy, cdx * cdx + cdy * cdy);
    let det = adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) + ad * (bdx * cdy - bdy * cdx);
    let scale = (adx.abs() + ady.abs()) * (bdx.abs() + bdy.abs()) * (cdx.abs() + cdy.abs()) * (ad + bd + cd);
    det > 1e-12 * scale
}

/// Area of the convex hull by monotone chain.
fn hull_area(pts: &[P]) -> f64 {
    let mut p: Vec<P> = pts.to_vec();
    p.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
    let cross = |o: P, a: P, b: P| (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re);
    let mut h: Vec<P> = Vec::new();
    for pass in 0..2 {
        let start = h.len();
        let iter: Box<dyn Iterator<Item = &P>> = if pass == 0 { Box::new(p.iter()) } else { Box::new(p.iter().rev()) };
        for &q in iter {
            while h.len() >= start + 2 && cross(h[h.len() - 2], h[h.len() - 1], q) <= 0.0 {
                h.pop();
            }
            h.push(q);
        }
        h.pop();
    }
    signed_area(&h)
}

fn points() -> impl Strategy<Value = Vec<P>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 4..80)
        .prop_map(|v| v.into_iter().map(|(x, y)| P::new(x, y)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn empty_circumcircles(pts in points()) {
        let m = triangulate(&pts).unwrap();
        m.validate().unwrap();
        for t in m.triangles() {
            let [a, b, c] = t.map(|n| m.nodes()[n]);
            for (n, &d) in m.nodes().iter().enumerate() {
                if t.contains(&n) {
                    continue;
                }
                prop_assert!(!strictly_inside(a, b, c, d), "node {n} inside {t:?}");
            }
        }
    }

    #[test]
    fn incidence_and_coverage(pts in points()) {
        let m = triangulate(&pts).unwrap();
        let incident: usize = m.edges().iter().map(|e| e.triangles.iter().flatten().count()).sum();
        prop_assert_eq!(incident, 3 * m.triangles().len());
        let area: f64 = (0..m.triangles().len()).map(|t| signed_area(&m.triangle_points(t))).sum();
        let hull = hull_area(&pts);
        prop_assert!((area - hull).abs() <= 1e-12 * hull.max(1e-300), "{area} vs {hull}");
    }

    #[test]
    fn deterministic(pts in points()) {
        let a = triangulate(&pts).unwrap();
        let b = triangulate(&pts).unwrap();
        prop_assert_eq!(a.triangles(), b.triangles());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn initial_edges_fit_resolution(
        w in 0.5f64..4.0, h in 0.5f64..4.0, x0 in -3.0f64..3.0, y0 in -3.0f64..3.0, frac in 0.03f64..0.3,
    ) {
        let dr = frac * w.max(h);
        let rect = SearchDomain::rectangle(x0, x0 + w, y0, y0 + h).unwrap();
        let disk = SearchDomain::disk(P::new(x0, y0), w / 2.0).unwrap();
        let poly = SearchDomain::polygon(vec![
            P::new(x0, y0), P::new(x0 + w, y0), P::new(x0 + 0.6 * w, y0 + h), P::new(x0 + 0.1 * w, y0 + 0.4 * h),
        ]).unwrap();
        for d in [rect, disk, poly] {
            let m = match initial_mesh(&d, dr) {
                Ok(m) => m,
                Err(_) if dr >= d.largest_dimension() => continue,
                Err(e) => return Err(TestCaseError::fail(format!("{d:?}: {e}"))),
            };
            m.validate().unwrap();
            for e in 0..m.edges().len() {
                prop_assert!(m.edge_length(e) <= dr, "{:?} edge {} > {}", d, m.edge_length(e), dr);
            }
            for p in m.nodes() {
                prop_assert!(d.contains(p, 1e-12 * d.diameter()));
            }
        }
    }
}

#[test]
fn paper_sized_layouts() {
    let rect = SearchDomain::rectangle(1.0, 2.5, -1.0, 1.0).unwrap();
    assert_eq!(initial_mesh(&rect, 0.5).unwrap().nodes().len(), 27);
    let disk = SearchDomain::disk(P::new(0.0, 0.0), 1.0).unwrap();
    let n = initial_mesh(&disk, 0.15).unwrap().nodes().len();
    assert!((230..=312).contains(&n), "{n}");
}
