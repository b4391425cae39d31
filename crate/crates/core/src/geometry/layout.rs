use super::delaunay::Triangulation;
use super::domain::SearchDomain;
use super::mesh::Mesh;
use super::point::{centroid, ComplexPoint};
use super::GeometryError;
use crate::Scalar;

/// Regular node set for `domain` at resolution `dr`.
///
/// * rectangle: rows parallel to the real axis, every other row shifted by
///   half a step, with extra nodes so both vertical sides are covered;
/// * disk: hexagonal shells projected onto concentric circles;
/// * polygon: honeycomb rows clipped to the interior plus a ring of nodes on
///   the boundary.
pub(crate) fn initial_nodes<T: Scalar>(domain: &SearchDomain<T>, dr: T) -> Result<Vec<ComplexPoint<T>>, GeometryError> {
    if !dr.is_finite() || !(dr > T::zero()) {
        return Err(GeometryError::InvalidResolution(format!("dr must be positive, got {dr}")));
    }
    if dr >= domain.largest_dimension() {
        return Err(GeometryError::InvalidResolution(format!(
            "dr = {dr} is not smaller than the domain's largest dimension {}",
            domain.largest_dimension()
        )));
    }
    Ok(match domain {
        SearchDomain::Rectangle { xmin, xmax, ymin, ymax } => rectangle_nodes(*xmin, *xmax, *ymin, *ymax, dr),
        SearchDomain::Disk { center, radius } => disk_nodes(*center, *radius, disk_rings(*radius, dr)),
        SearchDomain::Polygon { vertices } => polygon_nodes(domain, vertices, dr),
    })
}

fn ceil_count<T: Scalar>(x: T) -> usize {
    x.ceil().to_usize().unwrap_or(1).max(1)
}

fn rectangle_nodes<T: Scalar>(xmin: T, xmax: T, ymin: T, ymax: T, dr: T) -> Vec<ComplexPoint<T>> {
    let half = T::lit(0.5);
    let (w, h) = (xmax - xmin, ymax - ymin);
    let nx = ceil_count(w / dr + T::one()).max(2);
    let dx = w / T::from_usize_lossy(nx - 1);
    let row_gap = (dr * dr - dx * dx / T::lit(4.0)).sqrt();
    let ny = ceil_count(h / row_gap + T::one()).max(2);
    let dy = h / T::from_usize_lossy(ny - 1);
    let mut out = Vec::with_capacity(nx * ny + ny / 2 + 1);
    for j in 0..ny {
        let y = if j == ny - 1 { ymax } else { ymin + dy * T::from_usize_lossy(j) };
        let shifted = j % 2 == 1;
        if shifted {
            out.push(ComplexPoint::new(xmin, y));
        }
        for i in 0..nx {
            let x = if i == nx - 1 {
                xmax
            } else {
                let base = xmin + dx * T::from_usize_lossy(i);
                if shifted { base + dx * half } else { base }
            };
            out.push(ComplexPoint::new(x, y));
        }
    }
    out
}

/// Hexagonal shells of a triangular lattice, each shell pushed radially onto
/// the circle of radius `k·R/rings`. Shell `k` carries `6k` nodes.
fn disk_nodes<T: Scalar>(center: ComplexPoint<T>, radius: T, rings: usize) -> Vec<ComplexPoint<T>> {
    let n = T::from_usize_lossy(rings);
    let mut out = Vec::with_capacity(1 + 3 * rings * (rings + 1));
    out.push(center);
    let corner = |c: usize| {
        let phi = T::FRAC_PI_3() * T::from_usize_lossy(c % 6);
        (phi.cos(), phi.sin())
    };
    for k in 1..=rings {
        let kk = T::from_usize_lossy(k);
        let r = radius * kk / n;
        for c in 0..6 {
            let (a, b) = (corner(c), corner(c + 1));
            for s in 0..k {
                let t = T::from_usize_lossy(s) / kk;
                let (x, y) = (a.0 + (b.0 - a.0) * t, a.1 + (b.1 - a.1) * t);
                let scale = r / x.hypot(y);
                out.push(ComplexPoint::new(center.re + x * scale, center.im + y * scale));
            }
        }
    }
    out
}

fn disk_rings<T: Scalar>(radius: T, dr: T) -> usize {
    let row = dr * T::lit(3f64.sqrt() / 2.0);
    (radius / row).round().to_usize().unwrap_or(0) + 1
}

fn polygon_nodes<T: Scalar>(domain: &SearchDomain<T>, vertices: &[ComplexPoint<T>], dr: T) -> Vec<ComplexPoint<T>> {
    let (x0, x1, y0, y1) = domain.bounds();
    let row = dr * T::lit(3f64.sqrt() / 2.0);
    let clearance = dr * T::lit(0.4);
    let mut out = Vec::new();
    let mut j = 0usize;
    loop {
        let y = y0 + row * T::from_usize_lossy(j);
        if y > y1 {
            break;
        }
        let mut x = if j % 2 == 1 { x0 + dr * T::lit(0.5) } else { x0 };
        while x <= x1 {
            let p = ComplexPoint::new(x, y);
            if domain.contains(&p, T::zero()) && domain.boundary_distance(&p) > clearance {
                out.push(p);
            }
            x = x + dr;
        }
        j += 1;
    }
    for (k, a) in vertices.iter().enumerate() {
        let b = vertices[(k + 1) % vertices.len()];
        let segs = ceil_count(a.distance(&b) / dr);
        for s in 0..segs {
            let t = T::from_usize_lossy(s) / T::from_usize_lossy(segs);
            out.push(ComplexPoint::new(a.re + (b.re - a.re) * t, a.im + (b.im - a.im) * t));
        }
    }
    out
}

/// Triangulation of the initial node set, ready for incremental refinement.
/// Edges longer than `dr` are split until none remain.
pub(crate) fn initial_triangulation<T: Scalar>(
    domain: &SearchDomain<T>,
    dr: T,
    merge_tol: T,
) -> Result<Triangulation<T>, GeometryError> {
    let mut nodes = initial_nodes(domain, dr)?;
    if let SearchDomain::Disk { center, radius } = domain {
        // Projected shells stretch slightly; add shells until every edge fits.
        let first = disk_rings(*radius, dr);
        for rings in first..first + first / 8 + 3 {
            let cand = disk_nodes(*center, *radius, rings);
            let tri = build(domain, &cand, merge_tol)?;
            if clipped(&tri, domain).max_edge_length() <= dr {
                nodes = cand;
                break;
            }
        }
    }
    let mut tri = build(domain, &nodes, merge_tol)?;
    for _ in 0..64 {
        let mesh = clipped(&tri, domain);
        let long: Vec<_> = (0..mesh.edges().len())
            .filter(|&e| mesh.edge_length(e) > dr)
            .map(|e| {
                let [a, b] = mesh.edges()[e].nodes;
                mesh.nodes()[a].midpoint(&mesh.nodes()[b])
            })
            .collect();
        if long.is_empty() {
            return Ok(tri);
        }
        for p in long {
            tri.insert(p)?;
        }
    }
    Err(GeometryError::Degenerate("edge splitting did not terminate".into()))
}

fn build<T: Scalar>(
    domain: &SearchDomain<T>,
    nodes: &[ComplexPoint<T>],
    merge_tol: T,
) -> Result<Triangulation<T>, GeometryError> {
    let mut tri = Triangulation::new(domain.bounds(), merge_tol);
    for p in nodes {
        tri.insert(*p)?;
    }
    Ok(tri)
}

/// Mesh restricted to triangles whose centroid lies in `domain`.
pub(crate) fn clipped<T: Scalar>(tri: &Triangulation<T>, domain: &SearchDomain<T>) -> Mesh<T> {
    tri.mesh_filtered(|pts| {
        let c = centroid(pts.iter().copied()).expect("three points");
        domain.contains(&c, T::zero())
    })
}

/// Regular (honeycomb-like) initial mesh over `domain` with all edges ≤ `dr`.
pub fn initial_mesh<T: Scalar>(domain: &SearchDomain<T>, dr: T) -> Result<Mesh<T>, GeometryError> {
    let tol = domain.diameter() * T::lit(1e-14);
    let tri = initial_triangulation(domain, dr, tol)?;
    Ok(clipped(&tri, domain))
}
