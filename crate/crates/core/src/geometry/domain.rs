use super::point::{point_in_polygon, segment_distance, signed_area, ComplexPoint};
use super::GeometryError;
use crate::Scalar;

/// The search region Ω.
#[derive(Clone, Debug, PartialEq)]
pub enum SearchDomain<T> {
    Rectangle { xmin: T, xmax: T, ymin: T, ymax: T },
    Disk { center: ComplexPoint<T>, radius: T },
    /// Simple polygon, stored counterclockwise.
    Polygon { vertices: Vec<ComplexPoint<T>> },
}

impl<T: Scalar> SearchDomain<T> {
    pub fn rectangle(xmin: T, xmax: T, ymin: T, ymax: T) -> Result<Self, GeometryError> {
        let finite = [xmin, xmax, ymin, ymax].iter().all(|v| v.is_finite());
        if !finite || !(xmin < xmax) || !(ymin < ymax) {
            return Err(GeometryError::InvalidDomain(format!(
                "rectangle needs xmin < xmax and ymin < ymax, got ({xmin}, {xmax}, {ymin}, {ymax})"
            )));
        }
        Ok(Self::Rectangle { xmin, xmax, ymin, ymax })
    }

    pub fn disk(center: ComplexPoint<T>, radius: T) -> Result<Self, GeometryError> {
        if !center.is_finite() || !radius.is_finite() || !(radius > T::zero()) {
            return Err(GeometryError::InvalidDomain(format!(
                "disk needs a finite center and radius > 0, got radius {radius}"
            )));
        }
        Ok(Self::Disk { center, radius })
    }

    /// Accepts either orientation; the stored loop is counterclockwise.
    pub fn polygon(mut vertices: Vec<ComplexPoint<T>>) -> Result<Self, GeometryError> {
        if vertices.len() > 3 && vertices.first() == vertices.last() {
            vertices.pop();
        }
        if vertices.len() < 3 {
            return Err(GeometryError::InvalidDomain("polygon needs at least 3 vertices".into()));
        }
        if vertices.iter().any(|v| !v.is_finite()) {
            return Err(GeometryError::InvalidDomain("polygon vertex is not finite".into()));
        }
        let area = signed_area(&vertices);
        if area == T::zero() {
            return Err(GeometryError::InvalidDomain("polygon has zero area".into()));
        }
        if !is_simple(&vertices) {
            return Err(GeometryError::InvalidDomain("polygon is self-intersecting".into()));
        }
        if area < T::zero() {
            vertices.reverse();
        }
        Ok(Self::Polygon { vertices })
    }

    /// Axis-aligned bounding box `(xmin, xmax, ymin, ymax)`.
    pub fn bounds(&self) -> (T, T, T, T) {
        match self {
            Self::Rectangle { xmin, xmax, ymin, ymax } => (*xmin, *xmax, *ymin, *ymax),
            Self::Disk { center, radius } => (
                center.re - *radius,
                center.re + *radius,
                center.im - *radius,
                center.im + *radius,
            ),
            Self::Polygon { vertices } => vertices.iter().fold(
                (T::infinity(), T::neg_infinity(), T::infinity(), T::neg_infinity()),
                |(a, b, c, d), v| (a.min(v.re), b.max(v.re), c.min(v.im), d.max(v.im)),
            ),
        }
    }

    /// Diagonal of the bounding box.
    pub fn diameter(&self) -> T {
        let (x0, x1, y0, y1) = self.bounds();
        (x1 - x0).hypot(y1 - y0)
    }

    /// Largest extent along either axis.
    pub fn largest_dimension(&self) -> T {
        let (x0, x1, y0, y1) = self.bounds();
        (x1 - x0).max(y1 - y0)
    }

    pub fn center(&self) -> ComplexPoint<T> {
        match self {
            Self::Disk { center, .. } => *center,
            _ => {
                let (x0, x1, y0, y1) = self.bounds();
                let half = T::lit(0.5);
                ComplexPoint::new((x0 + x1) * half, (y0 + y1) * half)
            }
        }
    }

    /// Membership in the closed domain, widened by `tol`.
    pub fn contains(&self, p: &ComplexPoint<T>, tol: T) -> bool {
        match self {
            Self::Rectangle { xmin, xmax, ymin, ymax } => {
                p.re >= *xmin - tol && p.re <= *xmax + tol && p.im >= *ymin - tol && p.im <= *ymax + tol
            }
            Self::Disk { center, radius } => p.distance(center) <= *radius + tol,
            Self::Polygon { vertices } => {
                point_in_polygon(p, vertices) || self.boundary_distance(p) <= tol
            }
        }
    }

    /// Distance from `p` to ∂Ω.
    pub fn boundary_distance(&self, p: &ComplexPoint<T>) -> T {
        match self {
            Self::Rectangle { xmin, xmax, ymin, ymax } => {
                let corners = [
                    ComplexPoint::new(*xmin, *ymin),
                    ComplexPoint::new(*xmax, *ymin),
                    ComplexPoint::new(*xmax, *ymax),
                    ComplexPoint::new(*xmin, *ymax),
                ];
                polyline_distance(p, &corners)
            }
            Self::Disk { center, radius } => (p.distance(center) - *radius).abs(),
            Self::Polygon { vertices } => polyline_distance(p, vertices),
        }
    }

    /// A copy grown outward by `margin` (used by the domain-extension policy).
    pub fn expanded(&self, margin: T) -> Self {
        match self {
            Self::Rectangle { xmin, xmax, ymin, ymax } => Self::Rectangle {
                xmin: *xmin - margin,
                xmax: *xmax + margin,
                ymin: *ymin - margin,
                ymax: *ymax + margin,
            },
            Self::Disk { center, radius } => Self::Disk { center: *center, radius: *radius + margin },
            Self::Polygon { vertices } => {
                // Scale about the vertex centroid so every edge moves out by at least `margin`.
                let c = super::point::centroid(vertices.iter().copied()).unwrap_or_default();
                let inner = vertices
                    .iter()
                    .enumerate()
                    .map(|(i, a)| segment_distance(&c, a, &vertices[(i + 1) % vertices.len()]))
                    .fold(T::infinity(), T::min);
                let k = if inner > T::zero() { T::one() + margin / inner } else { T::one() };
                Self::Polygon {
                    vertices: vertices
                        .iter()
                        .map(|v| ComplexPoint::new(c.re + (v.re - c.re) * k, c.im + (v.im - c.im) * k))
                        .collect(),
                }
            }
        }
    }
}

fn polyline_distance<T: Scalar>(p: &ComplexPoint<T>, closed: &[ComplexPoint<T>]) -> T {
    (0..closed.len())
        .map(|i| segment_distance(p, &closed[i], &closed[(i + 1) % closed.len()]))
        .fold(T::infinity(), T::min)
}

fn is_simple<T: Scalar>(v: &[ComplexPoint<T>]) -> bool {
    let n = v.len();
    for i in 0..n {
        let (a, b) = (v[i], v[(i + 1) % n]);
        if a == b {
            return false;
        }
        for j in i + 1..n {
            // adjacent edges share an endpoint by construction
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            let (c, d) = (v[j], v[(j + 1) % n]);
            if segments_intersect(a, b, c, d) {
                return false;
            }
        }
    }
    true
}

fn segments_intersect<T: Scalar>(a: ComplexPoint<T>, b: ComplexPoint<T>, c: ComplexPoint<T>, d: ComplexPoint<T>) -> bool {
    let o1 = robust::orient2d(a.xy(), b.xy(), c.xy());
    let o2 = robust::orient2d(a.xy(), b.xy(), d.xy());
    let o3 = robust::orient2d(c.xy(), d.xy(), a.xy());
    let o4 = robust::orient2d(c.xy(), d.xy(), b.xy());
    if o1 * o2 < 0.0 && o3 * o4 < 0.0 {
        return true;
    }
    let on = |p: ComplexPoint<T>, q: ComplexPoint<T>, r: ComplexPoint<T>| {
        r.re >= p.re.min(q.re) && r.re <= p.re.max(q.re) && r.im >= p.im.min(q.im) && r.im <= p.im.max(q.im)
    };
    (o1 == 0.0 && on(a, b, c)) || (o2 == 0.0 && on(a, b, d)) || (o3 == 0.0 && on(c, d, a)) || (o4 == 0.0 && on(c, d, b))
}
