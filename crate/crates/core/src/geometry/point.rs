use num_complex::Complex;

use crate::Scalar;

/// A point of the search plane.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ComplexPoint<T> {
    pub re: T,
    pub im: T,
}

impl<T: Scalar> ComplexPoint<T> {
    pub const fn new(re: T, im: T) -> Self {
        Self { re, im }
    }

    /// Like [`ComplexPoint::new`] but rejects NaN and infinite components.
    pub fn try_new(re: T, im: T) -> Option<Self> {
        (re.is_finite() && im.is_finite()).then_some(Self { re, im })
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn to_complex(self) -> Complex<T> {
        Complex::new(self.re, self.im)
    }

    pub fn distance(&self, other: &Self) -> T {
        (self.re - other.re).hypot(self.im - other.im)
    }

    pub fn norm(&self) -> T {
        self.re.hypot(self.im)
    }

    pub fn midpoint(&self, other: &Self) -> Self {
        let half = T::lit(0.5);
        Self::new((self.re + other.re) * half, (self.im + other.im) * half)
    }

    pub fn offset(&self, dre: T, dim: T) -> Self {
        Self::new(self.re + dre, self.im + dim)
    }

    /// Exact `f64` image, used by the geometric predicates.
    pub(crate) fn xy(&self) -> robust::Coord<f64> {
        robust::Coord {
            x: self.re.as_f64(),
            y: self.im.as_f64(),
        }
    }
}

impl<T: Scalar> From<Complex<T>> for ComplexPoint<T> {
    fn from(z: Complex<T>) -> Self {
        Self::new(z.re, z.im)
    }
}

impl<T: Scalar> From<ComplexPoint<T>> for Complex<T> {
    fn from(p: ComplexPoint<T>) -> Self {
        p.to_complex()
    }
}

/// Mean of a set of points; `None` for an empty set.
pub fn centroid<T: Scalar>(points: impl IntoIterator<Item = ComplexPoint<T>>) -> Option<ComplexPoint<T>> {
    let mut n = 0usize;
    let (mut sr, mut si) = (T::zero(), T::zero());
    for p in points {
        sr = sr + p.re;
        si = si + p.im;
        n += 1;
    }
    (n > 0).then(|| {
        let n = T::from_usize_lossy(n);
        ComplexPoint::new(sr / n, si / n)
    })
}

/// Signed area of a closed polygon (positive when counterclockwise).
/// A repeated closing vertex is harmless.
pub fn signed_area<T: Scalar>(poly: &[ComplexPoint<T>]) -> T {
    if poly.len() < 3 {
        return T::zero();
    }
    // relative to the first vertex, so tiny polygons far from 0 keep their sign
    let o = poly[0];
    let mut acc = T::zero();
    for (i, a) in poly.iter().enumerate() {
        let b = &poly[(i + 1) % poly.len()];
        let (ax, ay, bx, by) = (a.re - o.re, a.im - o.im, b.re - o.re, b.im - o.im);
        acc = acc + (ax * by - bx * ay);
    }
    acc * T::lit(0.5)
}

/// Even-odd point-in-polygon test; points on the boundary may go either way.
pub fn point_in_polygon<T: Scalar>(p: &ComplexPoint<T>, poly: &[ComplexPoint<T>]) -> bool {
    let n = poly.len();
    if n < 3 {
        return false;
    }
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (&poly[i], &poly[j]);
        if (a.im > p.im) != (b.im > p.im) {
            let x = (b.re - a.re) * (p.im - a.im) / (b.im - a.im) + a.re;
            if p.re < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

/// Largest pairwise distance within a point set.
pub fn diameter<T: Scalar>(points: &[ComplexPoint<T>]) -> T {
    let mut best = T::zero();
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            best = best.max(a.distance(b));
        }
    }
    best
}

/// Distance from `p` to the segment `a`–`b`.
pub fn segment_distance<T: Scalar>(p: &ComplexPoint<T>, a: &ComplexPoint<T>, b: &ComplexPoint<T>) -> T {
    let (dx, dy) = (b.re - a.re, b.im - a.im);
    let len2 = dx * dx + dy * dy;
    if len2 == T::zero() {
        return p.distance(a);
    }
    let t = (((p.re - a.re) * dx + (p.im - a.im) * dy) / len2).max(T::zero()).min(T::one());
    p.distance(&ComplexPoint::new(a.re + t * dx, a.im + t * dy))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn area_orientation() {
        let sq = [
            ComplexPoint::new(0.0, 0.0),
            ComplexPoint::new(1.0, 0.0),
            ComplexPoint::new(1.0, 1.0),
            ComplexPoint::new(0.0, 1.0),
        ];
        assert_eq!(signed_area(&sq), 1.0);
        let mut rev = sq;
        rev.reverse();
        assert_eq!(signed_area(&rev), -1.0);
        assert!(point_in_polygon(&ComplexPoint::new(0.5, 0.5), &sq));
        assert!(!point_in_polygon(&ComplexPoint::new(1.5, 0.5), &sq));
        assert!((diameter(&sq) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_finite() {
        assert!(ComplexPoint::try_new(f64::NAN, 0.0).is_none());
        assert!(ComplexPoint::try_new(0.0, f64::INFINITY).is_none());
        assert!(ComplexPoint::try_new(1.0f32, 2.0).is_some());
    }

    #[test]
    fn segment_distance_clamps() {
        let a = ComplexPoint::new(0.0, 0.0);
        let b = ComplexPoint::new(2.0, 0.0);
        assert_eq!(segment_distance(&ComplexPoint::new(1.0, 3.0), &a, &b), 3.0);
        assert_eq!(segment_distance(&ComplexPoint::new(-3.0, 4.0), &a, &b), 5.0);
    }
}
