//! Function sampling, phase quadrants and edge quadrant differences.

use std::fmt;

use num_complex::Complex;
use rayon::prelude::*;

use crate::geometry::{ComplexPoint, Mesh};
use crate::Scalar;

/// A function of one complex variable that the pipeline can sample.
///
/// Must be pure: the same argument always gives the same value, and calls
/// may happen concurrently from several threads.
pub trait AnalyticFunction<T>: Sync {
    fn evaluate(&self, z: Complex<T>) -> Complex<T>;

    fn name(&self) -> String {
        "f".to_string()
    }

    /// Free-form `(key, value)` parameter record.
    fn metadata(&self) -> Vec<(String, String)> {
        Vec::new()
    }
}

impl<T, F> AnalyticFunction<T> for F
where
    F: Fn(Complex<T>) -> Complex<T> + Sync,
{
    fn evaluate(&self, z: Complex<T>) -> Complex<T> {
        self(z)
    }
}

/// Phase quadrant of a nonzero value: `arg ∈ [(k-1)π/2, kπ/2)` for quadrant `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quadrant {
    First = 1,
    Second = 2,
    Third = 3,
    Fourth = 4,
}

impl Quadrant {
    pub fn index(self) -> i8 {
        self as i8
    }

    pub fn from_index(k: i8) -> Option<Self> {
        match k {
            1 => Some(Self::First),
            2 => Some(Self::Second),
            3 => Some(Self::Third),
            4 => Some(Self::Fourth),
            _ => None,
        }
    }
}

impl fmt::Display for Quadrant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// Why a sample carries no quadrant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleFault {
    ExactZero,
    NonFinite,
}

/// Quadrant of `v` with `arg` taken in `[0, 2π)`.
pub fn quadrant<T: Scalar>(v: Complex<T>) -> Result<Quadrant, SampleFault> {
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(SampleFault::NonFinite);
    }
    let zero = T::zero();
    if v.re == zero && v.im == zero {
        return Err(SampleFault::ExactZero);
    }
    Ok(if v.re > zero && v.im >= zero {
        Quadrant::First
    } else if v.re <= zero && v.im > zero {
        Quadrant::Second
    } else if v.re < zero && v.im <= zero {
        Quadrant::Third
    } else {
        Quadrant::Fourth
    })
}

/// Quadrant difference `q2 - q1` wrapped into `{-1, 0, 1}`, or `2` for an
/// ambiguous jump of two quadrants.
pub fn edge_dq(q1: Quadrant, q2: Quadrant) -> i8 {
    match q2.index() - q1.index() {
        3 => -1,
        -3 => 1,
        2 | -2 => 2,
        d => d,
    }
}

/// A sampled mesh node.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampledNode<T> {
    pub point: ComplexPoint<T>,
    pub value: Complex<T>,
    /// `None` when the value is exactly zero or not finite.
    pub quadrant: Option<Quadrant>,
    pub exact_zero: bool,
}

impl<T: Scalar> SampledNode<T> {
    pub fn new(point: ComplexPoint<T>, value: Complex<T>) -> Self {
        let q = quadrant(value);
        Self {
            point,
            value,
            quadrant: q.ok(),
            exact_zero: q == Err(SampleFault::ExactZero),
        }
    }

    pub fn fault(&self) -> Option<SampleFault> {
        quadrant(self.value).err()
    }
}

/// Evaluate `f` once per point, in parallel, preserving order.
pub fn evaluate_nodes<T, F>(f: &F, points: &[ComplexPoint<T>]) -> Vec<SampledNode<T>>
where
    T: Scalar,
    F: AnalyticFunction<T> + ?Sized,
{
    points
        .par_iter()
        .map(|p| SampledNode::new(*p, f.evaluate(p.to_complex())))
        .collect()
}

/// Quadrant difference along one mesh edge (low node id to high node id).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgePhase {
    pub edge: usize,
    pub dq: i8,
    pub is_candidate: bool,
}

/// Phase of every edge; `None` where an endpoint has no quadrant.
pub fn edge_phases<T: Scalar>(mesh: &Mesh<T>, samples: &[SampledNode<T>]) -> Vec<Option<EdgePhase>> {
    mesh.edges()
        .iter()
        .enumerate()
        .map(|(edge, e)| {
            let q1 = samples[e.nodes[0]].quadrant?;
            let q2 = samples[e.nodes[1]].quadrant?;
            let dq = edge_dq(q1, q2);
            Some(EdgePhase { edge, dq, is_candidate: dq == 2 })
        })
        .collect()
}

/// Edges whose endpoint quadrants differ by two.
pub fn candidate_edges<T: Scalar>(mesh: &Mesh<T>, samples: &[SampledNode<T>]) -> Vec<usize> {
    edge_phases(mesh, samples)
        .into_iter()
        .flatten()
        .filter(|p| p.is_candidate)
        .map(|p| p.edge)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn axis_values() {
        assert_eq!(quadrant(c(1.0, 0.0)), Ok(Quadrant::First));
        assert_eq!(quadrant(c(0.0, 1.0)), Ok(Quadrant::Second));
        assert_eq!(quadrant(c(-1.0, 0.0)), Ok(Quadrant::Third));
        assert_eq!(quadrant(c(0.0, -1.0)), Ok(Quadrant::Fourth));
        assert_eq!(quadrant(c(1.0, -1e-300)), Ok(Quadrant::Fourth));
        assert_eq!(quadrant(c(-0.0, 1.0)), Ok(Quadrant::Second));
        assert_eq!(quadrant(c(0.0, 0.0)), Err(SampleFault::ExactZero));
        assert_eq!(quadrant(c(f64::NAN, 1.0)), Err(SampleFault::NonFinite));
        assert_eq!(quadrant(c(f64::INFINITY, 1.0)), Err(SampleFault::NonFinite));
    }

    #[test]
    fn wrapped_differences() {
        use Quadrant::*;
        assert_eq!(edge_dq(First, Second), 1);
        assert_eq!(edge_dq(Fourth, First), 1);
        assert_eq!(edge_dq(First, Fourth), -1);
        assert_eq!(edge_dq(First, Third), 2);
        assert_eq!(edge_dq(Fourth, Second), 2);
        assert_eq!(edge_dq(Third, Third), 0);
    }

    #[test]
    fn sampling() {
        let f = |z: Complex<f64>| z;
        let pts = [ComplexPoint::new(1.0, 1.0), ComplexPoint::new(-2.0, 0.1), ComplexPoint::new(0.0, 0.0)];
        let s = evaluate_nodes(&f, &pts);
        assert_eq!(s[0].quadrant, Some(Quadrant::First));
        assert_eq!(s[1].quadrant, Some(Quadrant::Second));
        assert!(s[2].exact_zero && s[2].quadrant.is_none());
        let e = |z: Complex<f64>| z.exp();
        let s = evaluate_nodes(&e, &[ComplexPoint::new(0.0, std::f64::consts::PI)]);
        assert!((s[0].value - c(-1.0, 0.0)).norm() < 1e-15);
        // sin(π) rounds to +1.2e-16, so the sampled value sits just inside quadrant 2
        assert_eq!(s[0].quadrant, Some(Quadrant::Second));
        assert_eq!(quadrant(c(-1.0, 0.0)), Ok(Quadrant::Third));
    }

    #[test]
    fn constant_has_no_candidates() {
        let m = crate::geometry::triangulate(&[
            ComplexPoint::new(-1.0, -1.0),
            ComplexPoint::new(1.0, -1.0),
            ComplexPoint::new(1.0, 1.0),
            ComplexPoint::new(-1.0, 1.0),
        ])
        .unwrap();
        let one = |_: Complex<f64>| c(1.0, 0.0);
        assert!(candidate_edges(&m, &evaluate_nodes(&one, m.nodes())).is_empty());
        let id = |z: Complex<f64>| z;
        // corners sit in all four quadrants, the diagonal joins opposite ones
        assert_eq!(candidate_edges(&m, &evaluate_nodes(&id, m.nodes())).len(), 1);
    }
}
