//! Discretized argument principle: counting roots minus poles from samples
//! along a closed contour.

use num_complex::Complex;
use thiserror::Error;

use crate::geometry::{ComplexPoint, Mesh};
use crate::phase::{edge_dq, SampledNode};
use crate::regions::CandidateRegion;
use crate::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DcapError {
    #[error("contour needs at least 3 samples, got {0}")]
    TooShort(usize),
    #[error("sample {0} on the contour is zero or not finite")]
    SingularSample(usize),
    #[error("quadrant jump of two between contour samples {0} and {1}")]
    AmbiguousStep(usize, usize),
    #[error("total quadrant change {0} is not a multiple of 4")]
    NotDivisible(i64),
}

/// Order `q` of the enclosed zeros minus poles from quadrant changes along a
/// counter-clockwise loop of samples. The loop closes implicitly; repeating
/// the first sample at the end is harmless.
pub fn dcap_q<T: Scalar>(contour: &[SampledNode<T>]) -> Result<i32, DcapError> {
    let c = contour;
    if c.len() < 3 {
        return Err(DcapError::TooShort(c.len()));
    }
    let mut sum = 0i64;
    for i in 0..c.len() {
        let j = (i + 1) % c.len();
        let qa = c[i].quadrant.ok_or(DcapError::SingularSample(i))?;
        let qb = c[j].quadrant.ok_or(DcapError::SingularSample(j))?;
        let dq = edge_dq(qa, qb);
        if dq == 2 {
            return Err(DcapError::AmbiguousStep(i, j));
        }
        sum += dq as i64;
    }
    if sum % 4 != 0 {
        return Err(DcapError::NotDivisible(sum));
    }
    Ok((sum / 4) as i32)
}

/// Winding number of the sampled values: `Σ arg(f[p+1]/f[p]) / 2π`.
pub fn dcap_arg_sum<T: Scalar>(values: &[Complex<T>]) -> Result<T, DcapError> {
    let v = values;
    if v.len() < 3 {
        return Err(DcapError::TooShort(v.len()));
    }
    if let Some(i) = v.iter().position(|z| crate::phase::quadrant(*z).is_err()) {
        return Err(DcapError::SingularSample(i));
    }
    let mut acc = T::zero();
    for i in 0..v.len() {
        acc = acc + (v[(i + 1) % v.len()] / v[i]).arg();
    }
    Ok(acc / T::TAU())
}

/// Estimate of `Σ_roots z^m − Σ_poles z^m` inside the loop.
///
/// Each contour segment contributes `mid^m · Δlog f / 2πi` with `mid` the
/// segment midpoint and `Δlog f = ln|f[p+1]/f[p]| + i·arg(f[p+1]/f[p])`.
/// The error shrinks with the contour spacing; use it as a cross-check only.
pub fn moment_estimate<T: Scalar>(contour: &[SampledNode<T>], m: u32) -> Result<Complex<T>, DcapError> {
    let c = contour;
    if c.len() < 3 {
        return Err(DcapError::TooShort(c.len()));
    }
    if let Some(i) = c.iter().position(|s| s.fault().is_some()) {
        return Err(DcapError::SingularSample(i));
    }
    let mut acc = Complex::new(T::zero(), T::zero());
    for i in 0..c.len() {
        let (a, b) = (&c[i], &c[(i + 1) % c.len()]);
        let ratio = b.value / a.value;
        let dlog = Complex::new(ratio.norm().ln(), ratio.arg());
        let mid = a.point.midpoint(&b.point).to_complex();
        acc = acc + mid.powu(m) * dlog;
    }
    Ok(acc / Complex::new(T::zero(), T::TAU()))
}

/// Total roots minus poles enclosed by a sampled domain boundary.
pub fn global_winding<T: Scalar>(boundary: &[SampledNode<T>]) -> Result<i32, DcapError> {
    dcap_q(boundary)
}

/// Verified order of a candidate region.
#[derive(Clone, Debug, PartialEq)]
pub struct RegionVerdict<T> {
    pub q: i32,
    pub region: CandidateRegion,
    pub moment1: Option<Complex<T>>,
}

fn loop_samples<T: Scalar>(samples: &[SampledNode<T>], lp: &[usize]) -> Vec<SampledNode<T>> {
    lp.iter().map(|&n| samples[n]).collect()
}

/// `q` summed over all boundary loops of the region (outer loop
/// counter-clockwise, holes clockwise). With `moments`, also the first
/// moment estimate from the same loops.
pub fn verify_region<T: Scalar>(
    samples: &[SampledNode<T>],
    region: &CandidateRegion,
    moments: bool,
) -> Result<RegionVerdict<T>, DcapError> {
    let mut q = 0;
    let mut m1 = Complex::new(T::zero(), T::zero());
    for lp in region.loops() {
        let s = loop_samples(samples, lp);
        q += dcap_q(&s)?;
        if moments {
            m1 = m1 + moment_estimate(&s, 1)?;
        }
    }
    Ok(RegionVerdict { q, region: region.clone(), moment1: moments.then_some(m1) })
}

/// The mesh boundary as one counter-clockwise node loop (closing node
/// repeated), or `None` if the boundary is not a single simple loop.
pub fn boundary_loop<T: Scalar>(mesh: &Mesh<T>) -> Option<Vec<usize>> {
    let mut next = std::collections::BTreeMap::new();
    for e in mesh.boundary_edges() {
        let t = mesh.edges()[e].triangles[0]?;
        let v = mesh.triangles()[t];
        let k = (0..3).find(|&k| mesh.triangle_edges()[t][k] == e)?;
        if next.insert(v[(k + 1) % 3], v[(k + 2) % 3]).is_some() {
            return None;
        }
    }
    let (&start, _) = next.iter().next()?;
    let mut lp = vec![start];
    let mut cur = start;
    loop {
        cur = *next.get(&cur)?;
        lp.push(cur);
        if cur == start {
            break;
        }
        if lp.len() > next.len() + 1 {
            return None;
        }
    }
    (lp.len() == next.len() + 1).then_some(lp)
}

/// `global_winding` over the mesh boundary.
pub fn mesh_winding<T: Scalar>(mesh: &Mesh<T>, samples: &[SampledNode<T>]) -> Result<i32, DcapError> {
    let lp = boundary_loop(mesh).ok_or(DcapError::TooShort(0))?;
    global_winding(&loop_samples(samples, &lp))
}

/// Sample `f` on a closed polygon at spacing ≤ `h` (for winding checks on
/// contours independent of any mesh).
pub fn sample_polygon<T: Scalar, F: crate::phase::AnalyticFunction<T> + ?Sized>(
    f: &F,
    vertices: &[ComplexPoint<T>],
    h: T,
) -> Vec<SampledNode<T>> {
    let mut pts = Vec::new();
    for (i, a) in vertices.iter().enumerate() {
        let b = vertices[(i + 1) % vertices.len()];
        let n = (a.distance(&b) / h).ceil().to_usize().unwrap_or(1).max(1);
        for k in 0..n {
            let t = T::from_usize_lossy(k) / T::from_usize_lossy(n);
            pts.push(ComplexPoint::new(a.re + (b.re - a.re) * t, a.im + (b.im - a.im) * t));
        }
    }
    crate::phase::evaluate_nodes(f, &pts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle(n: usize, center: Complex<f64>, r: f64) -> Vec<ComplexPoint<f64>> {
        (0..n)
            .map(|k| {
                let z = center + Complex::from_polar(r, std::f64::consts::TAU * k as f64 / n as f64);
                ComplexPoint::from(z)
            })
            .collect()
    }

    fn sample(f: impl Fn(Complex<f64>) -> Complex<f64> + Sync, pts: &[ComplexPoint<f64>]) -> Vec<SampledNode<f64>> {
        crate::phase::evaluate_nodes(&f, pts)
    }

    #[test]
    fn unit_turn() {
        let v: [Complex<f64>; 4] = [Complex::new(1.0, 0.0), Complex::i(), Complex::new(-1.0, 0.0), -Complex::i()];
        assert!((dcap_arg_sum(&v).unwrap() - 1.0).abs() < 1e-15);
        let ones = [Complex::new(1.0, 0.0); 3];
        assert_eq!(dcap_arg_sum(&ones).unwrap(), 0.0);
        let s: Vec<_> = v.iter().map(|&z| SampledNode::new(ComplexPoint::default(), z)).collect();
        assert_eq!(dcap_q(&s), Ok(1));
    }

    #[test]
    fn fifth_power_on_square() {
        // 20 nodes on a square around 0
        let mut pts = Vec::new();
        for k in 0..5 {
            let t = -1.0 + 0.4 * k as f64;
            pts.push(ComplexPoint::new(t, -1.0));
        }
        for k in 0..5 {
            pts.push(ComplexPoint::new(1.0, -1.0 + 0.4 * k as f64));
        }
        for k in 0..5 {
            pts.push(ComplexPoint::new(1.0 - 0.4 * k as f64, 1.0));
        }
        for k in 0..5 {
            pts.push(ComplexPoint::new(-1.0, 1.0 - 0.4 * k as f64));
        }
        let s = sample(|z| z.powu(5), &pts);
        assert_eq!(dcap_q(&s), Ok(5));
        let mut rev = s.clone();
        rev.reverse();
        assert_eq!(dcap_q(&rev), Ok(-5));
    }

    #[test]
    fn coarse_contour_is_rejected() {
        let pts = circle(4, Complex::new(0.0, 0.0), 1.0);
        let s = sample(|z| z * z * z, &pts);
        assert!(matches!(dcap_q(&s), Err(DcapError::AmbiguousStep(..))));
    }

    #[test]
    fn singular_sample() {
        let pts = circle(8, Complex::new(1.0, 0.0), 1.0);
        let hit = pts[3].to_complex();
        let s = sample(move |z| z - hit, &pts);
        assert!(matches!(dcap_q(&s), Err(DcapError::SingularSample(_))));
    }

    #[test]
    fn first_moment() {
        let z0 = Complex::new(0.3, -0.2);
        let pts = circle(400, Complex::new(0.1, 0.0), 1.0);
        let m = moment_estimate(&sample(|z| z - z0, &pts), 1).unwrap();
        assert!((m - z0).norm() < 1e-4, "{m}");
        let a = Complex::new(0.25, 0.1);
        let m = moment_estimate(&sample(|z| (z - a) / (z + a), &pts), 1).unwrap();
        assert!((m - 2.0 * a).norm() < 1e-4, "{m}");
        let m = moment_estimate(&sample(|z| z.exp(), &pts), 1).unwrap();
        assert!(m.norm() < 1e-4);
    }

    #[test]
    fn cancellation_and_exclusion() {
        let pts = circle(64, Complex::new(0.25, 0.0), 1.0);
        assert_eq!(global_winding(&sample(|z| z / (z - 0.5), &pts)), Ok(0));
        let away = circle(64, Complex::new(3.0, 0.0), 1.0);
        assert_eq!(global_winding(&sample(|z| z, &away)), Ok(0));
    }
}
