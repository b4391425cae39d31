//! The self-adaptive refinement loop and the top-level `run`.

use std::collections::BTreeSet;

use num_complex::Complex;
use thiserror::Error;

use crate::dcap::{dcap_q, mesh_winding, verify_region, DcapError};
use crate::geometry::{
    point_in_polygon, ComplexPoint, GeometryError, Insertion, Mesh, SearchDomain, Triangulation, TriangleQuality,
};
use crate::phase::{edge_phases, evaluate_nodes, AnalyticFunction, SampleFault, SampledNode};
use crate::regions::{candidate_triangles, region_boundaries, CandidateRegion};
use crate::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RefineError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Tuning of the refinement loop.
#[derive(Clone, Debug, PartialEq)]
pub struct RefineConfig<T> {
    /// Target region diameter δ.
    pub tol: T,
    /// `0` stops after the preliminary estimate on the initial mesh.
    pub max_iters: usize,
    /// Triangles in the extra zone with longest/shortest edge above this get
    /// a centroid node.
    pub skinny_aspect: T,
    /// Rings of node-sharing triangles around a region forming the extra zone.
    pub zone_depth: usize,
    /// Verify regions every iteration and stop refining those whose boundary
    /// loops all have `q = 0`.
    pub verify_each_iter: bool,
    /// Hard cap on mesh nodes.
    pub max_nodes: usize,
    /// Also estimate the first moment of every verified region.
    pub moments: bool,
    /// Record region snapshots for every iteration.
    pub trace: bool,
    /// Pool results closer than this into one (orders added). Defaults to
    /// `tol`: a multiple point can be split between neighbouring regions,
    /// and points closer than `tol` are not resolved anyway. Raise it for
    /// targets below the evaluation noise of `f`, where a single point shows
    /// up as a cluster of ±1 pseudo-points.
    pub merge_within: Option<T>,
}

impl<T: Scalar> RefineConfig<T> {
    pub fn new(tol: T) -> Self {
        Self {
            tol,
            max_iters: 100,
            skinny_aspect: T::lit(3.0),
            zone_depth: 1,
            verify_each_iter: false,
            max_nodes: 500_000,
            moments: false,
            trace: false,
            merge_within: Some(tol),
        }
    }

    pub fn validate(&self) -> Result<(), RefineError> {
        if !(self.tol > T::zero() && self.tol.is_finite()) {
            return Err(RefineError::InvalidConfig(format!("tol must be positive, got {}", self.tol)));
        }
        if !(self.skinny_aspect > T::one()) {
            return Err(RefineError::InvalidConfig("skinny_aspect must exceed 1".into()));
        }
        if let Some(r) = self.merge_within {
            if !(r >= T::zero() && r.is_finite()) {
                return Err(RefineError::InvalidConfig(format!("merge_within must be finite and >= 0, got {r}")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ResultStatus {
    Converged,
    OpenRegion,
    BudgetExhausted,
    NodeHit,
}

impl ResultStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Converged => "converged",
            Self::OpenRegion => "open_region",
            Self::BudgetExhausted => "budget_exhausted",
            Self::NodeHit => "node_hit",
        }
    }
}

/// A verified root (`q > 0`) or pole (`q < 0`).
#[derive(Clone, Debug, PartialEq)]
pub struct RootPoleResult<T> {
    /// Mean of the region's boundary nodes.
    pub location: ComplexPoint<T>,
    pub q: i32,
    /// Region diameter.
    pub accuracy: T,
    pub iterations_used: usize,
    pub status: ResultStatus,
    pub moment1: Option<Complex<T>>,
}

/// A region whose boundary carries a candidate edge on ∂Ω.
#[derive(Clone, Debug, PartialEq)]
pub struct OpenRegionReport<T> {
    pub location: ComplexPoint<T>,
    pub diameter: T,
    pub message: String,
}

/// A closed region that did not yield a usable verdict.
#[derive(Clone, Debug, PartialEq)]
pub struct UnresolvedRegion<T> {
    pub location: ComplexPoint<T>,
    pub diameter: T,
    pub message: String,
}

/// A sample point where `f` was zero or not finite and had to be moved.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NodeHitReport<T> {
    pub requested: ComplexPoint<T>,
    /// Where the node was finally placed; `None` if no usable nearby point
    /// was found.
    pub placed: Option<ComplexPoint<T>>,
    pub fault: SampleFault,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RunStats {
    pub initial_nodes: usize,
    pub nodes: usize,
    /// Calls of `f`.
    pub evaluations: usize,
    pub iterations: usize,
    pub node_hits: usize,
    /// Evaluations that did not become mesh nodes (zero or non-finite
    /// values, and the rare late duplicate).
    pub rejected: usize,
}

/// Regions seen at one iteration (only with `RefineConfig::trace`).
#[derive(Clone, Debug, PartialEq)]
pub struct IterationRecord<T> {
    pub iteration: usize,
    pub nodes: usize,
    pub regions: Vec<RegionSnapshot<T>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegionSnapshot<T> {
    /// Outer contour, counter-clockwise, closing point omitted.
    pub polygon: Vec<ComplexPoint<T>>,
    pub location: ComplexPoint<T>,
    pub diameter: T,
    pub closed: bool,
    /// Verified order (closed regions only).
    pub q: Option<i32>,
}

impl<T: Scalar> RegionSnapshot<T> {
    pub fn contains(&self, p: &ComplexPoint<T>) -> bool {
        point_in_polygon(p, &self.polygon)
    }
}

/// Everything a run produces.
#[derive(Clone, Debug)]
pub struct RunOutcome<T> {
    /// Sorted by real, then imaginary part.
    pub results: Vec<RootPoleResult<T>>,
    pub open_regions: Vec<OpenRegionReport<T>>,
    pub unresolved: Vec<UnresolvedRegion<T>>,
    pub node_hits: Vec<NodeHitReport<T>>,
    /// Roots minus poles from the final mesh boundary, when it is
    /// unambiguous.
    pub global_winding: Option<i32>,
    pub warnings: Vec<String>,
    pub stats: RunStats,
    pub trace: Vec<IterationRecord<T>>,
    pub mesh: Mesh<T>,
    /// One per mesh node, indexed like `mesh.nodes()`.
    pub samples: Vec<SampledNode<T>>,
    /// Evaluated points that are not mesh nodes.
    pub rejected: Vec<SampledNode<T>>,
    pub regions: Vec<CandidateRegion>,
    pub candidate_edges: Vec<usize>,
}

const OPEN_REMEDY: &str = "candidate region touches the domain boundary and cannot be verified; \
extend the domain or use a denser initial mesh";

/// Incrementally refined triangulation together with its samples.
struct Sampler<'f, T, F: ?Sized> {
    f: &'f F,
    domain: SearchDomain<T>,
    tri: Triangulation<T>,
    samples: Vec<SampledNode<T>>,
    rejected: Vec<SampledNode<T>>,
    hits: Vec<NodeHitReport<T>>,
}

impl<'f, T: Scalar, F: AnalyticFunction<T> + ?Sized> Sampler<'f, T, F> {
    fn new(f: &'f F, domain: SearchDomain<T>, tri: Triangulation<T>) -> Self {
        Self { f, domain, tri, samples: Vec::new(), rejected: Vec::new(), hits: Vec::new() }
    }

    fn mesh(&self) -> Mesh<T> {
        crate::geometry::clipped(&self.tri, &self.domain)
    }

    fn evaluations(&self) -> usize {
        self.samples.len() + self.rejected.len()
    }

    /// Points not within the merge tolerance of a node or of an earlier
    /// point of the batch; the original order is kept.
    fn distinct(&mut self, points: Vec<(ComplexPoint<T>, T)>) -> Vec<(ComplexPoint<T>, T)> {
        let tol = self.tri.merge_tolerance();
        let points: Vec<_> = points.into_iter().filter(|(p, _)| self.tri.find_near(*p).is_none()).collect();
        let mut order: Vec<usize> = (0..points.len()).collect();
        order.sort_by(|&a, &b| {
            let (p, q) = (points[a].0, points[b].0);
            p.re.partial_cmp(&q.re).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b))
        });
        let mut keep = vec![true; points.len()];
        for (k, &a) in order.iter().enumerate() {
            let p = points[a].0;
            for &b in order[..k].iter().rev() {
                let q = points[b].0;
                if p.re - q.re > tol {
                    break;
                }
                if keep[b] && p.distance(&q) <= tol {
                    // the earlier one in batch order survives
                    if b < a {
                        keep[a] = false;
                    } else {
                        keep[b] = false;
                    }
                    break;
                }
            }
        }
        points.into_iter().zip(keep).filter(|(_, k)| *k).map(|(p, _)| p).collect()
    }

    /// Evaluate and insert `points`, each with a local spacing used to scale
    /// the nudge if `f` has no phase there. Returns the number of new nodes.
    fn add(&mut self, points: Vec<(ComplexPoint<T>, T)>) -> Result<usize, RefineError> {
        let fresh = self.distinct(points);
        let pts: Vec<_> = fresh.iter().map(|(p, _)| *p).collect();
        let mut sampled = evaluate_nodes(self.f, &pts);
        for (s, (_, h)) in sampled.iter_mut().zip(&fresh) {
            if let Some(fault) = s.fault() {
                self.rejected.push(*s);
                let placed = self.nudge(s.point, *h);
                self.hits.push(NodeHitReport { requested: s.point, placed: placed.map(|n| n.point), fault });
                match placed {
                    Some(n) => *s = n,
                    None => s.quadrant = None,
                }
            }
        }
        let mut added = 0;
        for s in sampled {
            if s.quadrant.is_none() {
                continue;
            }
            match self.tri.insert(s.point)? {
                Insertion::Inserted(id) => {
                    debug_assert_eq!(id, self.samples.len());
                    self.samples.push(s);
                    added += 1;
                }
                Insertion::Duplicate(_) => self.rejected.push(s),
            }
        }
        Ok(added)
    }

    fn nudge(&mut self, p: ComplexPoint<T>, h: T) -> Option<SampledNode<T>> {
        let c = self.domain.center();
        let (mut dx, mut dy) = (c.re - p.re, c.im - p.im);
        let len = dx.hypot(dy);
        if len > T::zero() {
            dx = dx / len;
            dy = dy / len;
        } else {
            dx = T::one();
            dy = T::zero();
        }
        let mut step = h * T::lit(1e-2);
        for _ in 0..6 {
            let q = p.offset(dx * step, dy * step);
            if self.tri.find_near(q).is_some() {
                step = step * T::lit(2.0);
                continue;
            }
            let s = SampledNode::new(q, self.f.evaluate(q.to_complex()));
            if s.quadrant.is_some() {
                return Some(s);
            }
            self.rejected.push(s);
            step = step * T::lit(2.0);
        }
        None
    }
}

/// Triangles sharing at least one node with `region`, grown `depth` times,
/// excluding the region's own triangles.
pub fn extra_zone<T: Scalar>(mesh: &Mesh<T>, region: &[usize], depth: usize) -> Vec<usize> {
    let own: BTreeSet<usize> = region.iter().copied().collect();
    let mut covered = own.clone();
    let mut frontier: Vec<usize> = region.to_vec();
    for _ in 0..depth {
        let mut next = Vec::new();
        for &t in &frontier {
            for v in mesh.triangles()[t] {
                for &u in mesh.node_triangles(v) {
                    if covered.insert(u) {
                        next.push(u);
                    }
                }
            }
        }
        frontier = next;
    }
    covered.difference(&own).copied().collect()
}

/// New sample points for one refinement step: midpoints of every edge of the
/// regions' triangles and centroids of skinny triangles in the extra zone.
/// Each point carries its local spacing.
pub fn refinement_points<T: Scalar>(
    mesh: &Mesh<T>,
    regions: &[&CandidateRegion],
    config: &RefineConfig<T>,
    min_edge: T,
) -> Vec<(ComplexPoint<T>, T)> {
    let tris: BTreeSet<usize> = regions.iter().flat_map(|r| r.triangles.iter().copied()).collect();
    let tris: Vec<usize> = tris.into_iter().collect();
    let edges: BTreeSet<usize> = tris.iter().flat_map(|&t| mesh.triangle_edges()[t]).collect();
    let mut out = Vec::with_capacity(edges.len() + 8);
    for e in edges {
        let len = mesh.edge_length(e);
        if len > min_edge {
            let [a, b] = mesh.edges()[e].nodes;
            out.push((mesh.nodes()[a].midpoint(&mesh.nodes()[b]), len));
        }
    }
    let zone = extra_zone(mesh, &tris, config.zone_depth);
    for t in zone {
        let pts = mesh.triangle_points(t);
        let q = TriangleQuality::of(&pts);
        if q.aspect > config.skinny_aspect && q.shortest_edge > min_edge {
            let c = crate::geometry::centroid(pts).expect("three points");
            out.push((c, q.shortest_edge));
        }
    }
    out
}

fn merge_tolerance<T: Scalar>(domain: &SearchDomain<T>, tol: T) -> T {
    (domain.diameter() * T::lit(1e-14)).min(tol * T::lit(1e-2))
}

/// One refinement step on an existing sampled mesh: the nodes are
/// re-triangulated, `regions` refined, and only the new nodes evaluated.
pub fn refine_regions<T, F>(
    f: &F,
    domain: &SearchDomain<T>,
    mesh: &Mesh<T>,
    samples: &[SampledNode<T>],
    regions: &[CandidateRegion],
    config: &RefineConfig<T>,
) -> Result<(Mesh<T>, Vec<SampledNode<T>>), RefineError>
where
    T: Scalar,
    F: AnalyticFunction<T> + ?Sized,
{
    let merge = merge_tolerance(domain, config.tol);
    let mut tri = Triangulation::new(domain.bounds(), merge);
    let mut kept = Vec::with_capacity(samples.len());
    for s in samples {
        if let Insertion::Inserted(_) = tri.insert(s.point)? {
            kept.push(*s);
        }
    }
    let mut sampler = Sampler::new(f, domain.clone(), tri);
    sampler.samples = kept;
    let refs: Vec<&CandidateRegion> = regions.iter().collect();
    sampler.add(refinement_points(mesh, &refs, config, merge * T::lit(2.0)))?;
    Ok((sampler.mesh(), sampler.samples))
}

struct Analysis<T> {
    mesh: Mesh<T>,
    regions: Vec<CandidateRegion>,
    cand: Vec<usize>,
    diam: Vec<T>,
    q: Vec<Option<Result<i32, DcapError>>>,
    /// Closed, and every boundary loop winds zero times.
    empty: Vec<bool>,
}

fn analyze<T: Scalar>(mesh: Mesh<T>, samples: &[SampledNode<T>]) -> Analysis<T> {
    let phases = edge_phases(&mesh, samples);
    let is_cand: Vec<bool> = phases.iter().map(|p| p.is_some_and(|p| p.is_candidate)).collect();
    let cand: Vec<usize> = (0..is_cand.len()).filter(|&e| is_cand[e]).collect();
    let tris = candidate_triangles(&mesh, &cand);
    let regions = region_boundaries(&mesh, &tris, &is_cand);
    let diam = regions.iter().map(|r| r.diameter(&mesh)).collect();
    let q = regions
        .iter()
        .map(|r| r.closed.then(|| verify_region(samples, r, false).map(|v| v.q)))
        .collect();
    let empty = regions
        .iter()
        .map(|r| r.closed && r.loops().all(|l| dcap_q(&l.iter().map(|&n| samples[n]).collect::<Vec<_>>()) == Ok(0)))
        .collect();
    Analysis { mesh, regions, cand, diam, q, empty }
}

fn sort_results<T: Scalar>(results: &mut [RootPoleResult<T>]) {
    results.sort_by(|a, b| {
        a.location
            .re
            .partial_cmp(&b.location.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.location.im.partial_cmp(&b.location.im).unwrap_or(std::cmp::Ordering::Equal))
    });
}

/// Single-linkage clusters of results closer than `radius`. Each cluster
/// becomes one result with the summed order at the |q|-weighted mean;
/// clusters whose orders cancel are returned separately.
pub fn merge_clusters<T: Scalar>(
    mut results: Vec<RootPoleResult<T>>,
    radius: T,
) -> (Vec<RootPoleResult<T>>, Vec<UnresolvedRegion<T>>) {
    sort_results(&mut results);
    let n = results.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if results[j].location.re - results[i].location.re > radius {
                break;
            }
            if results[i].location.distance(&results[j].location) <= radius {
                let (a, b) = (root(&mut parent, i), root(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = std::collections::BTreeMap::new();
    for i in 0..n {
        let r = root(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    let mut kept = Vec::new();
    let mut cancelled = Vec::new();
    for members in groups.into_values() {
        if members.len() == 1 {
            kept.push(results[members[0]].clone());
            continue;
        }
        let pts: Vec<_> = members.iter().map(|&i| results[i].location).collect();
        let q: i32 = members.iter().map(|&i| results[i].q).sum();
        let spread = crate::geometry::diameter(&pts);
        let acc = members.iter().map(|&i| results[i].accuracy).fold(T::zero(), T::max);
        if q == 0 {
            let location = crate::geometry::centroid(pts).expect("non-empty");
            cancelled.push(UnresolvedRegion {
                location,
                diameter: spread + acc,
                message: format!("{} nearby results with cancelling orders", members.len()),
            });
            continue;
        }
        let (mut wr, mut wi, mut w) = (T::zero(), T::zero(), T::zero());
        for &i in &members {
            let k = T::from_usize_lossy(results[i].q.unsigned_abs() as usize);
            wr = wr + k * results[i].location.re;
            wi = wi + k * results[i].location.im;
            w = w + k;
        }
        let first = &results[members[0]];
        let status = if members.iter().any(|&i| results[i].status == ResultStatus::NodeHit) {
            ResultStatus::NodeHit
        } else {
            first.status
        };
        kept.push(RootPoleResult {
            location: ComplexPoint::new(wr / w, wi / w),
            q,
            accuracy: spread + acc,
            iterations_used: first.iterations_used,
            status,
            moment1: None,
        });
    }
    sort_results(&mut kept);
    (kept, cancelled)
}

/// Find all roots and poles of `f` in `domain`.
///
/// Starts from a regular mesh with edges ≤ `dr`, then refines candidate
/// regions until each is smaller than `config.tol` across, or the iteration
/// or node budget runs out.
pub fn run<T, F>(f: &F, domain: &SearchDomain<T>, dr: T, config: &RefineConfig<T>) -> Result<RunOutcome<T>, RefineError>
where
    T: Scalar,
    F: AnalyticFunction<T> + ?Sized,
{
    config.validate()?;
    let merge = merge_tolerance(domain, config.tol);
    let min_edge = merge * T::lit(2.0);
    let tri0 = crate::geometry::initial_triangulation(domain, dr, merge)?;
    let mut sampler = Sampler::new(f, domain.clone(), Triangulation::new(domain.bounds(), merge));
    let spacing = dr;
    sampler.add(tri0.points().iter().map(|p| (*p, spacing)).collect())?;
    let initial_nodes = sampler.samples.len();

    let mut trace = Vec::new();
    let mut iteration = 0;
    let mut exhausted = false;
    let analysis = loop {
        let a = analyze(sampler.mesh(), &sampler.samples);
        if config.trace {
            trace.push(IterationRecord {
                iteration,
                nodes: sampler.samples.len(),
                regions: a
                    .regions
                    .iter()
                    .enumerate()
                    .map(|(k, r)| RegionSnapshot {
                        polygon: r.polygon(&a.mesh),
                        location: r.location(&a.mesh),
                        diameter: a.diam[k],
                        closed: r.closed,
                        q: a.q[k].clone().and_then(Result::ok),
                    })
                    .collect(),
            });
        }
        let chosen: Vec<bool> = (0..a.regions.len())
            .map(|k| a.diam[k] > config.tol && !(config.verify_each_iter && a.empty[k]))
            .collect();
        if !chosen.contains(&true) {
            break a;
        }
        let active: Vec<&CandidateRegion> = (0..a.regions.len()).filter(|&k| chosen[k]).map(|k| &a.regions[k]).collect();
        if iteration >= config.max_iters || sampler.samples.len() >= config.max_nodes {
            exhausted = true;
            break a;
        }
        let pts = refinement_points(&a.mesh, &active, config, min_edge);
        if sampler.add(pts)? == 0 {
            exhausted = true;
            break a;
        }
        iteration += 1;
    };

    let Analysis { mesh, regions, cand, diam, .. } = analysis;
    let evaluations = sampler.evaluations();
    let samples = sampler.samples;
    let mut results = Vec::new();
    let mut open_regions = Vec::new();
    let mut unresolved = Vec::new();
    let mut warnings = Vec::new();
    let mut q_total = 0i64;
    for (k, r) in regions.iter().enumerate() {
        let location = r.location(&mesh);
        let diameter = diam[k];
        if !r.closed {
            open_regions.push(OpenRegionReport { location, diameter, message: OPEN_REMEDY.into() });
            continue;
        }
        match verify_region(&samples, r, config.moments) {
            Ok(v) if v.q != 0 => {
                q_total += v.q as i64;
                let poly = r.polygon(&mesh);
                let hit = sampler.hits.iter().any(|h| {
                    h.fault == SampleFault::NonFinite
                        && (point_in_polygon(&h.requested, &poly) || h.requested.distance(&location) <= diameter)
                });
                let status = if hit {
                    ResultStatus::NodeHit
                } else if diameter <= config.tol {
                    ResultStatus::Converged
                } else {
                    ResultStatus::BudgetExhausted
                };
                results.push(RootPoleResult {
                    location,
                    q: v.q,
                    accuracy: diameter,
                    iterations_used: iteration,
                    status,
                    moment1: v.moment1,
                });
            }
            Ok(_) => unresolved.push(UnresolvedRegion {
                location,
                diameter,
                message: "region encloses zero net roots minus poles".into(),
            }),
            Err(e) => {
                unresolved.push(UnresolvedRegion { location, diameter, message: format!("verification failed: {e}") })
            }
        }
    }
    if let Some(radius) = config.merge_within {
        let (kept, cancelled) = merge_clusters(results, radius);
        results = kept;
        unresolved.extend(cancelled);
    }
    sort_results(&mut results);

    let global_winding = mesh_winding(&mesh, &samples).ok();
    if exhausted {
        warnings.push(format!(
            "refinement stopped after {iteration} iterations and {} nodes before every region reached tol",
            samples.len()
        ));
    }
    if let (Some(w), true) = (global_winding, open_regions.is_empty()) {
        if w as i64 != q_total {
            warnings.push(format!("sum of region orders {q_total} differs from boundary winding {w}"));
        }
    }
    for h in &sampler.hits {
        let what = match h.fault {
            SampleFault::ExactZero => "f vanishes exactly (root of undetermined order)",
            SampleFault::NonFinite => "f is not finite (pole suspect)",
        };
        warnings.push(format!("{what} at {}{:+}i; node moved", h.requested.re, h.requested.im));
    }
    for o in &open_regions {
        warnings.push(format!("open region near {}{:+}i: {}", o.location.re, o.location.im, o.message));
    }

    let stats = RunStats {
        initial_nodes,
        nodes: samples.len(),
        evaluations,
        iterations: iteration,
        node_hits: sampler.hits.len(),
        rejected: sampler.rejected.len(),
    };
    Ok(RunOutcome {
        results,
        open_regions,
        unresolved,
        node_hits: sampler.hits,
        global_winding,
        warnings,
        stats,
        trace,
        mesh,
        samples,
        rejected: sampler.rejected,
        regions,
        candidate_edges: cand,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::initial_mesh;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn square() -> SearchDomain<f64> {
        SearchDomain::rectangle(-1.0, 1.0, -1.0, 1.0).unwrap()
    }

    #[test]
    fn double_root_at_origin() {
        let f = |z: Complex<f64>| z * z;
        let out = run(&f, &square(), 0.3, &RefineConfig::new(1e-6)).unwrap();
        assert_eq!(out.results.len(), 1, "{:?}", out.results);
        let r = &out.results[0];
        assert_eq!(r.q, 2);
        assert!(r.location.norm() <= 1e-6);
        assert!(r.accuracy <= 1e-6);
    }

    #[test]
    fn root_and_pole() {
        let (a, b) = (c(0.31, -0.22), c(-0.4, 0.45));
        let f = move |z: Complex<f64>| (z - a) / (z - b);
        let out = run(&f, &square(), 0.25, &RefineConfig::new(1e-9)).unwrap();
        assert_eq!(out.results.len(), 2);
        let pole = &out.results[0];
        let root = &out.results[1];
        assert_eq!((pole.q, root.q), (-1, 1));
        assert!((pole.location.to_complex() - b).norm() <= 1e-9);
        assert!((root.location.to_complex() - a).norm() <= 1e-9);
        assert_eq!(out.global_winding, Some(0));
        assert_eq!(out.stats.evaluations, out.stats.nodes + out.stats.rejected);
        assert_eq!(out.rejected.len(), out.stats.rejected);
        assert!(out.results.iter().all(|r| r.status == ResultStatus::Converged));
    }

    #[test]
    fn zone_growth() {
        let m = initial_mesh(&square(), 0.3).unwrap();
        let t = m.node_triangles(m.nodes().len() / 2)[0];
        assert!(extra_zone(&m, &[t], 0).is_empty());
        let one = extra_zone(&m, &[t], 1);
        let two = extra_zone(&m, &[t], 2);
        assert!(!one.contains(&t));
        assert!(one.iter().all(|x| two.contains(x)));
        assert!(two.len() > one.len());
        for &u in &one {
            assert!(m.triangles()[u].iter().any(|v| m.triangles()[t].contains(v)));
        }
    }

    #[test]
    fn one_step_splits_every_region_edge() {
        let d = square();
        let m = initial_mesh(&d, 0.5).unwrap();
        let f = |z: Complex<f64>| z - c(0.013, 0.021);
        let s = evaluate_nodes(&f, m.nodes());
        let t = 0;
        let region = region_boundaries(&m, &[t], &vec![false; m.edges().len()]);
        let (m2, s2) = refine_regions(&f, &d, &m, &s, &region, &RefineConfig::new(1e-6)).unwrap();
        assert_eq!(s2.len(), s.len() + 3);
        let [a, b, cc] = m.triangle_points(t);
        for mid in [a.midpoint(&b), b.midpoint(&cc), cc.midpoint(&a)] {
            assert!(m2.nodes().contains(&mid));
        }
        let inside = (0..m2.triangles().len())
            .filter(|&u| {
                let ctr = crate::geometry::centroid(m2.triangle_points(u)).unwrap();
                point_in_polygon(&ctr, &[a, b, cc])
            })
            .count();
        assert!(inside >= 4);
    }

    #[test]
    fn skinny_zone_triangle_gets_centroid() {
        // the two far points make a long thin triangle sharing node 0 with the region
        let pts = vec![
            ComplexPoint::new(0.0, 0.0),
            ComplexPoint::new(1.0, 0.0),
            ComplexPoint::new(0.5, 0.8),
            ComplexPoint::new(-3.0, 0.1),
            ComplexPoint::new(-3.0, -0.1),
        ];
        let m = crate::geometry::triangulate(&pts).unwrap();
        let find = |a: usize, b: usize, cc: usize| {
            (0..m.triangles().len())
                .find(|&t| {
                    let v = m.triangles()[t];
                    v.contains(&a) && v.contains(&b) && v.contains(&cc)
                })
                .unwrap()
        };
        let region_t = find(0, 1, 2);
        let thin = find(0, 3, 4);
        let regions = region_boundaries(&m, &[region_t], &vec![false; m.edges().len()]);
        let cfg = RefineConfig::new(1e-9);
        let new = refinement_points(&m, &[&regions[0]], &cfg, 0.0);
        assert!(extra_zone(&m, &[region_t], 1).contains(&thin));
        let ctr = crate::geometry::centroid(m.triangle_points(thin)).unwrap();
        assert!(new.iter().any(|(p, _)| *p == ctr));
        let skinny = extra_zone(&m, &[region_t], 1)
            .into_iter()
            .filter(|&t| TriangleQuality::of(&m.triangle_points(t)).aspect > 3.0)
            .count();
        assert_eq!(new.len(), 3 + skinny);
    }

    #[test]
    fn exact_node_hit_is_nudged() {
        let d = square();
        let m = initial_mesh(&d, 0.5).unwrap();
        let z0 = (0..m.nodes().len())
            .map(|n| m.nodes()[n])
            .find(|p| p.norm() < 0.5 && p.norm() > 0.0)
            .unwrap()
            .to_complex();
        let f = move |z: Complex<f64>| z - z0;
        let out = run(&f, &d, 0.5, &RefineConfig::new(1e-6)).unwrap();
        assert!(out.node_hits.iter().any(|h| h.fault == SampleFault::ExactZero));
        assert_eq!(out.results.len(), 1);
        assert_eq!(out.results[0].q, 1);
        assert!((out.results[0].location.to_complex() - z0).norm() <= 1e-6);
        assert_eq!(out.results[0].status, ResultStatus::Converged);
    }

    #[test]
    fn clusters_pool_orders() {
        let r = |re: f64, q: i32| RootPoleResult {
            location: ComplexPoint::new(re, 0.0),
            q,
            accuracy: 1e-15,
            iterations_used: 3,
            status: ResultStatus::Converged,
            moment1: None,
        };
        let (kept, gone) =
            merge_clusters(vec![r(0.5, 1), r(0.5 + 1e-14, -1), r(0.5 + 2e-14, 1), r(0.7, -2), r(0.9, 1), r(0.9 + 1e-14, -1)], 1.5e-14);
        assert_eq!(kept.iter().map(|k| k.q).collect::<Vec<_>>(), vec![1, -2]);
        assert!((kept[0].location.re - 0.5 - 1e-14).abs() < 1e-15);
        assert!(kept[0].accuracy >= 2e-14);
        assert_eq!(kept[1], r(0.7, -2));
        assert_eq!(gone.len(), 1);
    }

    #[test]
    fn config_is_validated() {
        let f = |z: Complex<f64>| z;
        let mut cfg = RefineConfig::new(0.0);
        assert!(run(&f, &square(), 0.3, &cfg).is_err());
        cfg.tol = 1e-3;
        cfg.skinny_aspect = 0.5;
        assert!(run(&f, &square(), 0.3, &cfg).is_err());
    }

    #[test]
    fn single_precision_run() {
        let f = |z: Complex<f32>| (z - Complex::new(0.2f32, 0.1)) * (z + Complex::new(0.3f32, 0.4));
        let d = SearchDomain::<f32>::rectangle(-1.0, 1.0, -1.0, 1.0).unwrap();
        let out = run(&f, &d, 0.3, &RefineConfig::new(1e-4f32)).unwrap();
        assert_eq!(out.results.len(), 2);
        assert!(out.results.iter().all(|r| r.q == 1 && r.accuracy <= 1e-4));
    }
}
