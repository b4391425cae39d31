//! Candidate triangles and the boundary contours of candidate regions.

use std::collections::{BTreeMap, BTreeSet};

use crate::geometry::{diameter, signed_area, ComplexPoint, Mesh};
use crate::Scalar;

/// Connected set of candidate triangles and its boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateRegion {
    /// Sorted triangle ids.
    pub triangles: Vec<usize>,
    /// Outer boundary, counter-clockwise, with `contour[0] == contour[last]`.
    pub contour: Vec<usize>,
    /// Inner boundaries (clockwise), same closing convention.
    pub holes: Vec<Vec<usize>>,
    /// `false` when a candidate edge lies on the region boundary, i.e. on ∂Ω.
    pub closed: bool,
}

impl CandidateRegion {
    /// All boundary loops, outer first.
    pub fn loops(&self) -> impl Iterator<Item = &[usize]> {
        std::iter::once(self.contour.as_slice()).chain(self.holes.iter().map(Vec::as_slice))
    }

    /// Distinct nodes of all boundary loops.
    pub fn boundary_nodes(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self.loops().flat_map(|l| l[..l.len() - 1].iter().copied()).collect();
        set.into_iter().collect()
    }

    /// Number of edges on the outer contour.
    pub fn contour_len(&self) -> usize {
        self.contour.len().saturating_sub(1)
    }

    /// Mean of the boundary nodes.
    pub fn location<T: Scalar>(&self, mesh: &Mesh<T>) -> ComplexPoint<T> {
        crate::geometry::centroid(self.boundary_nodes().into_iter().map(|n| mesh.nodes()[n]))
            .expect("a region has boundary nodes")
    }

    /// Largest distance between two boundary nodes.
    pub fn diameter<T: Scalar>(&self, mesh: &Mesh<T>) -> T {
        let pts: Vec<_> = self.boundary_nodes().into_iter().map(|n| mesh.nodes()[n]).collect();
        diameter(&pts)
    }

    /// Outer contour as points (closing point omitted).
    pub fn polygon<T: Scalar>(&self, mesh: &Mesh<T>) -> Vec<ComplexPoint<T>> {
        self.contour[..self.contour_len()].iter().map(|&n| mesh.nodes()[n]).collect()
    }
}

/// Union of the triangles incident to the given edges, sorted.
pub fn candidate_triangles<T: Scalar>(mesh: &Mesh<T>, cand_edges: &[usize]) -> Vec<usize> {
    let set: BTreeSet<usize> = cand_edges
        .iter()
        .flat_map(|&e| mesh.edges()[e].triangles.into_iter().flatten())
        .collect();
    set.into_iter().collect()
}

/// Split `cand_tris` into regions and trace their boundaries.
///
/// `is_candidate[e]` flags candidate edges; a region whose boundary carries
/// one of them cannot be verified and is returned with `closed == false`.
/// Where clusters touch at a single node the node's whole triangle fan is
/// added, so every boundary loop is simple and regions never share a node
/// through their contours.
pub fn region_boundaries<T: Scalar>(mesh: &Mesh<T>, cand_tris: &[usize], is_candidate: &[bool]) -> Vec<CandidateRegion> {
    let mut member = vec![false; mesh.triangles().len()];
    for &t in cand_tris {
        member[t] = true;
    }
    close_pinches(mesh, &mut member);

    let mut seen = vec![false; member.len()];
    let mut out = Vec::new();
    for start in 0..member.len() {
        if !member[start] || seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut i = 0;
        while i < comp.len() {
            let t = comp[i];
            i += 1;
            for nb in mesh.triangle_neighbors(t) {
                if member[nb] && !seen[nb] {
                    seen[nb] = true;
                    comp.push(nb);
                }
            }
        }
        comp.sort_unstable();
        out.push(trace(mesh, comp, &member, is_candidate));
    }
    out
}

/// Regions whose triangle sets share a node are merged and re-bounded.
pub fn merge_adjacent_regions<T: Scalar>(
    mesh: &Mesh<T>,
    regions: &[CandidateRegion],
    is_candidate: &[bool],
) -> Vec<CandidateRegion> {
    let tris: Vec<usize> = regions.iter().flat_map(|r| r.triangles.iter().copied()).collect();
    region_boundaries(mesh, &tris, is_candidate)
}

fn is_region_edge<T: Scalar>(mesh: &Mesh<T>, member: &[bool], e: usize) -> bool {
    let inside = mesh.edges()[e].triangles.into_iter().flatten().filter(|&t| member[t]).count();
    inside == 1
}

fn close_pinches<T: Scalar>(mesh: &Mesh<T>, member: &mut [bool]) {
    loop {
        let mut count: BTreeMap<usize, usize> = BTreeMap::new();
        for t in (0..member.len()).filter(|&t| member[t]) {
            for &e in &mesh.triangle_edges()[t] {
                if is_region_edge(mesh, member, e) {
                    for n in mesh.edges()[e].nodes {
                        *count.entry(n).or_default() += 1;
                    }
                }
            }
        }
        let pinched: Vec<usize> = count.into_iter().filter(|&(_, c)| c > 2).map(|(n, _)| n).collect();
        if pinched.is_empty() {
            return;
        }
        for n in pinched {
            for &t in mesh.node_triangles(n) {
                member[t] = true;
            }
        }
    }
}

fn trace<T: Scalar>(mesh: &Mesh<T>, triangles: Vec<usize>, member: &[bool], is_candidate: &[bool]) -> CandidateRegion {
    // Directed boundary edges keep the region on their left.
    let mut next: BTreeMap<usize, usize> = BTreeMap::new();
    let mut closed = true;
    for &t in &triangles {
        let v = mesh.triangles()[t];
        for k in 0..3 {
            let e = mesh.triangle_edges()[t][k];
            if is_region_edge(mesh, member, e) {
                let (a, b) = (v[(k + 1) % 3], v[(k + 2) % 3]);
                next.insert(a, b);
                if is_candidate.get(e).copied().unwrap_or(false) {
                    closed = false;
                }
            }
        }
    }
    let mut loops: Vec<Vec<usize>> = Vec::new();
    while let Some((&start, _)) = next.iter().next() {
        let mut lp = vec![start];
        let mut cur = start;
        while let Some(n) = next.remove(&cur) {
            lp.push(n);
            cur = n;
            if n == start {
                break;
            }
        }
        loops.push(lp);
    }
    let area = |l: &Vec<usize>| {
        let pts: Vec<_> = l[..l.len() - 1].iter().map(|&n| mesh.nodes()[n]).collect();
        signed_area(&pts)
    };
    // The outer loop is the one with the largest signed area.
    let outer = (0..loops.len())
        .max_by(|&a, &b| area(&loops[a]).partial_cmp(&area(&loops[b])).unwrap_or(std::cmp::Ordering::Equal))
        .expect("a non-empty region has a boundary");
    let contour = loops.swap_remove(outer);
    CandidateRegion { triangles, contour, holes: loops, closed }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{initial_mesh, triangulate, SearchDomain};

    fn p(re: f64, im: f64) -> ComplexPoint<f64> {
        ComplexPoint::new(re, im)
    }

    fn grid() -> Mesh<f64> {
        let d = SearchDomain::rectangle(0.0, 4.0, 0.0, 4.0).unwrap();
        initial_mesh(&d, 0.5).unwrap()
    }

    fn no_cand(m: &Mesh<f64>) -> Vec<bool> {
        vec![false; m.edges().len()]
    }

    #[test]
    fn single_triangle_region() {
        let m = triangulate(&[p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0)]).unwrap();
        let r = region_boundaries(&m, &[0], &no_cand(&m));
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].contour_len(), 3);
        assert_eq!(r[0].contour.first(), r[0].contour.last());
        assert!(signed_area(&r[0].polygon(&m)) > 0.0);
    }

    #[test]
    fn shared_edge_is_interior() {
        let m = triangulate(&[p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0), p(0.0, 1.0)]).unwrap();
        let diag = (0..m.edges().len()).find(|&e| !m.edges()[e].is_boundary()).unwrap();
        let tris = candidate_triangles(&m, &[diag]);
        assert_eq!(tris, vec![0, 1]);
        let r = region_boundaries(&m, &tris, &no_cand(&m));
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].contour_len(), 4);
        assert!(!r[0].contour.windows(2).any(|w| m.edge_between(w[0], w[1]) == Some(diag)));
        assert!(r[0].closed);
    }

    #[test]
    fn candidate_on_boundary_opens_region() {
        let m = triangulate(&[p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0)]).unwrap();
        let mut cand = no_cand(&m);
        cand[0] = true;
        let r = region_boundaries(&m, &candidate_triangles(&m, &[0]), &cand);
        assert!(!r[0].closed);
    }

    #[test]
    fn vertex_touching_clusters_merge() {
        let m = grid();
        // two triangles sharing exactly one node and no edge
        let n = (0..m.nodes().len()).find(|&n| m.node_triangles(n).len() == 6).unwrap();
        let fan = m.node_triangles(n);
        let a = fan[0];
        let b = *fan
            .iter()
            .find(|&&t| t != a && !m.triangle_neighbors(a).any(|x| x == t))
            .unwrap();
        let sep = region_boundaries(&m, &[a], &no_cand(&m));
        let sep2 = region_boundaries(&m, &[b], &no_cand(&m));
        let merged = merge_adjacent_regions(&m, &[sep[0].clone(), sep2[0].clone()], &no_cand(&m));
        assert_eq!(merged.len(), 1);
        assert!(merged[0].triangles.contains(&a) && merged[0].triangles.contains(&b));
        // boundary loop is simple
        let body = &merged[0].contour[..merged[0].contour_len()];
        assert_eq!(body.iter().collect::<BTreeSet<_>>().len(), body.len());
    }

    #[test]
    fn disjoint_clusters_stay_apart() {
        let m = grid();
        let far: Vec<usize> = {
            let a = 0;
            let pa = centroid_of(&m, a);
            let b = (0..m.triangles().len()).max_by(|&x, &y| {
                centroid_of(&m, x).distance(&pa).partial_cmp(&centroid_of(&m, y).distance(&pa)).unwrap()
            });
            vec![a, b.unwrap()]
        };
        assert_eq!(region_boundaries(&m, &far, &no_cand(&m)).len(), 2);
    }

    #[test]
    fn ring_has_a_hole() {
        let m = grid();
        let n = (0..m.nodes().len()).find(|&n| m.node_triangles(n).len() == 6 && {
            let c = m.nodes()[n];
            c.re > 1.0 && c.re < 3.0 && c.im > 1.0 && c.im < 3.0
        }).unwrap();
        let inner: BTreeSet<usize> = m.node_triangles(n).iter().copied().collect();
        let mut ring = BTreeSet::new();
        for &t in &inner {
            for v in m.triangles()[t] {
                for &u in m.node_triangles(v) {
                    if !inner.contains(&u) {
                        ring.insert(u);
                    }
                }
            }
        }
        let ring: Vec<usize> = ring.into_iter().collect();
        let r = region_boundaries(&m, &ring, &no_cand(&m));
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].holes.len(), 1);
        let hole: Vec<_> = r[0].holes[0][..r[0].holes[0].len() - 1].iter().map(|&i| m.nodes()[i]).collect();
        assert!(signed_area(&hole) < 0.0);
    }

    fn centroid_of(m: &Mesh<f64>, t: usize) -> ComplexPoint<f64> {
        crate::geometry::centroid(m.triangle_points(t)).unwrap()
    }
}
