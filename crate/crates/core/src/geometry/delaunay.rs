//! Incremental Delaunay triangulation (point insertion + Lawson edge flips).
//!
//! The triangulation lives inside a large enclosing triangle whose three
//! vertices are never exposed: [`Triangulation::mesh`] drops every triangle
//! touching them. Orientation and in-circle tests use adaptive exact
//! arithmetic, so the result is a consistent Delaunay triangulation even for
//! co-circular lattices and for nodes only a few ulps apart.

use std::collections::HashMap;

use robust::Coord;

use super::mesh::{Mesh, MeshEdge};
use super::point::ComplexPoint;
use super::GeometryError;
use crate::Scalar;

const NONE: u32 = u32::MAX;
const GHOSTS: usize = 3;

/// Triangle record: `n[i]` is the neighbour across the edge opposite `v[i]`.
#[derive(Clone, Copy, Debug)]
struct Tri {
    v: [u32; 3],
    n: [u32; 3],
}

enum Location {
    Inside(u32),
    OnEdge(u32, usize),
    OnVertex(u32),
}

/// Outcome of [`Triangulation::insert`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Insertion {
    Inserted(usize),
    /// An existing node lies within the merge tolerance; nothing changed.
    Duplicate(usize),
}

impl Insertion {
    pub fn node(self) -> usize {
        match self {
            Self::Inserted(n) | Self::Duplicate(n) => n,
        }
    }
}

/// Mutable Delaunay triangulation supporting incremental insertion.
#[derive(Clone, Debug)]
pub struct Triangulation<T> {
    points: Vec<ComplexPoint<T>>,
    xy: Vec<Coord<f64>>,
    tris: Vec<Tri>,
    hint: u32,
    merge_tol: T,
    lo: (f64, f64),
    hi: (f64, f64),
}

#[inline]
fn next(i: usize) -> usize {
    (i + 1) % 3
}

#[inline]
fn prev(i: usize) -> usize {
    (i + 2) % 3
}

impl<T: Scalar> Triangulation<T> {
    /// Empty triangulation able to hold points inside the box
    /// `(xmin, xmax, ymin, ymax)`; inserting outside it is an error.
    pub fn new(bounds: (T, T, T, T), merge_tol: T) -> Self {
        let (x0, x1, y0, y1) = (bounds.0.as_f64(), bounds.1.as_f64(), bounds.2.as_f64(), bounds.3.as_f64());
        let (cx, cy) = (0.5 * (x0 + x1), 0.5 * (y0 + y1));
        let half = (x1 - x0).max(y1 - y0).max(f64::MIN_POSITIVE) * 0.5;
        // Far enough that the enclosing vertices hardly bias the hull.
        let r = half * 1.0e6;
        let xy = vec![
            Coord { x: cx - 2.0 * r, y: cy - r },
            Coord { x: cx + 2.0 * r, y: cy - r },
            Coord { x: cx, y: cy + 2.0 * r },
        ];
        let tris = vec![Tri { v: [0, 1, 2], n: [NONE; 3] }];
        Self {
            points: Vec::new(),
            xy,
            tris,
            hint: 0,
            merge_tol,
            lo: (x0 - half, y0 - half),
            hi: (x1 + half, y1 + half),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[ComplexPoint<T>] {
        &self.points
    }

    pub fn merge_tolerance(&self) -> T {
        self.merge_tol
    }

    fn orient(&self, a: u32, b: u32, p: Coord<f64>) -> f64 {
        robust::orient2d(self.xy[a as usize], self.xy[b as usize], p)
    }

    fn in_bounds(&self, c: Coord<f64>) -> bool {
        c.x >= self.lo.0 && c.x <= self.hi.0 && c.y >= self.lo.1 && c.y <= self.hi.1
    }

    fn locate(&mut self, p: Coord<f64>) -> Location {
        let mut t = self.hint;
        let mut step = 0usize;
        loop {
            let tri = self.tris[t as usize];
            let mut moved = false;
            let start = step % 3;
            let mut zeros = [false; 3];
            for k in 0..3 {
                let i = (start + k) % 3;
                let o = self.orient(tri.v[next(i)], tri.v[prev(i)], p);
                if o < 0.0 {
                    let nb = tri.n[i];
                    debug_assert!(nb != NONE, "point escaped the enclosing triangle");
                    t = nb;
                    moved = true;
                    break;
                }
                zeros[i] = o == 0.0;
            }
            step += 1;
            if !moved {
                self.hint = t;
                return match zeros.iter().filter(|z| **z).count() {
                    0 => Location::Inside(t),
                    1 => Location::OnEdge(t, zeros.iter().position(|z| *z).unwrap()),
                    _ => {
                        // The shared vertex of the two zero edges.
                        let i = (0..3).find(|&i| !zeros[i]).unwrap();
                        Location::OnVertex(tri.v[i])
                    }
                };
            }
        }
    }

    /// Existing node within the merge tolerance of `p`, if any.
    pub fn find_near(&mut self, p: ComplexPoint<T>) -> Option<usize> {
        let c = p.xy();
        if !self.in_bounds(c) {
            return None;
        }
        match self.locate(c) {
            Location::OnVertex(v) if v as usize >= GHOSTS => Some(v as usize - GHOSTS),
            Location::Inside(t) | Location::OnEdge(t, _) => self.near_vertex(t, &p),
            Location::OnVertex(_) => None,
        }
    }

    fn near_vertex(&self, t: u32, p: &ComplexPoint<T>) -> Option<usize> {
        let tri = self.tris[t as usize];
        let mut cands: Vec<u32> = tri.v.to_vec();
        for nb in tri.n {
            if nb != NONE {
                cands.extend(self.tris[nb as usize].v);
            }
        }
        cands
            .into_iter()
            .filter(|&v| v as usize >= GHOSTS)
            .map(|v| v as usize - GHOSTS)
            .filter(|&v| self.points[v].distance(p) <= self.merge_tol)
            .min_by(|&a, &b| {
                self.points[a]
                    .distance(p)
                    .partial_cmp(&self.points[b].distance(p))
                    .unwrap_or(std::cmp::Ordering::Equal)
                    .then(a.cmp(&b))
            })
    }

    /// Insert one node, restoring the Delaunay property locally.
    pub fn insert(&mut self, p: ComplexPoint<T>) -> Result<Insertion, GeometryError> {
        if !p.is_finite() {
            return Err(GeometryError::NonFinitePoint);
        }
        let c = p.xy();
        if !self.in_bounds(c) {
            return Err(GeometryError::OutOfBounds);
        }
        let loc = self.locate(c);
        if let Location::OnVertex(v) = loc {
            return Ok(Insertion::Duplicate(v as usize - GHOSTS));
        }
        let t = match loc {
            Location::Inside(t) | Location::OnEdge(t, _) => t,
            Location::OnVertex(_) => unreachable!(),
        };
        if let Some(existing) = self.near_vertex(t, &p) {
            return Ok(Insertion::Duplicate(existing));
        }
        let id = self.points.len();
        let vid = (id + GHOSTS) as u32;
        self.points.push(p);
        self.xy.push(c);
        let mut stack = Vec::new();
        match loc {
            Location::Inside(t) => self.split_triangle(t, vid, &mut stack),
            Location::OnEdge(t, i) => self.split_edge(t, i, vid, &mut stack),
            Location::OnVertex(_) => unreachable!(),
        }
        while let Some((t, k)) = stack.pop() {
            self.legalize(t, k, &mut stack);
        }
        Ok(Insertion::Inserted(id))
    }

    fn relink(&mut self, t: u32, old: u32, new: u32) {
        if t == NONE {
            return;
        }
        let tri = &mut self.tris[t as usize];
        for n in tri.n.iter_mut() {
            if *n == old {
                *n = new;
                return;
            }
        }
    }

    fn split_triangle(&mut self, t: u32, p: u32, stack: &mut Vec<(u32, usize)>) {
        let Tri { v: [a, b, c], n: [na, nb, nc] } = self.tris[t as usize];
        let t1 = self.tris.len() as u32;
        let t2 = t1 + 1;
        self.tris[t as usize] = Tri { v: [a, b, p], n: [t1, t2, nc] };
        self.tris.push(Tri { v: [b, c, p], n: [t2, t, na] });
        self.tris.push(Tri { v: [c, a, p], n: [t, t1, nb] });
        self.relink(na, t, t1);
        self.relink(nb, t, t2);
        stack.extend([(t, 2), (t1, 2), (t2, 2)]);
    }

    fn split_edge(&mut self, t: u32, i: usize, p: u32, stack: &mut Vec<(u32, usize)>) {
        let tri = self.tris[t as usize];
        let (c, a, b) = (tri.v[i], tri.v[next(i)], tri.v[prev(i)]);
        let (u, ta, tb) = (tri.n[i], tri.n[next(i)], tri.n[prev(i)]);
        let ut = self.tris[u as usize];
        let j = (0..3).find(|&j| ut.n[j] == t).expect("neighbour links are symmetric");
        let d = ut.v[j];
        // ut.v[j+1] == b, ut.v[j+2] == a
        let (ub, ua) = (ut.n[next(j)], ut.n[prev(j)]);
        let t2 = self.tris.len() as u32;
        let u2 = t2 + 1;
        self.tris[t as usize] = Tri { v: [c, a, p], n: [u2, t2, tb] };
        self.tris.push(Tri { v: [c, p, b], n: [u, ta, t] });
        self.tris[u as usize] = Tri { v: [d, b, p], n: [t2, u2, ua] };
        self.tris.push(Tri { v: [d, p, a], n: [t, ub, u] });
        self.relink(ta, t, t2);
        self.relink(ub, u, u2);
        stack.extend([(t, 2), (t2, 1), (u, 2), (u2, 1)]);
    }

    /// `t.v[k]` is the freshly inserted vertex; test the edge facing it.
    fn legalize(&mut self, t: u32, k: usize, stack: &mut Vec<(u32, usize)>) {
        let tri = self.tris[t as usize];
        let u = tri.n[k];
        if u == NONE {
            return;
        }
        let ut = self.tris[u as usize];
        let j = (0..3).find(|&j| ut.n[j] == t).expect("neighbour links are symmetric");
        let d = ut.v[j];
        let (p, x, y) = (tri.v[k], tri.v[next(k)], tri.v[prev(k)]);
        let inside = robust::incircle(
            self.xy[p as usize],
            self.xy[x as usize],
            self.xy[y as usize],
            self.xy[d as usize],
        );
        if inside <= 0.0 {
            return;
        }
        let (a_nb, b_nb) = (tri.n[next(k)], tri.n[prev(k)]);
        let (c_nb, d_nb) = (ut.n[next(j)], ut.n[prev(j)]);
        self.tris[t as usize] = Tri { v: [p, x, d], n: [c_nb, u, b_nb] };
        self.tris[u as usize] = Tri { v: [p, d, y], n: [d_nb, a_nb, t] };
        self.relink(a_nb, t, u);
        self.relink(c_nb, u, t);
        stack.push((t, 0));
        stack.push((u, 0));
    }

    /// Snapshot of the real triangulation. `keep` can drop triangles, e.g.
    /// those whose centroid falls outside a non-convex domain.
    pub fn mesh_filtered(&self, keep: impl Fn(&[ComplexPoint<T>; 3]) -> bool) -> Mesh<T> {
        let mut triangles = Vec::new();
        for tri in &self.tris {
            if tri.v.iter().any(|&v| (v as usize) < GHOSTS) {
                continue;
            }
            let ids = tri.v.map(|v| v as usize - GHOSTS);
            let pts = ids.map(|i| self.points[i]);
            if keep(&pts) {
                triangles.push(ids);
            }
        }
        Mesh::from_parts(self.points.clone(), triangles)
    }

    pub fn mesh(&self) -> Mesh<T> {
        self.mesh_filtered(|_| true)
    }
}

/// Delaunay triangulation of a point set.
///
/// Nodes closer than `1e-14 ×` the bounding-box diagonal to an earlier node
/// are merged into it (the returned mesh then has fewer nodes than input).
pub fn triangulate<T: Scalar>(nodes: &[ComplexPoint<T>]) -> Result<Mesh<T>, GeometryError> {
    if nodes.len() < 3 {
        return Err(GeometryError::Degenerate("fewer than 3 nodes".into()));
    }
    if nodes.iter().any(|p| !p.is_finite()) {
        return Err(GeometryError::NonFinitePoint);
    }
    let bounds = nodes.iter().fold(
        (T::infinity(), T::neg_infinity(), T::infinity(), T::neg_infinity()),
        |(a, b, c, d), v| (a.min(v.re), b.max(v.re), c.min(v.im), d.max(v.im)),
    );
    let diag = (bounds.1 - bounds.0).hypot(bounds.3 - bounds.2);
    let mut tri = Triangulation::new(bounds, diag * T::lit(1e-14));
    for p in nodes {
        tri.insert(*p)?;
    }
    let mesh = tri.mesh();
    if mesh.triangles().is_empty() {
        return Err(GeometryError::Degenerate("all nodes are collinear".into()));
    }
    Ok(mesh)
}

/// Shared by mesh construction: sorted edge key.
pub(crate) fn edge_key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Edge table for a triangle list; edges are numbered in first-seen order.
pub(crate) fn build_edges(
    triangles: &[[usize; 3]],
) -> (Vec<MeshEdge>, Vec<[usize; 3]>, HashMap<(usize, usize), usize>) {
    let mut index = HashMap::with_capacity(triangles.len() * 2);
    let mut edges: Vec<MeshEdge> = Vec::with_capacity(triangles.len() * 2);
    let mut tri_edges = Vec::with_capacity(triangles.len());
    for (t, tri) in triangles.iter().enumerate() {
        let mut te = [0usize; 3];
        for (k, slot) in te.iter_mut().enumerate() {
            let key = edge_key(tri[next(k)], tri[prev(k)]);
            let e = *index.entry(key).or_insert_with(|| {
                edges.push(MeshEdge { nodes: [key.0, key.1], triangles: [None, None] });
                edges.len() - 1
            });
            let inc = &mut edges[e].triangles;
            if inc[0].is_none() {
                inc[0] = Some(t);
            } else {
                inc[1] = Some(t);
            }
            *slot = e;
        }
        tri_edges.push(te);
    }
    (edges, tri_edges, index)
}
