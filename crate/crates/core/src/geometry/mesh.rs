use std::collections::HashMap;

use super::delaunay::{build_edges, edge_key};
use super::point::ComplexPoint;
use super::GeometryError;
use crate::Scalar;

/// An undirected mesh edge. `nodes` is sorted ascending; `triangles[1]` is
/// `None` on the mesh boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MeshEdge {
    pub nodes: [usize; 2],
    pub triangles: [Option<usize>; 2],
}

impl MeshEdge {
    pub fn is_boundary(&self) -> bool {
        self.triangles[1].is_none()
    }
}

/// Immutable triangle mesh with derived adjacency.
///
/// Triangles are counter-clockwise. `triangle_edges()[t][k]` is the edge
/// opposite vertex `k` of triangle `t`.
#[derive(Clone, Debug)]
pub struct Mesh<T> {
    nodes: Vec<ComplexPoint<T>>,
    triangles: Vec<[usize; 3]>,
    edges: Vec<MeshEdge>,
    tri_edges: Vec<[usize; 3]>,
    index: HashMap<(usize, usize), usize>,
    node_tris: Vec<Vec<usize>>,
}

impl<T: Scalar> Mesh<T> {
    /// Build from nodes and triangles; triangles are reoriented to CCW.
    pub fn from_parts(nodes: Vec<ComplexPoint<T>>, mut triangles: Vec<[usize; 3]>) -> Self {
        for t in triangles.iter_mut() {
            let [a, b, c] = t.map(|i| nodes[i].xy());
            if robust::orient2d(a, b, c) < 0.0 {
                t.swap(1, 2);
            }
        }
        let (edges, tri_edges, index) = build_edges(&triangles);
        let mut node_tris = vec![Vec::new(); nodes.len()];
        for (ti, t) in triangles.iter().enumerate() {
            for &v in t {
                node_tris[v].push(ti);
            }
        }
        Self { nodes, triangles, edges, tri_edges, index, node_tris }
    }

    pub fn nodes(&self) -> &[ComplexPoint<T>] {
        &self.nodes
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn edges(&self) -> &[MeshEdge] {
        &self.edges
    }

    pub fn triangle_edges(&self) -> &[[usize; 3]] {
        &self.tri_edges
    }

    /// Triangles incident to node `n`.
    pub fn node_triangles(&self, n: usize) -> &[usize] {
        &self.node_tris[n]
    }

    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        self.index.get(&edge_key(a, b)).copied()
    }

    pub fn triangle_points(&self, t: usize) -> [ComplexPoint<T>; 3] {
        self.triangles[t].map(|i| self.nodes[i])
    }

    /// Triangles sharing an edge with `t`.
    pub fn triangle_neighbors(&self, t: usize) -> impl Iterator<Item = usize> + '_ {
        self.tri_edges[t].iter().filter_map(move |&e| {
            let [a, b] = self.edges[e].triangles;
            match (a, b) {
                (Some(a), Some(b)) => Some(if a == t { b } else { a }),
                _ => None,
            }
        })
    }

    pub fn boundary_edges(&self) -> Vec<usize> {
        (0..self.edges.len()).filter(|&e| self.edges[e].is_boundary()).collect()
    }

    pub fn edge_length(&self, e: usize) -> T {
        let [a, b] = self.edges[e].nodes;
        self.nodes[a].distance(&self.nodes[b])
    }

    pub fn max_edge_length(&self) -> T {
        (0..self.edges.len()).map(|e| self.edge_length(e)).fold(T::zero(), T::max)
    }

    /// Longest over shortest edge of triangle `t`.
    pub fn aspect_ratio(&self, t: usize) -> T {
        TriangleQuality::of(&self.triangle_points(t)).aspect
    }

    /// Structural consistency: CCW, non-degenerate triangles; each edge used
    /// by one or two triangles; Euler characteristic of a disk.
    pub fn validate(&self) -> Result<(), GeometryError> {
        for (t, tri) in self.triangles.iter().enumerate() {
            if tri.iter().any(|&i| i >= self.nodes.len()) {
                return Err(GeometryError::Degenerate(format!("triangle {t} indexes a missing node")));
            }
            let [a, b, c] = tri.map(|i| self.nodes[i].xy());
            if robust::orient2d(a, b, c) <= 0.0 {
                return Err(GeometryError::Degenerate(format!("triangle {t} is not counter-clockwise")));
            }
        }
        let used: usize = self.node_tris.iter().filter(|v| !v.is_empty()).count();
        let chi = used as i64 - self.edges.len() as i64 + self.triangles.len() as i64;
        if chi != 1 && !self.triangles.is_empty() {
            return Err(GeometryError::Degenerate(format!("Euler characteristic {chi}, expected 1")));
        }
        Ok(())
    }
}

/// Edge-length extremes of a single triangle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TriangleQuality<T> {
    pub longest_edge: T,
    pub shortest_edge: T,
    /// longest / shortest, always ≥ 1
    pub aspect: T,
}

impl<T: Scalar> TriangleQuality<T> {
    pub fn of(p: &[ComplexPoint<T>; 3]) -> Self {
        let l = [p[1].distance(&p[2]), p[2].distance(&p[0]), p[0].distance(&p[1])];
        let longest_edge = l[0].max(l[1]).max(l[2]);
        let shortest_edge = l[0].min(l[1]).min(l[2]);
        let aspect = if shortest_edge > T::zero() { longest_edge / shortest_edge } else { T::infinity() };
        Self { longest_edge, shortest_edge, aspect }
    }
}

/// Quality of triangle `t` of `mesh`.
pub fn triangle_quality<T: Scalar>(mesh: &Mesh<T>, t: usize) -> Result<TriangleQuality<T>, GeometryError> {
    if t >= mesh.triangles().len() {
        return Err(GeometryError::MissingTriangle(t));
    }
    Ok(TriangleQuality::of(&mesh.triangle_points(t)))
}
