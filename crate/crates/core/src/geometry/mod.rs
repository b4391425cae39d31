//! Points, search domains, Delaunay meshes and the initial node layout.

mod delaunay;
mod domain;
mod layout;
mod mesh;
mod point;

use thiserror::Error;

pub use delaunay::{triangulate, Insertion, Triangulation};
pub use domain::SearchDomain;
pub use layout::initial_mesh;
pub(crate) use layout::{clipped, initial_triangulation};
pub use mesh::{triangle_quality, Mesh, MeshEdge, TriangleQuality};
pub use point::{centroid, diameter, point_in_polygon, segment_distance, signed_area, ComplexPoint};

use crate::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("invalid resolution: {0}")]
    InvalidResolution(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("point has a non-finite coordinate")]
    NonFinitePoint,
    #[error("point lies outside the triangulation bounds")]
    OutOfBounds,
    #[error("no triangle with id {0}")]
    MissingTriangle(usize),
}

/// Edges with exactly one incident triangle.
pub fn boundary_edges<T: Scalar>(mesh: &Mesh<T>) -> Vec<usize> {
    mesh.boundary_edges()
}
