//! Global complex roots and poles finding on a self-adaptive Delaunay mesh.
//!
//! The core is generic over the real scalar (`f32` or `f64`); the aliases
//! below fix it to `f64`.
//!
//! ```
//! use grpf::{run, Config, Domain, C64};
//!
//! let f = |z: C64| (z - C64::new(0.5, 0.25)) / (z + 0.5);
//! let d = Domain::rectangle(-1.0, 1.0, -1.0, 1.0).unwrap();
//! let out = run(&f, &d, 0.2, &Config::new(1e-9)).unwrap();
//! assert_eq!(out.results.len(), 2);
//! ```

pub mod dcap;
pub mod expr;
pub mod funcs;
pub mod geometry;
pub mod phase;
pub mod refine;
pub mod regions;
pub mod specials;
mod scalar;

pub use geometry::{ComplexPoint, SearchDomain};
pub use phase::AnalyticFunction;
pub use refine::{run, RefineConfig, RootPoleResult, RunOutcome};
pub use scalar::Scalar;

pub type C64 = num_complex::Complex<f64>;
pub type Point = ComplexPoint<f64>;
pub type Domain = SearchDomain<f64>;
pub type Config = RefineConfig<f64>;
pub type Outcome = RunOutcome<f64>;
pub type Found = RootPoleResult<f64>;
pub type Mesh = geometry::Mesh<f64>;
pub type Node = phase::SampledNode<f64>;
