//! Random convex hulls in spaces of constant curvature.
//!
//! Points live in the ambient space `R^{d+1}`: the unit sphere for spherical
//! geometry, the upper sheet of the hyperboloid for hyperbolic geometry and the
//! hyperplane `x_{d+1} = 1` for Euclidean geometry. Convex bodies and polytopes
//! are handled through the gnomonic chart, where geodesic convexity becomes
//! ordinary convexity and volume picks up the density [`geometry::chart_density`].

pub mod bodies;
pub mod error;
pub mod geometry;
pub mod hull;
pub mod measure;
pub mod montecarlo;
pub mod quadrature;
pub mod region;

pub use error::{GeoError, Result};
pub use geometry::{AmbientPoint, ChartPoint, Frame, Geometry, GeometryKind};
