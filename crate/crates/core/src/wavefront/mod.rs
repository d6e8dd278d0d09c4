//! Covector feasibility for graphs immersed in 2D Minkowski space.

mod cone;
mod enumerate;
mod grid;
pub mod lp;
mod system;

pub use cone::{hormander_compose, microlocal_excluded, wightman_bipartite_estimate, ConeEstimate, ConeRegion, SlotCone};
pub use enumerate::{
    connected_graphs, enumerate_and_verify, placements, ClassCounts, ConfigurationClass, Counterexample, EdgeList,
    SweepReport,
};
pub use grid::{collapse_coincident, flat, separation, Edge, EdgeRule, ImmersedGraph, NullPoint, Separation};
pub use system::{feasible, induced_covector_system, CovectorSystem, EdgeCovector, Target, RAY_ALONG_U, RAY_ALONG_V};
