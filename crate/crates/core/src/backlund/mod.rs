//! Power-series coefficients of the extended Bäcklund transformation.

mod partitions;
mod series;
mod table;

pub use partitions::{enumerate_partitions, PartitionConstraint, PartitionSolution};
pub use series::AlphaSeries;
pub(crate) use table::PowerCache;
pub use table::{
    compute_a, verify_homogeneity, verify_pde_series, BacklundTable, Coupling,
    HomogeneityReport, HomogeneityViolation,
};
