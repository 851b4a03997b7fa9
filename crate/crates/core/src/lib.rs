//! Gromov widths of symplectic toric manifolds built from graph
//! associahedra, together with exact polyhedral certificates for the value.
//!
//! The width of `M_G` is `min{k_i : k_i > 1} - 1`, where `k_i` counts the
//! connected induced subgraphs of `G` containing vertex `i`. Everything
//! else in the crate exists to check that number independently: the
//! nestohedron is built as an exact rational polytope, a diamond of
//! segments witnesses the lower bound, and a pair of parallel supporting
//! hyperplanes witnesses the upper bound.
//!
//! ```
//! use assocwidth::{gromov_width, Graph, Limits};
//!
//! let k4 = Graph::complete(4).unwrap();
//! assert_eq!(gromov_width(&k4, &Limits::default()).unwrap().width, 7);
//! ```

pub mod building_set;
pub mod error;
pub mod graph;
pub mod linalg;
pub mod polytope;
pub mod ser;
pub mod width;


pub use building_set::{BuildingSet, RestrictedBuildingSet, Validation, Violation};
pub use error::{Error, ErrorKind, Result};
pub use graph::{
    count_connected_subsets, count_k, enumerate_connected_subsets, Graph, KVector, Relabeling,
    VertexSet,
};
pub use linalg::Rational;
pub use polytope::{
    contains_segment, delzant_check, edges, enumerate_vertices_bruteforce,
    enumerate_vertices_nested, hrep, project, support_minkowski, vertices_from_nested,
    verify_edge_directions, Constraint, ConstraintLabel, EdgeDescriptor, HalfspaceSystem,
    Polytope, Sense,
};
pub use width::{
    certify, check_f_monotonic, check_k_inequality, check_parallel_facets_exist, gromov_width,
    lower_certificate, nestohedron_bounds, nonsqueezing_report, permutohedron_width,
    subgraph_monotonicity, upper_certificate, CertificationReport, CertifyOptions,
    ComponentCertificate, ComponentWidth, DiamondCertificate, MonotonicityReport,
    NestohedronBoundReport, NonsqueezingReport, ParallelFacetCertificate, PermutohedronReport,
    Segment, WidthResult,
};


/// Resource caps shared by enumeration and geometry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest vertex count for which `B(G)` is materialised.
    pub max_enum: usize,
    /// Largest vertex count for which `k_i` is counted.
    pub max_count: usize,
    /// Largest polytope dimension for vertex and edge enumeration.
    pub max_dim: usize,
    /// Largest number of constraint subsets the brute-force oracle visits.
    pub max_subsets: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_enum: 16,
            max_count: 20,
            max_dim: 8,
            max_subsets: 20_000_000,
        }
    }
}
