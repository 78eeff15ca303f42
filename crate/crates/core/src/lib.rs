//! Weighted-graph operator algebra, coverings, non-normal spectral
//! membership and orbital graphs of group actions, checked on finite
//! instances.
//!
//! Graphs are the primary objects: [`WeightedGraph`] operations mirror
//! operator algebra, [`materialize`] turns a graph into its dense operator,
//! and [`membership_by_deficiency`] decides `λ ∈ σ(A)` through the two
//! positive operators `I − (A−λ)(A−λ)*/R²` and `I − (A−λ)*(A−λ)/R²`, which
//! is sound for non-normal `A`.

pub mod covering;
pub mod eigen;
pub mod error;
pub mod format;
pub mod graph;
pub mod operator;
pub mod orbital;
pub mod perm;
pub mod random;
pub mod spectra;

pub use num_complex::Complex64;

pub use covering::{
    induced_covering, spectral_inclusion_check, verify_covering, voltage_cover, CoverOp, CoveringMap, Violation,
    Voltages,
};
pub use error::{Error, Result};
pub use graph::{make_graph, Arc, Side, VertexId, WeightedGraph};
pub use operator::{
    materialize, norm_bound, shift_graph, ComplexMatrix, FinSuppVector, ShiftDirection, SparseOperator,
    StreamedGraph, DENSE_CAP,
};
pub use orbital::{
    ball, default_radius_bound, local_iso_check, orbital_graph, positive_element_graph, rayleigh_transfer,
    spectra_compare_orbits, GroupAction, GroupAlgebraElement, LabeledOrbitalGraph, MealyAutomaton, Word,
};
pub use perm::Permutation;
pub use spectra::{
    hausdorff_distance, membership_by_deficiency, shift_counterexample_report, spectrum, subset_check,
    MembershipVerdict, SpectralSet, WitnessSide,
};
