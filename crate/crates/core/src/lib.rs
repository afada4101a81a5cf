//! Graph polynomials of Feynman-type multigraphs, exact point counts of their
//! hypersurfaces over prime fields, and the Grothendieck-class statements
//! those counts shadow.

pub mod count;
pub mod error;
pub mod family;
pub mod field;
pub mod graph;
pub mod io;
pub mod motive;
pub mod poly;
pub mod symanzik;
pub mod verify;

pub use count::{
    count_brute, count_fibered, count_fibered_last, count_projective, count_with, count_z,
    pair_census, CountOptions, CountRecord, Method, PairCensus, DEFAULT_BUDGET,
};
pub use error::{Error, Result};
pub use family::{catalog, generate_family, CatalogEntry, Family, FamilySpec};
pub use field::Prime;
pub use io::{parse_graph, to_edge_list};
pub use graph::{Edge, EdgeCensus, EdgeKind, Multigraph};
pub use poly::MultilinearPoly;
pub use symanzik::{psi_by_deletion_contraction, psi_by_matrix_tree, psi_by_trees};
pub use motive::{
    hodge_form, interpolate_counts, predicted_sb_constant, Checker, ClassOutcome, ClassPoly,
    CongruenceVerdict, HodgeSplit, Observation, Theorem,
};
pub use verify::{run_verify, VerifyConfig, VerifyReport};
