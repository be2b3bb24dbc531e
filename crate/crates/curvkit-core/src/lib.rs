//! Curvature toolkit for weighted undirected graphs.
//!
//! Two edge-curvature notions are implemented side by side: effective-resistance
//! curvature (node curvature `p_i = 1 - (1/2) Σ c_ij w_ij` over incident edges,
//! edge curvature `k_ij = 2(p_i + p_j) / w_ij`, with `w_ij` the effective
//! resistance) and Ollivier-Ricci curvature (`κ = 1 - W1(μ_u, μ_v) / d(u, v)`
//! with lazy neighbor distributions and exact optimal transport).
//!
//! The fast resistance path inverts the perturbed Laplacian `L + εI`; the
//! [`oracles`] module carries slow spectral reference computations
//! (pseudoinverse resistance, matrix exponentials, brute-force W1) that every
//! fast path is validated against, and [`verify`] packages those checks into a
//! runnable suite.

pub mod analysis;
pub mod bench;
pub mod generators;
pub mod graph;
pub mod matrix;
pub mod ollivier;
pub mod oracles;
pub mod propagation;
pub mod resistance;
pub mod transport;
pub mod verify;

pub use graph::{load_edge_list, load_tu_dataset, serialize_edge_list, Cost, Edge, Graph, GraphError};
pub use matrix::{MatrixError, SymMatrix};
pub use ollivier::{DiscreteDistribution, Metric, OrCurvature};
pub use resistance::{ResistanceCurvature, SolveMode, SolverTag};
