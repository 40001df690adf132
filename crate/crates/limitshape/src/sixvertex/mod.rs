//! Exact finite-size six-vertex model.
//!
//! Conventions used throughout the module:
//!
//! * An edge state is `0` (empty, basis vector `e1`) or `1` (occupied by a path, `e2`).
//! * A vertex reads its West and North edges and writes its East and South edges, so paths
//!   run rightwards and downwards and the ice rule is `W + N = E + S`.
//! * The first tensor factor of an R-matrix is horizontal, the second vertical, and the
//!   two-edge basis index is `2 * horizontal + vertical`.

mod fivevertex;
mod height;
mod lattice;
mod matrix;
mod rmatrix;
mod transfer;
mod weights;

pub use fivevertex::{convergence_gap, five_vertex_finite_r, five_vertex_limit_r, FiveVertexCase, FiveVertexParams};
pub use height::{height_to_state, state_to_height, HeightDomain, LatticeHeight};
pub use lattice::{enumerate_states, state_weight, Domain, DomainKind, SixVertexState, VertexPorts, MAX_ENUMERATION_EDGES};
pub use matrix::Matrix;
pub use rmatrix::{diag_field, r_matrix, yang_baxter_residual, yang_baxter_residual_mixed, BaxterFamily, RMatrix4};
pub use transfer::{
    commutator_residual, cylinder_partition, cylinder_field_exponent, torus_partition, transfer, BoundaryWord,
    TransferOperator, MAX_DENSE_ROWS,
};
pub use weights::{anisotropy_delta, weights_from_baxter, BaxterParam, Regime, VertexWeights};
