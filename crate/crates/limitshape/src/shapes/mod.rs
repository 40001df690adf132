//! The variational problem on a cylinder.
//!
//! Heights live on the nodes of a `nx × ny` grid on `[0, T] × [0, L)`, periodic in `y` up to
//! the monodromy. The action is integrated over the piecewise-linear interpolant on a
//! triangulation with two triangles per cell. Tangential slopes are prescribed at `x = 0`
//! and `x = T`; `h(0, 0) = 0` fixes the additive constant and the height offset of the far
//! end is free.

mod grid;
mod residual;
mod solver;

pub use grid::{BoundaryData, CylinderGrid, HeightField};
pub use residual::{derivatives, el_residual, facet_mask, ff_el_normalization, ff_el_residual, hex_el_residual, Derivatives, InteriorField};
pub use solver::{action, minimize_action, minimize_action_with, Solution, SolverOptions};
