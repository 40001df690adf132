//! Limit shapes of the six-vertex model at the free-fermion point and of dimer models.
//!
//! The crate is split along the mathematical objects:
//!
//! * [`sixvertex`]: R-matrices, Yang-Baxter checks, transfer matrices, exact enumeration,
//!   height functions and the five-vertex limits.
//! * [`dimers`]: bipartite graphs, perfect matchings, characteristic polynomials of toric
//!   fundamental domains and the dimer-city map to six-vertex weights.
//! * [`tension`]: special functions, free energy by torus quadrature, surface tensions and
//!   their Legendre transforms.
//! * [`shapes`]: the discretized variational problem on a cylinder.
//! * [`flow`]: the Hamiltonian picture, complex Burgers characteristics and conserved
//!   quantities.
//! * [`suites`]: verification batteries with pinned tolerances.

pub mod dimers;
pub mod error;
pub mod flow;
pub mod shapes;
pub mod sixvertex;
pub mod suites;
pub mod tension;

pub use error::{Error, Result};
