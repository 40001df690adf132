//! The Hamiltonian picture on the cylinder, with `x` as time.
//!
//! A state is a pair of periodic profiles `p(y)` and `t(y) = ∂_y h(y)`, combined into the
//! complex coordinate `l = p + iπt`. The Hamiltonian density is the partial Legendre transform
//! `τ` of a surface tension. For dimer tensions the flow is the complex Burgers equation
//! `∂_x l = F(eˡ) ∂_y l`, solved here by characteristics, and the moments `I_n = ∫ lⁿ dy`
//! are conserved.

mod burgers;
mod closed;
mod hamilton;
mod poisson;
mod state;

pub use burgers::{burgers_evolve, burgers_from_curve, BurgersFunction, BurgersKind, BurgersSolver, CharacteristicSign};
pub use closed::{ff_momentum_shift, hamiltonian_ff, hamiltonian_hex};
pub use hamilton::{hamilton_evolve, hamilton_evolve_with, hamiltonian, FlowOptions, HamiltonianDensity, Trajectory};
pub use poisson::{poisson_bracket_residual, PoissonGrid, PoissonResidual};
pub use state::{conserved_in, conserved_in_bar, FlowState};
