//! Free energies, surface tensions and Legendre transforms.
//!
//! Slopes `(s, t)` are dual to fields `(H, V)`: `s = ∂_H f`, `t = ∂_V f`, where the free
//! energy `f` is the torus average of `log|P|` for a spectral curve `P(z, w)` with
//! `|z| = e^H`, `|w| = e^V`.

pub(crate) mod free_energy;
mod partial;
pub mod quadrature;
mod sigma;
mod special;

pub use free_energy::{free_energy, free_energy_trapezoid, grad_free_energy_ff, FreeEnergyField};
pub use partial::{hess_spectral_independence, hessian_determinant, partial_legendre, PartialLegendre};
pub use sigma::{
    ff_round_trip, grad_sigma_ff, grad_sigma_hex, hess_sigma_ff, hess_sigma_hex, legendre_conjugate, legendre_sigma,
    legendre_sigma_from, sigma_hex, FreeFermionTension, HexTension, LegendreResult, NewtonPolygon, NumericTension,
    QuadraticTension, SurfaceTension, TensionVariant, SLOPE_INSET,
};
pub use special::{clausen, dilog, lobachevsky};
