use crate::tension::dilog;
use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

fn two_pi_i() -> Complex64 {
    Complex64::new(0.0, 2.0 * PI)
}

/// `(Li₂(eˡ) − Li₂(e^l̄)) / 2πi`.
pub fn hamiltonian_hex(l: Complex64) -> Result<Complex64> {
    Ok((dilog(l.exp())? - dilog(l.conj().exp())?) / two_pi_i())
}

fn ff_half(l: Complex64, tan: f64, cot: f64) -> Result<Complex64> {
    let z = l.exp();
    Ok(dilog(z * tan)? - dilog(-z * cot)?)
}

/// `((Li₂(eˡ tan u) − Li₂(−eˡ cot u)) − (Li₂(e^l̄ tan u) − Li₂(−e^l̄ cot u))) / 2πi`.
pub fn hamiltonian_ff(l: Complex64, u: f64) -> Result<Complex64> {
    if !(u > 0.0 && u < PI / 2.0) {
        return Err(Error::Domain(format!("spectral parameter {u} outside (0, π/2)")));
    }
    let (tan, cot) = (u.tan(), 1.0 / u.tan());
    Ok((ff_half(l, tan, cot)? - ff_half(l.conj(), tan, cot)?) / two_pi_i())
}

/// The momentum translation `log(sin 2u / 2)` under which [`hamiltonian_ff`] tends to
/// [`hamiltonian_hex`] as `u → π/2`.
pub fn ff_momentum_shift(u: f64) -> f64 {
    (0.5 * (2.0 * u).sin()).ln()
}
