use super::matrix::Matrix;
use super::weights::{Regime, VertexWeights};

/// 4×4 R-matrix in the basis `e1⊗e1, e1⊗e2, e2⊗e1, e2⊗e2` (horizontal factor first).
///
/// `m[out][inp]` is the weight of the vertex with West/North state `inp` and East/South
/// state `out`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RMatrix4 {
    pub m: [[f64; 4]; 4],
}

impl RMatrix4 {
    /// Builds the matrix from raw weights; no positivity check, so analytic continuations are allowed.
    pub fn from_raw(a: f64, b: f64, c: f64, h: f64, v: f64) -> Self {
        let mut m = [[0.0; 4]; 4];
        m[0][0] = a * (h + v).exp();
        m[1][1] = b * (h - v).exp();
        m[1][2] = c;
        m[2][1] = c;
        m[2][2] = b * (v - h).exp();
        m[3][3] = a * (-h - v).exp();
        Self { m }
    }

    pub fn from_weights(w: &VertexWeights) -> Self {
        Self::from_raw(w.a, w.b, w.c, w.h, w.v)
    }

    /// Weight of a single vertex given its West, North, East and South edge states.
    #[inline]
    pub fn vertex(&self, west: u8, north: u8, east: u8, south: u8) -> f64 {
        self.m[(2 * east + south) as usize][(2 * west + north) as usize]
    }

    pub fn to_matrix(&self) -> Matrix {
        let rows: Vec<&[f64]> = self.m.iter().map(|r| r.as_slice()).collect();
        Matrix::from_rows(&rows)
    }

    pub fn scaled(&self, k: f64) -> Self {
        let mut m = self.m;
        m.iter_mut().flatten().for_each(|x| *x *= k);
        Self { m }
    }

    pub fn max_abs(&self) -> f64 {
        self.m.iter().flatten().fold(0.0, |acc, x| acc.max(x.abs()))
    }

    /// Divides by the entry of largest magnitude.
    pub fn normalized(&self) -> Self {
        let big = self.m.iter().flatten().copied().fold(0.0f64, |acc, x| if x.abs() > acc.abs() { x } else { acc });
        if big == 0.0 {
            *self
        } else {
            self.scaled(1.0 / big)
        }
    }

    pub fn max_abs_diff(&self, other: &RMatrix4) -> f64 {
        let mut d = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                d = d.max((self.m[i][j] - other.m[i][j]).abs());
            }
        }
        d
    }

    /// Positions of the nonzero entries.
    pub fn support(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..4 {
            for j in 0..4 {
                if self.m[i][j] != 0.0 {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

pub fn r_matrix(w: &VertexWeights) -> RMatrix4 {
    RMatrix4::from_weights(w)
}

/// The diagonal field matrix `D^x = diag(e^{x/2}, e^{-x/2})`.
pub fn diag_field(x: f64) -> [f64; 2] {
    [(x / 2.0).exp(), (-x / 2.0).exp()]
}

/// A one-parameter family `u ↦ R(u)` at fixed regime, `gamma` and scale, zero field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaxterFamily {
    pub regime: Regime,
    pub gamma: f64,
    pub r: f64,
}

impl BaxterFamily {
    pub fn new(regime: Regime, gamma: f64) -> Self {
        Self { regime, gamma, r: 1.0 }
    }

    pub fn r_matrix(&self, u: f64) -> RMatrix4 {
        let (a, b, c) = self.regime.abc(u, self.gamma);
        RMatrix4::from_raw(self.r * a, self.r * b, self.r * c, 0.0, 0.0)
    }
}

/// Embeds a two-site operator acting on factors `(i, j)` of `(C^2)^{⊗3}`.
fn embed(r: &RMatrix4, i: usize, j: usize) -> Matrix {
    let bit = |x: usize, k: usize| (x >> (2 - k)) & 1;
    let mut out = Matrix::zeros(8, 8);
    for col in 0..8 {
        let inp = 2 * bit(col, i) + bit(col, j);
        for o in 0..4 {
            let w = r.m[o][inp];
            if w == 0.0 {
                continue;
            }
            let mut row = col;
            for (k, val) in [(i, o >> 1), (j, o & 1)] {
                row = (row & !(1 << (2 - k))) | (val << (2 - k));
            }
            out[(row, col)] = w;
        }
    }
    out
}

/// Max-norm of `R12 R13 R23 − R23 R13 R12` for three arbitrary R-matrices.
pub fn yang_baxter_residual_mixed(r12: &RMatrix4, r13: &RMatrix4, r23: &RMatrix4) -> f64 {
    let (a, b, c) = (embed(r12, 0, 1), embed(r13, 0, 2), embed(r23, 1, 2));
    let lhs = a.matmul(&b).matmul(&c);
    let rhs = c.matmul(&b).matmul(&a);
    lhs.sub(&rhs).max_abs()
}

/// Max-norm of `R12(u)R13(u+v)R23(v) − R23(v)R13(u+v)R12(u)` within one family.
///
/// In the `u − γ` regimes (A2, B1) the additive equation holds for the gauge-equivalent
/// matrices with `c → −c` (conjugation by `σ^z` on one factor), which is what is checked there.
pub fn yang_baxter_residual(u: f64, v: f64, family: &BaxterFamily) -> f64 {
    let r = |x: f64| {
        let mut m = family.r_matrix(x);
        if matches!(family.regime, Regime::A2 | Regime::B1) {
            m.m[1][2] = -m.m[1][2];
            m.m[2][1] = -m.m[2][1];
        }
        m
    };
    yang_baxter_residual_mixed(&r(u), &r(u + v), &r(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn six_nonzero_entries() {
        let r = r_matrix(&VertexWeights::with_fields(1.2, 0.7, 0.9, 0.3, -0.4).unwrap());
        assert_eq!(r.support(), vec![(0, 0), (1, 1), (1, 2), (2, 1), (2, 2), (3, 3)]);
    }

    #[test]
    fn b_zero_is_a_scaled_swap() {
        let r = RMatrix4::from_raw(2.0, 0.0, 2.0, 0.0, 0.0);
        let swap = [[1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0]];
        assert_eq!(r.m.map(|row| row.map(|x| x / 2.0)), swap);
    }

    #[test]
    fn field_factorization() {
        let (h, v) = (0.37, -0.81);
        let r0 = RMatrix4::from_raw(1.1, 0.6, 1.3, 0.0, 0.0);
        let r = RMatrix4::from_raw(1.1, 0.6, 1.3, h, v);
        let (dh, dv) = (diag_field(h), diag_field(v));
        for i in 0..4 {
            for j in 0..4 {
                let di = dh[i >> 1] * dv[i & 1];
                let dj = dh[j >> 1] * dv[j & 1];
                assert!((r.m[i][j] - di * r0.m[i][j] * dj).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn diagonal_commutation() {
        let r = RMatrix4::from_raw(1.1, 0.6, 1.3, 0.2, 0.1);
        let d = [0.3, 1.7];
        let dd = |i: usize| d[i >> 1] * d[i & 1];
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(dd(i) * r.m[i][j], r.m[i][j] * dd(j));
            }
        }
    }

    #[test]
    fn ybe_examples() {
        let fam = BaxterFamily::new(Regime::A1, 0.5);
        assert!(yang_baxter_residual(0.3, 0.4, &fam) <= 1e-12);
        // R(0) is a multiple of the swap; only the association of the triple products differs
        let b2 = BaxterFamily::new(Regime::B2, PI / 3.0);
        assert!(yang_baxter_residual(0.0, 0.4, &b2) <= 4.0 * f64::EPSILON);
        let g9 = BaxterFamily::new(Regime::A1, 0.9);
        let mixed = yang_baxter_residual_mixed(&fam.r_matrix(0.3), &g9.r_matrix(0.7), &fam.r_matrix(0.4));
        assert!(mixed > 1e-3, "{mixed}");
    }
}
