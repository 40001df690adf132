use super::matrix::Matrix;
use super::rmatrix::RMatrix4;
use super::weights::VertexWeights;
use crate::{Error, Result};

/// Largest state-space dimension stored densely.
pub const MAX_DENSE_ROWS: usize = 1 << 12;
const MAX_MATRIX_FREE_ROWS: usize = 20;

/// Occupation of the `N` horizontal edges crossing a vertical slice; bit `i` is row `i`,
/// counted from the bottom.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BoundaryWord {
    pub bits: Vec<bool>,
}

impl BoundaryWord {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn from_index(index: usize, n: usize) -> Self {
        Self { bits: (0..n).map(|i| (index >> i) & 1 == 1).collect() }
    }

    pub fn index(&self) -> usize {
        self.bits.iter().enumerate().map(|(i, &b)| (b as usize) << i).sum()
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn occupied(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Occupied minus empty edges.
    pub fn magnetization(&self) -> i64 {
        2 * self.occupied() as i64 - self.bits.len() as i64
    }
}

/// One magnetization sector of a transfer operator.
#[derive(Debug, Clone)]
pub struct SectorBlock {
    pub occupied: usize,
    pub states: Vec<usize>,
    pub matrix: Matrix,
}

/// Column-to-column transfer operator, stored block-diagonally by magnetization sector.
#[derive(Debug, Clone)]
pub struct TransferOperator {
    n: usize,
    weights: VertexWeights,
    blocks: Vec<SectorBlock>,
    position: Vec<usize>,
}

/// Calls `emit(output, weight)` for every nonzero transfer entry in the column of `input`.
fn column(n: usize, r: &RMatrix4, input: usize, mut emit: impl FnMut(usize, f64)) {
    // (row about to be processed, auxiliary state entering it, output so far, weight)
    let mut stack: Vec<(usize, u8, usize, f64, u8)> = Vec::with_capacity(2 * n + 2);
    for a0 in 0..2u8 {
        stack.push((n, a0, 0, 1.0, a0));
        while let Some((row, aux, out, w, start)) = stack.pop() {
            if row == 0 {
                if aux == start {
                    emit(out, w);
                }
                continue;
            }
            let i = row - 1;
            let h = ((input >> i) & 1) as u8;
            let col = (2 * h + aux) as usize;
            for o in 0..4usize {
                let x = r.m[o][col];
                if x != 0.0 {
                    let (eh, south) = (o >> 1, (o & 1) as u8);
                    stack.push((i, south, out | (eh << i), w * x, start));
                }
            }
        }
    }
}

fn sector_positions(n: usize) -> (Vec<Vec<usize>>, Vec<usize>) {
    let mut sectors = vec![Vec::new(); n + 1];
    let mut position = vec![0; 1 << n];
    for s in 0..(1usize << n) {
        let k = s.count_ones() as usize;
        position[s] = sectors[k].len();
        sectors[k].push(s);
    }
    (sectors, position)
}

/// Dense (sector-blocked) transfer operator `Tr_a R_{1a} ⋯ R_{Na}` on `N` rows.
pub fn transfer(n: usize, w: &VertexWeights) -> Result<TransferOperator> {
    if n == 0 {
        return Err(Error::Domain("transfer operator needs at least one row".into()));
    }
    if n > 12 || (1usize << n) > MAX_DENSE_ROWS {
        return Err(Error::TooLarge(format!("dense transfer operator with N = {n} exceeds N <= 12")));
    }
    let r = RMatrix4::from_weights(w);
    let (sectors, position) = sector_positions(n);
    let blocks = sectors
        .into_iter()
        .enumerate()
        .map(|(k, states)| {
            let mut matrix = Matrix::zeros(states.len(), states.len());
            for (j, &s) in states.iter().enumerate() {
                column(n, &r, s, |out, x| {
                    debug_assert_eq!(out.count_ones() as usize, k);
                    matrix[(position[out], j)] += x;
                });
            }
            SectorBlock { occupied: k, states, matrix }
        })
        .collect();
    Ok(TransferOperator { n, weights: *w, blocks, position })
}

/// Matrix-free application of the transfer operator to a full state vector.
pub fn apply_transfer(n: usize, w: &VertexWeights, x: &[f64]) -> Result<Vec<f64>> {
    if n == 0 || n > MAX_MATRIX_FREE_ROWS {
        return Err(Error::TooLarge(format!("matrix-free transfer supports 1 <= N <= {MAX_MATRIX_FREE_ROWS}")));
    }
    if x.len() != 1 << n {
        return Err(Error::Shape(format!("vector length {} != 2^{n}", x.len())));
    }
    let r = RMatrix4::from_weights(w);
    let mut y = vec![0.0; x.len()];
    for (s, &xs) in x.iter().enumerate() {
        if xs != 0.0 {
            column(n, &r, s, |out, t| y[out] += t * xs);
        }
    }
    Ok(y)
}

impl TransferOperator {
    pub fn n_rows(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn weights(&self) -> &VertexWeights {
        &self.weights
    }

    pub fn blocks(&self) -> &[SectorBlock] {
        &self.blocks
    }

    /// Entry `⟨out| t |inp⟩`.
    pub fn entry(&self, out: usize, inp: usize) -> f64 {
        let (ko, ki) = (out.count_ones(), inp.count_ones());
        if ko != ki {
            return 0.0;
        }
        self.blocks[ko as usize].matrix[(self.position[out], self.position[inp])]
    }

    pub fn to_dense(&self) -> Matrix {
        let d = self.dim();
        let mut m = Matrix::zeros(d, d);
        for b in &self.blocks {
            for (i, &si) in b.states.iter().enumerate() {
                for (j, &sj) in b.states.iter().enumerate() {
                    m[(si, sj)] = b.matrix[(i, j)];
                }
            }
        }
        m
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim());
        let mut y = vec![0.0; x.len()];
        for b in &self.blocks {
            let xb: Vec<f64> = b.states.iter().map(|&s| x[s]).collect();
            for (&s, v) in b.states.iter().zip(b.matrix.matvec(&xb)) {
                y[s] = v;
            }
        }
        y
    }

    /// `⟨out| t^m |inp⟩`, computed inside the sector of `inp`.
    pub fn power_entry(&self, m: usize, out: usize, inp: usize) -> f64 {
        let k = inp.count_ones() as usize;
        if out.count_ones() as usize != k {
            return 0.0;
        }
        let b = &self.blocks[k];
        let mut v = vec![0.0; b.states.len()];
        v[self.position[inp]] = 1.0;
        for _ in 0..m {
            v = b.matrix.matvec(&v);
        }
        v[self.position[out]]
    }

    pub fn trace_power(&self, m: u32) -> f64 {
        self.blocks.iter().map(|b| b.matrix.pow(m).trace()).sum()
    }
}

/// `‖t1 t2 − t2 t1‖_max / max(‖t1 t2‖_max, tiny)`, evaluated sector by sector.
pub fn commutator_residual(t1: &TransferOperator, t2: &TransferOperator) -> Result<f64> {
    if t1.n != t2.n {
        return Err(Error::Shape(format!("transfer operators on {} and {} rows", t1.n, t2.n)));
    }
    let (mut num, mut den) = (0.0f64, 0.0f64);
    for (a, b) in t1.blocks.iter().zip(&t2.blocks) {
        let ab = a.matrix.matmul(&b.matrix);
        let ba = b.matrix.matmul(&a.matrix);
        num = num.max(ab.sub(&ba).max_abs());
        den = den.max(ab.max_abs());
    }
    Ok(num / den.max(f64::MIN_POSITIVE))
}

/// `⟨ψ_{η1}, t^M ψ_{η2}⟩` on an `M`-column cylinder with left boundary `η2` and right boundary `η1`.
pub fn cylinder_partition(
    m: usize,
    n: usize,
    w: &VertexWeights,
    eta1: &BoundaryWord,
    eta2: &BoundaryWord,
) -> Result<f64> {
    if m == 0 {
        return Err(Error::Domain("cylinder needs at least one column".into()));
    }
    if eta1.len() != n || eta2.len() != n {
        return Err(Error::Shape(format!("boundary words must have length {n}")));
    }
    if eta1.occupied() != eta2.occupied() {
        return Ok(0.0);
    }
    if n <= 12 {
        return Ok(transfer(n, w)?.power_entry(m, eta1.index(), eta2.index()));
    }
    let mut v = vec![0.0; 1 << n];
    v[eta2.index()] = 1.0;
    for _ in 0..m {
        v = apply_transfer(n, w, &v)?;
    }
    Ok(v[eta1.index()])
}

/// Exponent `κ` with `Z(H) = Z(0) e^{κ H}` for the cylinder partition function.
///
/// Each vertex carries `D^H` on both horizontal legs, so every column contributes
/// `e^{-H m(η)}` and `κ = −M m(η)`.
pub fn cylinder_field_exponent(m: usize, eta: &BoundaryWord) -> f64 {
    -(m as f64) * eta.magnetization() as f64
}

/// `Tr t^M` on an `M × N` torus.
pub fn torus_partition(m: usize, n: usize, w: &VertexWeights) -> Result<f64> {
    if m == 0 {
        return Err(Error::Domain("torus needs at least one column".into()));
    }
    let exp = u32::try_from(m).map_err(|_| Error::TooLarge(format!("M = {m}")))?;
    Ok(transfer(n, w)?.trace_power(exp))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ff(u: f64) -> VertexWeights {
        VertexWeights::free_fermion(u).unwrap()
    }

    #[test]
    fn single_row_is_diagonal() {
        let w = VertexWeights::with_fields(1.3, 0.4, 0.8, 0.2, -0.3).unwrap();
        let t = transfer(1, &w).unwrap().to_dense();
        assert_eq!(t[(0, 1)], 0.0);
        assert_eq!(t[(1, 0)], 0.0);
        let r = RMatrix4::from_weights(&w);
        assert!((t[(0, 0)] - (r.m[0][0] + r.m[1][1])).abs() < 1e-15);
        assert!((t[(1, 1)] - (r.m[2][2] + r.m[3][3])).abs() < 1e-15);
    }

    #[test]
    fn free_fermion_transfer_matrices_commute() {
        let (t1, t2) = (transfer(3, &ff(0.3)).unwrap(), transfer(3, &ff(0.7)).unwrap());
        assert!(commutator_residual(&t1, &t2).unwrap() <= 1e-12);
        assert_eq!(commutator_residual(&t1, &t1).unwrap(), 0.0);
    }

    #[test]
    fn different_delta_does_not_commute() {
        let w1 = VertexWeights::new(1.0, 1.0, 1.0).unwrap();
        let w2 = VertexWeights::new(2.0, 1.0, 1.0).unwrap();
        // with three rows every sector is cyclic under translation, so even these commute
        let r3 = commutator_residual(&transfer(3, &w1).unwrap(), &transfer(3, &w2).unwrap()).unwrap();
        assert!(r3 < 1e-14);
        let r4 = commutator_residual(&transfer(4, &w1).unwrap(), &transfer(4, &w2).unwrap()).unwrap();
        assert!(r4 > 1e-3, "{r4}");
    }

    #[test]
    fn torus_one_by_one() {
        let w = VertexWeights::new(1.3, 0.4, 0.8).unwrap();
        assert!((torus_partition(1, 1, &w).unwrap() - 2.0 * (1.3 + 0.4)).abs() < 1e-15);
    }

    #[test]
    fn sectors_do_not_mix() {
        let w = VertexWeights::new(1.0, 1.0, 1.0).unwrap();
        let z = cylinder_partition(2, 3, &w, &BoundaryWord::new(vec![true, false, false]), &BoundaryWord::new(vec![true, true, false]))
            .unwrap();
        assert_eq!(z, 0.0);
    }

    #[test]
    fn matrix_free_matches_dense() {
        let w = VertexWeights::with_fields(1.1, 0.7, 0.9, 0.1, 0.2).unwrap();
        let t = transfer(5, &w).unwrap();
        let x: Vec<f64> = (0..32).map(|i| ((i * 7 % 11) as f64).sin()).collect();
        let (a, b) = (t.apply(&x), apply_transfer(5, &w, &x).unwrap());
        for (p, q) in a.iter().zip(&b) {
            assert!((p - q).abs() < 1e-13);
        }
        assert!(matches!(transfer(13, &w), Err(Error::TooLarge(_))));
    }
}
