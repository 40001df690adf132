use crate::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

const MAX_INTERVALS: usize = 4000;

fn gk15<F: FnMut(f64) -> Result<f64>>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64)> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let x = h * XGK[i];
        let s = f(c - x)? + f(c + x)?;
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    Ok((k * h, ((k - g) * h).abs()))
}

/// Adaptive 7/15-point Gauss–Kronrod quadrature to absolute tolerance `tol`.
pub fn integrate<F: FnMut(f64) -> Result<f64>>(mut f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let (k, e) = gk15(&mut f, a, b)?;
    let mut parts = vec![(a, b, k, e)];
    for _ in 0..MAX_INTERVALS {
        let total_err: f64 = parts.iter().map(|p| p.3).sum();
        if total_err <= tol {
            break;
        }
        let (i, _) = parts.iter().enumerate().fold((0, -1.0), |best, (i, p)| if p.3 > best.1 { (i, p.3) } else { best });
        let (pa, pb, _, _) = parts.swap_remove(i);
        let m = 0.5 * (pa + pb);
        if m <= pa || m >= pb {
            break;
        }
        let (k1, e1) = gk15(&mut f, pa, m)?;
        let (k2, e2) = gk15(&mut f, m, pb)?;
        parts.push((pa, m, k1, e1));
        parts.push((m, pb, k2, e2));
    }
    let total_err: f64 = parts.iter().map(|p| p.3).sum();
    if !total_err.is_finite() || total_err > tol.max(1e-9) {
        return Err(Error::NonConvergence { iterations: MAX_INTERVALS, residual: total_err });
    }
    parts.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(parts.iter().map(|p| p.2).sum())
}
