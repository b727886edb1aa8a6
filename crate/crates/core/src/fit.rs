//! Small curve fits used by the deficit expansions.

use crate::linalg::least_squares;
use crate::{Error, Result};

/// Linear model fitted for a fixed nonlinear exponent.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearFit {
    pub coefficients: Vec<f64>,
    /// Weighted RMS residual.
    pub rms: f64,
}

/// Weighted least squares `Σ wᵢ (yᵢ − Σⱼ cⱼ φⱼ(xᵢ))²` with `φ` given row by row.
pub fn linear_fit(
    x: &[f64],
    y: &[f64],
    w: &[f64],
    basis: impl Fn(f64) -> Vec<f64>,
) -> Result<LinearFit> {
    if x.len() != y.len() || x.len() != w.len() {
        return Err(Error::structural("fit arrays differ in length"));
    }
    let rows: Vec<Vec<f64>> = x.iter().map(|&xi| basis(xi)).collect();
    let k = rows.first().map_or(0, |r| r.len());
    if x.len() < k || k == 0 {
        return Err(Error::FitQuality(format!(
            "{} samples for {k} parameters",
            x.len()
        )));
    }
    let sw: Vec<f64> = w.iter().map(|v| v.sqrt()).collect();
    let cols: Vec<Vec<f64>> = (0..k)
        .map(|j| rows.iter().zip(&sw).map(|(r, s)| r[j] * s).collect())
        .collect();
    let b: Vec<f64> = y.iter().zip(&sw).map(|(v, s)| v * s).collect();
    let coefficients = least_squares(&cols, &b)
        .ok_or_else(|| Error::FitQuality("rank-deficient design".into()))?;
    let ss: f64 = rows
        .iter()
        .zip(y)
        .zip(w)
        .map(|((r, yi), wi)| {
            let model: f64 = r.iter().zip(&coefficients).map(|(a, c)| a * c).sum();
            wi * (yi - model) * (yi - model)
        })
        .sum();
    Ok(LinearFit {
        coefficients,
        rms: (ss / x.len() as f64).sqrt(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExponentFit {
    pub exponent: f64,
    pub coefficients: Vec<f64>,
    pub rms: f64,
}

/// Variable projection over one exponent `q ∈ [lo, hi]`: the linear coefficients are
/// eliminated by least squares and the residual is minimized in `q` by a grid scan
/// followed by golden-section refinement.
pub fn exponent_fit(
    x: &[f64],
    y: &[f64],
    w: &[f64],
    lo: f64,
    hi: f64,
    basis: impl Fn(f64, f64) -> Vec<f64>,
) -> Result<ExponentFit> {
    let eval = |q: f64| linear_fit(x, y, w, |xi| basis(q, xi)).map(|f| f.rms).unwrap_or(f64::INFINITY);
    const SCAN: usize = 200;
    let step = (hi - lo) / SCAN as f64;
    let mut best = (lo, eval(lo));
    for i in 1..=SCAN {
        let q = lo + i as f64 * step;
        let r = eval(q);
        if r < best.1 {
            best = (q, r);
        }
    }
    let (mut a, mut b) = ((best.0 - step).max(lo), (best.0 + step).min(hi));
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (eval(c), eval(d));
    while b - a > 1e-10 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = eval(d);
        }
    }
    let q = if fc < best.1.min(fd) {
        c
    } else if fd < best.1 {
        d
    } else {
        best.0
    };
    let fit = linear_fit(x, y, w, |xi| basis(q, xi))?;
    Ok(ExponentFit {
        exponent: q,
        coefficients: fit.coefficients,
        rms: fit.rms,
    })
}

/// Straight-line fit of `ln|y|` against `ln x`: returns `(q, A)` with `y ≈ A xᵠ`.
pub fn power_law_fit(x: &[f64], y: &[f64]) -> Result<(f64, f64, f64)> {
    if y.contains(&0.0) || !(y.iter().all(|&v| v > 0.0) || y.iter().all(|&v| v < 0.0)) {
        return Err(Error::FitQuality("power law needs samples of one strict sign".into()));
    }
    let sign = y[0].signum();
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.abs().ln()).collect();
    let fit = linear_fit(&lx, &ly, &vec![1.0; x.len()], |t| vec![1.0, t])?;
    Ok((fit.coefficients[1], sign * fit.coefficients[0].exp(), fit.rms))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_power_law() {
        let x: Vec<f64> = (0..6).map(|k| 0.1 / 2f64.powi(k)).collect();
        let y: Vec<f64> = x.iter().map(|v| -3.5 * v.powf(2.2)).collect();
        let (q, a, rms) = power_law_fit(&x, &y).unwrap();
        assert!((q - 2.2).abs() < 1e-12 && (a + 3.5).abs() < 1e-10 && rms < 1e-12);
        assert!(power_law_fit(&x, &[1.0, -1.0, 1.0, 1.0, 1.0, 1.0]).is_err());
    }

    #[test]
    fn variable_projection_with_remainder() {
        let x: Vec<f64> = (0..6).map(|k| 0.1 / 2f64.powi(k)).collect();
        let y: Vec<f64> = x.iter().map(|e| -900.0 * e * e + 40.0 * e.powi(3) + 7.0 * e.powi(5)).collect();
        let yy: Vec<f64> = y.iter().zip(&x).map(|(v, e)| v / (e * e)).collect();
        let w = vec![1.0; x.len()];
        let fit = exponent_fit(&x, &yy, &w, 1.5, 2.5, |q, e| vec![e.powf(q - 2.0), e, e.powi(3)]).unwrap();
        assert!((fit.exponent - 2.0).abs() < 1e-6, "{fit:?}");
        assert!((fit.coefficients[0] + 900.0).abs() < 1e-3);
    }

    #[test]
    fn underdetermined_is_fit_quality() {
        assert!(matches!(
            linear_fit(&[1.0], &[1.0], &[1.0], |t| vec![1.0, t]),
            Err(Error::FitQuality(_))
        ));
    }
}
