use std::io::Write;

use super::integrals::energy_deficit;
use super::sobolev_constant;
use crate::fit::{exponent_fit, linear_fit, power_law_fit};
use crate::quad::{integrate, QuadOptions};
use crate::{sphere_measure, Error, Result};

/// `‖η′‖_∞` of the quintic cutoff.
pub const CUTOFF_GRADIENT_SUP: f64 = 1.875;

/// Fit of the energy deficit `E(ε) − S^{n/2}` of cut bubbles.
#[derive(Clone, Debug, PartialEq)]
pub struct DeficitFit {
    pub n: usize,
    pub lambda: f64,
    pub mu: f64,
    pub eps_list: Vec<f64>,
    pub energies: Vec<f64>,
    pub deficits: Vec<f64>,
    pub model_values: Vec<f64>,
    pub fitted_exponent: f64,
    /// Coefficient of the leading term (`ε^q`, or `ε²|ln ε|` in four dimensions).
    pub fitted_constant: f64,
    /// RMS misfit of the scaled deficits relative to `|fitted_constant|`; for
    /// `λ = 0` the RMS misfit of the log-log line.
    pub residual: f64,
}

impl DeficitFit {
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "eps,energy,deficit,model_value")?;
        for i in 0..self.eps_list.len() {
            writeln!(
                w,
                "{},{},{},{}",
                self.eps_list[i], self.energies[i], self.deficits[i], self.model_values[i]
            )?;
        }
        writeln!(
            w,
            "# lambda={},fitted_exponent={},fitted_constant={},residual={}",
            self.lambda, self.fitted_exponent, self.fitted_constant, self.residual
        )?;
        Ok(())
    }
}

/// Maximum relative misfit accepted before a fit is reported as unreliable.
const FIT_TOLERANCE: f64 = 1e-2;
/// Same for the one-term power laws, measured as RMS of `ln|D|`.
const POWER_LAW_TOLERANCE: f64 = 5e-2;

fn check_eps(eps_list: &[f64], mu: f64) -> Result<()> {
    if eps_list.len() < 4 {
        return Err(Error::FitQuality(format!(
            "need at least 4 values of eps, got {}",
            eps_list.len()
        )));
    }
    if !(mu > 0.0) {
        return Err(Error::domain("cutoff radius must be positive"));
    }
    if eps_list.iter().any(|&e| !(e > 0.0)) || eps_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::precondition("eps list must be positive and strictly decreasing"));
    }
    if eps_list[0] > mu / 4.0 {
        return Err(Error::precondition(format!(
            "largest eps {} exceeds mu/4 = {}",
            eps_list[0],
            mu / 4.0
        )));
    }
    Ok(())
}

fn deficits(n: usize, lambda: f64, mu: f64, eps_list: &[f64], opts: QuadOptions) -> Result<Vec<f64>> {
    let one = |e: f64| energy_deficit(n, lambda, mu, e, opts);
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        eps_list.par_iter().map(|&e| one(e)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    eps_list.iter().map(|&e| one(e)).collect()
}

fn quality(fit: &DeficitFit) -> Result<()> {
    let tol = if fit.lambda == 0.0 { POWER_LAW_TOLERANCE } else { FIT_TOLERANCE };
    if !fit.residual.is_finite() || fit.residual > tol {
        return Err(Error::FitQuality(format!(
            "relative misfit {:e} exceeds {tol:e}",
            fit.residual
        )));
    }
    Ok(())
}

/// Deficit law `A εᵠ` for `n ≥ 5`.
///
/// For `λ ≠ 0` the deficits divided by `ε²` are fitted by variable projection against
/// `A ε^{q−2} + ε^{n−4}(B₀ + B₁ε²)`, so the known `O(ε^{n−2})` remainder does not bias
/// `q`. For `λ = 0` only the remainder is left and a plain power law is fitted.
pub fn deficit_expansion(n: usize, lambda: f64, mu: f64, eps_list: &[f64]) -> Result<DeficitFit> {
    deficit_expansion_with(n, lambda, mu, eps_list, QuadOptions::default())
}

pub fn deficit_expansion_with(
    n: usize,
    lambda: f64,
    mu: f64,
    eps_list: &[f64],
    opts: QuadOptions,
) -> Result<DeficitFit> {
    if !(5..=8).contains(&n) {
        return Err(Error::Unsupported(format!(
            "deficit expansion is implemented for 5 <= n <= 8, got {n}"
        )));
    }
    check_eps(eps_list, mu)?;
    let s = sobolev_constant(n)?.powf(n as f64 / 2.0);
    let d = deficits(n, lambda, mu, eps_list, opts)?;
    let energies: Vec<f64> = d.iter().map(|v| s + v).collect();

    let fit = if lambda == 0.0 {
        let (q, a, rms) = power_law_fit(eps_list, &d)?;
        DeficitFit {
            n,
            lambda,
            mu,
            eps_list: eps_list.to_vec(),
            energies,
            model_values: eps_list.iter().map(|e| a * e.powf(q)).collect(),
            deficits: d,
            fitted_exponent: q,
            fitted_constant: a,
            residual: rms,
        }
    } else {
        let y: Vec<f64> = d.iter().zip(eps_list).map(|(v, e)| v / (e * e)).collect();
        let w = vec![1.0; y.len()];
        let m = (n - 4) as i32;
        let basis = |q: f64, e: f64| vec![e.powf(q - 2.0), e.powi(m), e.powi(m + 2)];
        let f = exponent_fit(eps_list, &y, &w, 1.0, (n - 2) as f64 - 0.05, basis)?;
        let c = &f.coefficients;
        let a = c[0];
        DeficitFit {
            n,
            lambda,
            mu,
            eps_list: eps_list.to_vec(),
            energies,
            model_values: eps_list
                .iter()
                .map(|&e| a * e.powf(f.exponent) + e.powi(n as i32 - 2) * (c[1] + c[2] * e * e))
                .collect(),
            deficits: d,
            fitted_exponent: f.exponent,
            fitted_constant: a,
            residual: f.rms / a.abs(),
        }
    };
    quality(&fit)?;
    Ok(fit)
}

/// `φ(R) = ∫_{|x|<R} (1+|x|²)⁻² dx` in four dimensions.
pub fn phi(radius: f64) -> f64 {
    let omega = sphere_measure(4);
    omega
        * integrate(
            |r| r.powi(3) / ((1.0 + r * r) * (1.0 + r * r)),
            0.0,
            radius,
            &crate::quad::log_breakpoints(1.0, 30),
            QuadOptions::with_rel_tol(1e-12),
        )
        .value
}

/// Four-dimensional deficit analysis.
#[derive(Clone, Debug, PartialEq)]
pub struct Deficit4d {
    /// Fit against `A ε²|ln ε| + B ε²`; `fitted_constant = A` and `fitted_exponent`
    /// is the `q` of `ε^q (A|ln ε| + B)`.
    pub fit: DeficitFit,
    /// Misfit of the log-free model `B ε² + C ε⁴`, relative to `|A|`.
    pub pure_residual: f64,
    pub residual_ratio: f64,
    /// `(R, φ(R))` for `R = 1, 2, 4, …`.
    pub phi_table: Vec<(f64, f64)>,
    /// `8φ(R)λ + C/μ² + 8ω₃|λ|ln 2` on the same schedule.
    pub bracket: Vec<f64>,
    /// First `R` of the schedule with a negative bracket.
    pub sign_radius: Option<f64>,
    /// Cutoff constant `C` measured from the `λ = 0` deficits, `max D₀(ε)μ²/ε²`.
    pub cutoff_constant: f64,
    /// A priori bound for `C` from `‖η′‖_∞`.
    pub cutoff_constant_bound: f64,
}

const PHI_DOUBLINGS: i32 = 20;

pub(crate) struct SignBracket {
    pub phi_table: Vec<(f64, f64)>,
    pub bracket: Vec<f64>,
    pub sign_radius: Option<f64>,
    pub cutoff_constant: f64,
    pub cutoff_constant_bound: f64,
}

/// Sign bracket of the four-dimensional trial quotient, with the cutoff constant
/// measured from the `λ = 0` deficits at `eps_list`.
pub(crate) fn sign_bracket_4d(lambda: f64, mu: f64, eps_list: &[f64], opts: QuadOptions) -> Result<SignBracket> {
    check_eps(eps_list, mu)?;
    let d0 = deficits(4, 0.0, mu, eps_list, opts)?;
    Ok(bracket_from_deficits(lambda, mu, eps_list, &d0))
}

fn bracket_from_deficits(lambda: f64, mu: f64, eps_list: &[f64], d0: &[f64]) -> SignBracket {
    let omega = sphere_measure(4);
    let cutoff_constant = d0
        .iter()
        .zip(eps_list)
        .map(|(v, e)| v * mu * mu / (e * e))
        .fold(f64::NEG_INFINITY, f64::max);
    let g = CUTOFF_GRADIENT_SUP;
    let cutoff_constant_bound = omega * (32.0 * g * g + 256.0 * g);
    let phi_table: Vec<(f64, f64)> = (0..=PHI_DOUBLINGS)
        .map(|k| {
            let r = 2f64.powi(k);
            (r, phi(r))
        })
        .collect();
    let bracket: Vec<f64> = phi_table
        .iter()
        .map(|&(_, p)| {
            8.0 * p * lambda + cutoff_constant / (mu * mu) + 8.0 * omega * lambda.abs() * 2f64.ln()
        })
        .collect();
    let sign_radius = phi_table
        .iter()
        .zip(&bracket)
        .find(|(_, &b)| b < 0.0)
        .map(|(&(r, _), _)| r);
    SignBracket {
        phi_table,
        bracket,
        sign_radius,
        cutoff_constant,
        cutoff_constant_bound,
    }
}

/// `n = 4`: the leading deficit is `A ε²|ln ε|`. The log model is compared with a
/// pure `ε²` law of the same parameter count, and the sign bracket that makes the
/// trial quotient drop below `S` is tabulated along `R = 2ᵏ`.
pub fn deficit_expansion_4d(lambda: f64, mu: f64, eps_list: &[f64]) -> Result<Deficit4d> {
    deficit_expansion_4d_with(lambda, mu, eps_list, QuadOptions::default())
}

pub fn deficit_expansion_4d_with(
    lambda: f64,
    mu: f64,
    eps_list: &[f64],
    opts: QuadOptions,
) -> Result<Deficit4d> {
    check_eps(eps_list, mu)?;
    let n = 4;
    let s2 = sobolev_constant(n)?.powi(2);
    let d0 = deficits(n, 0.0, mu, eps_list, opts)?;
    let SignBracket {
        phi_table,
        bracket,
        sign_radius,
        cutoff_constant,
        cutoff_constant_bound,
    } = bracket_from_deficits(lambda, mu, eps_list, &d0);

    let d = if lambda == 0.0 {
        d0.clone()
    } else {
        deficits(n, lambda, mu, eps_list, opts)?
    };
    let energies: Vec<f64> = d.iter().map(|v| s2 + v).collect();
    let y: Vec<f64> = d.iter().zip(eps_list).map(|(v, e)| v / (e * e)).collect();
    let w = vec![1.0; y.len()];

    let (fit, pure_residual) = if lambda == 0.0 {
        let (q, a, rms) = power_law_fit(eps_list, &d)?;
        let fit = DeficitFit {
            n,
            lambda,
            mu,
            eps_list: eps_list.to_vec(),
            energies,
            model_values: eps_list.iter().map(|e| a * e.powf(q)).collect(),
            deficits: d,
            fitted_exponent: q,
            fitted_constant: a,
            residual: rms,
        };
        (fit, f64::NAN)
    } else {
        let log_fit = linear_fit(eps_list, &y, &w, |e| vec![-e.ln(), 1.0])?;
        let pure = linear_fit(eps_list, &y, &w, |e| vec![1.0, e * e])?;
        let a = log_fit.coefficients[0];
        let b = log_fit.coefficients[1];
        let q = exponent_fit(eps_list, &y, &w, 1.0, 3.0, |q, e| {
            let s = e.powf(q - 2.0);
            vec![-e.ln() * s, s]
        })?
        .exponent;
        let fit = DeficitFit {
            n,
            lambda,
            mu,
            eps_list: eps_list.to_vec(),
            energies,
            model_values: eps_list.iter().map(|e| e * e * (-a * e.ln() + b)).collect(),
            deficits: d,
            fitted_exponent: q,
            fitted_constant: a,
            residual: log_fit.rms / a.abs(),
        };
        let pure_residual = pure.rms / a.abs();
        (fit, pure_residual)
    };
    quality(&fit)?;
    Ok(Deficit4d {
        residual_ratio: pure_residual / fit.residual,
        fit,
        pure_residual,
        phi_table,
        bracket,
        sign_radius,
        cutoff_constant,
        cutoff_constant_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_closed_form() {
        let omega = sphere_measure(4);
        for r in [0.5, 1.0, 3.0, 100.0] {
            let x: f64 = 1.0 + r * r;
            let exact = 0.5 * omega * (x.ln() + 1.0 / x - 1.0);
            assert!((phi(r) - exact).abs() < 1e-11 * exact);
        }
    }

    #[test]
    fn eps_list_checked() {
        let bad = [0.3, 0.1, 0.05, 0.01];
        assert!(matches!(deficit_expansion(5, -1.0, 1.0, &bad), Err(Error::Precondition(_))));
        let unsorted = [0.1, 0.2, 0.05, 0.01];
        assert!(matches!(deficit_expansion(5, -1.0, 1.0, &unsorted), Err(Error::Precondition(_))));
        assert!(matches!(deficit_expansion(4, -1.0, 1.0, &[0.1, 0.05, 0.02, 0.01]), Err(Error::Unsupported(_))));
    }

    #[test]
    fn csv_layout() {
        let fit = DeficitFit {
            n: 5,
            lambda: -1.0,
            mu: 1.0,
            eps_list: vec![0.1],
            energies: vec![2.0],
            deficits: vec![-0.5],
            model_values: vec![-0.25],
            fitted_exponent: 2.0,
            fitted_constant: -3.0,
            residual: 0.0,
        };
        let mut buf = Vec::new();
        fit.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "eps,energy,deficit,model_value\n0.1,2,-0.5,-0.25\n# lambda=-1,fitted_exponent=2,fitted_constant=-3,residual=0\n"
        );
    }
}
