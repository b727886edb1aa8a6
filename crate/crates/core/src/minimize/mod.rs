//! The discrete quotient `Q(u) = (∫|∇u|² + a u²) / ‖u‖²_{2*}` and everything built on it:
//! gradients, coercivity, truncation, bubble test functions, the preconditioned
//! minimization flow and concentration diagnostics.

mod center;
mod coercivity;
mod concentration;
mod flow;

use crate::grid::{energy, lp_sum, neg_laplacian_into, Domain, GridFunction, PotentialSpec};
use crate::lorentz::exact_sum;
use crate::{critical_exponent, Error, Result};

pub use center::{brezis_nirenberg_bubble_test, select_negativity_center, BubbleTest, NegativityCenter};
pub use coercivity::{coercivity_constant, coercivity_constant_sampled};
pub use concentration::{concentration_profile, mass_fraction_at, ConcentrationDiagnostic};
pub use flow::{minimize_quotient, Init, MinimizationReport, MinimizeOptions, Status};

/// Quotient evaluated with a potential already sampled on `u`'s domain.
pub fn rayleigh_quotient_sampled(u: &GridFunction, a: &[f64]) -> Result<f64> {
    let dom = u.domain();
    check_potential(dom, a)?;
    let (num, den) = parts(dom, u.values(), a);
    if den == 0.0 {
        return Err(Error::domain("quotient of the zero function"));
    }
    Ok(num / den)
}

pub fn rayleigh_quotient(u: &GridFunction, a: &PotentialSpec) -> Result<f64> {
    rayleigh_quotient_sampled(u, &a.sample(u.domain())?)
}

/// Gradient of the quotient for the volume-weighted inner product, zero on
/// non-free cells: `2(−Δu + au − Q‖u‖^{2−2*}u|u|^{2*−2}) / ‖u‖²_{2*}`.
pub fn quotient_gradient_sampled(u: &GridFunction, a: &[f64]) -> Result<GridFunction> {
    let dom = u.domain();
    check_potential(dom, a)?;
    let (g, _, _) = gradient_parts(dom, u.values(), a)?;
    u.with_values(g)
}

pub fn quotient_gradient(u: &GridFunction, a: &PotentialSpec) -> Result<GridFunction> {
    quotient_gradient_sampled(u, &a.sample(u.domain())?)
}

pub(crate) fn check_potential(dom: &Domain, a: &[f64]) -> Result<()> {
    if a.len() != dom.len() {
        return Err(Error::structural(format!(
            "potential has {} values, domain has {} cells",
            a.len(),
            dom.len()
        )));
    }
    Ok(())
}

/// `∫ a u²` over free cells.
pub(crate) fn potential_term(dom: &Domain, u: &[f64], a: &[f64]) -> f64 {
    exact_sum(
        u.iter()
            .zip(a)
            .zip(dom.volumes().iter().zip(dom.free()))
            .filter(|(_, (_, &f))| f)
            .map(|((u, a), (w, _))| a * u * u * w),
    )
}

/// `(∫|∇u|² + ∫au², ‖u‖²_{2*})`.
pub(crate) fn parts(dom: &Domain, u: &[f64], a: &[f64]) -> (f64, f64) {
    let q = critical_exponent(dom.dim());
    let num = energy(dom, u) + potential_term(dom, u, a);
    let den = lp_sum(dom, u, q).powf(2.0 / q);
    (num, den)
}

/// Gradient values, quotient and `‖u‖_{2*}`.
pub(crate) fn gradient_parts(dom: &Domain, u: &[f64], a: &[f64]) -> Result<(Vec<f64>, f64, f64)> {
    let q = critical_exponent(dom.dim());
    let (num, den) = parts(dom, u, a);
    if den == 0.0 {
        return Err(Error::domain("gradient of the quotient at the zero function"));
    }
    let quot = num / den;
    let norm = den.sqrt();
    let mut lap = vec![0.0; u.len()];
    neg_laplacian_into(dom, u, &mut lap);
    let scale = quot * norm.powf(2.0 - q);
    let g = (0..u.len())
        .map(|i| {
            if !dom.free()[i] {
                return 0.0;
            }
            let v = u[i];
            2.0 * (lap[i] + a[i] * v - scale * v * v.abs().powf(q - 2.0)) / den
        })
        .collect();
    Ok((g, quot, norm))
}

/// `‖−Δu + au − μ u|u|^{2*−2}‖_{L²}` over free cells.
pub(crate) fn el_residual(dom: &Domain, u: &[f64], a: &[f64], mu: f64) -> f64 {
    let q = critical_exponent(dom.dim());
    let mut lap = vec![0.0; u.len()];
    neg_laplacian_into(dom, u, &mut lap);
    let r: Vec<f64> = (0..u.len())
        .map(|i| {
            let v = u[i];
            lap[i] + a[i] * v - mu * v * v.abs().powf(q - 2.0)
        })
        .collect();
    dom.norm(&r)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TruncationMode {
    /// `max(a, −N₀)` with `N₀ > 0`.
    Floor(f64),
    /// `max(a, v)`.
    PointwiseFloor(f64),
}

/// Raises `a` to a floor; the quotient can only grow.
pub fn truncate_potential(a: &PotentialSpec, mode: TruncationMode) -> Result<PotentialSpec> {
    let level = match mode {
        TruncationMode::Floor(n0) => {
            if !(n0 > 0.0 && n0.is_finite()) {
                return Err(Error::precondition(format!("truncation level must be positive, got {n0}")));
            }
            -n0
        }
        TruncationMode::PointwiseFloor(v) => {
            if !v.is_finite() {
                return Err(Error::precondition("truncation floor must be finite"));
            }
            v
        }
    };
    let floor = a.floor.map_or(level, |f| f.max(level));
    let mut out = a.clone();
    out.floor = Some(floor);
    if let Some(cap) = out.cap {
        if floor > cap {
            out.cap = Some(floor);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::PotentialKind;
    use crate::lorentz::LorentzExponents;

    #[test]
    fn truncation_examples() {
        let d = Domain::radial_ball(5, 1.0, 21).unwrap();
        let a = PotentialSpec::well(0.5, -2.0, 5);
        let t = truncate_potential(&a, TruncationMode::Floor(1.0)).unwrap();
        let s = t.sample(&d).unwrap();
        assert_eq!(s[0], -1.0);
        assert_eq!(s[15], 0.0);
        let mild = truncate_potential(&a, TruncationMode::Floor(3.0)).unwrap();
        assert_eq!(mild.sample(&d).unwrap(), a.sample(&d).unwrap());
        assert!(truncate_potential(&a, TruncationMode::Floor(0.0)).is_err());
        let p = truncate_potential(&a, TruncationMode::PointwiseFloor(-0.5)).unwrap();
        assert_eq!(p.sample(&d).unwrap()[0], -0.5);
    }

    #[test]
    fn zero_function_rejected() {
        let d = Domain::radial_ball(5, 1.0, 21).unwrap();
        let z = GridFunction::zeros(d);
        assert!(matches!(rayleigh_quotient(&z, &PotentialSpec::zero(5)), Err(Error::Domain(_))));
        assert!(quotient_gradient(&z, &PotentialSpec::zero(5)).is_err());
        let bad = PotentialSpec::new(PotentialKind::Sampled(vec![0.0]), LorentzExponents::critical(5));
        let u = GridFunction::from_fn(Domain::radial_ball(5, 1.0, 21).unwrap(), |x| 1.0 - x[0]);
        assert!(matches!(rayleigh_quotient(&u, &bad), Err(Error::Structural(_))));
    }
}
