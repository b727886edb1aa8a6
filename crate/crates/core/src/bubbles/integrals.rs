use std::sync::OnceLock;

use super::{cutoff, cutoff_derivative, talenti, talenti_derivative, BubbleSpec};
use crate::quad::{integrate, integrate_to_infinity, log_breakpoints, QuadOptions};
use crate::{critical_exponent, sphere_measure, Error, Result};

fn breaks(eps: f64) -> Vec<f64> {
    log_breakpoints(eps, 40)
}

/// `∫_{lo}^{hi} f(r) ω rⁿ⁻¹ dr`, with `hi = ∞` allowed.
fn radial_integral(n: usize, eps: f64, lo: f64, hi: f64, f: impl Fn(f64) -> f64, opts: QuadOptions) -> f64 {
    let omega = sphere_measure(n);
    let g = |r: f64| f(r) * omega * r.powi(n as i32 - 1);
    let b = breaks(eps);
    if hi.is_finite() {
        return integrate(g, lo, hi, &b, opts).value;
    }
    // split at the bubble scale so the reciprocal map sees a bounded integrand
    let knee = eps.max(lo);
    let head = if knee > lo {
        integrate(g, lo, knee, &b, opts).value
    } else {
        0.0
    };
    head + integrate_to_infinity(g, knee, &b, opts).value
}

/// `∫ |∇(u_ε η_μ)|² + λ (u_ε η_μ)²`.
pub fn bubble_energy(spec: &BubbleSpec, lambda: f64) -> Result<f64> {
    bubble_energy_with(spec, lambda, QuadOptions::default())
}

pub fn bubble_energy_with(spec: &BubbleSpec, lambda: f64, opts: QuadOptions) -> Result<f64> {
    let upper = match spec.cutoff {
        Some(mu) => 2.0 * mu,
        None => {
            if lambda != 0.0 && spec.n <= 4 {
                return Err(Error::Divergent(format!(
                    "u_ε is not square integrable in dimension {}; a cutoff is required for λ ≠ 0",
                    spec.n
                )));
            }
            f64::INFINITY
        }
    };
    let cuts: Vec<f64> = spec.cutoff.map(|mu| vec![mu]).unwrap_or_default();
    let f = |r: f64| {
        let d = spec.radial_derivative(r);
        let u = spec.radial(r);
        d * d + lambda * u * u
    };
    Ok(match upper.is_finite() {
        true => split_at(spec.n, spec.eps, 0.0, upper, &cuts, f, opts),
        false => radial_integral(spec.n, spec.eps, 0.0, upper, f, opts),
    })
}

fn split_at(n: usize, eps: f64, lo: f64, hi: f64, cuts: &[f64], f: impl Fn(f64) -> f64, opts: QuadOptions) -> f64 {
    let mut edges = vec![lo];
    edges.extend(cuts.iter().copied().filter(|&c| c > lo && c < hi));
    edges.push(hi);
    edges
        .windows(2)
        .map(|w| radial_integral(n, eps, w[0], w[1], &f, opts))
        .sum()
}

/// `∫ (u_ε η_μ)^{2*}`.
pub fn bubble_mass(spec: &BubbleSpec) -> f64 {
    bubble_mass_with(spec, QuadOptions::default())
}

pub fn bubble_mass_with(spec: &BubbleSpec, opts: QuadOptions) -> f64 {
    let q = critical_exponent(spec.n);
    let f = |r: f64| spec.radial(r).powf(q);
    match spec.cutoff {
        Some(mu) => split_at(spec.n, spec.eps, 0.0, 2.0 * mu, &[mu], f, opts),
        None => radial_integral(spec.n, spec.eps, 0.0, f64::INFINITY, f, opts),
    }
}

/// `E(ε) − S^{n/2}` for the cut bubble, assembled from integrals that are each
/// small, so no cancellation against `S^{n/2}` occurs.
pub fn energy_deficit(n: usize, lambda: f64, mu: f64, eps: f64, opts: QuadOptions) -> Result<f64> {
    let spec = BubbleSpec::new(n, eps)?.with_cutoff(mu)?;
    let mass_term = if lambda != 0.0 {
        lambda
            * split_at(
                n,
                eps,
                0.0,
                2.0 * mu,
                &[mu],
                |r| {
                    let u = spec.radial(r);
                    u * u
                },
                opts,
            )
    } else {
        0.0
    };
    let transition = radial_integral(
        n,
        eps,
        mu,
        2.0 * mu,
        |r| {
            let s = r / mu;
            let (u, du) = (talenti(n, eps, r), talenti_derivative(n, eps, r));
            let (e, de) = (cutoff(s), cutoff_derivative(s) / mu);
            // ((uη)′)² − u′²
            du * du * (e * e - 1.0) + 2.0 * u * du * e * de + u * u * de * de
        },
        opts,
    );
    let tail = radial_integral(
        n,
        eps,
        2.0 * mu,
        f64::INFINITY,
        |r| {
            let du = talenti_derivative(n, eps, r);
            du * du
        },
        opts,
    );
    Ok(mass_term + transition - tail)
}

/// `S^{n/2} − ∫ (u_ε η_μ)^{2*}`, without cancellation.
pub fn mass_deficit(n: usize, mu: f64, eps: f64, opts: QuadOptions) -> Result<f64> {
    BubbleSpec::new(n, eps)?.with_cutoff(mu)?;
    let q = critical_exponent(n);
    let transition = radial_integral(
        n,
        eps,
        mu,
        2.0 * mu,
        |r| talenti(n, eps, r).powf(q) * (1.0 - cutoff(r / mu).powf(q)),
        opts,
    );
    let tail = radial_integral(n, eps, 2.0 * mu, f64::INFINITY, |r| talenti(n, eps, r).powf(q), opts);
    Ok(transition + tail)
}

const MAX_CACHED_DIM: usize = 8;

static SOBOLEV: [OnceLock<f64>; MAX_CACHED_DIM + 1] = [const { OnceLock::new() }; MAX_CACHED_DIM + 1];

/// Best Sobolev constant `S = (∫|∇u₁|²)^{2/n}`, computed once per `n ∈ [3, 8]`.
pub fn sobolev_constant(n: usize) -> Result<f64> {
    sobolev_constant_with(n, false)
}

/// As [`sobolev_constant`]; `recompute` bypasses the cache.
pub fn sobolev_constant_with(n: usize, recompute: bool) -> Result<f64> {
    if !(3..=MAX_CACHED_DIM).contains(&n) {
        return Err(Error::Unsupported(format!("Sobolev constant for n = {n} (supported 3..=8)")));
    }
    let compute = || {
        let spec = BubbleSpec::new(n, 1.0).expect("valid unit bubble");
        let e = bubble_energy_with(&spec, 0.0, QuadOptions::with_rel_tol(1e-13)).expect("finite energy");
        e.powf(2.0 / n as f64)
    };
    if recompute {
        return Ok(compute());
    }
    Ok(*SOBOLEV[n].get_or_init(compute))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    // Closed form πn(n−2)(Γ(n/2)/Γ(n))^{2/n}, used only as an oracle.
    fn talenti_constant(n: usize) -> f64 {
        fn gamma_half(k: usize) -> f64 {
            // Γ(k/2)
            let mut g = if k.is_multiple_of(2) { 1.0 } else { PI.sqrt() };
            let mut x = if k.is_multiple_of(2) { 1.0 } else { 0.5 };
            while x < k as f64 / 2.0 {
                g *= x;
                x += 1.0;
            }
            g
        }
        let ratio = gamma_half(n) / gamma_half(2 * n);
        PI * (n * (n - 2)) as f64 * ratio.powf(2.0 / n as f64)
    }

    #[test]
    fn sobolev_matches_closed_form() {
        for n in 3..=8 {
            let s = sobolev_constant(n).unwrap();
            let t = talenti_constant(n);
            assert!((s - t).abs() < 1e-11 * t, "n={n}: {s} vs {t}");
        }
        assert!((sobolev_constant(5).unwrap() - 14.81).abs() < 0.01);
        assert!(matches!(sobolev_constant(9), Err(Error::Unsupported(_))));
        assert!(matches!(sobolev_constant(2), Err(Error::Unsupported(_))));
    }

    #[test]
    fn sobolev_increasing_in_dimension() {
        let s: Vec<f64> = (3..=8).map(|n| sobolev_constant(n).unwrap()).collect();
        assert!(s.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(sobolev_constant_with(5, true).unwrap(), sobolev_constant(5).unwrap());
    }

    #[test]
    fn mass_power_gives_s() {
        for n in 3..=8 {
            let m = bubble_mass(&BubbleSpec::new(n, 1.0).unwrap());
            let s = sobolev_constant(n).unwrap();
            assert!((m.powf(2.0 / n as f64) - s).abs() < 1e-9 * s);
        }
    }

    #[test]
    fn deficits_match_direct_difference() {
        let opts = QuadOptions::with_rel_tol(1e-12);
        for (n, lambda, mu, eps) in [(5, -1.0, 1.0, 0.2), (6, -2.0, 0.5, 0.1), (4, 0.0, 1.0, 0.2)] {
            let spec = BubbleSpec::new(n, eps).unwrap().with_cutoff(mu).unwrap();
            let s = sobolev_constant(n).unwrap().powf(n as f64 / 2.0);
            let direct = bubble_energy_with(&spec, lambda, opts).unwrap() - s;
            let d = energy_deficit(n, lambda, mu, eps, opts).unwrap();
            assert!((d - direct).abs() < 1e-9 * s, "{d} vs {direct}");
            let md = s - bubble_mass_with(&spec, opts);
            let m = mass_deficit(n, mu, eps, opts).unwrap();
            assert!((m - md).abs() < 1e-9 * s);
        }
    }

    #[test]
    fn four_dim_uncut_mass_term_diverges() {
        let b = BubbleSpec::new(4, 0.1).unwrap();
        assert!(matches!(bubble_energy(&b, -1.0), Err(Error::Divergent(_))));
        assert!(bubble_energy(&b, 0.0).is_ok());
    }
}
