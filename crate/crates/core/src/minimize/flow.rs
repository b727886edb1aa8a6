use std::fmt;
use std::io::Write;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::coercivity::coercivity_constant_sampled;
use super::concentration::{concentration_profile, mass_fraction_at, ConcentrationDiagnostic, CONCENTRATION_THRESHOLD};
use super::{el_residual, gradient_parts, parts, potential_term};
use crate::lorentz::exact_sum;
use crate::bubbles::{bubble_eval, sobolev_constant, BubbleSpec};
use crate::grid::{energy, lp_sum, neg_laplacian_into, Domain, GridFunction, PotentialSpec};
use crate::{critical_exponent, Error, Result};

/// Starting field of the flow.
#[derive(Clone, Debug)]
pub enum Init {
    Bubble(BubbleSpec),
    Field(GridFunction),
    /// Approximate first Dirichlet eigenfunction.
    Ground,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MinimizeOptions {
    pub max_iter: usize,
    /// Stop once the Euler–Lagrange residual is at most this.
    pub tol: f64,
    pub initial_step: f64,
    pub backtrack: f64,
    /// Relative tolerance of the preconditioner solve on Cartesian grids.
    pub solve_tol: f64,
    /// Seeds a uniform perturbation of the initial field.
    pub seed: Option<u64>,
    /// Perturbation amplitude relative to `max|u₀|`.
    pub perturbation: f64,
    /// Stop as soon as the `4h` mass fraction exceeds one half.
    pub stop_on_concentration: bool,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        Self {
            max_iter: 10_000,
            tol: 1e-6,
            initial_step: 1.0,
            backtrack: 0.5,
            solve_tol: 1e-10,
            seed: None,
            perturbation: 1e-3,
            stop_on_concentration: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Converged,
    Concentrating,
    IterationCap,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Converged => "converged",
            Status::Concentrating => "concentrating",
            Status::IterationCap => "iteration_cap",
        })
    }
}

#[derive(Clone, Debug)]
pub struct MinimizationReport {
    /// Quotient of every accepted iterate, starting with the initial field.
    /// Later entries accumulate the computed per-step changes, so they may differ from a
    /// fresh evaluation by rounding.
    pub quotient_trajectory: Vec<f64>,
    pub el_trajectory: Vec<f64>,
    pub mass_fraction_trajectory: Vec<f64>,
    /// `(∫|∇u|², ∫au²)` of every accepted iterate.
    pub energy_trajectory: Vec<(f64, f64)>,
    pub s_a_estimate: f64,
    /// `μ` in `−Δu + au = μ u|u|^{2*−2}` for the normalized final field.
    pub lagrange_multiplier: f64,
    pub el_residual: f64,
    pub concentration: ConcentrationDiagnostic,
    pub status: Status,
    pub coercivity: f64,
    pub sobolev: f64,
    pub minimizer: GridFunction,
}

impl MinimizationReport {
    pub fn iterations(&self) -> usize {
        self.quotient_trajectory.len() - 1
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "iter,quotient,el_residual,mass_frac_4h")?;
        for i in 0..self.quotient_trajectory.len() {
            writeln!(
                w,
                "{},{},{},{}",
                i, self.quotient_trajectory[i], self.el_trajectory[i], self.mass_fraction_trajectory[i]
            )?;
        }
        Ok(())
    }

    pub fn write_summary<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "s_a,S,status,lagrange_multiplier")?;
        writeln!(
            w,
            "{},{},{},{}",
            self.s_a_estimate, self.sobolev, self.status, self.lagrange_multiplier
        )?;
        Ok(())
    }
}

fn initial_field(dom: &Arc<Domain>, init: Init, solve_tol: f64) -> Result<Vec<f64>> {
    Ok(match init {
        Init::Bubble(spec) => {
            if spec.n != dom.dim() {
                return Err(Error::structural("bubble dimension differs from the domain"));
            }
            GridFunction::from_fn(dom.clone(), |x| bubble_eval(&spec, x)).into_values()
        }
        Init::Field(f) => {
            if f.domain().as_ref() != dom.as_ref() {
                return Err(Error::structural("initial field lives on another domain"));
            }
            let mut f = f;
            f.enforce_dirichlet();
            f.into_values()
        }
        Init::Ground => {
            let mut u: Vec<f64> = dom.free().iter().map(|&f| if f { 1.0 } else { 0.0 }).collect();
            for _ in 0..4 {
                u = dom.solve_neg_laplacian(&u, solve_tol)?;
                let m = u.iter().fold(0.0_f64, |s, v| s.max(v.abs()));
                u.iter_mut().for_each(|v| *v /= m);
            }
            u
        }
    })
}

fn normalize(dom: &Domain, u: &mut [f64]) -> Result<()> {
    let q = critical_exponent(dom.dim());
    let n = lp_sum(dom, u, q).powf(1.0 / q);
    if !(n > 0.0 && n.is_finite()) {
        return Err(Error::domain("cannot normalize the zero field"));
    }
    u.iter_mut().for_each(|v| *v /= n);
    Ok(())
}

/// `Q(u − τd) − Q(u)` evaluated from differences, so that decreases far below the
/// rounding level of `Q` keep their sign.
struct StepChange<'a> {
    u: &'a [f64],
    d: &'a [f64],
    vol: &'a [f64],
    free: &'a [bool],
    q: f64,
    num: f64,
    mass: f64,
    /// `⟨∇u, ∇d⟩ + ∫a u d`
    cross: f64,
    /// `∫|∇d|² + ∫a d²`
    dd: f64,
}

impl<'a> StepChange<'a> {
    fn new(dom: &'a Domain, u: &'a [f64], d: &'a [f64], a: &[f64], quot: f64) -> Self {
        let q = critical_exponent(dom.dim());
        let mut lap = vec![0.0; u.len()];
        neg_laplacian_into(dom, u, &mut lap);
        let vol = dom.volumes();
        let free = dom.free();
        let cross = exact_sum((0..u.len()).filter(|&i| free[i]).map(|i| (lap[i] + a[i] * u[i]) * d[i] * vol[i]));
        let dd = energy(dom, d) + potential_term(dom, d, a);
        let mass = lp_sum(dom, u, q);
        Self {
            u,
            d,
            vol,
            free,
            q,
            num: quot * mass.powf(2.0 / q),
            mass,
            cross,
            dd,
        }
    }

    fn change(&self, tau: f64) -> f64 {
        let q = self.q;
        let dmass = exact_sum((0..self.u.len()).filter(|&i| self.free[i]).map(|i| {
            let u = self.u[i];
            let du = -tau * self.d[i];
            let w = u + du;
            let term = if u != 0.0 && w / u > 0.0 {
                u.abs().powf(q) * (q * (du / u).ln_1p()).exp_m1()
            } else {
                w.abs().powf(q) - u.abs().powf(q)
            };
            term * self.vol[i]
        }));
        let dnum = -2.0 * tau * self.cross + tau * tau * self.dd;
        let ratio = (2.0 / q * (dmass / self.mass).ln_1p()).exp_m1();
        let den = self.mass.powf(2.0 / q) * (1.0 + ratio);
        (dnum - self.num * ratio) / den
    }
}

/// Sobolev-preconditioned descent on `{‖u‖_{2*} = 1}`: `u ← normalize(u − τ P∇Q)` with
/// `P = ‖u‖²_{2*}(−Δ)⁻¹/2`, halving `τ` from `initial_step` until the quotient strictly
/// decreases.
pub fn minimize_quotient(
    a: &PotentialSpec,
    dom: &Arc<Domain>,
    init: Init,
    opts: &MinimizeOptions,
) -> Result<MinimizationReport> {
    let n = dom.dim();
    let sobolev = sobolev_constant(n)?;
    let av = a.sample(dom)?;
    let coercivity = coercivity_constant_sampled(dom, &av)?;
    let free = dom.free();
    let h = dom.h();

    let mut u = initial_field(dom, init, opts.solve_tol)?;
    if let Some(seed) = opts.seed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = u.iter().fold(0.0_f64, |s, v| s.max(v.abs()));
        for (v, &f) in u.iter_mut().zip(free) {
            let r: f64 = rng.gen_range(-1.0..1.0);
            if f {
                *v += opts.perturbation * m * r;
            }
        }
    }
    for (v, &f) in u.iter_mut().zip(free) {
        if !f {
            *v = 0.0;
        }
    }
    normalize(dom, &mut u)?;

    let fraction = |u: &[f64]| -> Result<f64> {
        mass_fraction_at(&GridFunction::new(dom.clone(), u.to_vec())?, 4.0 * h)
    };
    let (num, den) = parts(dom, &u, &av);
    let mut quot = num / den;
    let mut quotient_trajectory = vec![quot];
    let mut el_trajectory = vec![el_residual(dom, &u, &av, quot)];
    let mut mass_fraction_trajectory = vec![fraction(&u)?];
    let mut energy_trajectory = vec![(energy(dom, &u), potential_term(dom, &u, &av))];
    let mut status = Status::IterationCap;

    for _ in 0..=opts.max_iter {
        let el = *el_trajectory.last().unwrap();
        if el <= opts.tol {
            status = Status::Converged;
            break;
        }
        if opts.stop_on_concentration && *mass_fraction_trajectory.last().unwrap() > CONCENTRATION_THRESHOLD {
            status = Status::Concentrating;
            break;
        }
        if quotient_trajectory.len() > opts.max_iter {
            break;
        }
        let (g, _, norm) = gradient_parts(dom, &u, &av)?;
        // Riesz map of the metric `2⟨∇u, ∇v⟩/‖u‖²_{2*}`, so that τ = 1 is the unit step
        let mut d = dom.solve_neg_laplacian(&g, opts.solve_tol)?;
        let metric = 0.5 * norm * norm;
        d.iter_mut().for_each(|v| *v *= metric);
        let step = StepChange::new(dom, &u, &d, &av, quot);
        let mut tau = opts.initial_step;
        let mut accepted = None;
        while tau > 1e-14 * opts.initial_step {
            let dq = step.change(tau);
            if dq < 0.0 {
                let mut v: Vec<f64> = (0..u.len())
                    .map(|i| if free[i] { u[i] - tau * d[i] } else { 0.0 })
                    .collect();
                if normalize(dom, &mut v).is_ok() {
                    accepted = Some((v, quot + dq));
                    break;
                }
            }
            tau *= opts.backtrack;
        }
        let Some((v, qv)) = accepted else {
            break;
        };
        u = v;
        quot = qv;
        quotient_trajectory.push(quot);
        el_trajectory.push(el_residual(dom, &u, &av, quot));
        mass_fraction_trajectory.push(fraction(&u)?);
        energy_trajectory.push((energy(dom, &u), potential_term(dom, &u, &av)));
    }

    let minimizer = GridFunction::new(dom.clone(), u)?;
    let concentration = concentration_profile(&minimizer, &[8.0 * h, 4.0 * h, 2.0 * h])?;
    Ok(MinimizationReport {
        s_a_estimate: quot,
        lagrange_multiplier: quot,
        el_residual: *el_trajectory.last().unwrap(),
        quotient_trajectory,
        el_trajectory,
        mass_fraction_trajectory,
        energy_trajectory,
        concentration,
        status,
        coercivity,
        sobolev,
        minimizer,
    })
}
