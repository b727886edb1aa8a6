use std::sync::Arc;

use super::{check_potential, potential_term};
use crate::grid::{energy, neg_laplacian_into, Domain, PotentialSpec};
use crate::linalg::symmetric_eigen;
use crate::{Error, Result};

const MAX_ITER: usize = 20000;
const SOLVE_TOL: f64 = 1e-12;

/// Largest `c` with `∫|∇u|² + a u² ≥ c ∫|∇u|²` on the discrete space, i.e. the
/// bottom of the pencil `(−Δ + a, −Δ)`.
pub fn coercivity_constant(a: &PotentialSpec, dom: &Arc<Domain>) -> Result<f64> {
    coercivity_constant_sampled(dom, &a.sample(dom)?)
}

/// Locally optimal preconditioned iteration: Rayleigh–Ritz on `{x, w, p}` with
/// `w = x + (−Δ)⁻¹(a x) − ρx` and `p` the previous update.
pub fn coercivity_constant_sampled(dom: &Domain, a: &[f64]) -> Result<f64> {
    check_potential(dom, a)?;
    let free = dom.free();
    if a.iter().zip(free).all(|(v, &f)| !f || *v == 0.0) {
        return Ok(1.0);
    }
    let n = dom.len();
    let energy_dot = |u: &[f64], v: &[f64], lap_v: &mut Vec<f64>| {
        neg_laplacian_into(dom, v, lap_v);
        dom.dot(u, lap_v)
    };
    let mut scratch = vec![0.0; n];
    let rho_of = |x: &[f64]| 1.0 + potential_term(dom, x, a) / energy(dom, x);

    let ones: Vec<f64> = free.iter().map(|&f| if f { 1.0 } else { 0.0 }).collect();
    let mut x = dom.solve_neg_laplacian(&ones, SOLVE_TOL)?;
    normalize_energy(dom, &mut x);
    let mut p: Option<Vec<f64>> = None;
    let mut rho = rho_of(&x);
    let mut stalled = 0;
    for _ in 0..MAX_ITER {
        let ax: Vec<f64> = x.iter().zip(a).map(|(u, a)| u * a).collect();
        let inv = dom.solve_neg_laplacian(&ax, SOLVE_TOL)?;
        let w: Vec<f64> = (0..n)
            .map(|i| if free[i] { x[i] + inv[i] - rho * x[i] } else { 0.0 })
            .collect();
        let wn = energy(dom, &w).sqrt();
        if wn <= 1e-13 {
            break;
        }
        let mut basis = vec![x.clone()];
        for cand in std::iter::once(w).chain(p.clone()) {
            let mut v = cand;
            // two passes of energy Gram–Schmidt
            for _ in 0..2 {
                for b in &basis {
                    let c = energy_dot(b, &v, &mut scratch);
                    for (vi, bi) in v.iter_mut().zip(b) {
                        *vi -= c * bi;
                    }
                }
            }
            let nv = energy(dom, &v).sqrt();
            if nv > 1e-10 {
                v.iter_mut().for_each(|t| *t /= nv);
                basis.push(v);
            }
        }
        let k = basis.len();
        let mut m = vec![vec![0.0; k]; k];
        for i in 0..k {
            for j in 0..=i {
                let kij = energy_dot(&basis[i], &basis[j], &mut scratch);
                let aij: f64 = basis[i]
                    .iter()
                    .zip(&basis[j])
                    .zip(a)
                    .zip(dom.volumes().iter().zip(free))
                    .filter(|(_, (_, &f))| f)
                    .map(|(((u, v), a), (w, _))| u * v * a * w)
                    .sum();
                m[i][j] = kij + aij;
                m[j][i] = m[i][j];
            }
        }
        let (_, vecs) = symmetric_eigen(m);
        let coef: Vec<f64> = (0..k).map(|r| vecs[r][0]).collect();
        let mut xn = vec![0.0; n];
        let mut pn = vec![0.0; n];
        for (j, b) in basis.iter().enumerate() {
            for i in 0..n {
                xn[i] += coef[j] * b[i];
                if j > 0 {
                    pn[i] += coef[j] * b[i];
                }
            }
        }
        normalize_energy(dom, &mut xn);
        let rho_new = rho_of(&xn);
        let change = (rho - rho_new).abs();
        x = xn;
        p = Some(pn);
        rho = rho_new;
        if change <= 1e-15 * rho.abs().max(1.0) {
            stalled += 1;
            if stalled >= 3 {
                break;
            }
        } else {
            stalled = 0;
        }
    }
    if rho <= 0.0 {
        return Err(Error::NonCoercive(rho));
    }
    Ok(rho)
}

fn normalize_energy(dom: &Domain, x: &mut [f64]) {
    let e = energy(dom, x).sqrt();
    if e > 0.0 {
        x.iter_mut().for_each(|v| *v /= e);
    }
}
