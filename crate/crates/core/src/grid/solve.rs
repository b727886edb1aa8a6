use super::ops::neg_laplacian_into;
use super::{Domain, Geometry, GridFunction};
use crate::linalg::solve_tridiagonal;
use crate::{Error, Result};

/// An operator acting on cell values, self-adjoint for the volume-weighted inner
/// product on the free cells.
pub trait LinearOperator {
    fn apply(&self, x: &[f64], out: &mut [f64]);
}

impl<F: Fn(&[f64], &mut [f64])> LinearOperator for F {
    fn apply(&self, x: &[f64], out: &mut [f64]) {
        self(x, out)
    }
}

/// Discrete `−Δ` with homogeneous Dirichlet data.
pub struct NegLaplacian<'a>(pub &'a Domain);

impl LinearOperator for NegLaplacian<'_> {
    fn apply(&self, x: &[f64], out: &mut [f64]) {
        neg_laplacian_into(self.0, x, out)
    }
}

pub struct Identity;

impl LinearOperator for Identity {
    fn apply(&self, x: &[f64], out: &mut [f64]) {
        out.copy_from_slice(x);
    }
}

#[derive(Clone, Debug)]
pub struct CgReport {
    pub solution: GridFunction,
    pub iterations: usize,
    pub relative_residual: f64,
}

/// Conjugate gradients in the volume-weighted inner product. Stops once
/// `‖rhs − A x‖ ≤ tol·‖rhs‖`; exceeding `max_iter` is an error carrying the final
/// relative residual. Reductions run in cell order.
pub fn cg_solve(
    op: &dyn LinearOperator,
    rhs: &GridFunction,
    tol: f64,
    max_iter: usize,
) -> Result<CgReport> {
    let (x, iterations, relative_residual) = cg_core(rhs.domain(), op, rhs.values(), tol, max_iter)?;
    Ok(CgReport {
        solution: rhs.with_values(x)?,
        iterations,
        relative_residual,
    })
}

pub(crate) fn cg_core(
    dom: &Domain,
    op: &dyn LinearOperator,
    rhs: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<(Vec<f64>, usize, f64)> {
    if !(tol > 0.0) {
        return Err(Error::domain("cg tolerance must be positive"));
    }
    let free = dom.free();
    let mut b = rhs.to_vec();
    for (v, &f) in b.iter_mut().zip(free) {
        if !f {
            *v = 0.0;
        }
    }
    let b_norm = dom.norm(&b);
    let mut x = vec![0.0; b.len()];
    if b_norm == 0.0 {
        return Ok((x, 0, 0.0));
    }
    let mut r = b.clone();
    let mut p = r.clone();
    let mut ap = vec![0.0; b.len()];
    let mut rr = dom.dot(&r, &r);
    let mut iterations = 0;
    let mut rel = rr.sqrt() / b_norm;
    while rel > tol {
        if iterations >= max_iter {
            return Err(Error::NoConvergence {
                iterations,
                residual: rel,
            });
        }
        op.apply(&p, &mut ap);
        let pap = dom.dot(&p, &ap);
        if !(pap > 0.0) {
            return Err(Error::precondition("operator is not positive definite on the free cells"));
        }
        let alpha = rr / pap;
        for i in 0..x.len() {
            if free[i] {
                x[i] += alpha * p[i];
                r[i] -= alpha * ap[i];
            }
        }
        let rr_new = dom.dot(&r, &r);
        let beta = rr_new / rr;
        for i in 0..p.len() {
            p[i] = if free[i] { r[i] + beta * p[i] } else { 0.0 };
        }
        rr = rr_new;
        iterations += 1;
        rel = rr.sqrt() / b_norm;
    }
    Ok((x, iterations, rel))
}

impl Domain {
    /// Solves `−Δx = rhs`: directly (tridiagonal) on radial meshes, by
    /// [`cg_solve`] to relative tolerance `tol` on Cartesian grids.
    pub fn solve_neg_laplacian(&self, rhs: &[f64], tol: f64) -> Result<Vec<f64>> {
        match &self.geometry {
            Geometry::Radial(m) => {
                let n = m.nodes - 1;
                let w = &self.face_weights;
                let diag: Vec<f64> = (0..n)
                    .map(|i| w[i] + if i > 0 { w[i - 1] } else { 0.0 })
                    .collect();
                let lower: Vec<f64> = (0..n).map(|i| if i > 0 { -w[i - 1] } else { 0.0 }).collect();
                let upper: Vec<f64> = (0..n).map(|i| -w[i]).collect();
                let b: Vec<f64> = (0..n).map(|i| rhs[i] * self.volumes[i]).collect();
                let mut x = solve_tridiagonal(&lower, &diag, &upper, &b);
                x.push(0.0);
                Ok(x)
            }
            Geometry::Cartesian(_) => {
                let max_iter = 20 * self.len() + 100;
                Ok(cg_core(self, &NegLaplacian(self), rhs, tol, max_iter)?.0)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{laplacian_apply, CartesianGrid};

    #[test]
    fn zero_rhs_gives_zero() {
        let d = Domain::cartesian_ball(3, 1.0, 0.25).unwrap();
        let rep = cg_solve(&NegLaplacian(&d), &GridFunction::zeros(d.clone()), 1e-10, 10).unwrap();
        assert!(rep.solution.is_zero());
        assert_eq!(rep.iterations, 0);
    }

    #[test]
    fn identity_returns_rhs() {
        let d = Domain::cartesian_ball(3, 1.0, 0.25).unwrap();
        let rhs = GridFunction::from_fn(d.clone(), |x| x[0] + 2.0 * x[1] * x[2]);
        let rep = cg_solve(&Identity, &rhs, 1e-12, 5).unwrap();
        for (a, b) in rep.solution.values().iter().zip(rhs.values()) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn iteration_cap_reports_residual() {
        let d = Domain::cartesian_ball(3, 1.0, 0.1).unwrap();
        let rhs = GridFunction::from_fn(d.clone(), |x| 1.0 + x[0]);
        match cg_solve(&NegLaplacian(&d), &rhs, 1e-12, 3) {
            Err(Error::NoConvergence { iterations, residual }) => {
                assert_eq!(iterations, 3);
                assert!(residual > 1e-12);
            }
            other => panic!("expected no-convergence, got {other:?}"),
        }
    }

    #[test]
    fn radial_direct_solve_inverts_laplacian() {
        let d = Domain::radial_ball(5, 1.0, 200).unwrap();
        let f = GridFunction::from_fn(d.clone(), |x| (1.0 - x[0] * x[0]) * (3.0 + x[0]));
        let x = d.solve_neg_laplacian(f.values(), 0.0).unwrap();
        let back = laplacian_apply(&f.with_values(x).unwrap());
        let err: f64 = d.norm(
            &back.values().iter().zip(f.values()).map(|(a, b)| a - b).collect::<Vec<_>>(),
        );
        assert!(err < 1e-9 * d.norm(f.values()));
    }

    #[test]
    fn cartesian_solve_through_masked_box() {
        let g = CartesianGrid::new(vec![6, 5, 7], 0.2, vec![0.0; 3], None).unwrap();
        let d = Domain::new(Geometry::Cartesian(g));
        let f = GridFunction::from_fn(d.clone(), |x| x[0] - x[1] * x[2] + 0.3);
        let x = d.solve_neg_laplacian(f.values(), 1e-12).unwrap();
        let back = laplacian_apply(&f.with_values(x).unwrap());
        let diff: Vec<f64> = back.values().iter().zip(f.values()).map(|(a, b)| a - b).collect();
        assert!(d.norm(&diff) <= 1e-11 * d.norm(f.values()));
    }
}
