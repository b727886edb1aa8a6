//! Numerical laboratory for the critical Sobolev quotient
//!
//! ```text
//!            ∫ |∇u|² + a(x) u²
//! S_a(Ω) = inf ─────────────────,   2* = 2n/(n−2),
//!              ‖u‖²_{L^{2*}}
//! ```
//!
//! with rough potentials `a` in Lorentz spaces `L^{n/2,d}`.
//!
//! * [`lorentz`] decreasing rearrangements, Lorentz norms and the bounded/small-tail
//!   splitting of a potential.
//! * [`grid`] masked Cartesian grids and radial meshes, the discrete Dirichlet Laplacian,
//!   linear solves and the grid file format.
//! * [`bubbles`] Talenti bubbles, their energies by adaptive radial quadrature, the
//!   Sobolev constant and the small-ε deficit expansions.
//! * [`minimize`] the discrete quotient, its Sobolev-preconditioned minimization,
//!   coercivity estimates, bubble test functions and concentration diagnostics.

// `!(x > 0.0)` rejects NaN along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod bubbles;
pub mod error;
pub mod fit;
pub mod grid;
mod linalg;
pub mod lorentz;
pub mod minimize;
pub mod quad;

pub use error::{Error, Result};

/// Critical Sobolev exponent `2n/(n−2)`.
pub fn critical_exponent(n: usize) -> f64 {
    assert!(n >= 3, "critical exponent requires n >= 3");
    (2 * n) as f64 / (n - 2) as f64
}

/// Surface measure of the unit sphere `S^{n−1}` in `Rⁿ`, `2π^{n/2}/Γ(n/2)`.
pub fn sphere_measure(n: usize) -> f64 {
    use std::f64::consts::PI;
    assert!(n >= 1);
    // Γ(n/2) by the half-integer recursion.
    let mut gamma = if n.is_multiple_of(2) { 1.0 } else { PI.sqrt() };
    let mut k = if n.is_multiple_of(2) { 1.0 } else { 0.5 };
    while k < n as f64 / 2.0 {
        gamma *= k;
        k += 1.0;
    }
    2.0 * PI.powf(n as f64 / 2.0) / gamma
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn sphere_measures() {
        assert!((sphere_measure(2) - 2.0 * PI).abs() < 1e-14);
        assert!((sphere_measure(3) - 4.0 * PI).abs() < 1e-13);
        assert!((sphere_measure(4) - 2.0 * PI * PI).abs() < 1e-13);
        assert!((sphere_measure(5) - 8.0 * PI * PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn critical_exponents() {
        assert_eq!(critical_exponent(3), 6.0);
        assert_eq!(critical_exponent(4), 4.0);
        assert!((critical_exponent(5) - 10.0 / 3.0).abs() < 1e-15);
    }
}
