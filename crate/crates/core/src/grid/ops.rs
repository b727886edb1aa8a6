use super::{Domain, Geometry, GridFunction};
use crate::lorentz::exact_sum;
use crate::{Error, Result};

/// Returns `−Δu` with homogeneous Dirichlet data outside the free cells.
pub fn laplacian_apply(u: &GridFunction) -> GridFunction {
    let mut out = vec![0.0; u.values.len()];
    neg_laplacian_into(&u.domain, &u.values, &mut out);
    GridFunction {
        domain: u.domain.clone(),
        values: out,
    }
}

/// `∫|∇u|²` from face differences; equals `Σ u·(−Δu)·vol` up to rounding.
pub fn dirichlet_energy(u: &GridFunction) -> f64 {
    energy(&u.domain, &u.values)
}

/// `(Σ |u|^p vol)^{1/p}` over free cells.
pub fn lp_norm(u: &GridFunction, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::domain(format!("lp_norm needs p >= 1, got {p}")));
    }
    Ok(lp_sum(&u.domain, &u.values, p).powf(1.0 / p))
}

pub(crate) fn lp_sum(dom: &Domain, u: &[f64], p: f64) -> f64 {
    exact_sum(
        u.iter()
            .zip(dom.volumes.iter().zip(&dom.free))
            .filter(|(_, (_, &f))| f)
            .map(|(v, (w, _))| v.abs().powf(p) * w),
    )
}

#[inline]
fn value(dom: &Domain, u: &[f64], i: usize) -> f64 {
    if dom.free[i] {
        u[i]
    } else {
        0.0
    }
}

pub(crate) fn neg_laplacian_into(dom: &Domain, u: &[f64], out: &mut [f64]) {
    match &dom.geometry {
        Geometry::Radial(_) => {
            let w = &dom.face_weights;
            let last = u.len() - 1;
            for i in 0..=last {
                if !dom.free[i] {
                    out[i] = 0.0;
                    continue;
                }
                let ui = u[i];
                let mut flux = w[i] * (ui - value(dom, u, i + 1));
                if i > 0 {
                    flux += w[i - 1] * (ui - u[i - 1]);
                }
                out[i] = flux / dom.volumes[i];
            }
        }
        Geometry::Cartesian(g) => {
            let strides = g.strides();
            let inv_h2 = 1.0 / (g.h * g.h);
            for i in 0..u.len() {
                if !dom.free[i] {
                    out[i] = 0.0;
                    continue;
                }
                let mut rest = i;
                let mut acc = 0.0;
                for a in 0..g.dim {
                    let coord = (rest / strides[a]) % g.shape[a];
                    rest %= strides[a];
                    let lo = if coord > 0 { value(dom, u, i - strides[a]) } else { 0.0 };
                    let hi = if coord + 1 < g.shape[a] {
                        value(dom, u, i + strides[a])
                    } else {
                        0.0
                    };
                    acc += 2.0 * u[i] - lo - hi;
                }
                out[i] = acc * inv_h2;
            }
        }
    }
}

pub(crate) fn energy(dom: &Domain, u: &[f64]) -> f64 {
    match &dom.geometry {
        Geometry::Radial(_) => exact_sum(dom.face_weights.iter().enumerate().map(|(i, w)| {
            let d = value(dom, u, i + 1) - value(dom, u, i);
            w * d * d
        })),
        Geometry::Cartesian(g) => {
            let strides = g.strides();
            let mut acc = 0.0;
            for i in 0..u.len() {
                let ui = value(dom, u, i);
                let mut rest = i;
                for a in 0..g.dim {
                    let coord = (rest / strides[a]) % g.shape[a];
                    rest %= strides[a];
                    // face towards +e_a (or the box wall)
                    let (uj, free_j) = if coord + 1 < g.shape[a] {
                        let j = i + strides[a];
                        (value(dom, u, j), dom.free[j])
                    } else {
                        (0.0, false)
                    };
                    if dom.free[i] || free_j {
                        acc += (uj - ui) * (uj - ui);
                    }
                    // wall face towards −e_a
                    if coord == 0 && dom.free[i] {
                        acc += ui * ui;
                    }
                }
            }
            acc * g.h.powi(g.dim as i32 - 2)
        }
    }
}
