use std::sync::Arc;

use super::{check_potential, rayleigh_quotient_sampled};
use crate::bubbles::{bubble_energy, bubble_eval, bubble_mass, sign_bracket_4d, sobolev_constant, BubbleSpec};
use crate::quad::QuadOptions;
use crate::grid::{Domain, Geometry, GridFunction, PotentialSpec};
use crate::{critical_exponent, Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct NegativityCenter {
    pub point: Vec<f64>,
    pub index: usize,
    /// Average of `a` on the smallest ball.
    pub value: f64,
    /// Whether the oscillation test passed at both scales.
    pub stable: bool,
}

/// Relative bound on `avg |a − a(x₀)|^{n/2}` at the two finest radii.
const OSCILLATION_TOL: f64 = 1e-2;

/// Lebesgue-point style choice of the bubble centre: local averages of `a` over
/// balls of radius `h` and `2h`. Among cells whose averages are negative and whose
/// oscillation `avg|a − a(x₀)|^{n/2}` is small at both radii, the most negative
/// finest average wins; ties go to the smallest cell index. Radial meshes only
/// admit the origin.
pub fn select_negativity_center(a: &PotentialSpec, dom: &Arc<Domain>) -> Result<NegativityCenter> {
    let s = a.sample(dom)?;
    select_sampled(dom, &s)
}

pub(crate) fn select_sampled(dom: &Domain, a: &[f64]) -> Result<NegativityCenter> {
    check_potential(dom, a)?;
    let free = dom.free();
    if !(0..a.len()).any(|i| free[i] && a[i] < 0.0) {
        return Err(Error::precondition("the potential has no negative cell"));
    }
    let half_n = dom.dim() as f64 / 2.0;
    let h = dom.h();
    match dom.geometry() {
        Geometry::Radial(m) => {
            let stats: Vec<(f64, f64)> = [h, 2.0 * h]
                .iter()
                .map(|&r| {
                    let idx: Vec<usize> = (0..m.nodes).filter(|&i| free[i] && m.r(i) <= r * (1.0 + 1e-12)).collect();
                    local_stats(dom, a, &idx, a[0], half_n)
                })
                .collect();
            let value = stats[0].0;
            if !(value < 0.0) {
                return Err(Error::Geometry(
                    "radial meshes need the potential to be negative at the origin".into(),
                ));
            }
            let stable = stats.iter().all(|s| s.1 <= OSCILLATION_TOL * a[0].abs().powf(half_n));
            Ok(NegativityCenter {
                point: vec![0.0; m.dim],
                index: 0,
                value,
                stable,
            })
        }
        Geometry::Cartesian(g) => {
            let strides = g.strides();
            let offs: Vec<Vec<Vec<i64>>> = [1.0, 2.0]
                .iter()
                .map(|&k| super::concentration::offsets(g.dim, k))
                .collect();
            let mut best: Option<(bool, f64, usize)> = None;
            for i in 0..g.len() {
                if !free[i] || !(a[i] < 0.0) {
                    continue;
                }
                let base = g.multi_index(i);
                let stats: Vec<(f64, f64)> = offs
                    .iter()
                    .map(|o| {
                        let idx: Vec<usize> = o
                            .iter()
                            .filter_map(|off| {
                                let mut j = 0usize;
                                for ax in 0..g.dim {
                                    let c = base[ax] as i64 + off[ax];
                                    if c < 0 || c >= g.shape[ax] as i64 {
                                        return None;
                                    }
                                    j += c as usize * strides[ax];
                                }
                                free[j].then_some(j)
                            })
                            .collect();
                        local_stats(dom, a, &idx, a[i], half_n)
                    })
                    .collect();
                let value = stats[0].0;
                if !(value < 0.0) {
                    continue;
                }
                let stable = stats.iter().all(|s| s.1 <= OSCILLATION_TOL * a[i].abs().powf(half_n));
                let better = match best {
                    None => true,
                    Some((bs, bv, _)) => (stable && !bs) || (stable == bs && value < bv),
                };
                if better {
                    best = Some((stable, value, i));
                }
            }
            let (stable, value, index) =
                best.ok_or_else(|| Error::precondition("no cell with a negative local average"))?;
            Ok(NegativityCenter {
                point: g.center(index),
                index,
                value,
                stable,
            })
        }
    }
}

/// Mean of `a` and mean of `|a − a₀|^{n/2}` over the listed cells.
fn local_stats(dom: &Domain, a: &[f64], idx: &[usize], a0: f64, half_n: f64) -> (f64, f64) {
    let vol = dom.volumes();
    let w: f64 = idx.iter().map(|&j| vol[j]).sum();
    let mean = idx.iter().map(|&j| a[j] * vol[j]).sum::<f64>() / w;
    let osc = idx.iter().map(|&j| (a[j] - a0).abs().powf(half_n) * vol[j]).sum::<f64>() / w;
    (mean, osc)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BubbleTest {
    pub center: NegativityCenter,
    /// `ε` values actually used.
    pub eps_list: Vec<f64>,
    pub quotients: Vec<f64>,
    pub min_quotient: f64,
    /// Largest relative gap between grid and quadrature quotients of the same bubbles with `a ≡ 0`.
    pub margin: f64,
    /// `min_quotient < S(1 − margin)`.
    pub strict: bool,
    pub sobolev: f64,
    /// Four dimensions: `R` from the sign bracket, bounding the usable `ε < μ/R`.
    pub bracket_radius: Option<f64>,
}

/// Evaluates the quotient of cut bubbles centred at the selected negativity centre.
pub fn brezis_nirenberg_bubble_test(
    a: &PotentialSpec,
    dom: &Arc<Domain>,
    eps_list: &[f64],
    mu: f64,
) -> Result<BubbleTest> {
    let n = dom.dim();
    let s = sobolev_constant(n)?;
    let sampled = a.sample(dom)?;
    let center = select_sampled(dom, &sampled)?;
    if !(mu > 0.0) {
        return Err(Error::domain("cutoff radius must be positive"));
    }
    if eps_list.is_empty() || eps_list.iter().any(|&e| !(e > 0.0 && e <= mu / 4.0)) {
        return Err(Error::precondition(format!("every eps must lie in (0, mu/4 = {}]", mu / 4.0)));
    }
    check_support(dom, &center.point, 2.0 * mu)?;

    let (eps_used, bracket_radius) = if n == 4 {
        let probe: Vec<f64> = (3..8).map(|k| mu / 2f64.powi(k)).collect();
        let r = sign_bracket_4d(center.value, mu, &probe, QuadOptions::default())?
            .sign_radius.ok_or_else(|| {
            Error::precondition("sign bracket stays non-negative on the radius schedule")
        })?;
        let used: Vec<f64> = eps_list.iter().copied().filter(|&e| e < mu / r).collect();
        if used.is_empty() {
            return Err(Error::precondition(format!("no eps below mu/R = {}", mu / r)));
        }
        (used, Some(r))
    } else {
        (eps_list.to_vec(), None)
    };

    let zero = vec![0.0; dom.len()];
    let q = critical_exponent(n);
    let mut quotients = Vec::with_capacity(eps_used.len());
    let mut margin: f64 = 0.0;
    for &e in &eps_used {
        let spec = BubbleSpec::new(n, e)?.with_cutoff(mu)?.with_center(center.point.clone())?;
        let u = GridFunction::from_fn(dom.clone(), |x| bubble_eval(&spec, x));
        quotients.push(rayleigh_quotient_sampled(&u, &sampled)?);
        let grid0 = rayleigh_quotient_sampled(&u, &zero)?;
        let exact0 = bubble_energy(&spec, 0.0)? / bubble_mass(&spec).powf(2.0 / q);
        margin = margin.max((grid0 - exact0).abs() / s);
    }
    let min_quotient = quotients.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(BubbleTest {
        center,
        eps_list: eps_used,
        quotients,
        min_quotient,
        margin,
        strict: min_quotient < s * (1.0 - margin),
        sobolev: s,
        bracket_radius,
    })
}

fn check_support(dom: &Domain, x0: &[f64], radius: f64) -> Result<()> {
    match dom.geometry() {
        Geometry::Radial(m) => {
            if x0.iter().any(|&c| c != 0.0) {
                return Err(Error::Geometry("radial bubbles must be centred at the origin".into()));
            }
            if radius > m.radius {
                return Err(Error::Geometry(format!(
                    "cutoff support radius {radius} exceeds the ball radius {}",
                    m.radius
                )));
            }
        }
        Geometry::Cartesian(g) => {
            for a in 0..g.dim {
                let lo = g.origin[a] - 0.5 * g.h;
                let hi = g.origin[a] + (g.shape[a] as f64 - 0.5) * g.h;
                if x0[a] - radius < lo || x0[a] + radius > hi {
                    return Err(Error::Geometry("cutoff support leaves the grid box".into()));
                }
            }
            for i in 0..g.len() {
                if !g.mask[i] {
                    let c = g.center(i);
                    let d2: f64 = c.iter().zip(x0).map(|(p, q)| (p - q) * (p - q)).sum();
                    if d2 < radius * radius {
                        return Err(Error::Geometry("cutoff support leaves the domain mask".into()));
                    }
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{CartesianGrid, PotentialKind};
    use crate::lorentz::LorentzExponents;

    #[test]
    fn radial_well_center() {
        let d = Domain::radial_ball(5, 1.0, 101).unwrap();
        let c = select_negativity_center(&PotentialSpec::well(0.5, -4.0, 5), &d).unwrap();
        assert_eq!(c.point, vec![0.0; 5]);
        assert_eq!(c.value, -4.0);
        assert!(c.stable);
        assert!(matches!(
            select_negativity_center(&PotentialSpec::zero(5), &d),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn constant_negative_tie_breaks_to_first_cell() {
        let g = CartesianGrid::new(vec![5, 5, 5], 0.2, vec![0.0; 3], None).unwrap();
        let d = Domain::new(Geometry::Cartesian(g));
        let c = select_negativity_center(&PotentialSpec::constant(-1.0, 3), &d).unwrap();
        assert_eq!(c.index, 0);
        assert_eq!(c.value, -1.0);
    }

    #[test]
    fn deeper_of_two_wells() {
        let d = Domain::cartesian_ball(3, 1.0, 0.05).unwrap();
        let a: Vec<f64> = (0..d.len())
            .map(|i| {
                let x = d.point(i);
                let r1: f64 = (x[0] + 0.5).powi(2) + x[1] * x[1] + x[2] * x[2];
                let r2: f64 = (x[0] - 0.5).powi(2) + x[1] * x[1] + x[2] * x[2];
                if r1 < 0.04 {
                    -1.0
                } else if r2 < 0.04 {
                    -3.0
                } else {
                    0.0
                }
            })
            .collect();
        let spec = PotentialSpec::new(PotentialKind::Sampled(a), LorentzExponents::critical(3));
        let c = select_negativity_center(&spec, &d).unwrap();
        let r2: f64 = (c.point[0] - 0.5).powi(2) + c.point[1].powi(2) + c.point[2].powi(2);
        assert!(r2 < 0.04);
        assert!((c.value + 3.0).abs() < 1e-14);
    }

    #[test]
    fn support_must_fit() {
        let d = Domain::radial_ball(5, 1.0, 201).unwrap();
        let a = PotentialSpec::well(0.5, -4.0, 5);
        assert!(matches!(
            brezis_nirenberg_bubble_test(&a, &d, &[0.1], 0.6),
            Err(Error::Geometry(_))
        ));
        assert!(matches!(
            brezis_nirenberg_bubble_test(&a, &d, &[0.2], 0.5),
            Err(Error::Precondition(_))
        ));
    }
}
