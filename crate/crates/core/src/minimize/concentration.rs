use crate::grid::{Domain, Geometry, GridFunction};
use crate::{critical_exponent, Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct ConcentrationDiagnostic {
    /// Decreasing radii.
    pub radii: Vec<f64>,
    /// Largest share of `∫|u|^{2*}` inside a ball of each radius.
    pub max_mass_fraction: Vec<f64>,
    /// Share inside radius `4h`.
    pub fraction_4h: f64,
    /// `fraction_4h > 0.5`.
    pub concentration_flag: bool,
}

pub(crate) const CONCENTRATION_THRESHOLD: f64 = 0.5;

/// Candidate centres: the origin on radial meshes; on Cartesian grids every fourth
/// cell along each axis plus the maximum of `|u|`.
fn candidates(dom: &Domain, u: &[f64]) -> Vec<usize> {
    match dom.geometry() {
        Geometry::Radial(_) => vec![0],
        Geometry::Cartesian(g) => {
            let mut out: Vec<usize> = (0..g.len())
                .filter(|&i| g.mask[i] && g.multi_index(i).iter().all(|k| k % 4 == 0))
                .collect();
            let argmax = (0..u.len())
                .filter(|&i| dom.free()[i])
                .max_by(|&i, &j| u[i].abs().total_cmp(&u[j].abs()).then(j.cmp(&i)));
            if let Some(m) = argmax {
                if !out.contains(&m) {
                    out.push(m);
                }
            }
            out
        }
    }
}

/// Integer offsets of lattice points within `radius/h` of the origin.
pub(crate) fn offsets(dim: usize, reach: f64) -> Vec<Vec<i64>> {
    let k = reach.floor() as i64;
    let mut out = Vec::new();
    let mut cur = vec![-k; dim];
    loop {
        let d2: i64 = cur.iter().map(|v| v * v).sum();
        if (d2 as f64) <= reach * reach * (1.0 + 1e-12) {
            out.push(cur.clone());
        }
        let mut a = 0;
        loop {
            if a == dim {
                return out;
            }
            cur[a] += 1;
            if cur[a] <= k {
                break;
            }
            cur[a] = -k;
            a += 1;
        }
    }
}

fn ball_mass(dom: &Domain, mass: &[f64], center: usize, radius: f64, offs: &[Vec<i64>]) -> f64 {
    match dom.geometry() {
        Geometry::Radial(m) => (0..m.nodes)
            .filter(|&i| m.r(i) <= radius * (1.0 + 1e-12))
            .map(|i| mass[i])
            .sum(),
        Geometry::Cartesian(g) => {
            let strides = g.strides();
            let base = g.multi_index(center);
            offs.iter()
                .filter_map(|o| {
                    let mut idx = 0usize;
                    for a in 0..g.dim {
                        let c = base[a] as i64 + o[a];
                        if c < 0 || c >= g.shape[a] as i64 {
                            return None;
                        }
                        idx += c as usize * strides[a];
                    }
                    Some(mass[idx])
                })
                .sum()
        }
    }
}

fn cell_masses(u: &GridFunction) -> Vec<f64> {
    let dom = u.domain();
    let q = critical_exponent(dom.dim());
    u.values()
        .iter()
        .zip(dom.volumes().iter().zip(dom.free()))
        .map(|(v, (w, &f))| if f { v.abs().powf(q) * w } else { 0.0 })
        .collect()
}

fn max_fraction(dom: &Domain, mass: &[f64], total: f64, cands: &[usize], radius: f64) -> f64 {
    let offs = match dom.geometry() {
        Geometry::Cartesian(g) => offsets(g.dim, radius / g.h),
        Geometry::Radial(_) => Vec::new(),
    };
    cands
        .iter()
        .map(|&c| ball_mass(dom, mass, c, radius, &offs) / total)
        .fold(0.0, f64::max)
        .min(1.0)
}

/// Share of the `2*`-mass in the heaviest ball of radius `4h`.
pub fn mass_fraction_at(u: &GridFunction, radius: f64) -> Result<f64> {
    let mass = cell_masses(u);
    let total: f64 = mass.iter().sum();
    if total == 0.0 {
        return Err(Error::domain("concentration of the zero function"));
    }
    let cands = candidates(u.domain(), u.values());
    Ok(max_fraction(u.domain(), &mass, total, &cands, radius))
}

pub fn concentration_profile(u: &GridFunction, radii: &[f64]) -> Result<ConcentrationDiagnostic> {
    if radii.iter().any(|&r| !(r > 0.0)) || radii.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::domain("radii must be positive and strictly decreasing"));
    }
    let dom = u.domain();
    let mass = cell_masses(u);
    let total: f64 = mass.iter().sum();
    if total == 0.0 {
        return Err(Error::domain("concentration of the zero function"));
    }
    let cands = candidates(dom, u.values());
    let max_mass_fraction = radii
        .iter()
        .map(|&r| max_fraction(dom, &mass, total, &cands, r))
        .collect();
    let fraction_4h = max_fraction(dom, &mass, total, &cands, 4.0 * dom.h());
    Ok(ConcentrationDiagnostic {
        radii: radii.to_vec(),
        max_mass_fraction,
        fraction_4h,
        concentration_flag: fraction_4h > CONCENTRATION_THRESHOLD,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bubbles::{bubble_eval, BubbleSpec};

    #[test]
    fn offsets_count() {
        // 3D lattice points with |k| <= 1: the centre and 6 neighbours
        assert_eq!(offsets(3, 1.0).len(), 7);
        assert_eq!(offsets(2, 2.0).len(), 13);
    }

    #[test]
    fn spread_field_is_not_concentrated() {
        let d = Domain::cartesian_ball(3, 1.0, 0.05).unwrap();
        let u = GridFunction::from_fn(d, |x| 1.0 - x.iter().map(|v| v * v).sum::<f64>());
        let c = concentration_profile(&u, &[0.8, 0.4, 0.2]).unwrap();
        assert!(!c.concentration_flag);
        assert!(c.fraction_4h < 0.1);
        assert!(c.max_mass_fraction.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn narrow_bubble_is_concentrated() {
        let h = 1e-3;
        let d = Domain::radial_ball(5, 1.0, 1001).unwrap();
        let b = BubbleSpec::new(5, 2.0 * h).unwrap();
        let u = GridFunction::from_fn(d, |x| bubble_eval(&b, x));
        let c = concentration_profile(&u, &[0.1, 0.01, 0.001]).unwrap();
        assert!(c.concentration_flag, "{c:?}");
        let d3 = Domain::cartesian_ball(3, 1.0, 0.02).unwrap();
        let b3 = BubbleSpec::new(3, 0.04).unwrap().with_center(vec![0.01, 0.01, 0.01]).unwrap();
        let u3 = GridFunction::from_fn(d3, |x| bubble_eval(&b3, x));
        assert!(concentration_profile(&u3, &[0.5]).unwrap().concentration_flag);
    }
}
