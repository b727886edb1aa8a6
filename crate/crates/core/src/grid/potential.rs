use std::sync::Arc;

use super::{Domain, Geometry, GridFunction};
use crate::lorentz::LorentzExponents;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum PotentialKind {
    /// `a ≡ λ`
    Constant(f64),
    /// `a = depth` on `|x − center| < radius`, zero elsewhere.
    Well {
        radius: f64,
        depth: f64,
        center: Vec<f64>,
    },
    /// `a = −coupling·|x|⁻²`.
    Hardy { coupling: f64 },
    /// One value per cell of the target domain.
    Sampled(Vec<f64>),
}

/// A potential `a(x)` with its Lorentz exponents and optional pointwise cap `M`
/// (`a ≤ M`) and floor (`a ≥ floor`).
#[derive(Clone, Debug, PartialEq)]
pub struct PotentialSpec {
    pub kind: PotentialKind,
    pub exponents: LorentzExponents,
    pub cap: Option<f64>,
    pub floor: Option<f64>,
}

impl PotentialSpec {
    pub fn new(kind: PotentialKind, exponents: LorentzExponents) -> Self {
        Self {
            kind,
            exponents,
            cap: None,
            floor: None,
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(PotentialKind::Constant(0.0), LorentzExponents::critical(dim))
    }

    pub fn constant(lambda: f64, dim: usize) -> Self {
        Self::new(PotentialKind::Constant(lambda), LorentzExponents::critical(dim))
    }

    /// Well centred at the origin.
    pub fn well(radius: f64, depth: f64, dim: usize) -> Self {
        Self::new(
            PotentialKind::Well {
                radius,
                depth,
                center: vec![0.0; dim],
            },
            LorentzExponents::critical(dim),
        )
    }

    /// `−coupling·|x|⁻²`, which lies in `L^{n/2,∞}` only.
    pub fn hardy(coupling: f64, dim: usize) -> Self {
        Self::new(
            PotentialKind::Hardy { coupling },
            LorentzExponents::weak(dim as f64 / 2.0),
        )
    }

    pub fn with_cap(mut self, cap: f64) -> Self {
        self.cap = Some(cap);
        self
    }

    pub fn with_floor(mut self, floor: f64) -> Self {
        self.floor = Some(floor);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if let PotentialKind::Well { radius, depth, .. } = &self.kind {
            if !(*depth < 0.0) || !(*radius > 0.0) {
                return Err(Error::precondition("a well needs depth < 0 and radius > 0"));
            }
            if let Some(cap) = self.cap {
                if cap < 0.0 {
                    return Err(Error::precondition("well cap must be >= 0"));
                }
            }
        }
        if let (Some(c), Some(f)) = (self.cap, self.floor) {
            if f > c {
                return Err(Error::precondition("floor exceeds cap"));
            }
        }
        Ok(())
    }

    /// Cell values of the potential on `domain`, floor then cap applied.
    ///
    /// The Hardy kind is sampled by exact shell averages of `|x|⁻²` on radial meshes;
    /// on Cartesian grids `|x|` is clamped below by `h/2`.
    pub fn sample(&self, domain: &Domain) -> Result<Vec<f64>> {
        self.validate()?;
        let raw: Vec<f64> = match &self.kind {
            PotentialKind::Constant(l) => vec![*l; domain.len()],
            PotentialKind::Well {
                radius,
                depth,
                center,
            } => {
                if center.len() != domain.dim() {
                    return Err(Error::structural("well centre dimension mismatch"));
                }
                if domain.is_radial() && center.iter().any(|&c| c != 0.0) {
                    return Err(Error::Geometry(
                        "radial meshes only hold wells centred at the origin".into(),
                    ));
                }
                (0..domain.len())
                    .map(|i| {
                        let p = domain.point(i);
                        let d2: f64 = p.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum();
                        if d2 < radius * radius {
                            *depth
                        } else {
                            0.0
                        }
                    })
                    .collect()
            }
            PotentialKind::Hardy { coupling } => hardy_samples(domain)
                .into_iter()
                .map(|v| -coupling * v)
                .collect(),
            PotentialKind::Sampled(v) => {
                if v.len() != domain.len() {
                    return Err(Error::structural(format!(
                        "sampled potential has {} values, domain has {} cells",
                        v.len(),
                        domain.len()
                    )));
                }
                v.clone()
            }
        };
        Ok(raw
            .into_iter()
            .map(|mut a| {
                if let Some(f) = self.floor {
                    a = a.max(f);
                }
                if let Some(c) = self.cap {
                    a = a.min(c);
                }
                a
            })
            .collect())
    }

    pub fn sample_grid(&self, domain: &Arc<Domain>) -> Result<GridFunction> {
        GridFunction::new(domain.clone(), self.sample(domain)?)
    }
}

fn hardy_samples(domain: &Domain) -> Vec<f64> {
    match domain.geometry() {
        Geometry::Radial(m) => {
            let n = m.dim as i32;
            let h = m.h();
            let omega = domain.sphere_measure();
            (0..m.nodes)
                .map(|i| {
                    let r = m.r(i);
                    let lo = (r - 0.5 * h).max(0.0);
                    let hi = (r + 0.5 * h).min(m.radius);
                    let integral = omega * (hi.powi(n - 2) - lo.powi(n - 2)) / (n - 2) as f64;
                    integral / domain.volumes()[i]
                })
                .collect()
        }
        Geometry::Cartesian(g) => (0..g.len())
            .map(|i| {
                let r = domain.radius_of(i).max(0.5 * g.h);
                1.0 / (r * r)
            })
            .collect(),
    }
}
