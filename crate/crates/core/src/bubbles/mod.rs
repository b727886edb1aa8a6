//! Talenti bubbles `u_ε(x) = [n(n−2)ε²]^{(n−2)/4} / (ε² + |x−x₀|²)^{(n−2)/2}`, optionally
//! multiplied by a cutoff `η((x−x₀)/μ)` that is `1` on `B_μ` and `0` outside `B_{2μ}`.

mod deficit;
mod integrals;

use crate::{Error, Result};

pub(crate) use deficit::sign_bracket_4d;
pub use deficit::{
    deficit_expansion, deficit_expansion_4d, deficit_expansion_4d_with, deficit_expansion_with, phi,
    Deficit4d, DeficitFit, CUTOFF_GRADIENT_SUP,
};
pub use integrals::{
    bubble_energy, bubble_energy_with, bubble_mass, bubble_mass_with, energy_deficit,
    mass_deficit, sobolev_constant, sobolev_constant_with,
};

#[derive(Clone, Debug, PartialEq)]
pub struct BubbleSpec {
    pub n: usize,
    pub eps: f64,
    pub center: Vec<f64>,
    /// Cutoff radius `μ`; `None` leaves the bubble uncut.
    pub cutoff: Option<f64>,
}

impl BubbleSpec {
    /// Uncut bubble centred at the origin.
    pub fn new(n: usize, eps: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::Unsupported(format!("bubbles need n >= 3, got {n}")));
        }
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::domain(format!("eps must be positive, got {eps}")));
        }
        Ok(Self {
            n,
            eps,
            center: vec![0.0; n],
            cutoff: None,
        })
    }

    pub fn with_cutoff(mut self, mu: f64) -> Result<Self> {
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::domain(format!("cutoff radius must be positive, got {mu}")));
        }
        self.cutoff = Some(mu);
        Ok(self)
    }

    pub fn with_center(mut self, center: Vec<f64>) -> Result<Self> {
        if center.len() != self.n {
            return Err(Error::structural("bubble centre has the wrong dimension"));
        }
        self.center = center;
        Ok(self)
    }

    /// Value at distance `r` from the centre.
    pub fn radial(&self, r: f64) -> f64 {
        let u = talenti(self.n, self.eps, r);
        match self.cutoff {
            Some(mu) => u * cutoff(r / mu),
            None => u,
        }
    }

    /// Radial derivative at distance `r`.
    pub fn radial_derivative(&self, r: f64) -> f64 {
        let du = talenti_derivative(self.n, self.eps, r);
        match self.cutoff {
            Some(mu) => {
                let s = r / mu;
                du * cutoff(s) + talenti(self.n, self.eps, r) * cutoff_derivative(s) / mu
            }
            None => du,
        }
    }
}

pub fn bubble_eval(spec: &BubbleSpec, x: &[f64]) -> f64 {
    let r = x
        .iter()
        .zip(&spec.center)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    spec.radial(r)
}

fn amplitude(n: usize) -> f64 {
    ((n * (n - 2)) as f64).powf((n - 2) as f64 / 4.0)
}

pub(crate) fn talenti(n: usize, eps: f64, r: f64) -> f64 {
    let s = r / eps;
    let k = (n - 2) as f64 / 2.0;
    amplitude(n) * eps.powf(-k) * (1.0 + s * s).powf(-k)
}

pub(crate) fn talenti_derivative(n: usize, eps: f64, r: f64) -> f64 {
    let s = r / eps;
    -amplitude(n) * (n - 2) as f64 * eps.powf(-(n as f64) / 2.0) * s * (1.0 + s * s).powf(-(n as f64) / 2.0)
}

/// `η(s)`: `1` for `s ≤ 1`, `0` for `s ≥ 2`, quintic smoothstep in between (C²).
pub fn cutoff(s: f64) -> f64 {
    if s <= 1.0 {
        1.0
    } else if s >= 2.0 {
        0.0
    } else {
        let t = s - 1.0;
        1.0 - t * t * t * (10.0 - 15.0 * t + 6.0 * t * t)
    }
}

pub fn cutoff_derivative(s: f64) -> f64 {
    if s <= 1.0 || s >= 2.0 {
        0.0
    } else {
        let t = s - 1.0;
        -30.0 * t * t * (1.0 - t) * (1.0 - t)
    }
}
