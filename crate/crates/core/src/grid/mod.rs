//! Discrete domains and fields standing in for `H¹₀(Ω)`.
//!
//! Two geometries are supported:
//!
//! * a cell-centred Cartesian box of spacing `h` with a boolean mask selecting the
//!   cells of `Ω`; fields vanish outside the mask;
//! * a radial mesh `r_i = i·h`, `i = 0..N`, on the ball `B_R(0)`, with the last node
//!   pinned to zero and a reflecting ghost at the origin (`u′(0) = 0`).
//!
//! Every cell carries a volume (`hⁿ` or the shell volume clipped to `[0, R]`), so all
//! integrals are plain weighted sums. The discrete `−Δ` and the Dirichlet energy are
//! built from the same face differences, which makes
//! `dirichlet_energy(u) = Σ u·(−Δu)·vol` hold up to rounding.

mod io;
mod ops;
mod potential;
mod solve;

use std::sync::Arc;

use crate::{sphere_measure, Error, Result};

pub use io::{load_grid, read_grid, store_grid, write_grid};
pub use ops::{dirichlet_energy, laplacian_apply, lp_norm};
pub(crate) use ops::{energy, lp_sum, neg_laplacian_into};
pub use potential::{PotentialKind, PotentialSpec};
pub use solve::{cg_solve, CgReport, Identity, LinearOperator, NegLaplacian};

#[derive(Clone, Debug, PartialEq)]
pub struct CartesianGrid {
    pub dim: usize,
    pub shape: Vec<usize>,
    pub h: f64,
    /// Centre of the first cell along every axis.
    pub origin: Vec<f64>,
    /// Membership in `Ω`, row-major with the last index fastest.
    pub mask: Vec<bool>,
}

impl CartesianGrid {
    pub fn new(shape: Vec<usize>, h: f64, origin: Vec<f64>, mask: Option<Vec<bool>>) -> Result<Self> {
        let dim = shape.len();
        if dim < 3 {
            return Err(Error::structural(format!("dimension {dim} < 3")));
        }
        if origin.len() != dim {
            return Err(Error::structural("origin length differs from dimension"));
        }
        if shape.contains(&0) || !(h > 0.0 && h.is_finite()) {
            return Err(Error::structural("empty shape or non-positive spacing"));
        }
        let len: usize = shape.iter().product();
        let mask = mask.unwrap_or_else(|| vec![true; len]);
        if mask.len() != len {
            return Err(Error::structural(format!(
                "mask has {} entries, shape needs {len}",
                mask.len()
            )));
        }
        Ok(Self {
            dim,
            shape,
            h,
            origin,
            mask,
        })
    }

    /// Box of `ceil(2R/h)` cells per axis, centred at the origin, masking the open ball `|x| < R`.
    pub fn ball(dim: usize, radius: f64, h: f64) -> Result<Self> {
        let k = (2.0 * radius / h).round().max(1.0) as usize;
        let start = -0.5 * (k as f64 - 1.0) * h;
        let shape = vec![k; dim];
        let mut grid = Self::new(shape, h, vec![start; dim], None)?;
        for i in 0..grid.mask.len() {
            let r2: f64 = grid.center(i).iter().map(|x| x * x).sum();
            grid.mask[i] = r2 < radius * radius;
        }
        Ok(grid)
    }

    pub fn len(&self) -> usize {
        self.mask.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mask.is_empty()
    }

    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.dim];
        for a in (0..self.dim - 1).rev() {
            strides[a] = strides[a + 1] * self.shape[a + 1];
        }
        strides
    }

    pub fn multi_index(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.dim];
        for a in (0..self.dim).rev() {
            out[a] = idx % self.shape[a];
            idx /= self.shape[a];
        }
        out
    }

    pub fn center(&self, idx: usize) -> Vec<f64> {
        self.multi_index(idx)
            .iter()
            .zip(&self.origin)
            .map(|(&i, &o)| o + i as f64 * self.h)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RadialMesh {
    pub dim: usize,
    /// Node count including the origin and the boundary node `r = R`.
    pub nodes: usize,
    pub radius: f64,
}

impl RadialMesh {
    pub fn new(dim: usize, radius: f64, nodes: usize) -> Result<Self> {
        if dim < 3 {
            return Err(Error::structural(format!("dimension {dim} < 3")));
        }
        if nodes < 3 || !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::structural("radial mesh needs >= 3 nodes and R > 0"));
        }
        Ok(Self { dim, nodes, radius })
    }

    pub fn h(&self) -> f64 {
        self.radius / (self.nodes - 1) as f64
    }

    pub fn r(&self, i: usize) -> f64 {
        if i + 1 == self.nodes {
            self.radius
        } else {
            i as f64 * self.h()
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Geometry {
    Cartesian(CartesianGrid),
    Radial(RadialMesh),
}

/// A discrete domain with its cell volumes and Dirichlet structure.
#[derive(Clone, Debug, PartialEq)]
pub struct Domain {
    geometry: Geometry,
    volumes: Vec<f64>,
    free: Vec<bool>,
    sphere_measure: f64,
    // radial: ω r_{i+½}^{n−1} / h for the face between nodes i and i+1
    face_weights: Vec<f64>,
}

impl Domain {
    pub fn new(geometry: Geometry) -> Arc<Self> {
        let (volumes, free, face_weights, dim) = match &geometry {
            Geometry::Cartesian(g) => {
                let vol = g.h.powi(g.dim as i32);
                let volumes = g.mask.iter().map(|&m| if m { vol } else { 0.0 }).collect();
                (volumes, g.mask.clone(), Vec::new(), g.dim)
            }
            Geometry::Radial(m) => {
                let n = m.dim as i32;
                let omega = sphere_measure(m.dim);
                let h = m.h();
                let volumes = (0..m.nodes)
                    .map(|i| {
                        let r = m.r(i);
                        let lo = (r - 0.5 * h).max(0.0);
                        let hi = (r + 0.5 * h).min(m.radius);
                        omega * (hi.powi(n) - lo.powi(n)) / n as f64
                    })
                    .collect();
                let free = (0..m.nodes).map(|i| i + 1 < m.nodes).collect();
                let face_weights = (0..m.nodes - 1)
                    .map(|i| omega * ((i as f64 + 0.5) * h).powi(n - 1) / h)
                    .collect();
                (volumes, free, face_weights, m.dim)
            }
        };
        Arc::new(Self {
            geometry,
            volumes,
            free,
            sphere_measure: sphere_measure(dim),
            face_weights,
        })
    }

    pub fn radial_ball(dim: usize, radius: f64, nodes: usize) -> Result<Arc<Self>> {
        Ok(Self::new(Geometry::Radial(RadialMesh::new(dim, radius, nodes)?)))
    }

    pub fn cartesian_ball(dim: usize, radius: f64, h: f64) -> Result<Arc<Self>> {
        Ok(Self::new(Geometry::Cartesian(CartesianGrid::ball(dim, radius, h)?)))
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    pub fn dim(&self) -> usize {
        match &self.geometry {
            Geometry::Cartesian(g) => g.dim,
            Geometry::Radial(m) => m.dim,
        }
    }

    pub fn h(&self) -> f64 {
        match &self.geometry {
            Geometry::Cartesian(g) => g.h,
            Geometry::Radial(m) => m.h(),
        }
    }

    pub fn is_radial(&self) -> bool {
        matches!(self.geometry, Geometry::Radial(_))
    }

    pub fn len(&self) -> usize {
        self.volumes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.volumes.is_empty()
    }

    pub fn volumes(&self) -> &[f64] {
        &self.volumes
    }

    /// Cells carrying an unknown of `H¹₀`; all others are held at zero.
    pub fn free(&self) -> &[bool] {
        &self.free
    }

    pub fn sphere_measure(&self) -> f64 {
        self.sphere_measure
    }

    pub fn measure(&self) -> f64 {
        self.volumes.iter().sum()
    }

    /// Cell centre. Radial nodes are reported on the first axis.
    pub fn point(&self, i: usize) -> Vec<f64> {
        match &self.geometry {
            Geometry::Cartesian(g) => g.center(i),
            Geometry::Radial(m) => {
                let mut p = vec![0.0; m.dim];
                p[0] = m.r(i);
                p
            }
        }
    }

    /// `|x|` at the cell centre.
    pub fn radius_of(&self, i: usize) -> f64 {
        match &self.geometry {
            Geometry::Cartesian(g) => g.center(i).iter().map(|x| x * x).sum::<f64>().sqrt(),
            Geometry::Radial(m) => m.r(i),
        }
    }

    /// `Σ u v vol` over free cells.
    pub fn dot(&self, u: &[f64], v: &[f64]) -> f64 {
        u.iter()
            .zip(v)
            .zip(self.volumes.iter().zip(&self.free))
            .filter(|(_, (_, &f))| f)
            .map(|((a, b), (w, _))| a * b * w)
            .sum()
    }

    pub fn norm(&self, u: &[f64]) -> f64 {
        self.dot(u, u).sqrt()
    }

    fn same_as(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        Arc::ptr_eq(self, other) || **self == **other
    }
}

/// Real values per cell of a [`Domain`].
#[derive(Clone, Debug)]
pub struct GridFunction {
    domain: Arc<Domain>,
    values: Vec<f64>,
}

impl PartialEq for GridFunction {
    fn eq(&self, other: &Self) -> bool {
        self.domain.same_as(&other.domain) && self.values == other.values
    }
}

impl GridFunction {
    pub fn new(domain: Arc<Domain>, values: Vec<f64>) -> Result<Self> {
        if values.len() != domain.len() {
            return Err(Error::structural(format!(
                "{} values for a domain of {} cells",
                values.len(),
                domain.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("non-finite grid value"));
        }
        Ok(Self { domain, values })
    }

    pub fn zeros(domain: Arc<Domain>) -> Self {
        let values = vec![0.0; domain.len()];
        Self { domain, values }
    }

    /// Samples `f` at cell centres, setting non-free cells to zero.
    pub fn from_fn(domain: Arc<Domain>, f: impl Fn(&[f64]) -> f64) -> Self {
        let values = (0..domain.len())
            .map(|i| if domain.free[i] { f(&domain.point(i)) } else { 0.0 })
            .collect();
        Self { domain, values }
    }

    /// Samples `f` at every cell centre, including boundary cells (potentials).
    pub fn sample_all(domain: Arc<Domain>, f: impl Fn(&[f64]) -> f64) -> Self {
        let values = (0..domain.len()).map(|i| f(&domain.point(i))).collect();
        Self { domain, values }
    }

    pub fn domain(&self) -> &Arc<Domain> {
        &self.domain
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        Self::new(self.domain.clone(), values)
    }

    pub fn scaled(&self, t: f64) -> Self {
        Self {
            domain: self.domain.clone(),
            values: self.values.iter().map(|v| v * t).collect(),
        }
    }

    /// Zeroes every non-free cell.
    pub fn enforce_dirichlet(&mut self) {
        for (v, &f) in self.values.iter_mut().zip(&self.domain.free) {
            if !f {
                *v = 0.0;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values
            .iter()
            .zip(&self.domain.free)
            .all(|(v, &f)| !f || *v == 0.0)
    }
}
