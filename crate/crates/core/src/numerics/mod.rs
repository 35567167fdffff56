//! Periodic spectral primitives and small dense linear algebra.
//!
//! Everything here is deliberately sized for desk-scale problems: the discrete
//! Fourier transform is a hand-rolled O(N²) sum (grids stay at or below 512
//! nodes), eigenvalues come from cyclic Jacobi sweeps on dense symmetric
//! matrices of order ≲ 130, and linear systems are solved by partial-pivot LU
//! or by a restart-free preconditioned GMRES. No external transform or linear
//! algebra dependency is used.

pub mod fourier;
pub mod krylov;
pub mod linalg;
pub mod root;

pub use fourier::{fourier_coefficients, fourier_diff, periodic_quadrature};
pub use krylov::{gmres, GmresOutcome, LinearOp};
pub use linalg::{sym_eig_min, sym_eigen, ComplexLu, Lu, SymEigen};
pub use root::bisect;

use crate::error::{Error, Result};
use alloc::string::ToString;
use alloc::vec::Vec;

/// Minimum admissible number of nodes on a periodic grid.
pub const MIN_THETA_NODES: usize = 8;

/// Equispaced periodic grid `θ_j = 2πj/N` on `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PeriodicGrid {
    n_theta: usize,
}

impl PeriodicGrid {
    /// Creates a grid with `n_theta` nodes; `n_theta` must be even and ≥ 8.
    pub fn new(n_theta: usize) -> Result<Self> {
        if n_theta < MIN_THETA_NODES {
            return Err(Error::InvalidGrid(alloc::format!(
                "n_theta = {n_theta} is below the minimum of {MIN_THETA_NODES}"
            )));
        }
        if n_theta % 2 != 0 {
            return Err(Error::InvalidGrid(alloc::format!(
                "n_theta = {n_theta} must be even"
            )));
        }
        Ok(Self { n_theta })
    }

    pub fn len(&self) -> usize {
        self.n_theta
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Grid spacing `2π/N`.
    pub fn spacing(&self) -> f64 {
        core::f64::consts::TAU / self.n_theta as f64
    }

    /// Node angle `θ_j`.
    pub fn node(&self, j: usize) -> f64 {
        self.spacing() * j as f64
    }

    /// All node angles, strictly increasing.
    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n_theta).map(|j| self.node(j)).collect()
    }

    /// Largest Fourier mode kept when band-limiting profiles (`N/3`).
    pub fn band_limit(&self) -> usize {
        self.n_theta / 3
    }

    pub(crate) fn check_len(&self, samples: &[f64]) -> Result<()> {
        if samples.len() != self.n_theta {
            return Err(Error::InvalidGrid(alloc::format!(
                "sample vector length {} does not match grid size {}",
                samples.len(),
                self.n_theta
            )));
        }
        Ok(())
    }
}

/// Dense symmetric matrix, row-major, symmetrized on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    order: usize,
    entries: Vec<f64>,
}

impl SymmetricMatrix {
    /// Builds the matrix from possibly unsymmetric raw entries; the stored
    /// value of each pair is the average, so `M[i][j] == M[j][i]` holds
    /// exactly afterwards.
    pub fn from_raw(order: usize, mut entries: Vec<f64>) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidGrid("matrix order must be positive".to_string()));
        }
        if entries.len() != order * order {
            return Err(Error::InvalidGrid(alloc::format!(
                "entry count {} does not match order {order}",
                entries.len()
            )));
        }
        for i in 0..order {
            for j in (i + 1)..order {
                let m = 0.5 * (entries[i * order + j] + entries[j * order + i]);
                entries[i * order + j] = m;
                entries[j * order + i] = m;
            }
        }
        Ok(Self { order, entries })
    }

    pub fn zeros(order: usize) -> Self {
        Self {
            order,
            entries: alloc::vec![0.0; order * order],
        }
    }

    pub fn identity(order: usize) -> Self {
        let mut m = Self::zeros(order);
        for i in 0..order {
            m.entries[i * order + i] = 1.0;
        }
        m
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.order + j]
    }

    /// Sets the symmetric pair `(i, j)` and `(j, i)`.
    pub fn set_sym(&mut self, i: usize, j: usize, v: f64) {
        self.entries[i * self.order + j] = v;
        self.entries[j * self.order + i] = v;
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Largest absolute entry; the scale used by eigenvalue tolerances.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0f64, |a, &x| a.max(x.abs()))
    }

    /// `y = M x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.order;
        let mut y = alloc::vec![0.0; n];
        for i in 0..n {
            let row = &self.entries[i * n..(i + 1) * n];
            y[i] = row.iter().zip(x).map(|(a, b)| a * b).sum();
        }
        y
    }

    /// Congruence transform `Pᵀ M P` for a rectangular `P` (order × cols,
    /// row-major).
    pub fn congruence(&self, p: &[f64], cols: usize) -> SymmetricMatrix {
        let n = self.order;
        assert_eq!(p.len(), n * cols);
        // tmp = M P
        let mut tmp = alloc::vec![0.0; n * cols];
        for i in 0..n {
            for k in 0..n {
                let m = self.entries[i * n + k];
                if m != 0.0 {
                    for j in 0..cols {
                        tmp[i * cols + j] += m * p[k * cols + j];
                    }
                }
            }
        }
        let mut out = alloc::vec![0.0; cols * cols];
        for i in 0..cols {
            for j in 0..cols {
                let mut acc = 0.0;
                for k in 0..n {
                    acc += p[k * cols + i] * tmp[k * cols + j];
                }
                out[i * cols + j] = acc;
            }
        }
        SymmetricMatrix::from_raw(cols, out).expect("congruence preserves squareness")
    }
}
