//! Strong-form collocation operator of the plane Lamé system on the mapped
//! annulus.
//!
//! Interior rows collocate both components of `div ℂE(u) = μΔu + (μ+λ)∇div u`;
//! the cavity rows (s = 0) collocate the two traction components
//! `ℂE(u)[ν] = 0`, and the outer rows (s = 1) impose the Dirichlet data.

use super::map::MappedAnnulus;
use super::LameParams;
use crate::geometry::BoundaryFrame;
use crate::numerics::LinearOp;
use alloc::vec::Vec;

/// Splits a two-component nodal vector.
pub(crate) fn split2(x: &[f64]) -> (&[f64], &[f64]) {
    let n = x.len() / 2;
    (&x[..n], &x[n..])
}

pub(crate) fn split2_mut(x: &mut [f64]) -> (&mut [f64], &mut [f64]) {
    let n = x.len() / 2;
    x.split_at_mut(n)
}

/// Nodal strain components of a displacement field.
pub(crate) struct Strain {
    pub e11: Vec<f64>,
    pub e22: Vec<f64>,
    pub e12: Vec<f64>,
}

pub(crate) fn strain(map: &MappedAnnulus, u1: &[f64], u2: &[f64]) -> Strain {
    let n = map.len();
    let mut u1x = alloc::vec![0.0; n];
    let mut u1y = alloc::vec![0.0; n];
    let mut u2x = alloc::vec![0.0; n];
    let mut u2y = alloc::vec![0.0; n];
    map.grad(u1, &mut u1x, &mut u1y);
    map.grad(u2, &mut u2x, &mut u2y);
    let mut e12 = alloc::vec![0.0; n];
    for i in 0..n {
        e12[i] = 0.5 * (u1y[i] + u2x[i]);
    }
    Strain {
        e11: u1x,
        e22: u2y,
        e12,
    }
}

/// `ℂξ` applied to a strain field: returns (S11, S22, S12).
pub(crate) fn stress(p: &LameParams, e: &Strain) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let n = e.e11.len();
    let mut s11 = alloc::vec![0.0; n];
    let mut s22 = alloc::vec![0.0; n];
    let mut s12 = alloc::vec![0.0; n];
    for i in 0..n {
        let tr = e.e11[i] + e.e22[i];
        s11[i] = 2.0 * p.mu * e.e11[i] + p.lambda * tr;
        s22[i] = 2.0 * p.mu * e.e22[i] + p.lambda * tr;
        s12[i] = 2.0 * p.mu * e.e12[i];
    }
    (s11, s22, s12)
}

/// Collocation operator with traction and Dirichlet rows substituted in.
pub struct LameCollocation<'a> {
    pub map: &'a MappedAnnulus,
    pub params: LameParams,
    /// Outward cavity normal ν(θ_j) at the s = 0 nodes.
    pub normal: Vec<[f64; 2]>,
}

impl<'a> LameCollocation<'a> {
    pub fn new(map: &'a MappedAnnulus, frame: &BoundaryFrame, params: LameParams) -> Self {
        Self {
            map,
            params,
            normal: frame.normal.clone(),
        }
    }

    /// Right-hand side for radial-stretch Dirichlet data `u₀ = αR0 σ(θ)`.
    pub fn rhs_radial_stretch(&self, alpha: f64) -> Vec<f64> {
        let map = self.map;
        let n = map.len();
        let mut b = alloc::vec![0.0; 2 * n];
        let k_out = map.n_s - 1;
        let scale = alpha * map.outer_radius;
        for j in 0..map.n_theta {
            let idx = j * map.n_s + k_out;
            b[idx] = scale * map.cos_t[j];
            b[n + idx] = scale * map.sin_t[j];
        }
        b
    }
}

impl LinearOp for LameCollocation<'_> {
    fn dim(&self) -> usize {
        2 * self.map.len()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let map = self.map;
        let p = &self.params;
        let n = map.len();
        let ns = map.n_s;
        let (u1, u2) = split2(x);

        let mut u1x = alloc::vec![0.0; n];
        let mut u1y = alloc::vec![0.0; n];
        let mut u2x = alloc::vec![0.0; n];
        let mut u2y = alloc::vec![0.0; n];
        map.grad(u1, &mut u1x, &mut u1y);
        map.grad(u2, &mut u2x, &mut u2y);

        let mut div = alloc::vec![0.0; n];
        for i in 0..n {
            div[i] = u1x[i] + u2y[i];
        }

        let mut gax = alloc::vec![0.0; n];
        let mut gay = alloc::vec![0.0; n];
        let mut gbx = alloc::vec![0.0; n];
        let mut gby = alloc::vec![0.0; n];

        {
            let (y1, y2) = split2_mut(y);
            // μ Δu1 + (μ+λ) ∂x div
            map.grad(&u1x, &mut gax, &mut gay); // gax = u1xx
            let u1xx = gax.clone();
            map.grad(&u1y, &mut gbx, &mut gby); // gby = u1yy
            for i in 0..n {
                y1[i] = p.mu * (u1xx[i] + gby[i]);
            }
            map.grad(&u2x, &mut gax, &mut gay); // gax = u2xx
            let u2xx = gax.clone();
            map.grad(&u2y, &mut gbx, &mut gby); // gby = u2yy
            for i in 0..n {
                y2[i] = p.mu * (u2xx[i] + gby[i]);
            }
            map.grad(&div, &mut gax, &mut gay);
            let mupl = p.mu + p.lambda;
            for i in 0..n {
                y1[i] += mupl * gax[i];
                y2[i] += mupl * gay[i];
            }

            // boundary rows
            for j in 0..map.n_theta {
                let i0 = j * ns; // cavity node
                let tr = u1x[i0] + u2y[i0];
                let s11 = 2.0 * p.mu * u1x[i0] + p.lambda * tr;
                let s22 = 2.0 * p.mu * u2y[i0] + p.lambda * tr;
                let s12 = p.mu * (u1y[i0] + u2x[i0]);
                let nv = self.normal[j];
                y1[i0] = s11 * nv[0] + s12 * nv[1];
                y2[i0] = s12 * nv[0] + s22 * nv[1];

                let i1 = j * ns + ns - 1; // outer node: Dirichlet identity rows
                y1[i1] = u1[i1];
                y2[i1] = u2[i1];
            }
        }
    }
}
