//! Tensor-product grid on the boundary-fitted annulus.
//!
//! The solid region between the cavity boundary and the outer circle is the
//! image of `[0, 2π) × [0, 1]` under the linear blend `ρ(θ, s) = h(θ) +
//! s·(R0 − h(θ))`, which fits both boundaries exactly for every smooth
//! profile. Scalar fields live on the tensor grid in θ-major layout
//! (`idx = j·n_s + k`, the radial line of each angle contiguous). Derivatives
//! of the mapping are computed analytically from `h` and `h′`.

use super::cheb;
use crate::geometry::RadialProfile;
use crate::numerics::fourier::theta_diff_matrix;
use alloc::vec::Vec;
use num_traits::Float;

/// Geometry, derivative operators and quadrature of the mapped annulus.
pub struct MappedAnnulus {
    pub n_theta: usize,
    pub n_s: usize,
    pub outer_radius: f64,
    /// Profile samples h(θ_j).
    pub h: Vec<f64>,
    /// CGL nodes in [0, 1], ascending (s = 0 on the cavity boundary).
    pub s_nodes: Vec<f64>,
    /// 1D CGL differentiation matrix (n_s × n_s).
    pub ds: Vec<f64>,
    /// Dense periodic differentiation matrix (n_theta × n_theta).
    pub dtheta: Vec<f64>,
    /// cos θ_j, sin θ_j.
    pub cos_t: Vec<f64>,
    pub sin_t: Vec<f64>,
    /// ρ at every node.
    pub rho: Vec<f64>,
    /// Chain-rule coefficient fields: ∂x = ax·∂s + bx·∂θ, ∂y = ay·∂s + by·∂θ.
    pub ax: Vec<f64>,
    pub bx: Vec<f64>,
    pub ay: Vec<f64>,
    pub by: Vec<f64>,
    /// Area quadrature weight per node: (2π/N)·w_k·ρ·ρ_s.
    pub quad_w: Vec<f64>,
    /// Clenshaw–Curtis weights on [0, 1].
    pub ws: Vec<f64>,
}

impl MappedAnnulus {
    pub fn new(profile: &RadialProfile, n_s: usize) -> Self {
        let grid = profile.grid();
        let nt = grid.len();
        let r0 = profile.outer_radius();
        let h = profile.values().to_vec();
        let hp = profile.derivative();
        let s_nodes = cheb::cgl_nodes(n_s);
        let ds = cheb::diff_matrix(&s_nodes);
        let dtheta = theta_diff_matrix(nt);
        let ws = cheb::clenshaw_curtis_weights(n_s);
        let cos_t: Vec<f64> = (0..nt).map(|j| Float::cos(grid.node(j))).collect();
        let sin_t: Vec<f64> = (0..nt).map(|j| Float::sin(grid.node(j))).collect();
        let rho_s: Vec<f64> = h.iter().map(|hj| r0 - hj).collect();
        let n = nt * n_s;
        let mut rho = alloc::vec![0.0; n];
        let mut ax = alloc::vec![0.0; n];
        let mut bx = alloc::vec![0.0; n];
        let mut ay = alloc::vec![0.0; n];
        let mut by = alloc::vec![0.0; n];
        let mut quad_w = alloc::vec![0.0; n];
        let wtheta = core::f64::consts::TAU / nt as f64;
        for j in 0..nt {
            for k in 0..n_s {
                let idx = j * n_s + k;
                let r = h[j] + s_nodes[k] * rho_s[j];
                rho[idx] = r;
                // ρ_θ at fixed s
                let rho_theta = hp[j] * (1.0 - s_nodes[k]);
                // ∂x = cosθ ∂ρ − (sinθ/ρ) ∂θ|_ρ, with
                // ∂ρ = (1/ρ_s)∂s and ∂θ|_ρ = ∂θ|_s − (ρ_θ/ρ_s)∂s
                ax[idx] = cos_t[j] / rho_s[j] + sin_t[j] * rho_theta / (r * rho_s[j]);
                bx[idx] = -sin_t[j] / r;
                ay[idx] = sin_t[j] / rho_s[j] - cos_t[j] * rho_theta / (r * rho_s[j]);
                by[idx] = cos_t[j] / r;
                quad_w[idx] = wtheta * ws[k] * r * rho_s[j];
            }
        }
        Self {
            n_theta: nt,
            n_s,
            outer_radius: r0,
            h,
            s_nodes,
            ds,
            dtheta,
            cos_t,
            sin_t,
            rho,
            ax,
            bx,
            ay,
            by,
            quad_w,
            ws,
        }
    }

    pub fn len(&self) -> usize {
        self.n_theta * self.n_s
    }

    /// d/ds along each radial line.
    pub fn apply_ds(&self, f: &[f64], out: &mut [f64]) {
        let (nt, ns) = (self.n_theta, self.n_s);
        for j in 0..nt {
            let base = j * ns;
            let fj = &f[base..base + ns];
            for k in 0..ns {
                let row = &self.ds[k * ns..(k + 1) * ns];
                out[base + k] = row.iter().zip(fj).map(|(a, b)| a * b).sum();
            }
        }
    }

    /// Transposed d/ds (adjoint of [`Self::apply_ds`] in the Euclidean pairing).
    pub fn apply_ds_t(&self, f: &[f64], out: &mut [f64]) {
        let (nt, ns) = (self.n_theta, self.n_s);
        for j in 0..nt {
            let base = j * ns;
            let fj = &f[base..base + ns];
            let oj = &mut out[base..base + ns];
            oj.iter_mut().for_each(|v| *v = 0.0);
            for (l, fl) in fj.iter().enumerate() {
                if *fl == 0.0 {
                    continue;
                }
                let row = &self.ds[l * ns..(l + 1) * ns];
                for (o, d) in oj.iter_mut().zip(row) {
                    *o += d * fl;
                }
            }
        }
    }

    /// d/dθ at fixed s.
    pub fn apply_dtheta(&self, f: &[f64], out: &mut [f64]) {
        let (nt, ns) = (self.n_theta, self.n_s);
        for j in 0..nt {
            let row = &self.dtheta[j * nt..(j + 1) * nt];
            let oj = &mut out[j * ns..(j + 1) * ns];
            oj.iter_mut().for_each(|v| *v = 0.0);
            for (m, d) in row.iter().enumerate() {
                if *d == 0.0 {
                    continue;
                }
                let fm = &f[m * ns..(m + 1) * ns];
                for (o, v) in oj.iter_mut().zip(fm) {
                    *o += d * v;
                }
            }
        }
    }

    /// Transposed d/dθ.
    pub fn apply_dtheta_t(&self, f: &[f64], out: &mut [f64]) {
        let (nt, ns) = (self.n_theta, self.n_s);
        out.iter_mut().for_each(|v| *v = 0.0);
        for m in 0..nt {
            let row = &self.dtheta[m * nt..(m + 1) * nt];
            let fm = &f[m * ns..(m + 1) * ns];
            for (j, d) in row.iter().enumerate() {
                if *d == 0.0 {
                    continue;
                }
                let oj = &mut out[j * ns..(j + 1) * ns];
                for (o, v) in oj.iter_mut().zip(fm) {
                    *o += d * v;
                }
            }
        }
    }

    /// Cartesian gradient of a scalar nodal field.
    pub fn grad(&self, f: &[f64], fx: &mut [f64], fy: &mut [f64]) {
        let n = self.len();
        let mut ts = alloc::vec![0.0; n];
        let mut tt = alloc::vec![0.0; n];
        self.apply_ds(f, &mut ts);
        self.apply_dtheta(f, &mut tt);
        for i in 0..n {
            fx[i] = self.ax[i] * ts[i] + self.bx[i] * tt[i];
            fy[i] = self.ay[i] * ts[i] + self.by[i] * tt[i];
        }
    }

    /// Transposed gradient: `out = Dxᵀ gx + Dyᵀ gy`.
    pub fn grad_t(&self, gx: &[f64], gy: &[f64], out: &mut [f64]) {
        let n = self.len();
        let mut s_in = alloc::vec![0.0; n];
        let mut t_in = alloc::vec![0.0; n];
        for i in 0..n {
            s_in[i] = self.ax[i] * gx[i] + self.ay[i] * gy[i];
            t_in[i] = self.bx[i] * gx[i] + self.by[i] * gy[i];
        }
        let mut tmp = alloc::vec![0.0; n];
        self.apply_ds_t(&s_in, out);
        self.apply_dtheta_t(&t_in, &mut tmp);
        for i in 0..n {
            out[i] += tmp[i];
        }
    }

    /// `∫ f dz` over the solid by tensor-product quadrature.
    pub fn integrate(&self, f: &[f64]) -> f64 {
        f.iter().zip(&self.quad_w).map(|(a, w)| a * w).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::PeriodicGrid;

    fn annulus() -> MappedAnnulus {
        let g = PeriodicGrid::new(32).unwrap();
        let p = RadialProfile::from_harmonics(g, 2.0, 1.0, &[(2, 0.1, 0.0)]).unwrap();
        MappedAnnulus::new(&p, 20)
    }

    #[test]
    fn gradient_of_coordinates() {
        let a = annulus();
        let n = a.len();
        // f = x should give fx ≡ 1, fy ≡ 0
        let mut f = alloc::vec![0.0; n];
        for j in 0..a.n_theta {
            for k in 0..a.n_s {
                f[j * a.n_s + k] = a.rho[j * a.n_s + k] * a.cos_t[j];
            }
        }
        let mut fx = alloc::vec![0.0; n];
        let mut fy = alloc::vec![0.0; n];
        a.grad(&f, &mut fx, &mut fy);
        for i in 0..n {
            assert!((fx[i] - 1.0).abs() <= 1e-10, "fx[{i}] = {}", fx[i]);
            assert!(fy[i].abs() <= 1e-10);
        }
    }

    #[test]
    fn gradient_of_radius_squared() {
        let a = annulus();
        let n = a.len();
        let f: Vec<f64> = a.rho.iter().map(|r| r * r).collect();
        let mut fx = alloc::vec![0.0; n];
        let mut fy = alloc::vec![0.0; n];
        a.grad(&f, &mut fx, &mut fy);
        for j in 0..a.n_theta {
            for k in 0..a.n_s {
                let i = j * a.n_s + k;
                let want_x = 2.0 * a.rho[i] * a.cos_t[j];
                let want_y = 2.0 * a.rho[i] * a.sin_t[j];
                assert!((fx[i] - want_x).abs() <= 1e-9);
                assert!((fy[i] - want_y).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn transposes_are_adjoint() {
        let a = annulus();
        let n = a.len();
        let mut state = 42u64;
        let mut rnd = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let u: Vec<f64> = (0..n).map(|_| rnd()).collect();
        let v: Vec<f64> = (0..n).map(|_| rnd()).collect();
        let mut du = alloc::vec![0.0; n];
        a.apply_ds(&u, &mut du);
        let lhs: f64 = du.iter().zip(&v).map(|(a, b)| a * b).sum();
        let mut dtv = alloc::vec![0.0; n];
        a.apply_ds_t(&v, &mut dtv);
        let rhs: f64 = u.iter().zip(&dtv).map(|(a, b)| a * b).sum();
        assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs().max(1.0));

        let mut tu = alloc::vec![0.0; n];
        a.apply_dtheta(&u, &mut tu);
        let lhs2: f64 = tu.iter().zip(&v).map(|(a, b)| a * b).sum();
        let mut ttv = alloc::vec![0.0; n];
        a.apply_dtheta_t(&v, &mut ttv);
        let rhs2: f64 = u.iter().zip(&ttv).map(|(a, b)| a * b).sum();
        assert!((lhs2 - rhs2).abs() <= 1e-10 * lhs2.abs().max(1.0));
    }

    #[test]
    fn integrates_annulus_area() {
        let g = PeriodicGrid::new(32).unwrap();
        let p = RadialProfile::round(g, 0.5, 1.0).unwrap();
        let a = MappedAnnulus::new(&p, 16);
        let one = alloc::vec![1.0; a.len()];
        let area = a.integrate(&one);
        let want = core::f64::consts::PI * (1.0 - 0.25);
        assert!((area - want).abs() <= 1e-12);
    }
}
