//! Galerkin machinery for the adjoint displacement induced by a boundary
//! perturbation.
//!
//! The adjoint `u_ψ` satisfies, over fields vanishing on the outer circle,
//! `∫ ℂE(u_ψ):E(w) dz = ∫_Γ ⟨ψ⃗,ν⟩ ℂE(u):E(w) dH¹` for every test field `w`.
//! Both sides are discretized with the tensor-product quadrature of the
//! mapped annulus on the same spectral space as the equilibrium solve; the
//! resulting symmetric positive definite system is solved by GMRES with a
//! per-Fourier-mode block preconditioner assembled from the weak form at the
//! mean radius.

use crate::elasticity::operator::{split2, strain, stress, Strain};
use crate::elasticity::{DisplacementField, LameParams};
use crate::error::Result;
use crate::numerics::{gmres, ComplexLu, GmresOutcome, LinearOp};
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::elasticity::diskpre::{
    dft_columns, idft_columns, rotate_to_cartesian, rotate_to_polar,
};
use crate::elasticity::map::MappedAnnulus;

/// Weak-form stiffness operator on the reduced space (outer ring removed).
struct GalerkinOp<'a> {
    map: &'a MappedAnnulus,
    params: LameParams,
}

impl GalerkinOp<'_> {
    fn ns_red(&self) -> usize {
        self.map.n_s - 1
    }

    fn pad(&self, reduced: &[f64]) -> Vec<f64> {
        let (nt, ns) = (self.map.n_theta, self.map.n_s);
        let nr = self.ns_red();
        let mut full = alloc::vec![0.0; 2 * nt * ns];
        let n = nt * ns;
        for j in 0..nt {
            for k in 0..nr {
                full[j * ns + k] = reduced[j * nr + k];
                full[n + j * ns + k] = reduced[nt * nr + j * nr + k];
            }
        }
        full
    }

    fn restrict(&self, full: &[f64], reduced: &mut [f64]) {
        let (nt, ns) = (self.map.n_theta, self.map.n_s);
        let nr = self.ns_red();
        let n = nt * ns;
        for j in 0..nt {
            for k in 0..nr {
                reduced[j * nr + k] = full[j * ns + k];
                reduced[nt * nr + j * nr + k] = full[n + j * ns + k];
            }
        }
    }

    /// Applies the transposed strain map to a weighted stress field.
    fn scatter_stress(&self, s11: &[f64], s22: &[f64], s12: &[f64], out_full: &mut [f64]) {
        let map = self.map;
        let n = map.len();
        let (r1, r2) = out_full.split_at_mut(n);
        map.grad_t(s11, s12, r1);
        map.grad_t(s12, s22, r2);
    }
}

impl LinearOp for GalerkinOp<'_> {
    fn dim(&self) -> usize {
        2 * self.map.n_theta * self.ns_red()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let map = self.map;
        let n = map.len();
        let full = self.pad(x);
        let (v1, v2) = split2(&full);
        let e = strain(map, v1, v2);
        let (mut s11, mut s22, mut s12) = stress(&self.params, &e);
        for i in 0..n {
            s11[i] *= map.quad_w[i];
            s22[i] *= map.quad_w[i];
            s12[i] *= map.quad_w[i];
        }
        let mut out_full = alloc::vec![0.0; 2 * n];
        self.scatter_stress(&s11, &s22, &s12, &mut out_full);
        self.restrict(&out_full, y);
    }
}

/// Per-mode block preconditioner for the weak form at the mean radius.
struct DiskGalerkinPre {
    nt: usize,
    ns_red: usize,
    cos_t: Vec<f64>,
    sin_t: Vec<f64>,
    blocks: Vec<ComplexLu>,
}

impl DiskGalerkinPre {
    fn new(map: &MappedAnnulus, p: &LameParams, r_bar: f64) -> Result<Self> {
        let nt = map.n_theta;
        let ns = map.n_s;
        let drho = map.outer_radius - r_bar;
        let mut d1 = alloc::vec![0.0; ns * ns];
        for (i, v) in d1.iter_mut().enumerate() {
            *v = map.ds[i] / drho;
        }
        let rho: Vec<f64> = map.s_nodes.iter().map(|s| r_bar + s * drho).collect();
        let wtheta = core::f64::consts::TAU / nt as f64;
        // quadrature weight including the Jacobian and the θ weight
        let wq: Vec<f64> = (0..ns).map(|k| wtheta * map.ws[k] * rho[k] * drho).collect();
        let (mu, la) = (p.mu, p.lambda);

        let dim_full = 2 * ns;
        let keep: Vec<usize> = (0..ns - 1).chain(ns..2 * ns - 1).collect();
        let dim_red = keep.len();
        let mut blocks = Vec::with_capacity(nt / 2 + 1);
        for mode in 0..=nt / 2 {
            let m = mode as f64;
            // strain component maps on [U; V]: rows indexed by the radial node
            let mut a_rr = alloc::vec![Complex64::ZERO; ns * dim_full];
            let mut a_tt = alloc::vec![Complex64::ZERO; ns * dim_full];
            let mut a_rt = alloc::vec![Complex64::ZERO; ns * dim_full];
            for k in 0..ns {
                for l in 0..ns {
                    let d = d1[k * ns + l];
                    a_rr[k * dim_full + l] = Complex64::new(d, 0.0);
                    a_rt[k * dim_full + ns + l] = Complex64::new(0.5 * d, 0.0);
                }
                let pr = 1.0 / rho[k];
                a_tt[k * dim_full + k] += Complex64::new(pr, 0.0);
                a_tt[k * dim_full + ns + k] += Complex64::new(0.0, m * pr);
                a_rt[k * dim_full + ns + k] += Complex64::new(-0.5 * pr, 0.0);
                a_rt[k * dim_full + k] += Complex64::new(0.0, 0.5 * m * pr);
            }
            let mut b = alloc::vec![Complex64::ZERO; dim_full * dim_full];
            let mut accumulate = |amap: &[Complex64], bmap: &[Complex64], coeff: f64| {
                for k in 0..ns {
                    let w = wq[k] * coeff;
                    for r in 0..dim_full {
                        let ar = amap[k * dim_full + r].conj();
                        if ar == Complex64::ZERO {
                            continue;
                        }
                        for c in 0..dim_full {
                            let bc = bmap[k * dim_full + c];
                            if bc != Complex64::ZERO {
                                b[r * dim_full + c] += w * ar * bc;
                            }
                        }
                    }
                }
            };
            accumulate(&a_rr, &a_rr, 2.0 * mu);
            accumulate(&a_tt, &a_tt, 2.0 * mu);
            accumulate(&a_rt, &a_rt, 4.0 * mu);
            // trace ⊗ trace term: build tr = a_rr + a_tt once
            let mut a_tr = alloc::vec![Complex64::ZERO; ns * dim_full];
            for i in 0..ns * dim_full {
                a_tr[i] = a_rr[i] + a_tt[i];
            }
            accumulate(&a_tr, &a_tr, la);

            let mut red = alloc::vec![Complex64::ZERO; dim_red * dim_red];
            for (ri, &r) in keep.iter().enumerate() {
                for (ci, &c) in keep.iter().enumerate() {
                    red[ri * dim_red + ci] = b[r * dim_full + c];
                }
            }
            blocks.push(ComplexLu::factor(dim_red, red)?);
        }
        Ok(Self {
            nt,
            ns_red: ns - 1,
            cos_t: map.cos_t.clone(),
            sin_t: map.sin_t.clone(),
            blocks,
        })
    }
}

impl LinearOp for DiskGalerkinPre {
    fn dim(&self) -> usize {
        2 * self.nt * self.ns_red
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let (nt, ns) = (self.nt, self.ns_red);
        let n = nt * ns;
        let (r1, r2) = x.split_at(n);
        let mut rho = alloc::vec![0.0; n];
        let mut theta = alloc::vec![0.0; n];
        rotate_to_polar(&self.cos_t, &self.sin_t, ns, r1, r2, &mut rho, &mut theta);
        let half = nt / 2;
        let mut mrho = alloc::vec![Complex64::ZERO; (half + 1) * ns];
        let mut mtheta = alloc::vec![Complex64::ZERO; (half + 1) * ns];
        dft_columns(nt, ns, &rho, &mut mrho);
        dft_columns(nt, ns, &theta, &mut mtheta);
        let mut zrho = alloc::vec![Complex64::ZERO; (half + 1) * ns];
        let mut ztheta = alloc::vec![Complex64::ZERO; (half + 1) * ns];
        let mut rhs = alloc::vec![Complex64::ZERO; 2 * ns];
        for m in 0..=half {
            rhs[..ns].copy_from_slice(&mrho[m * ns..(m + 1) * ns]);
            rhs[ns..].copy_from_slice(&mtheta[m * ns..(m + 1) * ns]);
            let sol = self.blocks[m].solve(&rhs);
            zrho[m * ns..(m + 1) * ns].copy_from_slice(&sol[..ns]);
            ztheta[m * ns..(m + 1) * ns].copy_from_slice(&sol[ns..]);
        }
        let mut frho = alloc::vec![0.0; n];
        let mut ftheta = alloc::vec![0.0; n];
        idft_columns(nt, ns, &zrho, &mut frho);
        idft_columns(nt, ns, &ztheta, &mut ftheta);
        let (y1, y2) = y.split_at_mut(n);
        rotate_to_cartesian(&self.cos_t, &self.sin_t, ns, &frho, &ftheta, y1, y2);
    }
}

/// Adjoint displacement induced by a boundary perturbation; vanishes on the
/// outer circle by construction.
pub struct AdjointField {
    /// Cartesian components on the full tensor grid (outer ring zero).
    pub u1: Vec<f64>,
    pub u2: Vec<f64>,
    /// `∫ ℂE(u_ψ):E(u_ψ) dz = 2∫Q(E(u_ψ)) dz`.
    pub energy_twice_q: f64,
    /// True residual of the discrete weak system.
    pub residual: f64,
    pub iterations: usize,
}

/// Reusable adjoint solve context for a fixed equilibrium field.
///
/// Factorizing the preconditioner once lets the quadratic-form assembly run
/// one cheap solve per basis mode.
pub struct AdjointSolver<'a> {
    u: &'a DisplacementField,
    params: LameParams,
    /// Equilibrium stress at the nodes.
    s11: Vec<f64>,
    s22: Vec<f64>,
    s12: Vec<f64>,
    pre: DiskGalerkinPre,
    tol: f64,
    max_iter: usize,
}

impl<'a> AdjointSolver<'a> {
    pub fn new(u: &'a DisplacementField, p: &LameParams) -> Result<Self> {
        let map = u.annulus();
        let e = strain(map, u.component(0), u.component(1));
        let (s11, s22, s12) = stress(p, &e);
        let h = map.h.clone();
        let r_bar = crate::numerics::periodic_quadrature(&h)? / core::f64::consts::TAU;
        let pre = DiskGalerkinPre::new(map, p, r_bar)?;
        Ok(Self {
            u,
            params: *p,
            s11,
            s22,
            s12,
            pre,
            tol: 1e-12,
            max_iter: 500,
        })
    }

    /// Right-hand side functional `w ↦ ∫_Γ ⟨ψ⃗,ν⟩ ℂE(u):E(w) dH¹` in the
    /// reduced coordinates. The polar area weight collapses `⟨ψ⃗,ν⟩ dH¹` to
    /// `ψ·h dθ`.
    fn rhs(&self, psi: &[f64]) -> Vec<f64> {
        let map = self.u.annulus();
        let (nt, ns) = (map.n_theta, map.n_s);
        let n = map.len();
        let wtheta = core::f64::consts::TAU / nt as f64;
        let mut w11 = alloc::vec![0.0; n];
        let mut w22 = alloc::vec![0.0; n];
        let mut w12 = alloc::vec![0.0; n];
        for j in 0..nt {
            let i = j * ns; // cavity boundary node
            let wgt = wtheta * psi[j] * map.h[j];
            w11[i] = wgt * self.s11[i];
            w22[i] = wgt * self.s22[i];
            w12[i] = wgt * self.s12[i];
        }
        let op = GalerkinOp {
            map,
            params: self.params,
        };
        let mut full = alloc::vec![0.0; 2 * n];
        op.scatter_stress(&w11, &w22, &w12, &mut full);
        let mut reduced = alloc::vec![0.0; op.dim()];
        op.restrict(&full, &mut reduced);
        reduced
    }

    pub fn solve(&self, psi: &[f64]) -> Result<AdjointField> {
        let map = self.u.annulus();
        let op = GalerkinOp {
            map,
            params: self.params,
        };
        let b = self.rhs(psi);
        let (x, outcome): (Vec<f64>, GmresOutcome) =
            gmres(&op, &self.pre, &b, self.tol, self.max_iter)?;
        let full = op.pad(&x);
        let n = map.len();
        let (v1, v2) = (full[..n].to_vec(), full[n..].to_vec());
        let e = strain(map, &v1, &v2);
        let energy = elastic_bilinear(map, &self.params, &e, &e);
        Ok(AdjointField {
            u1: v1,
            u2: v2,
            energy_twice_q: energy,
            residual: outcome.residual,
            iterations: outcome.iterations,
        })
    }

    /// Solves the adjoint with the tangential-divergence form of the load,
    /// `w ↦ −∫_Γ div_τ(⟨ψ⃗,ν⟩ ℂE(u))·w dH¹`, which agrees with the default
    /// form in the continuum because the equilibrium is traction-free on the
    /// cavity. The discrete gap between the two routes is measured by tests,
    /// not assumed.
    pub fn solve_divergence_form(&self, psi: &[f64]) -> Result<AdjointField> {
        let map = self.u.annulus();
        let (nt, ns) = (map.n_theta, map.n_s);
        let grid = crate::numerics::PeriodicGrid::new(nt)?;
        let wtheta = core::f64::consts::TAU / nt as f64;
        // boundary frame quantities
        let hp = {
            let vals = map.h.clone();
            crate::numerics::fourier_diff(grid, &vals, 1)?
        };
        let mut n11 = alloc::vec![0.0; nt];
        let mut n22 = alloc::vec![0.0; nt];
        let mut n12 = alloc::vec![0.0; nt];
        let mut le = alloc::vec![0.0; nt];
        let mut tau = alloc::vec![[0.0f64; 2]; nt];
        for j in 0..nt {
            let i = j * ns;
            let h = map.h[j];
            let l = num_traits::Float::sqrt(h * h + hp[j] * hp[j]);
            le[j] = l;
            let f = psi[j] * h / l;
            n11[j] = f * self.s11[i];
            n22[j] = f * self.s22[i];
            n12[j] = f * self.s12[i];
            let (c, s) = (map.cos_t[j], map.sin_t[j]);
            // clockwise tangent (h σ⊥ − h′ σ)/l with σ⊥ = (sin, −cos)
            tau[j] = [(h * s - hp[j] * c) / l, (-h * c - hp[j] * s) / l];
        }
        let d11 = crate::numerics::fourier_diff(grid, &n11, 1)?;
        let d22 = crate::numerics::fourier_diff(grid, &n22, 1)?;
        let d12 = crate::numerics::fourier_diff(grid, &n12, 1)?;
        let n = map.len();
        let mut full = alloc::vec![0.0; 2 * n];
        for j in 0..nt {
            let i = j * ns;
            // div_τ(N)_i = ∂_τ(N_ij)τ_j with ∂_τ = −(1/le)·d/dθ along the
            // clockwise tangent; load = −∫ div_τ(N)·w dH¹
            let div1 = -(d11[j] * tau[j][0] + d12[j] * tau[j][1]) / le[j];
            let div2 = -(d12[j] * tau[j][0] + d22[j] * tau[j][1]) / le[j];
            full[i] = -wtheta * le[j] * div1;
            full[n + i] = -wtheta * le[j] * div2;
        }
        let op = GalerkinOp {
            map,
            params: self.params,
        };
        let mut b = alloc::vec![0.0; op.dim()];
        op.restrict(&full, &mut b);
        let (x, outcome): (Vec<f64>, GmresOutcome) =
            gmres(&op, &self.pre, &b, self.tol, self.max_iter)?;
        let padded = op.pad(&x);
        let (v1, v2) = (padded[..n].to_vec(), padded[n..].to_vec());
        let e = strain(map, &v1, &v2);
        let energy = elastic_bilinear(map, &self.params, &e, &e);
        Ok(AdjointField {
            u1: v1,
            u2: v2,
            energy_twice_q: energy,
            residual: outcome.residual,
            iterations: outcome.iterations,
        })
    }

    /// The right-hand side functional applied to an arbitrary adjoint field;
    /// equals the elastic energy of that field at convergence (a Galerkin
    /// identity used as a consistency check and by the reciprocity test).
    pub fn load_functional(&self, psi: &[f64], field: &AdjointField) -> f64 {
        let map = self.u.annulus();
        let (nt, ns) = (map.n_theta, map.n_s);
        let wtheta = core::f64::consts::TAU / nt as f64;
        let e = strain(map, &field.u1, &field.u2);
        let mut acc = 0.0;
        for j in 0..nt {
            let i = j * ns;
            let contraction = self.s11[i] * e.e11[i]
                + self.s22[i] * e.e22[i]
                + 2.0 * self.s12[i] * e.e12[i];
            acc += wtheta * psi[j] * map.h[j] * contraction;
        }
        acc
    }
}

/// `∫ ℂE(a):E(b) dz` for two strain fields on the same annulus.
pub(crate) fn elastic_bilinear(
    map: &MappedAnnulus,
    p: &LameParams,
    a: &Strain,
    b: &Strain,
) -> f64 {
    let n = map.len();
    let mut acc = 0.0;
    for i in 0..n {
        let tra = a.e11[i] + a.e22[i];
        let trb = b.e11[i] + b.e22[i];
        let v = 2.0 * p.mu
            * (a.e11[i] * b.e11[i] + a.e22[i] * b.e22[i] + 2.0 * a.e12[i] * b.e12[i])
            + p.lambda * tra * trb;
        acc += map.quad_w[i] * v;
    }
    acc
}

/// Strain of an adjoint field (used for cross energies during assembly).
pub(crate) fn adjoint_strain(map: &MappedAnnulus, f: &AdjointField) -> Strain {
    strain(map, &f.u1, &f.u2)
}
