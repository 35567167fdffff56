//! Plane Lamé equilibrium on the region between the cavity and the outer
//! circle, with traction-free cavity boundary and radial-stretch Dirichlet
//! data on the outer circle.
//!
//! Discretization: Fourier collocation in θ times Chebyshev collocation in the
//! blended radial coordinate `s`, so both boundaries are fitted exactly. The
//! discrete system is solved by restart-free GMRES preconditioned with the
//! per-Fourier-mode blocks of the operator frozen at the mean radius; for a
//! round cavity the preconditioner is the operator itself up to interpolation
//! tails and the iteration converges immediately.

pub(crate) mod cheb;
pub(crate) mod diskpre;
pub(crate) mod map;
pub(crate) mod operator;

use crate::error::{Error, Result};
use crate::geometry::{BoundaryFrame, RadialProfile};
use crate::numerics::gmres;
use alloc::vec::Vec;
use map::MappedAnnulus;
use num_traits::Float;

/// Lamé coefficients with the derived ellipticity constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LameParams {
    pub mu: f64,
    pub lambda: f64,
    /// `η = min{μ, μ+λ}`.
    pub eta: f64,
}

impl LameParams {
    /// Requires `μ > 0` and `λ > −μ`.
    pub fn new(mu: f64, lambda: f64) -> Result<Self> {
        if !(mu > 0.0) || !mu.is_finite() {
            return Err(Error::Domain(alloc::format!(
                "shear modulus must be positive, got {mu}"
            )));
        }
        if !(lambda > -mu) || !lambda.is_finite() {
            return Err(Error::Domain(alloc::format!(
                "lambda = {lambda} violates the ellipticity condition lambda > -mu = {}",
                -mu
            )));
        }
        Ok(Self {
            mu,
            lambda,
            eta: mu.min(mu + lambda),
        })
    }
}

/// Radial-stretch Dirichlet data `u₀(R0 σ(θ)) = α R0 σ(θ)`.
///
/// General (non-radial) data would slot in here with the same contract; only
/// the radial stretching is represented.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryData {
    pub alpha: f64,
    pub outer_radius: f64,
}

impl BoundaryData {
    pub fn radial_stretch(alpha: f64, outer_radius: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::Domain("stretch factor must be finite".into()));
        }
        Ok(Self {
            alpha,
            outer_radius,
        })
    }
}

/// Resolution and iteration controls of the equilibrium solver.
#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    /// Chebyshev nodes across the solid (including both boundaries).
    pub n_rho: usize,
    /// Relative residual target of the Krylov iteration.
    pub tol: f64,
    /// Iteration cap; exceeding it is a solver failure.
    pub max_iter: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            n_rho: 48,
            tol: 1e-12,
            max_iter: 600,
        }
    }
}

impl SolverOptions {
    pub fn with_n_rho(n_rho: usize) -> Self {
        Self {
            n_rho,
            ..Self::default()
        }
    }
}

/// Displacement field on the mapped tensor-product grid (Cartesian
/// components), together with its solve diagnostics.
pub struct DisplacementField {
    pub(crate) map: MappedAnnulus,
    pub(crate) u1: Vec<f64>,
    pub(crate) u2: Vec<f64>,
    /// True residual norm of the discrete system.
    pub residual: f64,
    /// Krylov iterations spent.
    pub iterations: usize,
    /// Condition proxy of the preconditioner blocks.
    pub condition_estimate: f64,
}

impl DisplacementField {
    pub fn n_theta(&self) -> usize {
        self.map.n_theta
    }

    pub fn n_rho(&self) -> usize {
        self.map.n_s
    }

    pub fn outer_radius(&self) -> f64 {
        self.map.outer_radius
    }

    /// Profile samples the field was solved on.
    pub fn profile_values(&self) -> &[f64] {
        &self.map.h
    }

    /// Radial collocation nodes in the reference coordinate `s ∈ [0, 1]`.
    pub fn s_nodes(&self) -> &[f64] {
        &self.map.s_nodes
    }

    /// Cartesian components; `component(0)` is `u₁`, layout `j·n_rho + k`.
    pub fn component(&self, c: usize) -> &[f64] {
        if c == 0 {
            &self.u1
        } else {
            &self.u2
        }
    }

    /// Displacement vector at node `(j, k)`.
    pub fn at(&self, j: usize, k: usize) -> [f64; 2] {
        let i = j * self.map.n_s + k;
        [self.u1[i], self.u2[i]]
    }

    /// Physical radius `ρ(θ_j, s_k)` of a grid node.
    pub fn radius_at(&self, j: usize, k: usize) -> f64 {
        self.map.rho[j * self.map.n_s + k]
    }

    pub(crate) fn annulus(&self) -> &MappedAnnulus {
        &self.map
    }
}

/// Boundary traces and bulk energy of a solved field.
#[derive(Debug, Clone)]
pub struct EnergyReport {
    /// `∫ Q(E(u)) dz` over the solid.
    pub bulk_energy: f64,
    /// `Q(E(u))` per node on the cavity boundary.
    pub boundary_q: Vec<f64>,
    /// `∂_ν Q(E(u))` per node on the cavity boundary.
    pub boundary_dq_dnu: Vec<f64>,
    /// `max |ℂE(u)[ν]|` on the cavity boundary.
    pub traction_residual: f64,
}

/// Solves the equilibrium system for the given cavity profile.
pub fn solve_equilibrium(
    h: &RadialProfile,
    bc: &BoundaryData,
    p: &LameParams,
    opts: &SolverOptions,
) -> Result<DisplacementField> {
    if (bc.outer_radius - h.outer_radius()).abs() > 1e-14 * h.outer_radius() {
        return Err(Error::Domain(
            "boundary data and profile disagree on the outer radius".into(),
        ));
    }
    if opts.n_rho < 6 {
        return Err(Error::Domain(alloc::format!(
            "n_rho = {} is too small for the collocation stencil",
            opts.n_rho
        )));
    }
    let map = MappedAnnulus::new(h, opts.n_rho);
    let frame = BoundaryFrame::of(h);
    let op = operator::LameCollocation::new(&map, &frame, *p);
    let pre = diskpre::DiskCollocationPre::new(
        map.n_theta,
        &map.s_nodes,
        &map.ds,
        &map.cos_t,
        &map.sin_t,
        h.mean_radius(),
        h.outer_radius(),
        p,
    )?;
    let b = op.rhs_radial_stretch(bc.alpha);
    let (x, outcome) = gmres(&op, &pre, &b, opts.tol, opts.max_iter).map_err(|e| match e {
        Error::SolverFailure { message, condition } => Error::SolverFailure {
            message,
            condition: condition.max(pre.condition_estimate()),
        },
        other => other,
    })?;
    let n = map.len();
    let (u1, u2) = (x[..n].to_vec(), x[n..].to_vec());
    Ok(DisplacementField {
        map,
        u1,
        u2,
        residual: outcome.residual,
        iterations: outcome.iterations,
        condition_estimate: pre.condition_estimate(),
    })
}

/// `∫ Q(E(u)) dz` by tensor-product quadrature with the mapping Jacobian.
pub fn elastic_energy(u: &DisplacementField, p: &LameParams) -> f64 {
    let q = energy_density(u, p);
    u.map.integrate(&q)
}

/// Nodal energy density `Q(E(u)) = ½ ℂE(u):E(u)`.
pub fn energy_density(u: &DisplacementField, p: &LameParams) -> Vec<f64> {
    let e = operator::strain(&u.map, &u.u1, &u.u2);
    let (s11, s22, s12) = operator::stress(p, &e);
    let n = u.map.len();
    let mut q = alloc::vec![0.0; n];
    for i in 0..n {
        q[i] = 0.5 * (s11[i] * e.e11[i] + s22[i] * e.e22[i] + 2.0 * s12[i] * e.e12[i]);
    }
    q
}

/// `∫ |E(u)|² dz`; the coercivity bound reads `bulk_energy ≥ η · strain_norm_sq`.
pub fn strain_norm_sq(u: &DisplacementField) -> f64 {
    let e = operator::strain(&u.map, &u.u1, &u.u2);
    let n = u.map.len();
    let mut f = alloc::vec![0.0; n];
    for i in 0..n {
        f[i] = e.e11[i] * e.e11[i] + e.e22[i] * e.e22[i] + 2.0 * e.e12[i] * e.e12[i];
    }
    u.map.integrate(&f)
}

/// Boundary traces of a solved equilibrium: `Q`, its normal derivative and the
/// residual traction on the cavity boundary, plus the bulk energy.
pub fn boundary_traces(
    u: &DisplacementField,
    h: &RadialProfile,
    p: &LameParams,
) -> EnergyReport {
    let map = &u.map;
    let ns = map.n_s;
    let frame = BoundaryFrame::of(h);
    let e = operator::strain(map, &u.u1, &u.u2);
    let (s11, s22, s12) = operator::stress(p, &e);
    let n = map.len();
    let mut q = alloc::vec![0.0; n];
    for i in 0..n {
        q[i] = 0.5 * (s11[i] * e.e11[i] + s22[i] * e.e22[i] + 2.0 * s12[i] * e.e12[i]);
    }
    let bulk = map.integrate(&q);
    let mut qx = alloc::vec![0.0; n];
    let mut qy = alloc::vec![0.0; n];
    map.grad(&q, &mut qx, &mut qy);

    let nt = map.n_theta;
    let mut boundary_q = Vec::with_capacity(nt);
    let mut boundary_dq = Vec::with_capacity(nt);
    let mut traction_residual = 0.0f64;
    for j in 0..nt {
        let i = j * ns;
        boundary_q.push(q[i]);
        let nv = frame.normal[j];
        boundary_dq.push(qx[i] * nv[0] + qy[i] * nv[1]);
        let t1 = s11[i] * nv[0] + s12[i] * nv[1];
        let t2 = s12[i] * nv[0] + s22[i] * nv[1];
        traction_residual = traction_residual.max(Float::sqrt(t1 * t1 + t2 * t2));
    }
    EnergyReport {
        bulk_energy: bulk,
        boundary_q,
        boundary_dq_dnu: boundary_dq,
        traction_residual,
    }
}

/// Traction `ℂE(u)[σ]` on the outer circle (outward normal there is `σ`).
pub fn outer_traction(u: &DisplacementField, p: &LameParams) -> Vec<[f64; 2]> {
    let map = &u.map;
    let ns = map.n_s;
    let e = operator::strain(map, &u.u1, &u.u2);
    let (s11, s22, s12) = operator::stress(p, &e);
    (0..map.n_theta)
        .map(|j| {
            let i = j * ns + ns - 1;
            let (c, s) = (map.cos_t[j], map.sin_t[j]);
            [s11[i] * c + s12[i] * s, s12[i] * c + s22[i] * s]
        })
        .collect()
}
