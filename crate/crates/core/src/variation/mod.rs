//! First and second variation of the energy functional, the constrained
//! quadratic form and its spectrum.
//!
//! Perturbations are radial: `h_s = h + s·ψ` up to the volume normalization,
//! with ψ constrained by `∫hψ dθ = 0` (first-order area preservation). At a
//! critical pair the second variation reduces to the quadratic form
//!
//! `∂²F[ψ] = −∫ 2Q(E(u_ψ)) dz + ∫ |∂_τ⟨ψ⃗,ν⟩|² dH¹
//!           − ∫ (∂_ν Q(E(u)) + k²) ⟨ψ⃗,ν⟩² dH¹`,
//!
//! where `u_ψ` is the adjoint field of [`adjoint`]. Away from criticality the
//! two extra terms of the full second-variation formula are evaluated on
//! request (`force` path) and reported separately.

pub mod adjoint;

pub use adjoint::{AdjointField, AdjointSolver};

use crate::elasticity::{
    boundary_traces, elastic_energy, solve_equilibrium, BoundaryData, DisplacementField,
    LameParams, SolverOptions,
};
use crate::error::{Error, Result};
use crate::geometry::{normal_trace, perimeter, BoundaryFrame, RadialProfile};
use crate::numerics::linalg::sym_eig_min_full;
use crate::numerics::{fourier_diff, periodic_quadrature, PeriodicGrid, SymmetricMatrix};
use alloc::string::String;
use alloc::vec::Vec;
use num_traits::Float;

/// Criticality gate: a pair is numerically critical when the boundary
/// residual deviates from its mean by at most `1e-6·(|constant| + 1)`.
pub const CRITICALITY_GATE: f64 = 1e-6;

/// Relative eigenvalue tolerance for the positivity verdict.
pub const EIG_POSITIVITY_TOL: f64 = 1e-7;

/// Radial perturbation constrained to first-order volume preservation.
#[derive(Debug, Clone)]
pub struct Perturbation {
    grid: PeriodicGrid,
    values: Vec<f64>,
    /// `∫hψ dθ` measured after projection.
    pub constraint_residual: f64,
}

impl Perturbation {
    /// Projects raw samples onto the constraint kernel `{ψ : ∫hψ dθ = 0}`
    /// (orthogonally in `L²(dθ)`) and band-limits them like a profile.
    pub fn projected(h: &RadialProfile, raw: &[f64]) -> Result<Self> {
        let grid = h.grid();
        grid.check_len(raw)?;
        let hv = h.values();
        let hpsi: Vec<f64> = hv.iter().zip(raw).map(|(a, b)| a * b).collect();
        let hh: Vec<f64> = hv.iter().map(|a| a * a).collect();
        let coef = periodic_quadrature(&hpsi)? / periodic_quadrature(&hh)?;
        let projected: Vec<f64> = raw.iter().zip(hv).map(|(r, h)| r - coef * h).collect();
        // band-limit like profiles so volume paths reproduce the perturbation
        let mut coeffs = crate::numerics::fourier::fourier_coefficients(grid, &projected)?;
        for m in (grid.band_limit() + 1)..coeffs.cos.len() {
            coeffs.cos[m] = 0.0;
            coeffs.sin[m] = 0.0;
        }
        let values = crate::numerics::fourier::fourier_synthesis(grid, &coeffs);
        let res: Vec<f64> = hv.iter().zip(&values).map(|(a, b)| a * b).collect();
        let constraint_residual = periodic_quadrature(&res)?;
        Ok(Self {
            grid,
            values,
            constraint_residual,
        })
    }

    /// A single harmonic `cos nθ` (or `sin nθ`) projected against `h`.
    pub fn harmonic(h: &RadialProfile, n: usize, sine: bool) -> Result<Self> {
        let grid = h.grid();
        let raw: Vec<f64> = (0..grid.len())
            .map(|j| {
                let ang = n as f64 * grid.node(j);
                if sine {
                    Float::sin(ang)
                } else {
                    Float::cos(ang)
                }
            })
            .collect();
        Self::projected(h, &raw)
    }

    pub fn grid(&self) -> PeriodicGrid {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Exact negation; keeps the constraint without re-projection.
    pub fn negated(&self) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|v| -v).collect(),
            constraint_residual: -self.constraint_residual,
        }
    }

    /// `L²(dθ)` norm.
    pub fn l2_norm(&self) -> f64 {
        let sq: Vec<f64> = self.values.iter().map(|v| v * v).collect();
        Float::sqrt(periodic_quadrature(&sq).expect("non-empty"))
    }
}

/// Boundary criticality residual `Q(E(u)) − k` and its Lagrange constant.
#[derive(Debug, Clone)]
pub struct CriticalityReport {
    /// `Q(E(u)) − k` per boundary node.
    pub residual_function: Vec<f64>,
    /// Line-element-weighted mean of the residual.
    pub lagrange_constant: f64,
    /// `max |residual − constant|`.
    pub deviation: f64,
}

impl CriticalityReport {
    /// Gate used before second-variation machinery is applied.
    pub fn is_critical(&self) -> bool {
        self.deviation <= self.threshold()
    }

    pub fn threshold(&self) -> f64 {
        CRITICALITY_GATE * (self.lagrange_constant.abs() + 1.0)
    }
}

/// First variation `δF[ψ] = ∫_Γ (k − Q(E(u))) ⟨ψ⃗,ν⟩ dH¹`.
///
/// With the polar area weight this is `∫ (k − Q)·ψ·h dθ`; it vanishes at
/// critical pairs for every admissible ψ.
pub fn first_variation(
    h: &RadialProfile,
    u: &DisplacementField,
    psi: &Perturbation,
    p: &LameParams,
) -> f64 {
    let frame = BoundaryFrame::of(h);
    let traces = boundary_traces(u, h, p);
    let integrand: Vec<f64> = (0..h.grid().len())
        .map(|j| (frame.curvature[j] - traces.boundary_q[j]) * psi.values[j] * h.values()[j])
        .collect();
    periodic_quadrature(&integrand).expect("non-empty")
}

/// Boundary criticality of a solved pair.
pub fn criticality(h: &RadialProfile, u: &DisplacementField, p: &LameParams) -> CriticalityReport {
    let frame = BoundaryFrame::of(h);
    let traces = boundary_traces(u, h, p);
    let n = h.grid().len();
    let residual: Vec<f64> = (0..n)
        .map(|j| traces.boundary_q[j] - frame.curvature[j])
        .collect();
    let weighted: Vec<f64> = residual
        .iter()
        .zip(&frame.line_element)
        .map(|(r, l)| r * l)
        .collect();
    let total_len = periodic_quadrature(&frame.line_element).expect("non-empty");
    let lagrange_constant = periodic_quadrature(&weighted).expect("non-empty") / total_len;
    let deviation = residual
        .iter()
        .fold(0.0f64, |a, r| a.max((r - lagrange_constant).abs()));
    CriticalityReport {
        residual_function: residual,
        lagrange_constant,
        deviation,
    }
}

/// Solves the adjoint problem for one perturbation (one-shot wrapper around
/// [`AdjointSolver`]).
pub fn solve_adjoint(
    _h: &RadialProfile,
    u: &DisplacementField,
    psi: &Perturbation,
    p: &LameParams,
) -> Result<AdjointField> {
    AdjointSolver::new(u, p)?.solve(psi.values())
}

/// Value of the second variation with its term breakdown.
#[derive(Debug, Clone, Copy)]
pub struct SecondVariationValue {
    pub value: f64,
    /// `−∫ 2Q(E(u_ψ)) dz` (always ≤ 0).
    pub elastic_term: f64,
    /// `∫ |∂_τ⟨ψ⃗,ν⟩|² dH¹`.
    pub tangential_term: f64,
    /// `−∫ (∂_ν Q + k²) ⟨ψ⃗,ν⟩² dH¹`.
    pub trace_term: f64,
    /// `∫ (Q−k) ∂_τ(⟨ψ⃗,ν⟩⟨ψ⃗,τ⟩) dH¹`; zero at critical pairs, evaluated
    /// only on the forced path.
    pub noncritical_tangential: f64,
    /// `−∫ (Q−k)(⟨ψ⃗,ν⟩²/⟨h⃗,ν⟩ + ⟨ψ̈⃗,ν⟩) dH¹` along the volume path;
    /// zero at critical pairs, evaluated only on the forced path.
    pub noncritical_volume: f64,
}

struct VariationContext<'a> {
    h: &'a RadialProfile,
    frame: BoundaryFrame,
    boundary_q: Vec<f64>,
    boundary_dq_dnu: Vec<f64>,
    criticality: CriticalityReport,
    adjoint: AdjointSolver<'a>,
    wtheta: f64,
}

impl<'a> VariationContext<'a> {
    fn new(h: &'a RadialProfile, u: &'a DisplacementField, p: &LameParams) -> Result<Self> {
        let frame = BoundaryFrame::of(h);
        let traces = boundary_traces(u, h, p);
        let criticality = criticality(h, u, p);
        let adjoint = AdjointSolver::new(u, p)?;
        Ok(Self {
            h,
            frame,
            boundary_q: traces.boundary_q,
            boundary_dq_dnu: traces.boundary_dq_dnu,
            criticality,
            adjoint,
            wtheta: core::f64::consts::TAU / h.grid().len() as f64,
        })
    }

    fn quadratic_form(&self, psi: &Perturbation, force: bool) -> Result<SecondVariationValue> {
        if !force && !self.criticality.is_critical() {
            return Err(Error::NotCritical {
                deviation: self.criticality.deviation,
                threshold: self.criticality.threshold(),
            });
        }
        // canonical sign: a quadratic form is even in ψ, so fixing the sign of
        // the first nonzero sample makes that exact in floating point
        let mut psi_vals = psi.values().to_vec();
        if let Some(first) = psi_vals.iter().find(|v| **v != 0.0) {
            if *first < 0.0 {
                psi_vals.iter_mut().for_each(|v| *v = -*v);
            }
        }
        let grid = self.h.grid();
        let n = grid.len();
        let f = normal_trace(self.h, &psi_vals)?;
        let fd = fourier_diff(grid, &f, 1)?;
        let mut tangential = 0.0;
        let mut trace = 0.0;
        for j in 0..n {
            let le = self.frame.line_element[j];
            tangential += self.wtheta * fd[j] * fd[j] / le;
            let k = self.frame.curvature[j];
            trace -= self.wtheta * (self.boundary_dq_dnu[j] + k * k) * f[j] * f[j] * le;
        }
        let adj = self.adjoint.solve(&psi_vals)?;
        let elastic = -adj.energy_twice_q;

        let (mut nc_tangential, mut nc_volume) = (0.0, 0.0);
        if force {
            // ⟨ψ⃗,ν⟩⟨ψ⃗,τ⟩ = −ψ²·h·h′/(h²+h′²); with the clockwise tangent
            // the arclength derivative is ∂_τ = −(1/line_element)·d/dθ, so
            // the two sign flips make the integrand +d/dθ(ψ²hh′/le²)
            let hv = self.h.values();
            let hp = self.h.derivative();
            let cross: Vec<f64> = (0..n)
                .map(|j| {
                    let le = self.frame.line_element[j];
                    psi_vals[j] * psi_vals[j] * hv[j] * hp[j] / (le * le)
                })
                .collect();
            let dcross = fourier_diff(grid, &cross, 1)?;
            // volume-path second derivative: ψ̈ = −h·‖ψ‖²/‖h‖²
            let psi_sq: Vec<f64> = psi_vals.iter().map(|v| v * v).collect();
            let h_sq: Vec<f64> = hv.iter().map(|v| v * v).collect();
            let ratio =
                periodic_quadrature(&psi_sq)? / periodic_quadrature(&h_sq)?;
            for j in 0..n {
                let qmk = self.boundary_q[j] - self.frame.curvature[j];
                nc_tangential += self.wtheta * qmk * dcross[j];
                let psi_ddot_nu = -hv[j] * ratio * hv[j]; // ⟨ψ̈⃗,ν⟩·line_element = ψ̈·h
                nc_volume -= self.wtheta * qmk * (psi_vals[j] * psi_vals[j] + psi_ddot_nu);
            }
        }
        Ok(SecondVariationValue {
            value: elastic + tangential + trace + nc_tangential + nc_volume,
            elastic_term: elastic,
            tangential_term: tangential,
            trace_term: trace,
            noncritical_tangential: nc_tangential,
            noncritical_volume: nc_volume,
        })
    }
}

/// Second variation `∂²F(h,u)[ψ]` at a numerically critical pair.
///
/// Fails with a [`Error::NotCritical`] gate error when the pair is not
/// critical; use [`second_variation_forced`] to evaluate the full formula
/// regardless.
pub fn second_variation(
    h: &RadialProfile,
    u: &DisplacementField,
    psi: &Perturbation,
    p: &LameParams,
) -> Result<f64> {
    let ctx = VariationContext::new(h, u, p)?;
    Ok(ctx.quadratic_form(psi, false)?.value)
}

/// Full second-variation formula including the two terms that vanish at
/// critical pairs (reported in the breakdown), with `ψ̈` taken from the
/// volume path.
pub fn second_variation_forced(
    h: &RadialProfile,
    u: &DisplacementField,
    psi: &Perturbation,
    p: &LameParams,
) -> Result<SecondVariationValue> {
    let ctx = VariationContext::new(h, u, p)?;
    ctx.quadratic_form(psi, true)
}

/// Label of a raw Fourier basis mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeLabel {
    Constant,
    Cos(usize),
    Sin(usize),
}

impl core::fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ModeLabel::Constant => write!(f, "const"),
            ModeLabel::Cos(n) => write!(f, "cos{n}"),
            ModeLabel::Sin(n) => write!(f, "sin{n}"),
        }
    }
}

/// Assembled second-variation matrix over the raw Fourier modes, the
/// `H¹(Γ_h)` Gram matrix, and the volume-constraint projector.
#[derive(Debug, Clone)]
pub struct QuadraticFormMatrix {
    pub modes: Vec<ModeLabel>,
    /// `M_ij = ∂²F[ψ_i, ψ_j]` (bilinear extension), symmetrized exactly.
    pub m: SymmetricMatrix,
    /// `G_ij = ∫ (f_i f_j + ∂_τ f_i ∂_τ f_j) dH¹` with `f = ⟨ψ⃗,ν⟩`.
    pub g: SymmetricMatrix,
    /// Orthonormal basis (columns) of the kernel of `ψ ↦ ∫hψ dθ` in
    /// coefficient space; row-major `(2N+1) × 2N`.
    pub projector: Vec<f64>,
    /// Constraint functional per raw mode, `w_i = ∫hψ_i dθ`.
    pub constraint: Vec<f64>,
}

impl QuadraticFormMatrix {
    pub fn n_raw(&self) -> usize {
        self.modes.len()
    }

    pub fn n_kernel(&self) -> usize {
        self.modes.len() - 1
    }
}

/// Assembles the quadratic form over `{1, cos nθ, sin nθ : 1 ≤ n ≤ N}`.
///
/// Requires a numerically critical pair and `N ≤ n_theta/3`. One adjoint
/// solve runs per raw mode; the elastic cross terms are
/// `−∫ ℂE(u_{ψ_i}):E(u_{ψ_j}) dz`.
pub fn assemble(
    h: &RadialProfile,
    u: &DisplacementField,
    p: &LameParams,
    n_modes: usize,
) -> Result<QuadraticFormMatrix> {
    assemble_with(h, u, p, n_modes, false)
}

/// [`assemble`] with an explicit criticality override. When `force` is set on
/// a non-critical pair, the two formula terms that vanish at critical pairs
/// are included through their bilinear polarizations.
pub fn assemble_with(
    h: &RadialProfile,
    u: &DisplacementField,
    p: &LameParams,
    n_modes: usize,
    force: bool,
) -> Result<QuadraticFormMatrix> {
    let grid = h.grid();
    if n_modes == 0 || n_modes > grid.band_limit() {
        return Err(Error::Domain(alloc::format!(
            "mode cutoff {n_modes} outside 1..={} for n_theta = {}",
            grid.band_limit(),
            grid.len()
        )));
    }
    let ctx = VariationContext::new(h, u, p)?;
    if !force && !ctx.criticality.is_critical() {
        return Err(Error::NotCritical {
            deviation: ctx.criticality.deviation,
            threshold: ctx.criticality.threshold(),
        });
    }
    let n = grid.len();
    let mut modes = Vec::with_capacity(2 * n_modes + 1);
    modes.push(ModeLabel::Constant);
    for k in 1..=n_modes {
        modes.push(ModeLabel::Cos(k));
        modes.push(ModeLabel::Sin(k));
    }
    let raw: Vec<Vec<f64>> = modes
        .iter()
        .map(|label| {
            (0..n)
                .map(|j| match label {
                    ModeLabel::Constant => 1.0,
                    ModeLabel::Cos(m) => Float::cos(*m as f64 * grid.node(j)),
                    ModeLabel::Sin(m) => Float::sin(*m as f64 * grid.node(j)),
                })
                .collect()
        })
        .collect();
    let dim = modes.len();

    // traces, tangential derivatives, adjoint strains per mode
    let mut traces = Vec::with_capacity(dim);
    let mut dtraces = Vec::with_capacity(dim);
    let mut strains = Vec::with_capacity(dim);
    for psi in &raw {
        let f = normal_trace(h, psi)?;
        let fd = fourier_diff(grid, &f, 1)?;
        let adj = ctx.adjoint.solve(psi)?;
        strains.push(adjoint::adjoint_strain(u.annulus(), &adj));
        traces.push(f);
        dtraces.push(fd);
    }

    let wtheta = ctx.wtheta;
    let forced_terms = force && !ctx.criticality.is_critical();
    let hv = h.values();
    let hp = h.derivative();
    let h_sq_int = {
        let sq: Vec<f64> = hv.iter().map(|v| v * v).collect();
        periodic_quadrature(&sq)?
    };
    let mut m_raw = alloc::vec![0.0; dim * dim];
    let mut g_raw = alloc::vec![0.0; dim * dim];
    for i in 0..dim {
        for j in i..dim {
            let mut boundary = 0.0;
            let mut gram = 0.0;
            for q in 0..n {
                let le = ctx.frame.line_element[q];
                let k = ctx.frame.curvature[q];
                let tang = dtraces[i][q] * dtraces[j][q] / le;
                boundary += wtheta
                    * (tang
                        - (ctx.boundary_dq_dnu[q] + k * k) * traces[i][q] * traces[j][q] * le);
                gram += wtheta * (traces[i][q] * traces[j][q] * le + tang);
            }
            if forced_terms {
                // bilinear polarizations of the terms that vanish at
                // criticality: ψ² → ψ_i ψ_j throughout
                let cross: Vec<f64> = (0..n)
                    .map(|q| {
                        let le = ctx.frame.line_element[q];
                        raw[i][q] * raw[j][q] * hv[q] * hp[q] / (le * le)
                    })
                    .collect();
                let dcross = fourier_diff(grid, &cross, 1)?;
                let pair: Vec<f64> = (0..n).map(|q| raw[i][q] * raw[j][q]).collect();
                let ratio = periodic_quadrature(&pair)? / h_sq_int;
                for q in 0..n {
                    let qmk = ctx.boundary_q[q] - ctx.frame.curvature[q];
                    boundary += wtheta * qmk * dcross[q];
                    boundary -=
                        wtheta * qmk * (pair[q] - hv[q] * hv[q] * ratio);
                }
            }
            let elastic =
                adjoint::elastic_bilinear(u.annulus(), p, &strains[i], &strains[j]);
            let mij = boundary - elastic;
            m_raw[i * dim + j] = mij;
            m_raw[j * dim + i] = mij;
            g_raw[i * dim + j] = gram;
            g_raw[j * dim + i] = gram;
        }
    }

    // constraint functional and the orthonormal kernel basis via Householder
    let hv = h.values();
    let mut constraint = alloc::vec![0.0; dim];
    for (i, psi) in raw.iter().enumerate() {
        let prod: Vec<f64> = hv.iter().zip(psi).map(|(a, b)| a * b).collect();
        constraint[i] = periodic_quadrature(&prod)?;
    }
    let projector = kernel_basis(&constraint);

    Ok(QuadraticFormMatrix {
        modes,
        m: SymmetricMatrix::from_raw(dim, m_raw)?,
        g: SymmetricMatrix::from_raw(dim, g_raw)?,
        projector,
        constraint,
    })
}

/// Orthonormal basis of `w⊥` as the trailing columns of the Householder
/// reflector sending `w` to `±‖w‖e₁`; row-major `dim × (dim−1)`.
fn kernel_basis(w: &[f64]) -> Vec<f64> {
    let dim = w.len();
    let norm = Float::sqrt(w.iter().map(|v| v * v).sum::<f64>());
    assert!(norm > 0.0, "constraint functional cannot vanish");
    let mut v: Vec<f64> = w.iter().map(|x| x / norm).collect();
    // reflector v ↦ e1 with the stable sign choice
    let sign = if v[0] >= 0.0 { 1.0 } else { -1.0 };
    v[0] += sign;
    let vnorm_sq: f64 = v.iter().map(|x| x * x).sum();
    let mut p = alloc::vec![0.0; dim * (dim - 1)];
    for col in 1..dim {
        for row in 0..dim {
            let e = if row == col { 1.0 } else { 0.0 };
            p[row * (dim - 1) + (col - 1)] = e - 2.0 * v[row] * v[col] / vnorm_sq;
        }
    }
    p
}

/// Constrained spectrum of an assembled quadratic form.
#[derive(Debug, Clone)]
pub struct SpectrumReport {
    /// Smallest constrained generalized eigenvalue.
    pub min_eig: f64,
    /// The numerical coercivity constant (equals `min_eig`).
    pub c0: f64,
    /// Eigenvector of `min_eig` in raw-mode coefficients, unit `G`-norm.
    pub eigvec_coeffs: Vec<f64>,
    /// All constrained eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    /// Indices into `eigenvalues` with `|λ| ≤ tol` (neutral directions).
    pub neutral: Vec<usize>,
    /// `true` when `c0 > tol` (strict positivity verdict).
    pub positive: bool,
    /// The eigenvalue tolerance `1e-7·‖M‖` used for both classifications.
    pub tol: f64,
}

/// Smallest generalized eigenvalue of `(M, G)` restricted to the volume
/// constraint kernel, with the full constrained spectrum attached.
pub fn stability_spectrum(q: &QuadraticFormMatrix) -> Result<SpectrumReport> {
    let dim = q.n_raw();
    let cols = q.n_kernel();
    let mk = q.m.congruence(&q.projector, cols);
    let gk = q.g.congruence(&q.projector, cols);
    let eig = sym_eig_min_full(&mk, Some(&gk))?;
    let tol = EIG_POSITIVITY_TOL * q.m.max_abs();
    // lift the minimal eigenvector back to raw-mode coefficients
    let mut coeffs = alloc::vec![0.0; dim];
    for r in 0..dim {
        for c in 0..cols {
            coeffs[r] += q.projector[r * (dim - 1) + c] * eig.vectors[c * cols];
        }
    }
    let neutral: Vec<usize> = eig
        .values
        .iter()
        .enumerate()
        .filter(|(_, v)| v.abs() <= tol)
        .map(|(i, _)| i)
        .collect();
    let c0 = eig.values[0];
    Ok(SpectrumReport {
        min_eig: c0,
        c0,
        eigvec_coeffs: coeffs,
        eigenvalues: eig.values,
        neutral,
        positive: c0 > tol,
        tol,
    })
}

/// Synthesizes nodal samples from raw-mode coefficients of an assembled form.
pub fn synthesize_mode(q: &QuadraticFormMatrix, grid: PeriodicGrid, coeffs: &[f64]) -> Vec<f64> {
    let n = grid.len();
    let mut out = alloc::vec![0.0; n];
    for (label, c) in q.modes.iter().zip(coeffs) {
        for (j, o) in out.iter_mut().enumerate() {
            *o += c * match label {
                ModeLabel::Constant => 1.0,
                ModeLabel::Cos(m) => Float::cos(*m as f64 * grid.node(j)),
                ModeLabel::Sin(m) => Float::sin(*m as f64 * grid.node(j)),
            };
        }
    }
    out
}

/// Result of the finite-difference cross-check of the second variation.
#[derive(Debug, Clone, Copy)]
pub struct FdCheck {
    pub analytic: f64,
    pub numeric: f64,
    pub rel_err: f64,
}

/// Second central difference of `t ↦ F(g_t, v_t)` along the volume path with
/// velocity ψ, against the assembled quadratic form.
///
/// `step` must lie in `[1e-4, 1e-2]`; each evaluation re-solves the
/// equilibrium on the perturbed profile.
pub fn second_variation_fd_check(
    h: &RadialProfile,
    u: &DisplacementField,
    psi: &Perturbation,
    p: &LameParams,
    step: f64,
    opts: &SolverOptions,
) -> Result<FdCheck> {
    if !(1e-4..=1e-2).contains(&step) {
        return Err(Error::Domain(alloc::format!(
            "finite-difference step {step} outside [1e-4, 1e-2]"
        )));
    }
    let analytic = second_variation(h, u, psi, p)?;
    let alpha = dirichlet_alpha_of(u);
    let f_at = |t: f64| -> Result<f64> {
        let gt = perturbed_on_path(h, psi, t)?;
        let bc = BoundaryData::radial_stretch(alpha, h.outer_radius())?;
        let ut = solve_equilibrium(&gt, &bc, p, opts)?;
        Ok(elastic_energy(&ut, p) + perimeter(&gt))
    };
    let f_plus = f_at(step)?;
    let f_zero = f_at(0.0)?;
    let f_minus = f_at(-step)?;
    let numeric = (f_plus - 2.0 * f_zero + f_minus) / (step * step);
    let rel_err = (numeric - analytic).abs() / analytic.abs().max(1e-30);
    Ok(FdCheck {
        analytic,
        numeric,
        rel_err,
    })
}

/// The volume path `t ↦ (h + tψ)·‖h‖_{L²}/‖h + tψ‖_{L²}` evaluated at `t`,
/// built directly so that only the evaluated point must be an admissible
/// profile (the unit-`t` endpoint need not be).
pub fn perturbed_on_path(h: &RadialProfile, psi: &Perturbation, t: f64) -> Result<RadialProfile> {
    let blend: Vec<f64> = h
        .values()
        .iter()
        .zip(psi.values())
        .map(|(a, b)| a + t * b)
        .collect();
    let sq: Vec<f64> = blend.iter().map(|v| v * v).collect();
    let norm = Float::sqrt(periodic_quadrature(&sq)?);
    let scale = h.l2_norm() / norm;
    let values: Vec<f64> = blend.iter().map(|v| v * scale).collect();
    RadialProfile::from_values(h.grid(), &values, h.outer_radius())
}

/// Recovers the stretch factor of the Dirichlet data from the solved field's
/// outer ring (the data is `αR0σ`, so `α = ⟨u, σ⟩/R0` there).
pub(crate) fn dirichlet_alpha_of(u: &DisplacementField) -> f64 {
    let ns = u.n_rho();
    let map = u.annulus();
    let mut acc = 0.0;
    for j in 0..u.n_theta() {
        let i = j * ns + ns - 1;
        acc += u.component(0)[i] * map.cos_t[j] + u.component(1)[i] * map.sin_t[j];
    }
    acc / (u.n_theta() as f64 * map.outer_radius)
}

/// Human-readable mode labels (CSV header of the matrix dump).
pub fn mode_labels(q: &QuadraticFormMatrix) -> Vec<String> {
    q.modes.iter().map(|m| alloc::format!("{m}")).collect()
}
