//! Closed forms for the round cavity under radial stretching.
//!
//! A round cavity of radius `r` has the explicit equilibrium
//! `u = (a/ρ + bρ)σ(θ)` with `b = α/β(r)`, `a = ((μ+λ)/μ)r²b` and
//! `β(t) = 1 + ((μ+λ)/μ)(t²/R0²)`. Everything downstream — the energy
//! density, the boundary traces, the lower bound for the second variation and
//! the stability thresholds `r₀` and `G(α)` — follows in closed form. These
//! serve both as the production path for round configurations and as the
//! oracle for every numerical module.

use crate::elasticity::LameParams;
use crate::error::{Error, Result};
use crate::numerics::{bisect, fourier_diff, periodic_quadrature, PeriodicGrid};
use alloc::vec::Vec;
use num_traits::Float;

/// Number of pre-scan intervals used to locate threshold sign changes.
const PRESCAN_INTERVALS: usize = 64;
/// Bisection tolerance of the threshold computations.
const THRESHOLD_TOL: f64 = 1e-8;

/// Round configuration with its derived radial-solution coefficients.
#[derive(Debug, Clone, Copy)]
pub struct DiskConfig {
    pub r: f64,
    pub outer_radius: f64,
    pub alpha: f64,
    pub params: LameParams,
    /// Coefficient of `1/ρ` in the radial solution.
    pub a: f64,
    /// Coefficient of `ρ` in the radial solution.
    pub b: f64,
    /// `β(r) = 1 + ((μ+λ)/μ)(r²/R0²)`.
    pub beta_r: f64,
}

/// `β(t)` for the given parameters and outer radius.
pub fn beta(t: f64, p: &LameParams, outer_radius: f64) -> f64 {
    1.0 + (p.mu + p.lambda) / p.mu * (t * t) / (outer_radius * outer_radius)
}

/// Builds the round-configuration coefficients.
pub fn disk_config(r: f64, outer_radius: f64, alpha: f64, p: &LameParams) -> Result<DiskConfig> {
    if !(r > 0.0 && r < outer_radius) {
        return Err(Error::Domain(alloc::format!(
            "cavity radius {r} must lie in (0, {outer_radius})"
        )));
    }
    let beta_r = beta(r, p, outer_radius);
    let b = alpha / beta_r;
    let a = (p.mu + p.lambda) / p.mu * r * r * b;
    Ok(DiskConfig {
        r,
        outer_radius,
        alpha,
        params: *p,
        a,
        b,
        beta_r,
    })
}

impl DiskConfig {
    /// Radial displacement profile `f(ρ) = a/ρ + bρ`.
    pub fn radial_displacement(&self, rho: f64) -> f64 {
        self.a / rho + self.b * rho
    }

    /// Bulk elastic energy of the round equilibrium,
    /// `2π[(μ+λ)b²(R0²−r²) + μa²(1/r² − 1/R0²)]`.
    pub fn bulk_energy(&self) -> f64 {
        let p = &self.params;
        let r0 = self.outer_radius;
        core::f64::consts::TAU
            * ((p.mu + p.lambda) * self.b * self.b * (r0 * r0 - self.r * self.r)
                + p.mu * self.a * self.a * (1.0 / (self.r * self.r) - 1.0 / (r0 * r0)))
    }

    /// `∂_ν Q(E(u))` on the cavity boundary: `−8(μ+λ)²b²/(μ r)`.
    pub fn boundary_dq_dnu(&self) -> f64 {
        let p = &self.params;
        let mupl = p.mu + p.lambda;
        -8.0 * mupl * mupl * self.b * self.b / (p.mu * self.r)
    }
}

/// Pointwise energy density `Q(E(u)) = 2(μ+λ)b² + 2μa²/ρ⁴` of the round
/// equilibrium; strictly decreasing in `ρ` whenever `a ≠ 0`.
pub fn disk_energy_density(cfg: &DiskConfig, rho: f64) -> Result<f64> {
    if rho < cfg.r || rho > cfg.outer_radius {
        return Err(Error::Domain(alloc::format!(
            "evaluation radius {rho} outside [{}, {}]",
            cfg.r,
            cfg.outer_radius
        )));
    }
    let p = &cfg.params;
    Ok(2.0 * (p.mu + p.lambda) * cfg.b * cfg.b + 2.0 * p.mu * cfg.a * cfg.a / Float::powi(rho, 4))
}

/// Locates `sup { t ≤ hi : f(t) ≥ 0 }` by scanning for the largest sign
/// change and bisecting it. Returns `None` when `f < 0` on the whole scan
/// and `Some(hi)` when `f ≥ 0` all the way up to `hi`.
fn sup_of_level_set(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> Result<Option<f64>> {
    let n = PRESCAN_INTERVALS;
    let ts: Vec<f64> = (0..=n)
        .map(|i| lo + (hi - lo) * i as f64 / n as f64)
        .collect();
    let vals: Vec<f64> = ts.iter().map(|&t| f(t)).collect();
    let mut bracket = None;
    for i in 0..n {
        if vals[i] >= 0.0 && vals[i + 1] < 0.0 {
            bracket = Some((ts[i], ts[i + 1]));
        }
    }
    match bracket {
        Some((a, b)) => {
            let root = bisect(&f, a, b, THRESHOLD_TOL)?;
            Ok(Some(root))
        }
        None => {
            if vals[n] >= 0.0 || vals[n - 1] >= 0.0 {
                // inequality holds up to the right endpoint
                Ok(Some(hi))
            } else if vals.iter().all(|v| *v < 0.0) {
                Ok(None)
            } else {
                // holds somewhere but never crosses downward before hi
                Ok(Some(hi))
            }
        }
    }
}

/// Threshold radius `r₀ = sup{ t ≤ R0 : (1+t²)·log(R0/t) ≥ η/(4μ) }`,
/// located by bisection to 1e-8.
///
/// Returns `R0` when the inequality holds up to `R0⁻` (the `η → 0`
/// degeneracy) and `0` when it holds nowhere.
pub fn r0_threshold(p: &LameParams, outer_radius: f64) -> f64 {
    let thresh = p.eta / (4.0 * p.mu);
    let f = move |t: f64| (1.0 + t * t) * Float::ln(outer_radius / t) - thresh;
    match sup_of_level_set(f, 1e-6 * outer_radius, outer_radius) {
        Ok(Some(t)) => t,
        Ok(None) => 0.0,
        Err(_) => 0.0,
    }
}

/// `G(α)` threshold, `sup{ t ≤ R0 : t·log(R0/t)·β²(t) ≥ η/(32(μ+λ)²α²) }`.
///
/// The set is empty for `α = 0` (and whenever the stretch is too weak to
/// matter), encoded explicitly as [`GAlpha::NegInfinity`] rather than a float
/// sentinel: the condition `r > G(α)` is then vacuously true.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GAlpha {
    NegInfinity,
    Radius(f64),
}

impl GAlpha {
    pub fn is_met_by(&self, r: f64) -> bool {
        match self {
            GAlpha::NegInfinity => true,
            GAlpha::Radius(g) => r > *g,
        }
    }

    pub fn as_f64(&self) -> f64 {
        match self {
            GAlpha::NegInfinity => f64::NEG_INFINITY,
            GAlpha::Radius(g) => *g,
        }
    }
}

pub fn g_threshold(alpha: f64, p: &LameParams, outer_radius: f64) -> GAlpha {
    let mupl = p.mu + p.lambda;
    let denom = 32.0 * mupl * mupl * alpha * alpha;
    if denom == 0.0 {
        // infinite right-hand side: the defining set is empty
        return GAlpha::NegInfinity;
    }
    let thresh = p.eta / denom;
    let f = move |t: f64| t * Float::ln(outer_radius / t) * Float::powi(beta(t, p, outer_radius), 2) - thresh;
    match sup_of_level_set(f, 1e-6 * outer_radius, outer_radius) {
        Ok(Some(t)) => GAlpha::Radius(t),
        _ => GAlpha::NegInfinity,
    }
}

/// Stability verdict of a round configuration against the threshold window.
#[derive(Debug, Clone, Copy)]
pub struct DiskStabilityReport {
    pub r0: f64,
    pub g_alpha: GAlpha,
    /// `(max(r₀, G(α)), R0)`, or `None` when empty.
    pub window: Option<(f64, f64)>,
    pub condition_met: bool,
    /// `r − r₀`.
    pub margin_r0: f64,
    /// `r − G(α)`; infinite when `G = −∞`.
    pub margin_g: f64,
}

/// Evaluates window membership of the radius `r`.
pub fn stability_window(alpha: f64, p: &LameParams, outer_radius: f64, r: f64) -> DiskStabilityReport {
    let r0 = r0_threshold(p, outer_radius);
    let g = g_threshold(alpha, p, outer_radius);
    let lo = match g {
        GAlpha::NegInfinity => r0,
        GAlpha::Radius(t) => r0.max(t),
    };
    let window = if lo < outer_radius {
        Some((lo, outer_radius))
    } else {
        None
    };
    let condition_met = r > r0 && g.is_met_by(r) && r < outer_radius;
    DiskStabilityReport {
        r0,
        g_alpha: g,
        window,
        condition_met,
        margin_r0: r - r0,
        margin_g: match g {
            GAlpha::NegInfinity => f64::INFINITY,
            GAlpha::Radius(t) => r - t,
        },
    }
}

/// Deficit factor `1 − 32η⁻¹(μ+λ)²b²·r·log(R0/r)` multiplying the Wirtinger
/// quadratic in the round-configuration lower bound.
pub fn deficit_factor(cfg: &DiskConfig) -> f64 {
    let p = &cfg.params;
    let mupl = p.mu + p.lambda;
    1.0 - 32.0 / p.eta * mupl * mupl * cfg.b * cfg.b * cfg.r * Float::ln(cfg.outer_radius / cfg.r)
}

/// Closed-form lower bound of the second variation at the round
/// configuration:
/// `(1 − 32η⁻¹(μ+λ)²b²·r·log(R0/r)) · ∫ (|∂_τ⟨ψ⃗,ν⟩|² − r⁻²⟨ψ⃗,ν⟩²) dH¹`.
///
/// Valid for `r > r₀` and mean-zero `ψ`; on the circle the trace integral is
/// `(1/r)∫(ψ′² − ψ²) dθ`.
pub fn lower_bound_form(cfg: &DiskConfig, grid: PeriodicGrid, psi: &[f64]) -> Result<f64> {
    grid.check_len(psi)?;
    let r0 = r0_threshold(&cfg.params, cfg.outer_radius);
    if cfg.r <= r0 {
        return Err(Error::Domain(alloc::format!(
            "lower bound requires r > r0 = {r0:.6}, got r = {}",
            cfg.r
        )));
    }
    let mean = periodic_quadrature(psi)?;
    if mean.abs() > 1e-10 * (1.0 + psi.iter().fold(0.0f64, |a, v| a.max(v.abs()))) {
        return Err(Error::Domain(alloc::format!(
            "psi must be mean-zero on the circle, got mean {mean:.3e}"
        )));
    }
    let dpsi = fourier_diff(grid, psi, 1)?;
    let integrand: Vec<f64> = psi
        .iter()
        .zip(&dpsi)
        .map(|(p, dp)| dp * dp - p * p)
        .collect();
    let wirtinger = periodic_quadrature(&integrand)? / cfg.r;
    Ok(deficit_factor(cfg) * wirtinger)
}

/// Result of checking the adjoint-energy estimate at a round configuration.
#[derive(Debug, Clone, Copy)]
pub struct BoundCheck {
    /// `2∫Q(E(u_ψ)) dz` that was checked.
    pub adjoint_energy: f64,
    /// `(32(μ+λ)²b²/η)·r·log(R0/r)·∫(⟨ψ⃗,ν⟩² + |∂_τ⟨ψ⃗,ν⟩|²) dH¹`.
    pub bound: f64,
    /// `bound − adjoint_energy`.
    pub margin: f64,
    pub holds: bool,
}

/// Checks `2∫Q(E(u_ψ)) ≤ (32(μ+λ)²b²/η)·r·log(R0/r)·‖⟨ψ⃗,ν⟩‖²_{H¹(∂B_r)}`
/// against a numerically computed adjoint energy.
pub fn adjoint_energy_bound_check(
    cfg: &DiskConfig,
    grid: PeriodicGrid,
    psi: &[f64],
    numeric_adjoint_energy: f64,
) -> Result<BoundCheck> {
    grid.check_len(psi)?;
    let p = &cfg.params;
    let mupl = p.mu + p.lambda;
    let dpsi = fourier_diff(grid, psi, 1)?;
    // ∫⟨ψ⃗,ν⟩² dH¹ = r∫ψ², ∫|∂_τ⟨ψ⃗,ν⟩|² dH¹ = (1/r)∫ψ′²
    let psi_sq: Vec<f64> = psi.iter().map(|v| v * v).collect();
    let dpsi_sq: Vec<f64> = dpsi.iter().map(|v| v * v).collect();
    let h1 = cfg.r * periodic_quadrature(&psi_sq)? + periodic_quadrature(&dpsi_sq)? / cfg.r;
    let bound = 32.0 * mupl * mupl * cfg.b * cfg.b / p.eta
        * cfg.r
        * Float::ln(cfg.outer_radius / cfg.r)
        * h1;
    let margin = bound - numeric_adjoint_energy;
    Ok(BoundCheck {
        adjoint_energy: numeric_adjoint_energy,
        bound,
        margin,
        holds: margin >= 0.0,
    })
}
