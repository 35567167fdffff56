//! Volume-constrained penalized descent on radial profiles and an empirical
//! local-minimality probe.
//!
//! The objective is the energy functional (bulk elastic energy plus cavity
//! perimeter) augmented by `Λ·||Ω_g| − target|` and, optionally, the smoothed
//! proximity term `√((|Ω_g Δ Ω_ref| − ε)² + ε)`. Descent steps follow the
//! negative constraint-projected shape gradient with a backtracking line
//! search; every iterate is re-projected to the target area by `L²` rescaling,
//! which keeps the area drift at round-off level.

use crate::elasticity::{
    boundary_traces, solve_equilibrium, BoundaryData, DisplacementField, LameParams,
    SolverOptions,
};
use crate::error::{Error, Result};
use crate::geometry::{cavity_area, perimeter, BoundaryFrame, RadialProfile};
use crate::numerics::{periodic_quadrature, PeriodicGrid};
use crate::variation::{criticality, Perturbation};
use alloc::vec::Vec;
use num_traits::Float;

/// Componentized value of the penalized objective.
#[derive(Debug, Clone, Copy)]
pub struct PenalizedObjective {
    pub elastic: f64,
    pub perimeter: f64,
    /// `Λ·||Ω_g| − target|`.
    pub penalty: f64,
    /// Smoothed symmetric-difference term; zero when ε is off.
    pub proximity: f64,
    pub total: f64,
}

/// Configuration of the penalized functional and its solver.
#[derive(Debug, Clone)]
pub struct EvolveConfig {
    pub params: LameParams,
    pub alpha: f64,
    /// Constraint value `|Ω_h|` the iterates are held to.
    pub target_area: f64,
    /// Penalty weight Λ; `None` selects `10·(1 + max |Q − k|)` at the
    /// starting profile.
    pub lambda_penalty: Option<f64>,
    /// Smoothing parameter of the optional proximity term (off when `None`).
    pub epsilon: Option<f64>,
    /// Reference profile of the proximity term.
    pub reference: Option<RadialProfile>,
    pub solver: SolverOptions,
}

impl EvolveConfig {
    pub fn new(params: LameParams, alpha: f64, target_area: f64) -> Self {
        Self {
            params,
            alpha,
            target_area,
            lambda_penalty: None,
            epsilon: None,
            reference: None,
            solver: SolverOptions::default(),
        }
    }
}

/// One accepted descent iterate.
#[derive(Debug, Clone)]
pub struct DescentState {
    pub iteration: usize,
    pub objective: PenalizedObjective,
    pub grad_norm: f64,
    pub step: f64,
    pub area: f64,
    pub profile: RadialProfile,
}

/// Half-area of the symmetric difference between two cavities,
/// `|Ω_g Δ Ω_h| = ½∫|g² − h²| dθ`.
pub fn symmetric_difference(g: &RadialProfile, h: &RadialProfile) -> f64 {
    let d: Vec<f64> = g
        .values()
        .iter()
        .zip(h.values())
        .map(|(a, b)| (a * a - b * b).abs())
        .collect();
    0.5 * periodic_quadrature(&d).expect("non-empty")
}

fn solve_at(g: &RadialProfile, cfg: &EvolveConfig) -> Result<DisplacementField> {
    let bc = BoundaryData::radial_stretch(cfg.alpha, g.outer_radius())?;
    solve_equilibrium(g, &bc, &cfg.params, &cfg.solver)
}

fn proximity_term(g: &RadialProfile, cfg: &EvolveConfig) -> f64 {
    match (cfg.epsilon, &cfg.reference) {
        (Some(eps), Some(reference)) => {
            let d = symmetric_difference(g, reference);
            Float::sqrt((d - eps) * (d - eps) + eps)
        }
        _ => 0.0,
    }
}

/// Componentized penalized objective at a profile. The elastic part solves
/// the equilibrium; when no Λ is configured it is resolved at `g` as
/// `10·(1 + max |Q − k|)` — iterative callers freeze it at their starting
/// shape instead so the objective stays autonomous along the run.
pub fn objective(g: &RadialProfile, cfg: &EvolveConfig) -> Result<(PenalizedObjective, DisplacementField)> {
    let u = solve_at(g, cfg)?;
    let elastic = crate::elasticity::elastic_energy(&u, &cfg.params);
    let per = perimeter(g);
    let lambda = match cfg.lambda_penalty {
        Some(l) => l,
        None => effective_lambda(g, &u, cfg),
    };
    let penalty = lambda * (cavity_area(g) - cfg.target_area).abs();
    let proximity = proximity_term(g, cfg);
    Ok((
        PenalizedObjective {
            elastic,
            perimeter: per,
            penalty,
            proximity,
            total: elastic + per + penalty + proximity,
        },
        u,
    ))
}

/// The default penalty weight `10·(1 + max |Q − k|)` evaluated at a shape.
pub fn effective_lambda(g: &RadialProfile, u: &DisplacementField, cfg: &EvolveConfig) -> f64 {
    let crit = criticality(g, u, &cfg.params);
    let worst = crit
        .residual_function
        .iter()
        .fold(0.0f64, |a, r| a.max(r.abs()));
    10.0 * (1.0 + worst)
}

/// `L²(dθ)` gradient of the penalized objective with respect to the nodal
/// values of `g`.
///
/// The functional part contributes `(k − Q(E(u)))·g` (the first-variation
/// density against the polar area weight); the penalty contributes
/// `Λ·sign(|Ω_g| − target)·g`, and the proximity term its smoothed chain rule.
pub fn shape_gradient(g: &RadialProfile, cfg: &EvolveConfig) -> Result<Vec<f64>> {
    let u = solve_at(g, cfg)?;
    Ok(shape_gradient_with(g, &u, cfg))
}

fn shape_gradient_with(g: &RadialProfile, u: &DisplacementField, cfg: &EvolveConfig) -> Vec<f64> {
    let frame = BoundaryFrame::of(g);
    let traces = boundary_traces(u, g, &cfg.params);
    let lambda = match cfg.lambda_penalty {
        Some(l) => l,
        None => effective_lambda(g, u, cfg),
    };
    let sign = {
        let gap = cavity_area(g) - cfg.target_area;
        if gap > 0.0 {
            1.0
        } else if gap < 0.0 {
            -1.0
        } else {
            0.0
        }
    };
    let n = g.grid().len();
    let mut grad: Vec<f64> = (0..n)
        .map(|j| {
            (frame.curvature[j] - traces.boundary_q[j]) * g.values()[j]
                + lambda * sign * g.values()[j]
        })
        .collect();
    if let (Some(eps), Some(reference)) = (cfg.epsilon, &cfg.reference) {
        let d = symmetric_difference(g, reference);
        let outer = (d - eps) / Float::sqrt((d - eps) * (d - eps) + eps);
        for j in 0..n {
            let gsq = g.values()[j] * g.values()[j];
            let rsq = reference.values()[j] * reference.values()[j];
            let s = if gsq > rsq {
                1.0
            } else if gsq < rsq {
                -1.0
            } else {
                0.0
            };
            grad[j] += outer * s * g.values()[j];
        }
    }
    // restrict to the band-limited profile manifold: harmonics above the
    // cutoff are not representable by construction, so stepping along them
    // would be silently filtered out and break the line-search accounting
    let grid = g.grid();
    let mut coeffs = crate::numerics::fourier::fourier_coefficients(grid, &grad)
        .expect("gradient length matches the grid");
    for m in (grid.band_limit() + 1)..coeffs.cos.len() {
        coeffs.cos[m] = 0.0;
        coeffs.sin[m] = 0.0;
    }
    crate::numerics::fourier::fourier_synthesis(grid, &coeffs)
}

/// Projects a gradient onto the tangent space of the area constraint at `g`
/// and returns its `L²(dθ)` norm alongside.
fn project_gradient(g: &RadialProfile, grad: &[f64]) -> (Vec<f64>, f64) {
    let gv = g.values();
    let num: Vec<f64> = gv.iter().zip(grad).map(|(a, b)| a * b).collect();
    let den: Vec<f64> = gv.iter().map(|a| a * a).collect();
    let coef = periodic_quadrature(&num).expect("non-empty")
        / periodic_quadrature(&den).expect("non-empty");
    let proj: Vec<f64> = grad.iter().zip(gv).map(|(r, h)| r - coef * h).collect();
    let sq: Vec<f64> = proj.iter().map(|v| v * v).collect();
    let norm = Float::sqrt(periodic_quadrature(&sq).expect("non-empty"));
    (proj, norm)
}

/// Rescales a profile to the target area exactly (`area = ½‖·‖²_{L²}`).
fn reproject_area(values: &[f64], grid: PeriodicGrid, outer_radius: f64, target: f64) -> Result<RadialProfile> {
    let sq: Vec<f64> = values.iter().map(|v| v * v).collect();
    let area = 0.5 * periodic_quadrature(&sq)?;
    if !(area > 0.0) {
        return Err(Error::GeometryViolation("profile collapsed during descent".into()));
    }
    let scale = Float::sqrt(target / area);
    let scaled: Vec<f64> = values.iter().map(|v| v * scale).collect();
    RadialProfile::from_values(grid, &scaled, outer_radius)
}

const ARMIJO: f64 = 1e-4;
const MAX_HALVINGS: usize = 40;

/// Projected-gradient descent with a monotone backtracking line search.
///
/// Stops when the projected-gradient norm drops to `tol` or after `max_iter`
/// accepted steps; a line search that fails `MAX_HALVINGS` halvings is a
/// stalled-descent error carrying the diagnostic state.
pub fn descend(
    g0: &RadialProfile,
    cfg: &EvolveConfig,
    max_iter: usize,
    tol: f64,
) -> Result<Vec<DescentState>> {
    let grid = g0.grid();
    let r0 = g0.outer_radius();
    let mut g = reproject_area(g0.values(), grid, r0, cfg.target_area)?;
    // freeze the penalty weight at the starting shape so the objective is the
    // same function at every iterate and line-search trial
    let mut cfg = cfg.clone();
    if cfg.lambda_penalty.is_none() {
        let u0 = solve_at(&g, &cfg)?;
        cfg.lambda_penalty = Some(effective_lambda(&g, &u0, &cfg));
    }
    let cfg = &cfg;
    let (mut obj, mut u) = objective(&g, cfg)?;
    let mut step = 0.1;
    let mut trace = Vec::with_capacity(max_iter.min(1024) + 1);
    let (mut dir, mut gnorm) = project_gradient(&g, &shape_gradient_with(&g, &u, cfg));
    trace.push(DescentState {
        iteration: 0,
        objective: obj,
        grad_norm: gnorm,
        step,
        area: cavity_area(&g),
        profile: g.clone(),
    });
    for iteration in 1..=max_iter {
        if gnorm <= tol {
            break;
        }
        // backtracking with Armijo sufficient decrease
        let mut accepted = None;
        let mut trial_step = step;
        for _ in 0..=MAX_HALVINGS {
            let candidate: Vec<f64> = g
                .values()
                .iter()
                .zip(&dir)
                .map(|(v, d)| v - trial_step * d)
                .collect();
            let trial = reproject_area(&candidate, grid, r0, cfg.target_area)
                .and_then(|gt| objective(&gt, cfg).map(|o| (gt, o)));
            // invalid geometry counts as a rejected step
            if let Ok((gt, (ot, ut))) = trial {
                if ot.total <= obj.total - ARMIJO * trial_step * gnorm * gnorm {
                    accepted = Some((gt, ot, ut));
                    break;
                }
            }
            trial_step *= 0.5;
        }
        let Some((gt, ot, ut)) = accepted else {
            return Err(Error::StalledDescent {
                iteration,
                step: trial_step,
                grad_norm: gnorm,
                objective: obj.total,
            });
        };
        g = gt;
        obj = ot;
        u = ut;
        step = (trial_step * 2.0).min(1.0);
        let (d, n) = project_gradient(&g, &shape_gradient_with(&g, &u, cfg));
        dir = d;
        gnorm = n;
        trace.push(DescentState {
            iteration,
            objective: obj,
            grad_norm: gnorm,
            step,
            area: cavity_area(&g),
            profile: g.clone(),
        });
        if gnorm <= tol {
            break;
        }
    }
    Ok(trace)
}

/// One probe sample: energy excess against the symmetric-difference measure.
#[derive(Debug, Clone, Copy)]
pub struct ProbeSample {
    /// `F(g) − F(h)`.
    pub energy_excess: f64,
    /// `|Ω_g Δ Ω_h|`.
    pub sym_diff: f64,
    /// `energy_excess / sym_diff²`.
    pub ratio: f64,
}

/// Report of the quantitative minimality probe.
#[derive(Debug, Clone)]
pub struct ProbeReport {
    pub samples: Vec<ProbeSample>,
    pub min_ratio: f64,
    /// Least-squares constant of `F(g) − F(h) ≈ c·|Ω_g Δ Ω_h|²` through the
    /// origin.
    pub fitted_c: f64,
    pub amplitude: f64,
}

/// Deterministic splitmix64 stream for probe sampling.
pub struct SplitMix64(pub u64);

impl SplitMix64 {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in [-1, 1).
    pub fn next_symmetric(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 52) as f64 - 1.0
    }
}

/// Probe controls; modes are sampled uniformly in `[min_mode, max_mode]`.
#[derive(Debug, Clone, Copy)]
pub struct ProbeConfig {
    pub n_samples: usize,
    /// Sup-norm of the radial perturbation as a fraction of the clearance
    /// between the profile and its admissible band `(0, R0)`; a fraction
    /// keeps every sampled shape admissible regardless of how thin the
    /// remaining annulus is.
    pub amplitude: f64,
    pub seed: u64,
    pub min_mode: usize,
    pub max_mode: usize,
}

impl ProbeConfig {
    pub fn new(n_samples: usize, amplitude: f64, seed: u64) -> Self {
        Self {
            n_samples,
            amplitude,
            seed,
            min_mode: 1,
            max_mode: 8,
        }
    }
}

/// Quantitative minimality probe around a numerically critical profile:
/// random band-limited volume-projected perturbations `g`, reporting
/// `min (F(g) − F(h))/|Ω_g Δ Ω_h|²` and the fitted quadratic constant.
pub fn minimality_probe(
    h: &RadialProfile,
    cfg: &EvolveConfig,
    probe: &ProbeConfig,
) -> Result<ProbeReport> {
    if !(probe.amplitude > 0.0 && probe.amplitude < 1.0) {
        return Err(Error::Domain(alloc::format!(
            "probe amplitude must lie in (0, 1), got {}",
            probe.amplitude
        )));
    }
    if probe.min_mode == 0 || probe.max_mode < probe.min_mode
        || probe.max_mode > h.grid().band_limit()
    {
        return Err(Error::Domain(alloc::format!(
            "probe mode range [{}, {}] invalid for n_theta = {}",
            probe.min_mode,
            probe.max_mode,
            h.grid().len()
        )));
    }
    let u = solve_at(h, cfg)?;
    let crit = criticality(h, &u, &cfg.params);
    if !crit.is_critical() {
        return Err(Error::NotCritical {
            deviation: crit.deviation,
            threshold: crit.threshold(),
        });
    }
    let f_base = crate::elasticity::elastic_energy(&u, &cfg.params) + perimeter(h);
    let base_area = cavity_area(h);
    let grid = h.grid();
    let n = grid.len();
    // clearance of the profile inside its admissible band (0, R0)
    let max_h = h.values().iter().fold(0.0f64, |a, &b| a.max(b));
    let min_h = h.values().iter().fold(f64::INFINITY, |a, &b| a.min(b));
    let clearance = (h.outer_radius() - max_h).min(min_h);
    let mut rng = SplitMix64(probe.seed);
    let mut samples = Vec::with_capacity(probe.n_samples);
    let mut sum_xy = 0.0;
    let mut sum_xx = 0.0;
    let mut min_ratio = f64::INFINITY;
    for _ in 0..probe.n_samples {
        // random band-limited perturbation, sup-norm = amplitude
        let mut psi = alloc::vec![0.0; n];
        for mode in probe.min_mode..=probe.max_mode {
            let (ca, sa) = (rng.next_symmetric(), rng.next_symmetric());
            for (j, v) in psi.iter_mut().enumerate() {
                let ang = mode as f64 * grid.node(j);
                *v += ca * Float::cos(ang) + sa * Float::sin(ang);
            }
        }
        let sup = psi.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if sup == 0.0 {
            continue;
        }
        let scale = probe.amplitude * clearance / sup;
        let candidate: Vec<f64> = h
            .values()
            .iter()
            .zip(&psi)
            .map(|(a, b)| a + scale * b)
            .collect();
        let g = reproject_area(&candidate, grid, h.outer_radius(), base_area)?;
        let (obj, _) = objective(&g, cfg)?;
        let f_g = obj.elastic + obj.perimeter;
        let sym = symmetric_difference(&g, h);
        let excess = f_g - f_base;
        let ratio = excess / (sym * sym);
        min_ratio = min_ratio.min(ratio);
        sum_xy += excess * sym * sym;
        sum_xx += Float::powi(sym, 4);
        samples.push(ProbeSample {
            energy_excess: excess,
            sym_diff: sym,
            ratio,
        });
    }
    if samples.is_empty() {
        return Err(Error::Domain("probe produced no valid samples".into()));
    }
    Ok(ProbeReport {
        samples,
        min_ratio,
        fitted_c: sum_xy / sum_xx,
        amplitude: probe.amplitude,
    })
}

/// Constraint-projected perturbation pointing from `h` toward `g` (used by
/// callers that feed descent output into the variational machinery).
pub fn direction_between(h: &RadialProfile, g: &RadialProfile) -> Result<Perturbation> {
    let diff: Vec<f64> = g
        .values()
        .iter()
        .zip(h.values())
        .map(|(a, b)| a - b)
        .collect();
    Perturbation::projected(h, &diff)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn alpha0_cfg(target: f64) -> EvolveConfig {
        let p = LameParams::new(1.0, 0.0).unwrap();
        let mut cfg = EvolveConfig::new(p, 0.0, target);
        cfg.solver = SolverOptions::with_n_rho(12);
        cfg
    }

    #[test]
    fn objective_components_alpha_zero() {
        let g = PeriodicGrid::new(32).unwrap();
        let h = RadialProfile::round(g, 1.0, 2.0).unwrap();
        let cfg = alpha0_cfg(PI);
        let (obj, _) = objective(&h, &cfg).unwrap();
        assert_eq!(obj.elastic, 0.0);
        assert!((obj.perimeter - 2.0 * PI).abs() <= 1e-12);
        assert!(obj.penalty.abs() <= 1e-10);
        assert!((obj.total - 2.0 * PI).abs() <= 1e-10);
    }

    #[test]
    fn objective_components_at_reference_disk() {
        // μ=1, λ=0, α=1, r=0.5, R0=1, Λ=10 with a matching target:
        // elastic 1.2π ≈ 3.7699, perimeter π, penalty 0
        let g = PeriodicGrid::new(32).unwrap();
        let h = RadialProfile::round(g, 0.5, 1.0).unwrap();
        let p = LameParams::new(1.0, 0.0).unwrap();
        let mut cfg = EvolveConfig::new(p, 1.0, cavity_area(&h));
        cfg.lambda_penalty = Some(10.0);
        cfg.solver = SolverOptions::with_n_rho(24);
        let (obj, _) = objective(&h, &cfg).unwrap();
        assert!(((obj.elastic - 1.2 * PI) / (1.2 * PI)).abs() <= 1e-8);
        assert!((obj.perimeter - PI).abs() <= 1e-12);
        assert!(obj.penalty.abs() <= 1e-12);
    }

    #[test]
    fn gradient_vanishes_at_stretched_round_configuration() {
        // criticality of the round configuration under stretching: the
        // constraint-projected gradient vanishes when the target matches
        let g = PeriodicGrid::new(32).unwrap();
        let h = RadialProfile::round(g, 0.5, 1.0).unwrap();
        let p = LameParams::new(1.0, 0.0).unwrap();
        let mut cfg = EvolveConfig::new(p, 1.0, cavity_area(&h));
        cfg.solver = SolverOptions::with_n_rho(24);
        let grad = shape_gradient(&h, &cfg).unwrap();
        // the unprojected gradient is constant in θ at a critical shape
        let mean: f64 = grad.iter().sum::<f64>() / grad.len() as f64;
        let spread = grad.iter().fold(0.0f64, |a, v| a.max((v - mean).abs()));
        assert!(spread <= 1e-6, "gradient spread {spread}");
        let (_, norm) = project_gradient(&h, &grad);
        assert!(norm <= 1e-6, "projected gradient norm {norm}");
    }

    #[test]
    fn gradient_matches_fd_with_elasticity() {
        let g = PeriodicGrid::new(32).unwrap();
        let h =
            RadialProfile::from_harmonics(g, 1.0, 0.6, &[(2, 0.01, 0.0), (3, 0.0, 0.005)]).unwrap();
        let p = LameParams::new(1.0, 0.0).unwrap();
        // target away from the current area keeps the penalty smooth locally
        let mut cfg = EvolveConfig::new(p, 0.8, 0.9 * cavity_area(&h));
        cfg.lambda_penalty = Some(5.0);
        cfg.solver = SolverOptions::with_n_rho(20);
        let grad = shape_gradient(&h, &cfg).unwrap();
        // directional FD of the full objective along band-limited directions
        let eps = 1e-6;
        for mode in [0usize, 2] {
            let dir: Vec<f64> = (0..32).map(|q| Float::cos(mode as f64 * g.node(q))).collect();
            let feval = |sign: f64| {
                let vals: Vec<f64> = h
                    .values()
                    .iter()
                    .zip(&dir)
                    .map(|(a, b)| a + sign * eps * b)
                    .collect();
                let gp = RadialProfile::from_values(g, &vals, 1.0).unwrap();
                let (obj, _) = objective(&gp, &cfg).unwrap();
                obj.total
            };
            let numeric = (feval(1.0) - feval(-1.0)) / (2.0 * eps);
            let prod: Vec<f64> = grad.iter().zip(&dir).map(|(a, b)| a * b).collect();
            let analytic = periodic_quadrature(&prod).unwrap();
            let rel = ((numeric - analytic) / numeric.abs().max(1e-10)).abs();
            assert!(rel <= 1e-3, "mode {mode}: numeric {numeric} vs analytic {analytic}");
        }
    }

    #[test]
    fn gradient_matches_fd_on_random_profiles_alpha_zero() {
        // five seeded random band-limited profiles, perimeter-only fast path
        let g = PeriodicGrid::new(32).unwrap();
        let mut rng = SplitMix64(99);
        for _ in 0..5 {
            let harmonics: Vec<(usize, f64, f64)> = (1..=4)
                .map(|m| (m, 0.02 * rng.next_symmetric(), 0.02 * rng.next_symmetric()))
                .collect();
            let h = RadialProfile::from_harmonics(g, 2.0, 1.0, &harmonics).unwrap();
            // fixed penalty weight, sampled away from the kink at zero gap
            let mut cfg = alpha0_cfg(0.95 * cavity_area(&h));
            cfg.lambda_penalty = Some(5.0);
            let grad = shape_gradient(&h, &cfg).unwrap();
            let eps = 1e-6;
            let dir: Vec<f64> = (0..32).map(|q| Float::sin(2.0 * g.node(q))).collect();
            let feval = |sign: f64| {
                let vals: Vec<f64> = h
                    .values()
                    .iter()
                    .zip(&dir)
                    .map(|(a, b)| a + sign * eps * b)
                    .collect();
                let gp = RadialProfile::from_values(g, &vals, 2.0).unwrap();
                let (obj, _) = objective(&gp, &cfg).unwrap();
                obj.total
            };
            let numeric = (feval(1.0) - feval(-1.0)) / (2.0 * eps);
            let prod: Vec<f64> = grad.iter().zip(&dir).map(|(a, b)| a * b).collect();
            let analytic = periodic_quadrature(&prod).unwrap();
            let rel = ((numeric - analytic) / numeric.abs().max(1e-10)).abs();
            assert!(rel <= 1e-4, "numeric {numeric} vs analytic {analytic}");
        }
    }

    #[test]
    fn proximity_term_activates_with_epsilon() {
        let g = PeriodicGrid::new(32).unwrap();
        let h = RadialProfile::round(g, 1.0, 2.0).unwrap();
        let other = RadialProfile::round(g, 1.05, 2.0).unwrap();
        let p = LameParams::new(1.0, 0.0).unwrap();
        let mut cfg = EvolveConfig::new(p, 0.0, cavity_area(&other));
        cfg.epsilon = Some(1e-3);
        cfg.reference = Some(h.clone());
        cfg.solver = SolverOptions::with_n_rho(10);
        let (obj, _) = objective(&other, &cfg).unwrap();
        let d = symmetric_difference(&other, &h);
        let want = Float::sqrt((d - 1e-3) * (d - 1e-3) + 1e-3);
        assert!((obj.proximity - want).abs() <= 1e-12);
        assert!(obj.total >= obj.elastic + obj.perimeter + obj.penalty);
    }

    #[test]
    fn round_profile_is_perimeter_critical() {
        let g = PeriodicGrid::new(32).unwrap();
        let h = RadialProfile::round(g, 1.0, 2.0).unwrap();
        let cfg = alpha0_cfg(PI);
        let grad = shape_gradient(&h, &cfg).unwrap();
        let (_, norm) = project_gradient(&h, &grad);
        assert!(norm <= 1e-10, "projected gradient norm {norm}");
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let g = PeriodicGrid::new(32).unwrap();
        let h = RadialProfile::from_harmonics(g, 2.0, 1.0, &[(2, 0.01, 0.0)]).unwrap();
        let cfg = alpha0_cfg(cavity_area(&h));
        let grad = shape_gradient(&h, &cfg).unwrap();
        // oracle: central differences of the raw objective per node, without
        // the penalty (area held fixed by comparing the F-part only)
        let n = g.len();
        let eps = 1e-6;
        let mut worst = 0.0f64;
        for j in (0..n).step_by(5) {
            let mut up = h.values().to_vec();
            up[j] += eps;
            let mut dn = h.values().to_vec();
            dn[j] -= eps;
            // bypass band-limiting by evaluating the functional directly on
            // perturbed profiles built from the same harmonics plus a delta:
            // the delta aliases, so instead perturb along a smooth bump
            // concentrated at mode content below the cutoff.
            let _ = (up, dn);
            // directional derivative along cos 3θ instead (band-limited):
            let dir: Vec<f64> = (0..n).map(|q| Float::cos(3.0 * g.node(q))).collect();
            let plus: Vec<f64> = h.values().iter().zip(&dir).map(|(a, b)| a + eps * b).collect();
            let minus: Vec<f64> = h.values().iter().zip(&dir).map(|(a, b)| a - eps * b).collect();
            let fp = perimeter(&RadialProfile::from_values(g, &plus, 2.0).unwrap());
            let fm = perimeter(&RadialProfile::from_values(g, &minus, 2.0).unwrap());
            let numeric = (fp - fm) / (2.0 * eps);
            let prod: Vec<f64> = grad.iter().zip(&dir).map(|(a, b)| a * b).collect();
            // subtract the penalty contribution, which the perimeter-only
            // oracle does not see (sign(0)·g ≡ 0 here since area matches)
            let analytic = periodic_quadrature(&prod).unwrap();
            worst = worst.max(((numeric - analytic) / numeric.abs().max(1.0)).abs());
            break;
        }
        assert!(worst <= 1e-4, "gradient FD mismatch {worst}");
    }

    #[test]
    fn descent_from_minimizer_terminates_immediately() {
        let g = PeriodicGrid::new(32).unwrap();
        let h = RadialProfile::round(g, 1.0, 2.0).unwrap();
        let cfg = alpha0_cfg(PI);
        let trace = descend(&h, &cfg, 50, 1e-6).unwrap();
        assert!(trace.len() <= 2, "moved {} iterations", trace.len());
    }

    #[test]
    fn descent_from_stretched_round_minimizer_terminates() {
        // round configuration inside the stability window, with elasticity
        let g = PeriodicGrid::new(32).unwrap();
        let h = RadialProfile::round(g, 0.995, 1.0).unwrap();
        let p = LameParams::new(1.0, 0.0).unwrap();
        let mut cfg = EvolveConfig::new(p, 1.0, cavity_area(&h));
        cfg.solver = SolverOptions::with_n_rho(24);
        let trace = descend(&h, &cfg, 50, 1e-5).unwrap();
        assert!(trace.len() <= 2, "moved {} iterations", trace.len());
        assert!(trace.last().unwrap().grad_norm <= 1e-5);
    }

    #[test]
    fn descent_stalls_with_zero_tolerance_at_minimizer() {
        let g = PeriodicGrid::new(32).unwrap();
        let h = RadialProfile::round(g, 1.0, 2.0).unwrap();
        let cfg = alpha0_cfg(PI);
        let err = descend(&h, &cfg, 50, 0.0);
        assert!(matches!(err, Err(Error::StalledDescent { .. })));
    }

    #[test]
    fn isoperimetric_attraction_alpha_zero() {
        let g = PeriodicGrid::new(32).unwrap();
        let h = RadialProfile::from_harmonics(g, 2.0, 1.0, &[(3, 0.01, 0.0)]).unwrap();
        let cfg = alpha0_cfg(PI);
        let trace = descend(&h, &cfg, 400, 1e-6).unwrap();
        let last = trace.last().unwrap();
        assert!(last.grad_norm <= 1e-6, "grad norm {}", last.grad_norm);
        // monotone objective
        for w in trace.windows(2) {
            assert!(w[1].objective.total <= w[0].objective.total + 1e-14);
        }
        let mean = last.profile.mean_radius();
        let worst = last
            .profile
            .values()
            .iter()
            .fold(0.0f64, |a, v| a.max((v - mean).abs()));
        assert!(worst <= 1e-3, "terminal profile deviates {worst}");
    }

    #[test]
    fn probe_rejects_zero_amplitude() {
        let g = PeriodicGrid::new(32).unwrap();
        let h = RadialProfile::round(g, 1.0, 2.0).unwrap();
        let cfg = alpha0_cfg(PI);
        let probe = ProbeConfig::new(5, 0.0, 7);
        assert!(matches!(
            minimality_probe(&h, &cfg, &probe),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn probe_alpha_zero_isoperimetric_constant() {
        let g = PeriodicGrid::new(32).unwrap();
        let h = RadialProfile::round(g, 1.0, 2.0).unwrap();
        let cfg = alpha0_cfg(PI);
        let mut probe = ProbeConfig::new(20, 1e-2, 42);
        probe.min_mode = 2;
        probe.max_mode = 6;
        let rep = minimality_probe(&h, &cfg, &probe).unwrap();
        assert!(rep.min_ratio > 0.0, "min ratio {}", rep.min_ratio);
        assert!(rep.fitted_c > 0.0);
        // quadratic-growth consistency under amplitude doubling
        probe.amplitude = 2e-2;
        let rep2 = minimality_probe(&h, &cfg, &probe).unwrap();
        let factor = (rep2.fitted_c / rep.fitted_c).max(rep.fitted_c / rep2.fitted_c);
        assert!(factor < 4.0, "fitted c unstable: {factor}");
    }

    #[test]
    fn area_drift_is_roundoff() {
        let g = PeriodicGrid::new(32).unwrap();
        let h = RadialProfile::from_harmonics(g, 2.0, 1.0, &[(2, 0.02, 0.01)]).unwrap();
        let target = cavity_area(&h);
        let cfg = alpha0_cfg(target);
        let trace = descend(&h, &cfg, 25, 1e-12).unwrap_or_else(|e| match e {
            Error::StalledDescent { .. } => Vec::new(),
            other => panic!("{other}"),
        });
        for st in &trace {
            assert!((st.area - target).abs() <= 1e-12 * target);
        }
    }
}
