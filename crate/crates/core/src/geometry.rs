//! Radial profiles of star-shaped cavities and their differential geometry.
//!
//! A cavity is the polar subgraph of a positive `2π`-periodic function
//! `h(θ)` inside the outer disk of radius `R0`; the solid occupies the region
//! between the cavity boundary `Γ_h` and the outer circle. Profiles are stored
//! as nodal samples band-limited to `n_theta/3` on construction, which keeps
//! the cubic products of `h`-derived quantities in the variational integrands
//! alias-free.

use crate::error::{Error, Result};
use crate::numerics::fourier::{fourier_coefficients, fourier_synthesis};
use crate::numerics::{fourier_diff, periodic_quadrature, PeriodicGrid};
use alloc::vec::Vec;
use num_traits::Float;

/// Fraction of the outer radius below which a profile counts as degenerate.
const DEGENERACY_FRACTION: f64 = 1e-6;

/// Band-limited radial profile `h(θ_j)` with its outer radius.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    grid: PeriodicGrid,
    values: Vec<f64>,
    outer_radius: f64,
}

impl RadialProfile {
    /// Builds a profile from nodal samples.
    ///
    /// The samples are projected onto the modes `|n| ≤ n_theta/3` first; the
    /// band-limited values must then satisfy `1e-6·R0 < h < R0` at every node.
    pub fn from_values(grid: PeriodicGrid, values: &[f64], outer_radius: f64) -> Result<Self> {
        grid.check_len(values)?;
        if !(outer_radius > 0.0) || !outer_radius.is_finite() {
            return Err(Error::GeometryViolation(alloc::format!(
                "outer radius must be positive and finite, got {outer_radius}"
            )));
        }
        let mut coeffs = fourier_coefficients(grid, values)?;
        let cutoff = grid.band_limit();
        for m in (cutoff + 1)..coeffs.cos.len() {
            coeffs.cos[m] = 0.0;
            coeffs.sin[m] = 0.0;
        }
        let filtered = fourier_synthesis(grid, &coeffs);
        let min = filtered.iter().fold(f64::INFINITY, |a, &b| a.min(b));
        let max = filtered.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
        if min <= DEGENERACY_FRACTION * outer_radius {
            return Err(Error::GeometryViolation(alloc::format!(
                "profile minimum {min:.6e} is degenerate against outer radius {outer_radius}"
            )));
        }
        if max >= outer_radius {
            return Err(Error::GeometryViolation(alloc::format!(
                "profile maximum {max:.6e} reaches the outer radius {outer_radius}"
            )));
        }
        Ok(Self {
            grid,
            values: filtered,
            outer_radius,
        })
    }

    /// Constant profile `h ≡ r`.
    pub fn round(grid: PeriodicGrid, r: f64, outer_radius: f64) -> Result<Self> {
        Self::from_values(grid, &alloc::vec![r; grid.len()], outer_radius)
    }

    /// Profile from a mean value and a list of harmonics `(n, cos_amp, sin_amp)`.
    pub fn from_harmonics(
        grid: PeriodicGrid,
        outer_radius: f64,
        mean: f64,
        harmonics: &[(usize, f64, f64)],
    ) -> Result<Self> {
        let mut values = alloc::vec![mean; grid.len()];
        for &(n, ca, sa) in harmonics {
            for (j, v) in values.iter_mut().enumerate() {
                let ang = n as f64 * grid.node(j);
                *v += ca * Float::cos(ang) + sa * Float::sin(ang);
            }
        }
        Self::from_values(grid, &values, outer_radius)
    }

    pub fn grid(&self) -> PeriodicGrid {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn outer_radius(&self) -> f64 {
        self.outer_radius
    }

    /// Nodal first derivative `h′`.
    pub fn derivative(&self) -> Vec<f64> {
        fourier_diff(self.grid, &self.values, 1).expect("profile length matches its grid")
    }

    /// Nodal second derivative `h″`.
    pub fn second_derivative(&self) -> Vec<f64> {
        fourier_diff(self.grid, &self.values, 2).expect("profile length matches its grid")
    }

    /// `L²(dθ)` norm of the sample vector.
    pub fn l2_norm(&self) -> f64 {
        let sq: Vec<f64> = self.values.iter().map(|v| v * v).collect();
        Float::sqrt(periodic_quadrature(&sq).expect("non-empty"))
    }

    /// True when the profile is constant to round-off (a round cavity).
    pub fn is_round(&self, tol: f64) -> bool {
        let mean = periodic_quadrature(&self.values).expect("non-empty") / core::f64::consts::TAU;
        self.values.iter().all(|v| (v - mean).abs() <= tol * mean.abs().max(1.0))
    }

    /// Mean radius `(1/2π)∫h dθ`.
    pub fn mean_radius(&self) -> f64 {
        periodic_quadrature(&self.values).expect("non-empty") / core::f64::consts::TAU
    }
}

/// Pointwise boundary frame of `Γ_h`: outward normal, clockwise tangent,
/// curvature, polar line element and `⟨σ, ν⟩`.
#[derive(Debug, Clone)]
pub struct BoundaryFrame {
    /// Unit outward normal `ν(θ_j)` (pointing from the cavity into the solid).
    pub normal: Vec<[f64; 2]>,
    /// Unit tangent `τ(θ_j)`, clockwise oriented.
    pub tangent: Vec<[f64; 2]>,
    /// Curvature `k(θ_j)`, positive for convex cavities.
    pub curvature: Vec<f64>,
    /// `√(h² + h′²)` per node; `dH¹ = line_element · dθ`.
    pub line_element: Vec<f64>,
    /// `⟨σ, ν⟩ = h/√(h² + h′²)` per node.
    pub sigma_dot_nu: Vec<f64>,
}

impl BoundaryFrame {
    pub fn of(profile: &RadialProfile) -> Self {
        let grid = profile.grid();
        let h = profile.values();
        let hp = profile.derivative();
        let hpp = profile.second_derivative();
        let n = grid.len();
        let mut normal = Vec::with_capacity(n);
        let mut tangent = Vec::with_capacity(n);
        let mut curvature = Vec::with_capacity(n);
        let mut line_element = Vec::with_capacity(n);
        let mut sigma_dot_nu = Vec::with_capacity(n);
        for j in 0..n {
            let theta = grid.node(j);
            let (st, ct) = (Float::sin(theta), Float::cos(theta));
            let sigma = [ct, st];
            let sigma_perp = [st, -ct];
            let len = Float::sqrt(h[j] * h[j] + hp[j] * hp[j]);
            normal.push([
                (h[j] * sigma[0] + hp[j] * sigma_perp[0]) / len,
                (h[j] * sigma[1] + hp[j] * sigma_perp[1]) / len,
            ]);
            tangent.push([
                (h[j] * sigma_perp[0] - hp[j] * sigma[0]) / len,
                (h[j] * sigma_perp[1] - hp[j] * sigma[1]) / len,
            ]);
            curvature.push(
                (h[j] * h[j] + 2.0 * hp[j] * hp[j] - h[j] * hpp[j]) / (len * len * len),
            );
            line_element.push(len);
            sigma_dot_nu.push(h[j] / len);
        }
        Self {
            normal,
            tangent,
            curvature,
            line_element,
            sigma_dot_nu,
        }
    }
}

/// Curvature of `Γ_h` in polar coordinates,
/// `k = (h² + 2h′² − h h″)/(h² + h′²)^{3/2}`.
pub fn curvature(profile: &RadialProfile) -> Vec<f64> {
    BoundaryFrame::of(profile).curvature
}

/// Length of the cavity boundary, `∫₀^{2π} √(h² + h′²) dθ`.
pub fn perimeter(profile: &RadialProfile) -> f64 {
    let frame = BoundaryFrame::of(profile);
    periodic_quadrature(&frame.line_element).expect("non-empty")
}

/// Cavity area `½ ∫₀^{2π} h² dθ`.
pub fn cavity_area(profile: &RadialProfile) -> f64 {
    let sq: Vec<f64> = profile.values().iter().map(|v| v * v).collect();
    0.5 * periodic_quadrature(&sq).expect("non-empty")
}

/// The volume-preserving straight-line path between two profiles,
/// `g_t = (h + t(g−h)) · ‖h‖_{L²} / ‖h + t(g−h)‖_{L²}`.
///
/// Normalizing the `L²` norm keeps the cavity area constant exactly, since
/// the area is `½‖·‖²_{L²}`.
pub fn volume_path(h: &RadialProfile, g: &RadialProfile, t: f64) -> Result<RadialProfile> {
    if h.grid() != g.grid() || h.outer_radius() != g.outer_radius() {
        return Err(Error::Domain(
            "volume path endpoints must share grid and outer radius".into(),
        ));
    }
    let blend: Vec<f64> = h
        .values()
        .iter()
        .zip(g.values())
        .map(|(a, b)| a + t * (b - a))
        .collect();
    let sq: Vec<f64> = blend.iter().map(|v| v * v).collect();
    let norm = Float::sqrt(periodic_quadrature(&sq).expect("non-empty"));
    if norm <= 0.0 {
        return Err(Error::GeometryViolation("volume path collapsed to zero".into()));
    }
    let scale = h.l2_norm() / norm;
    let values: Vec<f64> = blend.iter().map(|v| v * scale).collect();
    RadialProfile::from_values(h.grid(), &values, h.outer_radius())
}

/// Normal component on `Γ_h` of the radial vector field generated by `ψ`:
/// `⟨ψ⃗, ν⟩(h(θ)σ(θ)) = ψ(θ) · h/√(h² + h′²)`.
pub fn normal_trace(profile: &RadialProfile, psi: &[f64]) -> Result<Vec<f64>> {
    profile.grid().check_len(psi)?;
    let frame = BoundaryFrame::of(profile);
    Ok(psi
        .iter()
        .zip(&frame.sigma_dot_nu)
        .map(|(p, s)| p * s)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{PI, TAU};

    fn grid(n: usize) -> PeriodicGrid {
        PeriodicGrid::new(n).unwrap()
    }

    #[test]
    fn circle_curvature_is_inverse_radius() {
        let p = RadialProfile::round(grid(32), 2.0, 4.0).unwrap();
        for k in curvature(&p) {
            assert!((k - 0.5).abs() <= 1e-12);
        }
        let p1 = RadialProfile::round(grid(32), 1.0, 4.0).unwrap();
        for k in curvature(&p1) {
            assert!((k - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn curvature_matches_finite_difference_oracle() {
        // independent oracle: curvature of the curve (h cos θ, h sin θ) by
        // dense central differences of the parametrization
        let n = 64;
        let g = grid(n);
        let p = RadialProfile::from_harmonics(g, 4.0, 1.0, &[(2, 0.1, 0.0)]).unwrap();
        let h = |t: f64| 1.0 + 0.1 * Float::cos(2.0 * t);
        let step = 1e-4;
        let point = |t: f64| {
            let r = h(t);
            [r * Float::cos(t), r * Float::sin(t)]
        };
        let ks = curvature(&p);
        for j in 0..n {
            let t = g.node(j);
            let pm = point(t - step);
            let p0 = point(t);
            let pp = point(t + step);
            let d1 = [(pp[0] - pm[0]) / (2.0 * step), (pp[1] - pm[1]) / (2.0 * step)];
            let d2 = [
                (pp[0] - 2.0 * p0[0] + pm[0]) / (step * step),
                (pp[1] - 2.0 * p0[1] + pm[1]) / (step * step),
            ];
            let speed = Float::sqrt(d1[0] * d1[0] + d1[1] * d1[1]);
            let cross = d1[0] * d2[1] - d1[1] * d2[0];
            let oracle = cross / (speed * speed * speed);
            assert!(
                (ks[j] - oracle).abs() <= 1e-6,
                "node {j}: {} vs oracle {}",
                ks[j],
                oracle
            );
        }
    }

    #[test]
    fn perimeter_of_circles() {
        let p = RadialProfile::round(grid(16), 1.0, 2.0).unwrap();
        assert!((perimeter(&p) - TAU).abs() <= 1e-12);
        let p = RadialProfile::round(grid(16), 0.5, 2.0).unwrap();
        assert!((perimeter(&p) - PI).abs() <= 1e-12);
    }

    #[test]
    fn perimeter_matches_dense_quadrature_oracle() {
        let n = 64;
        let p = RadialProfile::from_harmonics(grid(n), 4.0, 1.0, &[(3, 0.1, 0.0)]).unwrap();
        // oracle: dense trapezoid of √(h² + h′²) with analytic h′
        let m = 200_000;
        let mut acc = 0.0;
        for j in 0..m {
            let t = TAU * j as f64 / m as f64;
            let h = 1.0 + 0.1 * Float::cos(3.0 * t);
            let hp = -0.3 * Float::sin(3.0 * t);
            acc += Float::sqrt(h * h + hp * hp);
        }
        let oracle = acc * TAU / m as f64;
        assert!((perimeter(&p) - oracle).abs() <= 1e-9);
    }

    #[test]
    fn cavity_area_cases() {
        let p = RadialProfile::round(grid(16), 1.0, 2.0).unwrap();
        assert!((cavity_area(&p) - PI).abs() <= 1e-12);
        let p = RadialProfile::round(grid(16), 0.3, 2.0).unwrap();
        assert!((cavity_area(&p) - 0.09 * PI).abs() <= 1e-13);
        // ½∫(1+0.2cosθ)² dθ = π(1 + 0.02)
        let p = RadialProfile::from_harmonics(grid(32), 4.0, 1.0, &[(1, 0.2, 0.0)]).unwrap();
        assert!((cavity_area(&p) - PI * 1.02).abs() <= 1e-12);
    }

    #[test]
    fn volume_path_endpoints_and_constants() {
        let g = grid(32);
        let h = RadialProfile::from_harmonics(g, 4.0, 1.0, &[(2, 0.05, 0.0)]).unwrap();
        // identity path
        let same = volume_path(&h, &h, 0.7).unwrap();
        for (a, b) in same.values().iter().zip(h.values()) {
            assert!((a - b).abs() <= 1e-14);
        }
        // t = 0 returns h
        let other = RadialProfile::from_harmonics(g, 4.0, 1.1, &[(3, 0.02, 0.01)]).unwrap();
        let at0 = volume_path(&h, &other, 0.0).unwrap();
        for (a, b) in at0.values().iter().zip(h.values()) {
            assert!((a - b).abs() <= 1e-14);
        }
        // constant endpoints collapse to the constant with h's norm
        let c1 = RadialProfile::round(g, 1.0, 4.0).unwrap();
        let c2 = RadialProfile::round(g, 1.1, 4.0).unwrap();
        let end = volume_path(&c1, &c2, 1.0).unwrap();
        for v in end.values() {
            assert!((v - 1.0).abs() <= 1e-13);
        }
    }

    #[test]
    fn volume_path_area_is_constant() {
        let g = grid(48);
        let h = RadialProfile::from_harmonics(g, 4.0, 1.0, &[(2, 0.08, -0.03)]).unwrap();
        let target = RadialProfile::from_harmonics(g, 4.0, 0.97, &[(4, 0.0, 0.06)]).unwrap();
        let a0 = cavity_area(&h);
        for &t in &[0.0, 0.25, 0.5, 0.75, 1.0] {
            let gt = volume_path(&h, &target, t).unwrap();
            assert!((cavity_area(&gt) - a0).abs() <= 1e-12 * a0);
        }
    }

    #[test]
    fn normal_trace_reduces_to_psi_on_circles() {
        let g = grid(32);
        let p = RadialProfile::round(g, 0.8, 2.0).unwrap();
        let psi: Vec<f64> = (0..32).map(|j| Float::cos(g.node(j))).collect();
        let tr = normal_trace(&p, &psi).unwrap();
        for (a, b) in tr.iter().zip(&psi) {
            assert!((a - b).abs() <= 1e-14);
        }
        let zero = normal_trace(&p, &alloc::vec![0.0; 32]).unwrap();
        assert!(zero.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn normal_trace_pointwise_formula() {
        let n = 64;
        let g = grid(n);
        let p = RadialProfile::from_harmonics(g, 4.0, 1.0, &[(2, 0.1, 0.0)]).unwrap();
        let psi: Vec<f64> = (0..n).map(|j| Float::cos(g.node(j))).collect();
        let tr = normal_trace(&p, &psi).unwrap();
        let hp = p.derivative();
        for j in 0..n {
            let h = p.values()[j];
            let want = psi[j] * h / Float::sqrt(h * h + hp[j] * hp[j]);
            assert!((tr[j] - want).abs() <= 1e-13);
        }
    }

    #[test]
    fn frame_vectors_are_orthonormal() {
        let p = RadialProfile::from_harmonics(grid(64), 4.0, 1.2, &[(3, 0.15, 0.05)]).unwrap();
        let f = BoundaryFrame::of(&p);
        for j in 0..64 {
            let nv = f.normal[j];
            let tv = f.tangent[j];
            assert!((nv[0] * nv[0] + nv[1] * nv[1] - 1.0).abs() <= 1e-12);
            assert!((tv[0] * tv[0] + tv[1] * tv[1] - 1.0).abs() <= 1e-12);
            assert!((nv[0] * tv[0] + nv[1] * tv[1]).abs() <= 1e-12);
        }
    }

    #[test]
    fn rotation_equivariance() {
        let n = 48;
        let g = grid(n);
        let base = RadialProfile::from_harmonics(g, 4.0, 1.0, &[(2, 0.1, 0.0), (3, 0.0, 0.04)]).unwrap();
        let shift = 5usize;
        let shifted_vals: Vec<f64> = (0..n).map(|j| base.values()[(j + n - shift) % n]).collect();
        let shifted = RadialProfile::from_values(g, &shifted_vals, 4.0).unwrap();
        assert!((perimeter(&base) - perimeter(&shifted)).abs() <= 1e-12);
        assert!((cavity_area(&base) - cavity_area(&shifted)).abs() <= 1e-12);
        let kb = curvature(&base);
        let ks = curvature(&shifted);
        for j in 0..n {
            assert!((ks[j] - kb[(j + n - shift) % n]).abs() <= 1e-11);
        }
    }

    #[test]
    fn total_turning_is_two_pi() {
        for p in [
            RadialProfile::round(grid(64), 1.0, 4.0).unwrap(),
            RadialProfile::from_harmonics(grid(64), 4.0, 1.0, &[(2, 0.1, 0.0)]).unwrap(),
            RadialProfile::from_harmonics(grid(64), 4.0, 1.5, &[(3, 0.1, -0.08)]).unwrap(),
        ] {
            let f = BoundaryFrame::of(&p);
            let integrand: Vec<f64> = f
                .curvature
                .iter()
                .zip(&f.line_element)
                .map(|(k, l)| k * l)
                .collect();
            let total = periodic_quadrature(&integrand).unwrap();
            assert!((total - TAU).abs() <= 1e-8, "total turning {total}");
        }
    }

    #[test]
    fn degenerate_profiles_are_rejected() {
        let g = grid(16);
        assert!(matches!(
            RadialProfile::round(g, 1e-7, 1.0),
            Err(Error::GeometryViolation(_))
        ));
        assert!(matches!(
            RadialProfile::round(g, 1.0, 1.0),
            Err(Error::GeometryViolation(_))
        ));
        // path leaving the band is rejected too
        let h = RadialProfile::round(g, 0.5, 1.0).unwrap();
        let gtarget = RadialProfile::round(g, 0.99, 1.0).unwrap();
        // blending toward a constant close to R0 stays valid (norms renormalize),
        // but a profile pushed above R0 fails construction
        let too_big: Vec<f64> = alloc::vec![1.2; 16];
        assert!(RadialProfile::from_values(g, &too_big, 1.0).is_err());
        let _ = volume_path(&h, &gtarget, 0.5).unwrap();
    }

    #[test]
    fn volume_path_rejects_escaping_normalization() {
        // both endpoints valid, but the L2 normalization pushes the blend
        // beyond the outer radius near t = 1
        let g = grid(32);
        let h = RadialProfile::round(g, 0.97, 1.0).unwrap();
        let target = RadialProfile::from_harmonics(g, 1.0, 0.4, &[(2, 0.3, 0.0)]).unwrap();
        assert!(matches!(
            volume_path(&h, &target, 1.0),
            Err(Error::GeometryViolation(_))
        ));
        // small t stays admissible
        assert!(volume_path(&h, &target, 0.05).is_ok());
    }

    #[test]
    fn band_limit_is_enforced() {
        let n = 32;
        let g = grid(n);
        // inject a mode above N/3; construction must filter it out
        let vals: Vec<f64> = (0..n)
            .map(|j| 1.0 + 0.01 * Float::cos(14.0 * g.node(j)))
            .collect();
        let p = RadialProfile::from_values(g, &vals, 2.0).unwrap();
        let coeffs = fourier_coefficients(g, p.values()).unwrap();
        assert!(coeffs.cos[14].abs() <= 1e-14);
        // a kept mode survives untouched
        let vals2: Vec<f64> = (0..n)
            .map(|j| 1.0 + 0.01 * Float::cos(5.0 * g.node(j)))
            .collect();
        let p2 = RadialProfile::from_values(g, &vals2, 2.0).unwrap();
        let c2 = fourier_coefficients(g, p2.values()).unwrap();
        assert!((c2.cos[5] - 0.01).abs() <= 1e-14);
    }
}
