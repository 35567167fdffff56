//! Elasticity solver against the round-cavity closed forms: convergence,
//! energy consistency via the divergence theorem, and equivariances.

use voidstab_core::disk::disk_config;
use voidstab_core::elasticity::{
    boundary_traces, elastic_energy, outer_traction, solve_equilibrium, strain_norm_sq,
    BoundaryData, LameParams, SolverOptions,
};
use voidstab_core::geometry::RadialProfile;
use voidstab_core::numerics::PeriodicGrid;

fn max_nodal_error_against_disk(nt: usize, ns: usize) -> f64 {
    let g = PeriodicGrid::new(nt).unwrap();
    let h = RadialProfile::round(g, 0.5, 1.0).unwrap();
    let p = LameParams::new(1.0, 0.0).unwrap();
    let bc = BoundaryData::radial_stretch(1.0, 1.0).unwrap();
    let u = solve_equilibrium(&h, &bc, &p, &SolverOptions::with_n_rho(ns)).unwrap();
    let cfg = disk_config(0.5, 1.0, 1.0, &p).unwrap();
    let mut worst = 0.0f64;
    for j in 0..nt {
        let theta = g.node(j);
        for (k, s) in u.s_nodes().iter().enumerate() {
            let rho = 0.5 + s * 0.5;
            let f = cfg.radial_displacement(rho);
            let want = [f * theta.cos(), f * theta.sin()];
            let got = u.at(j, k);
            worst = worst
                .max((got[0] - want[0]).abs())
                .max((got[1] - want[1]).abs());
        }
    }
    worst
}

#[test]
fn spectral_convergence_in_radial_resolution() {
    let e8 = max_nodal_error_against_disk(16, 8);
    let e16 = max_nodal_error_against_disk(16, 16);
    let e32 = max_nodal_error_against_disk(16, 32);
    assert!(e16 <= e8 * 0.25, "8→16 did not contract: {e8} → {e16}");
    // e32 is at the solver-tolerance floor; require it to stay below the
    // geometric envelope of the previous contraction
    assert!(e32 <= e16.max(1e-10), "16→32 grew: {e16} → {e32}");
    assert!(e32 <= 1e-9, "converged error {e32}");
}

#[test]
fn energy_consistency_with_boundary_work() {
    // ∫Q dz = ½∮ (ℂE(u)[ν_out])·u₀ dH¹ with a traction-free cavity
    let g = PeriodicGrid::new(48).unwrap();
    let h = RadialProfile::from_harmonics(g, 1.0, 0.55, &[(2, 0.04, 0.0), (3, 0.0, 0.03)]).unwrap();
    let p = LameParams::new(1.0, 0.4).unwrap();
    let alpha = 0.8;
    let bc = BoundaryData::radial_stretch(alpha, 1.0).unwrap();
    let u = solve_equilibrium(&h, &bc, &p, &SolverOptions::with_n_rho(28)).unwrap();
    let bulk = elastic_energy(&u, &p);
    let traction = outer_traction(&u, &p);
    let wtheta = core::f64::consts::TAU / 48.0;
    let mut work = 0.0;
    for (j, t) in traction.iter().enumerate() {
        let theta = g.node(j);
        let u0 = [alpha * theta.cos(), alpha * theta.sin()];
        // dH¹ = R0 dθ on the outer circle (R0 = 1)
        work += wtheta * (t[0] * u0[0] + t[1] * u0[1]);
    }
    let boundary = 0.5 * work;
    assert!(
        ((bulk - boundary) / bulk).abs() <= 1e-6,
        "bulk {bulk} vs boundary work {boundary}"
    );
}

#[test]
fn rotational_equivariance_of_energy() {
    let nt = 48;
    let g = PeriodicGrid::new(nt).unwrap();
    let base = RadialProfile::from_harmonics(g, 1.0, 0.6, &[(2, 0.05, 0.0)]).unwrap();
    let shift = 7usize;
    let shifted_vals: Vec<f64> = (0..nt)
        .map(|j| base.values()[(j + nt - shift) % nt])
        .collect();
    let shifted = RadialProfile::from_values(g, &shifted_vals, 1.0).unwrap();
    let p = LameParams::new(1.0, 0.0).unwrap();
    let bc = BoundaryData::radial_stretch(1.0, 1.0).unwrap();
    let opts = SolverOptions::with_n_rho(24);
    let e1 = elastic_energy(&solve_equilibrium(&base, &bc, &p, &opts).unwrap(), &p);
    let e2 = elastic_energy(&solve_equilibrium(&shifted, &bc, &p, &opts).unwrap(), &p);
    assert!(
        ((e1 - e2) / e1).abs() <= 1e-10,
        "rotated energy differs: {e1} vs {e2}"
    );
}

#[test]
fn traction_residual_scaled_bound() {
    let g = PeriodicGrid::new(48).unwrap();
    let p = LameParams::new(2.0, 1.0).unwrap();
    for (h, alpha) in [
        (RadialProfile::round(g, 0.5, 1.0).unwrap(), 1.0),
        (
            RadialProfile::from_harmonics(g, 1.0, 0.6, &[(3, 0.05, 0.0)]).unwrap(),
            -0.7,
        ),
    ] {
        let bc = BoundaryData::radial_stretch(alpha, 1.0).unwrap();
        let u = solve_equilibrium(&h, &bc, &p, &SolverOptions::with_n_rho(24)).unwrap();
        let rep = boundary_traces(&u, &h, &p);
        let scale = p.mu * alpha.abs() + 1.0;
        assert!(
            rep.traction_residual <= 1e-7 * scale,
            "traction residual {} at scale {scale}",
            rep.traction_residual
        );
    }
}

#[test]
fn coercivity_against_strain_norm() {
    let g = PeriodicGrid::new(32).unwrap();
    let h = RadialProfile::from_harmonics(g, 1.0, 0.5, &[(2, 0.03, 0.02)]).unwrap();
    for lambda in [-0.5, 0.0, 1.5] {
        let p = LameParams::new(1.0, lambda).unwrap();
        let bc = BoundaryData::radial_stretch(1.0, 1.0).unwrap();
        let u = solve_equilibrium(&h, &bc, &p, &SolverOptions::with_n_rho(20)).unwrap();
        let bulk = elastic_energy(&u, &p);
        let strain = strain_norm_sq(&u);
        assert!(
            bulk >= p.eta * strain - 1e-10 * bulk.abs().max(1.0),
            "coercivity violated at λ = {lambda}: {bulk} < {} · {strain}",
            p.eta
        );
    }
}

#[test]
fn disk_oracle_full_resolution() {
    // the reference configuration at the production resolution
    let worst = max_nodal_error_against_disk(64, 48);
    assert!(worst <= 1e-8, "nodal error {worst}");
}
