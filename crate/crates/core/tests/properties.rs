//! Property-based invariants of the spectral primitives and geometry.

use proptest::prelude::*;
use voidstab_core::geometry::{cavity_area, perimeter, volume_path, RadialProfile};
use voidstab_core::numerics::{
    fourier_diff, periodic_quadrature, sym_eig_min, PeriodicGrid, SymmetricMatrix,
};
use voidstab_core::variation::Perturbation;

fn band_limited_samples(n: usize, coeffs: &[(usize, f64, f64)]) -> Vec<f64> {
    let g = PeriodicGrid::new(n).unwrap();
    (0..n)
        .map(|j| {
            let t = g.node(j);
            coeffs
                .iter()
                .map(|(m, a, b)| a * (*m as f64 * t).cos() + b * (*m as f64 * t).sin())
                .sum()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn double_first_derivative_equals_second(
        a1 in -1.0f64..1.0, b1 in -1.0f64..1.0,
        a2 in -1.0f64..1.0, b2 in -1.0f64..1.0,
        m in 1usize..10,
    ) {
        let n = 64;
        let g = PeriodicGrid::new(n).unwrap();
        let x = band_limited_samples(n, &[(1, a1, b1), (m, a2, b2)]);
        let d1 = fourier_diff(g, &x, 1).unwrap();
        let d11 = fourier_diff(g, &d1, 1).unwrap();
        let d2 = fourier_diff(g, &x, 2).unwrap();
        let worst = d11.iter().zip(&d2).fold(0.0f64, |w, (p, q)| w.max((p - q).abs()));
        prop_assert!(worst <= 1e-10);
    }

    #[test]
    fn derivative_has_zero_mean(
        a in -2.0f64..2.0, b in -2.0f64..2.0, m in 1usize..12,
    ) {
        let n = 48;
        let g = PeriodicGrid::new(n).unwrap();
        // smooth but not band-limited: exp of a low harmonic
        let x: Vec<f64> = (0..n)
            .map(|j| (a * (m as f64 * g.node(j)).cos() + b * (g.node(j)).sin()).exp())
            .collect();
        let d1 = fourier_diff(g, &x, 1).unwrap();
        prop_assert!(periodic_quadrature(&d1).unwrap().abs() <= 1e-12 * x.iter().fold(1.0f64, |w, v| w.max(v.abs())));
    }

    #[test]
    fn rayleigh_quotient_dominates_min_eigenvalue(
        seed in 0u64..1000,
    ) {
        let n = 7;
        let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
        let mut rnd = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let mut raw = vec![0.0; n * n];
        for v in raw.iter_mut() { *v = rnd(); }
        let m = SymmetricMatrix::from_raw(n, raw).unwrap();
        let (lam, _) = sym_eig_min(&m, None).unwrap();
        for _ in 0..100 {
            let x: Vec<f64> = (0..n).map(|_| rnd()).collect();
            let norm_sq: f64 = x.iter().map(|v| v * v).sum();
            if norm_sq < 1e-12 { continue; }
            let mx = m.mul_vec(&x);
            let quotient = x.iter().zip(&mx).map(|(a, b)| a * b).sum::<f64>() / norm_sq;
            prop_assert!(lam <= quotient + 1e-10);
        }
    }

    #[test]
    fn volume_path_preserves_area(
        amp in 0.0f64..0.08, t in 0.0f64..1.0, m in 2usize..6,
    ) {
        let n = 48;
        let g = PeriodicGrid::new(n).unwrap();
        let h = RadialProfile::from_harmonics(g, 2.0, 1.0, &[(2, 0.05, 0.0)]).unwrap();
        let target = RadialProfile::from_harmonics(g, 2.0, 1.0, &[(m, amp, 0.0)]).unwrap();
        let gt = volume_path(&h, &target, t).unwrap();
        let a0 = cavity_area(&h);
        prop_assert!((cavity_area(&gt) - a0).abs() <= 1e-12 * a0);
    }

    #[test]
    fn perimeter_dominates_min_circumference(
        amp in 0.0f64..0.1, m in 1usize..6,
    ) {
        let n = 48;
        let g = PeriodicGrid::new(n).unwrap();
        let h = RadialProfile::from_harmonics(g, 2.0, 1.0, &[(m, amp, 0.0)]).unwrap();
        let min_h = h.values().iter().fold(f64::INFINITY, |a, &b| a.min(b));
        prop_assert!(perimeter(&h) >= core::f64::consts::TAU * min_h - 1e-12);
    }

    #[test]
    fn projection_is_idempotent_and_selfadjoint(
        a in -1.0f64..1.0, b in -1.0f64..1.0, m in 1usize..8,
    ) {
        let n = 48;
        let g = PeriodicGrid::new(n).unwrap();
        let h = RadialProfile::from_harmonics(g, 2.0, 1.0, &[(2, 0.1, 0.0)]).unwrap();
        let raw = band_limited_samples(n, &[(0, a, 0.0), (m, b, a)]);
        let once = Perturbation::projected(&h, &raw).unwrap();
        let twice = Perturbation::projected(&h, once.values()).unwrap();
        let worst = once
            .values()
            .iter()
            .zip(twice.values())
            .fold(0.0f64, |w, (p, q)| w.max((p - q).abs()));
        prop_assert!(worst <= 1e-14);
        // self-adjointness in L²(dθ): ⟨Pφ, χ⟩ = ⟨φ, Pχ⟩
        let phi = band_limited_samples(n, &[(1, b, -a)]);
        let chi = band_limited_samples(n, &[(3, a, b)]);
        let p_phi = Perturbation::projected(&h, &phi).unwrap();
        let p_chi = Perturbation::projected(&h, &chi).unwrap();
        let lhs: Vec<f64> = p_phi.values().iter().zip(&chi).map(|(x, y)| x * y).collect();
        let rhs: Vec<f64> = phi.iter().zip(p_chi.values()).map(|(x, y)| x * y).collect();
        let gap = (periodic_quadrature(&lhs).unwrap() - periodic_quadrature(&rhs).unwrap()).abs();
        prop_assert!(gap <= 1e-12);
    }
}
