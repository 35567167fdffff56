//! Hand-rolled real trigonometric transform, spectral differentiation and
//! periodic quadrature on equispaced grids.

use super::PeriodicGrid;
use crate::error::{Error, Result};
use alloc::string::ToString;
use alloc::vec::Vec;
use num_traits::Float;

/// Real Fourier coefficients of a sample vector.
///
/// The represented interpolant is
/// `x(θ) = a[0] + Σ_{n=1}^{N/2-1} (a[n] cos nθ + b[n] sin nθ) + a[N/2] cos(N/2 θ)`,
/// with `b[0]` and `b[N/2]` stored as zero.
#[derive(Debug, Clone)]
pub struct FourierCoefficients {
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
}

/// Table of `cos(2πq/N)`, `sin(2πq/N)` with the half-period symmetries applied
/// as exact sign flips, so that full-period sums of pure harmonics cancel to
/// zero exactly in floating point.
pub(crate) struct TrigTable {
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
}

impl TrigTable {
    pub fn new(n: usize) -> Self {
        debug_assert!(n % 2 == 0);
        let mut cos = alloc::vec![0.0; n];
        let mut sin = alloc::vec![0.0; n];
        let quarter = n / 4;
        for q in 0..=quarter {
            let ang = core::f64::consts::TAU * q as f64 / n as f64;
            cos[q] = Float::cos(ang);
            sin[q] = Float::sin(ang);
        }
        for q in (quarter + 1)..=(n / 2) {
            cos[q] = -cos[n / 2 - q];
            sin[q] = sin[n / 2 - q];
        }
        for q in (n / 2 + 1)..n {
            cos[q] = -cos[q - n / 2];
            sin[q] = -sin[q - n / 2];
        }
        Self { cos, sin }
    }
}

/// Direct O(N²) analysis of the sample vector into trigonometric coefficients.
pub fn fourier_coefficients(grid: PeriodicGrid, samples: &[f64]) -> Result<FourierCoefficients> {
    grid.check_len(samples)?;
    let n = grid.len();
    let half = n / 2;
    let table = TrigTable::new(n);
    let mut cos = alloc::vec![0.0; half + 1];
    let mut sin = alloc::vec![0.0; half + 1];
    for m in 0..=half {
        let mut ca = 0.0;
        let mut sa = 0.0;
        for (j, &x) in samples.iter().enumerate() {
            let q = (m * j) % n;
            ca += x * table.cos[q];
            sa += x * table.sin[q];
        }
        let scale = if m == 0 || m == half { 1.0 } else { 2.0 };
        cos[m] = scale * ca / n as f64;
        sin[m] = scale * sa / n as f64;
    }
    sin[0] = 0.0;
    sin[half] = 0.0;
    Ok(FourierCoefficients { cos, sin })
}

/// Evaluates trigonometric coefficients back on the grid nodes.
pub fn fourier_synthesis(grid: PeriodicGrid, coeffs: &FourierCoefficients) -> Vec<f64> {
    let n = grid.len();
    let half = n / 2;
    let table = TrigTable::new(n);
    let mut out = alloc::vec![0.0; n];
    for (j, o) in out.iter_mut().enumerate() {
        let mut acc = coeffs.cos[0];
        for m in 1..=half {
            let q = (m * j) % n;
            acc += coeffs.cos[m] * table.cos[q] + coeffs.sin[m] * table.sin[q];
        }
        *o = acc;
    }
    out
}

/// Spectral derivative of order 1 or 2 of a periodic sample vector.
///
/// Exact for trigonometric polynomials below the Nyquist mode. The Nyquist
/// cosine is annihilated by the first derivative (its sine samples vanish on
/// the grid) and kept with factor `-(N/2)²` by the second, matching the dense
/// differentiation-matrix convention.
pub fn fourier_diff(grid: PeriodicGrid, samples: &[f64], order: u32) -> Result<Vec<f64>> {
    if order != 1 && order != 2 {
        return Err(Error::Domain(alloc::format!(
            "derivative order must be 1 or 2, got {order}"
        )));
    }
    let c = fourier_coefficients(grid, samples)?;
    let n = grid.len();
    let half = n / 2;
    let table = TrigTable::new(n);
    let mut out = alloc::vec![0.0; n];
    for (j, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for m in 1..=half {
            let fm = m as f64;
            let q = (m * j) % n;
            let (cm, sm) = (table.cos[q], table.sin[q]);
            acc += match order {
                1 => fm * (-c.cos[m] * sm + c.sin[m] * cm),
                _ => -fm * fm * (c.cos[m] * cm + c.sin[m] * sm),
            };
        }
        *o = acc;
    }
    Ok(out)
}

/// Trapezoid-rule value of `∫₀^{2π} x(θ) dθ`; spectrally accurate for smooth
/// periodic integrands.
pub fn periodic_quadrature(samples: &[f64]) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::InvalidGrid("empty sample vector".to_string()));
    }
    let sum: f64 = samples.iter().sum();
    Ok(sum * core::f64::consts::TAU / samples.len() as f64)
}

/// Dense periodic spectral differentiation matrix (order `n × n`).
///
/// Row `j` holds the weights producing the interpolant derivative at `θ_j`;
/// consistent with [`fourier_diff`] of order 1.
pub fn theta_diff_matrix(n: usize) -> Vec<f64> {
    let mut d = alloc::vec![0.0; n * n];
    for j in 0..n {
        for l in 0..n {
            if j == l {
                continue;
            }
            let diff = (j as isize - l as isize) as f64;
            let arg = core::f64::consts::PI * diff / n as f64;
            let sign = if (j + l) % 2 == 0 { 1.0 } else { -1.0 };
            d[j * n + l] = 0.5 * sign * Float::cos(arg) / Float::sin(arg);
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn grid(n: usize) -> PeriodicGrid {
        PeriodicGrid::new(n).unwrap()
    }

    fn sample(n: usize, f: impl Fn(f64) -> f64) -> Vec<f64> {
        let g = grid(n);
        (0..n).map(|j| f(g.node(j))).collect()
    }

    fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
        a.iter()
            .zip(b)
            .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
    }

    #[test]
    fn derivative_of_sine_is_cosine() {
        let n = 32;
        let x = sample(n, Float::sin);
        let want = sample(n, Float::cos);
        let got = fourier_diff(grid(n), &x, 1).unwrap();
        assert!(max_abs_diff(&got, &want) <= 1e-12);
    }

    #[test]
    fn second_derivative_of_constant_is_zero() {
        let n = 16;
        let x = alloc::vec![3.0; n];
        let got = fourier_diff(grid(n), &x, 2).unwrap();
        assert!(got.iter().all(|v| v.abs() <= 1e-13));
    }

    #[test]
    fn second_derivative_of_low_harmonic() {
        let n = 64;
        let x = sample(n, |t| 1.0 + 0.1 * Float::cos(2.0 * t));
        let want = sample(n, |t| -0.4 * Float::cos(2.0 * t));
        let got = fourier_diff(grid(n), &x, 2).unwrap();
        assert!(max_abs_diff(&got, &want) <= 1e-12);
    }

    #[test]
    fn rejects_odd_or_short_vectors() {
        assert!(matches!(PeriodicGrid::new(7), Err(crate::Error::InvalidGrid(_))));
        assert!(matches!(PeriodicGrid::new(6), Err(crate::Error::InvalidGrid(_))));
        let g = grid(16);
        assert!(fourier_diff(g, &[1.0; 15], 1).is_err());
    }

    #[test]
    fn quadrature_of_cos_squared() {
        let n = 32;
        let x = sample(n, |t| Float::cos(t) * Float::cos(t));
        let got = periodic_quadrature(&x).unwrap();
        assert!((got - core::f64::consts::PI).abs() <= 1e-12);
    }

    #[test]
    fn quadrature_of_constant_and_harmonic() {
        let n = 16;
        assert!((periodic_quadrature(&alloc::vec![1.0; n]).unwrap() - core::f64::consts::TAU).abs() <= 1e-13);
        let x = sample(n, |t| Float::cos(3.0 * t));
        assert!(periodic_quadrature(&x).unwrap().abs() <= 1e-12);
        assert!(periodic_quadrature(&[]).is_err());
    }

    #[test]
    fn diff_matrix_matches_spectral_derivative() {
        let n = 24;
        let x = sample(n, |t| Float::sin(3.0 * t) + 0.5 * Float::cos(5.0 * t));
        let d = theta_diff_matrix(n);
        let mut via_matrix = alloc::vec![0.0; n];
        for j in 0..n {
            via_matrix[j] = (0..n).map(|l| d[j * n + l] * x[l]).sum();
        }
        let via_dft = fourier_diff(grid(n), &x, 1).unwrap();
        assert!(max_abs_diff(&via_matrix, &via_dft) <= 1e-11);
    }

    #[test]
    fn double_first_derivative_matches_second() {
        let n = 48;
        // band-limited input: well below the Nyquist mode
        let x = sample(n, |t| Float::cos(4.0 * t) - 2.0 * Float::sin(7.0 * t));
        let d1 = fourier_diff(grid(n), &x, 1).unwrap();
        let d11 = fourier_diff(grid(n), &d1, 1).unwrap();
        let d2 = fourier_diff(grid(n), &x, 2).unwrap();
        assert!(max_abs_diff(&d11, &d2) <= 1e-10);
    }

    #[test]
    fn derivatives_have_zero_mean() {
        let n = 32;
        let x = sample(n, |t| Float::exp(Float::cos(t)));
        let d1 = fourier_diff(grid(n), &x, 1).unwrap();
        assert!(periodic_quadrature(&d1).unwrap().abs() <= 1e-12);
    }
}
