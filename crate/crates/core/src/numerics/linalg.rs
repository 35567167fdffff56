//! Dense direct solvers and the symmetric eigensolver.
//!
//! Real and complex partial-pivot LU for the small systems that appear as
//! per-mode blocks, Cholesky for Gram matrices, and a cyclic Jacobi
//! eigensolver for the constrained spectrum (matrix orders stay ≲ 130).

use super::SymmetricMatrix;
use crate::error::{Error, Result};
use alloc::string::ToString;
use alloc::vec::Vec;
use num_complex::Complex64;
use num_traits::Float;

/// Partial-pivot LU factorization of a dense real matrix.
pub struct Lu {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
    /// Ratio of largest to smallest pivot magnitude; a cheap condition proxy.
    pub pivot_ratio: f64,
}

impl Lu {
    pub fn factor(n: usize, mut a: Vec<f64>) -> Result<Self> {
        assert_eq!(a.len(), n * n);
        let mut perm: Vec<usize> = (0..n).collect();
        let mut max_piv = 0.0f64;
        let mut min_piv = f64::INFINITY;
        for col in 0..n {
            let mut best = col;
            let mut best_val = Float::abs(a[col * n + col]);
            for row in (col + 1)..n {
                let v = Float::abs(a[row * n + col]);
                if v > best_val {
                    best = row;
                    best_val = v;
                }
            }
            if best_val == 0.0 {
                return Err(Error::SolverFailure {
                    message: alloc::format!("singular matrix at pivot column {col}"),
                    condition: f64::INFINITY,
                });
            }
            if best != col {
                perm.swap(col, best);
                for j in 0..n {
                    a.swap(col * n + j, best * n + j);
                }
            }
            max_piv = max_piv.max(best_val);
            min_piv = min_piv.min(best_val);
            let piv = a[col * n + col];
            for row in (col + 1)..n {
                let factor = a[row * n + col] / piv;
                a[row * n + col] = factor;
                if factor != 0.0 {
                    let (upper, lower) = a.split_at_mut(row * n);
                    let src = &upper[col * n + col + 1..col * n + n];
                    let dst = &mut lower[col + 1..n];
                    for (d, s) in dst.iter_mut().zip(src) {
                        *d -= factor * s;
                    }
                }
            }
        }
        Ok(Self {
            n,
            lu: a,
            perm,
            pivot_ratio: max_piv / min_piv,
        })
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 1..n {
            let mut acc = x[i];
            for j in 0..i {
                acc -= self.lu[i * n + j] * x[j];
            }
            x[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = x[i];
            for j in (i + 1)..n {
                acc -= self.lu[i * n + j] * x[j];
            }
            x[i] = acc / self.lu[i * n + i];
        }
        x
    }
}

/// Partial-pivot LU factorization of a dense complex matrix.
pub struct ComplexLu {
    n: usize,
    lu: Vec<Complex64>,
    perm: Vec<usize>,
    pub pivot_ratio: f64,
}

impl ComplexLu {
    pub fn factor(n: usize, mut a: Vec<Complex64>) -> Result<Self> {
        assert_eq!(a.len(), n * n);
        let mut perm: Vec<usize> = (0..n).collect();
        let mut max_piv = 0.0f64;
        let mut min_piv = f64::INFINITY;
        for col in 0..n {
            let mut best = col;
            let mut best_val = a[col * n + col].norm_sqr();
            for row in (col + 1)..n {
                let v = a[row * n + col].norm_sqr();
                if v > best_val {
                    best = row;
                    best_val = v;
                }
            }
            if best_val == 0.0 {
                return Err(Error::SolverFailure {
                    message: alloc::format!("singular complex matrix at pivot column {col}"),
                    condition: f64::INFINITY,
                });
            }
            if best != col {
                perm.swap(col, best);
                for j in 0..n {
                    a.swap(col * n + j, best * n + j);
                }
            }
            let mag = Float::sqrt(best_val);
            max_piv = max_piv.max(mag);
            min_piv = min_piv.min(mag);
            let piv = a[col * n + col];
            for row in (col + 1)..n {
                let factor = a[row * n + col] / piv;
                a[row * n + col] = factor;
                if factor != Complex64::ZERO {
                    let (upper, lower) = a.split_at_mut(row * n);
                    let src = &upper[col * n + col + 1..col * n + n];
                    let dst = &mut lower[col + 1..n];
                    for (d, s) in dst.iter_mut().zip(src) {
                        *d -= factor * s;
                    }
                }
            }
        }
        Ok(Self {
            n,
            lu: a,
            perm,
            pivot_ratio: max_piv / min_piv,
        })
    }

    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 1..n {
            let mut acc = x[i];
            for j in 0..i {
                acc -= self.lu[i * n + j] * x[j];
            }
            x[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = x[i];
            for j in (i + 1)..n {
                acc -= self.lu[i * n + j] * x[j];
            }
            x[i] = acc / self.lu[i * n + i];
        }
        x
    }
}

/// Lower Cholesky factor of a symmetric positive definite matrix.
///
/// Fails with an indefinite-gram error when a pivot drops below
/// `1e-14 · max diag`.
pub fn cholesky(m: &SymmetricMatrix) -> Result<Vec<f64>> {
    let n = m.order();
    let scale = (0..n).fold(0.0f64, |a, i| a.max(Float::abs(m.get(i, i))));
    let floor = 1e-14 * scale.max(f64::MIN_POSITIVE);
    let mut l = alloc::vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut acc = m.get(i, j);
            for k in 0..j {
                acc -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if acc <= floor {
                    return Err(Error::IndefiniteGram(alloc::format!(
                        "pivot {acc:.3e} at index {i} (scale {scale:.3e})"
                    )));
                }
                l[i * n + i] = Float::sqrt(acc);
            } else {
                l[i * n + j] = acc / l[j * n + j];
            }
        }
    }
    Ok(l)
}

fn forward_sub(l: &[f64], n: usize, b: &[f64]) -> Vec<f64> {
    let mut x = b.to_vec();
    for i in 0..n {
        for j in 0..i {
            let lij = l[i * n + j];
            x[i] -= lij * x[j];
        }
        x[i] /= l[i * n + i];
    }
    x
}

fn backward_sub_t(l: &[f64], n: usize, b: &[f64]) -> Vec<f64> {
    // solves Lᵀ x = b
    let mut x = b.to_vec();
    for i in (0..n).rev() {
        for j in (i + 1)..n {
            x[i] -= l[j * n + i] * x[j];
        }
        x[i] /= l[i * n + i];
    }
    x
}

/// Full eigen-decomposition of a symmetric matrix.
pub struct SymEigen {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Eigenvectors, column `k` (row-major, order × order) pairs with `values[k]`.
    pub vectors: Vec<f64>,
}

/// Cyclic Jacobi eigensolver; adequate for the dense orders used here.
pub fn sym_eigen(m: &SymmetricMatrix) -> SymEigen {
    let n = m.order();
    let mut a = m.entries().to_vec();
    let mut v = alloc::vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let off = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                s += a[i * n + j] * a[i * n + j];
            }
        }
        s
    };
    let scale = m.max_abs().max(f64::MIN_POSITIVE);
    let tol = (1e-15 * scale) * (1e-15 * scale) * (n * n) as f64;
    for _sweep in 0..64 {
        if off(&a) <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if Float::abs(apq) <= 1e-300 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + Float::sqrt(1.0 + tau * tau))
                } else {
                    -1.0 / (-tau + Float::sqrt(1.0 + tau * tau))
                };
                let c = 1.0 / Float::sqrt(1.0 + t * t);
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].partial_cmp(&a[j * n + j]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| a[i * n + i]).collect();
    let mut vectors = alloc::vec![0.0; n * n];
    for (newcol, &oldcol) in order.iter().enumerate() {
        for r in 0..n {
            vectors[r * n + newcol] = v[r * n + oldcol];
        }
    }
    SymEigen { values, vectors }
}

/// Smallest generalized eigenpair of `M x = λ G x`.
///
/// `G = None` means the identity. The problem is reduced to standard form
/// through the Cholesky factor of `G` and handed to the Jacobi solver; the
/// returned eigenvector is normalized to unit `G`-norm.
pub fn sym_eig_min(m: &SymmetricMatrix, g: Option<&SymmetricMatrix>) -> Result<(f64, Vec<f64>)> {
    let full = sym_eig_min_full(m, g)?;
    let n = m.order();
    let mut vec = alloc::vec![0.0; n];
    for i in 0..n {
        vec[i] = full.vectors[i * n];
    }
    Ok((full.values[0], vec))
}

/// Full constrained spectrum behind [`sym_eig_min`]; eigenvectors are columns
/// in the original (unreduced) coordinates with unit `G`-norm.
pub fn sym_eig_min_full(m: &SymmetricMatrix, g: Option<&SymmetricMatrix>) -> Result<SymEigen> {
    let n = m.order();
    match g {
        None => Ok(sym_eigen(m)),
        Some(g) => {
            if g.order() != n {
                return Err(Error::InvalidGrid("M and G orders differ".to_string()));
            }
            let l = cholesky(g)?;
            // B = L⁻¹ M L⁻ᵀ, assembled column by column.
            let mut b = alloc::vec![0.0; n * n];
            for col in 0..n {
                let mut e = alloc::vec![0.0; n];
                e[col] = 1.0;
                let linv_t_col = backward_sub_t(&l, n, &e); // L⁻ᵀ e_col
                let mcol = m.mul_vec(&linv_t_col);
                let bcol = forward_sub(&l, n, &mcol);
                for row in 0..n {
                    b[row * n + col] = bcol[row];
                }
            }
            let bsym = SymmetricMatrix::from_raw(n, b)?;
            let eig = sym_eigen(&bsym);
            let mut vectors = alloc::vec![0.0; n * n];
            for col in 0..n {
                let y: Vec<f64> = (0..n).map(|r| eig.vectors[r * n + col]).collect();
                let x = backward_sub_t(&l, n, &y);
                // unit G-norm: ‖y‖₂ = 1 already implies xᵀGx = 1, keep exact.
                let gn = {
                    let gx = g.mul_vec(&x);
                    Float::sqrt(x.iter().zip(&gx).map(|(a, b)| a * b).sum::<f64>())
                };
                for r in 0..n {
                    vectors[r * n + col] = x[r] / gn;
                }
            }
            Ok(SymEigen {
                values: eig.values,
                vectors,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lu_solves_small_system() {
        let a = alloc::vec![4.0, 1.0, 2.0, 1.0, 3.0, 0.5, 2.0, 0.5, 5.0];
        let lu = Lu::factor(3, a.clone()).unwrap();
        let b = alloc::vec![1.0, -2.0, 3.0];
        let x = lu.solve(&b);
        for i in 0..3 {
            let ri: f64 = (0..3).map(|j| a[i * 3 + j] * x[j]).sum::<f64>() - b[i];
            assert!(ri.abs() <= 1e-13);
        }
    }

    #[test]
    fn complex_lu_roundtrip() {
        let n = 4;
        let mut a = alloc::vec![Complex64::ZERO; n * n];
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut rnd = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        for v in a.iter_mut() {
            *v = Complex64::new(rnd(), rnd());
        }
        for i in 0..n {
            a[i * n + i] += Complex64::new(3.0, 0.0);
        }
        let b: Vec<Complex64> = (0..n).map(|i| Complex64::new(i as f64, -1.0)).collect();
        let lu = ComplexLu::factor(n, a.clone()).unwrap();
        let x = lu.solve(&b);
        for i in 0..n {
            let mut r = -b[i];
            for j in 0..n {
                r += a[i * n + j] * x[j];
            }
            assert!(r.norm() <= 1e-12);
        }
    }

    #[test]
    fn diagonal_generalized_problem() {
        let m = SymmetricMatrix::from_raw(2, alloc::vec![2.0, 0.0, 0.0, 3.0]).unwrap();
        let (lam, vec) = sym_eig_min(&m, None).unwrap();
        assert!((lam - 2.0).abs() <= 1e-14);
        assert!(vec[0].abs() > 0.99 && vec[1].abs() <= 1e-10);
    }

    #[test]
    fn identity_spectrum() {
        let m = SymmetricMatrix::identity(5);
        let (lam, vec) = sym_eig_min(&m, None).unwrap();
        assert!((lam - 1.0).abs() <= 1e-14);
        let norm: f64 = vec.iter().map(|v| v * v).sum::<f64>();
        assert!((norm - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn indefinite_gram_is_reported() {
        let g = SymmetricMatrix::from_raw(2, alloc::vec![1.0, 2.0, 2.0, 1.0]).unwrap();
        let m = SymmetricMatrix::identity(2);
        assert!(matches!(
            sym_eig_min(&m, Some(&g)),
            Err(Error::IndefiniteGram(_))
        ));
    }

    /// Monic characteristic polynomial by the Faddeev–LeVerrier recursion;
    /// independent of the Jacobi path.
    fn char_poly(m: &SymmetricMatrix) -> Vec<f64> {
        let n = m.order();
        let mut coeffs = alloc::vec![0.0; n + 1];
        coeffs[0] = 1.0;
        let mut mk = alloc::vec![0.0; n * n]; // M_0 = 0
        for k in 1..=n {
            // M_k = A (M_{k-1} + c_{k-1} I)
            let mut shifted = mk.clone();
            for i in 0..n {
                shifted[i * n + i] += coeffs[k - 1];
            }
            let mut next = alloc::vec![0.0; n * n];
            for i in 0..n {
                for j in 0..n {
                    let mut acc = 0.0;
                    for l in 0..n {
                        acc += m.get(i, l) * shifted[l * n + j];
                    }
                    next[i * n + j] = acc;
                }
            }
            let trace: f64 = (0..n).map(|i| next[i * n + i]).sum();
            coeffs[k] = -trace / k as f64;
            mk = next;
        }
        coeffs
    }

    #[test]
    fn smallest_eigenvalue_matches_char_poly_oracle() {
        // fixed seeded random symmetric 6×6; the oracle locates the smallest
        // real root of det(M − λI) by scan + bisection on the Gershgorin disk
        let n = 6;
        let mut state = 0x5deece66du64;
        let mut rnd = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let mut raw = alloc::vec![0.0; n * n];
        for v in raw.iter_mut() {
            *v = 2.0 * rnd();
        }
        let m = SymmetricMatrix::from_raw(n, raw).unwrap();
        let p = char_poly(&m);
        let eval = |x: f64| -> f64 {
            let mut acc = 0.0;
            for c in &p {
                acc = acc * x + c;
            }
            acc
        };
        let radius = (0..n).fold(0.0f64, |r, i| {
            r.max((0..n).map(|j| Float::abs(m.get(i, j))).sum())
        });
        // first sign change from the left is the smallest root
        let steps = 40_000;
        let mut bracket = None;
        let mut prev = eval(-radius);
        for i in 1..=steps {
            let x = -radius + 2.0 * radius * i as f64 / steps as f64;
            let val = eval(x);
            if prev.signum() != val.signum() {
                bracket = Some((x - 2.0 * radius / steps as f64, x));
                break;
            }
            prev = val;
        }
        let (lo, hi) = bracket.expect("spectrum inside the Gershgorin disk");
        let oracle = crate::numerics::bisect(eval, lo, hi, 1e-12).unwrap();
        let (lam, _) = sym_eig_min(&m, None).unwrap();
        assert!(
            (lam - oracle).abs() <= 1e-9,
            "jacobi {lam} vs char-poly oracle {oracle}"
        );
    }

    #[test]
    fn residual_of_generalized_pair() {
        // fixed seeded random symmetric 6x6 with SPD gram
        let n = 6;
        let mut state = 0x243f6a8885a308d3u64;
        let mut rnd = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let mut mraw = alloc::vec![0.0; n * n];
        for v in mraw.iter_mut() {
            *v = rnd();
        }
        let m = SymmetricMatrix::from_raw(n, mraw).unwrap();
        let mut graw = alloc::vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                graw[i * n + j] = if i == j { 2.0 } else { 0.3 * rnd() };
            }
        }
        let g = SymmetricMatrix::from_raw(n, graw).unwrap();
        let (lam, x) = sym_eig_min(&m, Some(&g)).unwrap();
        let mx = m.mul_vec(&x);
        let gx = g.mul_vec(&x);
        let res: f64 = mx
            .iter()
            .zip(&gx)
            .map(|(a, b)| (a - lam * b) * (a - lam * b))
            .sum::<f64>();
        assert!(Float::sqrt(res) <= 1e-10 * m.max_abs().max(1.0));
    }
}
