//! Restart-free right-preconditioned GMRES.
//!
//! The collocation and Galerkin operators of the elasticity modules are dense
//! but admit cheap matrix-vector products and a strong per-Fourier-mode block
//! preconditioner, so a short Krylov iteration replaces a large dense
//! factorization. Right preconditioning keeps the monitored residual equal to
//! the true residual of the unpreconditioned system.

use crate::error::{Error, Result};
use alloc::vec::Vec;
use num_traits::Float;

/// A linear operator on flat vectors.
pub trait LinearOp {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

/// Identity preconditioner.
pub struct IdentityOp(pub usize);

impl LinearOp for IdentityOp {
    fn dim(&self) -> usize {
        self.0
    }
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        y.copy_from_slice(x);
    }
}

/// Convergence report of a GMRES run.
#[derive(Debug, Clone, Copy)]
pub struct GmresOutcome {
    pub iterations: usize,
    /// Final true residual norm.
    pub residual: f64,
    /// Residual norm divided by the right-hand side norm.
    pub relative_residual: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    Float::sqrt(dot(a, a))
}

/// Solves `A x = b` with right preconditioner `M⁻¹` (so the Krylov space is
/// built for `A M⁻¹`). Returns the solution and the convergence report, or a
/// solver-failure error carrying the relative residual reached.
pub fn gmres(
    a: &dyn LinearOp,
    m_inv: &dyn LinearOp,
    b: &[f64],
    tol_rel: f64,
    max_iter: usize,
) -> Result<(Vec<f64>, GmresOutcome)> {
    let n = a.dim();
    assert_eq!(b.len(), n);
    let bnorm = norm(b);
    if bnorm == 0.0 {
        return Ok((
            alloc::vec![0.0; n],
            GmresOutcome {
                iterations: 0,
                residual: 0.0,
                relative_residual: 0.0,
            },
        ));
    }
    let max_iter = max_iter.min(n);
    let target = tol_rel * bnorm;

    // Arnoldi basis, Hessenberg in Givens-rotated form.
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(max_iter + 1);
    basis.push(b.iter().map(|v| v / bnorm).collect());
    let mut h = alloc::vec![0.0; (max_iter + 1) * max_iter];
    let stride = max_iter;
    let mut cs = alloc::vec![0.0; max_iter];
    let mut sn = alloc::vec![0.0; max_iter];
    let mut g = alloc::vec![0.0; max_iter + 1];
    g[0] = bnorm;

    let mut tmp = alloc::vec![0.0; n];
    let mut w = alloc::vec![0.0; n];
    let mut completed = 0usize;
    let mut res = bnorm;

    for k in 0..max_iter {
        m_inv.apply(&basis[k], &mut tmp);
        a.apply(&tmp, &mut w);
        // modified Gram-Schmidt
        for (j, vj) in basis.iter().enumerate() {
            let hjk = dot(&w, vj);
            h[j * stride + k] = hjk;
            for (wi, vi) in w.iter_mut().zip(vj) {
                *wi -= hjk * vi;
            }
        }
        let hk1 = norm(&w);
        h[(k + 1) * stride + k] = hk1;
        // apply previous rotations to the new column
        for j in 0..k {
            let t = cs[j] * h[j * stride + k] + sn[j] * h[(j + 1) * stride + k];
            h[(j + 1) * stride + k] = -sn[j] * h[j * stride + k] + cs[j] * h[(j + 1) * stride + k];
            h[j * stride + k] = t;
        }
        let denom = Float::sqrt(
            h[k * stride + k] * h[k * stride + k] + h[(k + 1) * stride + k] * h[(k + 1) * stride + k],
        );
        if denom == 0.0 {
            cs[k] = 1.0;
            sn[k] = 0.0;
        } else {
            cs[k] = h[k * stride + k] / denom;
            sn[k] = h[(k + 1) * stride + k] / denom;
        }
        h[k * stride + k] = cs[k] * h[k * stride + k] + sn[k] * h[(k + 1) * stride + k];
        h[(k + 1) * stride + k] = 0.0;
        g[k + 1] = -sn[k] * g[k];
        g[k] *= cs[k];
        completed = k + 1;
        res = Float::abs(g[k + 1]);
        if res <= target || hk1 == 0.0 {
            break;
        }
        basis.push(w.iter().map(|v| v / hk1).collect());
    }

    // back-substitute y from the triangularized Hessenberg
    let m = completed;
    let mut y = alloc::vec![0.0; m];
    for i in (0..m).rev() {
        let mut acc = g[i];
        for j in (i + 1)..m {
            acc -= h[i * stride + j] * y[j];
        }
        y[i] = acc / h[i * stride + i];
    }
    let mut z = alloc::vec![0.0; n];
    for (j, yj) in y.iter().enumerate() {
        for (zi, vi) in z.iter_mut().zip(&basis[j]) {
            *zi += yj * vi;
        }
    }
    let mut x = alloc::vec![0.0; n];
    m_inv.apply(&z, &mut x);

    let outcome = GmresOutcome {
        iterations: m,
        residual: res,
        relative_residual: res / bnorm,
    };
    if res > target {
        return Err(Error::SolverFailure {
            message: alloc::format!(
                "gmres did not reach tolerance {tol_rel:.1e} in {m} iterations \
                 (relative residual {:.3e})",
                outcome.relative_residual
            ),
            condition: outcome.relative_residual / tol_rel,
        });
    }
    Ok((x, outcome))
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Dense {
        n: usize,
        a: Vec<f64>,
    }

    impl LinearOp for Dense {
        fn dim(&self) -> usize {
            self.n
        }
        fn apply(&self, x: &[f64], y: &mut [f64]) {
            for i in 0..self.n {
                y[i] = (0..self.n).map(|j| self.a[i * self.n + j] * x[j]).sum();
            }
        }
    }

    #[test]
    fn solves_diagonally_dominant_system() {
        let n = 30;
        let mut a = alloc::vec![0.0; n * n];
        let mut state = 1234567u64;
        let mut rnd = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        for v in a.iter_mut() {
            *v = 0.3 * rnd();
        }
        for i in 0..n {
            a[i * n + i] = 4.0 + rnd();
        }
        let op = Dense { n, a: a.clone() };
        let b: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let (x, out) = gmres(&op, &IdentityOp(n), &b, 1e-13, 200).unwrap();
        assert!(out.relative_residual <= 1e-13);
        let mut r = alloc::vec![0.0; n];
        op.apply(&x, &mut r);
        let resid: f64 = r.iter().zip(&b).map(|(p, q)| (p - q) * (p - q)).sum::<f64>();
        assert!(Float::sqrt(resid) <= 1e-11);
    }

    #[test]
    fn zero_rhs_returns_zero() {
        let op = Dense {
            n: 4,
            a: alloc::vec![1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0],
        };
        let (x, out) = gmres(&op, &IdentityOp(4), &[0.0; 4], 1e-12, 10).unwrap();
        assert!(x.iter().all(|v| *v == 0.0));
        assert_eq!(out.iterations, 0);
    }

    #[test]
    fn reports_non_convergence() {
        let n = 20;
        let mut a = alloc::vec![0.0; n * n];
        for i in 0..n {
            a[i * n + i] = (i + 1) as f64;
            if i + 1 < n {
                a[i * n + i + 1] = 3.0;
            }
        }
        let op = Dense { n, a };
        let b = alloc::vec![1.0; n];
        let err = gmres(&op, &IdentityOp(n), &b, 1e-14, 3);
        assert!(matches!(err, Err(Error::SolverFailure { .. })));
    }
}
