//! Chebyshev–Gauss–Lobatto collocation pieces on the reference interval [0, 1].

use crate::numerics::Lu;
use alloc::vec::Vec;
use num_traits::Float;

/// CGL nodes mapped to [0, 1], ascending: `s_k = (1 − cos(πk/(n−1)))/2`.
pub fn cgl_nodes(n: usize) -> Vec<f64> {
    assert!(n >= 2);
    let m = (n - 1) as f64;
    (0..n)
        .map(|k| 0.5 * (1.0 - Float::cos(core::f64::consts::PI * k as f64 / m)))
        .collect()
}

/// Barycentric differentiation matrix on arbitrary distinct nodes.
///
/// Row `i` maps nodal values to the interpolant derivative at node `i`; the
/// diagonal uses the negative-sum trick.
pub fn diff_matrix(nodes: &[f64]) -> Vec<f64> {
    let n = nodes.len();
    // CGL barycentric weights up to scale: (-1)^j, halved at the endpoints
    let mut w = alloc::vec![0.0; n];
    for (j, wj) in w.iter_mut().enumerate() {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        *wj = if j == 0 || j == n - 1 { 0.5 * sign } else { sign };
    }
    let mut d = alloc::vec![0.0; n * n];
    for i in 0..n {
        let mut diag = 0.0;
        for j in 0..n {
            if i == j {
                continue;
            }
            let v = (w[j] / w[i]) / (nodes[i] - nodes[j]);
            d[i * n + j] = v;
            diag -= v;
        }
        d[i * n + i] = diag;
    }
    d
}

/// Clenshaw–Curtis quadrature weights for the CGL nodes on [0, 1].
///
/// Obtained by imposing exactness on the Chebyshev basis `T_j(2s − 1)`:
/// the resulting Vandermonde system is the (well-conditioned) DCT matrix.
pub fn clenshaw_curtis_weights(n: usize) -> Vec<f64> {
    let nodes = cgl_nodes(n);
    // moments of T_j over [-1, 1]: 0 for odd j, 2/(1-j²) for even j
    let mut vt = alloc::vec![0.0; n * n];
    let mut moments = alloc::vec![0.0; n];
    for j in 0..n {
        for (k, s) in nodes.iter().enumerate() {
            let x = 2.0 * s - 1.0;
            // T_j(x) = cos(j arccos x)
            let t = Float::cos(j as f64 * Float::acos(x.clamp(-1.0, 1.0)));
            vt[j * n + k] = t;
        }
        moments[j] = if j % 2 == 0 {
            2.0 / (1.0 - (j * j) as f64)
        } else {
            0.0
        };
    }
    let lu = Lu::factor(n, vt).expect("DCT matrix is nonsingular");
    let w = lu.solve(&moments);
    // halve: the map [-1,1] → [0,1] scales measures by 1/2
    w.into_iter().map(|v| 0.5 * v).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_span_unit_interval() {
        let s = cgl_nodes(9);
        assert!(s[0] == 0.0 && (s[8] - 1.0).abs() <= 1e-15);
        for k in 1..9 {
            assert!(s[k] > s[k - 1]);
        }
    }

    #[test]
    fn differentiates_polynomials_exactly() {
        let n = 12;
        let s = cgl_nodes(n);
        let d = diff_matrix(&s);
        let f: Vec<f64> = s.iter().map(|x| x.powi(5) - 2.0 * x * x + 3.0).collect();
        for i in 0..n {
            let got: f64 = (0..n).map(|j| d[i * n + j] * f[j]).sum();
            let want = 5.0 * s[i].powi(4) - 4.0 * s[i];
            assert!((got - want).abs() <= 1e-10);
        }
    }

    #[test]
    fn weights_integrate_polynomials() {
        let n = 16;
        let s = cgl_nodes(n);
        let w = clenshaw_curtis_weights(n);
        let total: f64 = w.iter().sum();
        assert!((total - 1.0).abs() <= 1e-13);
        let int_s5: f64 = (0..n).map(|k| w[k] * s[k].powi(5)).sum();
        assert!((int_s5 - 1.0 / 6.0).abs() <= 1e-13);
        let int_s8: f64 = (0..n).map(|k| w[k] * s[k].powi(8)).sum();
        assert!((int_s8 - 1.0 / 9.0).abs() <= 1e-13);
    }
}
