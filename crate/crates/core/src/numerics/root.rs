//! Scalar root bracketing.

use crate::error::{Error, Result};
use alloc::format;

/// Bisection on `[lo, hi]`; `f(lo)` and `f(hi)` must have opposite signs.
///
/// Returns the bracket midpoint once the bracket width is at most `tol`.
pub fn bisect(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("bisection tolerance must be positive, got {tol}")));
    }
    if !(lo < hi) {
        return Err(Error::Domain(format!("invalid bracket [{lo}, {hi}]")));
    }
    let mut a = lo;
    let mut b = hi;
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Bracket(format!(
            "no sign change on [{lo}, {hi}]: f(lo) = {fa:.6e}, f(hi) = {fb:.6e}"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if b - a <= tol {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}
