use crate::error::{invalid, Error, Result};

pub const DEFAULT_ROOT_TOL: f64 = 1e-12;

/// Solves `g(s) = target` for continuous, strictly increasing `g` on `[0, ∞)`.
///
/// The bracket grows by doubling from `s = 1`, then bisection runs until
/// `|g(s) − target| ≤ tol · max(1, |target|)` or the bracket cannot shrink.
pub fn monotone_root(g: impl Fn(f64) -> f64, target: f64, tol: f64) -> Result<f64> {
    monotone_root_from(g, target, tol, 1.0)
}

/// As [`monotone_root`] with the doubling started at `start > 0`.
pub fn monotone_root_from(g: impl Fn(f64) -> f64, target: f64, tol: f64, start: f64) -> Result<f64> {
    if !(tol > 0.0) || !target.is_finite() || !(start > 0.0) {
        return Err(invalid(format!(
            "monotone_root: tol={tol}, target={target}, start={start}"
        )));
    }
    let accept = tol * target.abs().max(1.0);
    let g0 = g(0.0);
    if !g0.is_finite() {
        return Err(invalid(format!("g(0) = {g0}")));
    }
    if (g0 - target).abs() <= accept {
        return Ok(0.0);
    }
    if target < g0 {
        return Err(Error::NoRoot { target, at_zero: g0 });
    }
    let (mut lo, mut hi) = (0.0, start);
    let mut doublings = 0;
    while g(hi) < target {
        lo = hi;
        hi *= 2.0;
        doublings += 1;
        if doublings > 2000 || !hi.is_finite() {
            return Err(Error::NoRoot { target, at_zero: g0 });
        }
    }
    loop {
        let mid = 0.5 * (lo + hi);
        let gm = g(mid);
        if (gm - target).abs() <= accept || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        if gm < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_root() {
        let s = monotone_root(|s| s * s * s, 8.0, 1e-14).unwrap();
        assert!((s - 2.0).abs() < 1e-13);
    }

    #[test]
    fn target_at_origin() {
        assert_eq!(monotone_root(|s| s * s.tanh(), 0.0, 1e-12).unwrap(), 0.0);
    }

    #[test]
    fn below_origin_is_an_error() {
        assert!(matches!(
            monotone_root(|s| s + 1.0, 0.5, 1e-12),
            Err(Error::NoRoot { .. })
        ));
    }

    #[test]
    fn tanh_equation_against_bisection_oracle() {
        // plain bisection on [0, 2], independent of the doubling logic
        let (mut a, mut b) = (0.0f64, 2.0f64);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if m * m.tanh() < 1.0 {
                a = m
            } else {
                b = m
            }
        }
        let s = monotone_root(|s| s * s.tanh(), 1.0, 1e-14).unwrap();
        assert!((s - a).abs() < 1e-12);
        assert!((s - 1.199_678_640_257_734).abs() < 1e-12);
    }
}
