//! One-dimensional minimization and monotone root finding.

use crate::error::{Error, Result};

/// Points in the coarse grid that seeds the golden-section search.
pub const GRID_POINTS: usize = 33;
/// Default tolerance on the argmin.
pub const DEFAULT_TOL: f64 = 1e-4;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Minimizes `f` on `[lo, hi]`; returns `(argmin, min)`.
///
/// A 33-point grid picks the best cell, then golden-section search refines
/// inside the two neighbouring cells. NaN values are treated as `+inf`.
pub fn minimize_scalar<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<(f64, f64)> {
    if !(lo < hi) {
        return Err(Error::Domain(format!("empty interval [{lo}, {hi}]")));
    }
    let mut g = |x: f64| {
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let step = (hi - lo) / (GRID_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..GRID_POINTS)
        .map(|i| if i == GRID_POINTS - 1 { hi } else { lo + i as f64 * step })
        .collect();
    let vals: Vec<f64> = grid.iter().map(|&x| g(x)).collect();
    let (best, &best_val) = vals
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .unwrap();
    if !best_val.is_finite() && best_val != f64::NEG_INFINITY {
        return Err(Error::Optimization(format!(
            "objective is not finite anywhere on [{lo}, {hi}]"
        )));
    }
    let mut a = grid[best.saturating_sub(1)];
    let mut b = grid[(best + 1).min(GRID_POINTS - 1)];
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = g(x1);
    let mut f2 = g(x2);
    while b - a > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = g(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = g(x2);
        }
    }
    let (xm, fm) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    if fm < best_val {
        Ok((xm, fm))
    } else {
        Ok((grid[best], best_val))
    }
}

/// Root of a monotone `f` on `[lo, hi]` by bisection.
///
/// When `f(lo)` and `f(hi)` share a sign, `hi` is doubled (up to 60 times)
/// until they do not. Stops when `|f| < tol` or the bracket is narrower than
/// `tol · |root|`.
pub fn find_root_monotone<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<f64> {
    let flo = f(lo);
    if flo == 0.0 {
        return Ok(lo);
    }
    let mut hi = hi;
    let mut fhi = f(hi);
    let mut doublings = 0;
    while flo.signum() == fhi.signum() || fhi.is_nan() {
        if doublings == 60 {
            return Err(Error::NoRoot { lo, hi });
        }
        hi *= 2.0;
        fhi = f(hi);
        doublings += 1;
    }
    if flo.is_nan() {
        return Err(Error::NoRoot { lo, hi });
    }
    let mut a = lo;
    let mut b = hi;
    let rising = fhi > flo;
    for _ in 0..2000 {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm.abs() < tol || (b - a) < tol * m.abs() || m == a || m == b {
            return Ok(m);
        }
        if (fm > 0.0) == rising {
            b = m;
        } else {
            a = m;
        }
    }
    Ok(0.5 * (a + b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimize_interior_and_boundary() {
        let (x, v) = minimize_scalar(|x| (x - 0.3) * (x - 0.3), 0.0, 1.0, 1e-4).unwrap();
        assert!((x - 0.3).abs() < 1e-4);
        assert!(v < 1e-8);
        let (x, _) = minimize_scalar(|x| x, 0.0, 1.0, 1e-4).unwrap();
        assert_eq!(x, 0.0);
        let (x, _) = minimize_scalar(|x| -x, 0.0, 1.0, 1e-4).unwrap();
        assert_eq!(x, 1.0);
    }

    #[test]
    fn minimize_rejects_all_nan() {
        assert!(minimize_scalar(|_| f64::NAN, 0.0, 1.0, 1e-4).is_err());
        // NaN on part of the grid is tolerated
        let (x, _) =
            minimize_scalar(|x| if x < 0.5 { f64::NAN } else { x }, 0.0, 1.0, 1e-4).unwrap();
        assert!((x - 0.5).abs() < 1e-4);
    }

    #[test]
    fn roots() {
        let r = find_root_monotone(|x| x - 2.0, 0.0, 10.0, 1e-12).unwrap();
        assert!((r - 2.0).abs() < 1e-10);
        let r = find_root_monotone(|x: f64| x.ln(), 0.1, 10.0, 1e-12).unwrap();
        assert!((r - 1.0).abs() < 1e-10);
        // bracket expansion
        let r = find_root_monotone(|x| x - 1000.0, 0.0, 1.0, 1e-12).unwrap();
        assert!((r - 1000.0).abs() < 1e-8);
        // decreasing
        let r = find_root_monotone(|x| 3.0 - x, 0.0, 10.0, 1e-12).unwrap();
        assert!((r - 3.0).abs() < 1e-10);
        assert!(matches!(
            find_root_monotone(|_| 1.0, 0.0, 1.0, 1e-12),
            Err(Error::NoRoot { .. })
        ));
    }
}
