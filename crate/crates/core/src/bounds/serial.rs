use crate::error::{Error, Result};
use crate::numerics::{ln_binomial, ln_sum_exp};

/// Block error bound of an outer code correcting `t` symbol errors out of
/// `n_rs`, when each symbol is wrong with probability at most `p_s`:
/// `Σ_{i=t+1}^{n_rs} C(n_rs, i) p_s^i (1 - p_s)^{n_rs - i}`.
pub fn serial_rs_bound(p_s: f64, n_rs: usize, t: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&p_s) {
        return Err(Error::Domain(format!("symbol error probability {p_s} outside [0, 1]")));
    }
    if t >= n_rs || p_s == 0.0 {
        return Ok(0.0);
    }
    if p_s == 1.0 {
        return Ok(1.0);
    }
    let (lp, lq) = (p_s.ln(), (-p_s).ln_1p());
    let ln = ln_sum_exp((t + 1..=n_rs).map(|i| {
        ln_binomial(n_rs as u64, i as u64) + i as f64 * lp + (n_rs - i) as f64 * lq
    }));
    Ok(ln.exp().min(1.0))
}
