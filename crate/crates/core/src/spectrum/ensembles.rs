//! Ensemble-average spectra: uniformly interleaved turbo combinations,
//! random systematic turbo-block codes, expurgated random linear codes, and
//! the closed-form Hamming enumerator.

use std::collections::BTreeMap;

use num_bigint::{BigInt, Sign};

use super::{DistanceSpectrum, Iowef};
use crate::error::{Error, Result};
use crate::numerics::{ln_1m_exp, ln_binomial, ln_sum_exp_slice, LogValue};

/// Averages `J ≥ 2` systematic components over independent uniform
/// interleavers of the `K` information bits.
///
/// `A_{w,w+h} = Σ_{h_1+…+h_J = h} Π_j S^{(j)}_{w,h_j} / C(K,w)^{J-1}`.
pub fn turbo_combine(components: &[Iowef], k_dim: usize) -> Result<Iowef> {
    if components.len() < 2 {
        return Err(Error::Input("turbo combination needs at least two components".into()));
    }
    if let Some(c) = components.iter().find(|c| c.k_dim() != k_dim) {
        return Err(Error::Input(format!(
            "component dimension {} differs from K = {k_dim}",
            c.k_dim()
        )));
    }
    for c in components {
        if c.iter().any(|((w, l), _)| l < w) {
            return Err(Error::Input("component is not systematic".into()));
        }
    }
    let j = components.len();
    let n = k_dim + components.iter().map(|c| c.n() - k_dim).sum::<usize>();
    let mut entries = BTreeMap::new();
    for w in 0..=k_dim {
        let mut acc = components[0].parity_profile(w);
        for c in &components[1..] {
            acc = convolve(&acc, &c.parity_profile(w));
        }
        let ln_den = (j - 1) as f64 * ln_binomial(k_dim as u64, w as u64);
        for (h, v) in acc.into_iter().enumerate() {
            if !v.is_zero() {
                entries.insert((w, w + h), LogValue::from_ln(v.ln_abs() - ln_den));
            }
        }
    }
    Iowef::new(n, k_dim, entries)
}

fn convolve(a: &[LogValue], b: &[LogValue]) -> Vec<LogValue> {
    let mut out = Vec::with_capacity(a.len() + b.len() - 1);
    let mut terms = Vec::new();
    for s in 0..a.len() + b.len() - 1 {
        terms.clear();
        for i in s.saturating_sub(b.len() - 1)..=s.min(a.len() - 1) {
            let t = a[i] * b[s - i];
            if !t.is_zero() {
                terms.push(t.ln_abs());
            }
        }
        out.push(LogValue::from_ln(ln_sum_exp_slice(&terms)));
    }
    out
}

/// IOWEF of the uniformly interleaved turbo-block ensemble with two random
/// systematic linear components of parameters `((N+K)/2, K)`.
pub fn random_systematic_turbo_iowef(n: usize, k_dim: usize) -> Result<Iowef> {
    if k_dim == 0 || n <= k_dim {
        return Err(Error::Input(format!("need N > K >= 1, got ({n}, {k_dim})")));
    }
    let p = n - k_dim;
    if p % 2 != 0 {
        return Err(Error::Input(format!("N - K = {p} must be even")));
    }
    let ln2 = std::f64::consts::LN_2;
    let half = p / 2;
    let mut entries = BTreeMap::new();
    entries.insert((0, 0), LogValue::ONE);
    for w in 1..=k_dim {
        let ln_c = ln_binomial(k_dim as u64, w as u64);
        // ln(C(K,w) - 1); -inf when C(K,w) = 1
        let ln_cm1 = if ln_c == 0.0 {
            f64::NEG_INFINITY
        } else {
            ln_c + ln_1m_exp(-ln_c)
        };
        for j in 0..=p {
            let first = ln_cm1 - p as f64 * ln2 + ln_binomial(p as u64, j as u64);
            let v = if j % 2 == 0 {
                let second = -(half as f64) * ln2 + ln_binomial(half as u64, (j / 2) as u64);
                ln_sum_exp_slice(&[first, second])
            } else {
                first
            };
            if v > f64::NEG_INFINITY {
                entries.insert((w, w + j), LogValue::from_ln(v));
            }
        }
    }
    Iowef::new(n, k_dim, entries)
}

/// Average expurgated spectrum of the random linear `(n, k)` ensemble.
///
/// `E[A_l] = C(n,l) 2^{-(n-k)} Π_{i=0}^{l-2} (1 - 2^{-(n-k-i)})` for
/// `1 ≤ l ≤ n-k+1` and zero above; `A_0` is the all-zero word, `1`.
pub fn expurgated_random_spectrum(n: usize, k_dim: usize) -> Result<DistanceSpectrum> {
    if k_dim == 0 || n <= k_dim {
        return Err(Error::Input(format!("need n > k >= 1, got ({n}, {k_dim})")));
    }
    let r = n - k_dim;
    let ln2 = std::f64::consts::LN_2;
    let mut a = vec![LogValue::ZERO; n + 1];
    a[0] = LogValue::ONE;
    let mut ln_prod = 0.0;
    for l in 1..=(r + 1).min(n) {
        if l >= 2 {
            let i = l - 2;
            // factor (1 - 2^{-(r-i)}); zero when i = r
            ln_prod += ln_1m_exp(-((r - i) as f64) * ln2);
        }
        a[l] = LogValue::from_ln(ln_binomial(n as u64, l as u64) - r as f64 * ln2 + ln_prod);
    }
    DistanceSpectrum::new(n, Some(k_dim), k_dim as f64 / n as f64, a)
}

/// Weight enumerator of the `(2^m - 1, 2^m - m - 1)` Hamming code from
/// `((1+x)^n + n (1+x)^{(n-1)/2} (1-x)^{(n+1)/2}) / (n+1)`, evaluated exactly.
pub fn hamming_wef_closed_form(m: usize) -> Result<DistanceSpectrum> {
    if !(2..=12).contains(&m) {
        return Err(Error::Domain(format!("Hamming parameter m = {m} (supported: 2..=12)")));
    }
    let n = (1usize << m) - 1;
    let k = n - m;
    let binom_row = |len: usize| -> Vec<BigInt> {
        let mut row = Vec::with_capacity(len + 1);
        let mut c = BigInt::from(1);
        row.push(c.clone());
        for i in 0..len {
            c = c * BigInt::from(len - i) / BigInt::from(i + 1);
            row.push(c.clone());
        }
        row
    };
    let full = binom_row(n);
    let a_len = (n - 1) / 2;
    let b_len = (n + 1) / 2;
    let plus = binom_row(a_len);
    let minus: Vec<BigInt> = binom_row(b_len)
        .into_iter()
        .enumerate()
        .map(|(i, c)| if i % 2 == 1 { -c } else { c })
        .collect();
    let den = BigInt::from(n + 1);
    let nn = BigInt::from(n);
    let mut a = Vec::with_capacity(n + 1);
    for l in 0..=n {
        let mut cross = BigInt::from(0);
        for i in l.saturating_sub(b_len)..=l.min(a_len) {
            cross += &plus[i] * &minus[l - i];
        }
        let total = &full[l] + &nn * cross;
        let (q, rem) = (&total / &den, &total % &den);
        debug_assert_eq!(rem, BigInt::from(0));
        a.push(match q.sign() {
            Sign::Minus => {
                return Err(Error::Domain("negative Hamming coefficient".into()));
            }
            Sign::NoSign => LogValue::ZERO,
            Sign::Plus => LogValue::from_ln(ln_bigint(&q)),
        });
    }
    DistanceSpectrum::new(n, Some(k), k as f64 / n as f64, a)
}

/// Natural log of a positive big integer.
pub(crate) fn ln_bigint(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_string().parse::<f64>().expect("decimal digits").ln();
    }
    let shift = bits - 64;
    let top: BigInt = x >> shift;
    top.to_string().parse::<f64>().expect("decimal digits").ln()
        + shift as f64 * std::f64::consts::LN_2
}
