//! Gauss–Hermite and Gauss–Legendre rules, and Gaussian expectations in the
//! log domain.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::logval::{ln_sum_exp_slice, LogValue};
use crate::error::{Error, Result};

/// Default number of Gauss–Hermite nodes.
pub const DEFAULT_HERMITE_NODES: usize = 200;

/// Nodes and log-weights of an `n`-point rule.
#[derive(Debug, Clone)]
pub struct Rule {
    pub nodes: Vec<f64>,
    /// Natural logs of the weights (Hermite weights underflow for n ≳ 300).
    pub ln_weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

type Cache = Mutex<HashMap<usize, Arc<Rule>>>;

fn cached(cache: &'static OnceLock<Cache>, n: usize, build: fn(usize) -> Rule) -> Arc<Rule> {
    let map = cache.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(rule) = map.lock().unwrap().get(&n) {
        return Arc::clone(rule);
    }
    let rule = Arc::new(build(n));
    map.lock().unwrap().entry(n).or_insert(rule).clone()
}

/// Gauss–Hermite rule for the weight `e^{-x²}` on the real line.
pub fn gauss_hermite(n: usize) -> Arc<Rule> {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    cached(&CACHE, n, build_hermite)
}

/// Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Arc<Rule> {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    cached(&CACHE, n, build_legendre)
}

fn build_hermite(n: usize) -> Rule {
    assert!(n >= 1, "Gauss-Hermite rule needs at least one node");
    const PIM4: f64 = 0.751_125_544_464_942_5; // π^{-1/4}
    // Orthonormal Hermite recurrence; values grow like e^{x²/2} near the
    // outer nodes, so the recurrence is rescaled and the scale tracked in logs.
    let eval = |z: f64| -> (f64, f64, f64) {
        let mut p1 = PIM4;
        let mut p2 = 0.0;
        let mut ln_scale = 0.0;
        for j in 0..n {
            let p3 = p2;
            p2 = p1;
            let jf = j as f64;
            p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
            if p1.abs() > 1e150 {
                p1 *= 1e-150;
                p2 *= 1e-150;
                ln_scale += 150.0 * std::f64::consts::LN_10;
            }
        }
        (p1, (2.0 * n as f64).sqrt() * p2, ln_scale)
    };
    // Bracket the non-negative roots on a fine grid, then polish each with
    // Newton steps kept inside its bracket.
    let mut brackets = Vec::with_capacity(n / 2 + 1);
    if n % 2 == 1 {
        brackets.push((0.0, 0.0));
    }
    let top = (2.0 * n as f64 + 1.0).sqrt() + 1.0;
    let h = 0.25 / (2.0 * n as f64).sqrt();
    let mut a = if n % 2 == 1 { h * 0.5 } else { 0.0 };
    let mut fa = eval(a).0;
    while a < top {
        let b = a + h;
        let fb = eval(b).0;
        if fa.signum() != fb.signum() {
            brackets.push((a, b));
        }
        a = b;
        fa = fb;
    }
    assert_eq!(brackets.len(), n.div_ceil(2), "Gauss-Hermite root bracketing failed");
    let mut x = vec![0.0; n];
    let mut lw = vec![0.0; n];
    for (i, &(mut lo, mut hi)) in brackets.iter().rev().enumerate() {
        let mut z = 0.5 * (lo + hi);
        if hi > lo {
            let flo = eval(lo).0;
            for _ in 0..200 {
                let (p1, pp, _) = eval(z);
                if p1 == 0.0 {
                    break;
                }
                if p1.signum() == flo.signum() {
                    lo = z;
                } else {
                    hi = z;
                }
                let mut next = z - p1 / pp;
                if !(next > lo && next < hi) {
                    next = 0.5 * (lo + hi);
                }
                let done = (next - z).abs() <= 1e-15 * z.abs().max(1.0);
                z = next;
                if done {
                    break;
                }
            }
        }
        let (_, pp, ln_scale) = eval(z);
        x[i] = z;
        x[n - 1 - i] = -z;
        let l = std::f64::consts::LN_2 - 2.0 * (pp.abs().ln() + ln_scale);
        lw[i] = l;
        lw[n - 1 - i] = l;
    }
    Rule {
        nodes: x,
        ln_weights: lw,
    }
}

fn build_legendre(n: usize) -> Rule {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    let m = n.div_ceil(2);
    let nf = n as f64;
    let mut x = vec![0.0; n];
    let mut lw = vec![0.0; n];
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf + 1.0) * z * p2 - jf * p3) / (jf + 1.0);
            }
            pp = nf * (z * p1 - p2) / (z * z - 1.0);
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-15 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let w = 2.0 / ((1.0 - z * z) * pp * pp);
        lw[i] = w.ln();
        lw[n - 1 - i] = w.ln();
    }
    Rule {
        nodes: x,
        ln_weights: lw,
    }
}

/// `ln E[f(X)]` for `X ~ N(0, 1)`, where `ln_f` returns `ln f(x)`.
///
/// Uses an `nodes`-point Gauss–Hermite rule. `ln_f` may return `-inf` (a
/// zero of `f`); NaN or `+inf` is reported as [`Error::NonFinite`].
pub fn std_normal_expectation<F>(ln_f: F, nodes: usize) -> Result<LogValue>
where
    F: Fn(f64) -> f64,
{
    let rule = gauss_hermite(nodes);
    let mut terms = Vec::with_capacity(rule.len());
    for (i, (&x, &lw)) in rule.nodes.iter().zip(&rule.ln_weights).enumerate() {
        let xs = std::f64::consts::SQRT_2 * x;
        let v = ln_f(xs);
        if v.is_nan() || v == f64::INFINITY {
            return Err(Error::NonFinite { node: i, x: xs });
        }
        terms.push(lw + v);
    }
    let ln_pi_half = 0.5 * std::f64::consts::PI.ln();
    Ok(LogValue::from_ln(ln_sum_exp_slice(&terms) - ln_pi_half))
}

/// `ln E[f(X)]` for `X ~ N(0, 1)` by composite Gauss–Legendre on
/// `[-half_width, half_width]` with panels no wider than `panel` and
/// `nodes` points per panel.
///
/// Suited to integrands with complex singularities close to the real axis,
/// where a global Hermite rule converges slowly.
pub fn std_normal_expectation_panels<F>(
    ln_f: F,
    half_width: f64,
    panel: f64,
    nodes: usize,
) -> Result<LogValue>
where
    F: Fn(f64) -> f64,
{
    let rule = gauss_legendre(nodes);
    let panels = ((2.0 * half_width / panel).ceil() as usize).max(1);
    let h = 2.0 * half_width / panels as f64;
    let ln_half_h = (0.5 * h).ln();
    let ln_norm = -0.5 * (2.0 * std::f64::consts::PI).ln();
    let mut terms = Vec::with_capacity(panels * rule.len());
    for p in 0..panels {
        let mid = -half_width + (p as f64 + 0.5) * h;
        for (i, (&t, &lw)) in rule.nodes.iter().zip(&rule.ln_weights).enumerate() {
            let x = mid + 0.5 * h * t;
            let v = ln_f(x);
            if v.is_nan() || v == f64::INFINITY {
                return Err(Error::NonFinite {
                    node: p * rule.len() + i,
                    x,
                });
            }
            terms.push(lw + ln_half_h + ln_norm - 0.5 * x * x + v);
        }
    }
    Ok(LogValue::from_ln(ln_sum_exp_slice(&terms)))
}

/// `∫_a^b f(x) dx` by composite Gauss–Legendre with `panels` equal panels of
/// `nodes` points each.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize, nodes: usize) -> f64 {
    let rule = gauss_legendre(nodes);
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let mid = lo + 0.5 * h;
        let mut acc = 0.0;
        for (&t, &lw) in rule.nodes.iter().zip(&rule.ln_weights) {
            acc += lw.exp() * f(mid + 0.5 * h * t);
        }
        total += 0.5 * h * acc;
    }
    total
}
