//! Tangential-sphere bound over the BIAWGN channel.
//!
//! Geometry with `Es = 1`: the transmitted point sits at distance `√N` from
//! the origin on the `z1` axis, a weight-`k` competitor at Euclidean
//! distance `2√k`. With `c_k = √k / √(1 - k/N)`, the cone of radius `r`
//! (at `z1 = 0`) shrinks to `r_{z1} = s r`, `s = 1 - z1/√N`, and the
//! pairwise error half-space enters the cone at `z2 = β_k = s c_k`. Weight
//! `k` takes part in the cone term iff `c_k < r`.

use std::cell::RefCell;
use std::f64::consts::{LN_2, PI};

use super::{union_bound, BoundResult};
use crate::channel::ChannelParams;
use crate::error::{Error, Result};
use crate::numerics::{
    find_root_monotone, gauss_legendre, ln_add, ln_gamma_fn, ln_gaussian_q, ln_reg_inc_beta,
    ln_reg_inc_gamma, ln_reg_inc_gamma_upper, ln_sum_exp, Rule,
};
use crate::spectrum::{BitSpectrum, DistanceSpectrum, WeightProfile};

/// Terms smaller than the running total by this many nats are dropped.
const NEGLIGIBLE: f64 = 45.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TsbOptions {
    /// Gauss–Legendre nodes per outer (`z1`) panel.
    pub outer_nodes: usize,
    /// Gauss–Legendre nodes per inner (`z2`) panel.
    pub inner_nodes: usize,
    /// Outer panel width in units of `σ`.
    pub outer_panel: f64,
    /// Repeat with doubled node counts until the relative change is below
    /// `1e-6` (at most three doublings).
    pub refine: bool,
}

impl Default for TsbOptions {
    fn default() -> Self {
        TsbOptions {
            outer_nodes: 12,
            inner_nodes: 12,
            outer_panel: 1.0,
            refine: false,
        }
    }
}

impl TsbOptions {
    pub fn doubled(self) -> Self {
        TsbOptions {
            outer_nodes: 2 * self.outer_nodes,
            inner_nodes: 2 * self.inner_nodes,
            ..self
        }
    }
}

/// Optimal cone radius and the relative residual of its defining equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TsbRadius {
    pub r: f64,
    pub residual: f64,
}

struct Weight {
    ln_a: f64,
    c: f64,
}

fn competitors<P: WeightProfile + ?Sized>(p: &P) -> Vec<Weight> {
    let n = p.n() as f64;
    p.coeffs()
        .iter()
        .enumerate()
        .take(p.n())
        .skip(1)
        .filter(|(_, a)| !a.is_zero())
        .map(|(k, a)| Weight {
            ln_a: a.ln_abs(),
            c: (k as f64 * n / (n - k as f64)).sqrt(),
        })
        .collect()
}

/// `ln Σ_{k: c_k < r} A_k I_{sin²θ_k}((N-2)/2, 1/2) - ln 2`, `cos θ_k = c_k / r`.
///
/// `I_{sin²θ}((N-2)/2, 1/2)` is `∫_0^θ sin^{N-3}φ dφ` normalized by its
/// value at `θ = π/2`.
fn radius_equation(ws: &[Weight], n: usize, r: f64) -> Result<f64> {
    let a = 0.5 * (n as f64 - 2.0);
    let mut terms = Vec::with_capacity(ws.len());
    for w in ws.iter().take_while(|w| w.c < r) {
        let cos2 = (w.c / r) * (w.c / r);
        let sin2 = (r - w.c) * (r + w.c) / (r * r);
        terms.push(w.ln_a + ln_reg_inc_beta(sin2, cos2, a, 0.5)?);
    }
    Ok(ln_sum_exp(terms) - LN_2)
}

/// Solves the cone-radius optimality equation by bisection.
///
/// Returns `None` when no finite radius satisfies it (fewer than two
/// competing codewords of weight below `N`).
pub fn tsb_radius<P: WeightProfile + ?Sized>(p: &P) -> Result<Option<TsbRadius>> {
    let n = p.n();
    if n < 3 {
        return Err(Error::Domain(format!("the TSB needs N >= 3, got {n}")));
    }
    let ws = competitors(p);
    if ws.is_empty() || ln_sum_exp(ws.iter().map(|w| w.ln_a)) <= LN_2 {
        return Ok(None);
    }
    let lo = ws[0].c;
    let hi = 2.0 * ws.last().unwrap().c + 1.0;
    let err = RefCell::new(None);
    let f = |r: f64| match radius_equation(&ws, n, r) {
        Ok(v) => v,
        Err(e) => {
            *err.borrow_mut() = Some(e);
            f64::NAN
        }
    };
    let root = find_root_monotone(f, lo, hi, 1e-14);
    if let Some(e) = err.borrow_mut().take() {
        return Err(e);
    }
    let r = match root {
        Ok(r) => r,
        Err(Error::NoRoot { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    // the left side must be nondecreasing in r for the root to be unique
    let mut prev = f64::NEG_INFINITY;
    for i in 0..100 {
        let x = lo + (2.0 * r - lo) * i as f64 / 99.0;
        let v = f(x);
        if v < prev - 1e-12 * prev.abs().max(1.0) {
            return Err(Error::Optimization(format!(
                "radius equation decreases near r = {x}"
            )));
        }
        prev = v;
    }
    if let Some(e) = err.borrow_mut().take() {
        return Err(e);
    }
    let fr = f(r);
    Ok(Some(TsbRadius {
        r,
        residual: fr.exp_m1().abs(),
    }))
}

/// TSB on the block error probability.
pub fn tsb_block(spec: &DistanceSpectrum, ch: &ChannelParams) -> Result<BoundResult> {
    tsb(spec, ch, &TsbOptions::default())
}

/// TSB on the bit error probability (bit spectrum in place of `{A_l}`).
pub fn tsb_bit(bspec: &BitSpectrum, ch: &ChannelParams) -> Result<BoundResult> {
    tsb(bspec, ch, &TsbOptions::default())
}

/// TSB over any weight profile with explicit quadrature options.
pub fn tsb<P: WeightProfile + ?Sized>(
    p: &P,
    ch: &ChannelParams,
    opts: &TsbOptions,
) -> Result<BoundResult> {
    let Some(rad) = tsb_radius(p)? else {
        let mut res = union_bound(p, ch)?;
        res.diagnostic = Some("no-cone: radius equation has no root; union bound used".into());
        return Ok(res);
    };
    let mut ln = integrate(p, ch, rad.r, opts)?;
    let mut diag = format!("radius residual {:.1e}", rad.residual);
    if opts.refine {
        let mut o = *opts;
        let mut change = f64::INFINITY;
        for _ in 0..3 {
            o = o.doubled();
            let finer = integrate(p, ch, rad.r, &o)?;
            change = (finer - ln).exp_m1().abs();
            ln = finer;
            if change < 1e-6 {
                break;
            }
        }
        diag.push_str(&format!("; node doubling change {change:.1e}"));
    }
    let mut res = BoundResult::from_ln(ln);
    res.tsb_radius_opt = Some(rad.r);
    res.diagnostic = Some(diag);
    Ok(res)
}

/// Natural log of the bound for a given radius.
fn integrate<P: WeightProfile + ?Sized>(
    p: &P,
    ch: &ChannelParams,
    r: f64,
    opts: &TsbOptions,
) -> Result<f64> {
    let n = p.n();
    let ws: Vec<Weight> = competitors(p).into_iter().filter(|w| w.c < r).collect();
    let sigma = ch.sigma;
    let sqrt_n = (n as f64).sqrt();
    let ln_norm = -(sigma * (2.0 * PI).sqrt()).ln();
    let ln_phi = |z: f64| ln_norm - z * z / (2.0 * sigma * sigma);
    let inner = Inner {
        sigma,
        a: 0.5 * (n as f64 - 2.0),
        ln_gamma_a: ln_gamma_fn(0.5 * (n as f64 - 2.0)),
        rule: gauss_legendre(opts.inner_nodes),
    };
    let outer = gauss_legendre(opts.outer_nodes);
    let ln_bmax = ln_add(0.0, ln_sum_exp(ws.iter().map(|w| w.ln_a)));

    // z1 < √N: cone term plus the probability of leaving the cone
    let width = opts.outer_panel * sigma;
    let start = -12.0 * sigma;
    let panels = ((sqrt_n - start) / width).ceil().max(1.0) as usize;
    let h = (sqrt_n - start) / panels as f64;
    let mut total = f64::NEG_INFINITY;
    let mut lj = Vec::new();
    for i in 0..panels {
        let lo = start + i as f64 * h;
        if lo > 0.0 && ln_phi(lo) + ln_bmax + h.ln() < total - NEGLIGIBLE {
            break;
        }
        let mut terms = Vec::with_capacity(outer.len());
        for (&t, &lw) in outer.nodes.iter().zip(&outer.ln_weights) {
            let z1 = lo + 0.5 * h * (t + 1.0);
            let s = 1.0 - z1 / sqrt_n;
            let rz = s * r;
            let ln_out = ln_reg_inc_gamma_upper(0.5 * (n as f64 - 1.0), rz * rz / (2.0 * sigma * sigma))?;
            let ln_cone = inner.cone(&ws, s, rz, ln_out, &mut lj)?;
            terms.push(lw + (0.5 * h).ln() + ln_phi(z1) + ln_add(ln_cone, ln_out));
        }
        total = ln_add(total, ln_sum_exp(terms));
    }

    // z1 ≥ √N: every codeword is at least as close as the sent one along
    // z1; bound the conditional error by a union over all weights, capped at 1
    let ln_tail = ln_gaussian_q(sqrt_n / sigma);
    if ln_tail >= total - NEGLIGIBLE {
        let all: Vec<(f64, f64)> = p
            .coeffs()
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, a)| !a.is_zero())
            .map(|(k, a)| {
                let c = if k == n {
                    f64::INFINITY
                } else {
                    (k as f64 * n as f64 / (n - k) as f64).sqrt()
                };
                (a.ln_abs(), c)
            })
            .collect();
        let panels = (14.0 / opts.outer_panel).ceil() as usize;
        for i in 0..panels {
            let lo = sqrt_n + i as f64 * width;
            let mut terms = Vec::with_capacity(outer.len());
            for (&t, &lw) in outer.nodes.iter().zip(&outer.ln_weights) {
                let z1 = lo + 0.5 * width * (t + 1.0);
                let s = 1.0 - z1 / sqrt_n;
                let ln_union = ln_sum_exp(all.iter().map(|&(la, c)| {
                    if c.is_infinite() {
                        la
                    } else {
                        la + ln_gaussian_q(s * c / sigma)
                    }
                }));
                terms.push(lw + (0.5 * width).ln() + ln_phi(z1) + ln_union.min(0.0));
            }
            total = ln_add(total, ln_sum_exp(terms));
        }
    }
    if total.is_nan() {
        return Err(Error::NonFinite { node: 0, x: r });
    }
    Ok(total)
}

/// The `z2` integrals `J_k = ∫_{β_k}^{r_{z1}} φ_σ(z2) γ̄(a, (r_{z1}² - z2²)/2σ²) dz2`.
struct Inner {
    sigma: f64,
    a: f64,
    ln_gamma_a: f64,
    rule: std::sync::Arc<Rule>,
}

impl Inner {
    fn ln_h(&self, z: f64, rz: f64) -> Result<f64> {
        let x = (rz - z) * (rz + z) / (2.0 * self.sigma * self.sigma);
        if x <= 0.0 {
            return Ok(f64::NEG_INFINITY);
        }
        Ok(-z * z / (2.0 * self.sigma * self.sigma)
            - (self.sigma * (2.0 * PI).sqrt()).ln()
            + ln_reg_inc_gamma(self.a, x)?)
    }

    /// `-d ln h / dz` at `z ≥ 0`.
    fn decay_rate(&self, z: f64, rz: f64) -> Result<f64> {
        let s2 = self.sigma * self.sigma;
        let x = (rz - z) * (rz + z) / (2.0 * s2);
        if x <= 0.0 {
            return Ok(f64::INFINITY);
        }
        let ln_pdf = (self.a - 1.0) * x.ln() - x - self.ln_gamma_a;
        let hazard = (ln_pdf - ln_reg_inc_gamma(self.a, x)?).exp();
        Ok(z / s2 * (1.0 + hazard))
    }

    /// `ln ∫_u^v h`. On `[0, r_{z1}]` the integrand is log-concave and
    /// decreasing, so panels start short at `u` and grow, and the range is
    /// cut where the integrand has fallen by `e^{-60}` or more.
    fn segment(&self, u: f64, v: f64, rz: f64) -> Result<f64> {
        if v <= u {
            return Ok(f64::NEG_INFINITY);
        }
        let lam = self.decay_rate(u, rz)?;
        let sigma = self.sigma;
        let mut end = v.min(u + 14.0 * sigma);
        if lam > 0.0 {
            end = end.min(u + 60.0 / lam);
        }
        let mut len = if lam > 0.0 { (2.0 / lam).min(sigma) } else { sigma };
        let mut lo = u;
        let mut terms = Vec::new();
        while lo < end {
            let hi = (lo + len).min(end);
            // absorb a sliver left at the end into this panel
            let hi = if end - hi < 0.1 * len { end } else { hi };
            let half = 0.5 * (hi - lo);
            for (&t, &lw) in self.rule.nodes.iter().zip(&self.rule.ln_weights) {
                let z = lo + half * (t + 1.0);
                terms.push(lw + half.ln() + self.ln_h(z, rz)?);
            }
            lo = hi;
            len = (1.5 * len).min(sigma);
        }
        Ok(ln_sum_exp(terms))
    }

    /// `ln Σ_k A_k J_k` over the eligible weights (ascending `c_k`).
    fn cone(&self, ws: &[Weight], s: f64, rz: f64, ln_out: f64, lj: &mut Vec<f64>) -> Result<f64> {
        // J_k ≤ Q(β_k/σ): drop terms that cannot matter next to ln_out
        let keep: Vec<&Weight> = ws
            .iter()
            .filter(|w| w.ln_a + ln_gaussian_q(s * w.c / self.sigma) >= ln_out - NEGLIGIBLE)
            .collect();
        if keep.is_empty() {
            return Ok(f64::NEG_INFINITY);
        }
        lj.clear();
        lj.resize(keep.len(), f64::NEG_INFINITY);
        let mut acc = f64::NEG_INFINITY;
        for i in (0..keep.len()).rev() {
            let u = s * keep[i].c;
            let v = if i + 1 < keep.len() { s * keep[i + 1].c } else { rz };
            acc = ln_add(acc, self.segment(u, v, rz)?);
            lj[i] = acc;
        }
        Ok(ln_sum_exp(keep.iter().zip(lj.iter()).map(|(w, &j)| w.ln_a + j)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{integrate as quad, reg_inc_gamma, LogValue};
    use crate::spectrum::{bit_spectrum, enumerate_iowef, GeneratorMatrix};

    fn hamming(m: usize) -> crate::spectrum::Iowef {
        enumerate_iowef(&GeneratorMatrix::hamming(m).unwrap()).unwrap()
    }

    #[test]
    fn radius_solves_its_equation() {
        for m in [3, 4, 5] {
            let spec = hamming(m).marginal();
            let rad = tsb_radius(&spec).unwrap().unwrap();
            assert!(rad.residual < 1e-10, "m = {m}: {}", rad.residual);
            assert!(rad.r > spec.min_distance().map(|d| d as f64).unwrap().sqrt());
        }
    }

    #[test]
    fn radius_equation_matches_direct_angle_integral() {
        // Σ A_k ∫_0^{θ_k} sin^{N-3} = √π Γ((N-2)/2) / Γ((N-1)/2)
        let spec = hamming(3).marginal();
        let n = 7.0;
        let rad = tsb_radius(&spec).unwrap().unwrap();
        let mut lhs = 0.0;
        for k in 1..7 {
            let a = spec.a(k).to_f64();
            if a == 0.0 {
                continue;
            }
            let c = (k as f64 * n / (n - k as f64)).sqrt();
            if c < rad.r {
                let theta = (c / rad.r).acos();
                lhs += a * quad(|p| p.sin().powi(4), 0.0, theta, 200, 16);
            }
        }
        let rhs = PI.sqrt() * (ln_gamma_fn(2.5) - ln_gamma_fn(3.0)).exp();
        assert!((lhs / rhs - 1.0).abs() < 1e-10, "{lhs} vs {rhs}");
    }

    #[test]
    fn no_cone_falls_back_to_union() {
        let io = enumerate_iowef(&GeneratorMatrix::repetition(5).unwrap()).unwrap();
        let ch = ChannelParams::from_ebno_db(2.0, 0.2).unwrap();
        let r = tsb_block(&io.marginal(), &ch).unwrap();
        let u = union_bound(&io.marginal(), &ch).unwrap();
        assert_eq!(r.value, u.value);
        assert!(r.diagnostic.unwrap().starts_with("no-cone"));
        let empty = DistanceSpectrum::new(7, Some(4), 4.0 / 7.0, vec![LogValue::ZERO; 8]).unwrap();
        assert_eq!(tsb_block(&empty, &ch).unwrap().value, 0.0);
        assert!(tsb_radius(&DistanceSpectrum::from_counts(2, 1, &[1, 0, 1]).unwrap()).is_err());
    }

    #[test]
    fn below_union_bound_and_stable_under_node_doubling() {
        let io = hamming(4);
        let spec = io.marginal();
        for db in [1.0, 3.0, 6.0] {
            let ch = ChannelParams::from_ebno_db(db, 11.0 / 15.0).unwrap();
            let t = tsb_block(&spec, &ch).unwrap();
            let fine = tsb(&spec, &ch, &TsbOptions::default().doubled()).unwrap();
            assert!((t.ln_value - fine.ln_value).abs() < 1e-6, "{db}: {} {}", t.value, fine.value);
            let u = union_bound(&spec, &ch).unwrap();
            assert!(t.value <= u.value.min(1.0) * (1.0 + 1e-12), "{db}: {} > {}", t.value, u.value);
            let b = tsb_bit(&bit_spectrum(&io), &ch).unwrap();
            assert!(b.value <= t.value);
        }
    }

    #[test]
    fn cone_integral_matches_brute_force() {
        // one z1 node: compare the chained J_k against plain composite quadrature
        let sigma = 0.6;
        let inner = Inner {
            sigma,
            a: 6.5,
            ln_gamma_a: ln_gamma_fn(6.5),
            rule: gauss_legendre(12),
        };
        let rz = 4.0;
        let ws = vec![
            Weight { ln_a: 0.0, c: 1.5 },
            Weight { ln_a: 0.0, c: 2.5 },
            Weight { ln_a: 0.0, c: 3.7 },
        ];
        let mut lj = Vec::new();
        inner.cone(&ws, 1.0, rz, -1e300, &mut lj).unwrap();
        for (w, &got) in ws.iter().zip(&lj) {
            let f = |z: f64| {
                (-z * z / (2.0 * sigma * sigma)).exp() / (sigma * (2.0 * PI).sqrt())
                    * reg_inc_gamma(6.5, (rz * rz - z * z) / (2.0 * sigma * sigma)).unwrap()
            };
            let want = quad(f, w.c, rz, 4000, 16);
            assert!((got.exp() / want - 1.0).abs() < 1e-10, "{} vs {want}", got.exp());
        }
    }
}
