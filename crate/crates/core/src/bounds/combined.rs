//! Partition-based combination: weights whose spectrum-to-binomial ratio is
//! below a threshold go to `U` and are bounded by a Shulman–Feder-type
//! bound, the rest by the union bound or the TSB.

use std::f64::consts::LN_2;

use super::{msfb, sfb, simplified_ds2, tsb, union_bound, BoundResult, Partition, Restricted, TsbOptions};
use crate::channel::{CachedChannel, ChannelParams};
use crate::error::{Error, Result};
use crate::numerics::{ln_add, ln_binomial};
use crate::spectrum::{BitSpectrum, DistanceSpectrum, WeightProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Head {
    Sfb,
    Msfb,
    Ds2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tail {
    Union,
    Tsb,
}

/// What is bounded: the block error probability from `{A_l}`, or the bit
/// error probability from `{A'_l}`.
#[derive(Debug, Clone, Copy)]
pub enum Mode<'a> {
    Block(&'a DistanceSpectrum),
    Bit(&'a BitSpectrum),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Algorithm1Options {
    /// Ratio threshold; `1` for block and `1/2` for bit mode when absent.
    pub threshold: Option<f64>,
    /// Bound on the `U` part; MSFB for block and simplified DS2 for bit mode
    /// when absent.
    pub head: Option<Head>,
    pub tail: Tail,
    pub tsb: TsbOptions,
}

impl Default for Algorithm1Options {
    fn default() -> Self {
        Algorithm1Options {
            threshold: None,
            head: None,
            tail: Tail::Tsb,
            tsb: TsbOptions::default(),
        }
    }
}

fn symmetric(a: &[crate::numerics::LogValue]) -> bool {
    let n = a.len() - 1;
    (1..n).all(|l| {
        let (x, y) = (a[l], a[n - l]);
        x.is_zero() && y.is_zero()
            || (!x.is_zero()
                && !y.is_zero()
                && (x.ln_abs() - y.ln_abs()).abs() <= 1e-12 * x.ln_abs().abs().max(1.0))
    })
}

/// Walks `l = 1, 2, …`, moving `l` into `U` when `A_l / B_l` is below the
/// threshold, and returns the smallest `head(U) + tail(U^c)` seen, starting
/// from the tail bound on the whole spectrum (`U = ∅`).
///
/// Weights with `A_l = 0` are skipped; they change neither part. When
/// `A_l = A_{N-l}` for all `l`, weights are taken in pairs `{l, N-l}`.
pub fn partition_algorithm1(
    mode: Mode<'_>,
    ch: &ChannelParams,
    opts: &Algorithm1Options,
) -> Result<BoundResult> {
    let (p, default_threshold, default_head): (&dyn WeightProfile, f64, Head) = match mode {
        Mode::Block(s) => (s, 1.0, Head::Msfb),
        Mode::Bit(b) => (b, 0.5, Head::Ds2),
    };
    let threshold = opts.threshold.unwrap_or(default_threshold);
    if !(threshold > 0.0) {
        return Err(Error::Domain(format!("threshold {threshold} must be positive")));
    }
    let head = opts.head.unwrap_or(default_head);
    let n = p.n();
    let a = p.coeffs();
    let shift = n as f64 * (1.0 - p.rate()) * LN_2;
    let below = |l: usize| {
        !a[l].is_zero() && a[l].ln_abs() - ln_binomial(n as u64, l as u64) + shift < threshold.ln()
    };
    let cached = CachedChannel::new(ch);

    let eval = |u: &Partition| -> Result<(BoundResult, BoundResult)> {
        let h = if u.is_empty() {
            BoundResult::zero()
        } else {
            match head {
                Head::Sfb => sfb(p, &cached, Some(u))?,
                Head::Msfb => msfb(p, &cached, Some(u))?,
                Head::Ds2 => simplified_ds2(p, &cached, Some(u))?,
            }
        };
        let rest = Restricted::new(p, |l| !u.contains(l));
        let t = match opts.tail {
            Tail::Union => union_bound(&rest, ch)?,
            Tail::Tsb => tsb(&rest, ch, &opts.tsb)?,
        };
        Ok((h, t))
    };

    let mut u = Partition::empty(n);
    let (h, t) = eval(&u)?;
    let mut best = combine(&u, h, t);
    let sym = symmetric(a);
    let last = (1..=n).rev().find(|&l| !a[l].is_zero()).unwrap_or(0);
    let stop = if sym { n.div_ceil(2).min(last) } else { last };
    for l in 1..=stop {
        if !below(l) {
            continue;
        }
        let mut add = vec![l];
        if sym && n - l != l {
            add.push(n - l);
        }
        u = Partition::new(n, u.weights().iter().copied().chain(add))?;
        let (h, t) = eval(&u)?;
        let cand = combine(&u, h, t);
        if cand.ln_value < best.ln_value {
            best = cand;
        }
    }
    Ok(best)
}

fn combine(u: &Partition, h: BoundResult, t: BoundResult) -> BoundResult {
    let mut r = BoundResult::from_ln(ln_add(h.ln_value, t.ln_value));
    r.rho_opt = h.rho_opt;
    r.tsb_radius_opt = t.tsb_radius_opt;
    r.partition = Some(u.clone());
    r.head_value = Some(h.ln_value.exp());
    r.tail_value = Some(t.ln_value.exp());
    r.diagnostic = t.diagnostic;
    r
}
