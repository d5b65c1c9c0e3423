//! Upper bounds on the conditional ML decoding error probability given the
//! all-zero codeword.
//!
//! Every evaluator works on a [`WeightProfile`], so the same code serves
//! block-error bounds (distance spectrum `{A_l}`) and bit-error bounds (bit
//! spectrum `{A'_l}`).

mod combined;
mod serial;
mod sfb;
mod tsb;
mod union;

pub use combined::{partition_algorithm1, Algorithm1Options, Head, Mode, Tail};
pub use serial::serial_rs_bound;
pub use sfb::{ln_family_at, msfb, sfb, simplified_ds2, Family, RHO_TOL};
pub use tsb::{tsb, tsb_bit, tsb_block, tsb_radius, TsbOptions, TsbRadius};
pub use union::{union_bound, union_bound_bit, union_bound_block};

use crate::error::{Error, Result};
use crate::numerics::LogValue;
use crate::spectrum::WeightProfile;

/// A set `U ⊆ {1, …, N}` of Hamming weights; the complement is implied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    n: usize,
    u: Vec<usize>,
}

impl Partition {
    pub fn new(n: usize, weights: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut u: Vec<usize> = weights.into_iter().collect();
        u.sort_unstable();
        u.dedup();
        if let Some(&bad) = u.iter().find(|&&l| l == 0 || l > n) {
            return Err(Error::Input(format!("weight {bad} outside 1..={n}")));
        }
        Ok(Partition { n, u })
    }

    /// `U = {1, …, N}`.
    pub fn full(n: usize) -> Self {
        Partition {
            n,
            u: (1..=n).collect(),
        }
    }

    pub fn empty(n: usize) -> Self {
        Partition { n, u: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weights(&self) -> &[usize] {
        &self.u
    }

    pub fn contains(&self, l: usize) -> bool {
        self.u.binary_search(&l).is_ok()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub fn max_u(&self) -> Option<usize> {
        self.u.last().copied()
    }

    /// The weights of `{1, …, N}` not in `U`.
    pub fn complement(&self) -> Vec<usize> {
        (1..=self.n).filter(|&l| !self.contains(l)).collect()
    }
}

/// Result of a bound evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundResult {
    /// The bound, clamped to `[0, 1]`.
    pub value: f64,
    /// Natural log of the unclamped bound (`-inf` for a zero bound).
    pub ln_value: f64,
    pub rho_opt: Option<f64>,
    pub tsb_radius_opt: Option<f64>,
    pub partition: Option<Partition>,
    /// Bound on the `U` part and on the complement, before clamping.
    pub head_value: Option<f64>,
    pub tail_value: Option<f64>,
    pub diagnostic: Option<String>,
}

impl BoundResult {
    pub(crate) fn from_ln(ln_value: f64) -> Self {
        BoundResult {
            value: ln_value.min(0.0).exp(),
            ln_value,
            rho_opt: None,
            tsb_radius_opt: None,
            partition: None,
            head_value: None,
            tail_value: None,
            diagnostic: None,
        }
    }

    pub(crate) fn zero() -> Self {
        Self::from_ln(f64::NEG_INFINITY)
    }
}

/// A weight profile with some coefficients replaced by zero.
#[derive(Debug, Clone)]
pub struct Restricted {
    n: usize,
    rate: f64,
    a: Vec<LogValue>,
}

impl Restricted {
    /// Keeps `A_l` for `l ≥ 1` with `keep(l)`; `A_0` is always dropped.
    pub fn new<P: WeightProfile + ?Sized>(p: &P, keep: impl Fn(usize) -> bool) -> Self {
        let a = p
            .coeffs()
            .iter()
            .enumerate()
            .map(|(l, &v)| if l >= 1 && keep(l) { v } else { LogValue::ZERO })
            .collect();
        Restricted {
            n: p.n(),
            rate: p.rate(),
            a,
        }
    }

    pub fn on<P: WeightProfile + ?Sized>(p: &P, u: Option<&Partition>) -> Self {
        match u {
            Some(u) => Self::new(p, |l| u.contains(l)),
            None => Self::new(p, |_| true),
        }
    }
}

impl WeightProfile for Restricted {
    fn n(&self) -> usize {
        self.n
    }
    fn rate(&self) -> f64 {
        self.rate
    }
    fn coeffs(&self) -> &[LogValue] {
        &self.a
    }
}

fn check_partition<P: WeightProfile + ?Sized>(p: &P, u: Option<&Partition>) -> Result<()> {
    match u {
        Some(u) if u.n() != p.n() => Err(Error::Input(format!(
            "partition for length {} applied to length {}",
            u.n(),
            p.n()
        ))),
        _ => Ok(()),
    }
}
