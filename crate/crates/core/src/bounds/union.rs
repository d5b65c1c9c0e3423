use super::BoundResult;
use crate::channel::ChannelParams;
use crate::error::Result;
use crate::numerics::{ln_gaussian_q, ln_sum_exp};
use crate::spectrum::{BitSpectrum, DistanceSpectrum, WeightProfile};

/// `Σ_{l≥1} A_l Q(sqrt(2 l Es/N0))` over any weight profile.
pub fn union_bound<P: WeightProfile + ?Sized>(p: &P, ch: &ChannelParams) -> Result<BoundResult> {
    let ln = ln_sum_exp(p.coeffs().iter().enumerate().skip(1).filter_map(|(l, a)| {
        (!a.is_zero()).then(|| a.ln_abs() + ln_gaussian_q((2.0 * l as f64 * ch.esno).sqrt()))
    }));
    Ok(BoundResult::from_ln(ln))
}

pub fn union_bound_block(spec: &DistanceSpectrum, ch: &ChannelParams) -> Result<BoundResult> {
    union_bound(spec, ch)
}

pub fn union_bound_bit(bspec: &BitSpectrum, ch: &ChannelParams) -> Result<BoundResult> {
    union_bound(bspec, ch)
}
