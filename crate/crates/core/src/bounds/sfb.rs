//! The Shulman–Feder family: SFB, its modified form (MSFB) and the
//! simplified DS2 bound, all with the tilting measure fixed at
//! `λ = 1/(1+ρ)` so that only `ρ` is optimized.

use std::f64::consts::LN_2;

use super::{check_partition, BoundResult, Partition};
use crate::channel::{e0, Channel};
pub use crate::channel::RHO_TOL;
use crate::error::{Error, Result};
use crate::numerics::{ln_add, ln_binomial, ln_sum_exp, minimize_scalar};
use crate::spectrum::WeightProfile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Sfb,
    Msfb,
    Ds2,
}

/// Per-weight data on the support of the profile restricted to `U`.
struct Support {
    n: usize,
    rate: f64,
    /// `(l, ln(A_l / B_l))`
    ratios: Vec<(usize, f64)>,
    ln_alpha: f64,
    /// The weights of `U`, including those where the profile vanishes.
    u: Vec<usize>,
}

impl Support {
    fn new<P: WeightProfile + ?Sized>(p: &P, u: Option<&Partition>) -> Result<Self> {
        check_partition(p, u)?;
        let n = p.n();
        let rate = p.rate();
        let shift = n as f64 * (1.0 - rate) * LN_2;
        let ratios: Vec<(usize, f64)> = p
            .coeffs()
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(l, a)| !a.is_zero() && u.is_none_or(|u| u.contains(*l)))
            .map(|(l, a)| (l, a.ln_abs() - ln_binomial(n as u64, l as u64) + shift))
            .collect();
        let ln_alpha = ratios
            .iter()
            .map(|r| r.1)
            .fold(f64::NEG_INFINITY, f64::max);
        let u = match u {
            Some(u) => u.weights().to_vec(),
            None => (1..=n).collect(),
        };
        Ok(Support {
            n,
            rate,
            ratios,
            ln_alpha,
            u,
        })
    }

    /// `ln` of the binomial weight of `l` under success probability `A/(A+B)`.
    fn ln_pmf(&self, l: usize, ln_p: f64, ln_q: f64) -> f64 {
        ln_binomial(self.n as u64, l as u64) + l as f64 * ln_p + (self.n - l) as f64 * ln_q
    }

    /// Negative exponent `-(E0(ρ) - ρ(R + log2 X(ρ)/N))` in bits, where `X`
    /// is `α`, `α · Σ_U pmf` or `ᾱ_ρ`.
    fn neg_exponent<C: Channel + ?Sized>(&self, fam: Family, ch: &C, rho: f64) -> Result<f64> {
        let n = self.n as f64;
        let e = e0(ch, rho)?;
        if fam == Family::Sfb || rho == 0.0 {
            let reff = self.rate + self.ln_alpha / (n * LN_2);
            return Ok(-(e - rho * reff));
        }
        let (a, b) = ch.gallager_ab(rho)?;
        let (la, lb) = (a.ln(), b.ln());
        let ls = ln_add(la, lb);
        let (ln_p, ln_q) = (la - ls, lb - ls);
        let ln_x = match fam {
            Family::Msfb => {
                self.ln_alpha + ln_sum_exp(self.u.iter().map(|&l| self.ln_pmf(l, ln_p, ln_q)))
            }
            Family::Ds2 => ln_sum_exp(self.ratios.iter().map(|&(l, r)| r + self.ln_pmf(l, ln_p, ln_q))),
            Family::Sfb => unreachable!(),
        };
        Ok(-(e - rho * (self.rate + ln_x / (n * LN_2))))
    }

    fn minimize<C: Channel + ?Sized>(&self, fam: Family, ch: &C) -> Result<(f64, f64)> {
        let mut err = None;
        let out = minimize_scalar(
            |rho| match self.neg_exponent(fam, ch, rho) {
                Ok(v) => v,
                Err(e) => {
                    err = Some(e);
                    f64::NAN
                }
            },
            0.0,
            1.0,
            RHO_TOL,
        )?;
        match err {
            Some(e) => Err(e),
            None => Ok(out),
        }
    }
}

/// Natural log of the family bound at a fixed `ρ`, before clamping.
pub fn ln_family_at<P, C>(fam: Family, p: &P, ch: &C, u: Option<&Partition>, rho: f64) -> Result<f64>
where
    P: WeightProfile + ?Sized,
    C: Channel + ?Sized,
{
    let s = Support::new(p, u)?;
    if s.ratios.is_empty() {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(s.n as f64 * LN_2 * s.neg_exponent(fam, ch, rho)?)
}

fn evaluate<P, C>(fam: Family, p: &P, ch: &C, u: Option<&Partition>) -> Result<BoundResult>
where
    P: WeightProfile + ?Sized,
    C: Channel + ?Sized,
{
    if matches!(u, Some(u) if u.is_empty()) && fam != Family::Sfb {
        return Err(Error::Input("the weight set U must be nonempty".into()));
    }
    let s = Support::new(p, u)?;
    if s.ratios.is_empty() {
        let mut r = BoundResult::zero();
        r.partition = u.cloned();
        return Ok(r);
    }
    let (mut rho, mut h) = s.minimize(Family::Sfb, ch)?;
    if fam != Family::Sfb {
        // the SFB optimum is a valid candidate: the extra factor never exceeds 1
        let at_sfb = s.neg_exponent(fam, ch, rho)?;
        let (r2, h2) = s.minimize(fam, ch)?;
        (rho, h) = if h2 <= at_sfb { (r2, h2) } else { (rho, at_sfb) };
    }
    let mut r = BoundResult::from_ln(s.n as f64 * LN_2 * h);
    r.rho_opt = Some(rho);
    r.partition = u.cloned();
    Ok(r)
}

/// Shulman–Feder bound `min_ρ 2^{-N(E0(ρ) - ρ(R + log2(α)/N))}` with `α`
/// the largest ratio `A_l / B_l` over `U` (all of `1..=N` when `u` is
/// `None`).
pub fn sfb<P, C>(p: &P, ch: &C, u: Option<&Partition>) -> Result<BoundResult>
where
    P: WeightProfile + ?Sized,
    C: Channel + ?Sized,
{
    evaluate(Family::Sfb, p, ch, u)
}

/// SFB multiplied by `[Σ_{l∈U} C(N,l) p^l (1-p)^{N-l}]^ρ` with
/// `p = A(ρ)/(A(ρ)+B(ρ))`.
pub fn msfb<P, C>(p: &P, ch: &C, u: Option<&Partition>) -> Result<BoundResult>
where
    P: WeightProfile + ?Sized,
    C: Channel + ?Sized,
{
    evaluate(Family::Msfb, p, ch, u)
}

/// Simplified DS2 bound: `α` replaced by its binomially tilted average
/// `ᾱ_ρ = Σ_{l∈U} (A_l / B_l) C(N,l) p^l (1-p)^{N-l}`.
pub fn simplified_ds2<P, C>(p: &P, ch: &C, u: Option<&Partition>) -> Result<BoundResult>
where
    P: WeightProfile + ?Sized,
    C: Channel + ?Sized,
{
    evaluate(Family::Ds2, p, ch, u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{random_coding_exponent, CachedChannel, ChannelParams, DiscreteMbios};
    use crate::numerics::LogValue;
    use crate::spectrum::{
        binomial_reference, bit_spectrum, enumerate_iowef, random_systematic_turbo_iowef,
        DistanceSpectrum, GeneratorMatrix,
    };

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs())
    }

    #[test]
    fn binomial_reference_gives_random_coding_bound() {
        for &(n, r) in &[(64, 0.5), (128, 0.875)] {
            let b = binomial_reference(n, r).unwrap();
            let ch = ChannelParams::from_ebno_db(3.0, r).unwrap();
            let (er, _) = random_coding_exponent(&ch, r).unwrap();
            let got = sfb(&b, &ch, None).unwrap();
            let want = -(n as f64) * er * LN_2;
            assert!(rel(got.ln_value, want) < 1e-12, "{} vs {want}", got.ln_value);
        }
    }

    #[test]
    fn scaling_the_spectrum_scales_the_bound() {
        let b = binomial_reference(64, 0.5).unwrap();
        let ch = ChannelParams::from_ebno_db(2.0, 0.5).unwrap();
        let base = sfb(&b, &ch, None).unwrap();
        let c = 3.0;
        let scaled = b.scaled(LogValue::from_f64(2f64.powf(c)));
        let r = sfb(&scaled, &ch, None).unwrap();
        let rho = base.rho_opt.unwrap();
        // same optimum, unless scaling pushes it to another ρ
        let at = ln_family_at(Family::Sfb, &scaled, &ch, None, rho).unwrap();
        assert!((at - base.ln_value - rho * c * LN_2).abs() < 1e-10);
        assert!(r.ln_value <= at + 1e-12);
    }

    // Σ_{l≥1} of the binomial weights: everything but q^N at l = 0
    fn ln_missing_zero(ch: &ChannelParams, n: usize, rho: f64) -> f64 {
        let (a, b) = ch.gallager_ab(rho).unwrap();
        (-(b / (a + b)).powi(n as i32)).ln_1p()
    }

    #[test]
    fn fully_random_bit_spectrum_has_alpha_one_half() {
        // A'_l = B_l / 2: ratio 1/2 at every weight, for ᾱ and α alike
        let b = binomial_reference(40, 0.5).unwrap();
        let half = b.scaled(LogValue::from_f64(0.5));
        let ch = ChannelParams::from_ebno_db(1.0, 0.5).unwrap();
        for rho in [0.2, 0.7, 1.0] {
            let s = ln_family_at(Family::Sfb, &half, &ch, None, rho).unwrap();
            let d = ln_family_at(Family::Ds2, &half, &ch, None, rho).unwrap();
            let full = ln_family_at(Family::Sfb, &b, &ch, None, rho).unwrap();
            assert!((s - full + rho * LN_2).abs() < 1e-10);
            let want = s + rho * ln_missing_zero(&ch, 40, rho);
            assert!((d - want).abs() < 1e-10, "{d} vs {want}");
        }
    }

    #[test]
    fn constant_ratio_ds2_and_msfb_coincide() {
        let b = binomial_reference(30, 0.6).unwrap();
        let c = b.scaled(LogValue::from_f64(5.0));
        let ch = ChannelParams::from_ebno_db(2.5, 0.6).unwrap();
        for rho in [0.1, 0.5, 0.9] {
            let s = ln_family_at(Family::Sfb, &c, &ch, None, rho).unwrap();
            let d = ln_family_at(Family::Ds2, &c, &ch, None, rho).unwrap();
            let m = ln_family_at(Family::Msfb, &c, &ch, None, rho).unwrap();
            assert!((d - m).abs() < 1e-10);
            assert!((d - s - rho * ln_missing_zero(&ch, 30, rho)).abs() < 1e-10);
        }
        let s = sfb(&c, &ch, None).unwrap();
        let d = simplified_ds2(&c, &ch, None).unwrap();
        assert!(d.value <= s.value * (1.0 + 1e-12));
    }

    #[test]
    fn modified_bounds_never_exceed_sfb() {
        let io = random_systematic_turbo_iowef(24, 12).unwrap();
        let spec = io.marginal();
        let bits = bit_spectrum(&io);
        for db in [0.0, 1.5, 3.0, 5.0] {
            let ch = ChannelParams::from_ebno_db(db, 0.5).unwrap();
            let ch = CachedChannel::new(&ch);
            for u in [
                None,
                Some(Partition::new(24, 1..=8).unwrap()),
                Some(Partition::new(24, [5, 9, 13]).unwrap()),
            ] {
                let s = sfb(&spec, &ch, u.as_ref()).unwrap().value;
                let m = msfb(&spec, &ch, u.as_ref()).unwrap().value;
                assert!(m <= s * (1.0 + 1e-12), "{db} {u:?}: {m} > {s}");
                let sb = sfb(&bits, &ch, u.as_ref()).unwrap().value;
                let d = simplified_ds2(&bits, &ch, u.as_ref()).unwrap().value;
                assert!(d <= sb * (1.0 + 1e-12));
                assert!(sb <= s * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn zero_on_u_gives_zero() {
        let spec = enumerate_iowef(&GeneratorMatrix::hamming(3).unwrap())
            .unwrap()
            .marginal();
        let ch = ChannelParams::from_ebno_db(2.0, 4.0 / 7.0).unwrap();
        let u = Partition::new(7, [1, 2, 5]).unwrap();
        for f in [sfb, msfb, simplified_ds2] {
            let r = f(&spec, &ch, Some(&u)).unwrap();
            assert_eq!(r.value, 0.0);
        }
        assert!(msfb(&spec, &ch, Some(&Partition::empty(7))).is_err());
        assert!(sfb(&spec, &ch, Some(&Partition::full(8))).is_err());
    }

    #[test]
    fn discrete_channel_is_accepted() {
        let bsc = DiscreteMbios::bsc(0.02).unwrap();
        let b = binomial_reference(50, 0.5).unwrap();
        let r = sfb(&b, &bsc, None).unwrap();
        let (er, _) = random_coding_exponent(&bsc, 0.5).unwrap();
        assert!(rel(r.ln_value, -50.0 * er * LN_2) < 1e-12);
        let spec = DistanceSpectrum::new(50, None, 0.5, b.coeffs().to_vec()).unwrap();
        assert!(msfb(&spec, &bsc, None).unwrap().value <= r.value * (1.0 + 1e-12));
    }
}
