//! Binary-input channels and the Gallager constants `A(ρ)`, `B(ρ)`, `E0(ρ)`
//! and `Er(R)` that drive every bound of the Shulman–Feder family.

use std::collections::HashMap;
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::numerics::{
    ln_add, ln_cosh, ln_sum_exp, minimize_scalar, std_normal_expectation_panels,
};

/// Default Gauss–Legendre nodes per panel for the BIAWGN expectations.
pub const DEFAULT_PANEL_NODES: usize = 16;
/// Tolerance on `ρ` for the exponent and bound optimizations.
pub const RHO_TOL: f64 = 1e-9;

/// A memoryless binary-input output-symmetric channel.
pub trait Channel: Sync {
    /// `(A(ρ), B(ρ))` for `ρ ∈ [0, 1]`.
    fn gallager_ab(&self, rho: f64) -> Result<(f64, f64)>;
}

fn check_rho(rho: f64) -> Result<()> {
    if (0.0..=1.0).contains(&rho) {
        Ok(())
    } else {
        Err(Error::Domain(format!("rho = {rho} outside [0, 1]")))
    }
}

/// BPSK over additive white Gaussian noise with `Es = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub ebno_db: f64,
    pub rate: f64,
    /// Linear `Es/N0`.
    pub esno: f64,
    /// Noise standard deviation per dimension, `sqrt(1 / (2 esno))`.
    pub sigma: f64,
    /// Gauss–Legendre nodes per panel used for `A(ρ)` and `B(ρ)`.
    pub quad_nodes: usize,
}

impl ChannelParams {
    pub fn from_ebno_db(ebno_db: f64, rate: f64) -> Result<Self> {
        if !(rate > 0.0 && rate <= 1.0) {
            return Err(Error::Domain(format!("rate {rate} outside (0, 1]")));
        }
        if !ebno_db.is_finite() {
            return Err(Error::Domain(format!("Eb/N0 = {ebno_db} dB")));
        }
        let esno = rate * 10f64.powf(ebno_db / 10.0);
        Ok(ChannelParams {
            ebno_db,
            rate,
            esno,
            sigma: (1.0 / (2.0 * esno)).sqrt(),
            quad_nodes: DEFAULT_PANEL_NODES,
        })
    }

    /// Same channel with a different quadrature node count.
    pub fn with_nodes(mut self, nodes: usize) -> Self {
        self.quad_nodes = nodes;
        self
    }

    /// `ln A(ρ)` and `ln B(ρ)`.
    ///
    /// `cosh^{ρ-1}(cx)` has poles at `x = ±iπ/(2c)`, so the Gaussian
    /// expectations use Gauss–Legendre panels no wider than that distance.
    pub fn ln_gallager_ab(&self, rho: f64) -> Result<(f64, f64)> {
        check_rho(rho)?;
        let g = self.esno;
        let c = (2.0 * g).sqrt() / (1.0 + rho);
        if rho == 1.0 {
            // cosh^0 = 1: both expectations are closed form
            return Ok((-g, -g + 2.0 * c * c));
        }
        let panel = (std::f64::consts::FRAC_PI_2 / c).min(1.0);
        // beyond this range the Gaussian weight is below e^{-80} of the peak
        let half_width = (4.0 * c * c + 160.0).sqrt();
        let ln_a = std_normal_expectation_panels(
            |x| (rho - 1.0) * ln_cosh(c * x),
            half_width,
            panel,
            self.quad_nodes,
        )?;
        // E[e^{-2cX} h(X)] = e^{2c²} E[h(X - 2c)]
        let ln_b = std_normal_expectation_panels(
            |x| (rho - 1.0) * ln_cosh(c * (x - 2.0 * c)),
            half_width,
            panel,
            self.quad_nodes,
        )?;
        Ok((-g + ln_a.ln_abs(), -g + 2.0 * c * c + ln_b.ln_abs()))
    }
}

impl Channel for ChannelParams {
    fn gallager_ab(&self, rho: f64) -> Result<(f64, f64)> {
        let (la, lb) = self.ln_gallager_ab(rho)?;
        Ok((la.exp(), lb.exp()))
    }
}

/// A discrete MBIOS channel given by its transition pairs `(p(y|0), p(y|1))`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMbios {
    outputs: Vec<(f64, f64)>,
}

impl DiscreteMbios {
    /// Validates normalization and output symmetry.
    pub fn new(outputs: Vec<(f64, f64)>) -> Result<Self> {
        if outputs.is_empty() {
            return Err(Error::Input("channel has no outputs".into()));
        }
        if outputs
            .iter()
            .any(|&(a, b)| !(a >= 0.0 && b >= 0.0 && a.is_finite() && b.is_finite()))
        {
            return Err(Error::Input("transition probabilities must be finite and >= 0".into()));
        }
        let s0: f64 = outputs.iter().map(|o| o.0).sum();
        let s1: f64 = outputs.iter().map(|o| o.1).sum();
        if (s0 - 1.0).abs() > 1e-9 || (s1 - 1.0).abs() > 1e-9 {
            return Err(Error::Input(format!(
                "transition probabilities sum to {s0} and {s1}"
            )));
        }
        let mut p0: Vec<f64> = outputs.iter().map(|o| o.0).collect();
        let mut p1: Vec<f64> = outputs.iter().map(|o| o.1).collect();
        p0.sort_by(f64::total_cmp);
        p1.sort_by(f64::total_cmp);
        if p0
            .iter()
            .zip(&p1)
            .any(|(a, b)| (a - b).abs() > 1e-12 * a.max(*b).max(1e-300))
        {
            return Err(Error::Input("channel is not output-symmetric".into()));
        }
        Ok(DiscreteMbios { outputs })
    }

    /// Binary symmetric channel with crossover probability `p`.
    pub fn bsc(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("crossover probability {p}")));
        }
        Self::new(vec![(1.0 - p, p), (p, 1.0 - p)])
    }

    /// BIAWGN quantized to `points` equally spaced outputs on
    /// `[-half_width, half_width]`; each output carries `pdf · Δy`, and the
    /// two end cells absorb nothing beyond the grid.
    pub fn quantized_biawgn(ch: &ChannelParams, points: usize, half_width: f64) -> Result<Self> {
        if points < 2 {
            return Err(Error::Input("need at least two quantization points".into()));
        }
        let dy = 2.0 * half_width / (points - 1) as f64;
        let s2 = ch.sigma * ch.sigma;
        let norm = dy / (2.0 * std::f64::consts::PI * s2).sqrt();
        let mut outputs = Vec::with_capacity(points);
        for i in 0..points {
            // symmetric grid so the symmetry check is exact
            let y = if 2 * i + 1 == points {
                0.0
            } else {
                -half_width + i as f64 * dy
            };
            let p0 = norm * (-(y + 1.0) * (y + 1.0) / (2.0 * s2)).exp();
            let p1 = norm * (-(y - 1.0) * (y - 1.0) / (2.0 * s2)).exp();
            outputs.push((p0, p1));
        }
        // renormalize the truncated grid
        let s0: f64 = outputs.iter().map(|o| o.0).sum();
        for o in &mut outputs {
            o.0 /= s0;
            o.1 /= s0;
        }
        let mirrored: Vec<(f64, f64)> = outputs.iter().rev().map(|&(a, b)| (b, a)).collect();
        let outputs = outputs
            .iter()
            .zip(&mirrored)
            .map(|(a, b)| (0.5 * (a.0 + b.0), 0.5 * (a.1 + b.1)))
            .collect();
        Self::new(outputs)
    }

    pub fn outputs(&self) -> &[(f64, f64)] {
        &self.outputs
    }
}

impl Channel for DiscreteMbios {
    fn gallager_ab(&self, rho: f64) -> Result<(f64, f64)> {
        check_rho(rho)?;
        let e = 1.0 / (1.0 + rho);
        let mut ta = Vec::with_capacity(self.outputs.len());
        let mut tb = Vec::with_capacity(self.outputs.len());
        for &(p0, p1) in &self.outputs {
            let l0 = p0.ln() * e;
            let l1 = p1.ln() * e;
            let mix = ln_add(l0, l1) - std::f64::consts::LN_2;
            if mix == f64::NEG_INFINITY {
                continue;
            }
            ta.push(l0 + l1 + (rho - 1.0) * mix);
            tb.push(2.0 * l0 + (rho - 1.0) * mix);
        }
        Ok((ln_sum_exp(ta).exp(), ln_sum_exp(tb).exp()))
    }
}

/// Memoizes `gallager_ab` by the bit pattern of `ρ`.
pub struct CachedChannel<'a, C: Channel + ?Sized> {
    inner: &'a C,
    memo: Mutex<HashMap<u64, (f64, f64)>>,
}

impl<'a, C: Channel + ?Sized> CachedChannel<'a, C> {
    pub fn new(inner: &'a C) -> Self {
        CachedChannel {
            inner,
            memo: Mutex::new(HashMap::new()),
        }
    }
}

impl<C: Channel + ?Sized> Channel for CachedChannel<'_, C> {
    fn gallager_ab(&self, rho: f64) -> Result<(f64, f64)> {
        let key = rho.to_bits();
        if let Some(&v) = self.memo.lock().unwrap().get(&key) {
            return Ok(v);
        }
        let v = self.inner.gallager_ab(rho)?;
        self.memo.lock().unwrap().insert(key, v);
        Ok(v)
    }
}

/// Gallager's `E0(ρ) = -log2((A(ρ) + B(ρ)) / 2)`, in bits.
pub fn e0<C: Channel + ?Sized>(ch: &C, rho: f64) -> Result<f64> {
    if rho == 0.0 {
        check_rho(rho)?;
        return Ok(0.0);
    }
    let (a, b) = ch.gallager_ab(rho)?;
    Ok(-((a + b) / 2.0).log2())
}

/// `Er(R) = max_{0≤ρ≤1} E0(ρ) - ρR`; returns `(Er, ρ*)`.
pub fn random_coding_exponent<C: Channel + ?Sized>(ch: &C, rate: f64) -> Result<(f64, f64)> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::Domain(format!("rate {rate} outside (0, 1]")));
    }
    let mut err = None;
    let (rho, neg) = minimize_scalar(
        |rho| match e0(ch, rho) {
            Ok(v) => -(v - rho * rate),
            Err(e) => {
                err = Some(e);
                f64::NAN
            }
        },
        0.0,
        1.0,
        RHO_TOL,
    )?;
    if let Some(e) = err {
        return Err(e);
    }
    if neg >= 0.0 {
        Ok((0.0, 0.0))
    } else {
        Ok((-neg, rho))
    }
}
