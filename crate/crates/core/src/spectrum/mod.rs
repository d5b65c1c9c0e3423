//! Distance spectra, input–output weight enumerators and the bit-error
//! spectrum, in the log domain.

mod codes;
mod ensembles;
mod io;

use std::collections::BTreeMap;

pub use codes::{enumerate_iowef, GeneratorMatrix, MAX_ENUMERATION_K};
pub use ensembles::{
    expurgated_random_spectrum, hamming_wef_closed_form, random_systematic_turbo_iowef,
    turbo_combine,
};
pub use io::{read_iowef, read_spectrum, write_iowef, write_spectrum};

use crate::error::{Error, Result};
use crate::numerics::{ln_binomial, log_sum_exp, LogValue};

/// A weight profile over `l = 0..=N` that the bound evaluators consume.
///
/// Implemented by both the distance spectrum `{A_l}` and the bit spectrum
/// `{A'_l}`.
pub trait WeightProfile {
    fn n(&self) -> usize;
    /// Code rate used by the bound (`K/N` for a code).
    fn rate(&self) -> f64;
    /// Coefficients indexed by weight, length `N + 1`.
    fn coeffs(&self) -> &[LogValue];
}

/// `{A_l}`, `l = 0..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceSpectrum {
    n: usize,
    k_dim: Option<usize>,
    rate: f64,
    a: Vec<LogValue>,
}

impl DistanceSpectrum {
    /// Builds a spectrum of length `n` and rate `rate`; `a` must hold `n + 1`
    /// non-negative values.
    pub fn new(n: usize, k_dim: Option<usize>, rate: f64, a: Vec<LogValue>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Input("spectrum length must be positive".into()));
        }
        if a.len() != n + 1 {
            return Err(Error::Input(format!(
                "spectrum of length {n} needs {} coefficients, got {}",
                n + 1,
                a.len()
            )));
        }
        if a.iter().any(|v| v.sign() < 0 || v.ln_abs().is_nan()) {
            return Err(Error::Input("spectrum coefficients must be non-negative".into()));
        }
        if !(rate > 0.0 && rate <= 1.0) {
            return Err(Error::Domain(format!("rate {rate} outside (0, 1]")));
        }
        Ok(DistanceSpectrum { n, k_dim, rate, a })
    }

    /// Spectrum of an `(n, k)` code from integer counts.
    pub fn from_counts(n: usize, k: usize, counts: &[u64]) -> Result<Self> {
        let a = counts.iter().map(|&c| LogValue::from_f64(c as f64)).collect();
        Self::new(n, Some(k), k as f64 / n as f64, a)
    }

    pub fn k_dim(&self) -> Option<usize> {
        self.k_dim
    }

    pub fn a(&self, l: usize) -> LogValue {
        self.a[l]
    }

    /// `ln Σ_l A_l`.
    pub fn ln_total(&self) -> f64 {
        log_sum_exp(&self.a).ln_abs()
    }

    /// Smallest nonzero weight with `A_l > 0`.
    pub fn min_distance(&self) -> Option<usize> {
        (1..=self.n).find(|&l| !self.a[l].is_zero())
    }

    /// Largest weight with `A_l > 0`.
    pub fn max_weight(&self) -> usize {
        (0..=self.n).rev().find(|&l| !self.a[l].is_zero()).unwrap_or(0)
    }

    /// Copy with `A_l` set to zero wherever `drop(l)` holds (`l >= 1`).
    pub fn zeroed_where<F: Fn(usize) -> bool>(&self, drop: F) -> Self {
        let mut out = self.clone();
        for l in 1..=self.n {
            if drop(l) {
                out.a[l] = LogValue::ZERO;
            }
        }
        out
    }

    /// Copy with every coefficient multiplied by `factor`.
    pub fn scaled(&self, factor: LogValue) -> Self {
        let mut out = self.clone();
        for v in &mut out.a {
            *v = *v * factor;
        }
        out
    }
}

impl WeightProfile for DistanceSpectrum {
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

/// `{A'_l} = Σ_w (w/K) A_{w,l}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BitSpectrum {
    n: usize,
    rate: f64,
    a_prime: Vec<LogValue>,
}

impl BitSpectrum {
    pub fn new(n: usize, rate: f64, a_prime: Vec<LogValue>) -> Result<Self> {
        let probe = DistanceSpectrum::new(n, None, rate, a_prime)?;
        Ok(BitSpectrum {
            n,
            rate,
            a_prime: probe.a,
        })
    }

    pub fn a_prime(&self, l: usize) -> LogValue {
        self.a_prime[l]
    }
}

impl WeightProfile for BitSpectrum {
    fn n(&self) -> usize {
        self.n
    }
    fn rate(&self) -> f64 {
        self.rate
    }
    fn coeffs(&self) -> &[LogValue] {
        &self.a_prime
    }
}

/// Sparse `{A_{w,l}}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Iowef {
    n: usize,
    k_dim: usize,
    a_wl: BTreeMap<(usize, usize), LogValue>,
}

impl Iowef {
    /// Builds an IOWEF; zero entries are dropped.
    pub fn new(n: usize, k_dim: usize, entries: BTreeMap<(usize, usize), LogValue>) -> Result<Self> {
        if k_dim == 0 || k_dim > n {
            return Err(Error::Input(format!("IOWEF with N = {n}, K = {k_dim}")));
        }
        let mut a_wl = BTreeMap::new();
        for ((w, l), v) in entries {
            if w > k_dim || l > n {
                return Err(Error::Input(format!("IOWEF entry ({w}, {l}) out of range")));
            }
            if v.sign() < 0 {
                return Err(Error::Input(format!("negative IOWEF entry at ({w}, {l})")));
            }
            if !v.is_zero() {
                a_wl.insert((w, l), v);
            }
        }
        Ok(Iowef { n, k_dim, a_wl })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k_dim(&self) -> usize {
        self.k_dim
    }

    pub fn rate(&self) -> f64 {
        self.k_dim as f64 / self.n as f64
    }

    pub fn get(&self, w: usize, l: usize) -> LogValue {
        self.a_wl.get(&(w, l)).copied().unwrap_or(LogValue::ZERO)
    }

    /// Nonzero entries in `(w, l)` order.
    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), LogValue)> + '_ {
        self.a_wl.iter().map(|(&k, &v)| (k, v))
    }

    /// `ln Σ_{w,l} A_{w,l}`.
    pub fn ln_total(&self) -> f64 {
        let v: Vec<LogValue> = self.a_wl.values().copied().collect();
        log_sum_exp(&v).ln_abs()
    }

    /// `A_l = Σ_w A_{w,l}`.
    pub fn marginal(&self) -> DistanceSpectrum {
        let mut cols: Vec<Vec<LogValue>> = vec![Vec::new(); self.n + 1];
        for (&(_, l), &v) in &self.a_wl {
            cols[l].push(v);
        }
        let a = cols.iter().map(|c| log_sum_exp(c)).collect();
        DistanceSpectrum {
            n: self.n,
            k_dim: Some(self.k_dim),
            rate: self.rate(),
            a,
        }
    }

    /// Parity weight distribution `S_{w,h} = A_{w,w+h}` for input weight `w`.
    pub fn parity_profile(&self, w: usize) -> Vec<LogValue> {
        let mut s = vec![LogValue::ZERO; self.n - self.k_dim + 1];
        for (&(_, l), &v) in self.a_wl.range((w, 0)..=(w, self.n)) {
            if l >= w && l - w < s.len() {
                s[l - w] = v;
            }
        }
        s
    }
}

/// Random-coding reference `B_l = 2^{-N(1-R)} C(N, l)`.
pub fn binomial_reference(n: usize, rate: f64) -> Result<DistanceSpectrum> {
    if n == 0 {
        return Err(Error::Input("length must be positive".into()));
    }
    let shift = -(n as f64) * (1.0 - rate) * std::f64::consts::LN_2;
    let a = (0..=n)
        .map(|l| LogValue::from_ln(ln_binomial(n as u64, l as u64) + shift))
        .collect();
    let k = n as f64 * rate;
    let k_dim = if (k - k.round()).abs() < 1e-9 {
        Some(k.round() as usize)
    } else {
        None
    };
    DistanceSpectrum::new(n, k_dim, rate, a)
}

/// `A'_l = Σ_w (w/K) A_{w,l}`.
pub fn bit_spectrum(io: &Iowef) -> BitSpectrum {
    let ln_k = (io.k_dim as f64).ln();
    let mut cols: Vec<Vec<LogValue>> = vec![Vec::new(); io.n + 1];
    for ((w, l), v) in io.iter() {
        if w > 0 {
            cols[l].push(v * LogValue::from_ln((w as f64).ln() - ln_k));
        }
    }
    BitSpectrum {
        n: io.n,
        rate: io.rate(),
        a_prime: cols.iter().map(|c| log_sum_exp(c)).collect(),
    }
}

/// `ln(A_l / B_l)` for every `l` with `A_l > 0`.
pub fn spectrum_ratio<S: WeightProfile + ?Sized>(
    spec: &S,
    reference: &DistanceSpectrum,
) -> Result<Vec<(usize, f64)>> {
    if spec.n() != reference.n() {
        return Err(Error::Input(format!(
            "length mismatch: {} vs {}",
            spec.n(),
            reference.n()
        )));
    }
    let mut out = Vec::new();
    for (l, (a, b)) in spec.coeffs().iter().zip(reference.coeffs()).enumerate() {
        if a.is_zero() {
            continue;
        }
        if b.is_zero() {
            return Err(Error::Ratio(l));
        }
        out.push((l, a.ln_abs() - b.ln_abs()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
    }

    #[test]
    fn binomial_reference_cases() {
        let b = binomial_reference(8, 7.0 / 8.0).unwrap();
        assert!(close(b.a(1).to_f64(), 4.0, 1e-14));
        assert!(close(b.ln_total(), 7.0 * std::f64::consts::LN_2, 1e-14));
        let b = binomial_reference(1023, 1013.0 / 1023.0).unwrap();
        assert!(close(b.a(0).ln_abs(), -10.0 * std::f64::consts::LN_2, 1e-12));
        assert!(close(b.ln_total(), 1013.0 * std::f64::consts::LN_2, 1e-12));
    }

    #[test]
    fn bit_spectrum_single_entries() {
        let mut m = BTreeMap::new();
        m.insert((0, 0), LogValue::ONE);
        m.insert((3, 5), LogValue::from_f64(7.0));
        let io = Iowef::new(6, 3, m).unwrap();
        assert!(close(bit_spectrum(&io).a_prime(5).to_f64(), 7.0, 1e-14));
        let mut m = BTreeMap::new();
        m.insert((0, 0), LogValue::ONE);
        m.insert((1, 5), LogValue::ONE);
        let rep = Iowef::new(5, 1, m).unwrap();
        let b = bit_spectrum(&rep);
        assert!(close(b.a_prime(5).to_f64(), 1.0, 1e-15));
        assert!(b.a_prime(0).is_zero());
    }

    #[test]
    fn ratio_against_itself_is_one() {
        let b = binomial_reference(20, 0.5).unwrap();
        for (_, r) in spectrum_ratio(&b, &b).unwrap() {
            assert_eq!(r, 0.0);
        }
    }

    #[test]
    fn ratio_rejects_vanishing_reference() {
        let a = DistanceSpectrum::from_counts(3, 1, &[1, 0, 0, 1]).unwrap();
        let mut b = binomial_reference(3, 1.0 / 3.0).unwrap();
        b = b.zeroed_where(|l| l == 3);
        assert_eq!(spectrum_ratio(&a, &b), Err(Error::Ratio(3)));
    }

    #[test]
    fn hamming_ratio_at_weight_three() {
        let h = DistanceSpectrum::from_counts(7, 4, &[1, 0, 0, 7, 7, 0, 0, 1]).unwrap();
        let b = binomial_reference(7, 4.0 / 7.0).unwrap();
        let r = spectrum_ratio(&h, &b).unwrap();
        // B_3 = 35 / 8
        let at3 = r.iter().find(|(l, _)| *l == 3).unwrap().1;
        assert!(close(at3, (7.0f64 * 8.0 / 35.0).ln(), 1e-14));
        assert_eq!(r.len(), 4);
    }

    #[test]
    fn invalid_spectra_rejected() {
        assert!(DistanceSpectrum::new(3, None, 0.5, vec![LogValue::ONE; 3]).is_err());
        assert!(DistanceSpectrum::new(1, None, 0.5, vec![LogValue::ONE, LogValue::from_f64(-1.0)]).is_err());
        assert!(DistanceSpectrum::new(1, None, 0.0, vec![LogValue::ONE; 2]).is_err());
    }
}
