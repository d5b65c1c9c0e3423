//! Spectrum expurgation: the trivial weight cutoff and the exact C-rule
//! neighbor test for small codes.
//!
//! Only block-error bounds may use an expurgated spectrum, so the functions
//! here take and return [`DistanceSpectrum`] and never a bit spectrum.

use std::collections::HashSet;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::LogValue;
use crate::spectrum::{DistanceSpectrum, GeneratorMatrix, WeightProfile};

/// Largest codebook accepted.
pub const MAX_CODEBOOK: usize = 1 << 20;

/// All codewords of a binary linear code of length `n ≤ 128`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codebook {
    n: usize,
    /// Dimension when `words[u]` is the encoding of information word `u`.
    k: Option<usize>,
    words: Vec<u128>,
}

impl Codebook {
    /// Wraps an explicit word list after checking it is a linear code.
    pub fn new(n: usize, words: Vec<u128>) -> Result<Self> {
        if n == 0 || n > 128 {
            return Err(Error::Size(format!("code length {n} (supported: 1..=128)")));
        }
        if words.len() > MAX_CODEBOOK {
            return Err(Error::Size(format!("{} codewords", words.len())));
        }
        let mask = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
        if words.iter().any(|w| w & !mask != 0) {
            return Err(Error::Input("codeword longer than n".into()));
        }
        let set: HashSet<u128> = words.iter().copied().collect();
        if set.len() != words.len() {
            return Err(Error::Input("duplicate codewords".into()));
        }
        if !set.contains(&0) {
            return Err(Error::Input("codebook lacks the all-zero word".into()));
        }
        // Closure under a basis implies closure under the whole span.
        let basis = basis_of(&words);
        if set.len() != 1usize << basis.len() {
            return Err(Error::Input("codebook is not a linear code".into()));
        }
        for &w in &words {
            if basis.iter().any(|b| !set.contains(&(w ^ b))) {
                return Err(Error::Input("codebook is not a linear code".into()));
            }
        }
        Ok(Codebook { n, k: None, words })
    }

    /// All `2^K` codewords of a systematic generator, indexed by information
    /// word.
    pub fn from_generator(gen: &GeneratorMatrix) -> Result<Self> {
        if gen.k() > 20 {
            return Err(Error::Size(format!("2^{} codewords", gen.k())));
        }
        Ok(Codebook {
            n: gen.n(),
            k: Some(gen.k()),
            words: gen.codewords()?,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> Option<usize> {
        self.k
    }

    pub fn words(&self) -> &[u128] {
        &self.words
    }

    /// Weight distribution of the code.
    pub fn spectrum(&self) -> DistanceSpectrum {
        let mut counts = vec![0u64; self.n + 1];
        for w in &self.words {
            counts[w.count_ones() as usize] += 1;
        }
        let k = self.words.len().trailing_zeros() as usize;
        DistanceSpectrum::from_counts(self.n, k, &counts).expect("valid counts")
    }

    /// Nonzero codewords that cover no other nonzero codeword.
    pub fn neighbors(&self) -> Vec<u128> {
        let mut nonzero: Vec<u128> = self.words.iter().copied().filter(|&w| w != 0).collect();
        nonzero.sort_by_key(|w| (w.count_ones(), *w));
        let mut out: Vec<u128> = nonzero
            .par_iter()
            .enumerate()
            .filter(|&(i, &c)| {
                let wc = c.count_ones();
                // only strictly lighter words can be covered by c
                !nonzero[..i]
                    .iter()
                    .take_while(|o| o.count_ones() < wc)
                    .any(|&o| o & !c == 0)
            })
            .map(|(_, &c)| c)
            .collect();
        out.sort_by_key(|w| (w.count_ones(), *w));
        out
    }
}

fn basis_of(words: &[u128]) -> Vec<u128> {
    // echelon form keyed by leading bit
    let mut pivots: Vec<u128> = Vec::new();
    let mut basis = Vec::new();
    for &w in words {
        let mut v = w;
        for &p in &pivots {
            let lead = 127 - p.leading_zeros();
            if v >> lead & 1 == 1 {
                v ^= p;
            }
        }
        if v != 0 {
            pivots.push(v);
            pivots.sort_by_key(|p| std::cmp::Reverse(127 - p.leading_zeros()));
            basis.push(w);
        }
    }
    basis
}

/// Removes every weight above `floor(n(1 - rate) + 1)`; `A_0` is kept.
pub fn trivial_expurgate(spec: &DistanceSpectrum, n: usize, rate: f64) -> Result<DistanceSpectrum> {
    if spec.n() != n {
        return Err(Error::Input(format!("spectrum length {} differs from n = {n}", spec.n())));
    }
    let cutoff = (n as f64 * (1.0 - rate) + 1.0 + 1e-9).floor() as usize;
    Ok(spec.zeroed_where(|l| l > cutoff))
}

/// Spectrum of the C-rule neighbors of the zero word, with `A_0 = 1`.
pub fn zero_neighbors(cb: &Codebook) -> DistanceSpectrum {
    let mut counts = vec![0u64; cb.n + 1];
    counts[0] = 1;
    for w in cb.neighbors() {
        counts[w.count_ones() as usize] += 1;
    }
    let k = cb.words.len().trailing_zeros() as usize;
    let a = counts.iter().map(|&c| LogValue::from_f64(c as f64)).collect();
    DistanceSpectrum::new(cb.n, Some(k), k as f64 / cb.n as f64, a).expect("valid counts")
}
