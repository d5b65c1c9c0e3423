//! Exhaustive soft-decision ML decoding over the BIAWGN channel, used as a
//! ground-truth oracle for the bounds.
//!
//! The all-zero codeword is sent as the all `-1` BPSK vector. For received
//! `y`, the correlation of codeword `c` with `y` equals
//! `2 Σ_{i ∈ supp c} y_i - Σ_i y_i`, so the decoder maximizes
//! `M(c) = Σ_{i ∈ supp c} y_i`, with `M(0) = 0`. A nonzero word with
//! `M(c) ≥ 0` is a block error; exact ties pick the lexicographically
//! smallest word (bit 0 first).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::ChannelParams;
use crate::error::{Error, Result};
use crate::expurgation::Codebook;

/// Largest codebook the simulator accepts.
pub const MAX_SIM_CODEBOOK: usize = 1 << 16;
/// Trials per independently seeded block.
const BLOCK: u64 = 1 << 14;

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub trials: u64,
    pub block_errors: u64,
    pub bit_errors: u64,
    pub pe_hat: f64,
    pub pb_hat: f64,
    pub stderr_pe: f64,
    pub stderr_pb: f64,
    pub seed: u64,
}

/// Simulates `trials` transmissions of the zero word and decodes each by
/// exhaustive search over `cb`, which must carry its information mapping.
///
/// Trials are split into fixed blocks, block `b` drawing noise from ChaCha8
/// seeded with `seed` on stream `b`, so counts do not depend on the number
/// of worker threads.
pub fn simulate_ml(cb: &Codebook, ch: &ChannelParams, trials: u64, seed: u64) -> Result<SimResult> {
    let k = cb
        .k()
        .ok_or_else(|| Error::Input("codebook has no information-bit mapping".into()))?;
    if cb.words().len() > MAX_SIM_CODEBOOK {
        return Err(Error::Size(format!(
            "{} codewords (limit {MAX_SIM_CODEBOOK})",
            cb.words().len()
        )));
    }
    if trials == 0 {
        return Err(Error::Input("at least one trial is required".into()));
    }
    let n = cb.n();
    let chunks = n.div_ceil(8);
    // per-word byte slices of the support, and a lexicographic key
    let bytes: Vec<u8> = cb.words()[1..]
        .iter()
        .flat_map(|&w| (0..chunks).map(move |j| (w >> (8 * j)) as u8))
        .collect();
    let lex: Vec<u128> = cb.words()[1..]
        .iter()
        .map(|w| w.reverse_bits())
        .collect();
    let info_weight: Vec<u32> = (1..cb.words().len()).map(|u| u.count_ones()).collect();
    let sigma = ch.sigma;
    let blocks = trials.div_ceil(BLOCK);
    let (block_errors, bit_errors) = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b);
            let count = BLOCK.min(trials - b * BLOCK);
            let mut y = vec![0.0f64; chunks * 8];
            let mut tables = vec![0.0f64; chunks * 256];
            let mut errs = 0u64;
            let mut bits = 0u64;
            for _ in 0..count {
                let mut i = 0;
                while i < n {
                    let (z0, z1) = box_muller(&mut rng);
                    y[i] = -1.0 + sigma * z0;
                    if i + 1 < n {
                        y[i + 1] = -1.0 + sigma * z1;
                    }
                    i += 2;
                }
                // a word can only reach M >= 0 through a positive sample
                if y[..n].iter().all(|&v| v < 0.0) {
                    continue;
                }
                for j in 0..chunks {
                    let t = &mut tables[256 * j..256 * (j + 1)];
                    t[0] = 0.0;
                    for v in 1usize..256 {
                        let low = v.trailing_zeros() as usize;
                        let pos = 8 * j + low;
                        let yv = if pos < n { y[pos] } else { 0.0 };
                        t[v] = t[v & (v - 1)] + yv;
                    }
                }
                let mut best = f64::NEG_INFINITY;
                let mut arg = usize::MAX;
                for (idx, wb) in bytes.chunks_exact(chunks).enumerate() {
                    let mut m = 0.0;
                    for (j, &byte) in wb.iter().enumerate() {
                        m += tables[256 * j + byte as usize];
                    }
                    if m > best || (m == best && lex[idx] < lex[arg]) {
                        best = m;
                        arg = idx;
                    }
                }
                if best >= 0.0 {
                    errs += 1;
                    bits += u64::from(info_weight[arg]);
                }
            }
            (errs, bits)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let t = trials as f64;
    let pe = block_errors as f64 / t;
    let pb = bit_errors as f64 / (t * k as f64);
    Ok(SimResult {
        trials,
        block_errors,
        bit_errors,
        pe_hat: pe,
        pb_hat: pb,
        stderr_pe: (pe * (1.0 - pe) / t).sqrt(),
        stderr_pb: (pb * (1.0 - pb) / (t * k as f64)).sqrt(),
        seed,
    })
}

fn box_muller<R: Rng>(rng: &mut R) -> (f64, f64) {
    // u1 in (0, 1] keeps the logarithm finite
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random::<f64>();
    let r = (-2.0 * u1.ln()).sqrt();
    let t = 2.0 * std::f64::consts::PI * u2;
    (r * t.cos(), r * t.sin())
}
