//! Systematic generator matrices, a few classical codes, and exhaustive
//! IOWEF enumeration.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::Iowef;
use crate::error::{Error, Result};
use crate::numerics::LogValue;

/// Largest dimension accepted by [`enumerate_iowef`].
pub const MAX_ENUMERATION_K: usize = 28;

/// A `K × N` binary generator matrix in systematic `[I | P]` form.
///
/// Row `i` is stored as a `u128` whose bit `j` is the entry in column `j`,
/// so `N ≤ 128`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorMatrix {
    n: usize,
    rows: Vec<u128>,
}

impl GeneratorMatrix {
    /// Checks the shape and the leading identity block.
    pub fn new(n: usize, rows: Vec<u128>) -> Result<Self> {
        let k = rows.len();
        if n == 0 || n > 128 {
            return Err(Error::Size(format!("code length {n} (supported: 1..=128)")));
        }
        if k == 0 || k > n {
            return Err(Error::Input(format!("{k} rows for length {n}")));
        }
        let mask = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
        let id_mask = if k == 128 { u128::MAX } else { (1u128 << k) - 1 };
        for (i, &r) in rows.iter().enumerate() {
            if r & !mask != 0 {
                return Err(Error::Input(format!("row {i} has entries beyond column {n}")));
            }
            if r & id_mask != 1u128 << i {
                return Err(Error::Input(
                    "generator matrix is not in systematic [I | P] form".into(),
                ));
            }
        }
        Ok(GeneratorMatrix { n, rows })
    }

    /// Parses rows written as strings of `0`/`1`, column 0 first.
    pub fn from_strings<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let n = rows.first().map(|r| r.as_ref().trim().len()).unwrap_or(0);
        let mut out = Vec::with_capacity(rows.len());
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref().trim();
            if r.len() != n {
                return Err(Error::Input(format!("row {i} has length {}, expected {n}", r.len())));
            }
            let mut v = 0u128;
            for (j, ch) in r.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => v |= 1u128 << j,
                    _ => return Err(Error::Input(format!("bad symbol {ch:?} in row {i}"))),
                }
            }
            out.push(v);
        }
        Self::new(n, out)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[u128] {
        &self.rows
    }

    /// Codeword for the information word whose bit `i` is `u >> i & 1`.
    pub fn encode(&self, u: u64) -> u128 {
        let mut c = 0u128;
        let mut u = u;
        while u != 0 {
            let i = u.trailing_zeros() as usize;
            c ^= self.rows[i];
            u &= u - 1;
        }
        c
    }

    /// All `2^K` codewords, indexed by information word.
    pub fn codewords(&self) -> Result<Vec<u128>> {
        if self.k() > 24 {
            return Err(Error::Size(format!("2^{} codewords", self.k())));
        }
        let mut words = vec![0u128; 1 << self.k()];
        for u in 1..words.len() {
            let b = u.trailing_zeros() as usize;
            words[u] = words[u & (u - 1)] ^ self.rows[b];
        }
        Ok(words)
    }

    /// `[I_K | P]` from the `K × (N-K)` parity part, rows as bit strings.
    fn from_parity(n: usize, parity: &[u128]) -> Self {
        let k = parity.len();
        let rows = parity
            .iter()
            .enumerate()
            .map(|(i, &p)| (1u128 << i) | (p << k))
            .collect();
        GeneratorMatrix::new(n, rows).expect("systematic by construction")
    }

    /// The `(2^m - 1, 2^m - m - 1)` Hamming code, `2 ≤ m ≤ 7`.
    pub fn hamming(m: usize) -> Result<Self> {
        if !(2..=7).contains(&m) {
            return Err(Error::Domain(format!("Hamming parameter m = {m} (supported: 2..=7)")));
        }
        let n = (1usize << m) - 1;
        // parity-check columns of weight >= 2 become the rows of P
        let parity: Vec<u128> = (1u128..=n as u128).filter(|c| c.count_ones() >= 2).collect();
        Ok(Self::from_parity(n, &parity))
    }

    /// Hamming code extended by an overall parity bit.
    pub fn extended_hamming(m: usize) -> Result<Self> {
        let h = Self::hamming(m)?;
        Ok(h.extended())
    }

    /// Appends an overall parity column.
    pub fn extended(&self) -> Self {
        let n = self.n + 1;
        let rows = self
            .rows
            .iter()
            .map(|&r| r | (u128::from(r.count_ones() % 2 == 1) << self.n))
            .collect();
        GeneratorMatrix::new(n, rows).expect("extension keeps systematic form")
    }

    /// The `(n, 1)` repetition code.
    pub fn repetition(n: usize) -> Result<Self> {
        if n == 0 || n > 128 {
            return Err(Error::Size(format!("repetition length {n}")));
        }
        let row = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
        Self::new(n, vec![row])
    }

    /// The `(n, n - 1)` single-parity-check code.
    pub fn single_parity_check(n: usize) -> Result<Self> {
        if n < 2 || n > 128 {
            return Err(Error::Size(format!("single-parity-check length {n}")));
        }
        Ok(Self::from_parity(n, &vec![1u128; n - 1]))
    }

    /// The `(n, n)` code containing every vector.
    pub fn identity(n: usize) -> Result<Self> {
        Self::new(n, (0..n).map(|i| 1u128 << i).collect())
    }

    /// The `(23, 12)` binary Golay code.
    pub fn golay23() -> Self {
        // g(x) = x^11 + x^10 + x^6 + x^5 + x^4 + x^2 + 1
        let g: u32 = 0b1100_0111_0101;
        let parity: Vec<u128> = (0..12)
            .map(|i| {
                let mut r: u32 = 1 << (11 + i);
                for d in (11..=22).rev() {
                    if r >> d & 1 == 1 {
                        r ^= g << (d - 11);
                    }
                }
                u128::from(r)
            })
            .collect();
        Self::from_parity(23, &parity)
    }

    /// The `(24, 12)` extended Golay code.
    pub fn golay24() -> Self {
        Self::golay23().extended()
    }
}

/// Exhaustive `{A_{w,l}}` over all `2^K` information words.
pub fn enumerate_iowef(gen: &GeneratorMatrix) -> Result<Iowef> {
    let k = gen.k();
    let n = gen.n();
    if k > MAX_ENUMERATION_K {
        return Err(Error::Size(format!(
            "K = {k} exceeds the enumeration limit {MAX_ENUMERATION_K}"
        )));
    }
    let hi_bits = k.min(8);
    let lo_bits = k - hi_bits;
    let width = n + 1;
    let counts = (0u64..1 << hi_bits)
        .into_par_iter()
        .map(|hi| {
            let mut local = vec![0u64; (k + 1) * width];
            let mut u = hi << lo_bits;
            let mut c = gen.encode(u);
            local[u.count_ones() as usize * width + c.count_ones() as usize] += 1;
            // Gray-code walk over the low bits
            for i in 1u64..1 << lo_bits {
                let b = i.trailing_zeros() as usize;
                u ^= 1 << b;
                c ^= gen.rows[b];
                local[u.count_ones() as usize * width + c.count_ones() as usize] += 1;
            }
            local
        })
        .reduce(
            || vec![0u64; (k + 1) * width],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    let mut entries = BTreeMap::new();
    for w in 0..=k {
        for l in 0..=n {
            let c = counts[w * width + l];
            if c > 0 {
                entries.insert((w, l), LogValue::from_f64(c as f64));
            }
        }
    }
    Iowef::new(n, k, entries)
}
