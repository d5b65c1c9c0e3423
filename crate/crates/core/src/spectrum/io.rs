//! Plain-text spectrum files.
//!
//! A header line `N K` is followed by one `l ln_A_l` row per nonzero
//! coefficient (natural logs). IOWEF files use `w l ln_A_wl` rows. `K` may be
//! fractional for ensembles given only by a rate. Lines starting with `#` are
//! ignored.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use super::{DistanceSpectrum, Iowef, WeightProfile};
use crate::error::{Error, Result};
use crate::numerics::LogValue;

fn format_k(k_dim: Option<usize>, n: usize, rate: f64) -> String {
    match k_dim {
        Some(k) => k.to_string(),
        None => format!("{}", n as f64 * rate),
    }
}

pub fn write_spectrum<W: Write>(spec: &DistanceSpectrum, mut out: W) -> Result<()> {
    writeln!(out, "{} {}", spec.n(), format_k(spec.k_dim(), spec.n(), spec.rate()))?;
    for (l, v) in spec.coeffs().iter().enumerate() {
        if !v.is_zero() {
            writeln!(out, "{l} {:?}", v.ln_abs())?;
        }
    }
    Ok(())
}

pub fn write_iowef<W: Write>(io: &Iowef, mut out: W) -> Result<()> {
    writeln!(out, "{} {}", io.n(), io.k_dim())?;
    for ((w, l), v) in io.iter() {
        writeln!(out, "{w} {l} {:?}", v.ln_abs())?;
    }
    Ok(())
}

struct Parsed {
    n: usize,
    k: f64,
    rows: Vec<(usize, Vec<f64>)>,
}

fn parse<R: BufRead>(input: R, columns: usize) -> Result<Parsed> {
    let mut header: Option<(usize, f64)> = None;
    let mut rows = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = t.split_whitespace().collect();
        let perr = |msg: String| Error::Parse { line: lineno, msg };
        match header {
            None => {
                if fields.len() != 2 {
                    return Err(perr(format!("expected header `N K`, got {t:?}")));
                }
                let n = fields[0]
                    .parse::<usize>()
                    .map_err(|e| perr(format!("bad N: {e}")))?;
                let k = fields[1]
                    .parse::<f64>()
                    .map_err(|e| perr(format!("bad K: {e}")))?;
                header = Some((n, k));
            }
            Some(_) => {
                if fields.len() != columns {
                    return Err(perr(format!("expected {columns} columns, got {}", fields.len())));
                }
                let mut vals = Vec::with_capacity(columns);
                for f in &fields {
                    vals.push(f.parse::<f64>().map_err(|e| perr(format!("bad number {f:?}: {e}")))?);
                }
                rows.push((lineno, vals));
            }
        }
    }
    let (n, k) = header.ok_or(Error::Parse {
        line: 0,
        msg: "missing header".into(),
    })?;
    Ok(Parsed { n, k, rows })
}

fn index(v: f64, line: usize, max: usize) -> Result<usize> {
    if v < 0.0 || v.fract() != 0.0 || v > max as f64 {
        return Err(Error::Parse {
            line,
            msg: format!("index {v} out of range 0..={max}"),
        });
    }
    Ok(v as usize)
}

pub fn read_spectrum<R: BufRead>(input: R) -> Result<DistanceSpectrum> {
    let p = parse(input, 2)?;
    let mut a = vec![LogValue::ZERO; p.n + 1];
    for (line, vals) in &p.rows {
        let l = index(vals[0], *line, p.n)?;
        a[l] = LogValue::from_ln(vals[1]);
    }
    let k_dim = (p.k.fract() == 0.0).then_some(p.k as usize);
    DistanceSpectrum::new(p.n, k_dim, p.k / p.n as f64, a)
}

pub fn read_iowef<R: BufRead>(input: R) -> Result<Iowef> {
    let p = parse(input, 3)?;
    if p.k.fract() != 0.0 {
        return Err(Error::Parse {
            line: 1,
            msg: "IOWEF needs an integer K".into(),
        });
    }
    let k = p.k as usize;
    let mut entries = BTreeMap::new();
    for (line, vals) in &p.rows {
        let w = index(vals[0], *line, k)?;
        let l = index(vals[1], *line, p.n)?;
        entries.insert((w, l), LogValue::from_ln(vals[2]));
    }
    Iowef::new(p.n, k, entries)
}
