//! Turns a `[code]` section into spectra.

use std::collections::{BTreeMap, HashSet};
use std::fs::File;
use std::io::BufReader;

use mlbound::expurgation::{trivial_expurgate, zero_neighbors, Codebook};
use mlbound::numerics::LogValue;
use mlbound::spectrum::{
    binomial_reference, enumerate_iowef, expurgated_random_spectrum, hamming_wef_closed_form,
    read_iowef, read_spectrum, random_systematic_turbo_iowef, turbo_combine, DistanceSpectrum,
    GeneratorMatrix, Iowef, WeightProfile,
};

use crate::config::{CodeSpec, Expurgation, Kind, Named, SweepConfig};
use crate::error::{CliError, Result};

pub struct Code {
    pub spec: DistanceSpectrum,
    pub iowef: Option<Iowef>,
    pub generator: Option<GeneratorMatrix>,
}

fn need<T: Copy>(v: Option<T>, what: &str, kind: &str) -> Result<T> {
    v.ok_or_else(|| CliError::Config(format!("`{kind}` needs `{what}`")))
}

fn generator(c: &CodeSpec, kind: &str) -> Result<GeneratorMatrix> {
    match (&c.generator, c.named) {
        (Some(rows), None) => GeneratorMatrix::from_strings(rows).map_err(CliError::config),
        (None, Some(named)) => {
            let g = match named {
                Named::Hamming => GeneratorMatrix::hamming(need(c.m, "m", kind)?),
                Named::ExtendedHamming => GeneratorMatrix::extended_hamming(need(c.m, "m", kind)?),
                Named::Golay23 => Ok(GeneratorMatrix::golay23()),
                Named::Golay24 => Ok(GeneratorMatrix::golay24()),
                Named::Repetition => GeneratorMatrix::repetition(need(c.n, "n", kind)?),
                Named::ParityCheck => GeneratorMatrix::single_parity_check(need(c.n, "n", kind)?),
            };
            g.map_err(CliError::config)
        }
        _ => Err(CliError::Config(format!("`{kind}` needs exactly one of `generator` or `named`"))),
    }
}

/// Total count must stay `2^K` through enumeration and interleaving.
fn check_total(io: &Iowef) -> Result<()> {
    let want = io.k_dim() as f64 * std::f64::consts::LN_2;
    let got = io.ln_total();
    if (got - want).abs() > 1e-9 * want.max(1.0) {
        return Err(CliError::Numerical(format!(
            "IOWEF total e^{got} differs from 2^{}",
            io.k_dim()
        )));
    }
    Ok(())
}

pub fn build(cfg: &SweepConfig) -> Result<Code> {
    let c = &cfg.code;
    let mut code = match c.kind {
        Kind::Exhaustive => {
            let g = generator(c, "exhaustive")?;
            let io = enumerate_iowef(&g).map_err(CliError::config)?;
            check_total(&io)?;
            Code {
                spec: io.marginal(),
                iowef: Some(io),
                generator: Some(g),
            }
        }
        Kind::TurboCombine => {
            let g = generator(c, "turbo-combine")?;
            let copies = need(c.copies, "copies", "turbo-combine")?;
            if copies == 0 {
                return Err(CliError::Config("`copies` must be at least 1".into()));
            }
            let comp = enumerate_iowef(&g).map_err(CliError::config)?;
            let io = turbo_combine(&vec![comp; copies], g.k()).map_err(CliError::config)?;
            check_total(&io)?;
            Code {
                spec: io.marginal(),
                iowef: Some(io),
                generator: None,
            }
        }
        Kind::RandomSystematicTurbo => {
            let n = need(c.n, "n", "random-systematic-turbo")?;
            let k = need(c.k, "k", "random-systematic-turbo")?;
            let io = random_systematic_turbo_iowef(n, k).map_err(CliError::config)?;
            check_total(&io)?;
            Code {
                spec: io.marginal(),
                iowef: Some(io),
                generator: None,
            }
        }
        Kind::HammingClosedForm => Code {
            spec: hamming_wef_closed_form(need(c.m, "m", "hamming-closed-form")?).map_err(CliError::config)?,
            iowef: None,
            generator: None,
        },
        Kind::ExpurgatedRandom => {
            let n = need(c.n, "n", "expurgated-random")?;
            let k = need(c.k, "k", "expurgated-random")?;
            Code {
                spec: expurgated_random_spectrum(n, k).map_err(CliError::config)?,
                iowef: None,
                generator: None,
            }
        }
        Kind::BinomialReference => {
            let n = need(c.n, "n", "binomial-reference")?;
            let rate = match (c.rate, c.k) {
                (Some(r), None) => r,
                (None, Some(k)) => k as f64 / n as f64,
                _ => return Err(CliError::Config("`binomial-reference` needs exactly one of `rate` or `k`".into())),
            };
            Code {
                spec: binomial_reference(n, rate).map_err(CliError::config)?,
                iowef: None,
                generator: None,
            }
        }
        Kind::File => {
            let path = cfg.resolve(c.path.as_ref().ok_or_else(|| CliError::Config("`file` needs `path`".into()))?);
            let open = || {
                File::open(&path)
                    .map(BufReader::new)
                    .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
            };
            match read_iowef(open()?) {
                Ok(io) => Code {
                    spec: io.marginal(),
                    iowef: Some(io),
                    generator: None,
                },
                Err(_) => Code {
                    spec: read_spectrum(open()?).map_err(CliError::config)?,
                    iowef: None,
                    generator: None,
                },
            }
        }
    };
    expurgate(&mut code, c.expurgation)?;
    Ok(code)
}

fn expurgate(code: &mut Code, how: Expurgation) -> Result<()> {
    match how {
        Expurgation::None => {}
        Expurgation::Trivial => {
            let n = code.spec.n();
            code.spec = trivial_expurgate(&code.spec, n, code.spec.rate()).map_err(CliError::config)?;
            if let Some(io) = &code.iowef {
                let keep: BTreeMap<(usize, usize), LogValue> =
                    io.iter().filter(|&((_, l), _)| !code.spec.a(l).is_zero()).collect();
                code.iowef = Some(Iowef::new(io.n(), io.k_dim(), keep).map_err(CliError::config)?);
            }
        }
        Expurgation::Neighbors => {
            let g = code
                .generator
                .as_ref()
                .ok_or_else(|| CliError::Config("neighbor expurgation needs a generator matrix".into()))?;
            let cb = Codebook::from_generator(g).map_err(CliError::config)?;
            let nb: HashSet<u128> = cb.neighbors().into_iter().collect();
            let mut counts: BTreeMap<(usize, usize), f64> = BTreeMap::new();
            counts.insert((0, 0), 1.0);
            for (u, w) in cb.words().iter().enumerate() {
                if nb.contains(w) {
                    *counts.entry((u.count_ones() as usize, w.count_ones() as usize)).or_default() += 1.0;
                }
            }
            let entries = counts.into_iter().map(|(key, c)| (key, LogValue::from_f64(c))).collect();
            code.iowef = Some(Iowef::new(g.n(), g.k(), entries).map_err(CliError::config)?);
            code.spec = zero_neighbors(&cb);
        }
    }
    Ok(())
}
