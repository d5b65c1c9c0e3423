use std::io::Write;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};

use mlbound::bounds::{
    msfb, partition_algorithm1, serial_rs_bound, sfb, simplified_ds2, tsb, union_bound,
    Algorithm1Options, BoundResult, Head, Mode, Partition, Tail, TsbOptions,
};
use mlbound::channel::ChannelParams;
use mlbound::expurgation::Codebook;
use mlbound::simulator::simulate_ml;
use mlbound::spectrum::{
    binomial_reference, bit_spectrum, spectrum_ratio, write_iowef, write_spectrum, BitSpectrum,
    WeightProfile,
};

use crate::build::{build, Code};
use crate::config::{BoundName, BoundSpec, Format, HeadName, ModeName, SweepConfig, TailName};
use crate::error::{CliError, Result};

/// Flags that override the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
}

struct Target {
    path: Option<PathBuf>,
    format: Format,
}

fn target(cfg: &SweepConfig, ov: &Overrides) -> Target {
    Target {
        path: ov.out.clone().or_else(|| cfg.output.path.as_ref().map(|p| cfg.resolve(p))),
        format: ov.format.or(cfg.output.format).unwrap_or_default(),
    }
}

fn emit(t: &Target, bytes: &[u8]) -> Result<()> {
    match &t.path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| CliError::Config(format!("{}: {e}", p.display()))),
        None => std::io::stdout().write_all(bytes).map_err(CliError::config),
    }
}

fn csv_bytes(header: &[String], rows: &[Vec<String>]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(CliError::config)?;
    for r in rows {
        w.write_record(r).map_err(CliError::config)?;
    }
    w.into_inner().map_err(CliError::config)
}

fn json_bytes<T: Serialize>(v: &T) -> Result<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(v).map_err(CliError::config)?;
    out.push(b'\n');
    Ok(out)
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

// ---------------------------------------------------------------------------

pub fn cmd_spectrum(cfg: &SweepConfig, ov: &Overrides) -> Result<()> {
    let code = build(cfg)?;
    let t = target(cfg, ov);
    let spec = &code.spec;
    let bytes = match t.format {
        Format::Csv => {
            let mut out = Vec::new();
            writeln!(out, "# ln_total {:?}", spec.ln_total()).map_err(CliError::config)?;
            match &code.iowef {
                Some(io) => write_iowef(io, &mut out),
                None => write_spectrum(spec, &mut out),
            }
            .map_err(CliError::config)?;
            out
        }
        Format::Json => {
            let a: Vec<Value> = spec
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(l, v)| json!({ "l": l, "ln_a": v.ln_abs() }))
                .collect();
            let mut doc = json!({ "n": spec.n(), "rate": spec.rate(), "ln_total": spec.ln_total(), "spectrum": a });
            if let Some(io) = &code.iowef {
                let rows: Vec<Value> = io
                    .iter()
                    .map(|((w, l), v)| json!({ "w": w, "l": l, "ln_a": v.ln_abs() }))
                    .collect();
                doc["k"] = json!(io.k_dim());
                doc["iowef"] = Value::Array(rows);
            }
            json_bytes(&doc)?
        }
    };
    emit(&t, &bytes)?;

    if let Some(p) = &cfg.output.ratio_table {
        if spec.rate() >= 1.0 {
            return Err(CliError::Config("ratio table needs rate < 1".into()));
        }
        let reference = binomial_reference(spec.n(), spec.rate()).map_err(CliError::config)?;
        let ratios = spectrum_ratio(spec, &reference).map_err(CliError::numerical)?;
        let n = spec.n() as f64;
        let rows: Vec<Vec<String>> = ratios
            .iter()
            .map(|&(l, r)| vec![l.to_string(), (l as f64 / n).to_string(), (r / std::f64::consts::LN_10).to_string()])
            .collect();
        let header = ["l", "l_over_n", "log10_ratio"].map(String::from);
        let p = cfg.resolve(p);
        std::fs::write(&p, csv_bytes(&header, &rows)?).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
struct Row {
    ebno_db: f64,
    bound: String,
    value: f64,
    log10_value: f64,
    rho_opt: Option<f64>,
    tsb_radius: Option<f64>,
    partition_max_u: Option<usize>,
}

const BOUND_HEADER: [&str; 7] = [
    "ebno_db",
    "bound",
    "value",
    "log10_value",
    "rho_opt",
    "tsb_radius",
    "partition_max_u",
];

/// Es/N0 is set by the rate of the whole chain, inner times outer.
fn system_rate(cfg: &SweepConfig, code: &Code) -> f64 {
    let r = code.spec.rate();
    match cfg.outer {
        Some(o) => r * o.k as f64 / o.n as f64,
        None => r,
    }
}

fn check_bounds(cfg: &SweepConfig, code: &Code) -> Result<()> {
    if cfg.bounds.is_empty() {
        return Err(CliError::Config("no [[bound]] entries".into()));
    }
    let n = code.spec.n();
    for b in &cfg.bounds {
        if b.mode == ModeName::Bit && code.iowef.is_none() {
            return Err(CliError::Config(format!(
                "bit bound `{}` needs an IOWEF; this code kind gives only a distance spectrum",
                b.label()
            )));
        }
        if let Some(u) = &b.u {
            Partition::new(n, u.iter().copied()).map_err(CliError::config)?;
        }
        let tsb_used = b.name == BoundName::Tsb
            || b.inner == Some(BoundName::Tsb)
            || (b.name == BoundName::Combined && b.tail != Some(TailName::Union));
        if tsb_used && n < 3 {
            return Err(CliError::Config(format!("the TSB needs N >= 3, got {n}")));
        }
        if b.threshold.is_some_and(|t| !(t > 0.0)) {
            return Err(CliError::Config("threshold must be positive".into()));
        }
    }
    Ok(())
}

fn simple<P: WeightProfile + ?Sized>(
    name: BoundName,
    p: &P,
    ch: &ChannelParams,
    u: Option<&Partition>,
) -> mlbound::Result<BoundResult> {
    match name {
        BoundName::Union => union_bound(p, ch),
        BoundName::Sfb => sfb(p, ch, u),
        BoundName::Msfb => msfb(p, ch, u),
        BoundName::Ds2 => simplified_ds2(p, ch, u),
        BoundName::Tsb => tsb(p, ch, &TsbOptions::default()),
        BoundName::Combined | BoundName::SerialRs => unreachable!("handled by the caller"),
    }
}

fn evaluate(
    b: &BoundSpec,
    code: &Code,
    bits: Option<&BitSpectrum>,
    ch: &ChannelParams,
    cfg: &SweepConfig,
) -> mlbound::Result<BoundResult> {
    let n = code.spec.n();
    let u = b.u.as_ref().map(|u| Partition::new(n, u.iter().copied())).transpose()?;
    let bit = b.mode == ModeName::Bit;
    match b.name {
        BoundName::Combined => {
            let opts = Algorithm1Options {
                threshold: b.threshold,
                head: b.head.map(|h| match h {
                    HeadName::Sfb => Head::Sfb,
                    HeadName::Msfb => Head::Msfb,
                    HeadName::Ds2 => Head::Ds2,
                }),
                tail: match b.tail {
                    Some(TailName::Union) => Tail::Union,
                    _ => Tail::Tsb,
                },
                tsb: TsbOptions::default(),
            };
            let mode = match bits {
                Some(bs) if bit => Mode::Bit(bs),
                _ => Mode::Block(&code.spec),
            };
            partition_algorithm1(mode, ch, &opts)
        }
        BoundName::SerialRs => {
            let outer = cfg.outer.expect("validated");
            let inner = simple(b.inner.expect("validated"), &code.spec, ch, None)?;
            let v = serial_rs_bound(inner.value.min(1.0), outer.n, outer.t)?;
            let mut r = inner.clone();
            r.value = v;
            r.ln_value = v.ln();
            Ok(r)
        }
        name => match bits {
            Some(bs) if bit => simple(name, bs, ch, u.as_ref()),
            _ => simple(name, &code.spec, ch, u.as_ref()),
        },
    }
}

pub fn cmd_bounds(cfg: &SweepConfig, ov: &Overrides) -> Result<()> {
    let sweep = cfg.sweep.ok_or_else(|| CliError::Config("missing [sweep] section".into()))?;
    let code = build(cfg)?;
    check_bounds(cfg, &code)?;
    let bits = code.iowef.as_ref().map(bit_spectrum);
    let rate = system_rate(cfg, &code);
    let points = sweep.points();

    let per_point: Vec<Result<Vec<Row>>> = points
        .par_iter()
        .map(|&db| {
            let ch = ChannelParams::from_ebno_db(db, rate).map_err(CliError::config)?;
            cfg.bounds
                .iter()
                .map(|b| {
                    let r = evaluate(b, &code, bits.as_ref(), &ch, cfg)
                        .map_err(|e| CliError::Numerical(format!("{} at {db} dB: {e}", b.label())))?;
                    Ok(Row {
                        ebno_db: db,
                        bound: b.label(),
                        value: r.value,
                        log10_value: r.value.log10(),
                        rho_opt: r.rho_opt,
                        tsb_radius: r.tsb_radius_opt,
                        partition_max_u: r.partition.as_ref().and_then(|p| p.max_u()),
                    })
                })
                .collect()
        })
        .collect();
    let mut rows = Vec::new();
    for r in per_point {
        rows.extend(r?);
    }

    let t = target(cfg, ov);
    let bytes = match t.format {
        Format::Csv => {
            let header: Vec<String> = BOUND_HEADER.iter().map(|s| s.to_string()).collect();
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.ebno_db.to_string(),
                        r.bound.clone(),
                        r.value.to_string(),
                        r.log10_value.to_string(),
                        opt(r.rho_opt),
                        opt(r.tsb_radius),
                        opt(r.partition_max_u),
                    ]
                })
                .collect();
            csv_bytes(&header, &body)?
        }
        Format::Json => json_bytes(&rows)?,
    };
    emit(&t, &bytes)
}

// ---------------------------------------------------------------------------

pub fn cmd_simulate(cfg: &SweepConfig, ov: &Overrides) -> Result<()> {
    let sweep = cfg.sweep.ok_or_else(|| CliError::Config("missing [sweep] section".into()))?;
    let sim = cfg.simulate.ok_or_else(|| CliError::Config("missing [simulate] section".into()))?;
    if sim.trials == 0 {
        return Err(CliError::Config("trials must be positive".into()));
    }
    if cfg.outer.is_some() {
        return Err(CliError::Config("simulation of serial concatenation is not supported".into()));
    }
    let seed = ov.seed.or(sim.seed).unwrap_or(1);
    let code = build(cfg)?;
    let g = code
        .generator
        .as_ref()
        .ok_or_else(|| CliError::Config("simulation needs an `exhaustive` code with a generator".into()))?;
    if cfg.code.expurgation != crate::config::Expurgation::None {
        return Err(CliError::Config("simulation runs on the full code; drop `expurgation`".into()));
    }
    let cb = Codebook::from_generator(g).map_err(CliError::config)?;
    if !cfg.bounds.is_empty() {
        check_bounds(cfg, &code)?;
    }
    let bits = code.iowef.as_ref().map(bit_spectrum);
    let rate = code.spec.rate();

    let per_point: Vec<Result<Vec<String>>> = sweep
        .points()
        .par_iter()
        .map(|&db| {
            let ch = ChannelParams::from_ebno_db(db, rate).map_err(CliError::config)?;
            let r = simulate_ml(&cb, &ch, sim.trials, seed).map_err(CliError::config)?;
            let mut row = vec![
                db.to_string(),
                r.trials.to_string(),
                r.block_errors.to_string(),
                r.pe_hat.to_string(),
                r.stderr_pe.to_string(),
                r.bit_errors.to_string(),
                r.pb_hat.to_string(),
                r.stderr_pb.to_string(),
            ];
            for b in &cfg.bounds {
                let v = evaluate(b, &code, bits.as_ref(), &ch, cfg)
                    .map_err(|e| CliError::Numerical(format!("{} at {db} dB: {e}", b.label())))?;
                row.push(v.value.to_string());
            }
            Ok(row)
        })
        .collect();
    let mut rows = Vec::new();
    for r in per_point {
        rows.push(r?);
    }
    let mut header: Vec<String> = [
        "ebno_db",
        "trials",
        "block_errors",
        "pe_hat",
        "pe_stderr",
        "bit_errors",
        "pb_hat",
        "pb_stderr",
    ]
    .map(String::from)
    .to_vec();
    header.extend(cfg.bounds.iter().map(|b| b.label()));

    let t = target(cfg, ov);
    let bytes = match t.format {
        Format::Csv => csv_bytes(&header, &rows)?,
        Format::Json => {
            let objs: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let mut m = Map::new();
                    for (h, v) in header.iter().zip(r) {
                        let num = v.parse::<f64>().map(Value::from).unwrap_or(Value::Null);
                        m.insert(h.clone(), num);
                    }
                    Value::Object(m)
                })
                .collect();
            json_bytes(&objs)?
        }
    };
    emit(&t, &bytes)
}
