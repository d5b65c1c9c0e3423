//! Sweep configuration, read from TOML.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Deserialize;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub code: CodeSpec,
    /// Optional Reed–Solomon outer code for serial concatenation.
    pub outer: Option<OuterSpec>,
    pub sweep: Option<Sweep>,
    #[serde(default, rename = "bound")]
    pub bounds: Vec<BoundSpec>,
    pub simulate: Option<SimSpec>,
    #[serde(default)]
    pub output: OutputSpec,
    /// Directory of the config file; relative paths resolve against it.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Exhaustive,
    HammingClosedForm,
    TurboCombine,
    RandomSystematicTurbo,
    ExpurgatedRandom,
    BinomialReference,
    File,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Named {
    Hamming,
    ExtendedHamming,
    Golay23,
    Golay24,
    Repetition,
    ParityCheck,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expurgation {
    #[default]
    None,
    /// Drop every weight above `N(1-R) + 1`.
    Trivial,
    /// Keep only the zero word's neighbors (needs a generator matrix).
    Neighbors,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeSpec {
    pub kind: Kind,
    /// Generator rows as 0/1 strings.
    pub generator: Option<Vec<String>>,
    pub named: Option<Named>,
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub rate: Option<f64>,
    /// Number of components for `turbo-combine`.
    pub copies: Option<usize>,
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub expurgation: Expurgation,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OuterSpec {
    pub n: usize,
    pub k: usize,
    pub t: usize,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub ebno_db_start: f64,
    pub ebno_db_stop: f64,
    pub ebno_db_step: f64,
}

impl Sweep {
    pub fn points(&self) -> Vec<f64> {
        let count = ((self.ebno_db_stop - self.ebno_db_start) / self.ebno_db_step + 1e-9).floor() as usize;
        (0..=count)
            .map(|i| ((self.ebno_db_start + i as f64 * self.ebno_db_step) * 1e12).round() / 1e12)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundName {
    Union,
    Sfb,
    Msfb,
    Ds2,
    Tsb,
    Combined,
    SerialRs,
}

impl BoundName {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundName::Union => "union",
            BoundName::Sfb => "sfb",
            BoundName::Msfb => "msfb",
            BoundName::Ds2 => "ds2",
            BoundName::Tsb => "tsb",
            BoundName::Combined => "combined",
            BoundName::SerialRs => "serial-rs",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeName {
    #[default]
    Block,
    Bit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HeadName {
    Sfb,
    Msfb,
    Ds2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TailName {
    Union,
    Tsb,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundSpec {
    pub name: BoundName,
    #[serde(default)]
    pub mode: ModeName,
    pub threshold: Option<f64>,
    pub head: Option<HeadName>,
    pub tail: Option<TailName>,
    /// Weight set for sfb/msfb/ds2; all of `1..=N` when absent.
    pub u: Option<Vec<usize>>,
    /// Inner bound of `serial-rs`.
    pub inner: Option<BoundName>,
}

impl BoundSpec {
    pub fn label(&self) -> String {
        let mut s = self.name.as_str().to_string();
        let mut opts = Vec::new();
        if let Some(h) = self.head {
            opts.push(format!("head={}", format!("{h:?}").to_lowercase()));
        }
        if let Some(t) = self.tail {
            opts.push(format!("tail={}", format!("{t:?}").to_lowercase()));
        }
        if let Some(t) = self.threshold {
            opts.push(format!("threshold={t}"));
        }
        if !opts.is_empty() {
            s = format!("{s}[{}]", opts.join(";"));
        }
        if let Some(inner) = self.inner {
            s = format!("{s}/{}", inner.as_str());
        }
        if self.mode == ModeName::Bit {
            s.push_str("-bit");
        }
        s
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimSpec {
    pub trials: u64,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    pub format: Option<Format>,
    /// Where `spectrum` writes the `l, l/N, log10(A_l/B_l)` table.
    pub ratio_table: Option<PathBuf>,
}

impl SweepConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let mut cfg: SweepConfig = toml::from_str(&text).map_err(CliError::config)?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    fn validate(&self) -> Result<()> {
        if let Some(s) = &self.sweep {
            if !(s.ebno_db_step > 0.0) {
                return Err(CliError::Config(format!("ebno_db_step = {} must be positive", s.ebno_db_step)));
            }
            if !(s.ebno_db_start <= s.ebno_db_stop) || !s.ebno_db_stop.is_finite() {
                return Err(CliError::Config(format!(
                    "ebno_db_start = {} exceeds ebno_db_stop = {}",
                    s.ebno_db_start, s.ebno_db_stop
                )));
            }
        }
        if let Some(o) = &self.outer {
            if o.k == 0 || o.k > o.n || o.t >= o.n {
                return Err(CliError::Config(format!("outer code ({}, {}) with t = {}", o.n, o.k, o.t)));
            }
        }
        for b in &self.bounds {
            let combined_opts = b.threshold.is_some() || b.head.is_some() || b.tail.is_some();
            if combined_opts && b.name != BoundName::Combined {
                return Err(CliError::Config(format!(
                    "threshold/head/tail apply only to `combined`, not `{}`",
                    b.name.as_str()
                )));
            }
            if b.u.is_some() && !matches!(b.name, BoundName::Sfb | BoundName::Msfb | BoundName::Ds2) {
                return Err(CliError::Config(format!("`u` does not apply to `{}`", b.name.as_str())));
            }
            match (b.name, b.inner) {
                (BoundName::SerialRs, None) => {
                    return Err(CliError::Config("`serial-rs` needs an `inner` bound".into()))
                }
                (BoundName::SerialRs, Some(BoundName::SerialRs | BoundName::Combined)) => {
                    return Err(CliError::Config("`serial-rs` inner bound must be union, sfb, msfb, ds2 or tsb".into()))
                }
                (BoundName::SerialRs, Some(_)) => {
                    if self.outer.is_none() {
                        return Err(CliError::Config("`serial-rs` needs an [outer] section".into()));
                    }
                    if b.mode == ModeName::Bit {
                        return Err(CliError::Config("`serial-rs` is a block bound".into()));
                    }
                }
                (_, Some(_)) => {
                    return Err(CliError::Config("`inner` applies only to `serial-rs`".into()))
                }
                _ => {}
            }
        }
        Ok(())
    }
}
