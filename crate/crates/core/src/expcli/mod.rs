//! Experiment presets: declarative configs, the theory + Monte Carlo +
//! statistics pipeline over a grid of cells, and deterministic output files.
//!
//! Config files are flat `key=value` text with `#` comments and
//! comma-separated lists:
//!
//! ```text
//! preset=misspec_table
//! theta=0.1
//! theta_prime=0.1,1,10
//! sample_sizes=101,251,401
//! replicates=20        # default 20
//! seed=0               # default 0
//! profile=consistent   # or paper_verbatim
//! output_dir=results
//! ```
//!
//! Other keys: `families_true`, `families_used`. Unknown keys, malformed
//! lines and unknown names are parse errors; missing or out-of-range values
//! are validation errors naming the field.

pub mod cli;
mod output;

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::simulate::run_monte_carlo_paired;
use crate::spectral::{CovarianceModel, Family, GridDesign, Profile};
use crate::stats::{summarize, wilcoxon_signed_rank};
use crate::theory::{misspec_error, QuadratureSpec};

pub use output::{emit_results, parse_results_csv, CSV_HEADER};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    /// Matched kernels, error against sample size for several θ.
    MatchedSweep,
    /// One family, true θ against a list of used θ'.
    MisspecTable,
    /// Several families, each with its own list of used θ'.
    KernelFamilies,
    /// One true family predicted with several used families.
    WrongFamily,
    /// Theory values only, no simulation.
    TheoryCurve,
}

impl Preset {
    pub const ALL: [Preset; 5] = [
        Preset::MatchedSweep,
        Preset::MisspecTable,
        Preset::KernelFamilies,
        Preset::WrongFamily,
        Preset::TheoryCurve,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::MatchedSweep => "matched_sweep",
            Preset::MisspecTable => "misspec_table",
            Preset::KernelFamilies => "kernel_families",
            Preset::WrongFamily => "wrong_family",
            Preset::TheoryCurve => "theory_curve",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Preset::MatchedSweep => "matched kernels over theta and sample size (requires theta, sample_sizes)",
            Preset::MisspecTable => {
                "true theta against used theta_prime values (requires theta, theta_prime, sample_sizes)"
            }
            Preset::KernelFamilies => {
                "exponential, matern32 and squared exponential with theta=1, theta_prime=1,10 (requires sample_sizes)"
            }
            Preset::WrongFamily => {
                "true matern32 predicted with matern32, matern52 and exponential (requires sample_sizes)"
            }
            Preset::TheoryCurve => "theory values only over sample sizes (requires theta, sample_sizes)",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let key: String = s
            .trim()
            .chars()
            .filter(|c| *c != '_' && *c != '-')
            .collect::<String>()
            .to_ascii_lowercase();
        Preset::ALL
            .into_iter()
            .find(|p| p.name().replace('_', "") == key)
            .ok_or_else(|| format!("unknown preset `{}`", s.trim()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub preset: Preset,
    pub families_true: Vec<Family>,
    pub families_used: Vec<Family>,
    pub theta: Vec<f64>,
    pub theta_prime: Vec<f64>,
    pub sample_sizes: Vec<usize>,
    pub replicates: usize,
    pub seed: u64,
    pub profile: Profile,
    pub output_dir: PathBuf,
}

pub const DEFAULT_REPLICATES: usize = 20;
pub const DEFAULT_OUTPUT_DIR: &str = "results";

#[derive(Default)]
struct RawConfig {
    preset: Option<Preset>,
    families_true: Option<Vec<Family>>,
    families_used: Option<Vec<Family>>,
    theta: Option<Vec<f64>>,
    theta_prime: Option<Vec<f64>>,
    sample_sizes: Option<Vec<usize>>,
    replicates: Option<usize>,
    seed: Option<u64>,
    profile: Option<Profile>,
    output_dir: Option<PathBuf>,
}

fn parse_list<T>(line: usize, value: &str, item: impl Fn(&str) -> std::result::Result<T, String>) -> Result<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| item(s).map_err(|message| Error::Parse { line, message }))
        .collect()
}

fn parse_scalar<T: FromStr>(line: usize, key: &str, value: &str) -> Result<T> {
    value.trim().parse().map_err(|_| Error::Parse {
        line,
        message: format!("`{key}` expects a single value, got `{}`", value.trim()),
    })
}

fn number(s: &str) -> std::result::Result<f64, String> {
    s.parse::<f64>().map_err(|_| format!("`{s}` is not a number"))
}

fn count(s: &str) -> std::result::Result<usize, String> {
    s.parse::<usize>()
        .map_err(|_| format!("`{s}` is not a non-negative integer"))
}

fn family(s: &str) -> std::result::Result<Family, String> {
    s.parse::<Family>().map_err(|e| e.to_string())
}

impl ExperimentConfig {
    /// Parse and validate config text, applying defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut raw = RawConfig::default();
        for (index, full) in text.lines().enumerate() {
            let line = index + 1;
            let content = full.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| Error::Parse {
                line,
                message: format!("expected `key=value`, got `{content}`"),
            })?;
            let key = key.trim();
            let duplicate = || Error::Parse {
                line,
                message: format!("`{key}` given more than once"),
            };
            macro_rules! set {
                ($field:ident, $value:expr) => {{
                    if raw.$field.is_some() {
                        return Err(duplicate());
                    }
                    raw.$field = Some($value);
                }};
            }
            match key {
                "preset" => set!(
                    preset,
                    value
                        .parse::<Preset>()
                        .map_err(|message| Error::Parse { line, message })?
                ),
                "families_true" => set!(families_true, parse_list(line, value, family)?),
                "families_used" => set!(families_used, parse_list(line, value, family)?),
                "theta" => set!(theta, parse_list(line, value, number)?),
                "theta_prime" => set!(theta_prime, parse_list(line, value, number)?),
                "sample_sizes" => set!(sample_sizes, parse_list(line, value, count)?),
                "replicates" => set!(replicates, parse_scalar(line, key, value)?),
                "seed" => set!(seed, parse_scalar(line, key, value)?),
                "profile" => set!(
                    profile,
                    value.parse::<Profile>().map_err(|e| Error::Parse {
                        line,
                        message: e.to_string(),
                    })?
                ),
                "output_dir" => set!(output_dir, PathBuf::from(value.trim())),
                other => {
                    return Err(Error::Parse {
                        line,
                        message: format!("unknown key `{other}`"),
                    })
                }
            }
        }
        Self::from_raw(raw)
    }

    /// Read and parse a config file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    fn from_raw(raw: RawConfig) -> Result<Self> {
        let preset = raw.preset.ok_or_else(|| Error::validation("preset", "required"))?;
        let required = |field: &str, v: Option<Vec<f64>>| v.ok_or_else(|| Error::validation(field, "required"));
        let (families_true, families_used, theta, theta_prime) = match preset {
            Preset::MatchedSweep => {
                let t = required("theta", raw.theta)?;
                let f = raw.families_true.unwrap_or_else(|| vec![Family::Exponential]);
                (
                    f.clone(),
                    raw.families_used.unwrap_or(f),
                    t.clone(),
                    raw.theta_prime.unwrap_or(t),
                )
            }
            Preset::MisspecTable => {
                let t = required("theta", raw.theta)?;
                let tp = required("theta_prime", raw.theta_prime)?;
                let f = raw.families_true.unwrap_or_else(|| vec![Family::Exponential]);
                (f.clone(), raw.families_used.unwrap_or(f), t, tp)
            }
            Preset::KernelFamilies => {
                let f = raw
                    .families_true
                    .unwrap_or_else(|| vec![Family::Exponential, Family::Matern32, Family::SquaredExponential]);
                (
                    f.clone(),
                    raw.families_used.unwrap_or(f),
                    raw.theta.unwrap_or_else(|| vec![1.0]),
                    raw.theta_prime.unwrap_or_else(|| vec![1.0, 10.0]),
                )
            }
            Preset::WrongFamily => {
                let t = raw.theta.unwrap_or_else(|| vec![1.0]);
                (
                    raw.families_true.unwrap_or_else(|| vec![Family::Matern32]),
                    raw.families_used
                        .unwrap_or_else(|| vec![Family::Matern32, Family::Matern52, Family::Exponential]),
                    t.clone(),
                    raw.theta_prime.unwrap_or(t),
                )
            }
            Preset::TheoryCurve => {
                let t = required("theta", raw.theta)?;
                let f = raw.families_true.unwrap_or_else(|| vec![Family::Exponential]);
                (
                    f.clone(),
                    raw.families_used.unwrap_or(f),
                    t.clone(),
                    raw.theta_prime.unwrap_or(t),
                )
            }
        };
        let config = ExperimentConfig {
            preset,
            families_true,
            families_used,
            theta,
            theta_prime,
            sample_sizes: raw
                .sample_sizes
                .ok_or_else(|| Error::validation("sample_sizes", "required"))?,
            replicates: raw.replicates.unwrap_or(DEFAULT_REPLICATES),
            seed: raw.seed.unwrap_or(0),
            profile: raw.profile.unwrap_or_default(),
            output_dir: raw.output_dir.unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR)),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        let nonempty = |field: &str, empty: bool| {
            if empty {
                Err(Error::validation(field, "must not be empty"))
            } else {
                Ok(())
            }
        };
        nonempty("families_true", self.families_true.is_empty())?;
        nonempty("families_used", self.families_used.is_empty())?;
        nonempty("theta", self.theta.is_empty())?;
        nonempty("theta_prime", self.theta_prime.is_empty())?;
        nonempty("sample_sizes", self.sample_sizes.is_empty())?;
        for (field, values) in [("theta", &self.theta), ("theta_prime", &self.theta_prime)] {
            if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
                return Err(Error::validation(field, format!("values must be positive, got {v}")));
            }
        }
        if let Some(s) = self.sample_sizes.iter().find(|&&s| s < 2) {
            return Err(Error::validation(
                "sample_sizes",
                format!("sizes must be at least 2, got {s}"),
            ));
        }
        if self.replicates == 0 && self.preset != Preset::TheoryCurve {
            return Err(Error::validation("replicates", "must be at least 1"));
        }
        Ok(())
    }

    /// Canonical text of every setting except `output_dir`; two configs
    /// with the same canonical text produce the same results.
    pub fn canonical(&self) -> String {
        fn join<T: ToString>(v: &[T]) -> String {
            v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
        }
        format!(
            "preset={}\nfamilies_true={}\nfamilies_used={}\ntheta={}\ntheta_prime={}\nsample_sizes={}\nreplicates={}\nseed={}\nprofile={}\n",
            self.preset,
            join(&self.families_true),
            join(&self.families_used),
            join(&self.theta),
            join(&self.theta_prime),
            join(&self.sample_sizes),
            self.replicates,
            self.seed,
            self.profile,
        )
    }

    /// SHA-256 of [`canonical`](Self::canonical), hex encoded.
    pub fn hash(&self) -> String {
        Sha256::digest(self.canonical().as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

/// `load_config(path)`: read, parse and validate.
pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    ExperimentConfig::load(path)
}

/// Empirical summary of one cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Empirical {
    pub mean: f64,
    pub std: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

/// One line of `results.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub family_true: Family,
    pub theta: f64,
    pub family_used: Family,
    pub theta_prime: f64,
    pub size: usize,
    pub step: f64,
    pub replicates: usize,
    pub empirical: Option<Empirical>,
    pub theory_error: Option<f64>,
    pub theory_profile: Profile,
    /// Paired Wilcoxon p-value against the matched row of the same group.
    pub p_value: Option<f64>,
}

/// A plotted series: error against sample size.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub name: String,
    pub y_label: &'static str,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultSet {
    pub rows: Vec<ResultRow>,
    pub curves: Vec<Curve>,
    pub config_hash: String,
    pub seed: u64,
}

impl ResultSet {
    pub fn empty(config: &ExperimentConfig) -> Self {
        Self {
            rows: Vec::new(),
            curves: Vec::new(),
            config_hash: config.hash(),
            seed: config.seed,
        }
    }
}

/// Seed base of one simulation group, derived from the config seed and the
/// group's identity so that it does not depend on the order of the grid.
fn group_seed(seed: u64, family: Family, theta: f64, size: usize) -> u64 {
    let digest = Sha256::digest(format!("{seed}:{family}:{:016x}:{size}", theta.to_bits()).as_bytes());
    u64::from_le_bytes(digest[..8].try_into().expect("digest has 32 bytes"))
}

/// Used models of one group of rows sharing the true model.
fn used_models(config: &ExperimentConfig, family_true: Family, theta: f64) -> Vec<(Family, f64)> {
    match config.preset {
        Preset::MatchedSweep => vec![(family_true, theta)],
        Preset::MisspecTable | Preset::KernelFamilies => {
            config.theta_prime.iter().map(|&tp| (family_true, tp)).collect()
        }
        Preset::WrongFamily | Preset::TheoryCurve => config
            .families_used
            .iter()
            .flat_map(|&f| config.theta_prime.iter().map(move |&tp| (f, tp)))
            .collect(),
    }
}

fn theory_value(
    config: &ExperimentConfig,
    (family_true, theta): (Family, f64),
    (family_used, theta_prime): (Family, f64),
    step: f64,
) -> Result<Option<f64>> {
    // The grid theory compares parameters within one family only.
    if family_true != family_used {
        return Ok(None);
    }
    let truth = CovarianceModel::new(family_true, theta, config.profile)?;
    let used = CovarianceModel::new(family_used, theta_prime, config.profile)?;
    let design = GridDesign::infinite(&[step])?;
    misspec_error(&truth, &used, &design, &QuadratureSpec::default()).map(Some)
}

fn cell_label(family_true: Family, theta: f64, family_used: Family, theta_prime: f64, size: Option<usize>) -> String {
    let mut s = format!("{family_true}_theta{theta}_{family_used}_thetap{theta_prime}");
    if let Some(size) = size {
        s.push_str(&format!("_S{size}"));
    }
    s
}

/// Run every cell of the config: theory values, Monte Carlo replicates
/// paired within each `(family_true, θ, S)` group, summaries and Wilcoxon
/// p-values against the group's matched model. Writes nothing.
pub fn run_preset(config: &ExperimentConfig) -> Result<ResultSet> {
    config.validate()?;
    let mut set = ResultSet::empty(config);
    let simulate = config.preset != Preset::TheoryCurve;

    for &family_true in &config.families_true {
        for &theta in &config.theta {
            let used = used_models(config, family_true, theta);
            let group_start = set.rows.len();
            for &size in &config.sample_sizes {
                let step = 1.0 / (size as f64 - 1.0);
                let samples = if simulate {
                    let seed = group_seed(config.seed, family_true, theta, size);
                    Some(
                        run_monte_carlo_paired(family_true, theta, &used, size, config.replicates, seed).map_err(
                            |e| Error::Cell {
                                cell: format!("{family_true} theta={theta} S={size}"),
                                source: Box::new(e),
                            },
                        )?,
                    )
                } else {
                    None
                };
                let reference = used.iter().position(|&u| u == (family_true, theta));
                for (k, &(family_used, theta_prime)) in used.iter().enumerate() {
                    let annotate = |e: Error| Error::Cell {
                        cell: cell_label(family_true, theta, family_used, theta_prime, Some(size)),
                        source: Box::new(e),
                    };
                    let theory = theory_value(config, (family_true, theta), (family_used, theta_prime), step)
                        .map_err(annotate)?;
                    let (empirical, p_value) = match &samples {
                        None => (None, None),
                        Some(samples) => {
                            let errors = &samples[k].replicate_errors;
                            let s = summarize(errors).map_err(annotate)?;
                            let p = match reference {
                                Some(r) if r != k => wilcoxon_signed_rank(errors, &samples[r].replicate_errors)
                                    .ok()
                                    .map(|t| t.p_value),
                                _ => None,
                            };
                            let e = Empirical {
                                mean: s.mean,
                                std: s.std,
                                ci_low: s.ci95_low,
                                ci_high: s.ci95_high,
                            };
                            (Some(e), p)
                        }
                    };
                    set.rows.push(ResultRow {
                        family_true,
                        theta,
                        family_used,
                        theta_prime,
                        size,
                        step,
                        replicates: if simulate { config.replicates } else { 0 },
                        empirical,
                        theory_error: theory,
                        theory_profile: config.profile,
                        p_value,
                    });
                }
            }
            // One curve per used model and source over the group's sizes.
            let rows = &set.rows[group_start..];
            let mut curves = Vec::new();
            for &(family_used, theta_prime) in &used {
                let series = rows
                    .iter()
                    .filter(|r| r.family_used == family_used && r.theta_prime == theta_prime);
                let label = cell_label(family_true, theta, family_used, theta_prime, None);
                let empirical: Vec<(f64, f64)> = series
                    .clone()
                    .filter_map(|r| r.empirical.map(|e| (r.size as f64, e.mean)))
                    .collect();
                let theory: Vec<(f64, f64)> = series
                    .filter_map(|r| r.theory_error.map(|t| (r.size as f64, t)))
                    .collect();
                if !empirical.is_empty() {
                    curves.push(Curve {
                        name: format!("{label}_empirical"),
                        y_label: "emp_mean",
                        points: empirical,
                    });
                }
                if !theory.is_empty() {
                    curves.push(Curve {
                        name: format!("{label}_theory"),
                        y_label: "theory_error",
                        points: theory,
                    });
                }
            }
            set.curves.extend(curves);
        }
    }
    Ok(set)
}
