//! Command-line front end. Every command reads a versioned JSON config and
//! writes fixed filenames under `--out`.
//!
//! Exit codes: 0 success, 1 a statistical test failed, 2 bad input.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::equidistribution::{
    compare_samples, histogram, is_semicircle_case, predicted_bins, sample_traces, table_samples, write_histogram_csv,
    CompareConfig, TraceSample,
};
use crate::error::{Error, Result};
use crate::finite_group::{
    split_cocycle, twist_projective_rep, Cocycle2, CycloMatrix, FiniteGroup, ProjectiveRep, RootOfUnity, SplitOutcome,
};
use crate::frobenius::{frobenius_class_label, ClassMap, CoefficientTable, EllipticCurve, DEFAULT_PRIME_CAP};
use crate::haar_moments::{irrep_mean, moment_table, IrrepMean, CHUNK};
use crate::rng::stream_rng;
use crate::st_group::{enumerate_irreps, sample_element, trace, IrrepLabel, STGroupSpec};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_TEST_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "satotate",
    version,
    about = "Sato-Tate group moments, sampling and equidistribution tests"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    /// Overrides the seed in the config.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Exact and Monte Carlo trace moments: moments.csv, moments.json.
    Moments,
    /// Haar samples of the group: samples.csv.
    Sample,
    /// Frobenius traces of an elliptic curve: traces.csv, bad_primes.txt.
    EcTrace,
    /// Equidistribution test: report.json, report.txt, histogram.csv.
    Test,
    /// Cocycle verification and splitting: cocycle_report.json.
    VerifyCocycle,
    /// Irreducible representation labels: irreps.json, irreps.csv.
    Irreps,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
pub enum DataSource {
    Curve { a: [i64; 5] },
    Coefficients { path: PathBuf },
    SelfTest { samples: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Thresholds {
    #[serde(default = "default_z")]
    pub z: f64,
    #[serde(default = "default_ks")]
    pub ks: f64,
}

fn default_z() -> f64 {
    4.0
}
fn default_ks() -> f64 {
    0.03
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            z: default_z(),
            ks: default_ks(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    #[serde(default)]
    pub spec_path: Option<PathBuf>,
    #[serde(default)]
    pub data: Option<DataSource>,
    #[serde(default)]
    pub class_map: Option<ClassMap>,
    #[serde(default = "default_prime_bound")]
    pub prime_bound: u64,
    #[serde(default = "default_prime_cap")]
    pub prime_cap: u64,
    #[serde(default = "default_n_max")]
    pub n_max: u32,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub mc_samples: u64,
    #[serde(default)]
    pub thresholds: Thresholds,
    #[serde(default = "default_embedding")]
    pub embedding: usize,
    /// Primes excluded in addition to those of bad reduction.
    #[serde(default)]
    pub excluded_primes: Vec<u64>,
    #[serde(default)]
    pub cocycle_path: Option<PathBuf>,
    #[serde(default = "default_max_order")]
    pub max_order: u32,
    #[serde(default = "default_e_max")]
    pub e_max: u32,
    #[serde(default = "default_bins")]
    pub histogram_bins: usize,
    /// Free-text run metadata (base field, endomorphism field, ...).
    #[serde(default)]
    pub labels: BTreeMap<String, String>,
}

fn default_prime_bound() -> u64 {
    10_000
}
fn default_prime_cap() -> u64 {
    DEFAULT_PRIME_CAP
}
fn default_n_max() -> u32 {
    6
}
fn default_embedding() -> usize {
    1
}
fn default_max_order() -> u32 {
    64
}
fn default_e_max() -> u32 {
    2
}
fn default_bins() -> usize {
    40
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<RunConfig> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "schema_version must be {SCHEMA_VERSION}, got {}",
                self.schema_version
            )));
        }
        if self.prime_bound > self.prime_cap {
            return Err(Error::Config(format!(
                "prime_bound {} exceeds prime_cap {}",
                self.prime_bound, self.prime_cap
            )));
        }
        if !(1..=2).contains(&self.embedding) {
            return Err(Error::Config("embedding must be 1 or 2".into()));
        }
        if self.histogram_bins == 0 {
            return Err(Error::Config("histogram_bins must be positive".into()));
        }
        Ok(())
    }

    fn require_seed(&self, what: &str) -> Result<u64> {
        self.seed
            .ok_or_else(|| Error::Config(format!("{what} needs a seed (config \"seed\" or --seed)")))
    }
}

/// A config with paths resolved against the config file's directory.
struct Run {
    cfg: RunConfig,
    base: PathBuf,
    out: PathBuf,
}

impl Run {
    fn path(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base.join(p)
        }
    }

    fn spec(&self) -> Result<STGroupSpec> {
        let p = self
            .cfg
            .spec_path
            .as_ref()
            .ok_or_else(|| Error::Config("spec_path is required".into()))?;
        let path = self.path(p);
        let text = fs::read_to_string(&path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        STGroupSpec::load(&text).map_err(|e| Error::InvalidSpec(format!("{}: {e}", path.display())))
    }

    fn write(&self, name: &str, bytes: &[u8]) -> Result<()> {
        fs::create_dir_all(&self.out)?;
        fs::write(self.out.join(name), bytes)?;
        Ok(())
    }

    fn write_json<T: Serialize>(&self, name: &str, value: &T) -> Result<()> {
        let mut s = serde_json::to_string_pretty(value)?;
        s.push('\n');
        self.write(name, s.as_bytes())
    }
}

/// Parses arguments, runs the command and returns the exit code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}

pub fn execute(cli: &Cli) -> Result<i32> {
    let cfg_path = cli
        .config
        .as_ref()
        .ok_or_else(|| Error::Config("--config is required".into()))?;
    let text = fs::read_to_string(cfg_path).map_err(|e| Error::Config(format!("{}: {e}", cfg_path.display())))?;
    let mut cfg = RunConfig::parse(&text)?;
    if cli.seed.is_some() {
        cfg.seed = cli.seed;
    }
    let base = cfg_path.parent().map(Path::to_path_buf).unwrap_or_default();
    let run = Run {
        cfg,
        base,
        out: cli.out.clone(),
    };
    match cli.command {
        Command::Moments => cmd_moments(&run),
        Command::Sample => cmd_sample(&run),
        Command::EcTrace => cmd_ec_trace(&run),
        Command::Test => cmd_test(&run),
        Command::VerifyCocycle => cmd_verify_cocycle(&run),
        Command::Irreps => cmd_irreps(&run),
    }
}

fn cmd_moments(run: &Run) -> Result<i32> {
    let spec = run.spec()?;
    let seed = if run.cfg.mc_samples > 0 {
        run.cfg.require_seed("Monte Carlo moments")?
    } else {
        0
    };
    let table = moment_table(&spec, run.cfg.n_max, run.cfg.mc_samples, seed);
    let mut csv = Vec::new();
    table.write_csv(&mut csv)?;
    run.write("moments.csv", &csv)?;
    run.write_json("moments.json", &table)?;
    Ok(EXIT_OK)
}

fn cmd_sample(run: &Run) -> Result<i32> {
    let spec = run.spec()?;
    let seed = run.cfg.require_seed("sampling")?;
    let n = run.cfg.mc_samples;
    let mut out = String::from("index,component,trace_re,trace_im\n");
    for chunk in 0..n.div_ceil(CHUNK) {
        let mut rng = stream_rng(seed, chunk);
        for k in 0..CHUNK.min(n - chunk * CHUNK) {
            let e = sample_element(&spec, &mut rng, None);
            let t = trace(&spec, &e);
            writeln!(out, "{},{},{},{}", chunk * CHUNK + k, e.component, t.re, t.im).unwrap();
        }
    }
    run.write("samples.csv", out.as_bytes())?;
    Ok(EXIT_OK)
}

fn curve_from(run: &Run, a: [i64; 5]) -> Result<EllipticCurve> {
    Ok(EllipticCurve::new(a)?.with_bad_primes(run.cfg.excluded_primes.clone()))
}

fn cmd_ec_trace(run: &Run) -> Result<i32> {
    let Some(DataSource::Curve { a }) = &run.cfg.data else {
        return Err(Error::Config("ec-trace needs data.curve".into()));
    };
    let curve = curve_from(run, *a)?;
    let (aps, bad) = curve.traces(run.cfg.prime_bound, run.cfg.prime_cap)?;
    let table = CoefficientTable::from_traces(None, &aps)?;
    let mut csv = Vec::new();
    table.write_csv(&mut csv)?;
    run.write("traces.csv", &csv)?;
    let sidecar: String = bad.iter().map(|p| format!("{p}\n")).collect();
    run.write("bad_primes.txt", sidecar.as_bytes())?;
    Ok(EXIT_OK)
}

/// Labels records lacking a class from the configured class map.
fn label(run: &Run, table: &mut CoefficientTable) -> Result<()> {
    if let Some(map) = &run.cfg.class_map {
        for r in &mut table.records {
            if r.class_label.is_none() {
                r.class_label = Some(frobenius_class_label(r.p, map)?);
            }
        }
    }
    Ok(())
}

fn test_samples(run: &Run, spec: &STGroupSpec) -> Result<Vec<TraceSample>> {
    match &run.cfg.data {
        None => Err(Error::Config("test needs a data source".into())),
        Some(DataSource::SelfTest { samples }) => Ok(sample_traces(spec, *samples, run.cfg.require_seed("self-test")?)),
        Some(DataSource::Curve { a }) => {
            let curve = curve_from(run, *a)?;
            let (aps, _) = curve.traces(run.cfg.prime_bound, run.cfg.prime_cap)?;
            let mut table = CoefficientTable::from_traces(None, &aps)?;
            // Frobenius is unramified in the twist field only away from its modulus
            if let Some(map) = &run.cfg.class_map {
                table.records.retain(|r| map.modulus % r.p != 0);
            }
            label(run, &mut table)?;
            Ok(table_samples(&table, run.cfg.embedding))
        }
        Some(DataSource::Coefficients { path }) => {
            let mut table = CoefficientTable::load(&run.path(path))?;
            table
                .records
                .retain(|r| !run.cfg.excluded_primes.contains(&r.p) && r.p <= run.cfg.prime_bound);
            label(run, &mut table)?;
            Ok(table_samples(&table, run.cfg.embedding))
        }
    }
}

fn cmd_test(run: &Run) -> Result<i32> {
    let spec = run.spec()?;
    let samples = test_samples(run, &spec)?;
    let cfg = CompareConfig {
        n_max: run.cfg.n_max,
        z_threshold: run.cfg.thresholds.z,
        ks_threshold: run.cfg.thresholds.ks,
        embedding: run.cfg.embedding,
    };
    let report = compare_samples(&spec, &samples, &cfg)?;
    run.write_json("report.json", &report)?;
    let mut txt = Vec::new();
    report.write_table(&mut txt)?;
    run.write("report.txt", &txt)?;

    let w = 2.0 * spec.block_dims().iter().sum::<usize>() as f64;
    let (lo, hi) = if is_semicircle_case(&spec) {
        (-2.0, 2.0)
    } else {
        (-w, w)
    };
    let bins = run.cfg.histogram_bins;
    let pred = if is_semicircle_case(&spec) {
        predicted_bins(&spec, bins, lo, hi, 0, 0)
    } else {
        let seed = run.cfg.require_seed("the predicted histogram")?;
        predicted_bins(&spec, bins, lo, hi, run.cfg.mc_samples.max(100_000), seed)
    };
    let values: Vec<f64> = samples.iter().map(|s| s.t.re).collect();
    let mut csv = Vec::new();
    write_histogram_csv(&histogram(&values, bins, lo, hi, &*pred), &mut csv)?;
    run.write("histogram.csv", &csv)?;

    if report.passed {
        Ok(EXIT_OK)
    } else {
        for m in report.failures() {
            eprintln!(
                "fail: {:?} order {} class {:?}: empirical {} vs {} (z = {:?})",
                m.observable, m.order, m.component_class, m.empirical, m.theoretical, m.z
            );
        }
        if let Some(ks) = report.ks.filter(|k| !k.pass) {
            eprintln!("fail: KS distance {} above {}", ks.statistic, ks.threshold);
        }
        Ok(EXIT_TEST_FAILED)
    }
}

/// Cocycle input: `value(s, t) = ζ_order^{exponents[s][t]}`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CocycleFile {
    pub group: FiniteGroup,
    pub order: u32,
    pub exponents: Vec<Vec<i64>>,
    /// Optional projective representation with this multiplier, twisted by the splitting.
    #[serde(default)]
    pub projective_images: Option<Vec<CycloMatrix>>,
}

impl CocycleFile {
    pub fn cocycle(&self) -> Result<Cocycle2> {
        if self.order == 0 {
            return Err(Error::Config("order must be positive".into()));
        }
        let n = self.group.order();
        if self.exponents.len() != n || self.exponents.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(format!("exponent table must be {n}x{n}")));
        }
        let roots = self
            .exponents
            .iter()
            .flatten()
            .map(|&k| RootOfUnity::new(k, self.order))
            .collect();
        Cocycle2::from_roots(&self.group, roots)
    }
}

#[derive(Clone, Debug, Serialize)]
struct CocycleReport {
    verified: bool,
    value_order: u32,
    max_order: u32,
    /// `α(s) = ζ_N^{k_s}` as `[k_s]` with N = `splitting_order`.
    splitting_order: Option<u32>,
    splitting_exponents: Option<Vec<u32>>,
    obstruction: Option<crate::finite_group::cocycle::ObstructionReport>,
    twisted_rep_is_homomorphism: Option<bool>,
}

fn cmd_verify_cocycle(run: &Run) -> Result<i32> {
    let p = run
        .cfg
        .cocycle_path
        .as_ref()
        .ok_or_else(|| Error::Config("cocycle_path is required".into()))?;
    let text = fs::read_to_string(run.path(p))?;
    let file: CocycleFile = serde_json::from_str(&text).map_err(|e| Error::Config(e.to_string()))?;
    let c = file.cocycle()?;
    let outcome = split_cocycle(&c, run.cfg.max_order)?;
    let mut report = CocycleReport {
        verified: true,
        value_order: c.value_order(),
        max_order: run.cfg.max_order,
        splitting_order: None,
        splitting_exponents: None,
        obstruction: None,
        twisted_rep_is_homomorphism: None,
    };
    match &outcome {
        SplitOutcome::Split(alpha) => {
            let order = alpha.value_order();
            report.splitting_order = Some(order);
            report.splitting_exponents = Some(alpha.roots().iter().map(|r| r.exponent_in(order).unwrap()).collect());
            if let Some(images) = &file.projective_images {
                let rho = ProjectiveRep::new(&c, images.clone())?;
                report.twisted_rep_is_homomorphism = Some(twist_projective_rep(&rho, alpha).is_ok());
            }
        }
        SplitOutcome::Obstructed(o) => report.obstruction = Some(o.clone()),
    }
    run.write_json("cocycle_report.json", &report)?;
    Ok(EXIT_OK)
}

#[derive(Clone, Debug, Serialize)]
struct IrrepEntry {
    label: IrrepLabel,
    mean: Option<IrrepMean>,
}

fn cmd_irreps(run: &Run) -> Result<i32> {
    let spec = run.spec()?;
    let labels = enumerate_irreps(&spec, run.cfg.e_max)?;
    let n = run.cfg.mc_samples;
    let seed = if n > 0 { run.cfg.require_seed("irrep means")? } else { 0 };
    let entries = labels
        .into_iter()
        .enumerate()
        .map(|(k, label)| {
            let mean = if n > 0 {
                Some(irrep_mean(&spec, &label, n, seed.wrapping_add(k as u64))?)
            } else {
                None
            };
            Ok(IrrepEntry { label, mean })
        })
        .collect::<Result<Vec<_>>>()?;
    run.write_json("irreps.json", &entries)?;
    let mut csv = String::from("e,eta_index,eta_degree,mean_re,mean_im,stderr\n");
    for e in &entries {
        let exps: Vec<String> = e.label.e.iter().map(u32::to_string).collect();
        let (re, im, se) = match &e.mean {
            Some(m) => (
                m.estimate.re.to_string(),
                m.estimate.im.to_string(),
                m.stderr.to_string(),
            ),
            None => Default::default(),
        };
        writeln!(
            csv,
            "{},{},{},{},{},{}",
            exps.join(" "),
            e.label.eta_index,
            e.label.eta_degree,
            re,
            im,
            se
        )
        .unwrap();
    }
    run.write("irreps.csv", csv.as_bytes())?;
    Ok(EXIT_OK)
}
