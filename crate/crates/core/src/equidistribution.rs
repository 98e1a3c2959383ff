//! Empirical trace statistics against Haar-measure predictions.

use std::f64::consts::PI;
use std::io::Write;

use num::complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frobenius::CoefficientTable;
use crate::haar_moments::{group_moments, sample_trace, Observable};
use crate::rng::stream_rng;
use crate::st_group::STGroupSpec;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentEstimate {
    pub order: u32,
    pub mean: f64,
    /// From the sample variance of `t^k` (denominator `n − 1`); 0 for one sample.
    pub stderr: f64,
}

/// Sample moments `k = 0..=n_max` with standard errors.
pub fn empirical_moments(samples: &[f64], n_max: u32) -> Result<Vec<MomentEstimate>> {
    if samples.is_empty() {
        return Err(Error::EmptySample);
    }
    let n = samples.len() as f64;
    Ok((0..=n_max)
        .map(|k| {
            let vals = samples.iter().map(|t| t.powi(k as i32));
            let mean = vals.clone().sum::<f64>() / n;
            let stderr = if samples.len() > 1 {
                let var = vals.map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
                (var / n).sqrt()
            } else {
                0.0
            };
            MomentEstimate { order: k, mean, stderr }
        })
        .collect())
}

/// `sup_t |F_n(t) − F(t)|` for a continuous CDF `F`, evaluated at each distinct
/// sample value against both one-sided limits of the empirical CDF.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < xs.len() {
        let v = xs[i];
        let mut j = i;
        while j < xs.len() && xs[j] == v {
            j += 1;
        }
        let f = cdf(v);
        d = d.max((f - i as f64 / n).abs()).max((j as f64 / n - f).abs());
        i = j;
    }
    Ok(d)
}

/// CDF of `(1/2π)√(4 − u²)` on `[−2, 2]`, clamped outside.
pub fn semicircle_cdf(t: f64) -> f64 {
    let t = t.clamp(-2.0, 2.0);
    0.5 + (t * (4.0 - t * t).sqrt()) / (4.0 * PI) + (t / 2.0).asin() / PI
}

pub fn semicircle_density(t: f64) -> f64 {
    if t.abs() >= 2.0 {
        0.0
    } else {
        (4.0 - t * t).sqrt() / (2.0 * PI)
    }
}

/// One normalized trace with its component class.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceSample {
    pub t: Complex64,
    pub class: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareConfig {
    pub n_max: u32,
    pub z_threshold: f64,
    pub ks_threshold: f64,
    /// Embedding of the coefficient field used for traces, 1 or 2.
    pub embedding: usize,
}

impl Default for CompareConfig {
    fn default() -> Self {
        CompareConfig {
            n_max: 6,
            z_threshold: 4.0,
            ks_threshold: 0.03,
            embedding: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentComparison {
    pub observable: Observable,
    pub order: u32,
    /// `None` for the aggregate over all records.
    pub component_class: Option<usize>,
    pub theoretical: f64,
    pub empirical: f64,
    pub stderr: f64,
    /// `(empirical − theoretical)/stderr`, absent when stderr is 0.
    pub z: Option<f64>,
    pub pass: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub statistic: f64,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub moments: Vec<MomentComparison>,
    pub ks: Option<KsResult>,
    /// Records per conjugacy class of Γ.
    pub sample_sizes: Vec<usize>,
    pub total: usize,
    pub passed: bool,
}

impl TestReport {
    pub fn failures(&self) -> impl Iterator<Item = &MomentComparison> {
        self.moments.iter().filter(|m| !m.pass)
    }

    /// Fixed-width text table.
    pub fn write_table<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(
            w,
            "{:<12} {:>5} {:>6} {:>14} {:>14} {:>12} {:>9} {:>5}",
            "observable", "order", "class", "theoretical", "empirical", "stderr", "z", "ok"
        )?;
        for m in &self.moments {
            let class = m.component_class.map_or_else(|| "all".to_string(), |c| c.to_string());
            let z = m.z.map_or_else(|| "-".to_string(), |z| format!("{z:.3}"));
            let obs = match m.observable {
                Observable::Trace => "trace",
                Observable::RealPart => "re_trace",
                Observable::AbsSquared => "abs_sq",
            };
            writeln!(
                w,
                "{:<12} {:>5} {:>6} {:>14.8} {:>14.8} {:>12.3e} {:>9} {:>5}",
                obs,
                m.order,
                class,
                m.theoretical,
                m.empirical,
                m.stderr,
                z,
                if m.pass { "yes" } else { "NO" }
            )?;
        }
        if let Some(ks) = &self.ks {
            writeln!(
                w,
                "KS distance to semicircle: {:.6} (threshold {}) {}",
                ks.statistic,
                ks.threshold,
                if ks.pass { "yes" } else { "NO" }
            )?;
        }
        writeln!(w, "samples: {} per class {:?}", self.total, self.sample_sizes)?;
        writeln!(w, "verdict: {}", if self.passed { "PASS" } else { "FAIL" })
    }
}

/// Observables compared for a spec: the trace when it is real, else `Re T` and `|T|²`.
pub fn observables(spec: &STGroupSpec) -> Vec<Observable> {
    if spec.has_real_traces() {
        vec![Observable::Trace]
    } else {
        vec![Observable::RealPart, Observable::AbsSquared]
    }
}

/// The single-block, trivial-component case with the semicircle trace law.
pub fn is_semicircle_case(spec: &STGroupSpec) -> bool {
    spec.m() == 1 && spec.gamma().order() == 1 && spec.twist_trace(0, 0).is_one()
}

/// Normalized traces of a table, with class labels.
pub fn table_samples(table: &CoefficientTable, embedding: usize) -> Vec<TraceSample> {
    table
        .records
        .iter()
        .map(|r| TraceSample {
            t: crate::frobenius::normalize(r, embedding),
            class: r.class_label,
        })
        .collect()
}

/// Compares a coefficient table with the predictions of `spec`.
pub fn compare(spec: &STGroupSpec, table: &CoefficientTable, config: &CompareConfig) -> Result<TestReport> {
    compare_samples(spec, &table_samples(table, config.embedding), config)
}

/// Per-class and aggregate moment comparison, plus KS in the semicircle case.
pub fn compare_samples(spec: &STGroupSpec, samples: &[TraceSample], config: &CompareConfig) -> Result<TestReport> {
    if samples.is_empty() {
        return Err(Error::EmptySample);
    }
    let classes = spec.gamma().conjugacy_classes();
    let nclasses = classes.len();
    let labels: Vec<usize> = if nclasses == 1 {
        vec![0; samples.len()]
    } else {
        samples
            .iter()
            .map(|s| match s.class {
                None => Err(Error::MissingClassLabels),
                Some(c) if c >= nclasses => Err(Error::Config(format!(
                    "class label {c} out of range ({nclasses} classes)"
                ))),
                Some(c) => Ok(c),
            })
            .collect::<Result<_>>()?
    };
    let mut sample_sizes = vec![0usize; nclasses];
    for &c in &labels {
        sample_sizes[c] += 1;
    }

    let mut moments = Vec::new();
    for obs in observables(spec) {
        let theory = group_moments(spec, config.n_max, obs)?;
        let slots: Vec<Option<usize>> = std::iter::once(None).chain((0..nclasses).map(Some)).collect();
        let rows: Vec<Vec<MomentComparison>> = slots
            .par_iter()
            .map(|&slot| {
                let xs: Vec<Complex64> = samples
                    .iter()
                    .zip(&labels)
                    .filter(|(_, &c)| slot.is_none_or(|s| s == c))
                    .map(|(s, _)| s.t)
                    .collect();
                let mut out = Vec::new();
                if xs.is_empty() {
                    return out;
                }
                for k in 1..=config.n_max {
                    let vals: Vec<f64> = xs.iter().map(|&t| obs.eval(t, k).re).collect();
                    let est = empirical_moments(&vals, 1).expect("non-empty")[1];
                    let theoretical = theory
                        .row(slot, k)
                        .and_then(|r| r.exact_value)
                        .expect("exact row present");
                    let diff = est.mean - theoretical;
                    let (z, pass) = if est.stderr > 0.0 {
                        let z = diff / est.stderr;
                        (Some(z), z.abs() <= config.z_threshold)
                    } else {
                        (None, diff.abs() <= 1e-9)
                    };
                    out.push(MomentComparison {
                        observable: obs,
                        order: k,
                        component_class: slot,
                        theoretical,
                        empirical: est.mean,
                        stderr: est.stderr,
                        z,
                        pass,
                    });
                }
                out
            })
            .collect();
        moments.extend(rows.into_iter().flatten());
    }

    let ks = if is_semicircle_case(spec) {
        let re: Vec<f64> = samples.iter().map(|s| s.t.re).collect();
        let statistic = ks_statistic(&re, semicircle_cdf)?;
        Some(KsResult {
            statistic,
            threshold: config.ks_threshold,
            pass: statistic <= config.ks_threshold,
        })
    } else {
        None
    };
    let passed = moments.iter().all(|m| m.pass) && ks.is_none_or(|k| k.pass);
    Ok(TestReport {
        moments,
        ks,
        sample_sizes,
        total: samples.len(),
        passed,
    })
}

/// Seeded Haar trace samples from the group's own sampler, labelled by class.
pub fn sample_traces(spec: &STGroupSpec, n: u64, seed: u64) -> Vec<TraceSample> {
    let class_of = spec.gamma().class_index();
    let chunk = crate::haar_moments::CHUNK;
    let parts: Vec<Vec<TraceSample>> = (0..n.div_ceil(chunk))
        .into_par_iter()
        .map(|k| {
            let mut rng = stream_rng(seed, k);
            let len = chunk.min(n - k * chunk);
            (0..len)
                .map(|_| {
                    let (g, t) = sample_trace(spec, &mut rng);
                    TraceSample {
                        t,
                        class: Some(class_of[g]),
                    }
                })
                .collect()
        })
        .collect();
    parts.into_iter().flatten().collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HistogramBin {
    pub bin_left: f64,
    pub bin_right: f64,
    pub count: usize,
    pub density: f64,
    pub predicted_density: f64,
}

/// Equal-width histogram on `[lo, hi]`; `predicted(l, r)` gives the model density of each bin.
pub fn histogram(
    values: &[f64],
    bins: usize,
    lo: f64,
    hi: f64,
    predicted: &dyn Fn(f64, f64) -> f64,
) -> Vec<HistogramBin> {
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &v in values {
        if v < lo || v > hi {
            continue;
        }
        let k = (((v - lo) / width) as usize).min(bins - 1);
        counts[k] += 1;
    }
    let n = values.len().max(1) as f64;
    counts
        .iter()
        .enumerate()
        .map(|(k, &c)| {
            let l = lo + k as f64 * width;
            let r = l + width;
            HistogramBin {
                bin_left: l,
                bin_right: r,
                count: c,
                density: c as f64 / (n * width),
                predicted_density: predicted(l, r),
            }
        })
        .collect()
}

/// Predicted bin densities: exact for the semicircle, else from `mc_samples`
/// seeded Haar draws.
pub fn predicted_bins(
    spec: &STGroupSpec,
    bins: usize,
    lo: f64,
    hi: f64,
    mc_samples: u64,
    seed: u64,
) -> Box<dyn Fn(f64, f64) -> f64> {
    if is_semicircle_case(spec) {
        return Box::new(|l, r| (semicircle_cdf(r) - semicircle_cdf(l)) / (r - l));
    }
    let draws: Vec<f64> = sample_traces(spec, mc_samples, seed).iter().map(|s| s.t.re).collect();
    let reference = histogram(&draws, bins, lo, hi, &|_, _| 0.0);
    Box::new(move |l, _| {
        reference
            .iter()
            .find(|b| (b.bin_left - l).abs() < 1e-12)
            .map_or(0.0, |b| b.density)
    })
}

pub fn write_histogram_csv<W: Write>(bins: &[HistogramBin], mut w: W) -> std::io::Result<()> {
    writeln!(w, "bin_left,bin_right,count,density,predicted_density")?;
    for b in bins {
        writeln!(
            w,
            "{},{},{},{},{}",
            b.bin_left, b.bin_right, b.count, b.density, b.predicted_density
        )?;
    }
    Ok(())
}
