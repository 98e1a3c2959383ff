//! Trace moments under Haar measure: exact values by convolving independent
//! SU(2) trace moments, and seeded Monte Carlo estimates.

use std::io::Write;

use num::complex::Complex64;
use num::{BigInt, BigRational, One, Zero};
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite_group::Cyclotomic;
use crate::rng::stream_rng;
use crate::st_group::{IrrepLabel, STGroupSpec};

/// Exact moments are offered only while `n_max · m` stays within this budget.
pub const EXACT_BUDGET: usize = 64;
/// Monte Carlo samples per seeded stream.
pub const CHUNK: u64 = 1 << 16;

/// `∫_{SU(2)} tr(g)^n dg`: zero for odd n, the Catalan number `C_{n/2}` otherwise.
pub fn su2_trace_moment(n: u32) -> BigRational {
    if n % 2 == 1 {
        return BigRational::zero();
    }
    let k = n / 2;
    // C_k = binom(2k, k) / (k + 1)
    let mut c = BigInt::one();
    for j in 0..k {
        c = c * BigInt::from(2 * (2 * j + 1)) / BigInt::from(j + 2);
    }
    BigRational::from_integer(c)
}

/// Which function of the trace `T` is averaged.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    /// `T^n`; real whenever every twist trace is real.
    Trace,
    /// `(Re T)^n`.
    RealPart,
    /// `|T|^{2n}`.
    AbsSquared,
}

impl Observable {
    /// `Trace` when traces are real, else `RealPart`.
    pub fn natural(spec: &STGroupSpec) -> Observable {
        if spec.has_real_traces() {
            Observable::Trace
        } else {
            Observable::RealPart
        }
    }

    pub fn eval(self, t: Complex64, n: u32) -> Complex64 {
        match self {
            Observable::Trace => t.powu(n),
            Observable::RealPart => Complex64::new(t.re.powi(n as i32), 0.0),
            Observable::AbsSquared => Complex64::new(t.norm_sqr().powi(n as i32), 0.0),
        }
    }
}

fn binomials(n: usize) -> Vec<Vec<BigRational>> {
    let mut b = vec![vec![BigRational::zero(); n + 1]; n + 1];
    for i in 0..=n {
        b[i][0] = BigRational::one();
        for j in 1..=i {
            b[i][j] = &b[i - 1][j - 1] + &b[i - 1][j];
        }
    }
    b
}

/// `F[a][b] = E[T^a · conj(T)^b]` for `a, b ≤ n_max` on component `g`, where
/// `T = Σ_{fixed i} t_i τ_i`; blocks are folded in one at a time.
fn mixed_moments(spec: &STGroupSpec, g: usize, n_max: usize) -> Vec<Vec<Cyclotomic>> {
    let binom = binomials(n_max);
    let cat: Vec<BigRational> = (0..=2 * n_max as u32).map(su2_trace_moment).collect();
    let mut f = vec![vec![Cyclotomic::zero(1); n_max + 1]; n_max + 1];
    f[0][0] = Cyclotomic::from_integer(1);
    for i in spec.fixed_blocks(g).collect::<Vec<_>>() {
        let tau = spec.twist_trace(g, i);
        let tau_bar = tau.conj();
        let tp: Vec<Cyclotomic> = (0..=n_max as i64).map(|k| tau.pow(k)).collect();
        let tbp: Vec<Cyclotomic> = (0..=n_max as i64).map(|k| tau_bar.pow(k)).collect();
        // block moments E[(t τ)^a (t τ̄)^b] = τ^a τ̄^b C(a + b)
        let block: Vec<Vec<Cyclotomic>> = (0..=n_max)
            .map(|a| (0..=n_max).map(|b| (&tp[a] * &tbp[b]).scale(&cat[a + b])).collect())
            .collect();
        let mut next = vec![vec![Cyclotomic::zero(1); n_max + 1]; n_max + 1];
        for a in 0..=n_max {
            for b in 0..=n_max {
                let mut acc = Cyclotomic::zero(1);
                for a1 in 0..=a {
                    for b1 in 0..=b {
                        if block[a1][b1].is_zero() || f[a - a1][b - b1].is_zero() {
                            continue;
                        }
                        let w = &binom[a][a1] * &binom[b][b1];
                        acc = acc + (&block[a1][b1] * &f[a - a1][b - b1]).scale(&w);
                    }
                }
                next[a][b] = acc;
            }
        }
        f = next;
    }
    f
}

fn check_budget(spec: &STGroupSpec, n_max: u32) -> Result<()> {
    if (n_max as usize).saturating_mul(spec.m()) > EXACT_BUDGET {
        return Err(Error::Unsupported(format!(
            "exact moments need n_max * m <= {EXACT_BUDGET} (got {} * {})",
            n_max,
            spec.m()
        )));
    }
    Ok(())
}

/// Exact `E[obs_n(T)]` on one component for `n = 0..=n_max`.
pub fn component_moments(spec: &STGroupSpec, g: usize, n_max: u32, obs: Observable) -> Result<Vec<Cyclotomic>> {
    check_budget(spec, n_max)?;
    let n = n_max as usize;
    Ok(match obs {
        Observable::Trace => {
            let f = mixed_moments(spec, g, n);
            (0..=n).map(|k| f[k][0].clone()).collect()
        }
        Observable::RealPart => {
            let f = mixed_moments(spec, g, n);
            let binom = binomials(n);
            (0..=n)
                .map(|k| {
                    let scale = BigRational::new(BigInt::one(), BigInt::from(2).pow(k as u32));
                    (0..=k)
                        .fold(Cyclotomic::zero(1), |acc, j| acc + f[j][k - j].scale(&binom[k][j]))
                        .scale(&scale)
                })
                .collect()
        }
        Observable::AbsSquared => {
            let f = mixed_moments(spec, g, n);
            (0..=n).map(|k| f[k][k].clone()).collect()
        }
    })
}

/// Exact `E[T^n]` on component `g` for `n = 0..=n_max`.
pub fn component_trace_moments(spec: &STGroupSpec, g: usize, n_max: u32) -> Result<Vec<Cyclotomic>> {
    component_moments(spec, g, n_max, Observable::Trace)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentRow {
    pub order: u32,
    /// Conjugacy class of Γ; `None` for the aggregate over all components.
    pub component_class: Option<usize>,
    pub exact: Option<Cyclotomic>,
    pub exact_value: Option<f64>,
    pub mc_estimate: Option<f64>,
    pub mc_stderr: Option<f64>,
    pub samples: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentTable {
    pub observable: Observable,
    pub n_max: u32,
    /// Aggregate rows first (orders 0..=n_max), then each class in order.
    pub rows: Vec<MomentRow>,
}

impl MomentTable {
    pub fn aggregate(&self) -> impl Iterator<Item = &MomentRow> {
        self.rows.iter().filter(|r| r.component_class.is_none())
    }

    pub fn for_class(&self, c: usize) -> impl Iterator<Item = &MomentRow> {
        self.rows.iter().filter(move |r| r.component_class == Some(c))
    }

    pub fn row(&self, class: Option<usize>, order: u32) -> Option<&MomentRow> {
        self.rows
            .iter()
            .find(|r| r.component_class == class && r.order == order)
    }

    /// Fills the Monte Carlo columns of `self` from `mc` (same shape).
    pub fn merge_mc(&mut self, mc: &MomentTable) {
        for row in &mut self.rows {
            if let Some(m) = mc.row(row.component_class, row.order) {
                row.mc_estimate = m.mc_estimate;
                row.mc_stderr = m.mc_stderr;
                row.samples = m.samples;
            }
        }
    }

    /// CSV with columns `order,component_class,exact_num,exact_den,mc_estimate,mc_stderr`.
    /// The aggregate rows use `all` as class; non-rational exact values leave
    /// the exact columns empty (the JSON export carries them).
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "order,component_class,exact_num,exact_den,mc_estimate,mc_stderr")?;
        for r in &self.rows {
            let class = r.component_class.map_or_else(|| "all".to_string(), |c| c.to_string());
            let (num, den) = match r.exact.as_ref().and_then(|z| z.to_rational()) {
                Some(q) => (q.numer().to_string(), q.denom().to_string()),
                None => (String::new(), String::new()),
            };
            let est = r.mc_estimate.map(|x| x.to_string()).unwrap_or_default();
            let se = r.mc_stderr.map(|x| x.to_string()).unwrap_or_default();
            writeln!(w, "{},{},{},{},{},{}", r.order, class, num, den, est, se)?;
        }
        Ok(())
    }
}

fn real_value(z: &Cyclotomic) -> f64 {
    z.to_complex().re
}

/// Exact moments of `obs`, aggregated uniformly over Γ and per conjugacy class.
pub fn group_moments(spec: &STGroupSpec, n_max: u32, obs: Observable) -> Result<MomentTable> {
    let gamma = spec.gamma();
    let per_elem = (0..gamma.order())
        .map(|g| component_moments(spec, g, n_max, obs))
        .collect::<Result<Vec<_>>>()?;
    let average = |elems: &[usize], k: usize| {
        let inv = BigRational::new(BigInt::one(), BigInt::from(elems.len()));
        elems
            .iter()
            .fold(Cyclotomic::zero(1), |acc, &g| acc + per_elem[g][k].clone())
            .scale(&inv)
    };
    let all: Vec<usize> = (0..gamma.order()).collect();
    let mut rows = Vec::new();
    let mut push = |class: Option<usize>, elems: &[usize]| {
        for k in 0..=n_max {
            let exact = average(elems, k as usize);
            rows.push(MomentRow {
                order: k,
                component_class: class,
                exact_value: Some(real_value(&exact)),
                exact: Some(exact),
                mc_estimate: None,
                mc_stderr: None,
                samples: 0,
            });
        }
    };
    push(None, &all);
    for (c, class) in gamma.conjugacy_classes().iter().enumerate() {
        push(Some(c), class);
    }
    Ok(MomentTable {
        observable: obs,
        n_max,
        rows,
    })
}

/// [`group_moments`] for the natural observable.
pub fn group_trace_moments(spec: &STGroupSpec, n_max: u32) -> Result<MomentTable> {
    group_moments(spec, n_max, Observable::natural(spec))
}

/// Haar SU(2) trace: twice the real part of a uniform unit quaternion.
fn sample_su2_trace<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let q: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
        let norm = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return 2.0 * q[0] / norm;
        }
    }
}

/// Trace of a Haar element on a uniformly drawn component: `(component, T)`.
pub fn sample_trace<R: Rng + ?Sized>(spec: &STGroupSpec, rng: &mut R) -> (usize, Complex64) {
    let ts: Vec<f64> = (0..spec.m()).map(|_| sample_su2_trace(rng)).collect();
    let g = rng.random_range(0..spec.gamma().order());
    let t = spec.fixed_blocks(g).map(|i| spec.twist_trace_c(g, i) * ts[i]).sum();
    (g, t)
}

/// Running sums of `x^k` and `x^{2k}` per class and in aggregate.
#[derive(Clone, Debug)]
struct Accum {
    count: Vec<u64>,
    sum: Vec<Vec<f64>>,
    sum_sq: Vec<Vec<f64>>,
}

impl Accum {
    fn new(slots: usize, n_max: usize) -> Accum {
        Accum {
            count: vec![0; slots],
            sum: vec![vec![0.0; n_max + 1]; slots],
            sum_sq: vec![vec![0.0; n_max + 1]; slots],
        }
    }

    fn add(&mut self, slot: usize, values: &[f64]) {
        self.count[slot] += 1;
        for (k, &v) in values.iter().enumerate() {
            self.sum[slot][k] += v;
            self.sum_sq[slot][k] += v * v;
        }
    }

    fn merge(mut self, other: &Accum) -> Accum {
        for s in 0..self.count.len() {
            self.count[s] += other.count[s];
            for k in 0..self.sum[s].len() {
                self.sum[s][k] += other.sum[s][k];
                self.sum_sq[s][k] += other.sum_sq[s][k];
            }
        }
        self
    }

    fn estimate(&self, slot: usize, k: usize) -> (Option<f64>, Option<f64>) {
        let n = self.count[slot];
        if n == 0 {
            return (None, None);
        }
        let nf = n as f64;
        let mean = self.sum[slot][k] / nf;
        let se = if n > 1 {
            let var = ((self.sum_sq[slot][k] - nf * mean * mean) / (nf - 1.0)).max(0.0);
            (var / nf).sqrt()
        } else {
            0.0
        };
        (Some(mean), Some(se))
    }
}

/// Splits `num_samples` into chunks of [`CHUNK`]; chunk `k` uses stream `k`.
fn chunked<T, F>(num_samples: u64, seed: u64, work: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut rand_chacha::ChaCha8Rng, u64) -> T + Sync,
{
    let chunks = num_samples.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|k| {
            let len = CHUNK.min(num_samples - k * CHUNK);
            work(&mut stream_rng(seed, k), len)
        })
        .collect()
}

/// Monte Carlo moments of `obs` with standard errors; deterministic per seed
/// and independent of the thread count.
pub fn mc_moments_of(spec: &STGroupSpec, n_max: u32, num_samples: u64, seed: u64, obs: Observable) -> MomentTable {
    let classes = spec.gamma().conjugacy_classes();
    let class_of = spec.gamma().class_index();
    let slots = classes.len() + 1;
    let n = n_max as usize;
    let parts = chunked(num_samples, seed, |rng, len| {
        let mut acc = Accum::new(slots, n);
        let mut vals = vec![0.0; n + 1];
        for _ in 0..len {
            let (g, t) = sample_trace(spec, rng);
            for (k, v) in vals.iter_mut().enumerate() {
                *v = obs.eval(t, k as u32).re;
            }
            acc.add(0, &vals);
            acc.add(1 + class_of[g], &vals);
        }
        acc
    });
    let total = parts.iter().fold(Accum::new(slots, n), |a, b| a.merge(b));
    let mut rows = Vec::new();
    for slot in 0..slots {
        for k in 0..=n_max {
            let (est, se) = total.estimate(slot, k as usize);
            rows.push(MomentRow {
                order: k,
                component_class: if slot == 0 { None } else { Some(slot - 1) },
                exact: None,
                exact_value: None,
                mc_estimate: est,
                mc_stderr: se,
                samples: total.count[slot],
            });
        }
    }
    MomentTable {
        observable: obs,
        n_max,
        rows,
    }
}

/// [`mc_moments_of`] for the natural observable.
pub fn mc_moments(spec: &STGroupSpec, n_max: u32, num_samples: u64, seed: u64) -> MomentTable {
    mc_moments_of(spec, n_max, num_samples, seed, Observable::natural(spec))
}

/// Exact columns where available, Monte Carlo columns always.
pub fn moment_table(spec: &STGroupSpec, n_max: u32, num_samples: u64, seed: u64) -> MomentTable {
    let obs = Observable::natural(spec);
    let mc = mc_moments_of(spec, n_max, num_samples, seed, obs);
    match group_moments(spec, n_max, obs) {
        Ok(mut t) => {
            t.merge_mc(&mc);
            t
        }
        Err(_) => mc,
    }
}

/// `tr Sym^e` evaluated at an SU(2) element of trace `t`.
pub fn sym_power_character(e: u32, t: f64) -> f64 {
    let (mut prev, mut cur) = (0.0, 1.0);
    for _ in 0..e {
        let next = t * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IrrepMean {
    pub estimate: Complex64,
    /// `sqrt(E|X − mean|² / n)` from the sample variance.
    pub stderr: f64,
    pub samples: u64,
}

impl IrrepMean {
    /// `|estimate − target| ≤ z · stderr`, with exact equality required when stderr is 0.
    pub fn consistent_with(&self, target: Complex64, z: f64) -> bool {
        let d = (self.estimate - target).norm();
        if self.stderr == 0.0 {
            d < 1e-12
        } else {
            d <= z * self.stderr
        }
    }
}

/// Monte Carlo estimate of `E[∏ tr Sym^{e_i}(g_i) · χ_η(h)]` under Haar measure.
pub fn irrep_mean(spec: &STGroupSpec, label: &IrrepLabel, num_samples: u64, seed: u64) -> Result<IrrepMean> {
    if !spec.has_trivial_action() {
        return Err(Error::Unsupported(
            "irreducible labels need a trivial permutation action".into(),
        ));
    }
    if label.e.len() != spec.m() || label.eta_on_gamma.len() != spec.gamma().order() {
        return Err(Error::DimensionMismatch("label does not belong to this spec".into()));
    }
    if num_samples == 0 {
        return Err(Error::EmptySample);
    }
    let chi: Vec<Complex64> = label.eta_on_gamma.iter().map(|z| z.to_complex()).collect();
    let parts = chunked(num_samples, seed, |rng, len| {
        let (mut s, mut s2) = (Complex64::new(0.0, 0.0), 0.0);
        for _ in 0..len {
            let ts: Vec<f64> = (0..spec.m()).map(|_| sample_su2_trace(rng)).collect();
            let g = rng.random_range(0..spec.gamma().order());
            let sym: f64 = label
                .e
                .iter()
                .zip(&ts)
                .map(|(&e, &t)| sym_power_character(e, t))
                .product();
            let x = chi[g] * sym;
            s += x;
            s2 += x.norm_sqr();
        }
        (s, s2)
    });
    let (s, s2) = parts
        .iter()
        .fold((Complex64::new(0.0, 0.0), 0.0), |(a, b), (c, d)| (a + c, b + d));
    let n = num_samples as f64;
    let mean = s / n;
    let stderr = if num_samples > 1 {
        (((s2 - n * mean.norm_sqr()) / (n - 1.0)).max(0.0) / n).sqrt()
    } else {
        0.0
    };
    Ok(IrrepMean {
        estimate: mean,
        stderr,
        samples: num_samples,
    })
}

/// Labels paired with their Monte Carlo means.
pub fn irrep_means(
    spec: &STGroupSpec,
    e_max: u32,
    num_samples: u64,
    seed: u64,
) -> Result<Vec<(IrrepLabel, IrrepMean)>> {
    crate::st_group::enumerate_irreps(spec, e_max)?
        .into_iter()
        .enumerate()
        .map(|(k, l)| {
            let m = irrep_mean(spec, &l, num_samples, seed.wrapping_add(k as u64))?;
            Ok((l, m))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::finite_group::{CycloMatrix, FiniteGroup};

    fn swap_spec() -> STGroupSpec {
        STGroupSpec::permutation_product(2, FiniteGroup::cyclic(2), vec![vec![0, 1], vec![1, 0]]).unwrap()
    }

    fn rat(z: &Cyclotomic) -> BigRational {
        z.to_rational().unwrap()
    }

    #[test]
    fn catalan_values_and_recurrence() {
        let expect = [1, 1, 2, 5, 14, 42, 132, 429, 1430];
        for (k, &c) in expect.iter().enumerate() {
            assert_eq!(su2_trace_moment(2 * k as u32), BigRational::from_integer(c.into()));
            assert!(su2_trace_moment(2 * k as u32 + 1).is_zero());
        }
        for k in 0..30u32 {
            let lhs = su2_trace_moment(2 * k + 2);
            let rhs = su2_trace_moment(2 * k) * BigRational::new((2 * (2 * k + 1)).into(), (k + 2).into());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn su2_moments_are_catalan() {
        let t = group_trace_moments(&STGroupSpec::su2(), 8).unwrap();
        let vals: Vec<BigRational> = t.aggregate().map(|r| rat(r.exact.as_ref().unwrap())).collect();
        let expect: Vec<BigRational> = (0..=8).map(su2_trace_moment).collect();
        assert_eq!(vals, expect);
    }

    #[test]
    fn swap_component_has_zero_moments() {
        let spec = swap_spec();
        let m = component_trace_moments(&spec, 1, 6).unwrap();
        assert!(m[0].is_one());
        assert!(m[1..].iter().all(|z| z.is_zero()));
        let t = group_trace_moments(&spec, 6).unwrap();
        let id = component_trace_moments(&spec, 0, 6).unwrap();
        for k in 0..=6 {
            let agg = rat(t.row(None, k).unwrap().exact.as_ref().unwrap());
            let half = if k == 0 {
                BigRational::one()
            } else {
                rat(&id[k as usize]) / BigRational::from_integer(2.into())
            };
            assert_eq!(agg, half);
        }
    }

    #[test]
    fn product_second_moment() {
        let spec = STGroupSpec::permutation_product(2, FiniteGroup::trivial(), vec![vec![0, 1]]).unwrap();
        let m = component_trace_moments(&spec, 0, 4).unwrap();
        assert_eq!(rat(&m[2]), BigRational::from_integer(2.into()));
    }

    #[test]
    fn complex_twist_uses_real_part() {
        let i = Cyclotomic::root_of_unity(4, 1);
        let twists = (0..4).map(|k| vec![CycloMatrix::scalar(1, &i.pow(k))]).collect();
        let spec = STGroupSpec::new(1, FiniteGroup::cyclic(4), None, Some(twists), 2, None, BTreeMap::new()).unwrap();
        assert_eq!(Observable::natural(&spec), Observable::RealPart);
        let t = group_trace_moments(&spec, 4).unwrap();
        // Re T = t on components 0, 2 (up to sign) and 0 on 1, 3
        assert_eq!(
            rat(t.row(None, 2).unwrap().exact.as_ref().unwrap()),
            BigRational::new(1.into(), 2.into())
        );
        let abs = group_moments(&spec, 4, Observable::AbsSquared).unwrap();
        assert_eq!(
            rat(abs.row(None, 1).unwrap().exact.as_ref().unwrap()),
            BigRational::one()
        );
    }

    #[test]
    fn budget_is_enforced() {
        let spec = STGroupSpec::permutation_product(2, FiniteGroup::trivial(), vec![vec![0, 1]]).unwrap();
        assert!(matches!(group_trace_moments(&spec, 40), Err(Error::Unsupported(_))));
    }

    #[test]
    fn mc_is_deterministic_and_single_sample_is_exact_power() {
        let spec = swap_spec();
        let a = mc_moments(&spec, 4, 1000, 3);
        let b = mc_moments(&spec, 4, 1000, 3);
        assert_eq!(a, b);
        let one = mc_moments(&STGroupSpec::su2(), 4, 1, 9);
        let (_, t) = sample_trace(&STGroupSpec::su2(), &mut stream_rng(9, 0));
        for k in 0..=4 {
            let r = one.row(None, k).unwrap();
            assert!((r.mc_estimate.unwrap() - t.re.powi(k as i32)).abs() < 1e-12);
            assert_eq!(r.mc_stderr, Some(0.0));
        }
    }

    #[test]
    fn mc_second_moment_near_one() {
        let t = mc_moments(&STGroupSpec::su2(), 2, 200_000, 1);
        let r = t.row(None, 2).unwrap();
        assert!((r.mc_estimate.unwrap() - 1.0).abs() <= 4.0 * r.mc_stderr.unwrap());
    }

    #[test]
    fn sym_power_characters() {
        // Sym^2 at t = 2cos θ is 1 + 2cos 2θ
        let th = 0.4f64;
        assert!((sym_power_character(2, 2.0 * th.cos()) - (1.0 + 2.0 * (2.0 * th).cos())).abs() < 1e-12);
        assert_eq!(sym_power_character(0, 0.3), 1.0);
    }

    #[test]
    fn trivial_label_mean_is_one() {
        let spec = STGroupSpec::su2();
        let labels = crate::st_group::enumerate_irreps(&spec, 2).unwrap();
        let m = irrep_mean(&spec, &labels[0], 100, 1).unwrap();
        assert!(m.consistent_with(Complex64::new(1.0, 0.0), 4.0));
        let e2 = labels.iter().find(|l| l.e == vec![2]).unwrap();
        let m = irrep_mean(&spec, e2, 100_000, 2).unwrap();
        assert!(m.consistent_with(Complex64::new(0.0, 0.0), 4.0));
    }

    #[test]
    fn csv_layout() {
        let t = group_trace_moments(&STGroupSpec::su2(), 4).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(
            lines[0],
            "order,component_class,exact_num,exact_den,mc_estimate,mc_stderr"
        );
        assert_eq!(lines[5], "4,all,2,1,,");
    }
}
