//! Sato-Tate group data `(SU(2)^m ⊗ twists) ⋊ Γ`: validation, realization of
//! elements as block-monomial unitary matrices, Haar sampling and irreducible
//! representation labels.

mod irreps;

use std::collections::BTreeMap;

use nalgebra::{DMatrix, Matrix2};
use num::complex::Complex64;
use num::integer::Integer;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite_group::{CycloMatrix, Cyclotomic, FiniteGroup};
use crate::rng::stream_rng;

pub use irreps::{enumerate_irreps, IrrepContext, IrrepLabel};

/// Tolerance for unitarity and determinant of freshly constructed SU(2) elements.
pub const UNITARITY_TOL: f64 = 1e-10;
/// Tolerance for floating-point matrix identities.
pub const MATRIX_TOL: f64 = 1e-8;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecRepr {
    m: usize,
    gamma: FiniteGroup,
    /// `action[γ][i] = σ_γ(i)`, 0-based; identity action when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    action: Option<Vec<Vec<usize>>>,
    /// `twists[γ][i]`; identity matrices when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    twists: Option<Vec<Vec<CycloMatrix>>>,
    a: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    block_dims: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    labels: BTreeMap<String, String>,
}

/// Blueprint of `(SU(2) × … × SU(2)) ⋊ Γ` with per-block unitary twists.
#[derive(Clone, Debug)]
pub struct STGroupSpec {
    m: usize,
    gamma: FiniteGroup,
    action: Vec<Vec<usize>>,
    twists: Vec<Vec<CycloMatrix>>,
    a: u32,
    block_dims: Vec<usize>,
    labels: BTreeMap<String, String>,
    // derived
    offsets: Vec<usize>,
    twists_c: Vec<Vec<DMatrix<Complex64>>>,
    twist_traces: Vec<Vec<Cyclotomic>>,
    twist_traces_c: Vec<Vec<Complex64>>,
}

impl Serialize for STGroupSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SpecRepr {
            m: self.m,
            gamma: self.gamma.clone(),
            action: Some(self.action.clone()),
            twists: Some(self.twists.clone()),
            a: self.a,
            block_dims: Some(self.block_dims.clone()),
            labels: self.labels.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for STGroupSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<STGroupSpec, D::Error> {
        let r = SpecRepr::deserialize(d)?;
        STGroupSpec::new(r.m, r.gamma, r.action, r.twists, r.a, r.block_dims, r.labels)
            .map_err(serde::de::Error::custom)
    }
}

/// One failed invariant with a witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationFailure {
    pub invariant: &'static str,
    pub witness: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ValidationReport {
    pub failures: Vec<ValidationFailure>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }

    fn fail(&mut self, invariant: &'static str, witness: String) {
        self.failures.push(ValidationFailure { invariant, witness });
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_valid() {
            return write!(f, "valid");
        }
        for (k, x) in self.failures.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            write!(f, "{}: {}", x.invariant, x.witness)?;
        }
        Ok(())
    }
}

impl STGroupSpec {
    /// Structural construction: shapes and index ranges only. Use
    /// [`validate_spec`] for the group-theoretic invariants.
    pub fn new(
        m: usize,
        gamma: FiniteGroup,
        action: Option<Vec<Vec<usize>>>,
        twists: Option<Vec<Vec<CycloMatrix>>>,
        a: u32,
        block_dims: Option<Vec<usize>>,
        labels: BTreeMap<String, String>,
    ) -> Result<STGroupSpec> {
        let n = gamma.order();
        if m == 0 {
            return Err(Error::InvalidSpec("m must be positive".into()));
        }
        if a == 0 {
            return Err(Error::InvalidSpec("a must be positive".into()));
        }
        let action = action.unwrap_or_else(|| vec![(0..m).collect(); n]);
        if action.len() != n || action.iter().any(|p| p.len() != m || p.iter().any(|&x| x >= m)) {
            return Err(Error::InvalidSpec(format!(
                "action must list {n} maps of {{0..{m}}} into itself"
            )));
        }
        let block_dims = match (&block_dims, &twists) {
            (Some(d), _) => d.clone(),
            (None, Some(t)) if !t.is_empty() && t[0].len() == m => t[0].iter().map(|x| x.dim()).collect(),
            _ => vec![1; m],
        };
        if block_dims.len() != m || block_dims.contains(&0) {
            return Err(Error::InvalidSpec("block_dims must list m positive sizes".into()));
        }
        let twists = twists.unwrap_or_else(|| vec![block_dims.iter().map(|&d| CycloMatrix::identity(d)).collect(); n]);
        if twists.len() != n || twists.iter().any(|row| row.len() != m) {
            return Err(Error::InvalidSpec(format!(
                "twists must be a {n} x {m} array of matrices"
            )));
        }
        for (g, row) in twists.iter().enumerate() {
            for (i, t) in row.iter().enumerate() {
                if t.dim() != block_dims[i] {
                    return Err(Error::DimensionMismatch(format!(
                        "twist ({g}, {i}) is {}x{}, block size is {}",
                        t.dim(),
                        t.dim(),
                        block_dims[i]
                    )));
                }
            }
        }
        let mut offsets = vec![0];
        for d in &block_dims {
            offsets.push(offsets.last().unwrap() + 2 * d);
        }
        let twists_c = twists
            .iter()
            .map(|row| row.iter().map(|t| t.to_complex()).collect())
            .collect();
        let twist_traces: Vec<Vec<Cyclotomic>> = twists
            .iter()
            .map(|row| row.iter().map(|t| t.trace()).collect())
            .collect();
        let twist_traces_c = twist_traces
            .iter()
            .map(|row| row.iter().map(|t| t.to_complex()).collect())
            .collect();
        Ok(STGroupSpec {
            m,
            gamma,
            action,
            twists,
            a,
            block_dims,
            labels,
            offsets,
            twists_c,
            twist_traces,
            twist_traces_c,
        })
    }

    /// `SU(2)` itself: m = 1, trivial Γ, a = 1.
    pub fn su2() -> STGroupSpec {
        STGroupSpec::new(1, FiniteGroup::trivial(), None, None, 1, None, BTreeMap::new()).unwrap()
    }

    /// m copies of SU(2) permuted by a group of permutations (trivial twists).
    pub fn permutation_product(m: usize, gamma: FiniteGroup, action: Vec<Vec<usize>>) -> Result<STGroupSpec> {
        STGroupSpec::new(m, gamma, Some(action), None, 1, None, BTreeMap::new())
    }

    pub fn from_json(text: &str) -> Result<STGroupSpec> {
        Ok(serde_json::from_str(text)?)
    }

    /// Parses and validates; invalid specs become [`Error::InvalidSpec`].
    pub fn load(text: &str) -> Result<STGroupSpec> {
        let spec = STGroupSpec::from_json(text)?;
        let report = validate_spec(&spec);
        if !report.is_valid() {
            return Err(Error::InvalidSpec(report.to_string()));
        }
        Ok(spec)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn gamma(&self) -> &FiniteGroup {
        &self.gamma
    }

    pub fn action(&self, g: usize) -> &[usize] {
        &self.action[g]
    }

    pub fn twist(&self, g: usize, i: usize) -> &CycloMatrix {
        &self.twists[g][i]
    }

    pub fn twist_trace(&self, g: usize, i: usize) -> &Cyclotomic {
        &self.twist_traces[g][i]
    }

    pub fn twist_trace_c(&self, g: usize, i: usize) -> Complex64 {
        self.twist_traces_c[g][i]
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.block_dims
    }

    pub fn labels(&self) -> &BTreeMap<String, String> {
        &self.labels
    }

    /// Size `Σ_i 2·N_i` of the embedding.
    pub fn matrix_dim(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn has_trivial_action(&self) -> bool {
        self.action.iter().all(|p| p.iter().enumerate().all(|(i, &x)| i == x))
    }

    /// Blocks fixed by `σ_γ`.
    pub fn fixed_blocks(&self, g: usize) -> impl Iterator<Item = usize> + '_ {
        self.action[g]
            .iter()
            .enumerate()
            .filter(|(i, &x)| *i == x)
            .map(|(i, _)| i)
    }

    /// True when every twist trace is real, so the trace of every element is real.
    pub fn has_real_traces(&self) -> bool {
        self.twist_traces.iter().flatten().all(|t| t.is_real())
    }
}

/// Checks every structural and group-theoretic invariant, collecting witnesses.
pub fn validate_spec(spec: &STGroupSpec) -> ValidationReport {
    let mut report = ValidationReport::default();
    let g = &spec.gamma;
    let n = g.order();
    let m = spec.m;
    let e = g.identity();

    for (s, p) in spec.action.iter().enumerate() {
        let mut seen = vec![false; m];
        for &x in p {
            seen[x] = true;
        }
        if seen.contains(&false) {
            report.fail("action is a permutation", format!("action[{s}] = {p:?}"));
        }
    }
    if spec.action[e].iter().enumerate().any(|(i, &x)| i != x) {
        report.fail("action(identity) = id", format!("{:?}", spec.action[e]));
    }
    let pairs = g.check_pairs();
    for &(s, t) in &pairs {
        let st = g.mul(s, t);
        if (0..m).any(|i| spec.action[st][i] != spec.action[s][spec.action[t][i]]) {
            report.fail(
                "action is a homomorphism",
                format!("sigma_(s t) != sigma_s sigma_t at (s, t) = ({s}, {t})"),
            );
            break;
        }
    }
    for i in 0..m {
        if !spec.twists[e][i].is_identity() {
            report.fail("twists(identity, i) = I", format!("block {i}"));
        }
    }
    for s in 0..n {
        for i in 0..m {
            let j = spec.action[s][i];
            if spec.block_dims[j] != spec.block_dims[i] {
                report.fail(
                    "block sizes are constant on orbits",
                    format!("sigma_{s} sends block {i} to block {j}"),
                );
            }
        }
    }
    if !report.is_valid() {
        return report;
    }

    let two_a = 2 * spec.a;
    for s in 0..n {
        for i in 0..m {
            let t = &spec.twists[s][i];
            if !t.is_unitary() {
                report.fail("twists are unitary", format!("twist ({s}, {i})"));
                continue;
            }
            match t.as_scalar() {
                Some(z) => match z.as_root_of_unity() {
                    Some(r) if two_a.is_multiple_of(r.order()) => {}
                    _ => report.fail("scalar twists lie in mu_2a", format!("twist ({s}, {i}) = {z}")),
                },
                None => {
                    if t.determinant().as_root_of_unity().is_none() {
                        report.fail("twists have finite order", format!("det of twist ({s}, {i})"));
                    }
                }
            }
        }
    }
    'outer: for &(s, t) in &pairs {
        let st = g.mul(s, t);
        for k in 0..m {
            let lhs = spec.twists[s][spec.action[t][k]].mul(&spec.twists[t][k]);
            let rhs = &spec.twists[st][k];
            if lhs != *rhs && lhs != rhs.neg() {
                report.fail(
                    "twists compose up to sign",
                    format!("twist(s, sigma_t({k})) twist(t, {k}) != ±twist(st, {k}) at (s, t) = ({s}, {t})"),
                );
                break 'outer;
            }
        }
    }
    report
}

/// An element `(g_1, …, g_m; γ)` with `g_i ∈ SU(2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct STElement {
    pub g: Vec<Matrix2<Complex64>>,
    pub component: usize,
}

/// `a + bi + cj + dk ↦ [[a + bi, c + di], [−c + di, a − bi]]`.
pub fn su2_from_quaternion(q: [f64; 4]) -> Matrix2<Complex64> {
    let [a, b, c, d] = q;
    Matrix2::new(
        Complex64::new(a, b),
        Complex64::new(c, d),
        Complex64::new(-c, d),
        Complex64::new(a, -b),
    )
}

/// Haar-distributed element of SU(2): a normalized Gaussian unit quaternion.
pub fn sample_su2<R: Rng + ?Sized>(rng: &mut R) -> Matrix2<Complex64> {
    loop {
        let q: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
        let norm = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return su2_from_quaternion(q.map(|x| x / norm));
        }
    }
}

impl STElement {
    pub fn new(g: Vec<Matrix2<Complex64>>, component: usize) -> Result<STElement> {
        let elem = STElement { g, component };
        elem.check()?;
        Ok(elem)
    }

    pub fn identity(spec: &STGroupSpec) -> STElement {
        STElement {
            g: vec![Matrix2::identity(); spec.m],
            component: spec.gamma.identity(),
        }
    }

    /// Unitarity and unit determinant of every factor to [`UNITARITY_TOL`].
    pub fn check(&self) -> Result<()> {
        for (i, g) in self.g.iter().enumerate() {
            let defect = (g * g.adjoint() - Matrix2::identity()).norm();
            let det = (g.determinant() - Complex64::new(1.0, 0.0)).norm();
            if defect >= UNITARITY_TOL || det >= UNITARITY_TOL {
                return Err(Error::Numerical(format!(
                    "factor {i} is not in SU(2) (defect {defect:e}, det {det:e})"
                )));
            }
        }
        Ok(())
    }
}

/// Draws Haar-random `g_i` and a uniform component (unless forced).
pub fn sample_element<R: Rng + ?Sized>(spec: &STGroupSpec, rng: &mut R, forced_component: Option<usize>) -> STElement {
    let g = (0..spec.m).map(|_| sample_su2(rng)).collect();
    let component = forced_component.unwrap_or_else(|| rng.random_range(0..spec.gamma.order()));
    STElement { g, component }
}

/// [`sample_element`] on stream 0 of `seed`.
pub fn sample_element_seeded(spec: &STGroupSpec, seed: u64, forced_component: Option<usize>) -> STElement {
    sample_element(spec, &mut stream_rng(seed, 0), forced_component)
}

fn check_shape(spec: &STGroupSpec, elem: &STElement) -> Result<()> {
    if elem.g.len() != spec.m {
        return Err(Error::DimensionMismatch(format!(
            "element has {} factors, spec has m = {}",
            elem.g.len(),
            spec.m
        )));
    }
    if elem.component >= spec.gamma.order() {
        return Err(Error::DimensionMismatch(format!(
            "component {} out of range",
            elem.component
        )));
    }
    Ok(())
}

/// Block-monomial unitary: block `(σ(i), i)` is `g_{σ(i)} ⊗ twist(γ, i)`.
pub fn embed_matrix(spec: &STGroupSpec, elem: &STElement) -> Result<DMatrix<Complex64>> {
    check_shape(spec, elem)?;
    let d = spec.matrix_dim();
    let mut out = DMatrix::<Complex64>::zeros(d, d);
    let s = elem.component;
    for i in 0..spec.m {
        let j = spec.action[s][i];
        let g = &elem.g[j];
        let t = &spec.twists_c[s][i];
        let nb = spec.block_dims[i];
        let (r0, c0) = (spec.offsets[j], spec.offsets[i]);
        for a in 0..2 {
            for b in 0..2 {
                for k in 0..nb {
                    for l in 0..nb {
                        out[(r0 + a * nb + k, c0 + b * nb + l)] = g[(a, b)] * t[(k, l)];
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `Σ_{σ(i) = i} tr(g_i)·tr(twist(γ, i))`.
pub fn trace(spec: &STGroupSpec, elem: &STElement) -> Complex64 {
    spec.fixed_blocks(elem.component)
        .map(|i| elem.g[i].trace() * spec.twist_traces_c[elem.component][i])
        .sum()
}

/// Characteristic polynomial `det(xI − M)`, coefficients in ascending degree.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CharPoly {
    pub coeffs: Vec<Complex64>,
}

impl CharPoly {
    pub fn from_roots(roots: &[Complex64]) -> CharPoly {
        let mut c = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
            for (k, &x) in c.iter().enumerate() {
                next[k + 1] += x;
                next[k] -= r * x;
            }
            c = next;
        }
        CharPoly { coeffs: c }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|c| c.im.abs() < tol)
    }

    /// `c_j = c_{d−j}` for all j.
    pub fn is_palindromic(&self, tol: f64) -> bool {
        let d = self.degree();
        (0..=d).all(|j| (self.coeffs[j] - self.coeffs[d - j]).norm() < tol)
    }

    pub fn real_coeffs(&self, tol: f64) -> Option<Vec<f64>> {
        self.is_real(tol).then(|| self.coeffs.iter().map(|c| c.re).collect())
    }

    pub fn max_distance(&self, other: &CharPoly) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn mul(&self, other: &CharPoly) -> CharPoly {
        let mut c = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        CharPoly { coeffs: c }
    }
}

/// Eigenvalues of a unitary matrix via a generic Hermitian combination of its
/// real and imaginary parts, whose eigenvectors are common eigenvectors.
pub fn unitary_eigenvalues(u: &DMatrix<Complex64>) -> Vec<Complex64> {
    let adj = u.adjoint();
    let re = (u + &adj).scale(0.5);
    let im = (u - &adj) * Complex64::new(0.0, -0.5);
    let gamma = 0.577_215_664_901_532_9;
    let h = re + im.scale(gamma);
    let eig = nalgebra::SymmetricEigen::new(h);
    (0..u.nrows())
        .map(|k| {
            let v = eig.eigenvectors.column(k);
            (v.adjoint() * u * v)[(0, 0)]
        })
        .collect()
}

pub fn char_poly(spec: &STGroupSpec, elem: &STElement) -> Result<CharPoly> {
    let m = embed_matrix(spec, elem)?;
    Ok(CharPoly::from_roots(&unitary_eigenvalues(&m)))
}

/// Twist matrices as complex matrices, for callers composing elements.
pub fn twist_complex(spec: &STGroupSpec, g: usize, i: usize) -> &DMatrix<Complex64> {
    &spec.twists_c[g][i]
}

/// Smallest n with every scalar twist in μ_n (1 when there are none).
pub fn scalar_twist_order(spec: &STGroupSpec) -> u32 {
    spec.twists
        .iter()
        .flatten()
        .filter_map(|t| t.as_scalar().and_then(|z| z.as_root_of_unity()))
        .fold(1, |acc, r| acc.lcm(&r.order()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn swap_spec() -> STGroupSpec {
        STGroupSpec::permutation_product(2, FiniteGroup::cyclic(2), vec![vec![0, 1], vec![1, 0]]).unwrap()
    }

    fn mu4_spec() -> STGroupSpec {
        let i = Cyclotomic::root_of_unity(4, 1);
        let twists = (0..4).map(|k| vec![CycloMatrix::scalar(2, &i.pow(k))]).collect();
        STGroupSpec::new(1, FiniteGroup::cyclic(4), None, Some(twists), 2, None, BTreeMap::new()).unwrap()
    }

    fn diag(theta: f64) -> Matrix2<Complex64> {
        Matrix2::new(
            Complex64::from_polar(1.0, theta),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::from_polar(1.0, -theta),
        )
    }

    #[test]
    fn validation_examples() {
        assert!(validate_spec(&STGroupSpec::su2()).is_valid());
        assert!(validate_spec(&swap_spec()).is_valid());
        assert!(validate_spec(&mu4_spec()).is_valid());
        assert_eq!(scalar_twist_order(&mu4_spec()), 4);
    }

    #[test]
    fn validation_reports_witnesses() {
        // not a homomorphism: Z/3 cannot act by a transposition
        let bad = STGroupSpec::permutation_product(2, FiniteGroup::cyclic(3), vec![vec![0, 1], vec![1, 0], vec![1, 0]])
            .unwrap();
        let r = validate_spec(&bad);
        assert!(r.failures.iter().any(|f| f.invariant == "action is a homomorphism"));
        // scalar twist outside mu_2a
        let i = Cyclotomic::root_of_unity(4, 1);
        let twists = (0..4).map(|k| vec![CycloMatrix::scalar(1, &i.pow(k))]).collect();
        let s = STGroupSpec::new(1, FiniteGroup::cyclic(4), None, Some(twists), 1, None, BTreeMap::new()).unwrap();
        assert!(validate_spec(&s)
            .failures
            .iter()
            .any(|f| f.invariant == "scalar twists lie in mu_2a"));
        // incompatible twists
        let z8 = Cyclotomic::root_of_unity(8, 1);
        let twists = vec![vec![CycloMatrix::identity(1)], vec![CycloMatrix::scalar(1, &z8)]];
        let s = STGroupSpec::new(1, FiniteGroup::cyclic(2), None, Some(twists), 4, None, BTreeMap::new()).unwrap();
        assert!(validate_spec(&s)
            .failures
            .iter()
            .any(|f| f.invariant == "twists compose up to sign"));
    }

    #[test]
    fn json_round_trip_and_defaults() {
        let s = STGroupSpec::load(r#"{"m": 2, "gamma": {"cyclic": 2}, "action": [[0, 1], [1, 0]], "a": 1}"#).unwrap();
        assert_eq!(s.matrix_dim(), 4);
        let back = STGroupSpec::load(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(back.twist(1, 0), s.twist(1, 0));
        assert!(STGroupSpec::load(r#"{"m": 1, "gamma": {"cyclic": 1}, "a": 1, "bogus": 0}"#).is_err());
    }

    #[test]
    fn embedding_examples() {
        let su2 = STGroupSpec::su2();
        let id = STElement::identity(&su2);
        assert!((embed_matrix(&su2, &id).unwrap() - DMatrix::identity(2, 2)).norm() < MATRIX_TOL);
        let g = sample_element_seeded(&su2, 1, None);
        let m = embed_matrix(&su2, &g).unwrap();
        assert!((m[(0, 1)] - g.g[0][(0, 1)]).norm() < 1e-15);

        let swap = swap_spec();
        let x = STElement::new(vec![Matrix2::identity(); 2], 1).unwrap();
        let p = embed_matrix(&swap, &x).unwrap();
        assert!(p.trace().norm() < MATRIX_TOL);
        assert!((&p * &p - DMatrix::identity(4, 4)).norm() < MATRIX_TOL);
        assert!(embed_matrix(
            &swap,
            &STElement {
                g: vec![Matrix2::identity()],
                component: 0
            }
        )
        .is_err());
    }

    #[test]
    fn trace_examples() {
        let su2 = STGroupSpec::su2();
        let x = STElement::new(vec![diag(0.7)], 0).unwrap();
        assert!((trace(&su2, &x) - Complex64::new(2.0 * 0.7f64.cos(), 0.0)).norm() < 1e-12);
        let prod = STGroupSpec::permutation_product(2, FiniteGroup::trivial(), vec![vec![0, 1]]).unwrap();
        let y = STElement::new(vec![diag(0.3), diag(1.1)], 0).unwrap();
        let expect = 2.0 * 0.3f64.cos() + 2.0 * 1.1f64.cos();
        assert!((trace(&prod, &y).re - expect).abs() < 1e-12);
        let mu4 = mu4_spec();
        let z = STElement::new(vec![diag(0.7)], 1).unwrap();
        assert!((trace(&mu4, &z) - Complex64::new(0.0, 4.0 * 0.7f64.cos())).norm() < 1e-12);
    }

    #[test]
    fn char_poly_examples() {
        let su2 = STGroupSpec::su2();
        let p = char_poly(&su2, &STElement::identity(&su2)).unwrap();
        let expect = CharPoly::from_roots(&[Complex64::new(1.0, 0.0); 2]);
        assert!(p.max_distance(&expect) < MATRIX_TOL);
        let t = 0.9f64;
        let q = char_poly(&su2, &STElement::new(vec![diag(t)], 0).unwrap()).unwrap();
        let c = q.real_coeffs(MATRIX_TOL).unwrap();
        assert!(
            (c[0] - 1.0).abs() < MATRIX_TOL
                && (c[1] + 2.0 * t.cos()).abs() < MATRIX_TOL
                && (c[2] - 1.0).abs() < MATRIX_TOL
        );
        let swap = swap_spec();
        for seed in 0..20 {
            let x = sample_element_seeded(&swap, seed, None);
            let p = char_poly(&swap, &x).unwrap();
            assert!(p.is_real(MATRIX_TOL) && p.is_palindromic(MATRIX_TOL));
        }
    }

    #[test]
    fn trace_matches_embedding_and_is_conjugation_invariant() {
        let specs = [STGroupSpec::su2(), swap_spec(), mu4_spec()];
        let mut rng = stream_rng(99, 0);
        for spec in &specs {
            for _ in 0..50 {
                let x = sample_element(spec, &mut rng, None);
                x.check().unwrap();
                let m = embed_matrix(spec, &x).unwrap();
                assert!((m.trace() - trace(spec, &x)).norm() < MATRIX_TOL);
                // conjugate by an identity-component element
                let c = sample_element(spec, &mut rng, Some(spec.gamma().identity()));
                let cm = embed_matrix(spec, &c).unwrap();
                let conj = &cm * &m * cm.adjoint();
                assert!((conj.trace() - m.trace()).norm() < MATRIX_TOL);
                let p1 = CharPoly::from_roots(&unitary_eigenvalues(&m));
                let p2 = CharPoly::from_roots(&unitary_eigenvalues(&conj));
                assert!(p1.max_distance(&p2) < MATRIX_TOL);
            }
        }
    }

    #[test]
    fn identity_component_char_poly_factors_by_block() {
        let prod = STGroupSpec::permutation_product(2, FiniteGroup::trivial(), vec![vec![0, 1]]).unwrap();
        let mut rng = stream_rng(5, 0);
        for _ in 0..20 {
            let x = sample_element(&prod, &mut rng, None);
            let whole = char_poly(&prod, &x).unwrap();
            let blocks = x.g.iter().fold(
                CharPoly {
                    coeffs: vec![Complex64::new(1.0, 0.0)],
                },
                |acc, g| {
                    let d = DMatrix::from_fn(2, 2, |i, j| g[(i, j)]);
                    acc.mul(&CharPoly::from_roots(&unitary_eigenvalues(&d)))
                },
            );
            assert!(whole.max_distance(&blocks) < MATRIX_TOL);
        }
    }

    #[test]
    fn forced_component_and_determinism() {
        let swap = swap_spec();
        for seed in 0..10 {
            assert_eq!(sample_element_seeded(&swap, seed, Some(0)).component, 0);
            assert_eq!(
                sample_element_seeded(&swap, seed, None),
                sample_element_seeded(&swap, seed, None)
            );
        }
    }
}
