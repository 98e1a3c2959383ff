//! Normalized 2-cocycles with values in roots of unity (trivial action), their
//! coboundaries, and splitting by linear algebra over Z/N.

use num::integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::cyclotomic::{Cyclotomic, RootOfUnity};
use super::group::{FiniteGroup, EXHAUSTIVE_LIMIT};
use crate::error::{Error, Result};

fn to_root(z: &Cyclotomic) -> Result<RootOfUnity> {
    z.as_root_of_unity()
        .ok_or_else(|| Error::NotARootOfUnity(z.to_string()))
}

/// A normalized 2-cochain `c: G × G → μ_∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle2 {
    group: FiniteGroup,
    values: Vec<RootOfUnity>,
}

impl Cocycle2 {
    pub fn new(group: &FiniteGroup, values: Vec<Vec<Cyclotomic>>) -> Result<Cocycle2> {
        let n = group.order();
        if values.len() != n || values.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(format!("cochain table must be {n}x{n}")));
        }
        let roots = values.iter().flatten().map(to_root).collect::<Result<Vec<_>>>()?;
        Cocycle2::from_roots(group, roots)
    }

    /// `values[s * |G| + t] = c(s, t)`.
    pub fn from_roots(group: &FiniteGroup, values: Vec<RootOfUnity>) -> Result<Cocycle2> {
        let n = group.order();
        if values.len() != n * n {
            return Err(Error::DimensionMismatch(format!("cochain needs {} values", n * n)));
        }
        let e = group.identity();
        for x in 0..n {
            if !values[e * n + x].is_one() {
                return Err(Error::NotNormalized(e, x));
            }
            if !values[x * n + e].is_one() {
                return Err(Error::NotNormalized(x, e));
            }
        }
        Ok(Cocycle2 {
            group: group.clone(),
            values,
        })
    }

    pub fn trivial(group: &FiniteGroup) -> Cocycle2 {
        let n = group.order();
        Cocycle2 {
            group: group.clone(),
            values: vec![RootOfUnity::one(); n * n],
        }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn root(&self, s: usize, t: usize) -> RootOfUnity {
        self.values[s * self.group.order() + t]
    }

    pub fn value(&self, s: usize, t: usize) -> Cyclotomic {
        self.root(s, t).to_cyclotomic()
    }

    pub fn roots(&self) -> &[RootOfUnity] {
        &self.values
    }

    /// Smallest n with every value in μ_n.
    pub fn value_order(&self) -> u32 {
        self.values.iter().fold(1, |acc, r| acc.lcm(&r.order()))
    }

    /// First triple violating `c(s,t)c(st,u) = c(t,u)c(s,tu)`, if any. Exhaustive
    /// up to order [`EXHAUSTIVE_LIMIT`], sampled above.
    pub fn cocycle_witness(&self) -> Option<(usize, usize, usize)> {
        let g = &self.group;
        let n = g.order();
        let ok = |s: usize, t: usize, u: usize| {
            self.root(s, t) * self.root(g.mul(s, t), u) == self.root(t, u) * self.root(s, g.mul(t, u))
        };
        if n <= EXHAUSTIVE_LIMIT {
            for s in 0..n {
                for t in 0..n {
                    for u in 0..n {
                        if !ok(s, t, u) {
                            return Some((s, t, u));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0xc0c7c1e);
            for _ in 0..20_000 {
                let (s, t, u) = (rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n));
                if !ok(s, t, u) {
                    return Some((s, t, u));
                }
            }
        }
        None
    }

    /// Pulls the cochain back along a surjective homomorphism `proj: ext → G`.
    pub fn inflate(&self, ext: &FiniteGroup, proj: &[usize]) -> Result<Cocycle2> {
        let n = ext.order();
        if proj.len() != n || proj.iter().any(|&x| x >= self.group.order()) {
            return Err(Error::DimensionMismatch("projection has wrong length or range".into()));
        }
        for (a, b) in ext.check_pairs() {
            if proj[ext.mul(a, b)] != self.group.mul(proj[a], proj[b]) {
                return Err(Error::NotAHomomorphism(format!("projection fails at ({a}, {b})")));
            }
        }
        let values = (0..n * n).map(|k| self.root(proj[k / n], proj[k % n])).collect();
        Cocycle2::from_roots(ext, values)
    }
}

/// `c(s,t)·c(st,u) = c(t,u)·c(s,tu)` for all triples.
pub fn verify_cocycle(c: &Cocycle2) -> bool {
    c.cocycle_witness().is_none()
}

/// A 1-cochain `α: G → μ_∞` with `α(1) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Splitting {
    group: FiniteGroup,
    alpha: Vec<RootOfUnity>,
}

impl Splitting {
    pub fn new(group: &FiniteGroup, alpha: Vec<Cyclotomic>) -> Result<Splitting> {
        let roots = alpha.iter().map(to_root).collect::<Result<Vec<_>>>()?;
        Splitting::from_roots(group, roots)
    }

    pub fn from_roots(group: &FiniteGroup, alpha: Vec<RootOfUnity>) -> Result<Splitting> {
        if alpha.len() != group.order() {
            return Err(Error::DimensionMismatch(format!(
                "1-cochain needs {} values",
                group.order()
            )));
        }
        if !alpha[group.identity()].is_one() {
            return Err(Error::NotNormalized(group.identity(), group.identity()));
        }
        Ok(Splitting {
            group: group.clone(),
            alpha,
        })
    }

    pub fn trivial(group: &FiniteGroup) -> Splitting {
        Splitting {
            group: group.clone(),
            alpha: vec![RootOfUnity::one(); group.order()],
        }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn root(&self, s: usize) -> RootOfUnity {
        self.alpha[s]
    }

    pub fn value(&self, s: usize) -> Cyclotomic {
        self.alpha[s].to_cyclotomic()
    }

    pub fn roots(&self) -> &[RootOfUnity] {
        &self.alpha
    }

    pub fn value_order(&self) -> u32 {
        self.alpha.iter().fold(1, |acc, r| acc.lcm(&r.order()))
    }
}

/// `c(s,t) = α(s)α(t)/α(st)`.
pub fn coboundary(alpha: &Splitting) -> Cocycle2 {
    let g = &alpha.group;
    let n = g.order();
    let values = (0..n * n)
        .map(|k| {
            let (s, t) = (k / n, k % n);
            alpha.root(s) * alpha.root(t) * alpha.root(g.mul(s, t)).inv()
        })
        .collect();
    Cocycle2 {
        group: g.clone(),
        values,
    }
}

/// Outcome of solving the splitting system at one modulus N.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModulusAttempt {
    pub modulus: u32,
    /// Rank of the exponent system over Z/N (number of nonzero invariant factors).
    pub rank: usize,
    /// Number of diagonalized equations with no solution mod N.
    pub rank_defect: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub value_order: u32,
    pub max_order: u32,
    pub attempts: Vec<ModulusAttempt>,
}

impl ObstructionReport {
    pub fn smallest_tested(&self) -> Option<&ModulusAttempt> {
        self.attempts.first()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SplitOutcome {
    Split(Splitting),
    Obstructed(ObstructionReport),
}

impl SplitOutcome {
    pub fn splitting(&self) -> Option<&Splitting> {
        match self {
            SplitOutcome::Split(s) => Some(s),
            SplitOutcome::Obstructed(_) => None,
        }
    }
}

/// Finds `α` with `coboundary(α) = c`, taking values in μ_N for the smallest
/// multiple N of the value order of `c` with N ≤ `max_order` that admits one.
pub fn split_cocycle(c: &Cocycle2, max_order: u32) -> Result<SplitOutcome> {
    if let Some((s, t, u)) = c.cocycle_witness() {
        return Err(Error::NotACocycle(s, t, u));
    }
    let n0 = c.value_order();
    let mut attempts = Vec::new();
    let mut modulus = n0;
    while modulus <= max_order {
        match solve_mod(c, modulus) {
            Ok(exps) => {
                let alpha = exps.iter().map(|&k| RootOfUnity::new(k, modulus)).collect();
                let s = Splitting::from_roots(&c.group, alpha)?;
                debug_assert_eq!(coboundary(&s), *c);
                return Ok(SplitOutcome::Split(s));
            }
            Err(attempt) => attempts.push(attempt),
        }
        modulus += n0;
    }
    Ok(SplitOutcome::Obstructed(ObstructionReport {
        value_order: n0,
        max_order,
        attempts,
    }))
}

/// Solves `x_s + x_t − x_{st} ≡ k(s,t) (mod N)` with `x_1 = 0`, where
/// `c(s,t) = ζ_N^{k(s,t)}`.
fn solve_mod(c: &Cocycle2, modulus: u32) -> std::result::Result<Vec<i64>, ModulusAttempt> {
    let g = &c.group;
    let n = g.order();
    let big_n = modulus as i64;
    let e = g.identity();
    let unknowns: Vec<usize> = (0..n).filter(|&s| s != e).collect();
    let col_of = |s: usize| unknowns.iter().position(|&u| u == s);
    let cols = unknowns.len();

    let mut a: Vec<Vec<i64>> = Vec::new();
    let mut b: Vec<i64> = Vec::new();
    for &s in &unknowns {
        for &t in &unknowns {
            let mut row = vec![0i64; cols];
            for (x, sign) in [(s, 1), (t, 1), (g.mul(s, t), -1)] {
                if let Some(j) = col_of(x) {
                    row[j] = (row[j] + sign).rem_euclid(big_n);
                }
            }
            a.push(row);
            b.push(
                c.root(s, t)
                    .exponent_in(modulus)
                    .expect("modulus is a multiple of the value order") as i64,
            );
        }
    }
    let (diag, b_t, v) = diagonalize_mod(&mut a, &mut b, cols, big_n);

    let mut y = vec![0i64; cols];
    let mut rank = 0;
    let mut defect = 0;
    for i in 0..b_t.len() {
        let d = if i < cols { diag[i] } else { 0 };
        if d != 0 {
            rank += 1;
        }
        let gd = d.gcd(&big_n);
        if b_t[i].rem_euclid(gd) != 0 {
            defect += 1;
            continue;
        }
        if i < cols && d != 0 {
            let m = big_n / gd;
            let inv = mod_inverse((d / gd).rem_euclid(m), m);
            y[i] = ((b_t[i] / gd).rem_euclid(m) as i128 * inv as i128).rem_euclid(m as i128) as i64;
        }
    }
    if defect > 0 {
        return Err(ModulusAttempt {
            modulus,
            rank,
            rank_defect: defect,
        });
    }
    let mut exps = vec![0i64; n];
    for (j, &s) in unknowns.iter().enumerate() {
        exps[s] = (0..cols).fold(0i64, |acc, k| (acc + v[j][k] * y[k]).rem_euclid(big_n));
    }
    Ok(exps)
}

fn mod_inverse(a: i64, m: i64) -> i64 {
    if m == 1 {
        return 0;
    }
    let ext = a.extended_gcd(&m);
    debug_assert_eq!(ext.gcd, 1);
    ext.x.rem_euclid(m)
}

/// Coefficients of the unimodular map `(u, w) ↦ (x·u + y·w, −q'·u + p'·w)`
/// sending `(p, q)` to `(gcd, 0)`. When `p | q` it is the elementary step, so
/// the pivot only changes when it strictly decreases.
fn gcd_step(p: i64, q: i64) -> (i64, i64, i64, i64) {
    if q % p == 0 {
        return (1, 0, 1, q / p);
    }
    let ext = p.extended_gcd(&q);
    (ext.x, ext.y, p / ext.gcd, q / ext.gcd)
}

/// Reduces `A` to diagonal form `U·A·V` over Z/N by unimodular gcd steps.
/// Returns the diagonal, `U·b`, and `V`.
fn diagonalize_mod(a: &mut [Vec<i64>], b: &mut [i64], cols: usize, n: i64) -> (Vec<i64>, Vec<i64>, Vec<Vec<i64>>) {
    let rows = a.len();
    let mut v: Vec<Vec<i64>> = (0..cols)
        .map(|i| (0..cols).map(|j| i64::from(i == j)).collect())
        .collect();
    let r = |x: i64| x.rem_euclid(n);
    for k in 0..cols.min(rows) {
        // bring some nonzero entry of the trailing block to (k, k)
        let Some((pi, pj)) = (k..rows)
            .flat_map(|i| (k..cols).map(move |j| (i, j)))
            .find(|&(i, j)| a[i][j] != 0)
        else {
            break;
        };
        a.swap(k, pi);
        b.swap(k, pi);
        if pj != k {
            for row in a.iter_mut() {
                row.swap(k, pj);
            }
            for row in v.iter_mut() {
                row.swap(k, pj);
            }
        }
        loop {
            // clear column k below the pivot
            for i in k + 1..rows {
                if a[i][k] == 0 {
                    continue;
                }
                let (x, y, pg, qg) = gcd_step(a[k][k], a[i][k]);
                for j in k..cols {
                    let (u, w) = (a[k][j], a[i][j]);
                    a[k][j] = r(x * u + y * w);
                    a[i][j] = r(-qg * u + pg * w);
                }
                let (u, w) = (b[k], b[i]);
                b[k] = r(x * u + y * w);
                b[i] = r(-qg * u + pg * w);
            }
            // clear row k right of the pivot
            let mut dirty = false;
            for j in k + 1..cols {
                if a[k][j] == 0 {
                    continue;
                }
                let (x, y, pg, qg) = gcd_step(a[k][k], a[k][j]);
                for i in k..rows {
                    let (u, w) = (a[i][k], a[i][j]);
                    a[i][k] = r(x * u + y * w);
                    a[i][j] = r(-qg * u + pg * w);
                    if i > k && a[i][k] != 0 {
                        dirty = true;
                    }
                }
                for row in v.iter_mut() {
                    let (u, w) = (row[k], row[j]);
                    row[k] = r(x * u + y * w);
                    row[j] = r(-qg * u + pg * w);
                }
            }
            if !dirty {
                break;
            }
        }
    }
    let diag = (0..cols).map(|k| if k < rows { a[k][k] } else { 0 }).collect();
    (diag, b.to_vec(), v)
}

/// The cochain on Z/2 × Z/2 obtained from the quaternion group Q8 with the
/// section `(1,0) ↦ i`, `(0,1) ↦ j`, `(1,1) ↦ k`. Its class is nontrivial.
pub fn quaternion_cocycle() -> Cocycle2 {
    // unit products: UNIT[a][b] = (sign, c) with u_a·u_b = sign·u_c, units 1, i, j, k
    const UNIT: [[(i8, usize); 4]; 4] = [
        [(1, 0), (1, 1), (1, 2), (1, 3)],
        [(1, 1), (-1, 0), (1, 3), (-1, 2)],
        [(1, 2), (-1, 3), (-1, 0), (1, 1)],
        [(1, 3), (1, 2), (-1, 1), (-1, 0)],
    ];
    let v4 = klein_four();
    // index 2x + y of (x, y) -> quaternion unit
    let unit_of = [0usize, 2, 1, 3];
    let values = (0..16)
        .map(|k| {
            let (s, t) = (k / 4, k % 4);
            let (sign, _) = UNIT[unit_of[s]][unit_of[t]];
            if sign < 0 {
                RootOfUnity::minus_one()
            } else {
                RootOfUnity::one()
            }
        })
        .collect();
    Cocycle2::from_roots(&v4, values).expect("normalized")
}

/// The μ_2-valued cocycle on Z/2 × Z/2 with `c(s,t) = −1` iff both first
/// coordinates are 1, i.e. the class of the extension by Z/4 × Z/2.
pub fn cyclic_extension_cocycle() -> Cocycle2 {
    let v4 = klein_four();
    let values = (0..16)
        .map(|k| {
            if (k / 4) >= 2 && (k % 4) >= 2 {
                RootOfUnity::minus_one()
            } else {
                RootOfUnity::one()
            }
        })
        .collect();
    Cocycle2::from_roots(&v4, values).expect("normalized")
}

pub fn klein_four() -> FiniteGroup {
    FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CocycleRepr {
    group: FiniteGroup,
    values: Vec<Vec<Cyclotomic>>,
}

impl Serialize for Cocycle2 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.group.order();
        let values = (0..n).map(|i| (0..n).map(|j| self.value(i, j)).collect()).collect();
        CocycleRepr {
            group: self.group.clone(),
            values,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cocycle2 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Cocycle2, D::Error> {
        let r = CocycleRepr::deserialize(d)?;
        Cocycle2::new(&r.group, r.values).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SplittingRepr {
    group: FiniteGroup,
    alpha: Vec<Cyclotomic>,
}

impl Serialize for Splitting {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let alpha = (0..self.group.order()).map(|i| self.value(i)).collect();
        SplittingRepr {
            group: self.group.clone(),
            alpha,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Splitting {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Splitting, D::Error> {
        let r = SplittingRepr::deserialize(d)?;
        Splitting::new(&r.group, r.alpha).map_err(serde::de::Error::custom)
    }
}
