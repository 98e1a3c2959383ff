//! Exact character tables of small finite groups.
//!
//! Irreducible characters are located numerically as eigenspaces of a generic
//! Hermitian element of the centre of the group algebra acting in the regular
//! representation, then made exact from the eigenvalue multiplicities of each
//! `ρ(g)` and verified by the orthogonality relations in exact arithmetic.

use nalgebra::DMatrix;
use num::complex::Complex64;
use num::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::cyclotomic::Cyclotomic;
use super::group::FiniteGroup;
use crate::error::{Error, Result};

/// Groups above this order are refused.
pub const MAX_TABLE_ORDER: usize = 256;

#[derive(Clone, Debug, Serialize)]
pub struct CharacterTable {
    classes: Vec<Vec<usize>>,
    #[serde(skip)]
    class_of: Vec<usize>,
    #[serde(skip)]
    identity: usize,
    /// `values[i][j]` = χ_i on class j; χ_0 is trivial.
    values: Vec<Vec<Cyclotomic>>,
}

impl CharacterTable {
    pub fn compute(group: &FiniteGroup) -> Result<CharacterTable> {
        let n = group.order();
        if n > MAX_TABLE_ORDER {
            return Err(Error::Unsupported(format!("character table of a group of order {n}")));
        }
        let classes = group.conjugacy_classes();
        let class_of = group.class_index();
        let mut last_err = None;
        for attempt in 0..8u64 {
            match try_table(group, &classes, attempt) {
                Ok(values) => {
                    return Ok(CharacterTable {
                        classes,
                        class_of,
                        identity: group.identity(),
                        values,
                    })
                }
                Err(e) => last_err = Some(e),
            }
        }
        Err(last_err.unwrap())
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn num_irreps(&self) -> usize {
        self.values.len()
    }

    pub fn degree(&self, i: usize) -> usize {
        self.values[i][self.class_of[self.identity]]
            .to_rational()
            .and_then(|q| q.to_integer().try_into().ok())
            .expect("degree is a positive integer")
    }

    pub fn value(&self, i: usize, element: usize) -> &Cyclotomic {
        &self.values[i][self.class_of[element]]
    }

    pub fn class_values(&self, i: usize) -> &[Cyclotomic] {
        &self.values[i]
    }

    /// χ_i as a function on elements.
    pub fn character(&self, i: usize) -> Vec<Cyclotomic> {
        self.class_of.iter().map(|&c| self.values[i][c].clone()).collect()
    }
}

fn try_table(group: &FiniteGroup, classes: &[Vec<usize>], attempt: u64) -> Result<Vec<Vec<Cyclotomic>>> {
    let n = group.order();
    let k = classes.len();
    let e = group.identity();
    let mut rng = ChaCha8Rng::seed_from_u64(0xc4a7_7ab1e ^ attempt);
    let weights: Vec<Complex64> = (0..k)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();

    // Z = Σ_j w_j C_j in the regular representation; H = Z + Z* is Hermitian.
    let mut z = DMatrix::<Complex64>::zeros(n, n);
    for (j, class) in classes.iter().enumerate() {
        for &g in class {
            for x in 0..n {
                z[(group.mul(g, x), x)] += weights[j];
            }
        }
    }
    let h = &z + z.adjoint();
    let eig = nalgebra::SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let tol = 1e-6;
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for &i in &order {
        match clusters.last_mut() {
            Some(c) if (eig.eigenvalues[i] - eig.eigenvalues[*c.last().unwrap()]).abs() < tol => c.push(i),
            _ => clusters.push(vec![i]),
        }
    }
    if clusters.len() != k {
        return Err(Error::Numerical(format!(
            "found {} eigenspaces for {} classes",
            clusters.len(),
            k
        )));
    }

    let mut table = Vec::with_capacity(k);
    for cluster in &clusters {
        let d2 = cluster.len();
        let d = (d2 as f64).sqrt().round() as usize;
        if d * d != d2 {
            return Err(Error::Numerical("eigenspace dimension is not a square".into()));
        }
        // P[h][e] = (d/|G|)·conj χ(h) for the isotypic projector P
        let chi_num: Vec<Complex64> = (0..n)
            .map(|x| {
                let p: Complex64 = cluster
                    .iter()
                    .map(|&c| eig.eigenvectors[(x, c)] * eig.eigenvectors[(e, c)].conj())
                    .sum();
                p.conj() * (n as f64 / d as f64)
            })
            .collect();
        let row = classes
            .iter()
            .map(|class| exactify(group, class[0], &chi_num, d))
            .collect::<Result<Vec<_>>>()?;
        table.push(row);
    }
    verify_orthogonality(classes, &table, n)?;
    sort_table(&mut table);
    Ok(table)
}

/// Reconstructs χ(g) exactly as Σ_k m_k ζ_m^k where m_k are the multiplicities
/// of the eigenvalue ζ_m^k of ρ(g), m = ord(g).
fn exactify(group: &FiniteGroup, g: usize, chi: &[Complex64], degree: usize) -> Result<Cyclotomic> {
    let m = group.element_order(g);
    let powers: Vec<Complex64> = (0..m).map(|j| chi[group.pow(g, j)]).collect();
    let mut total = 0usize;
    let mut value = Cyclotomic::zero(m as u32);
    for k in 0..m {
        let mult: Complex64 = powers
            .iter()
            .enumerate()
            .map(|(j, &c)| {
                let ang = -2.0 * std::f64::consts::PI * (j * k % m) as f64 / m as f64;
                c * Complex64::new(ang.cos(), ang.sin())
            })
            .sum::<Complex64>()
            / m as f64;
        let r = mult.re.round();
        if (mult - Complex64::new(r, 0.0)).norm() > 1e-4 || r < 0.0 {
            return Err(Error::Numerical(format!("non-integral eigenvalue multiplicity {mult}")));
        }
        let r = r as usize;
        total += r;
        if r > 0 {
            value = value + Cyclotomic::root_of_unity(m as u32, k as i64).scale(&BigRational::from_integer(r.into()));
        }
    }
    if total != degree {
        return Err(Error::Numerical(
            "eigenvalue multiplicities do not sum to the degree".into(),
        ));
    }
    Ok(value)
}

fn verify_orthogonality(classes: &[Vec<usize>], table: &[Vec<Cyclotomic>], n: usize) -> Result<()> {
    for (a, ra) in table.iter().enumerate() {
        for (b, rb) in table.iter().enumerate().skip(a) {
            let mut s = Cyclotomic::zero(1);
            for (j, class) in classes.iter().enumerate() {
                let term = &ra[j] * &rb[j].conj();
                s = s + term.scale(&BigRational::from_integer(class.len().into()));
            }
            let expected = if a == b {
                Cyclotomic::from_integer(n as i64)
            } else {
                Cyclotomic::zero(1)
            };
            if s != expected {
                return Err(Error::Numerical(format!("orthogonality fails for characters {a}, {b}")));
            }
        }
    }
    Ok(())
}

/// Trivial character first, then by degree, then by numeric values.
fn sort_table(table: &mut [Vec<Cyclotomic>]) {
    let key = |row: &Vec<Cyclotomic>| -> Vec<(i64, i64)> {
        row.iter()
            .map(|z| {
                let c = z.to_complex();
                ((c.re * 1e6).round() as i64, (c.im * 1e6).round() as i64)
            })
            .collect()
    };
    table.sort_by(|a, b| {
        let ta = a.iter().all(|z| z.is_one());
        let tb = b.iter().all(|z| z.is_one());
        tb.cmp(&ta)
            .then_with(|| key(a)[0].cmp(&key(b)[0]))
            .then_with(|| key(a).cmp(&key(b)))
    });
}
