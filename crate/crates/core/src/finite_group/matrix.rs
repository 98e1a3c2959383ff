//! Square matrices with exact cyclotomic entries.

use std::fmt;

use nalgebra::DMatrix;
use num::complex::Complex64;
use num::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::cyclotomic::Cyclotomic;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloMatrix {
    dim: usize,
    entries: Vec<Cyclotomic>,
}

impl CycloMatrix {
    pub fn from_rows(rows: Vec<Vec<Cyclotomic>>) -> Option<CycloMatrix> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return None;
        }
        Some(CycloMatrix {
            dim,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn identity(dim: usize) -> CycloMatrix {
        CycloMatrix::scalar(dim, &Cyclotomic::from_integer(1))
    }

    pub fn scalar(dim: usize, z: &Cyclotomic) -> CycloMatrix {
        let zero = Cyclotomic::zero(z.order());
        let entries = (0..dim * dim)
            .map(|k| if k % (dim + 1) == 0 { z.clone() } else { zero.clone() })
            .collect();
        CycloMatrix { dim, entries }
    }

    pub fn diagonal(diag: &[Cyclotomic]) -> CycloMatrix {
        let dim = diag.len();
        let mut entries = vec![Cyclotomic::zero(1); dim * dim];
        for (i, z) in diag.iter().enumerate() {
            entries[i * dim + i] = z.clone();
        }
        CycloMatrix { dim, entries }
    }

    pub fn block_diagonal(blocks: &[CycloMatrix]) -> CycloMatrix {
        let dim: usize = blocks.iter().map(|b| b.dim).sum();
        let mut entries = vec![Cyclotomic::zero(1); dim * dim];
        let mut off = 0;
        for b in blocks {
            for i in 0..b.dim {
                for j in 0..b.dim {
                    entries[(off + i) * dim + off + j] = b.get(i, j).clone();
                }
            }
            off += b.dim;
        }
        CycloMatrix { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &Cyclotomic {
        &self.entries[i * self.dim + j]
    }

    pub fn entries(&self) -> &[Cyclotomic] {
        &self.entries
    }

    pub fn mul(&self, rhs: &CycloMatrix) -> CycloMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        let n = self.dim;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc: Option<Cyclotomic> = None;
                for k in 0..n {
                    let a = self.get(i, k);
                    let b = rhs.get(k, j);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    let p = a * b;
                    acc = Some(match acc {
                        None => p,
                        Some(s) => s + p,
                    });
                }
                entries.push(acc.unwrap_or_else(|| Cyclotomic::zero(1)));
            }
        }
        CycloMatrix { dim: n, entries }
    }

    pub fn scale(&self, z: &Cyclotomic) -> CycloMatrix {
        CycloMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e * z).collect(),
        }
    }

    pub fn neg(&self) -> CycloMatrix {
        CycloMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|e| -e).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CycloMatrix {
        let n = self.dim;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(self.get(j, i).conj());
            }
        }
        CycloMatrix { dim: n, entries }
    }

    pub fn kron(&self, rhs: &CycloMatrix) -> CycloMatrix {
        let (n, m) = (self.dim, rhs.dim);
        let d = n * m;
        let mut entries = vec![Cyclotomic::zero(1); d * d];
        for i in 0..n {
            for j in 0..n {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..m {
                    for l in 0..m {
                        entries[(i * m + k) * d + j * m + l] = a * rhs.get(k, l);
                    }
                }
            }
        }
        CycloMatrix { dim: d, entries }
    }

    pub fn trace(&self) -> Cyclotomic {
        (0..self.dim).fold(Cyclotomic::zero(1), |acc, i| acc + self.get(i, i))
    }

    pub fn is_identity(&self) -> bool {
        (0..self.dim).all(|i| {
            (0..self.dim).all(|j| {
                if i == j {
                    self.get(i, j).is_one()
                } else {
                    self.get(i, j).is_zero()
                }
            })
        })
    }

    /// `M·M* = I`, exactly.
    pub fn is_unitary(&self) -> bool {
        self.mul(&self.adjoint()).is_identity()
    }

    /// Returns `Some(z)` when the matrix is `z·I`.
    pub fn as_scalar(&self) -> Option<Cyclotomic> {
        let z = self.get(0, 0).clone();
        for i in 0..self.dim {
            for j in 0..self.dim {
                let e = self.get(i, j);
                let ok = if i == j { *e == z } else { e.is_zero() };
                if !ok {
                    return None;
                }
            }
        }
        Some(z)
    }

    /// Exact determinant by cofactor-free elimination over Q(ζ_n).
    pub fn determinant(&self) -> Cyclotomic {
        let n = self.dim;
        let mut a: Vec<Vec<Cyclotomic>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut det = Cyclotomic::from_integer(1);
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
                return Cyclotomic::zero(1);
            };
            if piv != col {
                a.swap(piv, col);
                det = -det;
            }
            det = &det * &a[col][col];
            let inv = a[col][col].inverse().unwrap();
            for r in col + 1..n {
                if a[r][col].is_zero() {
                    continue;
                }
                let f = &a[r][col] * &inv;
                for c in col..n {
                    let t = &f * &a[col][c];
                    a[r][c] = &a[r][c] - &t;
                }
            }
        }
        det
    }

    /// Lifts every entry into Q(ζ_order); `None` if some entry needs a larger field.
    pub fn lift(&self, order: u32) -> Option<CycloMatrix> {
        let entries = self.entries.iter().map(|e| e.lift(order)).collect::<Option<Vec<_>>>()?;
        Some(CycloMatrix { dim: self.dim, entries })
    }

    /// Least common multiple of the entries' ambient orders.
    pub fn ambient_order(&self) -> u32 {
        use num::integer::Integer;
        self.entries.iter().fold(1u32, |acc, e| acc.lcm(&e.order()))
    }

    /// Hashable coordinates of all entries in Q(ζ_order).
    pub fn key(&self, order: u32) -> Vec<BigRational> {
        self.entries
            .iter()
            .flat_map(|e| e.lift(order).expect("entry outside ambient field").coeffs().to_vec())
            .collect()
    }

    /// Representative of `{M, -M}` whose first nonzero entry (row-major) has
    /// argument in `[0, π)`.
    pub fn sign_normalized(&self) -> CycloMatrix {
        for e in &self.entries {
            if e.is_zero() {
                continue;
            }
            let im_zero = e.is_real();
            let z = e.to_complex();
            let upper = if im_zero { z.re > 0.0 } else { z.im > 0.0 };
            return if upper { self.clone() } else { self.neg() };
        }
        self.clone()
    }

    pub fn to_complex(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.dim, self.dim, |i, j| self.get(i, j).to_complex())
    }
}

impl fmt::Display for CycloMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.dim {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.dim {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

impl Serialize for CycloMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<&[Cyclotomic]> = self.entries.chunks(self.dim).collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycloMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<CycloMatrix, D::Error> {
        let rows = Vec::<Vec<Cyclotomic>>::deserialize(d)?;
        CycloMatrix::from_rows(rows).ok_or_else(|| serde::de::Error::custom("matrix must be square and non-empty"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn i4() -> Cyclotomic {
        Cyclotomic::root_of_unity(4, 1)
    }

    #[test]
    fn quaternion_units_are_unitary() {
        let zero = Cyclotomic::zero(4);
        let qi = CycloMatrix::diagonal(&[i4(), -i4()]);
        let qj = CycloMatrix::from_rows(vec![
            vec![zero.clone(), Cyclotomic::from_integer(1)],
            vec![Cyclotomic::from_integer(-1), zero],
        ])
        .unwrap();
        assert!(qi.is_unitary() && qj.is_unitary());
        let k = qi.mul(&qj);
        assert_eq!(k.mul(&k), CycloMatrix::identity(2).neg());
        assert_eq!(k.determinant(), Cyclotomic::from_integer(1));
    }

    #[test]
    fn sign_normalization_picks_upper_half_plane() {
        let m = CycloMatrix::diagonal(&[-i4(), i4()]);
        let n = m.sign_normalized();
        assert_eq!(n, m.neg());
        assert_eq!(n.neg().sign_normalized(), n);
        let real = CycloMatrix::diagonal(&[Cyclotomic::from_integer(-2)]);
        assert_eq!(real.sign_normalized(), real.neg());
    }

    #[test]
    fn kron_trace_multiplies() {
        let a = CycloMatrix::diagonal(&[i4(), Cyclotomic::from_integer(3)]);
        let b = CycloMatrix::diagonal(&[Cyclotomic::from_integer(2), Cyclotomic::root_of_unity(3, 1)]);
        assert_eq!(a.kron(&b).trace(), &a.trace() * &b.trace());
    }
}
