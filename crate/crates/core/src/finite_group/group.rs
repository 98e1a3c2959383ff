//! Finite groups given by Cayley tables.

use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use num::integer::Integer;
use num::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::cyclotomic::Cyclotomic;
use super::matrix::CycloMatrix;
use crate::error::{Error, Result};

/// Largest order for which group axioms and homomorphism identities are
/// verified on every pair (every triple for associativity). Larger groups are
/// checked on a fixed pseudo-random sample.
pub const EXHAUSTIVE_LIMIT: usize = 64;

const SAMPLED_CHECKS: usize = 20_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    n: usize,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Validates a Cayley table and derives the identity and inverse maps.
    pub fn from_table(rows: Vec<Vec<usize>>) -> Result<FiniteGroup> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty Cayley table".into()));
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidGroup("Cayley table is not square".into()));
        }
        let table: Vec<usize> = rows.into_iter().flatten().collect();
        if table.iter().any(|&x| x >= n) {
            return Err(Error::InvalidGroup("Cayley table entry out of range".into()));
        }
        for i in 0..n {
            let mut row_seen = vec![false; n];
            let mut col_seen = vec![false; n];
            for j in 0..n {
                row_seen[table[i * n + j]] = true;
                col_seen[table[j * n + i]] = true;
            }
            if row_seen.iter().any(|s| !s) || col_seen.iter().any(|s| !s) {
                return Err(Error::InvalidGroup(format!("row or column {i} is not a permutation")));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e * n + x] == x && table[x * n + e] == x))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        let mut inverse = vec![0; n];
        for x in 0..n {
            inverse[x] = (0..n)
                .find(|&y| table[x * n + y] == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("element {x} has no inverse")))?;
        }
        let g = FiniteGroup {
            n,
            table,
            identity,
            inverse,
        };
        if let Some((a, b, c)) = g.associativity_witness() {
            return Err(Error::InvalidGroup(format!("associativity fails at ({a}, {b}, {c})")));
        }
        Ok(g)
    }

    fn associativity_witness(&self) -> Option<(usize, usize, usize)> {
        let check = |a: usize, b: usize, c: usize| self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c));
        if self.n <= EXHAUSTIVE_LIMIT {
            for a in 0..self.n {
                for b in 0..self.n {
                    for c in 0..self.n {
                        if !check(a, b, c) {
                            return Some((a, b, c));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_a550c);
            for _ in 0..SAMPLED_CHECKS {
                let (a, b, c) = (
                    rng.random_range(0..self.n),
                    rng.random_range(0..self.n),
                    rng.random_range(0..self.n),
                );
                if !check(a, b, c) {
                    return Some((a, b, c));
                }
            }
        }
        None
    }

    /// Builds the group generated by `gens` under `mul`, listing the identity first.
    pub fn from_generators<T, F>(identity: T, gens: &[T], mul: F, cap: usize) -> Result<(FiniteGroup, Vec<T>)>
    where
        T: Clone + Eq + Hash,
        F: Fn(&T, &T) -> T,
    {
        let mut elems = vec![identity.clone()];
        let mut index: HashMap<T, usize> = HashMap::from([(identity, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in gens {
                let y = mul(&elems[i], g);
                if !index.contains_key(&y) {
                    if elems.len() >= cap {
                        return Err(Error::InvalidGroup(format!("generated group exceeds {cap} elements")));
                    }
                    index.insert(y.clone(), elems.len());
                    queue.push_back(elems.len());
                    elems.push(y);
                }
            }
        }
        let n = elems.len();
        let mut rows = vec![vec![0; n]; n];
        for i in 0..n {
            for j in 0..n {
                let p = mul(&elems[i], &elems[j]);
                rows[i][j] = *index
                    .get(&p)
                    .ok_or_else(|| Error::InvalidGroup("generating set is not closed under products".into()))?;
            }
        }
        Ok((FiniteGroup::from_table(rows)?, elems))
    }

    pub fn trivial() -> FiniteGroup {
        FiniteGroup::cyclic(1)
    }

    pub fn cyclic(n: usize) -> FiniteGroup {
        assert!(n > 0);
        let rows = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        FiniteGroup::from_table(rows).expect("cyclic table")
    }

    /// `a × b`, with element `(x, y)` at index `x·|b| + y`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> FiniteGroup {
        let (na, nb) = (a.order(), b.order());
        let n = na * nb;
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| a.mul(i / nb, j / nb) * nb + b.mul(i % nb, j % nb))
                    .collect()
            })
            .collect();
        FiniteGroup::from_table(rows).expect("product table")
    }

    /// Dihedral group of order 2n; element `r^k s^f` sits at index `k + n·f`.
    pub fn dihedral(n: usize) -> FiniteGroup {
        assert!(n > 0);
        let idx = |k: usize, f: usize| k % n + n * f;
        let rows = (0..2 * n)
            .map(|i| {
                let (k1, f1) = (i % n, i / n);
                (0..2 * n)
                    .map(|j| {
                        let (k2, f2) = (j % n, j / n);
                        // r^k1 s^f1 r^k2 s^f2 = r^(k1 ± k2) s^(f1+f2)
                        let k = if f1 == 0 { k1 + k2 } else { k1 + n - k2 };
                        idx(k, (f1 + f2) % 2)
                    })
                    .collect()
            })
            .collect();
        FiniteGroup::from_table(rows).expect("dihedral table")
    }

    /// Dicyclic group of order 4n: `a^{2n} = 1`, `x^2 = a^n`, `x a x^{-1} = a^{-1}`.
    /// Element `a^k x^f` sits at index `k + 2n·f`.
    pub fn dicyclic(n: usize) -> FiniteGroup {
        assert!(n > 0);
        let m = 2 * n;
        let rows = (0..2 * m)
            .map(|i| {
                let (k1, f1) = (i % m, i / m);
                (0..2 * m)
                    .map(|j| {
                        let (k2, f2) = (j % m, j / m);
                        let k = if f1 == 0 { k1 + k2 } else { k1 + m - k2 };
                        if f1 == 1 && f2 == 1 {
                            (k + n) % m
                        } else {
                            k % m + m * ((f1 + f2) % 2)
                        }
                    })
                    .collect()
            })
            .collect();
        FiniteGroup::from_table(rows).expect("dicyclic table")
    }

    pub fn quaternion() -> FiniteGroup {
        FiniteGroup::dicyclic(2)
    }

    /// Symmetric group on `k` letters, generated by a transposition and a k-cycle.
    pub fn symmetric(k: usize) -> FiniteGroup {
        assert!(k > 0);
        if k == 1 {
            return FiniteGroup::trivial();
        }
        let id: Vec<usize> = (0..k).collect();
        let mut swap = id.clone();
        swap.swap(0, 1);
        let cycle: Vec<usize> = (0..k).map(|i| (i + 1) % k).collect();
        FiniteGroup::from_permutations(&[swap, cycle]).expect("symmetric group")
    }

    /// Permutation group generated by `gens` (composition `(p·q)(i) = p(q(i))`).
    pub fn from_permutations(gens: &[Vec<usize>]) -> Result<FiniteGroup> {
        let k = gens.first().map(|g| g.len()).unwrap_or(0);
        let id: Vec<usize> = (0..k).collect();
        let compose = |p: &Vec<usize>, q: &Vec<usize>| q.iter().map(|&i| p[i]).collect::<Vec<usize>>();
        Ok(FiniteGroup::from_generators(id, gens, compose, 100_000)?.0)
    }

    /// Representatives of every isomorphism class of groups of order ≤ 8.
    pub fn all_up_to_order_8() -> Vec<(&'static str, FiniteGroup)> {
        let c = FiniteGroup::cyclic;
        vec![
            ("C1", c(1)),
            ("C2", c(2)),
            ("C3", c(3)),
            ("C4", c(4)),
            ("C2xC2", FiniteGroup::direct_product(&c(2), &c(2))),
            ("C5", c(5)),
            ("C6", c(6)),
            ("S3", FiniteGroup::symmetric(3)),
            ("C7", c(7)),
            ("C8", c(8)),
            ("C4xC2", FiniteGroup::direct_product(&c(4), &c(2))),
            (
                "C2xC2xC2",
                FiniteGroup::direct_product(&FiniteGroup::direct_product(&c(2), &c(2)), &c(2)),
            ),
            ("D4", FiniteGroup::dihedral(4)),
            ("Q8", FiniteGroup::quaternion()),
        ]
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> usize {
        (0..self.n).fold(1, |acc, a| acc.lcm(&self.element_order(a)))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (0..self.n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    /// Pairs on which identities quantified over G×G are checked.
    pub fn check_pairs(&self) -> Vec<(usize, usize)> {
        if self.n <= EXHAUSTIVE_LIMIT {
            (0..self.n).flat_map(|s| (0..self.n).map(move |t| (s, t))).collect()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x9a175);
            (0..SAMPLED_CHECKS)
                .map(|_| (rng.random_range(0..self.n), rng.random_range(0..self.n)))
                .collect()
        }
    }

    /// Conjugacy classes, each sorted, ordered by smallest element (the
    /// identity's class comes first when the identity has index 0).
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut classes = Vec::new();
        for x in 0..self.n {
            if seen[x] {
                continue;
            }
            let mut class: Vec<usize> = (0..self.n).map(|g| self.mul(self.mul(g, x), self.inv(g))).collect();
            class.sort_unstable();
            class.dedup();
            for &y in &class {
                seen[y] = true;
            }
            classes.push(class);
        }
        classes
    }

    /// Map element → index of its conjugacy class in [`Self::conjugacy_classes`].
    pub fn class_index(&self) -> Vec<usize> {
        let mut idx = vec![0; self.n];
        for (c, class) in self.conjugacy_classes().iter().enumerate() {
            for &x in class {
                idx[x] = c;
            }
        }
        idx
    }
}

/// JSON description of a group: either an explicit Cayley table or a named family.
#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum GroupRepr {
    Table(Vec<Vec<usize>>),
    Cyclic(usize),
    Dihedral(usize),
    Dicyclic(usize),
    Symmetric(usize),
    Quaternion(usize),
    Product(Vec<GroupRepr>),
}

impl GroupRepr {
    fn build(self) -> Result<FiniteGroup> {
        Ok(match self {
            GroupRepr::Table(rows) => FiniteGroup::from_table(rows)?,
            GroupRepr::Cyclic(n) if n > 0 => FiniteGroup::cyclic(n),
            GroupRepr::Dihedral(n) if n > 0 => FiniteGroup::dihedral(n),
            GroupRepr::Dicyclic(n) if n > 0 => FiniteGroup::dicyclic(n),
            GroupRepr::Symmetric(k) if (1..=6).contains(&k) => FiniteGroup::symmetric(k),
            GroupRepr::Quaternion(8) => FiniteGroup::quaternion(),
            GroupRepr::Product(parts) => {
                let mut g = FiniteGroup::trivial();
                for p in parts {
                    g = FiniteGroup::direct_product(&g, &p.build()?);
                }
                g
            }
            _ => return Err(Error::InvalidGroup("unsupported named group parameters".into())),
        })
    }
}

impl Serialize for FiniteGroup {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GroupRepr::Table(self.rows()).serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteGroup {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<FiniteGroup, D::Error> {
        GroupRepr::deserialize(d)?.build().map_err(serde::de::Error::custom)
    }
}

/// A finite group of unitary matrices with its Cayley table.
#[derive(Clone, Debug)]
pub struct MatrixGroup {
    group: FiniteGroup,
    elements: Vec<CycloMatrix>,
    field_order: u32,
    index: HashMap<Vec<BigRational>, usize>,
}

impl MatrixGroup {
    /// Closure of `gens` under multiplication; element 0 is the identity.
    pub fn generate(gens: &[CycloMatrix], cap: usize) -> Result<MatrixGroup> {
        let dim = gens
            .first()
            .map(|g| g.dim())
            .ok_or_else(|| Error::InvalidGroup("no generators".into()))?;
        if gens.iter().any(|g| g.dim() != dim) {
            return Err(Error::DimensionMismatch("generators of different sizes".into()));
        }
        if let Some(g) = gens.iter().find(|g| !g.is_unitary()) {
            return Err(Error::InvalidGroup(format!("generator {g} is not unitary")));
        }
        let field_order = gens.iter().fold(1u32, |acc, g| acc.lcm(&g.ambient_order()));
        let lifted: Vec<CycloMatrix> = gens.iter().map(|g| g.lift(field_order).unwrap()).collect();
        let id = CycloMatrix::identity(dim).lift(field_order).unwrap();

        // Close over hashable keys, then rebuild matrices.
        #[derive(Clone, PartialEq, Eq, Hash)]
        struct Key(Vec<BigRational>);
        let to_key = |m: &CycloMatrix| Key(m.key(field_order));
        let mut mats: HashMap<Key, CycloMatrix> = HashMap::new();
        for m in lifted.iter().chain(std::iter::once(&id)) {
            mats.insert(to_key(m), m.clone());
        }
        let gen_keys: Vec<Key> = lifted.iter().map(&to_key).collect();
        let cache = std::cell::RefCell::new(mats);
        let mul = |a: &Key, b: &Key| {
            let p = {
                let c = cache.borrow();
                c[a].mul(&c[b])
            };
            let k = to_key(&p);
            cache.borrow_mut().entry(k.clone()).or_insert(p);
            k
        };
        let (group, keys) = FiniteGroup::from_generators(to_key(&id), &gen_keys, mul, cap)?;
        let mats = cache.into_inner();
        let elements: Vec<CycloMatrix> = keys.iter().map(|k| mats[k].clone()).collect();
        let index = keys.into_iter().enumerate().map(|(i, k)| (k.0, i)).collect();
        Ok(MatrixGroup {
            group,
            elements,
            field_order,
            index,
        })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn elements(&self) -> &[CycloMatrix] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &CycloMatrix {
        &self.elements[i]
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn find(&self, m: &CycloMatrix) -> Option<usize> {
        if m.dim() != self.dim() {
            return None;
        }
        match m.lift(self.field_order) {
            Some(x) => self.index.get(&x.key(self.field_order)).copied(),
            // entries may be stored in a larger field yet equal to elements of this one
            None => self.elements.iter().position(|e| e == m),
        }
    }

    /// Index of `-I`, if present.
    pub fn minus_identity(&self) -> Option<usize> {
        self.find(&CycloMatrix::identity(self.dim()).neg())
    }

    /// Sign-normalized representatives of the quotient by `⟨-I⟩`, if `-I` is present.
    pub fn projective_representatives(&self) -> Vec<CycloMatrix> {
        let mut reps: Vec<CycloMatrix> = Vec::new();
        for m in &self.elements {
            let r = m.sign_normalized();
            if !reps.contains(&r) {
                reps.push(r);
            }
        }
        reps
    }
}

/// Scalar matrices `ζ_n^k · I` generating μ_n inside U(dim).
pub fn scalar_roots(dim: usize, n: u32) -> CycloMatrix {
    CycloMatrix::scalar(dim, &Cyclotomic::root_of_unity(n, 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_groups_have_expected_class_counts() {
        assert_eq!(FiniteGroup::cyclic(5).conjugacy_classes().len(), 5);
        let s3 = FiniteGroup::symmetric(3);
        let mut sizes: Vec<usize> = s3.conjugacy_classes().iter().map(|c| c.len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2, 3]);
        assert_eq!(FiniteGroup::dihedral(4).conjugacy_classes().len(), 5);
        assert_eq!(FiniteGroup::quaternion().conjugacy_classes().len(), 5);
        assert_eq!(FiniteGroup::symmetric(4).order(), 24);
    }

    #[test]
    fn abelian_groups_have_singleton_classes() {
        let g = FiniteGroup::direct_product(&FiniteGroup::cyclic(4), &FiniteGroup::cyclic(2));
        assert!(g.conjugacy_classes().iter().all(|c| c.len() == 1));
    }

    #[test]
    fn classes_partition_the_group() {
        for (_, g) in FiniteGroup::all_up_to_order_8() {
            let classes = g.conjugacy_classes();
            let mut all: Vec<usize> = classes.concat();
            all.sort();
            assert_eq!(all, (0..g.order()).collect::<Vec<_>>());
        }
    }

    #[test]
    fn rejects_non_associative_table() {
        // a Latin square with identity 0 that is not a group
        let rows = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(FiniteGroup::from_table(rows), Err(Error::InvalidGroup(_))));
    }

    #[test]
    fn json_named_groups() {
        let g: FiniteGroup = serde_json::from_str(r#"{"product":[{"cyclic":2},{"cyclic":2}]}"#).unwrap();
        assert_eq!(g.order(), 4);
        assert!(g.is_abelian());
        let back: FiniteGroup = serde_json::from_str(&serde_json::to_string(&g).unwrap()).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn binary_octahedral_group_has_order_48() {
        let z8 = |k| Cyclotomic::root_of_unity(8, k);
        let half = Cyclotomic::from_ratio(1, 2);
        // (1 + i)/√2 as diag(ζ_8, ζ_8^{-1}); (1+i+j+k)/2 as a 2x2 unitary
        let a = CycloMatrix::diagonal(&[z8(1), z8(7)]);
        let i = Cyclotomic::root_of_unity(4, 1);
        let b = CycloMatrix::from_rows(vec![
            vec![
                &half * &(Cyclotomic::from_integer(1) + i.clone()),
                &half * &(Cyclotomic::from_integer(1) + i.clone()),
            ],
            vec![
                &half * &(Cyclotomic::from_integer(-1) + i.clone()),
                &half * &(Cyclotomic::from_integer(1) - i.clone()),
            ],
        ])
        .unwrap();
        let g = MatrixGroup::generate(&[a, b], 1000).unwrap();
        assert_eq!(g.order(), 48);
        assert!(g.minus_identity().is_some());
        assert_eq!(g.projective_representatives().len(), 24);
    }
}
