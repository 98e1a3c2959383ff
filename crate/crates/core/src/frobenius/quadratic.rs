//! Exact arithmetic in `Q(√D)` for square-free `D`; `D = 1` is `Q` itself.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, BigRational, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite_group::Cyclotomic;

pub fn is_square_free(d: i64) -> bool {
    if d == 0 {
        return false;
    }
    let mut n = d.unsigned_abs();
    let mut q = 2u64;
    while q * q <= n {
        if n.is_multiple_of(q * q) {
            return false;
        }
        if n.is_multiple_of(q) {
            n /= q;
        }
        q += 1;
    }
    true
}

/// `x + y√D`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadFieldElem {
    d: i64,
    x: BigRational,
    y: BigRational,
}

impl QuadFieldElem {
    pub fn new(d: i64, x: BigRational, y: BigRational) -> Result<QuadFieldElem> {
        if !is_square_free(d) {
            return Err(Error::InvalidSpec(format!("D = {d} is not square-free")));
        }
        if d == 1 {
            // √1 = 1 folds into the rational part
            return Ok(QuadFieldElem {
                d,
                x: x + y,
                y: BigRational::zero(),
            });
        }
        Ok(QuadFieldElem { d, x, y })
    }

    pub fn rational(x: BigRational) -> QuadFieldElem {
        QuadFieldElem {
            d: 1,
            x,
            y: BigRational::zero(),
        }
    }

    pub fn from_integer(k: i64) -> QuadFieldElem {
        QuadFieldElem::rational(BigRational::from_integer(k.into()))
    }

    /// The same rational number viewed in `Q(√d)`.
    pub fn embed(x: BigRational, d: i64) -> QuadFieldElem {
        QuadFieldElem {
            d,
            x,
            y: BigRational::zero(),
        }
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn x(&self) -> &BigRational {
        &self.x
    }

    pub fn y(&self) -> &BigRational {
        &self.y
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.y.is_zero()
    }

    /// Galois conjugate `x − y√D`; complex conjugation when `D < 0`.
    pub fn conjugate(&self) -> QuadFieldElem {
        QuadFieldElem {
            d: self.d,
            x: self.x.clone(),
            y: -self.y.clone(),
        }
    }

    pub fn norm(&self) -> BigRational {
        &self.x * &self.x - BigRational::from_integer(self.d.into()) * &self.y * &self.y
    }

    pub fn trace(&self) -> BigRational {
        if self.d == 1 {
            return self.x.clone();
        }
        BigRational::from_integer(2.into()) * &self.x
    }

    fn common_d(&self, other: &QuadFieldElem) -> i64 {
        match (self.d, other.d) {
            (a, b) if a == b => a,
            (1, b) if self.y.is_zero() => b,
            (a, 1) if other.y.is_zero() => a,
            (_, b) if self.y.is_zero() => b,
            (a, _) if other.y.is_zero() => a,
            (a, b) => panic!("elements of Q(√{a}) and Q(√{b}) cannot be combined"),
        }
    }

    pub fn checked_mul(&self, other: &QuadFieldElem) -> Option<QuadFieldElem> {
        if self.d != other.d && !self.y.is_zero() && !other.y.is_zero() {
            return None;
        }
        Some(self * other)
    }

    /// The inverse, or `None` for zero.
    pub fn inverse(&self) -> Option<QuadFieldElem> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        Some(QuadFieldElem {
            d: self.d,
            x: &self.x / &n,
            y: -&self.y / &n,
        })
    }

    /// Sign of `x + s·y√D` for `D > 1` and `s = ±1`.
    fn embedding_sign(&self, s: i32) -> Ordering {
        let y = if s < 0 { -self.y.clone() } else { self.y.clone() };
        compare_surd(&self.x, &y, self.d, &BigRational::zero())
    }

    /// Positive under every real embedding; requires `D ≥ 1`.
    pub fn is_totally_positive(&self) -> bool {
        assert!(self.d >= 1, "totally positive is defined for real fields");
        if self.d == 1 {
            return self.x.is_positive();
        }
        self.embedding_sign(1) == Ordering::Greater && self.embedding_sign(-1) == Ordering::Greater
    }

    /// `|σ(self)|² ≤ bound` for every embedding σ into C, decided exactly.
    pub fn abs_sq_at_most(&self, bound: &BigRational) -> bool {
        if self.d < 0 {
            return self.norm() <= *bound;
        }
        let dq = BigRational::from_integer(self.d.into());
        // (x ± y√D)² = x² + D y² ± 2xy√D
        let base = &self.x * &self.x + &dq * &self.y * &self.y;
        if self.d == 1 {
            return base <= *bound;
        }
        let cross = BigRational::from_integer(2.into()) * &self.x * &self.y;
        [1, -1].iter().all(|&s| {
            let c = if s < 0 { -cross.clone() } else { cross.clone() };
            compare_surd(&base, &c, self.d, bound) != Ordering::Greater
        })
    }

    /// Images under the embeddings into C: `x + y√D` then `x − y√D`.
    pub fn embeddings(&self) -> [num::complex::Complex64; 2] {
        let (x, y) = (to_f64(&self.x), to_f64(&self.y));
        let r = (self.d.abs() as f64).sqrt();
        if self.d < 0 {
            [
                num::complex::Complex64::new(x, y * r),
                num::complex::Complex64::new(x, -y * r),
            ]
        } else {
            [
                num::complex::Complex64::new(x + y * r, 0.0),
                num::complex::Complex64::new(x - y * r, 0.0),
            ]
        }
    }

    /// The element inside `Q(ζ_n)` with `√D` realised by Gauss sums.
    pub fn to_cyclotomic(&self) -> Cyclotomic {
        let s = sqrt_cyclotomic(self.d);
        Cyclotomic::from_rational(self.x.clone(), 1) + s.scale(&self.y)
    }
}

pub(crate) fn to_f64(q: &BigRational) -> f64 {
    use num::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

/// Compares `a + b√D` with `c` exactly (`D > 1`).
fn compare_surd(a: &BigRational, b: &BigRational, d: i64, c: &BigRational) -> Ordering {
    // a + b√D vs c  ⇔  b√D vs c − a
    let rhs = c - a;
    let lhs_sign = b.signum();
    let rhs_sign = rhs.signum();
    if lhs_sign != rhs_sign || (lhs_sign.is_zero() && rhs_sign.is_zero()) {
        return lhs_sign.cmp(&rhs_sign);
    }
    let lhs_sq = b * b * BigRational::from_integer(d.into());
    let rhs_sq = &rhs * &rhs;
    if lhs_sign.is_positive() {
        lhs_sq.cmp(&rhs_sq)
    } else {
        rhs_sq.cmp(&lhs_sq)
    }
}

/// `√D` as a cyclotomic number: `√q*` for odd primes q via the quadratic
/// Gauss sum, times `√±1` or `√±2` from `ζ_8`.
pub fn sqrt_cyclotomic(d: i64) -> Cyclotomic {
    let mut rest = d;
    let mut out = Cyclotomic::from_integer(1);
    let mut n = d.unsigned_abs();
    let mut q = 3u64;
    while n > 1 {
        if n.is_multiple_of(2) {
            n /= 2;
            continue;
        }
        while !n.is_multiple_of(q) {
            q += 2;
        }
        n /= q;
        let q_star = if q % 4 == 1 { q as i64 } else { -(q as i64) };
        rest /= q_star;
        out = out * gauss_sum(q);
    }
    let tail = match rest {
        1 => Cyclotomic::from_integer(1),
        -1 => Cyclotomic::root_of_unity(4, 1),
        2 => Cyclotomic::root_of_unity(8, 1) + Cyclotomic::root_of_unity(8, 7),
        -2 => Cyclotomic::root_of_unity(8, 1) + Cyclotomic::root_of_unity(8, 3),
        _ => unreachable!("square-free remainder {rest}"),
    };
    let root = out * tail;
    // each factor has the principal sign, the product may not
    let c = root.to_complex();
    if c.re < -1e-9 || c.im < -1e-9 {
        -root
    } else {
        root
    }
}

fn gauss_sum(q: u64) -> Cyclotomic {
    let mut s = Cyclotomic::zero(q as u32);
    for a in 1..q {
        let chi = legendre(a as i64, q);
        s = s + Cyclotomic::root_of_unity(q as u32, a as i64).scale(&BigRational::from_integer(chi.into()));
    }
    s
}

/// Legendre symbol `(a/p)` for an odd prime p.
pub fn legendre(a: i64, p: u64) -> i64 {
    let a = a.rem_euclid(p as i64) as u64;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * b as u128) % m as u128) as u64;
        }
        b = ((b as u128 * b as u128) % m as u128) as u64;
        e >>= 1;
    }
    r
}

impl Add for &QuadFieldElem {
    type Output = QuadFieldElem;
    fn add(self, o: &QuadFieldElem) -> QuadFieldElem {
        QuadFieldElem {
            d: self.common_d(o),
            x: &self.x + &o.x,
            y: &self.y + &o.y,
        }
    }
}

impl Sub for &QuadFieldElem {
    type Output = QuadFieldElem;
    fn sub(self, o: &QuadFieldElem) -> QuadFieldElem {
        QuadFieldElem {
            d: self.common_d(o),
            x: &self.x - &o.x,
            y: &self.y - &o.y,
        }
    }
}

impl Mul for &QuadFieldElem {
    type Output = QuadFieldElem;
    fn mul(self, o: &QuadFieldElem) -> QuadFieldElem {
        let d = self.common_d(o);
        let dq = BigRational::from_integer(BigInt::from(d));
        QuadFieldElem {
            d,
            x: &self.x * &o.x + dq * &self.y * &o.y,
            y: &self.x * &o.y + &self.y * &o.x,
        }
    }
}

impl Neg for &QuadFieldElem {
    type Output = QuadFieldElem;
    fn neg(self) -> QuadFieldElem {
        QuadFieldElem {
            d: self.d,
            x: -self.x.clone(),
            y: -self.y.clone(),
        }
    }
}

impl fmt::Display for QuadFieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.y.is_zero() {
            write!(f, "{}", self.x)
        } else {
            write!(f, "{} + {}*sqrt({})", self.x, self.y, self.d)
        }
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn elem(d: i64, x: i64, y: i64) -> QuadFieldElem {
        QuadFieldElem::new(d, q(x, 1), q(y, 1)).unwrap()
    }

    #[test]
    fn square_free() {
        assert!(is_square_free(-1) && is_square_free(5) && is_square_free(-15) && is_square_free(2));
        assert!(!is_square_free(0) && !is_square_free(12) && !is_square_free(-9));
    }

    #[test]
    fn norm_and_conjugate() {
        let a = elem(5, 1, 2);
        assert_eq!(a.norm(), q(1 - 20, 1));
        assert_eq!(&a * &a.conjugate(), QuadFieldElem::embed(a.norm(), 5));
        assert_eq!(a.trace(), q(2, 1));
        let inv = a.inverse().unwrap();
        assert_eq!(&a * &inv, QuadFieldElem::embed(q(1, 1), 5));
    }

    #[test]
    fn total_positivity() {
        // (1 + √2) has a negative conjugate; (3 + √2) does not
        assert!(!elem(2, 1, 1).is_totally_positive());
        assert!(elem(2, 3, 1).is_totally_positive());
        assert!(!elem(2, -3, 1).is_totally_positive());
    }

    #[test]
    fn weil_style_bound_is_exact() {
        // 1 + √5: embeddings ≈ 3.236 and −1.236; squares ≈ 10.47 and 1.53
        let a = elem(5, 1, 1);
        assert!(a.abs_sq_at_most(&q(11, 1)));
        assert!(!a.abs_sq_at_most(&q(10, 1)));
        // |1 + 2i|² = 5
        let b = elem(-1, 1, 2);
        assert!(b.abs_sq_at_most(&q(5, 1)) && !b.abs_sq_at_most(&q(4, 1)));
    }

    #[test]
    fn sqrt_via_gauss_sums() {
        for d in [-1i64, 2, -2, 3, -3, 5, -5, 6, -7, 10, 13, -15, 21, -30] {
            let s = sqrt_cyclotomic(d);
            assert_eq!(&s * &s, Cyclotomic::from_integer(d), "D = {d}");
            let c = s.to_complex();
            let expect = if d > 0 { (d as f64).sqrt() } else { 0.0 };
            // the Gauss sum picks the positive (or positive imaginary) root
            assert!((c.re - expect).abs() < 1e-9, "D = {d}: {c}");
            if d < 0 {
                assert!((c.im - (-d as f64).sqrt()).abs() < 1e-9, "D = {d}: {c}");
            }
        }
    }

    #[test]
    fn cyclotomic_image_matches_embedding() {
        let a = QuadFieldElem::new(-3, q(1, 2), q(3, 4)).unwrap();
        let c = a.to_cyclotomic().to_complex();
        assert!((c - a.embeddings()[0]).norm() < 1e-12);
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative(d in prop::sample::select(vec![-7i64, -1, 2, 3, 5]),
                                  a in -20i64..20, b in -20i64..20, c in -20i64..20, e in -20i64..20) {
            let x = elem(d, a, b);
            let y = elem(d, c, e);
            prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
            prop_assert_eq!((&x * &y).to_cyclotomic(), x.to_cyclotomic() * y.to_cyclotomic());
        }
    }
}
