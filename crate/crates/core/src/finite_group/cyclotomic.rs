//! Exact arithmetic in cyclotomic fields Q(ζ_n).
//!
//! An element is stored in the power basis `1, ζ, …, ζ^{φ(n)-1}` of a fixed
//! ambient field Q(ζ_n). Binary operations on elements of different ambient
//! orders lift both operands to Q(ζ_lcm).

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num::complex::Complex64;
use num::integer::Integer;
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Reduction data for one cyclotomic order.
struct Basis {
    phi: usize,
    /// `powers[k]` holds the coordinates of ζ^k, for `k < max(n, 2φ - 1)`.
    powers: Vec<Vec<i64>>,
}

fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    // x^n - 1 divided by Φ_d for every proper divisor d.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let div = cyclotomic_polynomial(d);
            num = poly_div_exact(&num, &div);
        }
    }
    num
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let qn = rem.len() - 1 - dn;
    let mut quot = vec![0i64; qn + 1];
    for k in (0..=qn).rev() {
        let c = rem[k + dn];
        quot[k] = c;
        for (j, &dc) in den.iter().enumerate() {
            rem[k + j] -= c * dc;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

impl Basis {
    fn new(n: u32) -> Basis {
        let phi_poly = cyclotomic_polynomial(n);
        let phi = phi_poly.len() - 1;
        let count = (n as usize).max(2 * phi);
        let mut powers = Vec::with_capacity(count);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..count {
            powers.push(cur.clone());
            // multiply by x and reduce with the monic Φ_n
            let top = cur[phi - 1];
            let mut next = vec![0i64; phi];
            for j in (1..phi).rev() {
                next[j] = cur[j - 1];
            }
            for j in 0..phi {
                next[j] -= top * phi_poly[j];
            }
            cur = next;
        }
        Basis { phi, powers }
    }
}

fn basis(n: u32) -> Arc<Basis> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<Basis>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(b) = cache.read().unwrap().get(&n) {
        return b.clone();
    }
    let b = Arc::new(Basis::new(n));
    cache.write().unwrap().entry(n).or_insert(b).clone()
}

/// Euler's totient.
pub fn totient(n: u32) -> usize {
    basis(n).phi
}

fn lcm(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

/// A root of unity `exp(2πi · exp / order)`, kept in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootOfUnity {
    order: u32,
    exp: u32,
}

impl RootOfUnity {
    pub fn new(exp: i64, order: u32) -> RootOfUnity {
        assert!(order > 0, "root of unity of order 0");
        let e = exp.rem_euclid(order as i64) as u32;
        let g = e.gcd(&order);
        if e == 0 {
            return RootOfUnity { order: 1, exp: 0 };
        }
        RootOfUnity {
            order: order / g,
            exp: e / g,
        }
    }

    pub fn one() -> RootOfUnity {
        RootOfUnity { order: 1, exp: 0 }
    }

    pub fn minus_one() -> RootOfUnity {
        RootOfUnity { order: 2, exp: 1 }
    }

    /// Exact multiplicative order.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn exp(&self) -> u32 {
        self.exp
    }

    pub fn is_one(&self) -> bool {
        self.order == 1
    }

    pub fn inv(&self) -> RootOfUnity {
        RootOfUnity::new(-(self.exp as i64), self.order)
    }

    pub fn pow(&self, k: i64) -> RootOfUnity {
        let e = (self.exp as i64 * k.rem_euclid(self.order as i64)) % self.order as i64;
        RootOfUnity::new(e, self.order)
    }

    /// Exponent `k` with `self = ζ_n^k`, if `self` lies in μ_n.
    pub fn exponent_in(&self, n: u32) -> Option<u32> {
        if n.is_multiple_of(self.order) {
            Some(self.exp * (n / self.order))
        } else {
            None
        }
    }

    pub fn to_cyclotomic(&self) -> Cyclotomic {
        Cyclotomic::root_of_unity(self.order, self.exp as i64)
    }

    pub fn to_complex(&self) -> Complex64 {
        let theta = 2.0 * std::f64::consts::PI * self.exp as f64 / self.order as f64;
        Complex64::new(theta.cos(), theta.sin())
    }
}

impl Mul for RootOfUnity {
    type Output = RootOfUnity;
    fn mul(self, rhs: RootOfUnity) -> RootOfUnity {
        let n = lcm(self.order, rhs.order);
        let e = self.exp as u64 * (n / self.order) as u64 + rhs.exp as u64 * (n / rhs.order) as u64;
        RootOfUnity::new((e % n as u64) as i64, n)
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.order == 1 {
            write!(f, "1")
        } else if self.order == 2 {
            write!(f, "-1")
        } else {
            write!(f, "z{}^{}", self.order, self.exp)
        }
    }
}

/// An element of the cyclotomic field Q(ζ_n).
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    order: u32,
    coeffs: Vec<BigRational>,
}

impl Cyclotomic {
    pub fn zero(order: u32) -> Cyclotomic {
        assert!(order > 0);
        let phi = basis(order).phi;
        Cyclotomic {
            order,
            coeffs: vec![BigRational::zero(); phi],
        }
    }

    pub fn one(order: u32) -> Cyclotomic {
        Cyclotomic::from_rational(BigRational::one(), order)
    }

    pub fn from_rational(q: BigRational, order: u32) -> Cyclotomic {
        let mut z = Cyclotomic::zero(order);
        z.coeffs[0] = q;
        z
    }

    pub fn from_integer(k: i64) -> Cyclotomic {
        Cyclotomic::from_rational(BigRational::from_integer(BigInt::from(k)), 1)
    }

    pub fn from_ratio(num: i64, den: i64) -> Cyclotomic {
        Cyclotomic::from_rational(BigRational::new(num.into(), den.into()), 1)
    }

    /// ζ_n^k.
    pub fn root_of_unity(order: u32, k: i64) -> Cyclotomic {
        let b = basis(order);
        let k = k.rem_euclid(order as i64) as usize;
        let coeffs = b.powers[k]
            .iter()
            .map(|&c| BigRational::from_integer(c.into()))
            .collect();
        Cyclotomic { order, coeffs }
    }

    /// Builds an element from power-basis coordinates; `coeffs.len()` must be φ(order).
    pub fn from_coeffs(order: u32, coeffs: Vec<BigRational>) -> Option<Cyclotomic> {
        if order == 0 || coeffs.len() != basis(order).phi {
            return None;
        }
        Some(Cyclotomic { order, coeffs })
    }

    /// Ambient order n of Q(ζ_n).
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, if the element lies in Q.
    pub fn to_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Re-expresses the element in Q(ζ_m); `order` must divide `m`.
    pub fn lift(&self, m: u32) -> Option<Cyclotomic> {
        if !m.is_multiple_of(self.order) {
            return None;
        }
        if m == self.order {
            return Some(self.clone());
        }
        let step = (m / self.order) as usize;
        let b = basis(m);
        let mut out = vec![BigRational::zero(); b.phi];
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            accumulate(&mut out, c, &b.powers[k * step]);
        }
        Some(Cyclotomic { order: m, coeffs: out })
    }

    fn lift_pair(a: &Cyclotomic, b: &Cyclotomic) -> (Cyclotomic, Cyclotomic) {
        let n = lcm(a.order, b.order);
        (a.lift(n).unwrap(), b.lift(n).unwrap())
    }

    /// Complex conjugation ζ ↦ ζ^{-1}.
    pub fn conj(&self) -> Cyclotomic {
        let b = basis(self.order);
        let n = self.order as usize;
        let mut out = vec![BigRational::zero(); b.phi];
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let idx = (n - k) % n;
            accumulate(&mut out, c, &b.powers[idx]);
        }
        Cyclotomic {
            order: self.order,
            coeffs: out,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        let mut z = Complex64::new(0.0, 0.0);
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let theta = 2.0 * std::f64::consts::PI * k as f64 / self.order as f64;
            let v = c.to_f64().unwrap_or(f64::NAN);
            z += Complex64::new(theta.cos(), theta.sin()) * v;
        }
        z
    }

    pub fn scale(&self, q: &BigRational) -> Cyclotomic {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inverse(&self) -> Option<Cyclotomic> {
        if self.is_zero() {
            return None;
        }
        if let Some(q) = self.to_rational() {
            return Some(Cyclotomic::from_rational(q.recip(), self.order));
        }
        if let Some(r) = self.as_root_of_unity() {
            return r.inv().to_cyclotomic().lift(lcm(r.inv().order(), self.order));
        }
        // Solve (multiplication by self) · y = 1 over Q.
        let b = basis(self.order);
        let phi = b.phi;
        let mut cols: Vec<Vec<BigRational>> = Vec::with_capacity(phi);
        for j in 0..phi {
            let basis_j = Cyclotomic::from_coeffs(self.order, unit_vec(phi, j)).unwrap();
            cols.push((self * &basis_j).coeffs);
        }
        let mut aug: Vec<Vec<BigRational>> = (0..phi)
            .map(|i| {
                let mut row: Vec<BigRational> = (0..phi).map(|j| cols[j][i].clone()).collect();
                row.push(if i == 0 {
                    BigRational::one()
                } else {
                    BigRational::zero()
                });
                row
            })
            .collect();
        for col in 0..phi {
            let piv = (col..phi).find(|&r| !aug[r][col].is_zero())?;
            aug.swap(col, piv);
            let inv = aug[col][col].recip();
            for v in aug[col].iter_mut() {
                *v = &*v * &inv;
            }
            for r in 0..phi {
                if r != col && !aug[r][col].is_zero() {
                    let f = aug[r][col].clone();
                    let pivot_row = aug[col].clone();
                    for (v, p) in aug[r].iter_mut().zip(pivot_row.iter()) {
                        *v = &*v - &(&f * p);
                    }
                }
            }
        }
        let coeffs = aug.into_iter().map(|row| row[phi].clone()).collect();
        Some(Cyclotomic {
            order: self.order,
            coeffs,
        })
    }

    pub fn pow(&self, k: i64) -> Cyclotomic {
        let base = if k < 0 {
            self.inverse().expect("zero to a negative power")
        } else {
            self.clone()
        };
        let mut e = k.unsigned_abs();
        let mut acc = Cyclotomic::one(self.order);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        acc
    }

    /// Identifies the element as a root of unity, if it is one.
    pub fn as_root_of_unity(&self) -> Option<RootOfUnity> {
        let z = self.to_complex();
        if (z.norm() - 1.0).abs() > 1e-6 {
            return None;
        }
        // Roots of unity in Q(ζ_n) are exactly the elements of μ_lcm(2, n).
        let l = lcm(2, self.order);
        let k = (z.arg() / (2.0 * std::f64::consts::PI) * l as f64).round() as i64;
        let cand = RootOfUnity::new(k, l);
        if cand.to_cyclotomic() == *self {
            Some(cand)
        } else {
            None
        }
    }

    /// Multiplicative order, if finite.
    pub fn multiplicative_order(&self) -> Option<u32> {
        self.as_root_of_unity().map(|r| r.order())
    }

    /// `(self + conj(self)) / 2`.
    pub fn real_part(&self) -> Cyclotomic {
        let half = BigRational::new(1.into(), 2.into());
        (self + &self.conj()).scale(&half)
    }

    pub fn is_real(&self) -> bool {
        *self == self.conj()
    }
}

fn unit_vec(n: usize, j: usize) -> Vec<BigRational> {
    let mut v = vec![BigRational::zero(); n];
    v[j] = BigRational::one();
    v
}

fn accumulate(out: &mut [BigRational], c: &BigRational, coords: &[i64]) {
    for (o, &p) in out.iter_mut().zip(coords.iter()) {
        if p != 0 {
            *o += c * BigRational::from_integer(p.into());
        }
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Cyclotomic) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = Cyclotomic::lift_pair(self, other);
        a.coeffs == b.coeffs
    }
}

impl Eq for Cyclotomic {}

impl<'a> Add<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.order != rhs.order {
            let (a, b) = Cyclotomic::lift_pair(self, rhs);
            return &a + &b;
        }
        let coeffs = self.coeffs.iter().zip(rhs.coeffs.iter()).map(|(x, y)| x + y).collect();
        Cyclotomic {
            order: self.order,
            coeffs,
        }
    }
}

impl<'a> Sub<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self + &(-rhs)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.order != rhs.order {
            let (a, b) = Cyclotomic::lift_pair(self, rhs);
            return &a * &b;
        }
        let b = basis(self.order);
        let phi = b.phi;
        let mut prod = vec![BigRational::zero(); 2 * phi - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in rhs.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        let mut out: Vec<BigRational> = prod[..phi].to_vec();
        for (k, c) in prod.iter().enumerate().skip(phi) {
            if !c.is_zero() {
                accumulate(&mut out, c, &b.powers[k]);
            }
        }
        Cyclotomic {
            order: self.order,
            coeffs: out,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: &'a Cyclotomic) -> Cyclotomic {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{mag}")?,
                _ if mag.is_one() => write!(f, "z{}^{}", self.order, k)?,
                _ => write!(f, "{mag}*z{}^{}", self.order, k)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// JSON form `{order, numerators[], denominators[]}`. Integers that do not fit
/// in an i64 are written as decimal strings.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CyclotomicRepr {
    order: u32,
    numerators: Vec<IntRepr>,
    denominators: Vec<IntRepr>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum IntRepr {
    Small(i64),
    Big(String),
}

impl IntRepr {
    fn from_big(b: &BigInt) -> IntRepr {
        match b.to_i64() {
            Some(v) => IntRepr::Small(v),
            None => IntRepr::Big(b.to_string()),
        }
    }

    fn to_big(&self) -> Result<BigInt, String> {
        match self {
            IntRepr::Small(v) => Ok(BigInt::from(*v)),
            IntRepr::Big(s) => s.parse().map_err(|_| format!("bad integer literal {s:?}")),
        }
    }
}

impl Serialize for Cyclotomic {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CyclotomicRepr {
            order: self.order,
            numerators: self.coeffs.iter().map(|c| IntRepr::from_big(c.numer())).collect(),
            denominators: self.coeffs.iter().map(|c| IntRepr::from_big(c.denom())).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cyclotomic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Cyclotomic, D::Error> {
        use serde::de::Error;
        let repr = CyclotomicRepr::deserialize(d)?;
        if repr.order == 0 {
            return Err(D::Error::custom("cyclotomic order must be positive"));
        }
        let phi = totient(repr.order);
        if repr.numerators.len() != phi || repr.denominators.len() != phi {
            return Err(D::Error::custom(format!(
                "order {} needs {} numerators and denominators",
                repr.order, phi
            )));
        }
        let mut coeffs = Vec::with_capacity(phi);
        for (n, d) in repr.numerators.iter().zip(repr.denominators.iter()) {
            let n = n.to_big().map_err(D::Error::custom)?;
            let d = d.to_big().map_err(D::Error::custom)?;
            if d.is_zero() {
                return Err(D::Error::custom("zero denominator"));
            }
            coeffs.push(BigRational::new(n, d));
        }
        Ok(Cyclotomic {
            order: repr.order,
            coeffs,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(totient(15), 8);
    }

    #[test]
    fn roots_of_unity_have_their_order() {
        for n in 1..=24u32 {
            for k in 0..n {
                let z = Cyclotomic::root_of_unity(n, k as i64);
                let r = RootOfUnity::new(k as i64, n);
                assert!(z.pow(r.order() as i64).is_one());
                assert_eq!(z.as_root_of_unity(), Some(r));
            }
        }
    }

    #[test]
    fn mixed_order_arithmetic() {
        // i = ζ_8^2 and ζ_4 agree across ambient fields
        assert_eq!(Cyclotomic::root_of_unity(8, 2), Cyclotomic::root_of_unity(4, 1));
        // ζ_3 + ζ_3^2 = -1 inside Q(ζ_12)
        let s = Cyclotomic::root_of_unity(3, 1) + Cyclotomic::root_of_unity(12, 8);
        assert_eq!(s, Cyclotomic::from_integer(-1));
        // √2 = ζ_8 + ζ_8^{-1}
        let r2 = Cyclotomic::root_of_unity(8, 1) + Cyclotomic::root_of_unity(8, 7);
        assert_eq!(&r2 * &r2, Cyclotomic::from_integer(2));
    }

    #[test]
    fn conjugation_and_inverse() {
        let z = Cyclotomic::root_of_unity(5, 2) + Cyclotomic::from_ratio(1, 3);
        let w = z.inverse().unwrap();
        assert!((&z * &w).is_one());
        let c = z.conj();
        assert!((&z * &c).is_real());
        assert!(Cyclotomic::zero(7).inverse().is_none());
    }

    #[test]
    fn json_round_trip() {
        let z = Cyclotomic::root_of_unity(12, 5) + Cyclotomic::from_ratio(-7, 2);
        let s = serde_json::to_string(&z).unwrap();
        let back: Cyclotomic = serde_json::from_str(&s).unwrap();
        assert_eq!(z, back);
        assert!(serde_json::from_str::<Cyclotomic>(r#"{"order":4,"numerators":[1],"denominators":[1]}"#).is_err());
    }

    fn arb_element() -> impl Strategy<Value = Cyclotomic> {
        (
            prop::sample::select(vec![1u32, 3, 4, 5, 8, 12]),
            prop::collection::vec((-5i64..=5, 1i64..=4), 8),
        )
            .prop_map(|(n, cs)| {
                let phi = totient(n);
                let coeffs = cs
                    .iter()
                    .take(phi)
                    .map(|&(a, b)| BigRational::new(a.into(), b.into()))
                    .collect();
                Cyclotomic::from_coeffs(n, coeffs).unwrap()
            })
    }

    proptest! {
        #[test]
        fn multiplication_round_trips_through_inverse(x in arb_element(), y in arb_element()) {
            prop_assume!(!y.is_zero());
            let yi = y.inverse().unwrap();
            prop_assert_eq!(&(&x * &y) * &yi, x);
        }

        #[test]
        fn to_complex_is_a_ring_map(x in arb_element(), y in arb_element()) {
            let p = (&x * &y).to_complex();
            let q = x.to_complex() * y.to_complex();
            prop_assert!((p - q).norm() < 1e-9 * (1.0 + q.norm()));
        }
    }
}
