//! Elliptic curves over Q and their Frobenius traces by point counting.

use num::{BigInt, Integer, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::quadratic::legendre;
use crate::error::{Error, Result};

/// Default ceiling on the prime bound for naive counting.
pub const DEFAULT_PRIME_CAP: u64 = 1_000_000;

/// All primes `≤ n`.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            for j in (i * i..=n).step_by(i) {
                sieve[j] = false;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(k, _)| k as u64)
        .collect()
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            return false;
        }
        q += 1;
    }
    true
}

/// `y² + a1·xy + a3·y = x³ + a2·x² + a4·x + a6`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllipticCurve {
    pub a: [i64; 5],
    /// Extra primes to exclude beyond those dividing the discriminant.
    #[serde(default)]
    pub extra_bad: Vec<u64>,
}

impl EllipticCurve {
    pub fn new(a: [i64; 5]) -> Result<EllipticCurve> {
        let c = EllipticCurve {
            a,
            extra_bad: Vec::new(),
        };
        if c.discriminant().is_zero() {
            return Err(Error::SingularCurve);
        }
        Ok(c)
    }

    pub fn with_bad_primes(mut self, extra: Vec<u64>) -> EllipticCurve {
        self.extra_bad = extra;
        self
    }

    fn big(&self) -> [BigInt; 5] {
        self.a.map(BigInt::from)
    }

    /// `(b2, b4, b6, b8)`.
    pub fn b_invariants(&self) -> [BigInt; 4] {
        let [a1, a2, a3, a4, a6] = self.big();
        let b2 = &a1 * &a1 + 4 * &a2;
        let b4 = &a1 * &a3 + 2 * &a4;
        let b6 = &a3 * &a3 + 4 * &a6;
        let b8 = &a1 * &a1 * &a6 + 4 * &a2 * &a6 - &a1 * &a3 * &a4 + &a2 * &a3 * &a3 - &a4 * &a4;
        [b2, b4, b6, b8]
    }

    /// `(c4, c6)`.
    pub fn c_invariants(&self) -> (BigInt, BigInt) {
        let [b2, b4, b6, _] = self.b_invariants();
        let c4 = &b2 * &b2 - 24 * &b4;
        let c6 = -&b2 * &b2 * &b2 + 36 * &b2 * &b4 - 216 * &b6;
        (c4, c6)
    }

    pub fn discriminant(&self) -> BigInt {
        let [b2, b4, b6, b8] = self.b_invariants();
        -&b2 * &b2 * &b8 - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6 + 9 * &b2 * &b4 * &b6
    }

    pub fn is_bad(&self, p: u64) -> bool {
        self.extra_bad.contains(&p) || (self.discriminant() % BigInt::from(p)).is_zero()
    }

    /// Primes `≤ bound` dividing the discriminant or listed as extra.
    pub fn bad_primes_up_to(&self, bound: u64) -> Vec<u64> {
        let disc = self.discriminant();
        primes_up_to(bound)
            .into_iter()
            .filter(|&p| self.extra_bad.contains(&p) || (&disc % BigInt::from(p)).is_zero())
            .collect()
    }

    /// The twist by `Q(√d)`: `y² = x³ − 27c4·d²·x − 54c6·d³`.
    pub fn quadratic_twist(&self, d: i64) -> Result<EllipticCurve> {
        let (c4, c6) = self.c_invariants();
        let d = BigInt::from(d);
        let a4: BigInt = -27 * c4 * &d * &d;
        let a6: BigInt = -54 * c6 * &d * &d * &d;
        let (Some(a4), Some(a6)) = (a4.to_i64(), a6.to_i64()) else {
            return Err(Error::Unsupported("twisted coefficients overflow i64".into()));
        };
        EllipticCurve::new([0, 0, 0, a4, a6])
    }

    /// `a_p = p + 1 − #E(F_p)`.
    pub fn ap(&self, p: u64) -> Result<i64> {
        if !is_prime(p) {
            return Err(Error::Config(format!("{p} is not prime")));
        }
        if self.is_bad(p) {
            return Err(Error::BadReduction(p));
        }
        let ap = if p <= 3 { self.ap_enumerate(p) } else { self.ap_short(p) };
        if (ap as i128) * (ap as i128) > 4 * p as i128 {
            return Err(Error::InvariantViolation {
                p,
                msg: format!("|a_p| = {} exceeds 2√p", ap.abs()),
            });
        }
        Ok(ap)
    }

    /// Counts affine solutions of the long form over all `(x, y) ∈ F_p²`.
    fn ap_enumerate(&self, p: u64) -> i64 {
        let r = |v: i64| v.rem_euclid(p as i64);
        let [a1, a2, a3, a4, a6] = self.a.map(r);
        let mut count = 1i64;
        for x in 0..p as i64 {
            for y in 0..p as i64 {
                let lhs = y * y + a1 * x * y + a3 * y;
                let rhs = x * x * x + a2 * x * x + a4 * x + a6;
                if r(lhs - rhs) == 0 {
                    count += 1;
                }
            }
        }
        p as i64 + 1 - count
    }

    /// `−Σ_x (f(x)/p)` on `y² = x³ − 27c4·x − 54c6` with a table of residues.
    fn ap_short(&self, p: u64) -> i64 {
        let (c4, c6) = self.c_invariants();
        let pb = BigInt::from(p);
        let a = (BigInt::from(-27) * c4).mod_floor(&pb).to_u64().unwrap();
        let b = (BigInt::from(-54) * c6).mod_floor(&pb).to_u64().unwrap();
        let mut chi = vec![-1i8; p as usize];
        chi[0] = 0;
        for y in 1..p {
            chi[(y * y % p) as usize] = 1;
        }
        let mut sum = 0i64;
        for x in 0..p {
            let f = ((x * x % p * x) % p + a * x % p + b) % p;
            sum += chi[f as usize] as i64;
        }
        -sum
    }

    /// `(p, a_p)` for every good prime `≤ bound` in increasing order, and the
    /// excluded primes.
    pub fn traces(&self, bound: u64, cap: u64) -> Result<(Vec<(u64, i64)>, Vec<u64>)> {
        if bound > cap {
            return Err(Error::Config(format!("prime bound {bound} exceeds the cap {cap}")));
        }
        let disc = self.discriminant();
        let (good, bad): (Vec<u64>, Vec<u64>) = primes_up_to(bound)
            .into_iter()
            .partition(|&p| !self.extra_bad.contains(&p) && !(&disc % BigInt::from(p)).is_zero());
        let aps = good
            .par_iter()
            .map(|&p| self.ap(p).map(|a| (p, a)))
            .collect::<Result<Vec<_>>>()?;
        Ok((aps, bad))
    }
}

/// Kronecker-style quadratic character `χ_d(p)` for odd primes p.
pub fn quadratic_character(d: i64, p: u64) -> i64 {
    legendre(d, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute force over `F_p²` for any p: the oracle for the residue table.
    fn brute_ap(c: &EllipticCurve, p: u64) -> i64 {
        c.ap_enumerate(p)
    }

    #[test]
    fn sieve_matches_trial_division() {
        let ps = primes_up_to(200);
        let trial: Vec<u64> = (0..=200).filter(|&n| is_prime(n)).collect();
        assert_eq!(ps, trial);
        assert_eq!(primes_up_to(1), Vec::<u64>::new());
    }

    #[test]
    fn y2_x3_x_1_over_f5() {
        let c = EllipticCurve::new([0, 0, 0, 1, 1]).unwrap();
        // points over F_5: x = 0 (y = ±1), 2 (±1), 3 (±1), 4 (±2) plus infinity = 9
        let mut affine = 0;
        for x in 0..5i64 {
            for y in 0..5i64 {
                if (y * y - x * x * x - x - 1).rem_euclid(5) == 0 {
                    affine += 1;
                }
            }
        }
        assert_eq!(affine, 8);
        assert_eq!(c.ap(5).unwrap(), 5 + 1 - (affine + 1));
        assert_eq!(c.ap(5).unwrap(), -3);
    }

    #[test]
    fn residue_table_matches_brute_force() {
        let curves = [[0, 0, 1, -1, 0], [1, -1, 1, -3, 3], [0, 1, 1, -2, 0], [1, 0, 0, -1, 1]];
        for a in curves {
            let c = EllipticCurve::new(a).unwrap();
            for p in primes_up_to(200).into_iter().filter(|&p| p > 3 && !c.is_bad(p)) {
                assert_eq!(c.ap(p).unwrap(), brute_ap(&c, p), "{a:?} at {p}");
            }
        }
    }

    #[test]
    fn known_traces_of_37a() {
        let c = EllipticCurve::new([0, 0, 1, -1, 0]).unwrap();
        assert_eq!(c.discriminant(), BigInt::from(37));
        let expect = [(2, -2), (3, -3), (5, -2), (7, -1), (11, -5), (13, -2), (17, 0), (19, 0)];
        for (p, a) in expect {
            assert_eq!(c.ap(p).unwrap(), a, "p = {p}");
        }
        assert!(matches!(c.ap(37), Err(Error::BadReduction(37))));
    }

    #[test]
    fn singular_curve_is_rejected() {
        // y² = x³ has a cusp
        assert!(matches!(EllipticCurve::new([0, 0, 0, 0, 0]), Err(Error::SingularCurve)));
    }

    #[test]
    fn twist_covariance_on_100_primes() {
        let c = EllipticCurve::new([0, 0, 1, -1, 0]).unwrap();
        let d = -3;
        let t = c.quadratic_twist(d).unwrap();
        let mut checked = 0;
        for p in primes_up_to(1000)
            .into_iter()
            .filter(|&p| p > 3 && !c.is_bad(p) && !t.is_bad(p))
        {
            assert_eq!(
                t.ap(p).unwrap(),
                quadratic_character(d, p) * c.ap(p).unwrap(),
                "p = {p}"
            );
            checked += 1;
            if checked == 100 {
                break;
            }
        }
        assert_eq!(checked, 100);
    }

    #[test]
    fn traces_respect_bound_and_cap() {
        let c = EllipticCurve::new([0, 0, 1, -1, 0]).unwrap();
        let (aps, bad) = c.traces(10, DEFAULT_PRIME_CAP).unwrap();
        assert_eq!(aps.iter().map(|x| x.0).collect::<Vec<_>>(), vec![2, 3, 5, 7]);
        assert!(bad.is_empty());
        assert!(c.traces(100, 50).is_err());
    }
}
