//! Dirichlet characters and residue-class labelling of primes.

use std::collections::BTreeMap;

use num::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite_group::RootOfUnity;

/// A character of `(Z/N)^×` given by images of generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirichletCharacter {
    modulus: u64,
    /// `values[r]` for `gcd(r, N) = 1`.
    values: Vec<Option<RootOfUnity>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharacterRepr {
    pub modulus: u64,
    /// `(generator residue, exponent, order)`: the generator maps to `ζ_order^exponent`.
    pub generators: Vec<(u64, i64, u32)>,
}

impl DirichletCharacter {
    /// Propagates generator images over the Cayley graph of `(Z/N)^×`; every
    /// edge must agree, which makes the result a homomorphism.
    pub fn from_generators(modulus: u64, gens: &[(u64, RootOfUnity)]) -> Result<DirichletCharacter> {
        if modulus == 0 {
            return Err(Error::NotAHomomorphism("modulus must be positive".into()));
        }
        let n = modulus as usize;
        let mut values: Vec<Option<RootOfUnity>> = vec![None; n];
        values[1 % n] = Some(RootOfUnity::one());
        for &(g, _) in gens {
            if g.gcd(&modulus) != 1 {
                return Err(Error::NotAHomomorphism(format!(
                    "generator {g} is not a unit mod {modulus}"
                )));
            }
        }
        let mut queue = vec![1 % modulus];
        while let Some(x) = queue.pop() {
            let vx = values[x as usize].unwrap();
            for &(g, img) in gens {
                let y = x * g % modulus;
                let vy = vx * img;
                match values[y as usize] {
                    None => {
                        values[y as usize] = Some(vy);
                        queue.push(y);
                    }
                    Some(v) if v != vy => {
                        return Err(Error::NotAHomomorphism(format!("inconsistent value at residue {y}")));
                    }
                    _ => {}
                }
            }
        }
        // a second pass catches edges closed before their source was final
        for x in 0..modulus {
            if let Some(vx) = values[x as usize] {
                for &(g, img) in gens {
                    if values[(x * g % modulus) as usize] != Some(vx * img) {
                        return Err(Error::NotAHomomorphism(format!(
                            "inconsistent value at residue {}",
                            x * g % modulus
                        )));
                    }
                }
            }
        }
        let units = (0..modulus).filter(|r| r.gcd(&modulus) == 1).count();
        if values.iter().filter(|v| v.is_some()).count() != units {
            return Err(Error::NotAHomomorphism(
                "generators do not generate the unit group".into(),
            ));
        }
        Ok(DirichletCharacter { modulus, values })
    }

    pub fn from_repr(r: &CharacterRepr) -> Result<DirichletCharacter> {
        let gens: Vec<(u64, RootOfUnity)> = r
            .generators
            .iter()
            .map(|&(g, e, o)| (g, RootOfUnity::new(e, o)))
            .collect();
        DirichletCharacter::from_generators(r.modulus, &gens)
    }

    pub fn trivial(modulus: u64) -> DirichletCharacter {
        let values = (0..modulus)
            .map(|r| (r.gcd(&modulus) == 1).then(RootOfUnity::one))
            .collect();
        DirichletCharacter { modulus, values }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// `χ(n)`, or `None` when `gcd(n, N) > 1`.
    pub fn eval(&self, n: u64) -> Option<RootOfUnity> {
        self.values[(n % self.modulus) as usize]
    }

    pub fn order(&self) -> u32 {
        self.values
            .iter()
            .flatten()
            .map(|v| v.order())
            .fold(1, |a, b| a.lcm(&b))
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().flatten().all(|v| v.is_one())
    }
}

/// Residue classes mod N mapped to conjugacy classes of Γ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassMap {
    pub modulus: u64,
    pub classes: BTreeMap<u64, usize>,
}

impl ClassMap {
    /// Every prime in the identity class.
    pub fn trivial() -> ClassMap {
        ClassMap {
            modulus: 1,
            classes: BTreeMap::from([(0, 0)]),
        }
    }

    /// Classes given by the values of a character: the k-th power of its
    /// generating root goes to class k.
    pub fn from_character(chi: &DirichletCharacter) -> ClassMap {
        let ord = chi.order();
        let classes = (0..chi.modulus())
            .filter_map(|r| chi.eval(r).map(|v| (r, v.exponent_in(ord).unwrap() as usize)))
            .collect();
        ClassMap {
            modulus: chi.modulus(),
            classes,
        }
    }
}

/// The component class of `Frob_p`, read off from `p mod N`.
pub fn frobenius_class_label(p: u64, map: &ClassMap) -> Result<usize> {
    if map.modulus > 1 && map.modulus.is_multiple_of(p) {
        return Err(Error::BadPrime(p));
    }
    map.classes
        .get(&(p % map.modulus))
        .copied()
        .ok_or_else(|| Error::Config(format!("no class for residue {} mod {}", p % map.modulus, map.modulus)))
}
