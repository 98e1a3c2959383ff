//! Frobenius data: point counts, coefficient tables, Dirichlet characters and
//! exact arithmetic identities on them.

pub mod curve;
pub mod dirichlet;
pub mod quadratic;
pub mod table;

pub use curve::{is_prime, primes_up_to, quadratic_character, EllipticCurve, DEFAULT_PRIME_CAP};
pub use dirichlet::{frobenius_class_label, CharacterRepr, ClassMap, DirichletCharacter};
pub use quadratic::QuadFieldElem;
pub use table::{
    normalize, ribet_identity_check, tensor_trace_check, CheckReport, CoefficientTable, PrimeFailure, PrimeRecord,
};
