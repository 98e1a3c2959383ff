//! Exact finite group data: cyclotomic arithmetic, groups, representations,
//! 2-cocycles and character tables.

pub mod chartable;
pub mod cocycle;
pub mod cyclotomic;
pub mod group;
pub mod matrix;
pub mod rep;

pub use chartable::CharacterTable;
pub use cocycle::{coboundary, split_cocycle, verify_cocycle, Cocycle2, SplitOutcome, Splitting};
pub use cyclotomic::{Cyclotomic, RootOfUnity};
pub use group::{FiniteGroup, MatrixGroup};
pub use matrix::CycloMatrix;
pub use rep::{build_eta_e, character, twist_projective_rep, EtaInputs, ProjectiveRep, UnitaryRep};
