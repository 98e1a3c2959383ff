//! Unitary representations with exact cyclotomic matrices, projective
//! representations, twisting by a splitting, and the parity-twisted η_e.

use serde::Serialize;

use super::cocycle::{coboundary, Cocycle2, Splitting};
use super::cyclotomic::{Cyclotomic, RootOfUnity};
use super::group::{FiniteGroup, MatrixGroup};
use super::matrix::CycloMatrix;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnitaryRep {
    group: FiniteGroup,
    dim: usize,
    images: Vec<CycloMatrix>,
}

impl UnitaryRep {
    /// Validates identity, unitarity and the homomorphism property.
    pub fn new(group: &FiniteGroup, images: Vec<CycloMatrix>) -> Result<UnitaryRep> {
        let rep = UnitaryRep::checked_shape(group, images)?;
        for (s, t) in group.check_pairs() {
            if rep.images[s].mul(&rep.images[t]) != rep.images[group.mul(s, t)] {
                return Err(Error::InvalidRepresentation(format!(
                    "rho(s)rho(t) != rho(st) at ({s}, {t})"
                )));
            }
        }
        Ok(rep)
    }

    fn checked_shape(group: &FiniteGroup, images: Vec<CycloMatrix>) -> Result<UnitaryRep> {
        if images.len() != group.order() {
            return Err(Error::DimensionMismatch(format!(
                "{} images for a group of order {}",
                images.len(),
                group.order()
            )));
        }
        let dim = images[0].dim();
        if images.iter().any(|m| m.dim() != dim) {
            return Err(Error::DimensionMismatch("images of different sizes".into()));
        }
        if !images[group.identity()].is_identity() {
            return Err(Error::InvalidRepresentation("identity does not map to I".into()));
        }
        if let Some(s) = images.iter().position(|m| !m.is_unitary()) {
            return Err(Error::InvalidRepresentation(format!("image of {s} is not unitary")));
        }
        Ok(UnitaryRep {
            group: group.clone(),
            dim,
            images,
        })
    }

    pub fn trivial(group: &FiniteGroup) -> UnitaryRep {
        UnitaryRep {
            group: group.clone(),
            dim: 1,
            images: vec![CycloMatrix::identity(1); group.order()],
        }
    }

    /// One-dimensional representation from per-element values.
    pub fn one_dim(group: &FiniteGroup, values: &[RootOfUnity]) -> Result<UnitaryRep> {
        let images = values
            .iter()
            .map(|r| CycloMatrix::scalar(1, &r.to_cyclotomic()))
            .collect();
        UnitaryRep::new(group, images)
    }

    /// The defining representation of a matrix group.
    pub fn natural(h: &MatrixGroup) -> UnitaryRep {
        UnitaryRep {
            group: h.group().clone(),
            dim: h.dim(),
            images: h.elements().to_vec(),
        }
    }

    /// Left regular representation.
    pub fn regular(group: &FiniteGroup) -> UnitaryRep {
        let n = group.order();
        let zero = Cyclotomic::zero(1);
        let one = Cyclotomic::from_integer(1);
        let images = (0..n)
            .map(|g| {
                let rows = (0..n)
                    .map(|h| {
                        (0..n)
                            .map(|x| {
                                if group.mul(g, x) == h {
                                    one.clone()
                                } else {
                                    zero.clone()
                                }
                            })
                            .collect()
                    })
                    .collect();
                CycloMatrix::from_rows(rows).unwrap()
            })
            .collect();
        UnitaryRep {
            group: group.clone(),
            dim: n,
            images,
        }
    }

    pub fn det(&self) -> UnitaryRep {
        let images = self
            .images
            .iter()
            .map(|m| CycloMatrix::scalar(1, &m.determinant()))
            .collect();
        UnitaryRep {
            group: self.group.clone(),
            dim: 1,
            images,
        }
    }

    pub fn tensor(&self, other: &UnitaryRep) -> Result<UnitaryRep> {
        if self.group != other.group {
            return Err(Error::InvalidRepresentation(
                "tensor of representations of different groups".into(),
            ));
        }
        let images = self.images.iter().zip(&other.images).map(|(a, b)| a.kron(b)).collect();
        Ok(UnitaryRep {
            group: self.group.clone(),
            dim: self.dim * other.dim,
            images,
        })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn image(&self, s: usize) -> &CycloMatrix {
        &self.images[s]
    }

    pub fn images(&self) -> &[CycloMatrix] {
        &self.images
    }

    /// `images[s]·images[t] = images[st]` on every pair (exhaustive for small groups).
    pub fn is_homomorphism(&self) -> bool {
        self.group
            .check_pairs()
            .into_iter()
            .all(|(s, t)| self.images[s].mul(&self.images[t]) == self.images[self.group.mul(s, t)])
    }
}

/// Character `s ↦ tr ρ(s)`, indexed by group element.
pub fn character(rho: &UnitaryRep) -> Vec<Cyclotomic> {
    rho.images.iter().map(|m| m.trace()).collect()
}

/// A projective representation `ρ(s)ρ(t) = c(s,t)·ρ(st)` with declared multiplier `c`.
#[derive(Clone, Debug)]
pub struct ProjectiveRep {
    images: Vec<CycloMatrix>,
    multiplier: Cocycle2,
}

impl ProjectiveRep {
    pub fn new(multiplier: &Cocycle2, images: Vec<CycloMatrix>) -> Result<ProjectiveRep> {
        let g = multiplier.group();
        let shape = UnitaryRep::checked_shape(g, images)?;
        for (s, t) in g.check_pairs() {
            let lhs = shape.images[s].mul(&shape.images[t]);
            let rhs = shape.images[g.mul(s, t)].scale(&multiplier.value(s, t));
            if lhs != rhs {
                return Err(Error::MultiplierMismatch(s, t));
            }
        }
        Ok(ProjectiveRep {
            images: shape.images,
            multiplier: multiplier.clone(),
        })
    }

    /// `s ↦ α(s)·ρ(s)` for a genuine `ρ`; its multiplier is `coboundary(α)`.
    pub fn scaled(rho: &UnitaryRep, alpha: &Splitting) -> Result<ProjectiveRep> {
        let images = rho
            .images
            .iter()
            .enumerate()
            .map(|(s, m)| m.scale(&alpha.value(s)))
            .collect();
        ProjectiveRep::new(&coboundary(alpha), images)
    }

    pub fn multiplier(&self) -> &Cocycle2 {
        &self.multiplier
    }

    pub fn images(&self) -> &[CycloMatrix] {
        &self.images
    }
}

/// `s ↦ α(s)^{-1}·ρ(s)`, which is a genuine representation when `coboundary(α)`
/// equals the multiplier of `ρ`.
pub fn twist_projective_rep(rho: &ProjectiveRep, alpha: &Splitting) -> Result<UnitaryRep> {
    let g = rho.multiplier.group();
    if alpha.group() != g {
        return Err(Error::DimensionMismatch(
            "splitting is defined on a different group".into(),
        ));
    }
    let delta = coboundary(alpha);
    let n = g.order();
    if let Some(k) = (0..n * n).find(|&k| delta.root(k / n, k % n) != rho.multiplier.root(k / n, k % n)) {
        return Err(Error::SplittingMismatch(k / n, k % n));
    }
    let images = rho
        .images
        .iter()
        .enumerate()
        .map(|(s, m)| m.scale(&alpha.root(s).inv().to_cyclotomic()))
        .collect();
    UnitaryRep::new(g, images)
}

/// Inputs to [`build_eta_e`].
pub struct EtaInputs<'a> {
    /// Genuine representation θ of G in U(N).
    pub theta: &'a UnitaryRep,
    /// One-dimensional character ε of G.
    pub epsilon: &'a UnitaryRep,
    /// Finite subgroup H ⊂ U(N) containing −I and every `sqrt_choice(s)·θ(s)`.
    pub h: &'a MatrixGroup,
    /// Representation η of H.
    pub eta: &'a UnitaryRep,
}

/// `η_e(s) = sqrt(s)^{-e} · η(sqrt(s)·θ(s))` for per-element square roots `sqrt(s)² = ε(s)`.
pub fn build_eta_e(inputs: &EtaInputs<'_>, e: u32, sqrt_choice: &[Cyclotomic]) -> Result<UnitaryRep> {
    let EtaInputs { theta, epsilon, h, eta } = *inputs;
    let g = theta.group();
    if epsilon.group() != g || epsilon.dim() != 1 {
        return Err(Error::InvalidRepresentation(
            "epsilon must be a 1-dimensional rep of the same group".into(),
        ));
    }
    if eta.group() != h.group() {
        return Err(Error::InvalidRepresentation("eta is not a representation of H".into()));
    }
    if theta.dim() != h.dim() {
        return Err(Error::DimensionMismatch(
            "theta and H act on spaces of different dimension".into(),
        ));
    }
    if sqrt_choice.len() != g.order() {
        return Err(Error::DimensionMismatch(
            "one square root per group element required".into(),
        ));
    }
    let minus_i = h
        .minus_identity()
        .ok_or_else(|| Error::InvalidGroup("H does not contain -I".into()))?;
    let sign = if e.is_multiple_of(2) {
        Cyclotomic::from_integer(1)
    } else {
        Cyclotomic::from_integer(-1)
    };
    if *eta.image(minus_i) != CycloMatrix::scalar(eta.dim(), &sign) {
        return Err(Error::ParityViolation { e });
    }
    let mut images = Vec::with_capacity(g.order());
    for s in 0..g.order() {
        let r = &sqrt_choice[s];
        if &(r * r) != epsilon.image(s).get(0, 0) {
            return Err(Error::InvalidRepresentation(format!(
                "sqrt_choice({s})^2 != epsilon({s})"
            )));
        }
        let hs = theta.image(s).scale(r);
        let idx = h
            .find(&hs)
            .ok_or_else(|| Error::InvalidRepresentation(format!("sqrt({s})·theta({s}) is not in H")))?;
        let factor = r.pow(-(e as i64));
        images.push(eta.image(idx).scale(&factor));
    }
    UnitaryRep::new(g, images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_group::cocycle::{cyclic_extension_cocycle, split_cocycle};

    fn z(n: u32, k: i64) -> Cyclotomic {
        Cyclotomic::root_of_unity(n, k)
    }

    fn q8_matrices() -> MatrixGroup {
        let zero = Cyclotomic::zero(4);
        let qi = CycloMatrix::diagonal(&[z(4, 1), z(4, 3)]);
        let qj = CycloMatrix::from_rows(vec![
            vec![zero.clone(), Cyclotomic::from_integer(1)],
            vec![Cyclotomic::from_integer(-1), zero],
        ])
        .unwrap();
        MatrixGroup::generate(&[qi, qj], 64).unwrap()
    }

    #[test]
    fn trivial_and_regular_characters() {
        let g = FiniteGroup::cyclic(3);
        assert!(character(&UnitaryRep::trivial(&g)).iter().all(|c| c.is_one()));
        let chi = character(&UnitaryRep::regular(&g));
        assert_eq!(chi[0], Cyclotomic::from_integer(3));
        assert!(chi[1].is_zero() && chi[2].is_zero());
        assert!(UnitaryRep::regular(&FiniteGroup::symmetric(3)).is_homomorphism());
    }

    #[test]
    fn quaternion_natural_character_at_minus_one() {
        let h = q8_matrices();
        assert_eq!(h.order(), 8);
        let rho = UnitaryRep::natural(&h);
        let m = h.minus_identity().unwrap();
        assert_eq!(character(&rho)[m], Cyclotomic::from_integer(-2));
    }

    #[test]
    fn characters_are_class_functions() {
        let h = q8_matrices();
        let chi = character(&UnitaryRep::natural(&h));
        for class in h.group().conjugacy_classes() {
            assert!(class.iter().all(|&x| chi[x] == chi[class[0]]));
        }
    }

    #[test]
    fn rejects_non_homomorphism() {
        let g = FiniteGroup::cyclic(2);
        let vals = [RootOfUnity::one(), RootOfUnity::new(1, 4)];
        assert!(matches!(
            UnitaryRep::one_dim(&g, &vals),
            Err(Error::InvalidRepresentation(_))
        ));
    }

    #[test]
    fn twisting_with_trivial_data_is_identity() {
        let h = q8_matrices();
        let rho = UnitaryRep::natural(&h);
        let alpha = Splitting::trivial(h.group());
        let proj = ProjectiveRep::scaled(&rho, &alpha).unwrap();
        assert_eq!(twist_projective_rep(&proj, &alpha).unwrap(), rho);
    }

    #[test]
    fn twisting_projective_rep_of_klein_four() {
        // s = (x, y) ↦ i^x · diag(1, -1)^y has multiplier c(s,t) = -1 iff x_s = x_t = 1
        let c = cyclic_extension_cocycle();
        let images = (0..4)
            .map(|idx| {
                let (x, y) = ((idx / 2) as i64, (idx % 2) as i64);
                CycloMatrix::diagonal(&[z(4, x), z(4, x + 2 * y)])
            })
            .collect();
        let proj = ProjectiveRep::new(&c, images).unwrap();
        let alpha = split_cocycle(&c, 4).unwrap().splitting().unwrap().clone();
        let genuine = twist_projective_rep(&proj, &alpha).unwrap();
        assert!(genuine.is_homomorphism());
        assert!(matches!(
            twist_projective_rep(&proj, &Splitting::trivial(c.group())),
            Err(Error::SplittingMismatch(..))
        ));
    }

    #[test]
    fn projective_relation_is_checked() {
        let c = cyclic_extension_cocycle();
        let images = vec![CycloMatrix::identity(1); 4];
        assert!(matches!(
            ProjectiveRep::new(&c, images),
            Err(Error::MultiplierMismatch(2, 2))
        ));
    }

    /// G = Z/8 acting through θ(g) = -i·q_i, ε = -1 on the generator, H = Q8.
    fn eta_setup() -> (FiniteGroup, UnitaryRep, UnitaryRep, MatrixGroup) {
        let g = FiniteGroup::cyclic(8);
        let h = q8_matrices();
        let t = CycloMatrix::diagonal(&[z(4, 1), z(4, 3)]).scale(&z(4, 3));
        let mut images = vec![CycloMatrix::identity(2)];
        for k in 1..8 {
            images.push(images[k - 1].mul(&t));
        }
        let theta = UnitaryRep::new(&g, images).unwrap();
        let eps = UnitaryRep::one_dim(&g, &(0..8).map(|k| RootOfUnity::new(k, 2)).collect::<Vec<_>>()).unwrap();
        (g, theta, eps, h)
    }

    fn sqrt_choice(flips: u32) -> Vec<Cyclotomic> {
        (0..8)
            .map(|k| {
                let r = z(4, k);
                if flips >> k & 1 == 1 {
                    -r
                } else {
                    r
                }
            })
            .collect()
    }

    #[test]
    fn eta_e_is_a_homomorphism_and_independent_of_roots() {
        let (_, theta, eps, h) = eta_setup();
        let eta = UnitaryRep::natural(&h);
        let inputs = EtaInputs {
            theta: &theta,
            epsilon: &eps,
            h: &h,
            eta: &eta,
        };
        let a = build_eta_e(&inputs, 1, &sqrt_choice(0)).unwrap();
        assert!(a.is_homomorphism());
        for flips in [0b1010_0110, 0b0111_1111, 0b1000_0001] {
            assert_eq!(build_eta_e(&inputs, 1, &sqrt_choice(flips)).unwrap(), a);
        }
    }

    #[test]
    fn eta_e_with_e_zero_and_trivial_epsilon_is_eta_composed() {
        let (g, _, _, h) = eta_setup();
        let triv = UnitaryRep::trivial(&g);
        let eta = UnitaryRep::trivial(h.group());
        let ones = vec![Cyclotomic::from_integer(1); 8];
        // θ(g) must lie in H itself here
        let t = CycloMatrix::diagonal(&[z(4, 1), z(4, 3)]);
        let mut images = vec![CycloMatrix::identity(2)];
        for k in 1..8 {
            images.push(images[k - 1].mul(&t));
        }
        let theta_in_h = UnitaryRep::new(&g, images).unwrap();
        let out = build_eta_e(
            &EtaInputs {
                theta: &theta_in_h,
                epsilon: &triv,
                h: &h,
                eta: &eta,
            },
            0,
            &ones,
        )
        .unwrap();
        assert_eq!(out, triv);
    }

    #[test]
    fn eta_e_parity_violation() {
        let (_, theta, eps, h) = eta_setup();
        let eta = UnitaryRep::trivial(h.group());
        let inputs = EtaInputs {
            theta: &theta,
            epsilon: &eps,
            h: &h,
            eta: &eta,
        };
        assert!(matches!(
            build_eta_e(&inputs, 1, &sqrt_choice(0)),
            Err(Error::ParityViolation { e: 1 })
        ));
    }
}
