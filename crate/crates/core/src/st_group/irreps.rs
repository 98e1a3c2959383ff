//! Irreducible representations `Sym^{e_1} ⊗ … ⊗ Sym^{e_m} ⊗ η` for specs with
//! trivial permutation action.
//!
//! H is the group generated by `−I` and the block-diagonal twists
//! `h(γ) = ⊕_i twist(γ, i)`. The group is the image of `SU(2)^m × H` under
//! `(g, h) ↦ ⊕_i g_i ⊗ h_i`, whose kernel consists of `(s_i I, ⊕ s_i I)` for the
//! sign patterns lying in H. A label is admissible when η agrees with
//! `∏ s_i^{e_i}` on each such sign element.

use serde::Serialize;

use super::STGroupSpec;
use crate::error::{Error, Result};
use crate::finite_group::{CharacterTable, CycloMatrix, Cyclotomic, MatrixGroup};

/// Largest H handled.
pub const MAX_H_ORDER: usize = 256;

#[derive(Clone, Debug, Serialize)]
pub struct IrrepLabel {
    /// Symmetric-power exponents, one per SU(2) factor.
    pub e: Vec<u32>,
    /// Index of η in the character table of H.
    pub eta_index: usize,
    pub eta_degree: usize,
    /// Character of η on the conjugacy classes of H.
    pub eta_class_values: Vec<Cyclotomic>,
    /// `χ_η(h(γ))` for every component γ.
    pub eta_on_gamma: Vec<Cyclotomic>,
}

impl IrrepLabel {
    pub fn is_trivial(&self) -> bool {
        self.e.iter().all(|&x| x == 0) && self.eta_index == 0
    }
}

/// H with its character table and the data needed to evaluate labels.
#[derive(Clone, Debug)]
pub struct IrrepContext {
    pub h: MatrixGroup,
    pub table: CharacterTable,
    /// Index in H of `h(γ)` for each γ.
    pub gamma_to_h: Vec<usize>,
    /// Sign patterns `⊕ s_i I` lying in H, with their index in H.
    pub sign_elements: Vec<(usize, Vec<i8>)>,
}

impl IrrepContext {
    pub fn new(spec: &STGroupSpec) -> Result<IrrepContext> {
        if !spec.has_trivial_action() {
            return Err(Error::Unsupported(
                "irreducible labels need a trivial permutation action".into(),
            ));
        }
        let n = spec.gamma().order();
        let m = spec.m();
        let hs: Vec<CycloMatrix> = (0..n)
            .map(|g| CycloMatrix::block_diagonal(&(0..m).map(|i| spec.twist(g, i).clone()).collect::<Vec<_>>()))
            .collect();
        let dim = hs[0].dim();
        let mut gens = vec![CycloMatrix::identity(dim).neg()];
        gens.extend(hs.iter().filter(|h| !h.is_identity()).cloned());
        let h = MatrixGroup::generate(&gens, MAX_H_ORDER)?;
        let gamma_to_h = hs
            .iter()
            .map(|x| {
                h.find(x)
                    .ok_or_else(|| Error::InvalidSpec("twist not found in H".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut sign_elements = Vec::new();
        for code in 0..(1u32 << m) {
            let signs: Vec<i8> = (0..m).map(|i| if code >> i & 1 == 1 { -1 } else { 1 }).collect();
            let blocks: Vec<CycloMatrix> = (0..m)
                .map(|i| CycloMatrix::scalar(spec.block_dims()[i], &Cyclotomic::from_integer(signs[i] as i64)))
                .collect();
            if let Some(idx) = h.find(&CycloMatrix::block_diagonal(&blocks)) {
                sign_elements.push((idx, signs));
            }
        }
        let table = CharacterTable::compute(h.group())?;
        Ok(IrrepContext {
            h,
            table,
            gamma_to_h,
            sign_elements,
        })
    }

    /// η(D_s) = ∏ s_i^{e_i} for each sign element D_s of H.
    pub fn parity_ok(&self, eta: usize, e: &[u32]) -> bool {
        let deg = Cyclotomic::from_integer(self.table.degree(eta) as i64);
        self.sign_elements.iter().all(|(idx, signs)| {
            let sign: i64 = signs
                .iter()
                .zip(e)
                .map(|(&s, &k)| if s < 0 && k % 2 == 1 { -1 } else { 1 })
                .product();
            *self.table.value(eta, *idx) == &deg * &Cyclotomic::from_integer(sign)
        })
    }

    pub fn label(&self, e: Vec<u32>, eta: usize) -> IrrepLabel {
        IrrepLabel {
            eta_index: eta,
            eta_degree: self.table.degree(eta),
            eta_class_values: self.table.class_values(eta).to_vec(),
            eta_on_gamma: self
                .gamma_to_h
                .iter()
                .map(|&x| self.table.value(eta, x).clone())
                .collect(),
            e,
        }
    }
}

/// All admissible labels with every `e_i ≤ e_max`, exponents in lexicographic
/// order and η in character-table order.
pub fn enumerate_irreps(spec: &STGroupSpec, e_max: u32) -> Result<Vec<IrrepLabel>> {
    let ctx = IrrepContext::new(spec)?;
    let m = spec.m();
    let mut out = Vec::new();
    let mut e = vec![0u32; m];
    loop {
        for eta in 0..ctx.table.num_irreps() {
            if ctx.parity_ok(eta, &e) {
                out.push(ctx.label(e.clone(), eta));
            }
        }
        // odometer, last coordinate fastest
        let mut k = m;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            if e[k] < e_max {
                e[k] += 1;
                for x in e.iter_mut().skip(k + 1) {
                    *x = 0;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::finite_group::FiniteGroup;

    #[test]
    fn su2_labels_follow_parity() {
        let spec = STGroupSpec::su2();
        let labels = enumerate_irreps(&spec, 4).unwrap();
        // H = {±I}: trivial η for even e, sign for odd e
        assert_eq!(labels.len(), 5);
        for l in &labels {
            let sign_at_minus = l.eta_class_values.iter().any(|v| *v == Cyclotomic::from_integer(-1));
            assert_eq!(sign_at_minus, l.e[0] % 2 == 1);
        }
        assert!(labels[0].is_trivial());
    }

    #[test]
    fn e_max_zero_gives_irreps_trivial_on_minus_one() {
        let i = Cyclotomic::root_of_unity(4, 1);
        let twists = (0..4).map(|k| vec![CycloMatrix::scalar(1, &i.pow(k))]).collect();
        let spec = STGroupSpec::new(1, FiniteGroup::cyclic(4), None, Some(twists), 2, None, BTreeMap::new()).unwrap();
        let labels = enumerate_irreps(&spec, 0).unwrap();
        // H = μ_4, characters with χ(−1) = 1 are χ^0 and χ^2
        assert_eq!(labels.len(), 2);
    }

    #[test]
    fn nontrivial_action_is_refused() {
        let spec = STGroupSpec::permutation_product(2, FiniteGroup::cyclic(2), vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert!(matches!(enumerate_irreps(&spec, 1), Err(Error::Unsupported(_))));
    }
}
