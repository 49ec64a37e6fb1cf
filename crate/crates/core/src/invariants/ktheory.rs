//! Ruelle K-theory and Smale-space homology of the quotient system.

use super::groups::{cokernel, dimension_group, kernel_rank, FgAbelianGroup, MarkedGroupPresentation, Variant};
use crate::embedding::EmbeddingPair;
use crate::matrix::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KTheoryTable {
    pub k0_s: MarkedGroupPresentation,
    pub k1_s: MarkedGroupPresentation,
    pub k0_u: MarkedGroupPresentation,
    pub k1_u: MarkedGroupPresentation,
    pub k0_rs: FgAbelianGroup,
    pub k1_rs: FgAbelianGroup,
    pub k0_ru: FgAbelianGroup,
    pub k1_ru: FgAbelianGroup,
    /// False when G is not primitive; the formulas are still evaluated.
    pub valid: bool,
}

/// coker(I - a) (+) Z^{rank ker(I - b)}
fn mixed(a: &IntMatrix, b: &IntMatrix) -> FgAbelianGroup {
    cokernel(&a.identity_minus()).direct_sum(&FgAbelianGroup::free(kernel_rank(&b.identity_minus())))
}

pub fn ruelle_k_theory(p: &EmbeddingPair) -> KTheoryTable {
    let ag = p.g.adjacency_matrix();
    let ah = p.h.adjacency_matrix();
    let (agt, aht) = (ag.transpose(), ah.transpose());
    KTheoryTable {
        k0_s: dimension_group(&p.g, Variant::Unstable, "D^u(G)", "A_G^T"),
        k1_s: dimension_group(&p.h, Variant::Unstable, "D^u(H)", "A_H^T"),
        k0_u: dimension_group(&p.g, Variant::Stable, "D^s(G)", "A_G^-1"),
        k1_u: dimension_group(&p.h, Variant::Stable, "D^s(H)", "A_H^-1"),
        k0_rs: mixed(&agt, &aht),
        k1_rs: mixed(&aht, &agt),
        k0_ru: mixed(&ag, &ah),
        k1_ru: mixed(&ah, &ag),
        valid: p.g.is_primitive().map(|r| r.0).unwrap_or(false),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HomologyGroup {
    Presented(MarkedGroupPresentation),
    Zero,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyTable {
    pub stable: [MarkedGroupPresentation; 2],
    pub unstable: [MarkedGroupPresentation; 2],
}

impl HomologyTable {
    pub fn stable_degree(&self, k: usize) -> HomologyGroup {
        self.stable.get(k).cloned().map_or(HomologyGroup::Zero, HomologyGroup::Presented)
    }

    pub fn unstable_degree(&self, k: usize) -> HomologyGroup {
        self.unstable.get(k).cloned().map_or(HomologyGroup::Zero, HomologyGroup::Presented)
    }
}

pub fn homology_table(p: &EmbeddingPair) -> HomologyTable {
    HomologyTable {
        stable: [
            dimension_group(&p.g, Variant::Stable, "D^s(G)", "A_G"),
            dimension_group(&p.h, Variant::Stable, "D^s(H)", "A_H"),
        ],
        unstable: [
            dimension_group(&p.g, Variant::Unstable, "D^u(G)", "A_G^T"),
            dimension_group(&p.h, Variant::Unstable, "D^u(H)", "A_H^T"),
        ],
    }
}
