//! Integer invariants: Smith normal form, dimension and K-groups, the pair
//! complex, and seed synthesis.

pub mod complex;
pub mod groups;
pub mod ktheory;
pub mod snf;
pub mod synthesis;

pub use complex::{build_pair_complex, PairComplex};
pub use groups::{bowen_franks, cokernel, dimension_group, kernel_rank, FgAbelianGroup, MarkedGroupPresentation, Variant};
pub use ktheory::{homology_table, ruelle_k_theory, HomologyTable, KTheoryTable};
pub use snf::{smith_normal_form, SmithDecomposition};
pub use synthesis::{realize_group_matrix, synthesize_seed};
