//! Homological monodromy of surface bundles and the construction calculus
//! built on it.

mod bundle;
mod coinvariants;
mod rep;

pub use bundle::{
    build_w, build_z_gb, declared_ekkos, fiber_sum_with_product, kodaira_thurston_matrix, kodaira_thurston_q,
    product_block, restrict_to_cover, section_sum, trefoil_block, trefoil_matrix, BundleContent, BundleSpec,
    DeclaredBlock, Leaf, Parity, Provenance, RankInterval, Signature,
};
pub use coinvariants::{coinvariants, CoinvariantsReport};
pub use rep::{
    is_symplectic, symplectic_form, symplectic_inverse, validate_rep, CoverOrigin, GeneratingSetRep, RepViolation,
    SymplecticRep, ValidationReport,
};
