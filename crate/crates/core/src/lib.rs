//! Exact classification machinery for nonunital direct decompositions `M₃ = S ⊕ M`.
//!
//! Scalars live in `Q`, prime fields, or towers of quadratic extensions. Arbitrary
//! decompositions are reduced onto the twelve catalog entries by explicit sequences
//! of automorphisms; see [`canonical`].

pub mod acceptance;
pub mod autos;
pub mod canonical;
pub mod cli;
pub mod error;
pub mod ffsearch;
pub mod field;
pub mod fingerprint;
pub mod io;
pub mod linalg;
pub mod rota;
pub mod subalg;

pub use autos::{random_preserving, AutoSpec, FamilyM6, FamilyU};
pub use canonical::{
    canonicalize, canonicalize_with, catalog, catalog_entry, normalize_basis, scramble, CanonLabel, CanonOptions,
    CanonResult, NormalBasis,
};
pub use error::{Error, Result};
pub use ffsearch::{sample_search, search54, search63, SearchReport};
pub use field::{FieldDescriptor, FieldValue};
pub use fingerprint::{fingerprint, separate_catalog, Fingerprint};
pub use linalg::{Mat3, Subspace};
pub use rota::{complementary_rb, rb_from_splitting, verify_rb, RBOperator};
pub use subalg::{check_decomposition, validate_decomposition, Decomposition, DecompositionReport, MLabel, Subalgebra};
