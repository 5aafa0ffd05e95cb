//! Modular invariants, their fusion, and alpha-induced sector systems.

#![allow(clippy::needless_range_loop)]

pub mod alpha_sectors;
pub mod catalog;
pub mod error;
pub mod intmat;
pub mod invariant_fusion;
pub mod invariants;
pub(crate) mod linalg;
pub mod modular_data;
pub mod scalars;

pub use alpha_sectors::{
    full_system, fusion_graph, gram_factorize, iota_gram, match_invariant, word_pair, BranchingMatrix,
    CanonicalObject, FullSystem, SectorWord,
};
pub use catalog::{builtin_e6_double, builtin_su2, DataFile, LoadOptions};
pub use error::{Error, ErrorKind, Result};
pub use intmat::IntMatrix;
pub use invariant_fusion::{decompose, fuse, fusion_table, FusionTable};
pub use invariants::{
    commutant_basis, enumerate_invariants, invariant_names, CommutantBasis, EnumerateOptions, ModularInvariant,
};
pub use modular_data::{
    conjugation, fs_indicators, global_index, quantum_dims, simple_currents, validate, verlinde,
    FusionRing, ModularData, ModularSource, ValidationReport,
};
pub use scalars::{snap_to_integer, BigComplex, Real, ScalarExpr, ToleranceConfig};
