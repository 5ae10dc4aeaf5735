//! Exact computations for coadjoint orbits of completely solvable Lie
//! algebras: Jordan-Hölder flags, Vergne polarizations, fine and ultrafine
//! layers of the dual, and chains of invariant open sets built from them.
//!
//! Functionals and vectors are in flag coordinates unless a function says
//! otherwise; every index that appears in a label is 1-based.

pub mod catalog;
pub mod chain;
pub mod error;
pub mod format;
pub mod lie;
pub mod linalg;
pub mod orbits;
pub mod polarize;
pub mod poly;
pub mod scalar;
pub mod stratify;
pub mod subgroup;

pub use chain::{
    enumerate_layers, order_layers, solvability_report, verify_openness, ChainReport, LayerCatalog,
    PerturbationConfig, SamplingConfig,
};
pub use error::{Error, Result};
pub use format::{AlgebraFile, ReportDocument};
pub use lie::{find_jh_flag, roots, validate_algebra, validate_jh_flag, Functional, JordanHolderFlag, LieAlgebra};
pub use linalg::{Matrix, Subspace};
pub use orbits::{coadjoint_apply, nilpotent_cross_section, orbit_dimension, CoadjointImage, GroupWord, OrbitRepresentative};
pub use polarize::{check_polarization, descending_sequence, pukanszky_containment_check, vergne_polarization, PolarizationTrace};
pub use scalar::{GaussianRational, Rational, Scalar};
pub use stratify::{complexified_label, fine_index, jump_set, layer_label, restricted_radical, ultrafine_label, FineIndex, LayerLabel, UltrafineLabel};
pub use subgroup::{grassmann_gap, rho_exponent, subgroup_from_subalgebra, SubgroupDescriptor};
