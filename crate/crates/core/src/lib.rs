//! Isometry invariants of three-dimensional lattices.
//!
//! Any lattice basis is extended to a superbase, reduced to an obtuse
//! superbase and summarized by six conorms. Their square roots, arranged
//! canonically under relabelling of the superbase, form the root form: two
//! lattices are isometric exactly when their root forms agree, and root
//! metrics between root forms vary continuously with the lattice.

pub mod error;
pub mod forms;
pub mod lattice;
pub mod metrics;
pub mod pipeline;
pub mod projection;
pub mod reconstruct;
pub mod reduction;

pub use error::{Error, Result};
pub use forms::{
    conorms_of, coform_to_voform, detect_special, lattice_sign, permute_coform, root_form, voform_to_coform,
    zero_conorm_residual, Coform, LatticeSign, PermutationS4, RootForm, SpecialFlags, Voform,
};
pub use lattice::{
    partial_sums, random_unimodular, superbase_distance, Basis, IntMatrix, PartialSums, Superbase, UnitCell, Vec3,
    DEFAULT_REL_TOL,
};
pub use metrics::{
    continuity_bound, dc7_distance, dc7_of_coform, dc7_vector, find_dc7_collisions, lattice_distance, root_metric, shift_coform,
    BaseDistance, Dc7Collision, Dc7Vector, IntCoform,
};
pub use pipeline::Invariants;
pub use projection::{
    accumulate_density, ft_project, orthorhombic_project, project_root_form, qt_project, DensityGrid, TriangleKind,
    TrianglePoint,
};
pub use reconstruct::reconstruct_superbase;
pub use reduction::{reduce_to_obtuse, reduction_step, Reduced, ReductionStep, ReductionTrace};
