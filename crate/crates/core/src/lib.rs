//! Exact symbolic computation on hypersurface quotient rings: tangent
//! derivations, projector-lifted connections and their curvature, the
//! Lie-Rinehart double with its bracket and cochain calculus, and a
//! truncated de Rham complex with witness-carrying checks.
//!
//! All arithmetic is exact over the rationals.  Quotient rings are
//! presented by a single relation that is monic (up to a rational unit) in
//! a designated leading variable, and every element is kept in the normal
//! form whose leading-variable degree is below the relation degree.
//!
//! Searches for multipliers, expansions, or witnesses are degree-bounded:
//! a negative answer always means "nothing below this bound" and is
//! reported that way, while positive answers carry witnesses that are
//! re-verified by substitution.

pub mod ansatz;
pub mod connections;
pub mod derham;
pub mod error;
pub mod idempotents;
pub mod lierinehart;
pub mod linalg;
pub mod poly;
pub mod presets;
pub mod ring;
pub mod sampling;
pub mod vectorfields;

pub use connections::{
    adjoint_action, adjoint_action_with_potential, bracket_expansion, check_flat,
    curvature_matrix, curvature_oracle, curvature_with_potential,
    curvature_with_potential_oracle, detect_curvature_type, lifted_connection_apply,
    CurvatureType, GeneratorMap,
};
pub use derham::{
    d0, d1, d1_after_d0_vanishes, exactness_witness, h_bounded, is_closed, omega_n,
    oneform_equal, oneform_is_zero, oneform_relation, twoform_class_nonzero_at_bound,
    twoform_is_zero, twoform_relations, BoundedVerdict, HReport, OneForm, TwoForm,
};
pub use error::Error;
pub use idempotents::{
    derive_matrix, gradient_vector, jacobian_splitting_idempotent, verify_idempotent,
    IdempotentPresentation, MatrixA, ModuleVector,
};
pub use lierinehart::{
    canonical_pair, coboundary_scalar, corner_spanning_set, d0_endo, d0_scalar, d1_endo,
    d1_scalar, d2_endo, d2_scalar, d_bracket, equivalence_transform, gamma, is_corner,
    iso_bracket_residual, iso_map, jacobi_residual, leibniz_residual, pairs_equal,
    section_pair, torsor_act, torsor_act_matrices, ConnectionPair, DElement, LComb,
    LrContext, PairTable,
};
pub use poly::{rat, ratio, Monomial, Rational, RawPoly};
pub use presets::{preset_russell, preset_sphere, Preset};
pub use ring::{
    elem, gradient, monomial_basis, HypersurfaceRing, RingElem, RingRef,
};
pub use sampling::Sampler;
pub use vectorfields::{
    combination, expand_in_generators, sphere_tangent_generators, Derivation,
};
