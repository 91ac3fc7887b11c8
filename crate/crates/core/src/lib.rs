//! Basic Euler characteristics of Riemannian foliations, assembled over
//! strata and cross-checked against invariant fiber cohomology, together
//! with exact lens-space eta invariants for the transverse signature.
//!
//! Exact routines are generic over the integer type behind
//! [`num_rational::Ratio`]; floating-point channels are generic over
//! [`num_traits::Float`]. The aliases below fix the defaults used
//! throughout the crate.

pub mod arith;
pub mod catalog;
pub mod cohomology;
pub mod document;
pub mod error;
pub mod eta;
pub mod group;
pub mod strata;

/// Exact arbitrary-precision fraction.
pub type Rational = num_rational::BigRational;
/// Fixed-width exact fraction, for small computations and tests.
pub type SmallRational = num_rational::Ratio<i64>;
/// Floating-point type used by the cross-check channels.
pub type Real = f64;
/// Complex numbers over [`Real`].
pub type Complex = num_complex::Complex<Real>;

pub use arith::{cotangent_pair_sum, dedekind_sum, sawtooth, CotangentSum, LensDatum, LensTable};
pub use catalog::{verify_catalog, verify_documents, VerifyOptions, VerifyReport};
pub use cohomology::{
    basic_euler_oracle, carriere_basic_betti, flat_circle_betti, suspension_basic_betti,
    BettiVector, FiberModel, FlatCircleBundle, OracleModel,
};
pub use document::{load_example, parse_example, ExampleDocument};
pub use error::{Error, Result};
pub use eta::{
    blowup_defect_check, eta_lens_signature, transverse_signature, LensEta, SignatureProblem,
};
pub use group::{
    exterior_power_action, invariant_betti, isotypic_multiplicity, validate_action, Character,
    CyclicGroup, GradedAction, IntMatrix,
};
pub use strata::{
    extended_euler, gauss_bonnet, h_de_rham, leaf_closure_euler, rep_valued_gauss_bonnet,
    ExtendedSpace, FoliationExample, LeafClosureModel, Stratum,
};
