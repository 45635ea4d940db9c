//! Exact symbolic computation for degenerating Z/p^2-actions in equal
//! characteristic p.
//!
//! The crate provides, over R = k[[pi]] at desk scale (Laurent polynomials
//! in the uniformizer over F_p):
//!
//! * length-2 Witt vector arithmetic, classical and lambda-twisted, with
//!   the Frobenius, scalar maps and the isogenies phi and phi_(lambda,nu)
//!   ([`witt`]);
//! * Hopf-algebra presentations of `(Z/p^2)_R` and of the rank-p^2 kernels
//!   `K_(lambda,nu)`, with full axiom verification, special-fibre
//!   reduction and classification ([`hopf`]);
//! * the two conductor regimes of the degenerating cover family, the
//!   extension of the Z/p^2-action to the R-model, and the computation of
//!   the effective model as the coefficient-generated subalgebra of the
//!   group ring, with torsor/stabilizer/faithfulness/invariant
//!   diagnostics ([`effmodel`]);
//! * a verification driver aggregating the identity suites per prime
//!   ([`verify`]).
//!
//! Everything is exact: identities are established by polynomial
//! normal-form computation, never numerically.

pub mod base;
pub mod coaction;
pub mod cover;
pub mod effmodel;
pub mod error;
pub mod fp;
pub mod hopf;
pub mod lattice;
pub mod mpoly;
pub mod rewrite;
pub mod text;
pub mod verify;
pub mod witt;

pub use base::BaseElement;
pub use coaction::Coaction;
pub use cover::{BuiltCover, ChangeOfVariables, ConductorSpec, CoverPresentation, Regime};
pub use effmodel::{
    degenerate, DegenerationReport, EffectiveModel, StabilizerReport, Subgroup, Verdict,
};
pub use error::{Error, Result};
pub use fp::PrimeCtx;
pub use hopf::{CheckOutcome, FiberClass, HopfPresentation, KernelForm};
pub use lattice::{Lattice, Row};
pub use mpoly::{MPoly, VarSet, Vars};
pub use rewrite::RewriteSystem;
pub use witt::{
    check_hom, cocycle, frobenius, phi, phi_closed_form, phi_closed_form_residual, scalar_map,
    w2_add, w2_neg, w2_sub, witt_binom, TwistParams, WittPair,
};
