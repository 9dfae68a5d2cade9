//! An executable engine for datatype-generic induction over finite sets.
//!
//! Datatype declarations compile to functor codes; fixed points of those
//! codes are finite terms; predicates live in one of two executable
//! fibrations (set-valued families or subsets); every functor lifts to the
//! predicate level through comprehension, the arrow category, and tagged
//! inverse images; and induction rules are derived and executed by reducing
//! induction to iteration. A law suite verifies the supporting algebra by
//! exhaustive enumeration at desk scale.

pub mod dsl;
pub mod el;
pub mod error;
pub mod fibration;
pub mod functor;
pub mod induction;
pub mod laws;
pub mod lifting;
pub mod sets;

pub use el::{canonical_order, parse_el, El};
pub use error::{Error, ParseError, Result};
pub use fibration::{
    compr_arrow, dagger, fibre_homs, fibre_iso, sharp, truth_arrow, FibreIso, Fibration,
    PredMorphism, Predicate,
};
pub use functor::{
    apply_object, decorate, fmap_el, positions, BoundConfig, FunctorCode,
};
pub use induction::{
    canonicalize_hs, enumerate_terms, fold_term, genind, in_term, ind_direct, out_term, phi, psi,
    psi_fn, term_from_el, InductionResult, StepAlgebra, Term, TermAlgebra,
};
pub use laws::{LawConfig, LawReport, LawResult, Mutation};
pub use lifting::{
    arrow_lift, generic_lift, hj_lift, inv_image, lift_pointwise, truth_pres_iso, ArrowObj,
};
pub use sets::{FinFn, FinSet};
