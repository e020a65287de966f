//! Structure, certification and steady-state numerics for mass-action
//! reaction networks, with emphasis on semi-open enzymatic systems such as
//! multisite phosphorylation cycles and kinase cascades.
//!
//! Structural results are exact (arbitrary-precision rationals); floating
//! point lives only in [`numerics`].

// `!(x > 0.0)` is used deliberately so NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod certificates;
pub mod dsl;
pub mod error;
pub mod families;
pub mod linalg;
pub mod modifications;
pub mod network;
pub mod numerics;
pub mod structure;

// Lets shared test helpers name this crate by its external path.
#[cfg(test)]
extern crate self as crn_core;
#[cfg(test)]
mod properties;
#[cfg(test)]
#[path = "../tests/common/mod.rs"]
mod test_support;

pub use certificates::{
    acr_report, certify_deficiency_zero, certify_enzyme_open, certify_open, certify_enzyme_substrate_open,
    project_steady_state, transfer_rates, AcrEntry, AcrReport, AcrStatus, Certificate, Rule,
    TraceStep, Verdict,
};
pub use dsl::{canonical_serialize, parse_document, parse_network, serialize_with_rates, Document};
pub use error::{Error, Result};
pub use families::{mapk_cascade, phosphorylation_cycle, small_cascade, Family, FamilySpec};
pub use modifications::{
    collapse_parallel, open_partial, open_species, project_complement, symmetry_relabel, union,
    FlowDirection, ProjectedNetwork, SpeciesRelabeling,
};
pub use network::{Complex, RateAssignment, Reaction, ReactionNetwork, Species};
pub use numerics::{
    continue_to_next_cycle, is_nondegenerate, jacobian, lift_steady_state, rhs, scaled_residual,
    search_steady_states, symbolic_rhs_equal, totals, LiftResult, SearchConfig, SteadyStateRecord,
};
pub use structure::{
    conservation_laws, deficiency, deficiency_zero_geometric, independently_conserved,
    is_weakly_reversible, linkage_classes, ConservationBasis, StructuralReport,
};
