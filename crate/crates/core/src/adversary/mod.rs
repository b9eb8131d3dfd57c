//! Indistinguishable-matrix constructions.
//!
//! Matrices that share the Krylov information `N_j(A, b)` with `A` cannot
//! be told apart by any algorithm that sees only that information. The
//! builders here produce such matrices explicitly, together with
//! certificates that re-check their claims from raw data.

mod blowup;
mod distinguished;
mod record;
mod twin;
mod worst;

pub use blowup::{
    adversarial_blowup, blowup_residual, blowup_threshold, spd_threshold, AdversaryCertificate,
    CertificateCheck, MIN_OUTSIDE_NORM,
};
pub use distinguished::{
    complete_with, distinguished_form, information_defect, nonsymmetric_form, DistinguishedForm,
    NonsymmetricForm,
};
pub use twin::{
    completion_agreement, projection_lemma_check, reflect_twin, ProjectionVerdict, TwinCertificate,
    TwinCheck, TwinNorms, TWIN_AXIS_TOL,
};
pub use worst::{gmr_residual_from, worst_start_search, WorstStart};

pub(crate) use record::{fmt_row, parse_reals};
