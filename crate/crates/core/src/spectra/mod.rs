//! Exact eigenpair certificates, numerical spectra, and spectral scans.

pub mod dense;
pub mod lanczos;
pub mod scans;
pub mod theorem;

use serde::{Deserialize, Serialize};

pub use dense::{dense_spectrum, Cluster, Spectrum};
pub use lanczos::{lanczos_extremal, LanczosOptions, LanczosReport, SymmetricOperator};
pub use scans::{
    burnt_dense_spectrum, integer_membership_scan, plain_quotient_crosscheck, spectral_gap,
    GapReport, IntegerScan,
};
pub use theorem::{
    lift_and_verify, printed_form_audit, theorem_eigenpairs, verify_eigenpair_exact,
    verify_theorem, EigenPairCertificate, Scope, TheoremReport,
};

/// How a numeric claim was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Dense,
    Lanczos,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Exact => "exact",
            Method::Dense => "dense",
            Method::Lanczos => "lanczos",
        })
    }
}
