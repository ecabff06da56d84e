//! The Kneser bound and its certificate engine.
//!
//! [`certify`] turns an instance `(A, B)` into a [`Certificate`] that
//! replays the induction: a quotient step when `A + B` is periodic, a base
//! step for singletons, and otherwise a translation followed by a chain of
//! convergent descents ending at a convergent with trivial stabilizer.
//! [`verify`] rechecks every step with set arithmetic alone.

mod audit;
mod bound;
mod certificate;
mod descent;
mod verify;

pub use audit::{audit_contradiction, DescentDiagnostics, PartDiagnostics};
pub use bound::{kneser_bound, BoundReport};
pub use certificate::{
    certify, Certificate, CertificateDocument, MoveRecord, Step, TranslateRecord,
    CERTIFICATE_FORMAT, CERTIFICATE_VERSION,
};
pub use descent::{
    descend, initial_convergent, is_convergent, normalize_translation, ConvergentReport,
    DescentMove, TranslateWitness,
};
pub use verify::{verify, VerifyReport};
