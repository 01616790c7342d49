//! Sensitivity annotations, role policies and role-specific graph views.
//!
//! Views are materialized: [`apply_policy`] builds a filtered copy of the
//! source graph and [`audit_view`] re-checks a view against the policy.

mod policy;
mod view;

pub use policy::{default_policy, load_policy, GeneralizationSpec, Policy, PolicyError, Role, SensitivityLevel, DEFAULT_POLICY};
pub use view::{
    annotate_schema, apply_policy, audit_view, band_label, band_predicate, AnnotatedSchema, AuditReport, Violation,
    ViolationKind, BAND_SEPARATOR,
};
