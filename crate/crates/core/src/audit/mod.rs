//! Numeric audit of the analytic inequalities behind the lower bound.

mod messages;
mod misc;
mod spectrum;
mod sums;

pub use messages::{
    check_pdf_closeness, check_single_message, matching_structure, pdf_deviation, preimage, random_dense_set, single_message_trial,
    PdfReport, SingleMessageReport, SingleMessageTrial, StructureCheck, MESSAGE_LIMIT,
};
pub use misc::{
    binom_entropy_check, cauchy_schwarz_check, factorial_quotient_check, kkl_audit, martingale_check, misc_inequalities, partition_check,
    qkib_inequality_audit, DriftBin, KklAudit, MartingaleReport, MiscCheck,
};
pub use spectrum::{component_spectrum, component_spectrum_brute, random_labeled_forest, SPECTRUM_LIMIT};
pub use sums::{
    bound_fn, bound_shape, default_tuples, eval_row, eval_s, eval_t, AuditParams, AuditReport, AuditRow, BoundShape, Preconditions, SumKind,
    BOUND_TABLE,
};
