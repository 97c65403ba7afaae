//! Linear and polynomial threshold functions on `{-1,1}^n`: LP sign
//! representation, enumeration, degree and sparsity searches, and tail
//! probabilities of Rademacher sums.

pub mod approx;
pub mod gl;
pub mod lp;
pub mod ltf;
pub mod ptf;
pub mod tail;

pub use approx::{approx_majority_min_degree, ApproxMode, ApproxOutcome, ApproxWitness};
pub use gl::{gl_extremal, AlternatingThreshold};
pub use lp::{Certificate, Feasibility};
pub use ltf::{enumerate_ltfs, intersect_halfspaces, is_ltf, ltf, ltf_check, LtfSpec};
pub use ptf::{ptf_degree, ptf_sparsity, PtfDegree, PtfRep, Sparsity};
pub use tail::{threshold_tail, threshold_tail_exact};
