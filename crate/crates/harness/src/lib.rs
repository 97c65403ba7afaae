//! Experiment harness: search spaces, extremal searches over registered
//! functionals, the conjecture registry, and persisted JSON reports.
//!
//! Every run is deterministic in its seed. Parallel searches split work
//! into fixed chunks and merge them in chunk order, so the worker count
//! never changes a result.

pub mod config;
pub mod error;
pub mod functional;
pub mod params;
pub mod registry;
pub mod report;
pub mod search;
pub mod space;

pub use config::Config;
pub use error::{HarnessError, Result};
pub use functional::{Bound, Functional};
pub use params::Params;
pub use registry::{entries, run, search as run_search, Entry};
pub use report::{Report, Verdict, Witness};
pub use search::{extremal_search, scan, Direction, SearchOutcome};
pub use space::{Element, ElementKind, SearchSpace};
