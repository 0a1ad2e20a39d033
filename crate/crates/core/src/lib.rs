//! Multi-action process algebra with process splitting.

pub mod axioms;
pub mod error;
pub mod multiactions;
pub mod process;
pub mod random;
pub mod semantics;
pub mod equivalence;
pub mod regions;
pub mod reo;
pub mod splitting;
pub mod syntax;

pub use error::{Error, Result};
pub use multiactions::{Action, ActionSet, MultiAction};
pub use process::{CommRule, Definition, ProcName, ProcessTerm, Specification};
pub use semantics::{explore, Lts};
pub use equivalence::{bisimilar, reduce, Verdict, Witness};
pub use splitting::{split, BranchWord, SplitResult};
pub use syntax::{format, parse};
