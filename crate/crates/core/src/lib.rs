//! Union-closed set families over small ground sets: representation,
//! conjecture checkers, exhaustive enumeration and counterexample search.

pub mod checkers;
pub mod enumeration;
pub mod error;
pub mod family;
pub mod format;
pub mod mask;
pub mod search;

pub use checkers::{Conjecture, QuestionReport, Status, Verdict};
pub use enumeration::{EnumCheckpoint, EnumFilter};
pub use error::{Error, Result};
pub use family::{AbundanceRule, FrequencyProfile, Permutation, SetFamily, SizeProfile};
pub use format::parse_family;
pub use mask::{ElementId, SetMask};
pub use search::{Finding, Provenance, SearchTarget};
