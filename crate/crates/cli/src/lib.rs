//! Command-line front end for `matro-core`: reads matroid spec files and
//! reports lattices, polytopes, nested set complexes and Bergman complexes.

pub mod error;
pub mod report;
pub mod spec;

pub use error::CliError;
pub use report::{Building, BergmanMode, Input, NestedMode, Report};
pub use spec::{MatroidSpec, Source};
