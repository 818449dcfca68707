//! Command line, ground-state cache, dense reference solvers and figure
//! data export on top of `spindiscord-core`.

pub mod cache;
pub mod cli;
pub mod figures;
pub mod oracle;
pub mod output;

pub use cache::CachedSolver;
pub use output::{Format, Table};
