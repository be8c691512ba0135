//! Command-line tools, the verification ledger and file formats on top of
//! `partstat-core`.

pub mod cli;
pub mod ledger;
pub mod render;
