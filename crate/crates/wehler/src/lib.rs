//! Surface files, reports, experiment runs and fixture checks on top of
//! `wehler-core`.

pub mod experiment;
pub mod fixtures;
pub mod oracle;
pub mod report;
pub mod surface_file;
