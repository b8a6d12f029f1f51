//! Problem instantiations: each builds one or more proof-polynomial tasks.

pub mod graph;
pub mod partition;
pub mod appendix;
