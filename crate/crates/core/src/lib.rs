//! Heterogeneous capacitated k-center: LP relaxation, threshold-graph
//! decompositions, max-min allocation solvers, supply polyhedra and the
//! end-to-end pipeline.

pub mod cckp;
pub mod decomp;
pub mod flow;
pub mod fractional;
pub mod gaps;
pub mod io;
pub mod graph;
pub mod lp;
pub mod model;
pub mod num;
pub mod matching;
pub mod maxmin;
pub mod oracle;
pub mod pipeline;
pub mod strong;
pub mod supply;
pub mod weak;
