//! Max-min allocation solvers for Q||C_min and CCKP.

pub mod conf_round;
pub mod config;
pub mod greedy;
pub mod restricted;
pub mod shmoys_tardos;
pub mod qptas;
