//! Solvers for parity and generalized parity games.

pub mod arena;
pub mod attractor;
pub mod omega;
pub mod antichain;
pub mod psolve;
pub mod report;
pub mod recursive;
pub mod oracle;
