//! Lyapunov eigenvalue, Lyapunov weights and adjoint eigenvector of reaction-network
//! generators, estimated by multi-scale renormalization and checked against a dense oracle.

pub mod error;
pub mod exec;
pub mod fixtures;
pub mod graph;
pub mod hierarchy;
pub mod mag;
pub mod network;
pub mod oracle;
pub mod renorm;
pub mod sweep;

pub use error::{Error, Result};
