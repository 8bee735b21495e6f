//! k-out-of-n gruppen multiple-secret sharing.

pub mod analysis;
pub mod cli;
pub mod codec;
pub mod field;
pub mod harness;
pub mod linalg;
pub mod poly;
pub mod recovery;
pub mod scheme;
pub mod setup;
