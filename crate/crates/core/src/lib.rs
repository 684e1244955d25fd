//! Evaluation harness for molecular generative models.

pub mod chem;
pub mod cluster;
pub mod dta;
pub mod fingerprint;
pub mod metrics;
pub mod pipeline;
pub mod report;
pub mod rng;
pub mod room;
pub mod stats;
