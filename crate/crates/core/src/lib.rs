//! Desk-scale toolkit for programmable Gaussian boson sampling applied to
//! graph problems.
//!
//! The pipeline is: a [`graph::WeightedGraph`] is encoded into a
//! [`encoding::GbsProgram`] (squeezing + interferometer), the interferometer
//! is compiled onto a rectangular MZI [`mesh`], the lossy Gaussian state is
//! simulated exactly and sampled by the [`simulator`], and samples are
//! post-processed into cliques by [`cliques`]. [`docking`] and [`rna`] build
//! the application graphs.

pub mod cliques;
pub mod docking;
pub mod encoding;
pub mod error;
pub mod graph;
pub mod mesh;
pub mod numerics;
pub mod rna;
pub mod seeding;
pub mod simulator;

pub use error::{Error, Result};
