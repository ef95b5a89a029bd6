//! Laboratory for the implicit hidden partition game and its MAX-CUT
//! reduction.
//!
//! * [`bitcube`] dense Fourier analysis on {0,1}^n
//! * [`matchings`] random matchings and their closed-form statistics
//! * [`dihp`] the multi-player game, protocols, forests and TVD tools
//! * [`maxcut`] the graph reduction, cut solvers and the gap experiment
//! * [`audit`] numeric checks of the analytic inequalities

pub mod audit;
pub mod bitcube;
pub mod dihp;
pub mod error;
pub mod logmath;
pub mod maxcut;
pub mod matchings;
pub mod rng;
pub mod stats;

pub use bitcube::{BitVector, BoundednessReport, CubeFunction, Normalization, Spectrum};
pub use error::{Error, Result};
pub use matchings::{EdgeClassification, LogProb, Matching};
