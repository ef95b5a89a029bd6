//! The distributional implicit hidden partition game.

mod experiment;
mod forest;
mod growing;
mod instance;
mod potential;
mod protocol;
mod tvd;

pub use experiment::{advantage_experiment, AdvantageReport, GameParams};
pub use forest::{forest_potential, Forest, Insert};
pub use growing::{adaptive_solver, component_growing_distinguisher, AdaptiveSolver, Distinguisher, GrowingBoard, RoundStats};
pub use instance::{bits_to_string, gen_instance, parse_bits, Case, CaseMode, DihpInstance};
pub use potential::{adaptive_growth, potential_trace, GrowthTrace, PotentialTrace, RoundPotential};
pub use protocol::{run_protocol, ForwardLabels, GuessBoard, Message, Protocol, RandomGuess, Transcript, Trivial};
pub use tvd::{exact_tvd, transcript_tvd_experiment, tvd_expectation_form, DiscreteDistribution, TvdMode, TvdReport, BOOTSTRAP_RESAMPLES, EXACT_LABEL_BITS};
