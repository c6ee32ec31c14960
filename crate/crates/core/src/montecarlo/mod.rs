//! Path simulation of the stable process started at 1, with Doob h-weights
//! that turn unconditioned paths into samples of the conditioned processes.
//!
//! Exit events of ξ and of X = exp(ξ) ∘ (time change) coincide, so only X
//! is simulated and the Lamperti clock never appears.

mod refine;
mod sim;
mod stats;

pub use refine::{step_refinement_report, RefinementReport, RefinementRow};
pub use sim::{simulate_exit, ExitSampleSet, ExitSide, PathRecord, SimConfig};
pub use stats::{effective_size, ks_distance, ks_threshold, moment_check, Estimate, MomentCheck, WeightedSample};
