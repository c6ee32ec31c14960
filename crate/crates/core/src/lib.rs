//! Exit laws, scale functions, hitting probabilities and exponential
//! functionals of positive self-similar Markov processes built from
//! α-stable processes, with Monte Carlo cross-checks.

pub mod error;
pub mod exit_laws;
pub mod expfun;
pub mod hitting;
pub mod montecarlo;
pub mod numerics;
pub mod scale;
pub mod stable;
pub mod verify;

pub use error::{Error, Result};
pub use exit_laws::{Direction, ExitLawQuery, ExitWindow, Window};
pub use expfun::{ExpFunctionalCase, ExpFunctionalModel, TailKind};
pub use hitting::HitQuery;
pub use numerics::{QuadResult, Quadrature, SeriesValue};
pub use scale::{ScaleCase, SpectralCase, TripleLawPoint};
pub use stable::{KilledResolvent, LampertiKind, StableParams, StableSampler};
pub use verify::{run_suite, Check, Status, Suite, SuiteReport, VerifyOptions};
