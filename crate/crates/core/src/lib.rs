//! Simulation and calibration toolkit for conference peer-review scores.
//!
//! The crate models how reviewers produce scores (biased Gaussian raw scores,
//! a Plackett-Luce ranking of their batch, then an isotonic projection of the
//! raw scores onto that ranking) and compares four ways of recovering the
//! latent paper quality from the resulting scores:
//!
//! 1. plain averaging,
//! 2. calibration against a global ranking assembled from reviewers' orders,
//! 3. calibration against author-provided rankings of their own submissions,
//! 4. both calibrations composed.
//!
//! The [`experiment`] module runs the full Monte-Carlo comparison.

pub mod conference;
pub mod error;
pub mod estimators;
pub mod experiment;
pub mod isotonic;
pub mod rank;
pub mod seeds;
pub mod sgp;

pub use conference::{gen_conference, Conference, DiscreteDist, GenConfig, TailTarget};
pub use error::{Error, ErrorKind, Result};
pub use estimators::{BlendWeights, ComparisonSource, Method, OwnerPartition};
pub use experiment::{ExperimentConfig, OutputFormat, ResultsTable};
pub use isotonic::{isotonic_fit, isotonic_project_indexed, Direction, IsotonicProblem};
pub use rank::{ComparisonGraph, TiedRanking, TierDecomposition, TransitionMatrix};
pub use seeds::{Purpose, SeedStream};
pub use sgp::{NoiseCase, ReviewerParams, ReviewerRanking, ScoreTable, SimulatedReviews};

/// Index of a paper within a [`Conference`].
pub type PaperId = usize;
/// Index of a reviewer within a [`Conference`].
pub type ReviewerId = usize;
/// Index of an author within a [`Conference`].
pub type AuthorId = usize;
