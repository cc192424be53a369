//! Flexibility Distance (FD) for electricity time series.
//!
//! FD prices the effort of reshaping one load profile into another: every
//! sample is paired with exactly one sample of the other series, each pairing
//! costs its amplitude difference plus its temporal displacement, and the
//! cheapest pairing is found by solving a linear sum assignment problem.
//!
//! Alongside FD the crate provides Euclidean distance and dynamic time warping
//! as baselines, plus three applications built on any of the measures:
//! ranking of rescheduling scenarios ([`schedule`]), day-level discord
//! detection ([`discord`]) and k-nearest-neighbour classification
//! ([`classify`]).
//!
//! ```
//! use flexdist::{flexibility_distance, FdWeights};
//!
//! let x = [0.0, 12.0, 0.0, 0.0];
//! let y = [0.0, 0.0, 12.0, 0.0];
//! let (fd, assignment) = flexibility_distance(&x, &y, &FdWeights::default()).unwrap();
//! assert_eq!(fd, 6.0);
//! assert_eq!(assignment.target_of(), &[0, 2, 1, 3]);
//! ```

pub mod bench;
pub mod classify;
pub mod discord;
mod error;
pub mod ingest;
pub mod lsap;
pub mod metrics;
pub mod numeric;
pub mod reshaping;
pub mod schedule;
mod types;

pub use error::{Error, Result};
pub use metrics::{distance, dtw, euclidean, fd_cost_matrix, flexibility_distance, DtwResult, Measure};
pub use types::{
    validate_pair, AmplitudeWeight, Assignment, CostMatrix, FdWeights, TemporalWeight, TimeSeries,
    DEFAULT_INTERVAL_MINUTES,
};
