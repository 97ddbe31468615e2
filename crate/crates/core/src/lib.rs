//! Exact convexity certification for small DAG ReLU networks.
//!
//! A ReLU network implements a continuous piecewise-linear function. On a
//! compact box this crate enumerates every activation region of that
//! function, extracts the facets between neighboring regions, and evaluates
//! one sign condition per (neuron, downstream activation state) observed on
//! single-switch facets. The conditions are necessary for convexity, and
//! sufficient whenever every slope change happens across a single-switch
//! facet. Two independent oracles (an exact region-pair slope test and a
//! randomized midpoint sampler) cross-validate the verdict.
//!
//! Entry points:
//! - [`network::Network`]: the DAG model, JSON persistence, samplers.
//! - [`checker::check_convexity`]: the full certification pipeline.
//! - [`oracle`]: independent convexity deciders.
//! - [`experiment`]: seeded sampling experiments (CSV output).

pub mod checker;
pub mod demo;
pub mod experiment;
pub mod geometry;
pub mod network;
pub mod oracle;
pub mod parallel;
pub mod pathlift;
pub mod regions;
pub mod rng;

use serde::Serialize;

/// Numerical tolerances shared by the whole pipeline.
///
/// Networks with weight magnitudes far outside `[1e-3, 1e3]` should be
/// rescaled before checking (forward values are invariant under
/// neuron-wise rescaling, see `network` tests).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Tolerances {
    /// |z| <= zero_tol counts as "on the hyperplane" of a neuron.
    pub zero_tol: f64,
    /// Minimum slack for a point to count as strictly interior.
    pub margin_tol: f64,
    /// Condition values >= -decision_tol are satisfied.
    pub decision_tol: f64,
    /// Slopes differing by more than slope_tol (sup norm) count as a
    /// genuine slope change across a facet.
    pub slope_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            zero_tol: 1e-9,
            margin_tol: 1e-7,
            decision_tol: 1e-9,
            slope_tol: 1e-8,
        }
    }
}

/// Errors from the analysis pipeline (regions, path products, checking).
#[derive(Debug, thiserror::Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Network(#[from] network::NetworkError),
    #[error(transparent)]
    Geometry(#[from] geometry::GeometryError),
    #[error("guard rail exceeded: {0}")]
    GuardRail(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("tolerance breakdown: {0}")]
    ToleranceBreakdown(String),
    #[error("oracle placement failed: {0}")]
    OraclePlacement(String),
}

pub use checker::{check_convexity, CheckOptions, ConvexityReport, Status};
pub use network::{Architecture, Network, NeuronId};
pub use regions::DomainBox;
