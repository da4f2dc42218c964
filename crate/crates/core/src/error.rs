use thiserror::Error;

use crate::experiment::ExperimentError;
use crate::metrics::MetricsError;
use crate::mwis::MwisError;
use crate::refine::RefineError;
use crate::routing::RoutingError;
use crate::scheduler::SimError;
use crate::topology::TopologyError;

/// Umbrella error for callers that drive the whole pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Routing(#[from] RoutingError),
    #[error(transparent)]
    Refine(#[from] RefineError),
    #[error(transparent)]
    Mwis(#[from] MwisError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Experiment(#[from] ExperimentError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
