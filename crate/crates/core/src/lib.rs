//! Diversity-multiplexing tradeoff analysis and outage simulation for
//! multi-antenna amplify-and-forward relay networks.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dmt;
pub mod error;
pub mod jobs;
pub mod matrix;
pub mod montecarlo;
pub mod rng;
pub mod schemes;
pub mod topology;
pub mod verify;

pub use dmt::{CurveLabel, DmtCurve};
pub use error::{DmtError, Result};
pub use jobs::{ExperimentConfig, FigureId, JobOutput};
pub use matrix::{ComplexMatrix, SvdResult};
pub use montecarlo::{OutageEstimate, SlopeFit};
pub use rng::SimRng;
pub use schemes::{AlphaPolicy, MutualInfo, RsSchedule, SchemeConfig, SchemeKind, UnitaryMode};
pub use topology::{CutSet, NetworkTopology, TopologyError};
pub use verify::{BoundCheckReport, HighSnrExponents};
