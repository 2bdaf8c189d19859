//! Shape checks, ball bounds, Green's function, odometer diagnostics, regime
//! constants and parameter scans. Everything here works on finished runs.

pub mod ball;
pub mod green;
pub mod odometer;
pub mod scan;
pub mod shape;
pub mod theory;

use thiserror::Error;

use crate::lattice::Site;

pub use ball::{ball_bounds_check, unit_ball_volume, BallBounds};
pub use green::{compute_green, GreenTable};
pub use odometer::{
    box_average_check, greedy_increasing_path, greedy_paths_from_boundary, odometer_laplacian,
    odometer_laplacian_check, superharmonicity_check, BoxAverageReport, GreedyPath, OdometerReport,
    SuperharmonicReport,
};
pub use scan::{regime_scan, scan_csv, scan_point, ScanOutcome, ScanRow};
pub use shape::{diamond_l1_check, shape_check, Polygon, ShapeError, ShapeMetric, ShapeVerdict};
pub use theory::{certified_regime, theory_constants, Regime, TheoryConstants};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum AnalysisError {
    #[error("the run has not stabilized")]
    NotStabilized,
    #[error("no convergence after {iterations} sweeps (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("greedy path stuck at {at} after {step} steps")]
    PathStuck { at: Site, step: usize },
    #[error("precondition not met: {0}")]
    PreconditionUnmet(alloc::string::String),
}
