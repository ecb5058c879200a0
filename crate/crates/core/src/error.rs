//! Crate-wide error type.

use thiserror::Error;

use crate::charts::ChartError;
use crate::gauge::GaugeError;
use crate::higgs::HiggsError;
use crate::involution::InvolutionError;
use crate::io::IoError;
use crate::kempf_ness::SolveError;
use crate::linalg::LinalgError;
use crate::minkowski::MinkowskiError;
use crate::moment::PointError;
use crate::sample::SampleError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Point(#[from] PointError),
    #[error(transparent)]
    Gauge(#[from] GaugeError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Higgs(#[from] HiggsError),
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error(transparent)]
    Involution(#[from] InvolutionError),
    #[error(transparent)]
    Minkowski(#[from] MinkowskiError),
    #[error(transparent)]
    Sample(#[from] SampleError),
    #[error(transparent)]
    Io(#[from] IoError),
}
