//! Point sets, unit-distance graphs and distance spectra.

mod pointset;
mod spectrum;
mod svg;
mod udg;

pub use pointset::{Mode, PointSet, TAU};
pub(crate) use pointset::find_close_pair;
pub use spectrum::{
    check_ceilings, distance_spectrum, unit_distance_ceiling, CeilingReport, DistanceSpectrum, DistanceValue,
    SpectrumEntry,
};
pub use svg::render_svg;
pub use udg::{build_udg, Direction, DirectionClass, UnitDistanceGraph};

use thiserror::Error;

use crate::norms::NormError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("exact point sets need a polytope norm")]
    ModeMismatch,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("points {0} and {1} coincide")]
    DuplicatePoint(usize, usize),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Norm(#[from] NormError),
}
