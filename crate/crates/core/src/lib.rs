//! Recurrence analysis of scalar time series.
//!
//! The crate covers the whole path from a dated CSV export to pictures and
//! numbers: ingestion and calendar regularization ([`series`]), summary
//! statistics and polynomial trends ([`stats`]), AR(p) fitting and
//! forecasting ([`autoreg`]), delay embedding plus distance and recurrence
//! matrices ([`recurrence`]), texture-transition detection ([`texture`]) and
//! deterministic PNG rendering ([`render`]).
//!
//! Numeric code is generic over [`Scalar`], implemented for `f32` and `f64`.
//! The aliases at the crate root pin the common `f64` instantiation.

pub mod autoreg;
pub mod error;
mod linalg;
pub mod recurrence;
pub mod render;
pub mod scalar;
pub mod series;
pub mod stats;
pub mod texture;

pub use autoreg::{ArModel, ForecastResult};
pub use error::{Error, Result};
pub use recurrence::{
    DistanceMatrix, EmbeddingConfig, OverlayCell, OverlayMatrix, RecurrenceMatrix, StateSpace,
    ThresholdKind,
};
pub use render::{Colormap, Image, RenderOptions, Rgb};
pub use scalar::Scalar;
pub use series::{GapMode, GapPolicy, TimeSeries};
pub use stats::TrendModel;
pub use texture::{TextureProfile, Transition, TransitionParams, TransitionReport};

pub type TimeSeries64 = TimeSeries<f64>;
pub type TimeSeries32 = TimeSeries<f32>;
pub type ArModel64 = ArModel<f64>;
pub type ArModel32 = ArModel<f32>;
pub type TrendModel64 = TrendModel<f64>;
pub type TrendModel32 = TrendModel<f32>;
pub type ForecastResult64 = ForecastResult<f64>;
pub type StateSpace64 = StateSpace<f64>;
pub type DistanceMatrix64 = DistanceMatrix<f64>;
pub type DistanceMatrix32 = DistanceMatrix<f32>;
pub type RecurrenceMatrix64 = RecurrenceMatrix<f64>;
pub type RecurrenceMatrix32 = RecurrenceMatrix<f32>;
