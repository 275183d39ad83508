//! Resonance interaction between two uniformly accelerated atoms confined
//! between two parallel reflecting plates.
//!
//! Everything here works in reduced units (ω₀ = 1). [`units`] converts
//! laboratory inputs, [`observables`] assembles shifts and rates from the
//! image sums in [`series`], and [`sweep`] drives parameter scans.

// `!(x > 0.0)` is used on purpose so NaN lands in the error branch
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod dd;
pub mod error;
pub mod expansion;
pub mod kernel;
pub mod model;
pub mod observables;
pub mod series;
pub mod sum;
pub mod sweep;
pub mod units;

pub use error::{Error, GeometryError, GeometryField, Result};
pub use kernel::{envelope, kernel, phase, KernelKind};
pub use model::{validate, AtomState, Boundary, GeometryConfig, Orientation, ValidatedConfig};
pub use observables::{
    evaluate, free_space, low_acceleration_shift, normalized_value, physical_value, single_mirror,
    two_mirror, BoundaryModel, Observable, ObservableValue, PrefactorUnit, Quantity,
};
pub use series::{
    bilateral_sum, bilateral_sum_with, image_pair, partial_sum, segment_sum, tail_bound, ImagePair,
    SeriesOptions, SumResult,
};
pub use units::{laboratory_estimate, to_reduced, EstimateReport, PhysicalScenario};
