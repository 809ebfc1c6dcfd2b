//! States, measurements, purifications, dilations and sampling.

mod density;
mod dilation;
pub mod json;
mod measurement;
mod sampling;
mod state;

pub use density::{matrix_power, validate_density, DensityMatrix, CLIP_TOL};
pub use dilation::{naimark_dilation, trivial_povm, trivial_povm_dilation, DilationSpec};
pub use measurement::{Measurement, MeasurementKind};
pub use sampling::{read_outcomes, sample_outcomes, trace_distance, write_outcomes};
pub use state::{
    canonical_purification, dilated_post_measurement, post_measurement_cq, CqState,
    PureBipartiteState, TripartiteState,
};
