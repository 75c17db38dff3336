//! Benchmark instance generators and converters.
//!
//! * [`gen_routing_instance`] draws random requests on a grid.
//! * [`gen_chessboard`] and [`gen_fpp`] build the two structured max-coverage
//!   classes: king neighborhoods on a `3k × 3k` board and the lines of a
//!   projective plane.
//! * [`convert_facility`] turns facility-location data into max-coverage by
//!   thresholding distances.

mod coverage;
mod facility;
mod routing;

pub use coverage::{gen_chessboard, gen_fpp};
pub use facility::{convert_facility, read_points, FacilityFormat, InstanceError};
pub use routing::{gen_routing_instance, sample_demand, DemandMode};
