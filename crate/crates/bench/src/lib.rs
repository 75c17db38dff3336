//! Experiment runner for the routing and max-coverage pipelines.
//!
//! [`run_routing_table`] reproduces the congestion tables over random grid
//! instances and [`run_coverage_sweep`] the max-coverage comparisons over a
//! budget or greedy-fraction grid. Both return [`ResultTable`]s whose CSV
//! headers are fixed per [`table::SCHEMA_VERSION`].

pub mod config;
pub mod coverage;
pub mod routing;
pub mod table;

pub use config::{ConfigFile, GridSize};
pub use coverage::{instance_hash, load_instance, run_coverage_sweep, write_plot_data, CoverMethod, CoverageConfig};
pub use routing::{run_routing_table, IlpMode, RoutingConfig, RoutingOutput};
pub use table::ResultTable;
