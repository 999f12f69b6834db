//! JSON formats and command implementations behind the `pwl-lattice` binary.

pub mod app;
pub mod schema;

pub use app::{run, Cli, Command, Failure};
pub use schema::{Manifest, Payload, FORMAT_VERSION};
