//! Command-line front end for `qdrive-core`: named scenarios, JSON system
//! files and CSV trajectories.

pub mod error;
pub mod output;
pub mod run;
pub mod scenario;
pub mod schema;

pub use error::CliError;
pub use scenario::{Overrides, ScenarioId};
