//! Library behind the `kronecker` binary: instance and certificate files,
//! preset generators and one pipeline per subcommand.

pub mod certificate;
pub mod cli;
pub mod commands;
pub mod error;
pub mod instance;
pub mod presets;

pub use certificate::Certificate;
pub use error::{CliError, CliResult};
pub use instance::InstanceFile;
