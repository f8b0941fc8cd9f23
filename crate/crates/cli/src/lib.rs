//! Command-line front end: job descriptions, a result cache and JSON envelopes.

pub mod cache;
pub mod error;
pub mod job;
pub mod payload;
pub mod run;

pub use cache::{cache_key, Cache};
pub use error::CliError;
pub use job::{parse_character, parse_ops, Command, JobSpec, Suite};
pub use payload::{Payload, ResultEnvelope};
pub use run::{run, to_json};
