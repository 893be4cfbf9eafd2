//! Call admission control for cellular networks with guard channels.
//!
//! The crate compares four channel allocation schemes (fixed allocation,
//! static guard channels, dynamic guard channels, and dynamic guard channels
//! with borrowing) with a discrete-event simulator, and checks the simulator
//! against exact birth-death chain solutions.
//!
//! * [`model`]: scenario schema and validation
//! * [`policy`]: admission rules and the guard-count controller
//! * [`engine`]: the event-driven simulator
//! * [`oracle`]: Erlang-B and cutoff-priority steady states
//! * [`stats`]: replication aggregation and confidence intervals
//! * [`cli`]: experiment commands behind the `gcsim` binary

pub mod cli;
pub mod engine;
pub mod error;
pub mod model;
pub mod oracle;
pub mod policy;
pub mod stats;

pub use error::{Error, Result, ValidationError};
pub use model::{validate_scenario, Scenario, SchemeKind, ValidatedScenario};
