//! Discrete-event simulation of the cellular network.

mod queue;
mod rng;
mod sim;

use rayon::prelude::*;

pub use queue::{Event, EventKind, EventQueue};
pub use rng::{draw_exponential, RngStream};
pub use sim::{
    plan_call_lifecycle, route_handoff, run_replication, run_replication_traced, CallRecord,
    CellCounts, ControllerTick, Lifecycle, ReplicationResult, TraceRecord, TraceSink,
};

use crate::error::{Error, Result};
use crate::model::ValidatedScenario;

/// Run every replication of `s`, at most `threads` at a time (0 = one per
/// core). Results come back ordered by replication index whatever the
/// thread count.
pub fn run_replications(s: &ValidatedScenario, threads: usize) -> Result<Vec<ReplicationResult>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    pool.install(|| {
        (0..s.replications)
            .into_par_iter()
            .map(|rep| run_replication(s, rep))
            .collect()
    })
}
