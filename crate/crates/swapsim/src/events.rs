//! Event vocabulary of the serving simulation.

use crate::engine::RequestId;
use crate::worker::{Entry, EntryId, WorkerId};

/// Payloads for every event the serving simulation schedules.
#[derive(Debug, Clone)]
pub enum EventKind {
    /// A request enters the engine.
    RequestArrival { request: RequestId },
    /// Deferred scheduler pass at the current instant.
    SchedulerWake,
    /// Re-evaluate the head entries of one pipeline stage.
    EntryDequeue { stage: u32 },
    /// A stage's TP ranks finished computing a batch entry.
    ComputeDone { stage: u32, entry: EntryId },
    /// One worker's load/offload stream finished moving a shard.
    TransferDone { worker: WorkerId, entry: EntryId },
    /// An entry arrives at the next stage's queues after the hop latency.
    HopDeliver { entry: Entry, to_stage: u32 },
    /// A worker's load/offload ack reaches the engine.
    AckReceived { worker: WorkerId, entry: EntryId },
}
