use crate::sim::SimTime;
use crate::worker::WorkerId;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("event scheduled in the past: t={event:?} < clock {clock:?}")]
    EventInPast { event: SimTime, clock: SimTime },

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("unknown model id {0}")]
    UnknownModel(usize),

    #[error("unknown entry id {0}")]
    UnknownEntry(u64),

    /// The engine's load-dependency contract was broken: a batch entry was
    /// dequeued on a worker whose shard for the model is not resident.
    #[error("batch entry {entry} for model {model} dequeued at worker {worker} before its shard was loaded")]
    ShardNotResident {
        entry: u64,
        model: usize,
        worker: WorkerId,
    },

    #[error("duplicate ack from worker {worker} for entry {entry}")]
    DuplicateAck { entry: u64, worker: WorkerId },

    #[error("entry {entry} is missing acks from workers: {missing:?}")]
    MissingAcks { entry: u64, missing: Vec<WorkerId> },

    #[error("no completed, non-warm-up requests to summarize")]
    EmptyLatencySet,

    #[error("malformed trace: {0}")]
    TraceParse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
