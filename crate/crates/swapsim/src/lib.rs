//! Deterministic discrete-event simulator for serving multiple model-parallel
//! deep learning models on a shared GPU cluster with CPU-GPU parameter swapping.
//!
//! A centralized engine queues requests per model, batches them oldest-first,
//! and swaps model parameter shards between CPU and GPU memory on demand with
//! LRU replacement. Workers (one per simulated GPU) process batch entries
//! synchronously in pipeline order and run load/offload transfers
//! asynchronously on separate per-worker streams, so a swap for one model does
//! not block compute for another.
//!
//! The crate is organized around the simulation layers:
//!
//! - [`sim`] — event kernel: virtual clock, priority queue, deterministic
//!   (time, seq) ordering.
//! - [`cluster`] — static cluster/model description and the analytical cost
//!   models for transfers (alpha-beta) and batch compute.
//! - [`worker`] — per-GPU worker state machines: FIFO entry pipes, compute
//!   stream, load/offload streams.
//! - [`engine`] — request queues, oldest-timestamp batching, residency table
//!   with LRU eviction, load-entry issuance, ack accounting.
//! - [`workload`] — Gamma arrival processes with per-model rates and shared
//!   CV, plus the alternating blocking benchmark sequence.
//! - [`driver`] — glues kernel, engine and workers into a runnable simulation.
//! - [`metrics`] — trace records, latency summaries/CDFs, swap-latency
//!   measurement, and post-hoc trace validation.
//! - [`config`] / [`harness`] — experiment configs, presets, and the runners
//!   behind the `swapsim` CLI (`swap-bench`, `simulate`, `validate`).
//!
//! See the crate examples for runnable entry points into each capability:
//!
//! ```bash
//! cargo run --release -p swapsim --example swap_bench
//! cargo run --release -p swapsim --example serve_simulation
//! ```

pub mod cluster;
pub mod config;
pub mod driver;
pub mod engine;
mod error;
pub mod events;
pub mod harness;
pub mod metrics;
pub mod rng;
pub mod sim;
pub mod worker;
pub mod workload;

pub use cluster::{ClusterConfig, ModelId, ModelSpec, ParallelConfig, ShardPlan};
pub use driver::{RunOutput, ServingSim};
pub use engine::{Engine, EngineConfig, RequestId, RequestRecord};
pub use error::Error;
pub use metrics::{LatencySummary, Trace, TraceRecord, Violation};
pub use sim::{Event, Kernel, SimTime};
pub use worker::{BatchEntry, Direction, EntryId, LoadEntry, WorkerId};
pub use workload::{ArrivalTrace, WorkloadSpec};
