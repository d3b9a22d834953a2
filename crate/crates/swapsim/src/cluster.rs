//! Static cluster description and analytical cost models.
//!
//! Parameter transfers follow the alpha-beta communication model: a shard of
//! `m` tensors and `b` bytes moved over a link of bandwidth `B` costs
//! `m*alpha + b/B` seconds, because tensors travel as separate messages and
//! each message pays the fixed per-message latency `alpha`. Tensor parallelism
//! divides bytes but keeps the message count (each TP shard still holds every
//! tensor, just smaller), while pipeline parallelism divides both bytes and
//! tensor count across stages — which is exactly why TP scaling is sublinear
//! whenever `alpha > 0`.
//!
//! Batch compute is an affine model `(base + per_token * batch * tokens) / tp`
//! applied at every pipeline stage; the coefficients are calibration inputs,
//! not measured values.

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Index of a registered model; assignment order doubles as the deterministic
/// tie-break order in the engine.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct ModelId(pub usize);

impl std::fmt::Display for ModelId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "m{}", self.0)
    }
}

/// Tensor-parallel and pipeline-parallel degrees. One worker runs per GPU,
/// so the deployment has `tp * pp` workers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParallelConfig {
    pub tp: u32,
    pub pp: u32,
}

impl ParallelConfig {
    pub fn new(tp: u32, pp: u32) -> Result<Self, Error> {
        if tp == 0 || pp == 0 {
            return Err(Error::InvalidConfig(format!(
                "parallel degrees must be >= 1, got tp={tp} pp={pp}"
            )));
        }
        Ok(ParallelConfig { tp, pp })
    }

    pub fn workers(&self) -> u32 {
        self.tp * self.pp
    }
}

/// Cluster-wide constants: link characteristics, pipeline hop latency, and
/// residency capacity.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClusterConfig {
    pub parallel: ParallelConfig,
    /// CPU-GPU link bandwidth per direction, bytes/second (the beta term is
    /// its reciprocal).
    pub link_bandwidth: f64,
    /// Per-message latency, seconds.
    pub alpha: f64,
    /// Latency of forwarding an entry one pipeline stage, seconds.
    pub hop_latency: f64,
    /// Maximum number of models resident on the GPUs at once.
    pub capacity_slots: u32,
    /// Whether offloaded parameters stay in page-locked host memory. When
    /// false, every transfer pays an extra paged->pinned copy on the CPU side.
    pub pinned_memory: bool,
    /// Bandwidth of the extra CPU-side copy, bytes/second. Only read when
    /// `pinned_memory` is false.
    pub cpu_copy_bandwidth: f64,
}

impl ClusterConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if self.link_bandwidth <= 0.0 || !self.link_bandwidth.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "link_bandwidth must be positive, got {}",
                self.link_bandwidth
            )));
        }
        if self.alpha < 0.0 || self.hop_latency < 0.0 {
            return Err(Error::InvalidConfig(
                "alpha and hop_latency must be non-negative".into(),
            ));
        }
        if self.capacity_slots == 0 {
            return Err(Error::InvalidConfig("capacity_slots must be >= 1".into()));
        }
        if !self.pinned_memory && self.cpu_copy_bandwidth <= 0.0 {
            return Err(Error::InvalidConfig(
                "cpu_copy_bandwidth must be positive when pinned_memory is false".into(),
            ));
        }
        Ok(())
    }
}

/// One model's size and compute coefficients. All models in a deployment
/// share one [`ParallelConfig`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelSpec {
    pub name: String,
    /// Total parameter bytes (symbolically S).
    pub total_bytes: u64,
    /// Number of parameter tensors, i.e. transfer messages (symbolically T).
    pub tensor_count: u64,
    /// Fixed per-stage kernel cost, seconds.
    pub compute_base: f64,
    /// Per batch-element-token cost, seconds.
    pub compute_per_token: f64,
}

impl ModelSpec {
    pub fn validate(&self) -> Result<(), Error> {
        if self.total_bytes == 0 {
            return Err(Error::InvalidConfig(format!(
                "model {}: total_bytes must be > 0",
                self.name
            )));
        }
        if self.tensor_count == 0 {
            return Err(Error::InvalidConfig(format!(
                "model {}: tensor_count must be >= 1",
                self.name
            )));
        }
        if self.compute_base < 0.0 || self.compute_per_token < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "model {}: compute coefficients must be non-negative",
                self.name
            )));
        }
        Ok(())
    }
}

/// Per-worker shard geometry.
///
/// `per_worker_bytes` is the nominal real-valued share `S / (tp*pp)` used by
/// the timing model, identical for every worker. `per_worker_messages` is
/// `ceil(T / pp)`: pipeline stages split the tensor list while every TP rank
/// of a stage keeps the full stage tensor count. The exact integer byte split
/// (remainders to the last rank of the last stage) is available via
/// [`ShardPlan::byte_allocation`] for memory accounting; it sums to `S`
/// exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShardPlan {
    pub per_worker_bytes: f64,
    pub per_worker_messages: u64,
    total_bytes: u64,
    tp: u32,
    pp: u32,
}

impl ShardPlan {
    /// A degenerate empty shard (zero transfer cost).
    pub fn empty() -> Self {
        ShardPlan {
            per_worker_bytes: 0.0,
            per_worker_messages: 0,
            total_bytes: 0,
            tp: 1,
            pp: 1,
        }
    }

    /// Exact per-worker byte allocation, indexed `stage * tp + rank`.
    /// Stage remainders go to the last stage; within a stage, rank remainders
    /// go to the last rank. The sum over all workers equals `total_bytes`.
    pub fn byte_allocation(&self) -> Vec<u64> {
        let (tp, pp) = (self.tp as u64, self.pp as u64);
        let stage_base = self.total_bytes / pp;
        let stage_rem = self.total_bytes % pp;
        let mut out = Vec::with_capacity((tp * pp) as usize);
        for stage in 0..pp {
            let stage_bytes = stage_base + if stage == pp - 1 { stage_rem } else { 0 };
            let rank_base = stage_bytes / tp;
            let rank_rem = stage_bytes % tp;
            for rank in 0..tp {
                out.push(rank_base + if rank == tp - 1 { rank_rem } else { 0 });
            }
        }
        out
    }
}

/// Shard geometry for a model under the given parallel layout.
pub fn shard_plan(model: &ModelSpec, parallel: ParallelConfig) -> Result<ShardPlan, Error> {
    if parallel.workers() == 0 {
        return Err(Error::InvalidConfig("tp*pp must be >= 1".into()));
    }
    model.validate()?;
    let workers = parallel.workers() as f64;
    Ok(ShardPlan {
        per_worker_bytes: model.total_bytes as f64 / workers,
        per_worker_messages: model.tensor_count.div_ceil(parallel.pp as u64),
        total_bytes: model.total_bytes,
        tp: parallel.tp,
        pp: parallel.pp,
    })
}

/// Seconds for one worker to move its shard over its CPU-GPU link:
/// `messages * alpha + bytes / B`, plus `bytes / cpu_copy_bandwidth` when the
/// host buffer is not pinned. Load and offload cost the same (opposite
/// directions of a duplex link).
pub fn transfer_time(shard: &ShardPlan, cluster: &ClusterConfig) -> Result<f64, Error> {
    if cluster.link_bandwidth <= 0.0 {
        return Err(Error::InvalidConfig(format!(
            "link_bandwidth must be positive, got {}",
            cluster.link_bandwidth
        )));
    }
    let mut seconds =
        shard.per_worker_messages as f64 * cluster.alpha + shard.per_worker_bytes / cluster.link_bandwidth;
    if !cluster.pinned_memory {
        if cluster.cpu_copy_bandwidth <= 0.0 {
            return Err(Error::InvalidConfig(
                "cpu_copy_bandwidth must be positive when pinned_memory is false".into(),
            ));
        }
        seconds += shard.per_worker_bytes / cluster.cpu_copy_bandwidth;
    }
    Ok(seconds)
}

/// Per-stage compute duration for a batch: `(base + per_token*b*L) / tp`.
/// The same duration applies at every pipeline stage.
pub fn compute_time(
    model: &ModelSpec,
    batch_size: u32,
    token_len: u32,
    parallel: ParallelConfig,
) -> f64 {
    assert!(batch_size >= 1 && token_len >= 1, "batch and token length must be >= 1");
    let work = model.compute_base
        + model.compute_per_token * (batch_size as f64) * (token_len as f64);
    work / parallel.tp as f64
}
