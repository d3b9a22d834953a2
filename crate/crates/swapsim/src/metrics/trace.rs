//! Timestamped trace of simulation facts.
//!
//! Every run records request, batch, transfer, and residency facts into a
//! [`Trace`]. Records are appended as the simulation discovers them; a
//! transfer-start fact can be discovered before its start time when the
//! stream is still busy with an earlier transfer, so [`Trace::finalize`]
//! stably sorts by time (same-time records keep append order, which preserves
//! causal ordering at an instant).
//!
//! Traces serialize to newline-delimited JSON, one record per line, with a
//! leading `meta` record carrying the deployment geometry needed by the
//! validator.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::cluster::ModelId;
use crate::engine::RequestId;
use crate::error::Error;
use crate::sim::SimTime;
use crate::worker::{Direction, EntryId, WorkerId};

/// Residency states a model moves through.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Residency {
    Evicted,
    Loading,
    Resident,
    Offloading,
}

/// One timestamped fact. `t` is seconds of virtual time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TraceRecord {
    /// Run header: deployment geometry and model names.
    Meta {
        t: SimTime,
        version: String,
        tp: u32,
        pp: u32,
        capacity_slots: u32,
        models: Vec<String>,
    },
    RequestArrival {
        t: SimTime,
        request: RequestId,
        model: ModelId,
        token_len: u32,
        warmup: bool,
    },
    RequestCompletion {
        t: SimTime,
        request: RequestId,
    },
    BatchSubmit {
        t: SimTime,
        entry: EntryId,
        model: ModelId,
        requests: Vec<RequestId>,
    },
    ComputeStart {
        t: SimTime,
        entry: EntryId,
        model: ModelId,
        stage: u32,
    },
    ComputeEnd {
        t: SimTime,
        entry: EntryId,
        model: ModelId,
        stage: u32,
    },
    LoadSubmit {
        t: SimTime,
        entry: EntryId,
        model: ModelId,
        direction: Direction,
    },
    TransferStart {
        t: SimTime,
        entry: EntryId,
        model: ModelId,
        direction: Direction,
        worker: WorkerId,
    },
    TransferEnd {
        t: SimTime,
        entry: EntryId,
        model: ModelId,
        direction: Direction,
        worker: WorkerId,
    },
    Ack {
        t: SimTime,
        entry: EntryId,
        worker: WorkerId,
    },
    ResidencyChange {
        t: SimTime,
        model: ModelId,
        from: Residency,
        to: Residency,
    },
}

impl TraceRecord {
    pub fn time(&self) -> SimTime {
        match self {
            TraceRecord::Meta { t, .. }
            | TraceRecord::RequestArrival { t, .. }
            | TraceRecord::RequestCompletion { t, .. }
            | TraceRecord::BatchSubmit { t, .. }
            | TraceRecord::ComputeStart { t, .. }
            | TraceRecord::ComputeEnd { t, .. }
            | TraceRecord::LoadSubmit { t, .. }
            | TraceRecord::TransferStart { t, .. }
            | TraceRecord::TransferEnd { t, .. }
            | TraceRecord::Ack { t, .. }
            | TraceRecord::ResidencyChange { t, .. } => *t,
        }
    }
}

/// Append-only record store for one run.
#[derive(Debug, Clone, Default)]
pub struct Trace {
    records: Vec<TraceRecord>,
    finalized: bool,
}

impl Trace {
    pub fn new() -> Self {
        Trace::default()
    }

    pub fn push(&mut self, record: TraceRecord) {
        debug_assert!(!self.finalized, "trace already finalized");
        self.records.push(record);
    }

    /// Sorts records by time, keeping append order within an instant. Safe to
    /// call more than once.
    pub fn finalize(&mut self) {
        self.records.sort_by(|a, b| a.time().cmp(&b.time()));
        self.finalized = true;
    }

    pub fn records(&self) -> &[TraceRecord] {
        &self.records
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Deployment geometry from the meta record, if present:
    /// `(tp, pp, capacity_slots, model names)`.
    pub fn meta(&self) -> Option<(u32, u32, u32, &[String])> {
        self.records.iter().find_map(|r| match r {
            TraceRecord::Meta {
                tp,
                pp,
                capacity_slots,
                models,
                ..
            } => Some((*tp, *pp, *capacity_slots, models.as_slice())),
            _ => None,
        })
    }

    /// Writes newline-delimited JSON, one record per line.
    pub fn write_ndjson<W: Write>(&self, mut out: W) -> Result<(), Error> {
        for record in &self.records {
            let line = serde_json::to_string(record)
                .map_err(|e| Error::TraceParse(e.to_string()))?;
            out.write_all(line.as_bytes())?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    /// Reads newline-delimited JSON produced by [`Trace::write_ndjson`].
    pub fn read_ndjson<R: BufRead>(input: R) -> Result<Self, Error> {
        let mut records = Vec::new();
        for (i, line) in input.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let record: TraceRecord = serde_json::from_str(&line)
                .map_err(|e| Error::TraceParse(format!("line {}: {e}", i + 1)))?;
            records.push(record);
        }
        Ok(Trace {
            records,
            finalized: true,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finalize_orders_by_time_stably() {
        let mut trace = Trace::new();
        trace.push(TraceRecord::RequestCompletion {
            t: SimTime::new(2.0),
            request: RequestId(1),
        });
        trace.push(TraceRecord::RequestArrival {
            t: SimTime::new(1.0),
            request: RequestId(0),
            model: ModelId(0),
            token_len: 2,
            warmup: false,
        });
        trace.push(TraceRecord::RequestCompletion {
            t: SimTime::new(1.0),
            request: RequestId(0),
        });
        trace.finalize();
        let times: Vec<f64> = trace.records().iter().map(|r| r.time().seconds()).collect();
        assert_eq!(times, vec![1.0, 1.0, 2.0]);
        // Same-time records keep append order.
        assert!(matches!(trace.records()[0], TraceRecord::RequestArrival { .. }));
        assert!(matches!(trace.records()[1], TraceRecord::RequestCompletion { .. }));
    }

    #[test]
    fn ndjson_round_trip() {
        let mut trace = Trace::new();
        trace.push(TraceRecord::Meta {
            t: SimTime::ZERO,
            version: "test".into(),
            tp: 2,
            pp: 2,
            capacity_slots: 1,
            models: vec!["a".into(), "b".into()],
        });
        trace.push(TraceRecord::Ack {
            t: SimTime::new(0.5),
            entry: EntryId(3),
            worker: WorkerId { stage: 1, rank: 0 },
        });
        trace.finalize();

        let mut buf = Vec::new();
        trace.write_ndjson(&mut buf).unwrap();
        let parsed = Trace::read_ndjson(buf.as_slice()).unwrap();
        assert_eq!(parsed.records(), trace.records());
        assert_eq!(parsed.meta().unwrap().0, 2);
    }

    #[test]
    fn malformed_line_is_a_parse_error() {
        let data = b"{\"kind\":\"ack\",\"t\":0.5,\"entry\":3,\"worker\":{\"stage\":0,\"rank\":0}}\nnot json\n";
        let err = Trace::read_ndjson(&data[..]).unwrap_err();
        assert!(matches!(err, Error::TraceParse(_)));
    }
}
