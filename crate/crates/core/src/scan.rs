//! Range classification with ordered, byte-stable output.
//!
//! Workers classify fixed-size blocks of consecutive starts in parallel;
//! each block is collected in ascending order before it is written, so the
//! output does not depend on the worker count.

use std::io::{self, Write};

use num_traits::One;
use rayon::prelude::*;
use rayon::ThreadPool;
use serde::{Deserialize, Serialize};

use crate::arith::Nat;
use crate::maps::MapKind;
use crate::orbit::{run, Budget, LimitReason, OrbitOutcome};

const BLOCK: usize = 4096;

/// One classified start. Every integer that may exceed 64 bits is a decimal
/// string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub n: String,
    pub map: MapKind,
    pub outcome: String,
    /// Steps to zero, entry step of the cycle, or steps done before the
    /// budget ran out.
    pub steps: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cycle_len: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub odd_element: Option<String>,
    pub peak_bits: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<LimitReason>,
}

impl ScanRecord {
    pub fn new(n: &Nat, map: MapKind, outcome: &OrbitOutcome, peak_bits: u64) -> Self {
        let mut rec = ScanRecord {
            n: n.to_string(),
            map,
            outcome: outcome.tag().to_owned(),
            steps: 0,
            cycle_len: None,
            odd_element: None,
            peak_bits,
            reason: None,
        };
        match outcome {
            OrbitOutcome::Zero { steps } => rec.steps = *steps,
            OrbitOutcome::Cycle { length, odd_element, entry_step } => {
                rec.steps = *entry_step;
                rec.cycle_len = Some(*length);
                rec.odd_element = Some(odd_element.to_string());
            }
            OrbitOutcome::BudgetExceeded { reason, steps_done, .. } => {
                rec.steps = *steps_done;
                rec.reason = Some(*reason);
            }
        }
        rec
    }

    pub fn classify(kind: MapKind, n: &Nat, budget: Budget) -> Self {
        let (outcome, trace) = run(kind, n, budget, false);
        ScanRecord::new(n, kind, &outcome, trace.peak_bits)
    }
}

/// Flat row for CSV: absent fields become empty cells.
#[derive(Serialize)]
struct CsvRow<'a> {
    n: &'a str,
    map: &'static str,
    outcome: &'a str,
    steps: u64,
    cycle_len: Option<u64>,
    odd_element: Option<&'a str>,
    peak_bits: u64,
    reason: Option<&'static str>,
}

impl<'a> From<&'a ScanRecord> for CsvRow<'a> {
    fn from(r: &'a ScanRecord) -> Self {
        CsvRow {
            n: &r.n,
            map: r.map.tag(),
            outcome: &r.outcome,
            steps: r.steps,
            cycle_len: r.cycle_len,
            odd_element: r.odd_element.as_deref(),
            peak_bits: r.peak_bits,
            reason: r.reason.map(LimitReason::tag),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecordFormat {
    Jsonl,
    Csv,
}

/// Streams records in one of the structured formats.
pub struct RecordWriter<W: Write> {
    inner: Sink<W>,
}

enum Sink<W: Write> {
    Jsonl(W),
    Csv(csv::Writer<W>),
}

impl<W: Write> RecordWriter<W> {
    pub fn new(out: W, format: RecordFormat) -> Self {
        let inner = match format {
            RecordFormat::Jsonl => Sink::Jsonl(out),
            RecordFormat::Csv => Sink::Csv(csv::Writer::from_writer(out)),
        };
        RecordWriter { inner }
    }

    pub fn write(&mut self, rec: &ScanRecord) -> io::Result<()> {
        match &mut self.inner {
            Sink::Jsonl(w) => {
                serde_json::to_writer(&mut *w, rec)?;
                w.write_all(b"\n")
            }
            Sink::Csv(w) => w.serialize(CsvRow::from(rec)).map_err(io::Error::other),
        }
    }

    pub fn finish(self) -> io::Result<W> {
        match self.inner {
            Sink::Jsonl(mut w) => {
                w.flush()?;
                Ok(w)
            }
            Sink::Csv(w) => w.into_inner().map_err(|e| e.into_error()),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ScanSummary {
    pub total: u64,
    pub zero: u64,
    pub cycle: u64,
    pub budget: u64,
}

impl ScanSummary {
    pub fn add(&mut self, rec: &ScanRecord) {
        self.total += 1;
        match rec.outcome.as_str() {
            "zero" => self.zero += 1,
            "cycle" => self.cycle += 1,
            _ => self.budget += 1,
        }
    }
}

impl std::fmt::Display for ScanSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "total={} zero={} cycle={} budget={}",
            self.total, self.zero, self.cycle, self.budget
        )
    }
}

/// Classifies every start in `[from, to]` and hands records to `sink` in
/// ascending order. Runs on the global rayon pool.
pub fn scan_range<F>(kind: MapKind, from: &Nat, to: &Nat, budget: Budget, sink: F) -> io::Result<ScanSummary>
where
    F: FnMut(&ScanRecord) -> io::Result<()>,
{
    scan_range_in(None, kind, from, to, budget, sink)
}

/// [`scan_range`] on a specific pool.
pub fn scan_range_in<F>(
    pool: Option<&ThreadPool>,
    kind: MapKind,
    from: &Nat,
    to: &Nat,
    budget: Budget,
    mut sink: F,
) -> io::Result<ScanSummary>
where
    F: FnMut(&ScanRecord) -> io::Result<()>,
{
    let classify = |block: &[Nat]| -> Vec<ScanRecord> {
        block.par_iter().map(|n| ScanRecord::classify(kind, n, budget)).collect()
    };
    let mut summary = ScanSummary::default();
    let mut next = from.clone();
    while next <= *to {
        let mut block = Vec::with_capacity(BLOCK);
        while block.len() < BLOCK && next <= *to {
            block.push(next.clone());
            next += Nat::one();
        }
        let records = match pool {
            Some(p) => p.install(|| classify(&block)),
            None => classify(&block),
        };
        for rec in &records {
            summary.add(rec);
            sink(rec)?;
        }
    }
    Ok(summary)
}
