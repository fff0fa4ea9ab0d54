//! Stage decomposition of an orbit into odd low points.
//!
//! Under Q an odd value `v = 2^m·k + 1` returns, `m` steps later, to the odd
//! value `k·v`. Under S an odd value `v = 2^m·k − 1` reaches
//! `k·(2^(m−1)·k − 1)` after `m` steps. A stage with `k = 1` closes the
//! sequence: a cycle for Q, a guaranteed descent to 0 for S. While `k >= 3`
//! the low points grow.
//!
//! Under S a stage with `m = 1` lands on an even low point. The sequence
//! then halves down to the odd part before the next stage opens, and that
//! odd part can be smaller than where the stage started. Growth bounds only
//! chain across stages that open exactly where the previous one landed; see
//! [`KSequence::growth_segments`].

use num_integer::Integer;
use num_traits::{One, Zero};

use super::{Budget, LimitReason, OrbitError};
use crate::arith::{odd_decomp_minus, odd_decomp_plus, Decomposition, Nat};
use crate::maps::{apply, MapKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KStep {
    pub stage: usize,
    pub m: u64,
    pub k: Nat,
    /// Odd iterate that opens the stage.
    pub value: Nat,
    /// Iterate `m` steps after `value`, checked against direct iteration.
    pub low_point: Nat,
    /// Halvings from an even low point down to the next stage's opening
    /// value. Always 0 under Q.
    pub descent: u64,
}

impl KStep {
    pub fn steps_consumed(&self) -> u64 {
        self.m
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KEnd {
    /// Q: the last stage has `k = 1` and sits on an m-cycle.
    Cycle { length: u64 },
    /// S: the last stage has `k = 1` (or the start was 0 / 1 under Q).
    Zero,
    Budget(LimitReason),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KSequence {
    pub kind: MapKind,
    pub start: Nat,
    /// Halvings from an even start to its odd part.
    pub lead_in: u64,
    pub stages: Vec<KStep>,
    pub end: KEnd,
    /// Applications accounted for by the lead-in, the stages and descents.
    pub steps: u64,
    pub peak_bits: u64,
}

impl KSequence {
    /// Maximal runs of consecutive stages with `k >= 3` where each stage
    /// opens at the previous stage's low point.
    pub fn growth_segments(&self) -> Vec<&[KStep]> {
        let mut out = Vec::new();
        let mut begin = 0;
        for (i, st) in self.stages.iter().enumerate() {
            if st.k.is_one() {
                if begin < i {
                    out.push(&self.stages[begin..i]);
                }
                begin = i + 1;
            } else if st.descent > 0 {
                out.push(&self.stages[begin..=i]);
                begin = i + 1;
            }
        }
        if begin < self.stages.len() {
            out.push(&self.stages[begin..]);
        }
        out
    }

    /// Number of leading stages with `k > 1`.
    pub fn leading_growth_stages(&self) -> usize {
        self.stages.iter().take_while(|s| !s.k.is_one()).count()
    }
}

fn decompose(kind: MapKind, v: &Nat) -> Decomposition {
    match kind {
        MapKind::Q => odd_decomp_plus(v),
        _ => odd_decomp_minus(v),
    }
    .expect("stage opening values are odd and in range")
}

fn predicted_low_point(kind: MapKind, d: &Decomposition, v: &Nat) -> Nat {
    match kind {
        MapKind::Q => &d.k * v,
        _ => {
            let inner = (&d.k << (d.m - 1)) - 1u32;
            &d.k * inner
        }
    }
}

/// Walks the stage decomposition of `x0` under Q or S, re-deriving every
/// low point by direct iteration.
pub fn ksequence(kind: MapKind, x0: &Nat, budget: Budget) -> Result<KSequence, OrbitError> {
    if !matches!(kind, MapKind::Q | MapKind::S) {
        return Err(OrbitError::KSequenceUnsupported(kind));
    }
    let mut seq = KSequence {
        kind,
        start: x0.clone(),
        lead_in: 0,
        stages: Vec::new(),
        end: KEnd::Zero,
        steps: 0,
        peak_bits: x0.bits(),
    };
    if x0.is_zero() {
        return Ok(seq);
    }
    seq.lead_in = x0.trailing_zeros().unwrap_or(0);
    if seq.lead_in > budget.max_steps() {
        seq.end = KEnd::Budget(LimitReason::StepLimit);
        return Ok(seq);
    }
    seq.steps = seq.lead_in;
    let mut v = x0 >> seq.lead_in;
    if kind == MapKind::Q && v.is_one() {
        // 1 → 0
        seq.steps += 1;
        return Ok(seq);
    }

    loop {
        let stage = seq.stages.len();
        let d = decompose(kind, &v);
        if seq.steps + d.m > budget.max_steps() {
            seq.end = KEnd::Budget(LimitReason::StepLimit);
            return Ok(seq);
        }
        let formula = predicted_low_point(kind, &d, &v);

        let mut y = v.clone();
        for _ in 0..d.m {
            y = apply(kind, &y);
            seq.peak_bits = seq.peak_bits.max(y.bits());
            if budget.over_bits(&y) {
                seq.end = KEnd::Budget(LimitReason::BitLimit);
                return Ok(seq);
            }
        }
        if y != formula {
            return Err(OrbitError::StageMismatch {
                stage,
                direct: y,
                formula,
            });
        }
        seq.steps += d.m;

        let terminal = d.k.is_one();
        let descent = if terminal || y.is_odd() {
            0
        } else {
            y.trailing_zeros().unwrap_or(0)
        };
        if seq.steps + descent > budget.max_steps() {
            seq.end = KEnd::Budget(LimitReason::StepLimit);
            return Ok(seq);
        }
        seq.steps += descent;
        let next = &y >> descent;
        seq.stages.push(KStep {
            stage,
            m: d.m,
            k: d.k,
            value: v,
            low_point: y,
            descent,
        });
        if terminal {
            seq.end = match kind {
                MapKind::Q => KEnd::Cycle { length: d.m },
                _ => KEnd::Zero,
            };
            return Ok(seq);
        }
        v = next;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthCertificate {
    /// `3^(p+1)·x0` for Q, `x0 + p + 1` for S.
    pub bound: Nat,
    pub low_point: Nat,
}

/// Lower bound on the last low point of a chain of `k >= 3` stages opening
/// at `x0`, checked against the actual low point.
pub fn growth_certificate(
    kind: MapKind,
    stages: &[KStep],
    x0: &Nat,
) -> Result<GrowthCertificate, OrbitError> {
    if !matches!(kind, MapKind::Q | MapKind::S) {
        return Err(OrbitError::KSequenceUnsupported(kind));
    }
    let (first, last) = match (stages.first(), stages.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return Err(OrbitError::NoStages),
    };
    if let Some(bad) = stages.iter().position(|s| s.k.is_one()) {
        return Err(OrbitError::TerminalStage(bad));
    }
    if first.value != *x0 {
        return Err(OrbitError::StartMismatch {
            start: x0.clone(),
            opening: first.value.clone(),
        });
    }
    if let Some(i) = stages.windows(2).position(|w| w[1].value != w[0].low_point) {
        return Err(OrbitError::NotContiguous(i + 1));
    }

    let p = (stages.len() - 1) as u32;
    let bound = match kind {
        MapKind::Q => num_traits::pow(Nat::from(3u32), p as usize + 1) * x0,
        _ => x0 + (p + 1),
    };
    let low_point = last.low_point.clone();
    if low_point < bound {
        return Err(OrbitError::BoundViolated { bound, low_point });
    }
    Ok(GrowthCertificate { bound, low_point })
}
