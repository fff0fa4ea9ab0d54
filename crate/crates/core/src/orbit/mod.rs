//! Budgeted orbit execution and outcome classification.
//!
//! A run iterates one map from a start value until the orbit reaches 0,
//! is certified to sit on a cycle, or exhausts its [`Budget`]. Running out
//! of budget is an outcome, not an error, and says nothing about whether
//! the orbit is bounded.
//!
//! Cycles under Q are recognised structurally: an odd iterate of the form
//! `2^m + 1` lies on an m-cycle, and every bounded Q orbit passes through
//! one. The other maps use Brent's cycle finder in the loop. An independent
//! Floyd finder lives in [`cycle`] for cross-checking.

mod cycle;
mod kseq;

pub use cycle::{detect_cycle_generic, detect_cycle_structural, GenericCycle};
pub use kseq::{growth_certificate, ksequence, GrowthCertificate, KEnd, KSequence, KStep};

use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{is_pow2_plus1, Nat};
use crate::maps::{apply, MapKind};

pub const DEFAULT_MAX_STEPS: u64 = 100_000;
pub const DEFAULT_MAX_BITS: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrbitError {
    #[error("budget limits must be positive (max_steps={max_steps}, max_bits={max_bits})")]
    InvalidBudget { max_steps: u64, max_bits: u64 },
    #[error("structural cycle detection is only proven for q, not {0}")]
    StructuralUnsupported(MapKind),
    #[error("k-sequences are only defined for q and s, not {0}")]
    KSequenceUnsupported(MapKind),
    #[error("stage {stage}: direct iteration gave {direct}, the product formula gave {formula}")]
    StageMismatch {
        stage: usize,
        direct: Nat,
        formula: Nat,
    },
    #[error("growth certificate needs at least one stage")]
    NoStages,
    #[error("stage {0} has k = 1; growth certificates need k >= 3 throughout")]
    TerminalStage(usize),
    #[error("first stage opens at {opening}, not at the claimed start {start}")]
    StartMismatch { start: Nat, opening: Nat },
    #[error("stage {0} does not open at the previous low point")]
    NotContiguous(usize),
    #[error("low point {low_point} is below the certified bound {bound}")]
    BoundViolated { bound: Nat, low_point: Nat },
}

/// Step and bit-length ceilings for a single run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Budget {
    max_steps: u64,
    max_bits: u64,
}

impl Budget {
    pub fn new(max_steps: u64, max_bits: u64) -> Result<Self, OrbitError> {
        if max_steps == 0 || max_bits == 0 {
            return Err(OrbitError::InvalidBudget { max_steps, max_bits });
        }
        Ok(Budget { max_steps, max_bits })
    }

    pub fn max_steps(&self) -> u64 {
        self.max_steps
    }

    pub fn max_bits(&self) -> u64 {
        self.max_bits
    }

    pub(crate) fn over_bits(&self, x: &Nat) -> bool {
        x.bits() > self.max_bits
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_steps: DEFAULT_MAX_STEPS,
            max_bits: DEFAULT_MAX_BITS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitReason {
    StepLimit,
    BitLimit,
}

impl LimitReason {
    pub fn tag(self) -> &'static str {
        match self {
            LimitReason::StepLimit => "step_limit",
            LimitReason::BitLimit => "bit_limit",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrbitOutcome {
    /// First hit of 0 after `steps` applications.
    Zero { steps: u64 },
    /// The orbit sits on a cycle of `length`. `odd_element` is the smallest
    /// odd member (for Q the unique one, `2^length + 1`); `entry_step` is
    /// the first step at which the orbit hits it.
    Cycle {
        length: u64,
        odd_element: Nat,
        entry_step: u64,
    },
    BudgetExceeded {
        reason: LimitReason,
        steps_done: u64,
        peak_bits: u64,
    },
}

impl OrbitOutcome {
    pub fn tag(&self) -> &'static str {
        match self {
            OrbitOutcome::Zero { .. } => "zero",
            OrbitOutcome::Cycle { .. } => "cycle",
            OrbitOutcome::BudgetExceeded { .. } => "budget",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OrbitTrace {
    /// Every iterate from `x0` on, when requested.
    pub iterates: Option<Vec<Nat>>,
    /// Applications performed by the run.
    pub steps: u64,
    pub peak_bits: u64,
    /// Index of the first odd iterate, if any was seen.
    pub first_odd_hit: Option<u64>,
}

/// Brent's power-of-two tortoise, fed one iterate at a time.
struct Brent {
    tortoise: Nat,
    power: u64,
    lam: u64,
}

impl Brent {
    fn new(x0: &Nat) -> Self {
        Brent {
            tortoise: x0.clone(),
            power: 1,
            lam: 0,
        }
    }

    /// Returns the cycle length once `x` repeats the saved tortoise.
    fn observe(&mut self, x: &Nat) -> Option<u64> {
        self.lam += 1;
        if *x == self.tortoise {
            return Some(self.lam);
        }
        if self.lam == self.power {
            self.tortoise.clone_from(x);
            self.power *= 2;
            self.lam = 0;
        }
        None
    }
}

/// Iterates `kind` from `x0` until zero, a certified cycle, or the budget
/// runs out. Deterministic.
pub fn run(kind: MapKind, x0: &Nat, budget: Budget, keep_trace: bool) -> (OrbitOutcome, OrbitTrace) {
    let mut trace = OrbitTrace {
        iterates: keep_trace.then(|| vec![x0.clone()]),
        steps: 0,
        peak_bits: x0.bits(),
        first_odd_hit: None,
    };
    let mut brent = (kind != MapKind::Q).then(|| Brent::new(x0));
    let mut x = x0.clone();
    loop {
        let steps = trace.steps;
        if x.is_zero() {
            return (OrbitOutcome::Zero { steps }, trace);
        }
        if x.is_odd() && trace.first_odd_hit.is_none() {
            trace.first_odd_hit = Some(steps);
        }
        if kind == MapKind::Q {
            if let Some(m) = is_pow2_plus1(&x) {
                let outcome = OrbitOutcome::Cycle {
                    length: m,
                    odd_element: x,
                    entry_step: steps,
                };
                return (outcome, trace);
            }
        } else if steps > 0 {
            if let Some(length) = brent.as_mut().and_then(|b| b.observe(&x)) {
                let outcome = classify_generic_cycle(kind, x0, &x, length, &trace);
                return (outcome, trace);
            }
        }
        if steps >= budget.max_steps {
            return (exceeded(LimitReason::StepLimit, &trace), trace);
        }

        x = apply(kind, &x);
        trace.steps += 1;
        trace.peak_bits = trace.peak_bits.max(x.bits());
        if let Some(it) = trace.iterates.as_mut() {
            it.push(x.clone());
        }
        if budget.over_bits(&x) {
            return (exceeded(LimitReason::BitLimit, &trace), trace);
        }
    }
}

fn exceeded(reason: LimitReason, trace: &OrbitTrace) -> OrbitOutcome {
    OrbitOutcome::BudgetExceeded {
        reason,
        steps_done: trace.steps,
        peak_bits: trace.peak_bits,
    }
}

/// `on_cycle` is known to lie on a cycle of `length`; find its smallest odd
/// member and the first step the orbit reached it.
fn classify_generic_cycle(
    kind: MapKind,
    x0: &Nat,
    on_cycle: &Nat,
    length: u64,
    trace: &OrbitTrace,
) -> OrbitOutcome {
    let mut anchor: Option<Nat> = None;
    let mut y = on_cycle.clone();
    for _ in 0..length {
        if y.is_odd() && anchor.as_ref().map_or(true, |a| y < *a) {
            anchor = Some(y.clone());
        }
        y = apply(kind, &y);
    }
    // A cycle of positive values cannot halve forever, so it has an odd member.
    let anchor = anchor.expect("nonzero cycle contains an odd value");

    let entry_step = match &trace.iterates {
        Some(it) => it.iter().position(|v| *v == anchor).unwrap() as u64,
        None => {
            let mut y = x0.clone();
            let mut i = 0;
            while y != anchor {
                y = apply(kind, &y);
                i += 1;
            }
            i
        }
    };
    OrbitOutcome::Cycle {
        length,
        odd_element: anchor,
        entry_step,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{is_pow2_minus1, pow2_exponent};

    fn n(v: u64) -> Nat {
        Nat::from(v)
    }

    fn outcome(kind: MapKind, v: u64) -> OrbitOutcome {
        run(kind, &n(v), Budget::default(), false).0
    }

    fn cycle(length: u64, odd: u64, entry: u64) -> OrbitOutcome {
        OrbitOutcome::Cycle {
            length,
            odd_element: n(odd),
            entry_step: entry,
        }
    }

    // Oracle: plain u128 iteration with a visited list.
    fn s_hit_time(mut x: u128) -> u64 {
        let mut i = 0;
        while x != 0 {
            x = if x % 2 == 0 { x / 2 } else { (x * x - 1) / 4 };
            i += 1;
        }
        i
    }

    #[test]
    fn run_examples() {
        assert_eq!(outcome(MapKind::Q, 16), OrbitOutcome::Zero { steps: 5 });
        assert_eq!(outcome(MapKind::Q, 20), cycle(2, 5, 2));
        assert_eq!(outcome(MapKind::Q, 0), OrbitOutcome::Zero { steps: 0 });
        assert_eq!(s_hit_time(11), 12);
        assert_eq!(outcome(MapKind::S, 11), OrbitOutcome::Zero { steps: 12 });
    }

    #[test]
    fn q_seven_hits_bit_limit() {
        let budget = Budget::new(10_000, 4096).unwrap();
        let (out, trace) = run(MapKind::Q, &n(7), budget, true);
        // frozen from an independent Python big-int iteration
        assert_eq!(
            out,
            OrbitOutcome::BudgetExceeded {
                reason: LimitReason::BitLimit,
                steps_done: 28,
                peak_bits: 4184,
            }
        );
        let it = trace.iterates.unwrap();
        assert_eq!(it.len(), 29);
        for w in it.windows(2) {
            assert_eq!(apply(MapKind::Q, &w[0]), w[1]);
        }
        assert_eq!(it[8], n(465_465));
    }

    #[test]
    fn step_limit_is_reported() {
        let budget = Budget::new(3, 4096).unwrap();
        let out = run(MapKind::Q, &n(1 << 10), budget, false).0;
        assert_eq!(
            out,
            OrbitOutcome::BudgetExceeded {
                reason: LimitReason::StepLimit,
                steps_done: 3,
                peak_bits: 11,
            }
        );
    }

    #[test]
    fn budget_rejects_zero_limits() {
        assert!(Budget::new(0, 10).is_err());
        assert!(Budget::new(10, 0).is_err());
        assert!(Budget::new(1, 1).is_ok());
    }

    #[test]
    fn fixed_point_three_is_a_one_cycle() {
        assert_eq!(outcome(MapKind::Q, 3), cycle(1, 3, 0));
        assert_eq!(outcome(MapKind::Q, 6), cycle(1, 3, 1));
        assert_eq!(outcome(MapKind::Q, 1), OrbitOutcome::Zero { steps: 1 });
    }

    #[test]
    fn comparison_maps_use_generic_detection() {
        assert_eq!(outcome(MapKind::T, 1), cycle(2, 1, 0));
        assert_eq!(outcome(MapKind::T, 27), {
            let (_, tr) = run(MapKind::T, &n(27), Budget::default(), true);
            let first_one = tr.iterates.unwrap().iter().position(|v| *v == n(1)).unwrap();
            cycle(2, 1, first_one as u64)
        });
        // F: 5 → 7 → 10 → 5
        assert_eq!(outcome(MapKind::F, 5), cycle(3, 5, 0));
        assert_eq!(outcome(MapKind::F, 1), cycle(1, 1, 0));
        assert_eq!(outcome(MapKind::QPlus, 1), cycle(1, 1, 0));
        assert_eq!(outcome(MapKind::QPlus, 8), cycle(1, 1, 3));
    }

    #[test]
    fn trace_summary_fields() {
        let (_, tr) = run(MapKind::Q, &n(20), Budget::default(), false);
        assert!(tr.iterates.is_none());
        assert_eq!(tr.steps, 2);
        assert_eq!(tr.first_odd_hit, Some(2));
        assert_eq!(tr.peak_bits, 5);
    }

    #[test]
    fn trace_mode_matches_summary_mode() {
        for v in 0..300u64 {
            for kind in MapKind::ALL {
                let a = run(kind, &n(v), Budget::default(), false);
                let b = run(kind, &n(v), Budget::default(), true);
                assert_eq!(a.0, b.0, "{kind} {v}");
                assert_eq!(a.1.steps, b.1.steps);
            }
        }
    }

    #[test]
    fn entry_time_law() {
        for m in 1..=12u64 {
            let anchor = (n(1) << m) + 1u32;
            for j in 1..=20u64 {
                let x0 = &anchor << j;
                let out = run(MapKind::Q, &x0, Budget::default(), false).0;
                assert_eq!(
                    out,
                    OrbitOutcome::Cycle { length: m, odd_element: anchor.clone(), entry_step: j }
                );
            }
        }
    }

    #[test]
    fn q_zero_reachers_are_powers_of_two() {
        for v in 0..=10_000u64 {
            let zero = matches!(outcome(MapKind::Q, v), OrbitOutcome::Zero { .. });
            assert_eq!(zero, v == 0 || pow2_exponent(&n(v)).is_some(), "{v}");
        }
    }

    #[test]
    fn q_cycles_agree_with_generic_finder() {
        for v in 0..=10_000u64 {
            if let OrbitOutcome::Cycle { length, odd_element, .. } = outcome(MapKind::Q, v) {
                assert_eq!(is_pow2_plus1(&odd_element), Some(length));
                let g = detect_cycle_generic(MapKind::Q, &n(v), Budget::default()).unwrap();
                assert_eq!(g.length, length);
                assert_eq!(g.witness, odd_element);
            }
        }
    }

    #[test]
    fn s_zero_orbits_pass_through_pow2_pm1() {
        for v in 0..=10_000u64 {
            let (out, tr) = run(MapKind::S, &n(v), Budget::default(), true);
            assert!(!matches!(out, OrbitOutcome::Cycle { .. }), "{v}");
            if let OrbitOutcome::Zero { steps } = out {
                let it = tr.iterates.unwrap();
                assert_eq!(steps as u128, s_hit_time(v as u128) as u128);
                assert!(it.iter().any(|x| {
                    is_pow2_minus1(x).is_some() || (x.bits() > 0 && pow2_exponent(&(x - 1u32)).is_some())
                }));
            }
        }
    }

    #[test]
    fn no_s_cycles_under_generic_finder() {
        for v in 0..=10_000u64 {
            assert_eq!(detect_cycle_generic(MapKind::S, &n(v), Budget::default()), None, "{v}");
        }
    }
}
