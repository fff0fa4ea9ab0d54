//! Q iterated in `f64`, side by side with the exact engine.
//!
//! Above 2^53 a double cannot tell `2^m·k` from `2^m·k ± 1`, so a float
//! orbit can fall onto one of the genuine Q cycles while the exact orbit
//! keeps growing.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::FromPrimitive;

use crate::arith::Nat;
use crate::maps::{apply, MapKind};
use crate::orbit::{run, Budget, OrbitOutcome};

/// `s·(s−1)` rounds to exactly `5·2^103` in binary64, so the float orbit
/// drops straight onto the 2-cycle {5, 10}. The seed itself is an exactly
/// representable odd integer below 2^53.
pub const DEFAULT_SEED: u64 = 7_120_816_245_988_179;

/// One step of Q as a naive floating-point program would compute it.
pub fn float_step(x: f64) -> f64 {
    if x % 2.0 == 0.0 {
        x / 2.0
    } else {
        x * (x - 1.0) / 2.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FloatRepeat {
    /// Step at which a previously seen value came back.
    pub step: u64,
    pub first_seen: u64,
    pub value: f64,
}

impl FloatRepeat {
    pub fn period(&self) -> u64 {
        self.step - self.first_seen
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PitfallReport {
    pub seed: u64,
    pub step_budget: u64,
    pub float_repeat: Option<FloatRepeat>,
    /// First step at which the float iterate differs from the exact one.
    pub divergence_step: Option<u64>,
    pub exact_at_divergence: Option<Nat>,
    pub float_at_divergence: Option<f64>,
    /// The exact engine on the same seed, with `step_budget` steps.
    pub exact_outcome: OrbitOutcome,
    /// Did the exact orbit ever repeat a value within the steps it ran?
    pub exact_repeat: bool,
}

impl PitfallReport {
    /// True when the float run reports a repeat that the exact run does not.
    pub fn false_cycle(&self) -> bool {
        self.float_repeat.is_some()
            && !self.exact_repeat
            && !matches!(self.exact_outcome, OrbitOutcome::Cycle { .. } | OrbitOutcome::Zero { .. })
    }
}

fn exact_float(x: f64) -> Option<Nat> {
    BigUint::from_f64(x).filter(|_| x.is_finite() && x.fract() == 0.0)
}

/// Runs the float orbit for up to `step_budget` steps looking for a repeat,
/// then the exact engine with the same step budget and `max_bits`.
pub fn demonstrate(seed: u64, step_budget: u64, max_bits: u64) -> PitfallReport {
    let mut seen: HashMap<u64, u64> = HashMap::new();
    let mut x = seed as f64;
    let mut float_repeat = None;
    let mut float_orbit = Vec::new();
    for i in 0..=step_budget {
        float_orbit.push(x);
        if let Some(&first) = seen.get(&x.to_bits()) {
            float_repeat = Some(FloatRepeat { step: i, first_seen: first, value: x });
            break;
        }
        seen.insert(x.to_bits(), i);
        x = float_step(x);
    }
    // compare against the exact orbit over the steps the float run took
    let steps = float_repeat.as_ref().map_or(step_budget, |r| r.step);

    let budget = Budget::new(steps.max(1), max_bits).expect("positive budget");
    let (exact_outcome, trace) = run(MapKind::Q, &Nat::from(seed), budget, true);
    let exact = trace.iterates.unwrap_or_default();
    let mut uniq = exact.clone();
    uniq.sort();
    uniq.dedup();
    let exact_repeat = uniq.len() != exact.len();

    let mut divergence_step = None;
    let mut exact_at_divergence = None;
    let mut float_at_divergence = None;
    let mut e = Nat::from(seed);
    for (i, &f) in float_orbit.iter().enumerate() {
        if exact_float(f).as_ref() != Some(&e) {
            divergence_step = Some(i as u64);
            exact_at_divergence = Some(e);
            float_at_divergence = Some(f);
            break;
        }
        e = apply(MapKind::Q, &e);
    }

    PitfallReport {
        seed,
        step_budget,
        float_repeat,
        divergence_step,
        exact_at_divergence,
        float_at_divergence,
        exact_outcome,
        exact_repeat,
    }
}
