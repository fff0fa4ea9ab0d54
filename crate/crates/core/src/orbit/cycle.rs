use num_integer::Integer;
use num_traits::Zero;

use super::{Budget, OrbitError};
use crate::arith::{is_pow2_plus1, Nat};
use crate::maps::{apply, MapKind};

/// Certifies that a Q iterate sits on a cycle: odd values `2^m + 1`
/// (`m >= 1`) open the m-cycle `2^m+1 → 2^(m−1)(2^m+1) → … → 2^m+1`.
pub fn detect_cycle_structural(kind: MapKind, iterate: &Nat) -> Result<Option<u64>, OrbitError> {
    if kind != MapKind::Q {
        return Err(OrbitError::StructuralUnsupported(kind));
    }
    if iterate.is_even() {
        return Ok(None);
    }
    Ok(is_pow2_plus1(iterate))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericCycle {
    pub length: u64,
    /// Smallest element of the cycle.
    pub witness: Nat,
}

/// Floyd's two-pointer finder. Returns `None` when the orbit settles on
/// the fixed point 0 or when the hare runs out of budget.
pub fn detect_cycle_generic(kind: MapKind, x0: &Nat, budget: Budget) -> Option<GenericCycle> {
    let mut hare_steps = 0u64;
    let mut advance = |x: &Nat| -> Option<Nat> {
        if hare_steps >= budget.max_steps() {
            return None;
        }
        hare_steps += 1;
        let y = apply(kind, x);
        (!budget.over_bits(&y)).then_some(y)
    };

    let mut tortoise = apply(kind, x0);
    let mut hare = advance(x0).and_then(|h| advance(&h))?;
    while tortoise != hare {
        tortoise = apply(kind, &tortoise);
        hare = advance(&hare).and_then(|h| advance(&h))?;
    }
    if tortoise.is_zero() {
        return None;
    }

    let mut length = 1u64;
    let mut witness = tortoise.clone();
    let mut y = apply(kind, &tortoise);
    while y != tortoise {
        if y < witness {
            witness.clone_from(&y);
        }
        y = apply(kind, &y);
        length += 1;
    }
    Some(GenericCycle { length, witness })
}
