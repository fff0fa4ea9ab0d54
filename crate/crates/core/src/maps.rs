//! The five bimodal step functions. Every map halves even inputs; they
//! differ only on odd inputs.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{choose2, Decomposition, Form, Nat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MapKind {
    /// divide-or-choose-2: odd `n ↦ n(n−1)/2`
    Q,
    /// symmetric rule: odd `n ↦ (n²−1)/4`
    S,
    /// compressed Collatz: odd `n ↦ (3n+1)/2`
    T,
    /// Collatz variant: odd `n ↦ (3n−1)/2`
    F,
    /// odd `n ↦ (n+1)n/2`
    #[serde(rename = "qp")]
    QPlus,
}

impl MapKind {
    pub const ALL: [MapKind; 5] = [MapKind::Q, MapKind::S, MapKind::T, MapKind::F, MapKind::QPlus];

    pub fn tag(self) -> &'static str {
        match self {
            MapKind::Q => "q",
            MapKind::S => "s",
            MapKind::T => "t",
            MapKind::F => "f",
            MapKind::QPlus => "qp",
        }
    }
}

impl fmt::Display for MapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown map {0:?} (expected one of q, s, t, f, qp)")]
pub struct UnknownMap(pub String);

impl FromStr for MapKind {
    type Err = UnknownMap;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MapKind::ALL
            .into_iter()
            .find(|k| k.tag() == s)
            .ok_or_else(|| UnknownMap(s.to_owned()))
    }
}

/// Which half of the rule consumed the input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Even,
    Odd,
}

/// Applies one step of `kind` to `n`.
pub fn step(kind: MapKind, n: &Nat) -> (Nat, Branch) {
    if n.is_even() {
        return (n >> 1u32, Branch::Even);
    }
    let next = match kind {
        MapKind::Q => choose2(n),
        // ((n−1)/2)·((n+1)/2): consecutive integers
        MapKind::S => {
            let lo = n >> 1u32;
            let hi = &lo + 1u32;
            lo * hi
        }
        MapKind::T => (n * 3u32 + 1u32) >> 1u32,
        MapKind::F => (n * 3u32 - 1u32) >> 1u32,
        MapKind::QPlus => n * ((n + 1u32) >> 1u32),
    };
    (next, Branch::Odd)
}

/// The successor value alone.
#[inline]
pub fn apply(kind: MapKind, n: &Nat) -> Nat {
    step(kind, n).0
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecomposedStepError {
    #[error("decomposed odd step is only defined for q, not {0}")]
    Kind(MapKind),
    #[error("expected a 2^m·k + 1 decomposition with m >= 1 and odd k, got {0}")]
    Invalid(Decomposition),
}

/// Second route to the odd branch of Q: for `n = 2^m·k + 1` the image is
/// `2^(m−1)·k·n`.
pub fn odd_step_decomposed(kind: MapKind, d: &Decomposition) -> Result<Nat, DecomposedStepError> {
    if kind != MapKind::Q {
        return Err(DecomposedStepError::Kind(kind));
    }
    if d.form != Form::OddPlus || d.m == 0 || d.k.is_even() {
        return Err(DecomposedStepError::Invalid(d.clone()));
    }
    let n = d.recompose();
    Ok((&d.k * n) << (d.m - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::odd_decomp_plus;
    use num_traits::Zero;

    fn n(v: u64) -> Nat {
        Nat::from(v)
    }

    #[test]
    fn step_examples() {
        assert_eq!(step(MapKind::Q, &n(10)), (n(5), Branch::Even));
        assert_eq!(step(MapKind::Q, &n(3)), (n(3), Branch::Odd));
        assert_eq!(step(MapKind::S, &n(3)), (n(2), Branch::Odd));
        assert_eq!(step(MapKind::S, &n(5)), (n((25 - 1) / 4), Branch::Odd));
        assert_eq!(step(MapKind::T, &n(5)), (n((15 + 1) / 2), Branch::Odd));
        assert_eq!(step(MapKind::F, &n(5)), (n((15 - 1) / 2), Branch::Odd));
        assert_eq!(step(MapKind::QPlus, &n(5)), (n(15), Branch::Odd));
    }

    #[test]
    fn every_map_fixes_zero() {
        for kind in MapKind::ALL {
            assert_eq!(step(kind, &n(0)), (n(0), Branch::Even));
        }
    }

    #[test]
    fn step_matches_u128_formulas() {
        for v in 0..20_000u128 {
            let x = n(v as u64);
            for kind in MapKind::ALL {
                let want = if v % 2 == 0 {
                    v / 2
                } else {
                    match kind {
                        MapKind::Q => v * (v - 1) / 2,
                        MapKind::S => (v * v - 1) / 4,
                        MapKind::T => (3 * v + 1) / 2,
                        MapKind::F => (3 * v - 1) / 2,
                        MapKind::QPlus => (v + 1) * v / 2,
                    }
                };
                let (got, branch) = step(kind, &x);
                assert_eq!(got, Nat::from(want), "{kind} {v}");
                assert_eq!(branch == Branch::Odd, v % 2 == 1);
            }
        }
    }

    #[test]
    fn decomposed_examples() {
        let d = odd_decomp_plus(&n(7)).unwrap();
        assert_eq!((d.m, d.k.clone()), (1, n(3)));
        assert_eq!(odd_step_decomposed(MapKind::Q, &d).unwrap(), n(21));
        assert_eq!(n(7 * 6 / 2), n(21));
        let d = odd_decomp_plus(&n(21)).unwrap();
        assert_eq!(odd_step_decomposed(MapKind::Q, &d).unwrap(), n(210));
        let d = odd_decomp_plus(&n(3)).unwrap();
        assert_eq!(odd_step_decomposed(MapKind::Q, &d).unwrap(), n(3));
    }

    #[test]
    fn decomposed_rejects() {
        let d = odd_decomp_plus(&n(7)).unwrap();
        assert_eq!(
            odd_step_decomposed(MapKind::S, &d),
            Err(DecomposedStepError::Kind(MapKind::S))
        );
        let even = Decomposition { m: 2, k: n(3), form: Form::Even };
        assert!(odd_step_decomposed(MapKind::Q, &even).is_err());
        let zero_m = Decomposition { m: 0, k: n(3), form: Form::OddPlus };
        assert!(odd_step_decomposed(MapKind::Q, &zero_m).is_err());
        let even_k = Decomposition { m: 1, k: n(4), form: Form::OddPlus };
        assert!(odd_step_decomposed(MapKind::Q, &even_k).is_err());
    }

    #[test]
    fn decomposed_route_agrees_with_step() {
        for v in (3..=100_000u64).step_by(2) {
            let x = n(v);
            let d = odd_decomp_plus(&x).unwrap();
            assert_eq!(odd_step_decomposed(MapKind::Q, &d).unwrap(), apply(MapKind::Q, &x));
        }
    }

    #[test]
    fn s_odd_branch_is_even() {
        for v in (1..=100_000u64).step_by(2) {
            assert!(apply(MapKind::S, &n(v)).is_even(), "S({v})");
        }
    }

    #[test]
    fn fixed_points() {
        for v in 0..=10_000u64 {
            let x = n(v);
            assert_eq!(apply(MapKind::Q, &x) == x, v == 0 || v == 3, "Q({v})");
            assert_eq!(apply(MapKind::S, &x) == x, v == 0, "S({v})");
        }
    }

    #[test]
    fn multiplicative_and_additive_kinship() {
        for v in (1..=10_000u64).step_by(2) {
            let x = n(v);
            let half = (&x - 1u32) >> 1u32;
            assert_eq!(apply(MapKind::Q, &x), &x * &half);
            assert_eq!(apply(MapKind::F, &x), &x + &half);
        }
    }

    #[test]
    fn map_tags_round_trip() {
        for kind in MapKind::ALL {
            assert_eq!(kind.tag().parse::<MapKind>().unwrap(), kind);
        }
        assert!("x".parse::<MapKind>().is_err());
        assert!("Q".parse::<MapKind>().is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn s_odd_branch_is_even_at_512_bits(d in prop::collection::vec(any::<u32>(), 16)) {
                let x = Nat::new(d) | Nat::from(1u32);
                prop_assert!(apply(MapKind::S, &x).is_even());
            }

            #[test]
            fn q_routes_agree_at_512_bits(d in prop::collection::vec(any::<u32>(), 16)) {
                let x = Nat::new(d) | Nat::from(1u32);
                prop_assume!(x > Nat::from(1u32));
                let dec = odd_decomp_plus(&x).unwrap();
                prop_assert_eq!(odd_step_decomposed(MapKind::Q, &dec).unwrap(), apply(MapKind::Q, &x));
                prop_assert!(!apply(MapKind::Q, &x).is_zero());
            }
        }
    }
}
