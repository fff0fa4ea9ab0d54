//! Exact integer helpers: 2-adic valuation, the three canonical
//! decompositions `2^m·k`, `2^m·k + 1`, `2^m·k − 1`, and `n choose 2`.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

/// Arbitrary-precision non-negative integer. Every iterate lives here.
pub type Nat = BigUint;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("0 has no 2-adic decomposition")]
    Zero,
    #[error("{0} is even; expected an odd value")]
    Even(Nat),
    #[error("{0} is too small; expected an odd value >= 3")]
    TooSmall(Nat),
    #[error("not a decimal natural number: {0:?}")]
    Parse(String),
}

/// Which of the three shapes a [`Decomposition`] was taken from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Form {
    /// `n = 2^m·k`
    Even,
    /// `n = 2^m·k + 1`
    OddPlus,
    /// `n = 2^m·k − 1`
    OddMinus,
}

/// The pair `(m, k)` with `k` odd, plus the shape it was read from.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Decomposition {
    pub m: u64,
    pub k: Nat,
    pub form: Form,
}

impl Decomposition {
    /// Rebuilds the value the decomposition was taken from.
    pub fn recompose(&self) -> Nat {
        let base = &self.k << self.m;
        match self.form {
            Form::Even => base,
            Form::OddPlus => base + 1u32,
            Form::OddMinus => base - 1u32,
        }
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.form {
            Form::Even => "",
            Form::OddPlus => " + 1",
            Form::OddMinus => " - 1",
        };
        write!(f, "2^{}·{}{}", self.m, self.k, sign)
    }
}

/// Number of trailing zero bits; `n` must be nonzero.
#[inline]
fn valuation(n: &Nat) -> u64 {
    n.trailing_zeros().expect("valuation of nonzero value")
}

/// Writes `n = 2^m·k` with `k` odd.
pub fn nu2(n: &Nat) -> Result<Decomposition, ArithError> {
    if n.is_zero() {
        return Err(ArithError::Zero);
    }
    let m = valuation(n);
    Ok(Decomposition {
        m,
        k: n >> m,
        form: Form::Even,
    })
}

/// Writes an odd `n >= 3` as `2^m·k + 1` with `k` odd and `m >= 1`.
pub fn odd_decomp_plus(n: &Nat) -> Result<Decomposition, ArithError> {
    if n.is_even() {
        return Err(ArithError::Even(n.clone()));
    }
    if n <= &Nat::one() {
        return Err(ArithError::TooSmall(n.clone()));
    }
    let d = nu2(&(n - 1u32))?;
    Ok(Decomposition {
        form: Form::OddPlus,
        ..d
    })
}

/// Writes an odd `n >= 1` as `2^m·k − 1` with `k` odd and `m >= 1`.
pub fn odd_decomp_minus(n: &Nat) -> Result<Decomposition, ArithError> {
    if n.is_even() {
        return Err(ArithError::Even(n.clone()));
    }
    let d = nu2(&(n + 1u32))?;
    Ok(Decomposition {
        form: Form::OddMinus,
        ..d
    })
}

/// `Some(m)` when `n` is a power of two `2^m`.
pub fn pow2_exponent(n: &Nat) -> Option<u64> {
    if n.is_zero() {
        return None;
    }
    let m = valuation(n);
    (n.bits() == m + 1).then_some(m)
}

/// `Some(m)` with `m >= 1` when `n = 2^m + 1`.
pub fn is_pow2_plus1(n: &Nat) -> Option<u64> {
    // 2^0 + 1 = 2 is even, so requiring odd input excludes m = 0.
    if n.is_even() || n.is_one() {
        return None;
    }
    pow2_exponent(&(n - 1u32))
}

/// `Some(m)` when `n = 2^m − 1` (so `0` gives `m = 0`).
pub fn is_pow2_minus1(n: &Nat) -> Option<u64> {
    pow2_exponent(&(n + 1u32))
}

/// `n·(n−1)/2`, zero for `n <= 1`.
pub fn choose2(n: &Nat) -> Nat {
    if n <= &Nat::one() {
        return Nat::zero();
    }
    let pred = n - 1u32;
    // exactly one factor is even; halve that one to keep the product small
    if n.is_even() {
        (n >> 1u32) * pred
    } else {
        n * (pred >> 1u32)
    }
}

/// Parses a strict base-10 digit string (no sign, no separators).
pub fn parse_nat(s: &str) -> Result<Nat, ArithError> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ArithError::Parse(s.to_owned()));
    }
    Nat::parse_bytes(s.as_bytes(), 10).ok_or_else(|| ArithError::Parse(s.to_owned()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: u64) -> Nat {
        Nat::from(v)
    }

    // Oracle: strip factors of two one at a time.
    fn halving(mut v: u64) -> (u64, u64) {
        let mut m = 0;
        while v % 2 == 0 {
            v /= 2;
            m += 1;
        }
        (m, v)
    }

    fn pair(d: &Decomposition) -> (u64, Nat) {
        (d.m, d.k.clone())
    }

    #[test]
    fn nu2_examples() {
        assert_eq!(pair(&nu2(&n(12)).unwrap()), (2, n(3)));
        assert_eq!(pair(&nu2(&n(7)).unwrap()), (0, n(7)));
        let (m, k) = halving(40);
        assert_eq!((m, k), (3, 5));
        assert_eq!(pair(&nu2(&n(40)).unwrap()), (m, n(k)));
    }

    #[test]
    fn nu2_rejects_zero() {
        assert_eq!(nu2(&n(0)), Err(ArithError::Zero));
    }

    #[test]
    fn odd_plus_examples() {
        let (m, k) = halving(20);
        assert_eq!((m, k), (2, 5));
        assert_eq!(pair(&odd_decomp_plus(&n(21)).unwrap()), (2, n(5)));
        assert_eq!(pair(&odd_decomp_plus(&n(3)).unwrap()), (1, n(1)));
        assert_eq!(halving(8), (3, 1));
        assert_eq!(pair(&odd_decomp_plus(&n(9)).unwrap()), (3, n(1)));
    }

    #[test]
    fn odd_plus_rejects() {
        assert!(matches!(odd_decomp_plus(&n(10)), Err(ArithError::Even(_))));
        assert!(matches!(odd_decomp_plus(&n(1)), Err(ArithError::TooSmall(_))));
        assert!(matches!(odd_decomp_plus(&n(0)), Err(ArithError::Even(_))));
    }

    #[test]
    fn odd_minus_examples() {
        assert_eq!(halving(8), (3, 1));
        assert_eq!(pair(&odd_decomp_minus(&n(7)).unwrap()), (3, n(1)));
        assert_eq!(halving(12), (2, 3));
        assert_eq!(pair(&odd_decomp_minus(&n(11)).unwrap()), (2, n(3)));
        assert_eq!(pair(&odd_decomp_minus(&n(1)).unwrap()), (1, n(1)));
        assert!(matches!(odd_decomp_minus(&n(4)), Err(ArithError::Even(_))));
    }

    #[test]
    fn pow2_plus1_examples() {
        assert_eq!(is_pow2_plus1(&n(9)), Some(3));
        assert_eq!(is_pow2_plus1(&n(3)), Some(1));
        assert_eq!(is_pow2_plus1(&n(21)), None);
        assert_eq!(is_pow2_plus1(&n(2)), None);
        assert_eq!(is_pow2_plus1(&n(1)), None);
        assert_eq!(is_pow2_plus1(&n(0)), None);
    }

    #[test]
    fn pow2_minus1_examples() {
        assert_eq!(is_pow2_minus1(&n(0)), Some(0));
        assert_eq!(is_pow2_minus1(&n(1)), Some(1));
        assert_eq!(is_pow2_minus1(&n(15)), Some(4));
        assert_eq!(is_pow2_minus1(&n(14)), None);
    }

    #[test]
    fn choose2_examples() {
        assert_eq!(choose2(&n(3)), n(3));
        assert_eq!(choose2(&n(1)), n(0));
        assert_eq!(choose2(&n(0)), n(0));
        assert_eq!(choose2(&n(21)), n(21 * 20 / 2));
    }

    #[test]
    fn choose2_matches_triangular_sum() {
        let mut sum = 0u64;
        for v in 0..=1000u64 {
            assert_eq!(choose2(&n(v)), n(sum), "n = {v}");
            sum += v;
        }
    }

    #[test]
    fn decompositions_round_trip_exhaustively() {
        for v in 1..=100_000u64 {
            let x = n(v);
            let d = nu2(&x).unwrap();
            assert_eq!(d.recompose(), x);
            assert!(d.k.is_odd());
            assert_eq!((d.m, d.k.clone()), {
                let (m, k) = halving(v);
                (m, n(k))
            });
            if v % 2 == 1 {
                let minus = odd_decomp_minus(&x).unwrap();
                assert_eq!(minus.recompose(), x);
                assert!(minus.k.is_odd() && minus.m >= 1);
                if v >= 3 {
                    let plus = odd_decomp_plus(&x).unwrap();
                    assert_eq!(plus.recompose(), x);
                    assert!(plus.k.is_odd() && plus.m >= 1);
                    assert_eq!(is_pow2_plus1(&x).is_some(), plus.k.is_one());
                }
            }
        }
    }

    #[test]
    fn parse_is_strict() {
        assert_eq!(parse_nat("0").unwrap(), n(0));
        assert_eq!(parse_nat("007").unwrap(), n(7));
        for bad in ["", "-1", "+1", "1_000", "12a", " 1", "1.0"] {
            assert!(parse_nat(bad).is_err(), "{bad:?}");
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn big(bits: usize) -> impl Strategy<Value = Nat> {
            prop::collection::vec(any::<u32>(), bits / 32).prop_map(|d| Nat::new(d))
        }

        proptest! {
            #[test]
            fn random_1024_bit_round_trips(x in big(1024)) {
                prop_assume!(!x.is_zero());
                let d = nu2(&x).unwrap();
                prop_assert!(d.k.is_odd());
                prop_assert_eq!(d.recompose(), x.clone());

                let odd = &x | Nat::one();
                let minus = odd_decomp_minus(&odd).unwrap();
                prop_assert!(minus.k.is_odd());
                prop_assert_eq!(minus.recompose(), odd.clone());
                if odd > Nat::one() {
                    let plus = odd_decomp_plus(&odd).unwrap();
                    prop_assert!(plus.k.is_odd());
                    prop_assert_eq!(plus.recompose(), odd.clone());
                    prop_assert_eq!(is_pow2_plus1(&odd).is_some(), plus.k.is_one());
                }
            }

            #[test]
            fn decimal_form_round_trips(x in big(4096)) {
                let s = x.to_string();
                prop_assert_eq!(parse_nat(&s).unwrap().to_string(), s);
            }
        }
    }
}
