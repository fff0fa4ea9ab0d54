//! Instance checks of the structural results for Q and S, plus budgeted
//! probes of the open unboundedness questions.
//!
//! A failed check here means an arithmetic bug, not a counterexample: the
//! results are proven. Failures come back as [`Defect`].

use std::fmt;

use num_integer::Integer;
use num_traits::One;
use rayon::prelude::*;
use thiserror::Error;

use crate::arith::{choose2, Nat};
use crate::maps::{apply, MapKind};
use crate::orbit::{
    growth_certificate, ksequence, run, Budget, KEnd, OrbitError, OrbitOutcome,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Defect {
    #[error("cycle of length {m}: expected {expected} after element {index}, iteration gave {got}")]
    CycleTraversal {
        m: u64,
        index: usize,
        expected: Nat,
        got: Nat,
    },
    #[error("S from 2^{m}{sign}1: first hit of 0 at {got:?}, closed form says {expected}")]
    StoppingTime {
        m: u64,
        sign: Sign,
        expected: u64,
        got: Option<u64>,
    },
    #[error("chain from 2^{m}+3 failed: {what}")]
    Chain { m: u64, what: &'static str },
    #[error("{m} steps of q from 2^{m}·{k}+1 gave {got}, expected {expected}")]
    Odom {
        m: u64,
        k: Nat,
        expected: Nat,
        got: Nat,
    },
    #[error("invalid argument: {0}")]
    Argument(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

fn pow2(m: u64) -> Nat {
    Nat::one() << m
}

/// The m-cycle of Q anchored at `2^m + 1`, in traversal order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleDescriptor {
    pub m: u64,
    pub elements: Vec<Nat>,
}

/// Builds `2^m+1, 2^(m−1)(2^m+1), …, 2(2^m+1)` and checks Q walks it.
pub fn lemma1_cycle(m: u64) -> Result<CycleDescriptor, Defect> {
    if m == 0 {
        return Err(Defect::Argument("cycle length must be >= 1".into()));
    }
    let anchor = pow2(m) + 1u32;
    let mut elements = Vec::with_capacity(m as usize);
    elements.push(anchor.clone());
    for i in 1..m {
        elements.push(&anchor << (m - i));
    }

    for (index, x) in elements.iter().enumerate() {
        let expected = &elements[(index + 1) % elements.len()];
        let got = apply(MapKind::Q, x);
        if got != *expected {
            return Err(Defect::CycleTraversal {
                m,
                index,
                expected: expected.clone(),
                got,
            });
        }
    }
    let odd = elements.iter().filter(|x| x.is_odd()).count();
    if odd != 1 {
        return Err(Defect::Argument(format!("{odd} odd elements in the {m}-cycle")));
    }
    Ok(CycleDescriptor { m, elements })
}

/// Exact first-hit time of 0 under S from `2^m ± 1`, asserted against
/// `C(m+1, 2) + 2` for `+` and `C(m+1, 2)` for `−`.
pub fn verify_lemma2(m: u64, sign: Sign) -> Result<u64, Defect> {
    if m == 0 {
        return Err(Defect::Argument("m must be >= 1".into()));
    }
    let tri = choose2(&Nat::from(m + 1));
    let tri = u64::try_from(tri).map_err(|_| Defect::Argument("m too large".into()))?;
    let (x0, expected) = match sign {
        Sign::Plus => (pow2(m) + 1u32, tri + 2),
        Sign::Minus => (pow2(m) - 1u32, tri),
    };
    // iterates stay below 2^(2m)
    let budget = Budget::new(expected + 8, 2 * m + 64).expect("positive budget");
    let got = match run(MapKind::S, &x0, budget, false).0 {
        OrbitOutcome::Zero { steps } => Some(steps),
        _ => None,
    };
    if got != Some(expected) {
        return Err(Defect::StoppingTime { m, sign, expected, got });
    }
    Ok(expected)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainReport {
    pub m: u64,
    /// `x_0 … x_m` by direct iteration from `2^m + 3`.
    pub x: Vec<Nat>,
    /// Closed-form values for `x_1 … x_m`.
    pub formula_values: Vec<Nat>,
    pub all_match: bool,
    pub parity_ok: bool,
    pub strictly_increasing: bool,
}

impl ChainReport {
    pub fn passed(&self) -> bool {
        self.all_match && self.parity_ok && self.strictly_increasing
    }
}

/// Iterates Q from `2^m + 3` for `m` steps and compares against
/// `x_j = 2^(m−j)·∏_{i<j}(x_i + 2) + 3` (`j < m`) and
/// `x_m = x_{m−1}·(∏_{i<m−1}(x_i + 2) + 1)`.
pub fn chain_report(m: u64) -> Result<ChainReport, Defect> {
    if m < 2 {
        return Err(Defect::Argument("chains need m >= 2".into()));
    }
    let mut x = Vec::with_capacity(m as usize + 1);
    x.push(pow2(m) + 3u32);
    for _ in 0..m {
        let next = apply(MapKind::Q, x.last().unwrap());
        x.push(next);
    }

    // prefix[j] = ∏_{i<j} (x_i + 2)
    let mut prefix = vec![Nat::one()];
    for xi in &x[..m as usize - 1] {
        let p = prefix.last().unwrap() * (xi + 2u32);
        prefix.push(p);
    }
    let mut formula_values: Vec<Nat> = (1..m)
        .map(|j| (&prefix[j as usize] << (m - j)) + 3u32)
        .collect();
    formula_values.push(&x[m as usize - 1] * (&prefix[m as usize - 1] + 1u32));

    let all_match = formula_values.iter().zip(&x[1..]).all(|(f, v)| f == v);
    let parity_ok = x[..m as usize].iter().all(|v| v.is_odd()) && x[m as usize].is_even();
    let strictly_increasing = x[..m as usize].windows(2).all(|w| w[0] < w[1]);
    Ok(ChainReport {
        m,
        x,
        formula_values,
        all_match,
        parity_ok,
        strictly_increasing,
    })
}

/// [`chain_report`] that fails unless every check holds.
pub fn verify_chain(m: u64) -> Result<ChainReport, Defect> {
    let report = chain_report(m)?;
    let what = if !report.all_match {
        "closed form mismatch"
    } else if !report.parity_ok {
        "parity pattern"
    } else if !report.strictly_increasing {
        "not strictly increasing"
    } else {
        return Ok(report);
    };
    Err(Defect::Chain { m, what })
}

/// `m` steps of Q from `2^m·k + 1` land on `k·(2^m·k + 1)`.
pub fn verify_odom(m: u64, k: &Nat) -> Result<Nat, Defect> {
    if m == 0 || k.is_even() {
        return Err(Defect::Argument(format!("need m >= 1 and odd k, got m={m}, k={k}")));
    }
    let x0 = (k << m) + 1u32;
    let expected = k * &x0;
    let got = (0..m).fold(x0, |x, _| apply(MapKind::Q, &x));
    if got != expected {
        return Err(Defect::Odom { m, k: k.clone(), expected, got });
    }
    Ok(got)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    TerminatedCycle,
    TerminatedZero,
    InconclusiveBudgetExhausted,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::TerminatedCycle => "terminated (cycle)",
            Verdict::TerminatedZero => "terminated (zero)",
            Verdict::InconclusiveBudgetExhausted => "inconclusive-budget-exhausted",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Evidence gathered about one starting value. Never a claim about
/// unboundedness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeReport {
    pub start: Nat,
    /// Consecutive stages from the first with `k > 1`.
    pub stages_with_k_gt_1: usize,
    /// `3^p·x0'` over those stages, `x0'` the odd part of the start;
    /// absent when there are none.
    pub certified_growth_bound: Option<Nat>,
    pub peak_bits: u64,
    pub steps: u64,
    pub verdict: Verdict,
}

pub fn probe_conjecture(kind: MapKind, x0: &Nat, budget: Budget) -> Result<ProbeReport, OrbitError> {
    if kind != MapKind::Q {
        return Err(OrbitError::KSequenceUnsupported(kind));
    }
    let seq = ksequence(kind, x0, budget)?;
    let grow = seq.leading_growth_stages();
    let certified_growth_bound = if grow == 0 {
        None
    } else {
        let stages = &seq.stages[..grow];
        Some(growth_certificate(kind, stages, &stages[0].value)?.bound)
    };
    let verdict = match seq.end {
        KEnd::Cycle { .. } => Verdict::TerminatedCycle,
        KEnd::Zero => Verdict::TerminatedZero,
        KEnd::Budget(_) => Verdict::InconclusiveBudgetExhausted,
    };
    Ok(ProbeReport {
        start: x0.clone(),
        stages_with_k_gt_1: grow,
        certified_growth_bound,
        peak_bits: seq.peak_bits,
        steps: seq.steps,
        verdict,
    })
}

/// Default seed for the Mersenne-type family: `2^m − 1`.
pub fn mersenne_seed(m: u64) -> Nat {
    pow2(m) - 1u32
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Lemma1,
    Lemma2,
    Chain,
    Odom,
    All,
}

impl std::str::FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "lemma1" => Suite::Lemma1,
            "lemma2" => Suite::Lemma2,
            "chain" => Suite::Chain,
            "odom" => Suite::Odom,
            "all" => Suite::All,
            _ => return Err(format!("unknown suite {s:?} (lemma1, lemma2, chain, odom, all)")),
        })
    }
}

/// Inclusive bounds for a suite run; `None` picks the suite default.
#[derive(Debug, Clone, Copy, Default)]
pub struct SuiteBounds {
    pub m_from: Option<u64>,
    pub m_to: Option<u64>,
    pub k_to: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseResult {
    pub suite: &'static str,
    pub case: String,
    pub result: Result<String, Defect>,
}

impl CaseResult {
    pub fn passed(&self) -> bool {
        self.result.is_ok()
    }
}

#[derive(Clone)]
enum Case {
    Lemma1(u64),
    Lemma2(u64, Sign),
    Chain(u64),
    Odom(u64, u64),
}

impl Case {
    fn check(&self) -> CaseResult {
        match *self {
            Case::Lemma1(m) => CaseResult {
                suite: "lemma1",
                case: format!("m={m}"),
                result: lemma1_cycle(m).map(|c| format!("{} elements", c.elements.len())),
            },
            Case::Lemma2(m, sign) => CaseResult {
                suite: "lemma2",
                case: format!("m={m} sign={sign}"),
                result: verify_lemma2(m, sign).map(|s| format!("steps={s}")),
            },
            Case::Chain(m) => CaseResult {
                suite: "chain",
                case: format!("m={m}"),
                result: verify_chain(m).map(|r| format!("x_m has {} bits", r.x[m as usize].bits())),
            },
            Case::Odom(m, k) => CaseResult {
                suite: "odom",
                case: format!("m={m} k={k}"),
                result: verify_odom(m, &Nat::from(k)).and_then(|low| {
                    let x0 = (Nat::from(k) << m) + 1u32;
                    if k >= 3 && low < &x0 * 3u32 {
                        return Err(Defect::Odom { m, k: k.into(), expected: x0 * 3u32, got: low });
                    }
                    Ok(format!("x_m={low}"))
                }),
            },
        }
    }
}

fn cases(suite: Suite, b: SuiteBounds) -> Vec<Case> {
    let range = |lo: u64, hi: u64| b.m_from.unwrap_or(lo)..=b.m_to.unwrap_or(hi);
    match suite {
        Suite::Lemma1 => range(1, 20).map(Case::Lemma1).collect(),
        Suite::Lemma2 => range(1, 15)
            .flat_map(|m| [Case::Lemma2(m, Sign::Plus), Case::Lemma2(m, Sign::Minus)])
            .collect(),
        Suite::Chain => range(2, 10).map(Case::Chain).collect(),
        Suite::Odom => {
            let k_to = b.k_to.unwrap_or(9);
            range(1, 8)
                .flat_map(|m| (1..=k_to).step_by(2).map(move |k| Case::Odom(m, k)))
                .collect()
        }
        Suite::All => [Suite::Lemma1, Suite::Lemma2, Suite::Chain, Suite::Odom]
            .into_iter()
            .flat_map(|s| cases(s, b))
            .collect(),
    }
}

/// Runs a suite's cases in parallel; results come back in case order.
pub fn run_suite(suite: Suite, bounds: SuiteBounds) -> Vec<CaseResult> {
    cases(suite, bounds).par_iter().map(Case::check).collect()
}
