//! The shortcut Collatz map and orbit machinery.
//!
//! The map is `f(n) = n/2` for even `n` and `f(n) = (3n+1)/2` for odd `n`.
//! All arithmetic is overflow-checked: `3n+1` leaving the `u64` range is a
//! hard error, never a silent wraparound (a wrapped value could fabricate a
//! spurious cycle).

use std::fmt;

use thiserror::Error;

/// A positive integer in the domain of the Collatz map.
///
/// Construction rejects zero, so every `Nat` is a valid map input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Nat(u64);

impl Nat {
    pub fn new(value: u64) -> Result<Self, CollatzError> {
        if value == 0 {
            Err(CollatzError::Zero)
        } else {
            Ok(Nat(value))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

impl TryFrom<u64> for Nat {
    type Error = CollatzError;

    fn try_from(value: u64) -> Result<Self, Self::Error> {
        Nat::new(value)
    }
}

impl fmt::Display for Nat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum CollatzError {
    #[error("value must be at least 1")]
    Zero,
    #[error("overflow: 3*{n} + 1 is not representable in 64 bits")]
    Overflow { n: u64 },
}

/// One application of the shortcut map on a raw value.
///
/// Returns `None` when `n` is odd and `3n+1` does not fit in a `u64`.
/// Truncated builders use this form directly: an unrepresentable image is
/// necessarily larger than any truncation bound, so it simply falls outside
/// the vertex set.
pub(crate) fn step_checked(n: u64) -> Option<u64> {
    debug_assert!(n >= 1);
    if n % 2 == 0 {
        Some(n / 2)
    } else {
        n.checked_mul(3)?.checked_add(1).map(|m| m / 2)
    }
}

/// One application of the shortcut Collatz map.
pub fn shortcut_step(n: Nat) -> Result<Nat, CollatzError> {
    match step_checked(n.get()) {
        Some(v) => Ok(Nat(v)),
        None => Err(CollatzError::Overflow { n: n.get() }),
    }
}

/// `k`-fold application of the map; `iterate(n, 0) = n`.
pub fn iterate(n: Nat, k: u64) -> Result<Nat, CollatzError> {
    let mut cur = n;
    for _ in 0..k {
        cur = shortcut_step(cur)?;
    }
    Ok(cur)
}

/// Outcome of a capped total-stopping-time search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StoppingTime {
    /// Smallest positive `p` with `f^p(n) = 1`.
    Converged(u64),
    /// 1 was not reached within `cap` steps.
    Undecided { cap: u64 },
}

/// Total stopping time of `n`: the smallest positive `p <= cap` with
/// `f^p(n) = 1`.
///
/// Positivity means the search starts at the first image, so
/// `total_stopping_time(1)` is 2, through the cycle 1 -> 2 -> 1.
pub fn total_stopping_time(n: Nat, cap: u64) -> Result<StoppingTime, CollatzError> {
    assert!(cap >= 1, "cap must be positive");
    let mut cur = n;
    for p in 1..=cap {
        cur = shortcut_step(cur)?;
        if cur.get() == 1 {
            return Ok(StoppingTime::Converged(p));
        }
    }
    Ok(StoppingTime::Undecided { cap })
}

/// How a capped orbit ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Converged { total_stopping_time: u64 },
    CycleDetected { entry_offset: usize, period: usize },
    Undecided { cap: u64 },
}

/// A recorded orbit `n, f(n), f^2(n), ...` with its classification.
///
/// `steps[0]` is the start and `steps[k+1] = f(steps[k])` throughout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrajectoryRecord {
    pub start: Nat,
    pub steps: Vec<Nat>,
    pub classification: Classification,
}

/// Iterates the orbit of `n` for at most `cap` steps and classifies it.
///
/// A value repeating within the recorded orbit is reported as a cycle; this
/// check runs before the convergence check so that the trivial cycle through
/// 1 is reported as a cycle when the orbit starts at 1. Memory is bounded by
/// the cap. Overflow surfaces as an error, never as `Undecided`.
pub fn classify_trajectory(n: Nat, cap: u64) -> Result<TrajectoryRecord, CollatzError> {
    assert!(cap >= 1, "cap must be positive");
    let mut steps = vec![n];
    let mut seen = std::collections::HashMap::new();
    seen.insert(n.get(), 0usize);
    let mut cur = n;
    for k in 1..=cap {
        cur = shortcut_step(cur)?;
        steps.push(cur);
        if let Some(&entry) = seen.get(&cur.get()) {
            return Ok(TrajectoryRecord {
                start: n,
                steps,
                classification: Classification::CycleDetected {
                    entry_offset: entry,
                    period: k as usize - entry,
                },
            });
        }
        if cur.get() == 1 {
            return Ok(TrajectoryRecord {
                start: n,
                steps,
                classification: Classification::Converged {
                    total_stopping_time: k,
                },
            });
        }
        seen.insert(cur.get(), k as usize);
    }
    Ok(TrajectoryRecord {
        start: n,
        steps,
        classification: Classification::Undecided { cap },
    })
}
