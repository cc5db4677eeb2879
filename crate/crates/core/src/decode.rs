//! Hard-decision decoding over all rows of a decoding matrix.
//!
//! Iterative bit flipping with a simultaneous flip schedule: per
//! iteration every check is evaluated, every position counts the failed
//! checks covering it, and all positions past the flip threshold flip at
//! once. The schedule is deterministic and order-independent, and with
//! the strict-majority threshold it inherits the one-step majority-logic
//! guarantee of finite-geometry matrices: ⌊γ/2⌋ correctable errors at
//! column weight γ.

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};

/// Default iteration budget; plenty for desk-scale matrices.
pub const DEFAULT_MAX_ITERS: usize = 50;

/// When does a position flip, given `failed` of its `covering` checks
/// are unsatisfied?
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ThresholdPolicy {
    /// Flip iff strictly more than half of the covering checks failed.
    /// Ties do not flip.
    #[default]
    StrictMajority,
    /// Flip iff at least this many covering checks failed (and at least
    /// one did).
    FixedCount(usize),
}

impl ThresholdPolicy {
    fn flips(&self, failed: usize, covering: usize) -> bool {
        match *self {
            ThresholdPolicy::StrictMajority => 2 * failed > covering,
            ThresholdPolicy::FixedCount(c) => failed >= c.max(1),
        }
    }
}

/// Result of a decoding attempt. `converged` guarantees a zero syndrome;
/// the word is otherwise the last iterate and must not be used as a key.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeOutcome {
    pub word: BitVector,
    pub converged: bool,
    pub iterations: usize,
    /// Total number of position flips across all iterations.
    pub flips: usize,
}

/// Decodes `y` against all rows of `h`.
///
/// Stops as soon as the syndrome is zero, the iteration budget is spent,
/// or an iteration flips nothing (a fixed point that cannot improve).
pub fn bit_flip_decode(
    h: &BitMatrix,
    y: &BitVector,
    max_iters: usize,
    policy: ThresholdPolicy,
) -> Result<DecodeOutcome> {
    if y.len() != h.ncols() {
        return Err(Error::DimensionMismatch {
            expected: h.ncols(),
            got: y.len(),
        });
    }
    assert!(max_iters >= 1, "decoder needs at least one iteration");

    let mut covering = vec![0usize; h.ncols()];
    for row in h.rows() {
        for j in row.ones() {
            covering[j] += 1;
        }
    }

    let mut word = y.clone();
    let mut failed = vec![0usize; h.ncols()];
    let mut iterations = 0;
    let mut flips = 0;
    loop {
        failed.iter_mut().for_each(|c| *c = 0);
        let mut any_failed = false;
        for row in h.rows() {
            if row.dot(&word) {
                any_failed = true;
                for j in row.ones() {
                    failed[j] += 1;
                }
            }
        }
        if !any_failed {
            return Ok(DecodeOutcome {
                word,
                converged: true,
                iterations,
                flips,
            });
        }
        if iterations == max_iters {
            break;
        }
        let flip_set: Vec<usize> = (0..h.ncols())
            .filter(|&j| policy.flips(failed[j], covering[j]))
            .collect();
        if flip_set.is_empty() {
            break;
        }
        for &j in &flip_set {
            word.flip(j);
        }
        flips += flip_set.len();
        iterations += 1;
    }
    Ok(DecodeOutcome {
        word,
        converged: false,
        iterations,
        flips,
    })
}
