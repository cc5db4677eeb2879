//! Row selection: build a decoding matrix whose code contains a given
//! word.
//!
//! Given a base matrix whose row count far exceeds its rank, the rows
//! orthogonal to a word r form a decoding matrix H̃ with r in its code.
//! With r drawn uniformly, about half the rows survive and the rank of
//! the selection rarely drops more than 1 below the base rank; the
//! success predicate captures exactly that.

use crate::error::{Error, Result};
use crate::geometry::BaseMatrixBundle;
use crate::gf2::{BitMatrix, BitVector, RowBasis};

/// Partition of a base matrix into rows orthogonal to a word (selected)
/// and the rest (rejected), with the derived code dimension.
///
/// The early-stopped variant may leave a tail of rows unscanned; those
/// belong to neither side and are reported separately.
#[derive(Clone, Debug)]
pub struct AnchorResult {
    selected: BitMatrix,
    rejected: BitMatrix,
    selected_indices: Vec<usize>,
    rejected_indices: Vec<usize>,
    unscanned_indices: Vec<usize>,
    n: usize,
    rank_selected: usize,
    rank_base: usize,
    target: Option<usize>,
}

impl AnchorResult {
    /// The decoding matrix H̃: every row is orthogonal to the anchor word.
    pub fn selected(&self) -> &BitMatrix {
        &self.selected
    }

    /// Scanned rows not orthogonal to the anchor word.
    pub fn rejected(&self) -> &BitMatrix {
        &self.rejected
    }

    pub fn selected_indices(&self) -> &[usize] {
        &self.selected_indices
    }

    pub fn rejected_indices(&self) -> &[usize] {
        &self.rejected_indices
    }

    /// Base-matrix rows the early-stopped scan never looked at; empty for
    /// a full scan.
    pub fn unscanned_indices(&self) -> &[usize] {
        &self.unscanned_indices
    }

    /// Code length.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Code dimension n - rank(selected).
    pub fn k(&self) -> usize {
        self.n - self.rank_selected
    }

    pub fn rank_selected(&self) -> usize {
        self.rank_selected
    }

    /// Rank of the base matrix this result was built from.
    pub fn rank_base(&self) -> usize {
        self.rank_base
    }

    /// For the early-stopped variant: whether the requested dimension was
    /// reached. `None` for full scans.
    pub fn target_reached(&self) -> Option<bool> {
        self.target.map(|k_target| self.k() == k_target)
    }
}

/// Selects every base-matrix row orthogonal to `r`, in base order.
pub fn select_orthogonal(bundle: &BaseMatrixBundle, r: &BitVector) -> Result<AnchorResult> {
    select_impl(bundle, r, None)
}

/// Scans rows in base order, appending orthogonal rows only while the
/// current dimension n - rank exceeds `k_target`, and stops as soon as the
/// target is reached. If the full scan cannot reach it, the result equals
/// [`select_orthogonal`]'s and `target_reached()` returns `Some(false)`.
pub fn select_until_rank(
    bundle: &BaseMatrixBundle,
    r: &BitVector,
    k_target: usize,
) -> Result<AnchorResult> {
    select_impl(bundle, r, Some(k_target))
}

fn select_impl(
    bundle: &BaseMatrixBundle,
    r: &BitVector,
    target: Option<usize>,
) -> Result<AnchorResult> {
    let matrix = bundle.matrix();
    let n = matrix.ncols();
    if r.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: r.len(),
        });
    }
    if let Some(k_target) = target {
        if k_target > n {
            return Err(Error::BadKTarget { k_target, n });
        }
    }

    let mut selected = BitMatrix::new(n);
    let mut rejected = BitMatrix::new(n);
    let mut selected_indices = Vec::new();
    let mut rejected_indices = Vec::new();
    let mut unscanned_indices = Vec::new();
    let mut basis = RowBasis::new(n);
    for (i, row) in matrix.rows().enumerate() {
        if target.is_some_and(|k_target| n - basis.rank() == k_target) {
            unscanned_indices.extend(i..matrix.nrows());
            break;
        }
        if row.dot(r) {
            rejected.push_row(row.clone())?;
            rejected_indices.push(i);
        } else {
            selected.push_row(row.clone())?;
            selected_indices.push(i);
            basis.insert(row);
        }
    }

    Ok(AnchorResult {
        selected,
        rejected,
        selected_indices,
        rejected_indices,
        unscanned_indices,
        n,
        rank_selected: basis.rank(),
        rank_base: bundle.rank(),
        target,
    })
}

/// Success predicate: the selection lost at most one unit of rank against
/// the base matrix.
pub fn construction_success(res: &AnchorResult, bundle: &BaseMatrixBundle) -> bool {
    res.rank_selected() + 1 >= bundle.rank()
}
