//! Serializable summary of one anchoring run: the selection outcome, its
//! certificate, and enough indices to rebuild the selected matrix from
//! the base matrix it came from.

use serde::{Deserialize, Serialize};

use crate::anchor::AnchorResult;
use crate::entropy::{certify, EntropyCertificate};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnchorReport {
    pub n: usize,
    pub k: usize,
    pub nrows_base: usize,
    pub rank_base: usize,
    pub nrows_selected: usize,
    pub rank_selected: usize,
    /// Base-matrix row indices, partitioned by what the scan did with
    /// them. Unscanned rows only appear under an early-stopping target.
    pub selected_indices: Vec<usize>,
    pub rejected_indices: Vec<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub unscanned_indices: Vec<usize>,
    pub construction_success: bool,
    pub certificate: EntropyCertificate,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub target_reached: Option<bool>,
}

impl AnchorReport {
    pub fn from_result(res: &AnchorResult) -> Self {
        let certificate = certify(res);
        AnchorReport {
            n: res.n(),
            k: res.k(),
            nrows_base: res.selected_indices().len()
                + res.rejected_indices().len()
                + res.unscanned_indices().len(),
            rank_base: res.rank_base(),
            nrows_selected: res.selected().nrows(),
            rank_selected: res.rank_selected(),
            selected_indices: res.selected_indices().to_vec(),
            rejected_indices: res.rejected_indices().to_vec(),
            unscanned_indices: res.unscanned_indices().to_vec(),
            construction_success: certificate.success,
            certificate,
            target_reached: res.target_reached(),
        }
    }
}
