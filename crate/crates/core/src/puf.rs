//! Helper-data schemes over simulated PUF responses.
//!
//! Two ways to reproduce a noisy secret exactly:
//!
//! * Code-Offset: a fixed code, helper data h = c ⊕ r for a random
//!   codeword c; reproduction decodes r′ ⊕ h and re-adds the offset.
//! * Codeword anchor: the code is constructed around r so that r itself
//!   is a codeword; the code description is the only stored artifact and
//!   reproduction is a bare decode of r′.
//!
//! Reproduction failure is always surfaced; a non-converged decode never
//! leaks a wrong key silently.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::anchor::{select_orthogonal, select_until_rank, AnchorResult};
use crate::decode::{bit_flip_decode, ThresholdPolicy, DEFAULT_MAX_ITERS};
use crate::entropy::{certify, EntropyCertificate};
use crate::error::{Error, Result};
use crate::geometry::BaseMatrixBundle;
use crate::gf2::{BitMatrix, BitVector};
use crate::rng::trial_rng;

/// Memoryless binary symmetric channel between extraction and
/// re-extraction.
#[derive(Clone, Copy, Debug)]
pub struct ChannelModel {
    p: f64,
    seed: u64,
}

impl ChannelModel {
    pub fn new(p: f64, seed: u64) -> Result<Self> {
        if !(0.0..0.5).contains(&p) {
            return Err(Error::BadCrossoverProbability(p));
        }
        Ok(ChannelModel { p, seed })
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

/// Uniform response of length n, deterministic in the seed.
pub fn sample_response(n: usize, seed: u64) -> BitVector {
    assert!(n >= 1, "responses carry at least one bit");
    BitVector::random(n, &mut trial_rng(seed, 0))
}

/// One noisy re-extraction r ⊕ e with e ~ Bernoulli(p) per bit,
/// deterministic in the channel.
pub fn reextract(r: &BitVector, channel: &ChannelModel) -> BitVector {
    let mut rng = trial_rng(channel.seed, 1);
    let mut out = r.clone();
    for i in 0..out.len() {
        if rng.random::<f64>() < channel.p {
            out.flip(i);
        }
    }
    out
}

/// Public helper data. The enum split is the storage story of the two
/// schemes: only Code-Offset carries a word alongside the code.
#[derive(Clone, Debug)]
pub enum HelperData {
    CodeOffset { offset: BitVector, code: BitMatrix },
    CodewordAnchor { code: BitMatrix },
}

impl HelperData {
    pub fn code(&self) -> &BitMatrix {
        match self {
            HelperData::CodeOffset { code, .. } => code,
            HelperData::CodewordAnchor { code } => code,
        }
    }
}

/// Enrolls a response under the Code-Offset scheme: draws a uniform
/// codeword c of the given code and stores h = c ⊕ r.
pub fn code_offset_init(r: &BitVector, code: &BitMatrix, seed: u64) -> Result<HelperData> {
    if r.len() != code.ncols() {
        return Err(Error::DimensionMismatch {
            expected: code.ncols(),
            got: r.len(),
        });
    }
    let generator = code.kernel_basis();
    if generator.is_empty() {
        return Err(Error::ZeroDimensionalCode);
    }
    let mut rng = trial_rng(seed, 2);
    let mut c = BitVector::zeros(code.ncols());
    for g in &generator {
        if rng.random::<bool>() {
            c.xor_assign(g);
        }
    }
    Ok(HelperData::CodeOffset {
        offset: c.xor(r),
        code: code.clone(),
    })
}

/// Reproduces the enrolled response from a re-extraction: shifts by the
/// offset, decodes, shifts back.
pub fn code_offset_reproduce(r_prime: &BitVector, helper: &HelperData) -> Result<BitVector> {
    let HelperData::CodeOffset { offset, code } = helper else {
        return Err(Error::HelperVariantMismatch {
            expected: "code-offset",
        });
    };
    if r_prime.len() != code.ncols() {
        return Err(Error::DimensionMismatch {
            expected: code.ncols(),
            got: r_prime.len(),
        });
    }
    let y = r_prime.xor(offset);
    let out = bit_flip_decode(code, &y, DEFAULT_MAX_ITERS, ThresholdPolicy::default())?;
    if !out.converged {
        return Err(Error::DecodeFailed {
            iterations: out.iterations,
        });
    }
    Ok(out.word.xor(offset))
}

/// How the anchored scheme selects rows during enrollment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SelectionPolicy {
    /// Keep every orthogonal row; redundant checks improve decoding.
    Full,
    /// Stop once the code dimension reaches the given target.
    UntilRank(usize),
}

/// Enrolls a response under the anchored scheme: constructs a code with
/// r as a codeword and certifies the attacker uncertainty. The helper
/// data is the decoding matrix alone.
pub fn anchor_init(
    r: &BitVector,
    bundle: &BaseMatrixBundle,
    policy: SelectionPolicy,
) -> Result<(HelperData, EntropyCertificate)> {
    let res: AnchorResult = match policy {
        SelectionPolicy::Full => select_orthogonal(bundle, r)?,
        SelectionPolicy::UntilRank(k_target) => select_until_rank(bundle, r, k_target)?,
    };
    let cert = certify(&res);
    let helper = HelperData::CodewordAnchor {
        code: res.selected().clone(),
    };
    Ok((helper, cert))
}

/// Reproduces an anchored response: a bare decode of the re-extraction,
/// with no pre-processing step.
pub fn anchor_reproduce(r_prime: &BitVector, helper: &HelperData) -> Result<BitVector> {
    let HelperData::CodewordAnchor { code } = helper else {
        return Err(Error::HelperVariantMismatch {
            expected: "codeword-anchor",
        });
    };
    let out = bit_flip_decode(code, r_prime, DEFAULT_MAX_ITERS, ThresholdPolicy::default())?;
    if !out.converged {
        return Err(Error::DecodeFailed {
            iterations: out.iterations,
        });
    }
    Ok(out.word)
}

/// Which of the two helper-data schemes a record or experiment uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    CodeOffset,
    CodewordAnchor,
}

impl Scheme {
    pub fn name(&self) -> &'static str {
        match self {
            Scheme::CodeOffset => "code-offset",
            Scheme::CodewordAnchor => "codeword-anchor",
        }
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "code-offset" => Ok(Scheme::CodeOffset),
            "codeword-anchor" => Ok(Scheme::CodewordAnchor),
            other => Err(Error::BadReport(format!("unknown scheme {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScreenOutcome {
    Accept,
    Reject,
}

/// Enrollment-time screening: a device is rejected when its certified
/// uncertainty floor is below `k_min` or its response is degenerate
/// (all-zero or all-one, carrying no secret).
pub fn screen_device(
    cert: &EntropyCertificate,
    k_min: usize,
    response: &BitVector,
) -> ScreenOutcome {
    let w = response.weight();
    if cert.lower_bound < k_min || w == 0 || w == response.len() {
        ScreenOutcome::Reject
    } else {
        ScreenOutcome::Accept
    }
}

/// Persisted enrollment: everything a verifier stores per device. The
/// decoding matrix is inlined as sparse row supports; the offset field
/// exists only for Code-Offset records, which is the anchored scheme's
/// storage advantage in assertable form.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DeviceRecord {
    pub n: usize,
    pub scheme: Scheme,
    /// 0-based column supports per decoding-matrix row.
    pub code_rows: Vec<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub offset_hex: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub certificate: Option<EntropyCertificate>,
    pub seed: u64,
}

impl DeviceRecord {
    pub fn new(
        helper: &HelperData,
        certificate: Option<EntropyCertificate>,
        seed: u64,
    ) -> DeviceRecord {
        let code = helper.code();
        let code_rows = code
            .rows()
            .map(|r| r.ones().map(|i| i as u32).collect())
            .collect();
        match helper {
            HelperData::CodeOffset { offset, .. } => DeviceRecord {
                n: code.ncols(),
                scheme: Scheme::CodeOffset,
                code_rows,
                offset_hex: Some(offset.to_hex()),
                certificate,
                seed,
            },
            HelperData::CodewordAnchor { .. } => DeviceRecord {
                n: code.ncols(),
                scheme: Scheme::CodewordAnchor,
                code_rows,
                offset_hex: None,
                certificate,
                seed,
            },
        }
    }

    /// Rebuilds the in-memory helper data.
    pub fn helper(&self) -> Result<HelperData> {
        if self.n == 0 {
            return Err(Error::BadReport("device record has n = 0".into()));
        }
        let mut rows = Vec::with_capacity(self.code_rows.len());
        for support in &self.code_rows {
            let mut row = BitVector::zeros(self.n);
            for &j in support {
                if j as usize >= self.n {
                    return Err(Error::BadReport(format!(
                        "code row index {j} out of range for n = {}",
                        self.n
                    )));
                }
                row.set(j as usize, true);
            }
            rows.push(row);
        }
        let code = BitMatrix::from_rows(rows, self.n)?;
        match self.scheme {
            Scheme::CodeOffset => {
                let hex = self.offset_hex.as_ref().ok_or_else(|| {
                    Error::BadReport("code-offset record lacks an offset".into())
                })?;
                Ok(HelperData::CodeOffset {
                    offset: BitVector::from_hex(hex, self.n)?,
                    code,
                })
            }
            Scheme::CodewordAnchor => Ok(HelperData::CodewordAnchor { code }),
        }
    }
}
