//! Construction and analysis of binary linear codes that contain a chosen
//! word, built on finite-geometry LDPC decoding matrices.
//!
//! The pipeline, end to end:
//!
//! * [`geometry`] generates sparse line-point incidence matrices from
//!   Euclidean and projective geometries over GF(2^s) and stacks several of
//!   them into a base decoding matrix with many more rows than its rank.
//! * [`anchor`] selects the rows of the base matrix orthogonal to a given
//!   word `r`, yielding a decoding matrix of a code that contains `r`.
//! * [`entropy`] certifies how much uncertainty about `r` remains for
//!   someone who sees the constructed code, via the rank of an augmented
//!   matrix built from both the kept and the discarded rows.
//! * [`decode`] is a hard-decision majority bit-flipping decoder over all
//!   rows of a decoding matrix.
//! * [`puf`] wraps the above into two helper-data schemes for noisy secrets
//!   (code-offset and codeword-anchor) plus device screening.
//! * [`sim`] runs seeded Monte-Carlo experiments over these pieces and emits
//!   machine-readable reports.
//!
//! [`gf2`] supplies the exact bit-packed GF(2) linear algebra everything
//! else relies on; [`alist`] reads and writes the sparse-matrix interchange
//! format used by the command-line tools.

pub mod alist;
pub mod anchor;
pub mod decode;
pub mod entropy;
mod error;
pub(crate) mod field;
pub mod geometry;
pub mod gf2;
pub mod puf;
pub mod report;
pub mod rng;
pub mod sim;

pub use error::{Error, Result};
pub use gf2::{BitMatrix, BitVector};
