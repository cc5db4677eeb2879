//! Sparse base decoding matrices from finite-geometry incidence.
//!
//! Rows are incidence vectors of lines over the points of a Euclidean
//! geometry EG(m, 2^s) or a projective geometry PG(m, 2^s). Stacking
//! several constructions over the same point count yields a base matrix
//! whose row count far exceeds its rank, which is what the row-selection
//! stage feeds on.
//!
//! Canonical orderings, so that equal specs yield identical matrices:
//!
//! * An EG point is a vector in GF(2^s)^m encoded as an integer with
//!   coordinate j occupying bits [j*s, (j+1)*s); columns are ascending
//!   codes (type1 drops the origin, so column = code - 1).
//! * A PG point is a rank-1 subspace of GF(2^s)^(m+1); its canonical
//!   code is the smallest encoding among its nonzero members, and
//!   columns are ascending canonical codes.
//! * EG lines are emitted grouped by direction (normalized direction
//!   vectors ascending), then by smallest member point; PG lines by
//!   pivot-column pair of their reduced basis, then by the free
//!   coefficients.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::gf2::{BitMatrix, BitVector};

/// Default cap on the number of geometry points, guarding against
/// accidentally huge parameter choices.
pub const DEFAULT_POINT_CEILING: usize = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "EG")]
    Eg,
    #[serde(rename = "PG")]
    Pg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GeometrySpec {
    pub family: Family,
    /// Geometry dimension, at least 2.
    pub m: u32,
    /// Field exponent: coordinates range over GF(2^s).
    pub s: u32,
    /// EG only: drop the origin point and all lines through the origin.
    pub type1: bool,
}

impl GeometrySpec {
    pub fn eg(m: u32, s: u32, type1: bool) -> Self {
        GeometrySpec {
            family: Family::Eg,
            m,
            s,
            type1,
        }
    }

    pub fn pg(m: u32, s: u32) -> Self {
        GeometrySpec {
            family: Family::Pg,
            m,
            s,
            type1: false,
        }
    }

    /// Number of points (= columns of the incidence matrix), saturating
    /// at usize::MAX for parameters far beyond any ceiling.
    pub fn points(&self) -> usize {
        let q = 1u128 << self.s;
        let count = match self.family {
            Family::Eg => q
                .checked_pow(self.m)
                .map(|all| if self.type1 { all - 1 } else { all }),
            Family::Pg => self
                .m
                .checked_add(1)
                .and_then(|e| q.checked_pow(e))
                .map(|all| (all - 1) / (q - 1)),
        };
        count.map_or(usize::MAX, |c| c.min(usize::MAX as u128) as usize)
    }
}

impl std::fmt::Display for GeometrySpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.family {
            Family::Eg => write!(
                f,
                "EG({},2^{}){}",
                self.m,
                self.s,
                if self.type1 { " type1" } else { "" }
            ),
            Family::Pg => write!(f, "PG({},2^{})", self.m, self.s),
        }
    }
}

fn validate(spec: &GeometrySpec, expected: Family) -> Result<()> {
    if spec.family != expected {
        return Err(Error::BadGeometryParams(format!(
            "{spec} passed to the {} generator",
            match expected {
                Family::Eg => "EG",
                Family::Pg => "PG",
            }
        )));
    }
    if spec.m < 2 {
        return Err(Error::BadGeometryParams(format!(
            "geometry dimension m must be at least 2, got {}",
            spec.m
        )));
    }
    if spec.family == Family::Pg && spec.type1 {
        return Err(Error::BadGeometryParams(
            "type1 applies to EG only".into(),
        ));
    }
    Ok(())
}

/// Incidence matrix of the 1-flats of EG(m, 2^s) with the default point
/// ceiling.
pub fn eg_lines(spec: &GeometrySpec) -> Result<BitMatrix> {
    eg_lines_with_ceiling(spec, DEFAULT_POINT_CEILING)
}

/// Every 1-flat is a coset {a + t*b : t in GF(q)} of a direction b != 0.
/// Directions are enumerated once per projective class (normalized so the
/// lowest-index nonzero coordinate is 1), and the cosets of each direction
/// are swept in ascending order of their smallest member, so every line
/// appears exactly once.
pub fn eg_lines_with_ceiling(spec: &GeometrySpec, ceiling: usize) -> Result<BitMatrix> {
    validate(spec, Family::Eg)?;
    let field = Field::new(spec.s)?;
    let q = field.q();
    let total = checked_points(q, spec.m, ceiling)?;
    let ncols = if spec.type1 { total - 1 } else { total };
    let m = spec.m as usize;
    let s = spec.s;

    let mut rows = Vec::new();
    let mut visited = vec![false; total];
    let mut offsets = vec![0usize; q];
    for b in 1..total {
        if !is_normalized(b, m, s) {
            continue;
        }
        for (t, off) in offsets.iter_mut().enumerate() {
            *off = scale_vector(t, b, m, s, &field);
        }
        visited.iter_mut().for_each(|v| *v = false);
        for a in 0..total {
            if visited[a] {
                continue;
            }
            for &off in &offsets {
                visited[a ^ off] = true;
            }
            // The coset containing the origin is swept at a = 0 because 0
            // is minimal; type1 drops exactly those lines.
            if spec.type1 && a == 0 {
                continue;
            }
            let mut row = BitVector::zeros(ncols);
            for &off in &offsets {
                let point = a ^ off;
                row.set(if spec.type1 { point - 1 } else { point }, true);
            }
            rows.push(row);
        }
    }
    BitMatrix::from_rows(rows, ncols)
}

/// Incidence matrix of the lines of PG(m, 2^s) with the default point
/// ceiling.
pub fn pg_lines(spec: &GeometrySpec) -> Result<BitMatrix> {
    pg_lines_with_ceiling(spec, DEFAULT_POINT_CEILING)
}

/// Lines are the 2-dimensional subspaces of GF(q)^(m+1). Each subspace has
/// a unique reduced-echelon basis (u, v) with pivot columns j1 < j2, so
/// enumerating pivot pairs and free coefficients emits every line exactly
/// once; its q + 1 points are [v] and [u + t*v] for t in GF(q).
pub fn pg_lines_with_ceiling(spec: &GeometrySpec, ceiling: usize) -> Result<BitMatrix> {
    validate(spec, Family::Pg)?;
    let field = Field::new(spec.s)?;
    let q = field.q();
    let dim = spec.m as usize + 1;
    let npoints = spec.points();
    if npoints > ceiling {
        return Err(Error::PointCeilingExceeded {
            points: npoints,
            ceiling,
        });
    }
    let s = spec.s;
    let total = q.pow(dim as u32);

    // Point classes: sweeping codes ascending makes the first member of
    // each class its (minimal) canonical representative.
    const UNSET: u32 = u32::MAX;
    let mut col_of_code = vec![UNSET; total];
    let mut npoints_found = 0u32;
    for c in 1..total {
        if col_of_code[c] != UNSET {
            continue;
        }
        for t in 1..q {
            col_of_code[scale_vector(t, c, dim, s, &field)] = npoints_found;
        }
        npoints_found += 1;
    }
    debug_assert_eq!(npoints_found as usize, npoints);

    let mut rows = Vec::new();
    let mut free_positions = Vec::new();
    for j1 in 0..dim {
        for j2 in j1 + 1..dim {
            // Free coordinates of the echelon basis: row u has pivot j1,
            // zeros before it and at j2; row v has pivot j2, zeros before.
            free_positions.clear();
            free_positions.extend((j1 + 1..dim).filter(|&j| j != j2).map(|j| (0usize, j)));
            free_positions.extend((j2 + 1..dim).map(|j| (1usize, j)));
            let mut counter = vec![0usize; free_positions.len()];
            loop {
                let mut u = 1usize << (s * j1 as u32);
                let mut v = 1usize << (s * j2 as u32);
                for (digit, &(which, j)) in counter.iter().zip(&free_positions) {
                    let shifted = digit << (s * j as u32);
                    if which == 0 {
                        u |= shifted;
                    } else {
                        v |= shifted;
                    }
                }
                let mut row = BitVector::zeros(npoints);
                row.set(col_of_code[v] as usize, true);
                for t in 0..q {
                    let point = u ^ scale_vector(t, v, dim, s, &field);
                    row.set(col_of_code[point] as usize, true);
                }
                rows.push(row);

                // Mixed-radix increment over the free coefficients.
                let mut i = 0;
                loop {
                    if i == counter.len() {
                        break;
                    }
                    counter[i] += 1;
                    if counter[i] < q {
                        break;
                    }
                    counter[i] = 0;
                    i += 1;
                }
                if i == counter.len() {
                    break;
                }
            }
        }
    }
    BitMatrix::from_rows(rows, npoints)
}

/// Generates the incidence matrix for either family.
pub fn generate(spec: &GeometrySpec) -> Result<BitMatrix> {
    generate_with_ceiling(spec, DEFAULT_POINT_CEILING)
}

pub fn generate_with_ceiling(spec: &GeometrySpec, ceiling: usize) -> Result<BitMatrix> {
    match spec.family {
        Family::Eg => eg_lines_with_ceiling(spec, ceiling),
        Family::Pg => pg_lines_with_ceiling(spec, ceiling),
    }
}

fn checked_points(q: usize, m: u32, ceiling: usize) -> Result<usize> {
    let total = (q as u128).checked_pow(m).unwrap_or(u128::MAX);
    if total > ceiling as u128 {
        return Err(Error::PointCeilingExceeded {
            points: total.min(usize::MAX as u128) as usize,
            ceiling,
        });
    }
    Ok(total as usize)
}

/// True iff the lowest-index nonzero coordinate of the encoded vector is 1.
fn is_normalized(code: usize, ncoords: usize, s: u32) -> bool {
    let mask = (1usize << s) - 1;
    for j in 0..ncoords {
        let coord = (code >> (s * j as u32)) & mask;
        if coord != 0 {
            return coord == 1;
        }
    }
    false
}

/// Componentwise scalar multiple t * v of an encoded vector.
fn scale_vector(t: usize, code: usize, ncoords: usize, s: u32, field: &Field) -> usize {
    let mask = (1usize << s) - 1;
    let mut out = 0usize;
    for j in 0..ncoords {
        let coord = (code >> (s * j as u32)) & mask;
        out |= field.mul(t, coord) << (s * j as u32);
    }
    out
}

/// Where a block of stacked rows came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceKind {
    Geometry(GeometrySpec),
    /// A matrix loaded from a file or built by hand.
    External { label: String },
}

impl std::fmt::Display for SourceKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SourceKind::Geometry(spec) => spec.fmt(f),
            SourceKind::External { label } => f.write_str(label),
        }
    }
}

/// Provenance of rows [start, end) of a stacked matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleSource {
    pub origin: SourceKind,
    pub start: usize,
    pub end: usize,
}

/// A stacked base matrix with provenance and cached rank.
///
/// Rows are deduplicated across parts (first occurrence wins), every row
/// is nonzero, and the source ranges partition the surviving rows in part
/// order.
#[derive(Clone, Debug)]
pub struct BaseMatrixBundle {
    matrix: BitMatrix,
    sources: Vec<BundleSource>,
    rank: usize,
}

impl BaseMatrixBundle {
    pub fn matrix(&self) -> &BitMatrix {
        &self.matrix
    }

    pub fn sources(&self) -> &[BundleSource] {
        &self.sources
    }

    /// Cached rank of the stacked matrix.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn nrows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.matrix.ncols()
    }

    /// Wraps an externally provided matrix as a single-source bundle.
    pub fn from_matrix(label: &str, matrix: BitMatrix) -> Result<Self> {
        stack(vec![(
            SourceKind::External {
                label: label.to_string(),
            },
            matrix,
        )])
    }
}

/// Stacks parts into one base matrix, removing exact duplicate rows
/// (first occurrence kept) and rejecting zero rows.
pub fn stack(parts: Vec<(SourceKind, BitMatrix)>) -> Result<BaseMatrixBundle> {
    let Some(ncols) = parts.first().map(|(_, m)| m.ncols()) else {
        return Err(Error::BadGeometryParams(
            "stack requires at least one part".into(),
        ));
    };
    let mut matrix = BitMatrix::new(ncols);
    let mut sources = Vec::with_capacity(parts.len());
    let mut seen = std::collections::HashSet::new();
    for (index, (origin, part)) in parts.into_iter().enumerate() {
        if part.ncols() != ncols {
            return Err(Error::ColumnCountMismatch {
                part: index,
                expected: ncols,
                got: part.ncols(),
            });
        }
        let start = matrix.nrows();
        for (i, row) in part.rows().enumerate() {
            if row.is_zero() {
                return Err(Error::ZeroRow { part: index, row: i });
            }
            if seen.insert(row.clone()) {
                matrix.push_row(row.clone())?;
            }
        }
        sources.push(BundleSource {
            origin,
            start,
            end: matrix.nrows(),
        });
    }
    let rank = matrix.rank();
    Ok(BaseMatrixBundle {
        matrix,
        sources,
        rank,
    })
}

/// Generates each spec and stacks the results.
pub fn bundle_from_specs(specs: &[GeometrySpec]) -> Result<BaseMatrixBundle> {
    bundle_from_specs_with_ceiling(specs, DEFAULT_POINT_CEILING)
}

pub fn bundle_from_specs_with_ceiling(
    specs: &[GeometrySpec],
    ceiling: usize,
) -> Result<BaseMatrixBundle> {
    let parts = specs
        .iter()
        .map(|spec| Ok((SourceKind::Geometry(*spec), generate_with_ceiling(spec, ceiling)?)))
        .collect::<Result<Vec<_>>>()?;
    stack(parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    /// Plain Vec<bool> elimination, independent of the packed RowBasis.
    fn naive_rank(m: &BitMatrix) -> usize {
        let mut rows: Vec<Vec<bool>> = m
            .rows()
            .map(|r| (0..m.ncols()).map(|j| r.get(j)).collect())
            .collect();
        let mut rank = 0;
        for col in 0..m.ncols() {
            let Some(pivot) = (rank..rows.len()).find(|&i| rows[i][col]) else {
                continue;
            };
            rows.swap(rank, pivot);
            for i in 0..rows.len() {
                if i != rank && rows[i][col] {
                    for j in 0..m.ncols() {
                        let v = rows[rank][j];
                        rows[i][j] ^= v;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    fn column_weight(m: &BitMatrix, col: usize) -> usize {
        m.rows().filter(|r| r.get(col)).count()
    }

    fn row_supports(m: &BitMatrix) -> HashSet<Vec<usize>> {
        m.rows().map(|r| r.ones().collect()).collect()
    }

    /// Brute-force EG line set: all (a, b) pairs, deduplicated point sets.
    fn eg_lines_by_pair_enumeration(m: u32, s: u32, type1: bool) -> HashSet<Vec<usize>> {
        let field = Field::new(s).unwrap();
        let q = field.q();
        let total = q.pow(m);
        let mut lines = HashSet::new();
        for a in 0..total {
            for b in 1..total {
                let mut points: Vec<usize> = (0..q)
                    .map(|t| a ^ scale_vector(t, b, m as usize, s, &field))
                    .collect();
                points.sort_unstable();
                points.dedup();
                assert_eq!(points.len(), q);
                if type1 {
                    if points[0] == 0 {
                        continue;
                    }
                    for p in points.iter_mut() {
                        *p -= 1;
                    }
                }
                lines.insert(points);
            }
        }
        lines
    }

    #[test]
    fn eg_2_2_type1_shape() {
        let m = eg_lines(&GeometrySpec::eg(2, 1, true)).unwrap();
        assert_eq!((m.nrows(), m.ncols()), (3, 3));
        for row in m.rows() {
            assert_eq!(row.weight(), 2);
        }
        for col in 0..3 {
            assert_eq!(column_weight(&m, col), 2);
        }
    }

    #[test]
    fn eg_2_4_type1_shape_and_rank() {
        let m = eg_lines(&GeometrySpec::eg(2, 2, true)).unwrap();
        assert_eq!((m.nrows(), m.ncols()), (15, 15));
        for row in m.rows() {
            assert_eq!(row.weight(), 4);
        }
        for col in 0..15 {
            assert_eq!(column_weight(&m, col), 4);
        }
        assert_eq!(m.rank(), 8);
        assert_eq!(naive_rank(&m), 8);
    }

    #[test]
    fn eg_3_4_type1_shape() {
        // Full line count q^(m-1) (q^m - 1)/(q - 1) = 16*63/3 = 336,
        // minus (q^m - 1)/(q - 1) = 21 lines through the origin.
        let m = eg_lines(&GeometrySpec::eg(3, 2, true)).unwrap();
        assert_eq!((m.nrows(), m.ncols()), (315, 63));
        for row in m.rows() {
            assert_eq!(row.weight(), 4);
        }
    }

    #[test]
    fn eg_matches_pair_enumeration_oracle() {
        for (m, s, type1) in [(2, 1, true), (2, 1, false), (2, 2, true), (2, 2, false), (3, 1, true)] {
            let fast = eg_lines(&GeometrySpec::eg(m, s, type1)).unwrap();
            let fast_set = row_supports(&fast);
            assert_eq!(fast_set.len(), fast.nrows(), "duplicate rows at EG({m},2^{s})");
            assert_eq!(fast_set, eg_lines_by_pair_enumeration(m, s, type1));
        }
    }

    #[test]
    fn eg_type1_column_weight_formula() {
        for (m, s) in [(2u32, 1u32), (2, 2), (3, 1), (2, 3)] {
            let mat = eg_lines(&GeometrySpec::eg(m, s, true)).unwrap();
            let q = 1usize << s;
            let expected = (q.pow(m) - 1) / (q - 1) - 1;
            for col in 0..mat.ncols() {
                assert_eq!(column_weight(&mat, col), expected);
            }
        }
    }

    #[test]
    fn eg_type1_point_pairs_share_at_most_one_line() {
        // Two distinct points lie on exactly one affine line; type1 drops
        // it exactly when the two points are collinear with the origin,
        // so shared-line counts are 1 in general and 0 for scalar pairs.
        // Over GF(2) no two distinct nonzero points are scalar multiples,
        // so there the count is always 1.
        for (m, s) in [(2u32, 1u32), (3, 1), (2, 2), (2, 3)] {
            let field = Field::new(s).unwrap();
            let q = field.q();
            let mat = eg_lines(&GeometrySpec::eg(m, s, true)).unwrap();
            assert!(mat.ncols() <= 64);
            for i in 0..mat.ncols() {
                for j in i + 1..mat.ncols() {
                    let shared = mat
                        .rows()
                        .filter(|r| r.get(i) && r.get(j))
                        .count();
                    let scalar_pair = (1..q).any(|t| {
                        scale_vector(t, i + 1, m as usize, s, &field) == j + 1
                    });
                    assert_eq!(shared, if scalar_pair { 0 } else { 1 });
                    if s == 1 {
                        assert_eq!(shared, 1);
                    }
                }
            }
        }
    }

    #[test]
    fn pg_2_2_is_fano_plane() {
        let m = pg_lines(&GeometrySpec::pg(2, 1)).unwrap();
        assert_eq!((m.nrows(), m.ncols()), (7, 7));
        for row in m.rows() {
            assert_eq!(row.weight(), 3);
        }
        for col in 0..7 {
            assert_eq!(column_weight(&m, col), 3);
        }
        assert_eq!(m.rank(), 4);
        assert_eq!(naive_rank(&m), 4);
    }

    #[test]
    fn pg_2_4_shape() {
        let m = pg_lines(&GeometrySpec::pg(2, 2)).unwrap();
        assert_eq!((m.nrows(), m.ncols()), (21, 21));
        for row in m.rows() {
            assert_eq!(row.weight(), 5);
        }
    }

    #[test]
    fn pg_5_2_shape() {
        // Gaussian binomial [6 choose 2]_2 = 63*31/3 = 651 lines over 63
        // points, row weight 3.
        let m = pg_lines(&GeometrySpec::pg(5, 1)).unwrap();
        assert_eq!((m.nrows(), m.ncols()), (651, 63));
        for row in m.rows() {
            assert_eq!(row.weight(), 3);
        }
    }

    #[test]
    fn pg_line_counts_match_gaussian_binomial() {
        for (m, s) in [(2u32, 1u32), (2, 2), (3, 1), (3, 2), (4, 1), (2, 3)] {
            let q = 1u128 << s;
            let dim = m + 1;
            let expected = (q.pow(dim) - 1) * (q.pow(dim - 1) - 1) / ((q * q - 1) * (q - 1));
            let mat = pg_lines(&GeometrySpec::pg(m, s)).unwrap();
            assert_eq!(mat.nrows() as u128, expected, "PG({m},2^{s})");
            let supports = row_supports(&mat);
            assert_eq!(supports.len(), mat.nrows(), "duplicate lines at PG({m},2^{s})");
            for row in mat.rows() {
                assert_eq!(row.weight(), (q + 1) as usize);
            }
        }
    }

    #[test]
    fn pg_column_pairs_share_exactly_one_line() {
        for (m, s) in [(2u32, 1u32), (2, 2), (3, 1)] {
            let mat = pg_lines(&GeometrySpec::pg(m, s)).unwrap();
            for i in 0..mat.ncols() {
                for j in i + 1..mat.ncols() {
                    let shared = mat.rows().filter(|r| r.get(i) && r.get(j)).count();
                    assert_eq!(shared, 1, "PG({m},2^{s}) columns {i},{j}");
                }
            }
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let spec = GeometrySpec::eg(3, 2, true);
        assert_eq!(eg_lines(&spec).unwrap(), eg_lines(&spec).unwrap());
        let spec = GeometrySpec::pg(2, 2);
        assert_eq!(pg_lines(&spec).unwrap(), pg_lines(&spec).unwrap());
    }

    #[test]
    fn ceiling_guard_rejects_oversized_parameters() {
        let err = eg_lines(&GeometrySpec::eg(5, 4, true)).unwrap_err();
        assert!(matches!(err, Error::PointCeilingExceeded { .. }));
        let err = pg_lines(&GeometrySpec::pg(2, 8)).unwrap_err();
        assert!(matches!(err, Error::PointCeilingExceeded { .. }));
        // The ceiling is a parameter: 16 points pass at 16, fail at 8.
        let full = GeometrySpec::eg(2, 2, false);
        assert!(eg_lines_with_ceiling(&full, 16).is_ok());
        assert!(matches!(
            eg_lines_with_ceiling(&full, 8),
            Err(Error::PointCeilingExceeded { points: 16, ceiling: 8 })
        ));
        // Degenerate exponents never overflow the guard math.
        assert!(eg_lines(&GeometrySpec::eg(u32::MAX, 8, true)).is_err());
        assert!(pg_lines(&GeometrySpec::pg(u32::MAX, 8)).is_err());
    }

    #[test]
    fn parameter_validation() {
        assert!(eg_lines(&GeometrySpec::eg(1, 2, true)).is_err());
        assert!(eg_lines(&GeometrySpec::pg(2, 2)).is_err());
        assert!(pg_lines(&GeometrySpec::eg(2, 2, false)).is_err());
        assert!(pg_lines(&GeometrySpec {
            family: Family::Pg,
            m: 2,
            s: 1,
            type1: true,
        })
        .is_err());
        assert!(eg_lines(&GeometrySpec::eg(2, 0, true)).is_err());
    }

    #[test]
    fn stack_single_part_is_identity() {
        let m = eg_lines(&GeometrySpec::eg(2, 2, true)).unwrap();
        let bundle = stack(vec![(
            SourceKind::External { label: "m".into() },
            m.clone(),
        )])
        .unwrap();
        assert_eq!(bundle.matrix(), &m);
        assert_eq!(bundle.sources().len(), 1);
        assert_eq!((bundle.sources()[0].start, bundle.sources()[0].end), (0, 15));
        assert_eq!(bundle.rank(), 8);
    }

    #[test]
    fn stack_removes_duplicates() {
        let m = eg_lines(&GeometrySpec::eg(2, 2, true)).unwrap();
        let bundle = stack(vec![
            (SourceKind::External { label: "a".into() }, m.clone()),
            (SourceKind::External { label: "b".into() }, m.clone()),
        ])
        .unwrap();
        assert_eq!(bundle.matrix(), &m);
        // The second source contributes an empty row range.
        assert_eq!(bundle.sources()[1].start, bundle.sources()[1].end);
    }

    #[test]
    fn stack_rejects_mismatched_columns_and_zero_rows() {
        let a = eg_lines(&GeometrySpec::eg(2, 1, true)).unwrap();
        let b = eg_lines(&GeometrySpec::eg(2, 2, true)).unwrap();
        let err = stack(vec![
            (SourceKind::External { label: "a".into() }, a.clone()),
            (SourceKind::External { label: "b".into() }, b),
        ])
        .unwrap_err();
        assert!(matches!(err, Error::ColumnCountMismatch { part: 1, .. }));

        let mut with_zero = a;
        with_zero.push_row(BitVector::zeros(3)).unwrap();
        let err = stack(vec![(
            SourceKind::External { label: "z".into() },
            with_zero,
        )])
        .unwrap_err();
        assert!(matches!(err, Error::ZeroRow { part: 0, row: 3 }));

        assert!(stack(vec![]).is_err());
    }

    #[test]
    fn stacked_eg_and_pg_over_63_points() {
        let bundle = bundle_from_specs(&[GeometrySpec::eg(3, 2, true), GeometrySpec::pg(5, 1)])
            .unwrap();
        assert_eq!(bundle.ncols(), 63);
        assert_eq!(bundle.nrows(), 315 + 651);
        assert!(bundle.rank() <= 63);
        assert_eq!(bundle.rank(), naive_rank(bundle.matrix()));
        assert!(bundle.nrows() >= 4 * bundle.rank());
    }

    #[test]
    fn eg_full_contains_type1_lines() {
        let full = eg_lines(&GeometrySpec::eg(2, 2, false)).unwrap();
        let type1 = eg_lines(&GeometrySpec::eg(2, 2, true)).unwrap();
        // 20 lines in full EG(2,4); 5 pass through the origin.
        assert_eq!(full.nrows(), 20);
        assert_eq!(type1.nrows(), 15);
        let full_supports = row_supports(&full);
        for row in type1.rows() {
            let shifted: Vec<usize> = row.ones().map(|i| i + 1).collect();
            assert!(full_supports.contains(&shifted));
        }
    }
}
