//! Independent verification channel: simplicial boundary matrices, integer
//! Smith normal form, Betti numbers and torsion.
//!
//! Betti numbers and torsion coefficients are invariant under
//! simple-homotopy equivalence, so equal profiles across `C_X`, `C_Y`, `B`
//! and `E` are the oracle-level shadow of the collapse certificates. The
//! convention is unreduced homology with the empty face excluded from the
//! chain groups: a point has Betti numbers `(1)`, and the complex `{∅}`
//! has an all-zero profile.
//!
//! Arithmetic is exact: the Smith normal form works over
//! arbitrary-precision integers, so correctness does not depend on entries
//! staying small.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;

pub use num_bigint::BigInt;

use num_traits::{Signed, Zero};

use crate::complex::{Face, SimplicialComplex};
use crate::error::{Error, Result};

/// Dense-matrix cap: the oracle refuses boundary matrices wider than this
/// rather than degrade.
pub const COLUMN_CAP: usize = 5000;

/// The boundary operator `∂_k` of a complex: rows are the `(k-1)`-faces,
/// columns the `k`-faces, both in face order; entries are the alternating
/// signs induced by universe order.
#[derive(Debug, Clone)]
pub struct BoundaryMatrix {
    pub rows: Vec<Face>,
    pub cols: Vec<Face>,
    /// Per column: `(row index, sign)` pairs, `k + 1` of them for a
    /// `k`-face.
    columns: Vec<Vec<(usize, i8)>>,
}

impl BoundaryMatrix {
    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.cols.len()
    }

    pub fn entry(&self, row: usize, col: usize) -> i8 {
        self.columns[col]
            .iter()
            .find(|(r, _)| *r == row)
            .map(|(_, s)| *s)
            .unwrap_or(0)
    }

    pub fn column(&self, col: usize) -> &[(usize, i8)] {
        &self.columns[col]
    }

    /// Checks `∂_k ∘ ∂_{k+1} = 0`, where `self` is `∂_k` and `next` is
    /// `∂_{k+1}`.
    pub fn composes_to_zero_with(&self, next: &BoundaryMatrix) -> bool {
        debug_assert_eq!(self.cols, next.rows);
        for column in &next.columns {
            let mut acc: BTreeMap<usize, i32> = BTreeMap::new();
            for &(mid, s1) in column {
                for &(row, s2) in &self.columns[mid] {
                    *acc.entry(row).or_insert(0) += i32::from(s1) * i32::from(s2);
                }
            }
            if acc.values().any(|&v| v != 0) {
                return false;
            }
        }
        true
    }

    pub fn to_int_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows.len(), self.cols.len());
        for (j, column) in self.columns.iter().enumerate() {
            for &(i, sign) in column {
                m.set(i, j, BigInt::from(sign));
            }
        }
        m
    }
}

/// The boundary matrix `∂_k` of a complex. For `k = 0` the row set is
/// empty: the empty face is not a chain generator.
pub fn boundary_matrix(complex: &SimplicialComplex, k: usize) -> BoundaryMatrix {
    let cols: Vec<Face> =
        complex.faces().iter().copied().filter(|f| f.cardinality() == k + 1).collect();
    let rows: Vec<Face> = if k == 0 {
        Vec::new()
    } else {
        complex.faces().iter().copied().filter(|f| f.cardinality() == k).collect()
    };
    let row_index: BTreeMap<Face, usize> =
        rows.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let columns = cols
        .iter()
        .map(|&sigma| {
            if k == 0 {
                return Vec::new();
            }
            sigma
                .indices()
                .enumerate()
                .map(|(position, v)| {
                    let sign = if position % 2 == 0 { 1 } else { -1 };
                    (row_index[&sigma.without(v)], sign)
                })
                .collect()
        })
        .collect();
    BoundaryMatrix { rows, cols, columns }
}

/// Dense integer matrix over arbitrary-precision integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: alloc::vec![BigInt::zero(); rows * cols] }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let nr = rows.len();
        let nc = rows.first().map_or(0, Vec::len);
        let mut m = IntMatrix::zeros(nr, nc);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), nc, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, BigInt::from(v));
            }
        }
        m
    }

    pub fn row_count(&self) -> usize {
        self.rows
    }

    pub fn col_count(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.data[i * self.cols + j] = value;
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = core::mem::take(&mut self.data[i * self.cols + j]);
            self.data[i * self.cols + j] = -v;
        }
    }

    /// `row_i -= q * row_k`.
    fn row_sub_mul(&mut self, i: usize, k: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let delta = q * self.get(k, j);
            if !delta.is_zero() {
                let v = core::mem::take(&mut self.data[i * self.cols + j]);
                self.data[i * self.cols + j] = v - delta;
            }
        }
    }

    /// `col_j -= q * col_k`.
    fn col_sub_mul(&mut self, j: usize, k: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let delta = q * self.get(i, k);
            if !delta.is_zero() {
                let v = core::mem::take(&mut self.data[i * self.cols + j]);
                self.data[i * self.cols + j] = v - delta;
            }
        }
    }

    /// `row_k += row_i`.
    fn row_add(&mut self, k: usize, i: usize) {
        for j in 0..self.cols {
            let delta = self.get(i, j).clone();
            if !delta.is_zero() {
                let v = core::mem::take(&mut self.data[k * self.cols + j]);
                self.data[k * self.cols + j] = v + delta;
            }
        }
    }
}

/// Result of a Smith normal form computation: the invariant factors
/// `d_1 | d_2 | … | d_r`, all positive, and the rank `r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithNormalForm {
    pub factors: Vec<BigInt>,
    pub rank: usize,
}

/// Diagonalizes an integer matrix by unimodular row and column operations.
///
/// Pivoting rule: smallest nonzero absolute value in the trailing
/// submatrix, ties broken by lowest row then column index. Truncated
/// division leaves remainders strictly smaller than the pivot, so the
/// pivot value strictly decreases until the column and row are clear; a
/// final divisibility pass folds non-divisible entries into the pivot row,
/// which guarantees the divisibility chain of the factors.
///
/// Machine-word arithmetic is used while every operation stays within
/// `i64`; on the first overflow (or oversized input entry) the computation
/// restarts over arbitrary-precision integers, so the result is always
/// exact.
pub fn smith_normal_form(input: &IntMatrix) -> SmithNormalForm {
    match snf_machine_word(input) {
        Some(result) => result,
        None => snf_arbitrary_precision(input),
    }
}

/// The `i64` fast path; `None` on any overflow.
fn snf_machine_word(input: &IntMatrix) -> Option<SmithNormalForm> {
    let (nr, nc) = (input.rows, input.cols);
    let mut a: Vec<i64> = Vec::with_capacity(nr * nc);
    for v in &input.data {
        a.push(i64::try_from(v).ok()?);
    }
    let at = |a: &[i64], i: usize, j: usize| a[i * nc + j];
    let mut k = 0;
    while k < nr.min(nc) {
        // Pivot: smallest nonzero magnitude, ties lowest row then column;
        // a unit entry cannot be beaten, so stop scanning at one.
        let pivot = 'scan: {
            let mut best: Option<(i64, usize, usize)> = None;
            for i in k..nr {
                for j in k..nc {
                    let v = at(&a, i, j).checked_abs()?;
                    if v == 0 {
                        continue;
                    }
                    if v == 1 {
                        break 'scan Some((i, j));
                    }
                    if best.is_none_or(|(m, _, _)| v < m) {
                        best = Some((v, i, j));
                    }
                }
            }
            best.map(|(_, i, j)| (i, j))
        };
        let Some((pi, pj)) = pivot else { break };
        for j in 0..nc {
            a.swap(k * nc + j, pi * nc + j);
        }
        for i in 0..nr {
            a.swap(i * nc + k, i * nc + pj);
        }
        loop {
            if at(&a, k, k) < 0 {
                for j in 0..nc {
                    a[k * nc + j] = a[k * nc + j].checked_neg()?;
                }
            }
            let mut clean = true;
            for i in k + 1..nr {
                let v = at(&a, i, k);
                if v != 0 {
                    let q = v / at(&a, k, k);
                    if q != 0 {
                        for j in k..nc {
                            let delta = q.checked_mul(at(&a, k, j))?;
                            a[i * nc + j] = at(&a, i, j).checked_sub(delta)?;
                        }
                    }
                    if at(&a, i, k) != 0 {
                        clean = false;
                    }
                }
            }
            for j in k + 1..nc {
                let v = at(&a, k, j);
                if v != 0 {
                    let q = v / at(&a, k, k);
                    if q != 0 {
                        for i in k..nr {
                            let delta = q.checked_mul(at(&a, i, k))?;
                            a[i * nc + j] = at(&a, i, j).checked_sub(delta)?;
                        }
                    }
                    if at(&a, k, j) != 0 {
                        clean = false;
                    }
                }
            }
            if clean {
                let pivot_value = at(&a, k, k);
                let mut dirty_row = None;
                'outer: for i in k + 1..nr {
                    for j in k + 1..nc {
                        if at(&a, i, j) % pivot_value != 0 {
                            dirty_row = Some(i);
                            break 'outer;
                        }
                    }
                }
                match dirty_row {
                    Some(i) => {
                        for j in 0..nc {
                            a[k * nc + j] = at(&a, k, j).checked_add(at(&a, i, j))?;
                        }
                    }
                    None => break,
                }
            }
            // Re-select the pivot inside the trailing submatrix.
            let mut best: Option<(i64, usize, usize)> = None;
            'rescan: for i in k..nr {
                for j in k..nc {
                    let v = at(&a, i, j).checked_abs()?;
                    if v == 0 {
                        continue;
                    }
                    if v == 1 {
                        best = Some((1, i, j));
                        break 'rescan;
                    }
                    if best.is_none_or(|(m, _, _)| v < m) {
                        best = Some((v, i, j));
                    }
                }
            }
            let (_, pi, pj) = best?;
            for j in 0..nc {
                a.swap(k * nc + j, pi * nc + j);
            }
            for i in 0..nr {
                a.swap(i * nc + k, i * nc + pj);
            }
        }
        k += 1;
    }
    let factors = (0..k).map(|i| BigInt::from(at(&a, i, i))).collect();
    Some(SmithNormalForm { factors, rank: k })
}

fn snf_arbitrary_precision(input: &IntMatrix) -> SmithNormalForm {
    let mut a = input.clone();
    let (nr, nc) = (a.rows, a.cols);
    let mut k = 0;
    while k < nr.min(nc) {
        if pivot_position(&a, k).is_none() {
            break;
        }
        loop {
            let (pi, pj) = pivot_position(&a, k).expect("loop invariant: submatrix is nonzero");
            a.swap_rows(k, pi);
            a.swap_cols(k, pj);
            if a.get(k, k).is_negative() {
                a.negate_row(k);
            }
            let mut clean = true;
            for i in k + 1..nr {
                if !a.get(i, k).is_zero() {
                    let q = a.get(i, k) / a.get(k, k);
                    a.row_sub_mul(i, k, &q);
                    if !a.get(i, k).is_zero() {
                        clean = false;
                    }
                }
            }
            for j in k + 1..nc {
                if !a.get(k, j).is_zero() {
                    let q = a.get(k, j) / a.get(k, k);
                    a.col_sub_mul(j, k, &q);
                    if !a.get(k, j).is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue;
            }
            match find_nondivisible(&a, k) {
                Some(i) => a.row_add(k, i),
                None => break,
            }
        }
        k += 1;
    }
    let factors = (0..k).map(|i| a.get(i, i).clone()).collect();
    SmithNormalForm { factors, rank: k }
}

fn pivot_position(a: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let one = BigInt::from(1);
    let mut best: Option<(BigInt, usize, usize)> = None;
    for i in k..a.rows {
        for j in k..a.cols {
            let v = a.get(i, j);
            if v.is_zero() {
                continue;
            }
            let magnitude = v.abs();
            if magnitude == one {
                // A unit pivot cannot be beaten.
                return Some((i, j));
            }
            let better = match &best {
                None => true,
                Some((current, _, _)) => magnitude.cmp(current) == Ordering::Less,
            };
            if better {
                best = Some((magnitude, i, j));
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

/// The row of some trailing entry not divisible by the pivot `a[k][k]`.
fn find_nondivisible(a: &IntMatrix, k: usize) -> Option<usize> {
    let pivot = a.get(k, k);
    for i in k + 1..a.rows {
        for j in k + 1..a.cols {
            if !(a.get(i, j) % pivot).is_zero() {
                return Some(i);
            }
        }
    }
    None
}

/// Betti numbers and torsion coefficients per dimension, plus the Euler
/// characteristic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyProfile {
    pub betti: Vec<usize>,
    pub torsion: Vec<Vec<BigInt>>,
    pub euler: i64,
}

/// Integral homology of a nonempty complex: `betti_k` is
/// `#k-faces − rank ∂_k − rank ∂_{k+1}` and `torsion_k` collects the
/// invariant factors of `∂_{k+1}` exceeding 1. The void complex is
/// rejected; `{∅}` has the all-zero profile.
pub fn homology(complex: &SimplicialComplex) -> Result<HomologyProfile> {
    if complex.is_void() {
        return Err(Error::VoidComplex);
    }
    let dim = complex.dimension().expect("nonempty complex has a dimension");
    if dim < 0 {
        return Ok(HomologyProfile { betti: Vec::new(), torsion: Vec::new(), euler: 0 });
    }
    let dim = dim as usize;
    let counts = complex.f_vector();
    if let Some(&count) = counts.iter().find(|&&c| c > COLUMN_CAP) {
        return Err(Error::MatrixTooLarge { columns: count, cap: COLUMN_CAP });
    }
    let mut ranks = alloc::vec![0usize; dim + 2];
    let mut torsion = alloc::vec![Vec::new(); dim + 1];
    for k in 1..=dim {
        let snf = smith_normal_form(&boundary_matrix(complex, k).to_int_matrix());
        ranks[k] = snf.rank;
        torsion[k - 1] = snf.factors.into_iter().filter(|f| f > &BigInt::from(1)).collect();
    }
    let betti: Vec<usize> =
        (0..=dim).map(|k| counts[k] - ranks[k] - ranks[k + 1]).collect();
    let euler = complex.euler_characteristic();
    Ok(HomologyProfile { betti, torsion, euler })
}

/// Profile equality up to trailing zeros (in `betti`) and trailing empty
/// torsion lists.
pub fn profiles_equal(a: &HomologyProfile, b: &HomologyProfile) -> bool {
    let len = a.betti.len().max(b.betti.len()).max(a.torsion.len()).max(b.torsion.len());
    for k in 0..len {
        if a.betti.get(k).copied().unwrap_or(0) != b.betti.get(k).copied().unwrap_or(0) {
            return false;
        }
        let empty: Vec<BigInt> = Vec::new();
        if a.torsion.get(k).unwrap_or(&empty) != b.torsion.get(k).unwrap_or(&empty) {
            return false;
        }
    }
    a.euler == b.euler
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Universe;

    fn simplex_closure(labels: &[&str], facets: &[&[&str]]) -> SimplicialComplex {
        let u = Universe::from_labels(labels.iter().copied()).unwrap();
        let masks: Vec<Face> = facets
            .iter()
            .map(|f| u.face_from_labels(f.iter().copied()).unwrap())
            .collect();
        SimplicialComplex::closure(u, &masks)
    }

    #[test]
    fn boundary_of_an_edge() {
        let c = simplex_closure(&["a", "b"], &[&["a", "b"]]);
        let d1 = boundary_matrix(&c, 1);
        assert_eq!(d1.col_count(), 1);
        assert_eq!(d1.row_count(), 2);
        // ∂[a,b] = [b] − [a]: the column reads (−1, +1) over rows ({a},{b}).
        assert_eq!(d1.entry(0, 0), -1);
        assert_eq!(d1.entry(1, 0), 1);
    }

    #[test]
    fn degree_zero_boundary_has_no_rows() {
        let c = simplex_closure(&["a", "b"], &[&["a", "b"]]);
        let d0 = boundary_matrix(&c, 0);
        assert_eq!(d0.row_count(), 0);
        assert_eq!(d0.col_count(), 2);
    }

    #[test]
    fn boundary_composes_to_zero_on_full_simplex() {
        let c = simplex_closure(&["1", "2", "3"], &[&["1", "2", "3"]]);
        let d1 = boundary_matrix(&c, 1);
        let d2 = boundary_matrix(&c, 2);
        assert!(d1.composes_to_zero_with(&d2));
    }

    #[test]
    fn snf_of_identity() {
        let m = IntMatrix::from_rows(&[
            alloc::vec![1, 0, 0],
            alloc::vec![0, 1, 0],
            alloc::vec![0, 0, 1],
        ]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.rank, 3);
        assert_eq!(snf.factors, alloc::vec![BigInt::from(1); 3]);
    }

    #[test]
    fn snf_of_reference_matrix() {
        let m = IntMatrix::from_rows(&[alloc::vec![2, 4], alloc::vec![6, 8]]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.rank, 2);
        assert_eq!(snf.factors, alloc::vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn snf_of_zero_matrix() {
        let m = IntMatrix::zeros(3, 2);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.rank, 0);
        assert!(snf.factors.is_empty());
    }

    #[test]
    fn snf_divisibility_chain_on_a_dense_example() {
        let m = IntMatrix::from_rows(&[
            alloc::vec![-6, 111, -36, 6],
            alloc::vec![5, -672, 210, 74],
            alloc::vec![0, -255, 81, 24],
            alloc::vec![-7, 255, -81, -10],
        ]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.rank, 3);
        assert_eq!(
            snf.factors,
            alloc::vec![BigInt::from(1), BigInt::from(3), BigInt::from(21)]
        );
    }

    #[test]
    fn full_simplex_is_contractible() {
        let c = simplex_closure(&["5", "6", "7", "8"], &[&["5", "6", "7", "8"]]);
        let profile = homology(&c).unwrap();
        assert_eq!(profile.betti, [1, 0, 0, 0]);
        assert!(profile.torsion.iter().all(Vec::is_empty));
        assert_eq!(profile.euler, 1);
    }

    #[test]
    fn hollow_triangle_is_a_circle() {
        let c = simplex_closure(&["1", "2", "3"], &[&["1", "2"], &["2", "3"], &["3", "1"]]);
        let profile = homology(&c).unwrap();
        assert_eq!(profile.betti, [1, 1]);
        assert_eq!(profile.euler, 0);
    }

    #[test]
    fn two_points_have_betti_two() {
        let c = simplex_closure(&["a", "b"], &[&["a"], &["b"]]);
        let profile = homology(&c).unwrap();
        assert_eq!(profile.betti, [2]);
        assert_eq!(profile.euler, 2);
    }

    #[test]
    fn empty_face_only_has_zero_profile() {
        let u = Universe::from_labels(["a"]).unwrap();
        let c = SimplicialComplex::empty_face_only(u);
        let profile = homology(&c).unwrap();
        assert!(profile.betti.is_empty());
        assert_eq!(profile.euler, 0);
    }

    #[test]
    fn void_complex_is_rejected() {
        let u = Universe::from_labels(["a"]).unwrap();
        assert_eq!(homology(&SimplicialComplex::void(u)).unwrap_err(), Error::VoidComplex);
    }

    #[test]
    fn projective_plane_has_two_torsion() {
        // Minimal 6-vertex triangulation of the real projective plane.
        let c = simplex_closure(
            &["1", "2", "3", "4", "5", "6"],
            &[
                &["1", "2", "3"],
                &["1", "2", "4"],
                &["1", "3", "5"],
                &["1", "4", "6"],
                &["1", "5", "6"],
                &["2", "3", "6"],
                &["2", "4", "5"],
                &["2", "5", "6"],
                &["3", "4", "5"],
                &["3", "4", "6"],
            ],
        );
        assert_eq!(c.f_vector(), [6, 15, 10]);
        let profile = homology(&c).unwrap();
        assert_eq!(profile.betti, [1, 0, 0]);
        assert_eq!(profile.torsion[1], [BigInt::from(2)]);
        assert_eq!(profile.euler, 1);
    }

    #[test]
    fn profile_padding() {
        let a = HomologyProfile {
            betti: alloc::vec![1, 0],
            torsion: alloc::vec![Vec::new(), Vec::new()],
            euler: 1,
        };
        let b = HomologyProfile {
            betti: alloc::vec![1, 0, 0],
            torsion: alloc::vec![Vec::new()],
            euler: 1,
        };
        assert!(profiles_equal(&a, &b));
        let c = HomologyProfile {
            betti: alloc::vec![1, 1],
            torsion: alloc::vec![Vec::new(), Vec::new()],
            euler: 0,
        };
        assert!(!profiles_equal(&a, &c));
    }

    #[test]
    fn euler_characteristics_agree() {
        for facets in [
            alloc::vec![alloc::vec!["1", "2", "3"]],
            alloc::vec![alloc::vec!["1", "2"], alloc::vec!["3", "4"]],
            alloc::vec![alloc::vec!["1"], alloc::vec!["2"], alloc::vec!["3"]],
        ] {
            let refs: Vec<Vec<&str>> = facets;
            let slices: Vec<&[&str]> = refs.iter().map(Vec::as_slice).collect();
            let c = simplex_closure(&["1", "2", "3", "4"], &slices);
            let profile = homology(&c).unwrap();
            assert_eq!(profile.euler, c.euler_characteristic());
            let from_betti: i64 = profile
                .betti
                .iter()
                .enumerate()
                .map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
                .sum();
            assert_eq!(profile.euler, from_betti);
        }
    }
}
