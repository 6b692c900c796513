//! Dense exact linear algebra over a finite field.
//!
//! Subspaces are represented canonically by their RREF bases, so two subspaces
//! are equal exactly when their RREF matrices are equal.

use rayon::prelude::*;

use crate::error::{dim, Error, Result};
use crate::gf::Field;

const PAR_THRESHOLD: usize = 1 << 16;

/// Row-major dense matrix over a field.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl std::fmt::Debug for Mat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Mat {}x{} over {}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows.min(16) {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl Mat {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Mat {
        Mat {
            field: field.clone(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    /// A matrix with no rows; represents the zero subspace of `F^cols`.
    pub fn empty(field: &Field, cols: usize) -> Mat {
        Mat::zeros(field, 0, cols)
    }

    pub fn identity(field: &Field, n: usize) -> Mat {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(field: &Field, rows: Vec<Vec<u32>>) -> Result<Mat> {
        let cols = rows.first().map_or(0, |r| r.len());
        Mat::from_rows_with_cols(field, rows, cols)
    }

    /// Like [`Mat::from_rows`] but with an explicit width, so an empty row list
    /// still carries its ambient dimension.
    pub fn from_rows_with_cols(field: &Field, rows: Vec<Vec<u32>>, cols: usize) -> Result<Mat> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let n = rows.len();
        for r in rows {
            if r.len() != cols {
                return Err(dim(format!("ragged rows: expected {cols}, got {}", r.len())));
            }
            for &x in &r {
                field.check(x)?;
            }
            data.extend(r);
        }
        Ok(Mat {
            field: field.clone(),
            rows: n,
            cols,
            data,
        })
    }

    pub(crate) fn from_flat(field: &Field, rows: usize, cols: usize, data: Vec<u32>) -> Mat {
        debug_assert_eq!(data.len(), rows * cols);
        Mat {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [u32] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[u32]> {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        self.row_iter().map(|r| r.to_vec()).collect()
    }

    pub fn col(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn push_row(&mut self, row: &[u32]) -> Result<()> {
        if row.len() != self.cols {
            return Err(dim(format!(
                "row of length {} pushed onto width {}",
                row.len(),
                self.cols
            )));
        }
        self.data.extend_from_slice(row);
        self.rows += 1;
        Ok(())
    }

    fn same_field(&self, other: &Mat) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch(format!("{} vs {}", self.field, other.field)))
        }
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Result<Mat> {
        self.same_field(other)?;
        if self.cols != other.rows {
            return Err(dim(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Mat::zeros(f, self.rows, other.cols);
        let oc = other.cols;
        let work = |(r, out_row): (usize, &mut [u32])| {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a != 0 {
                    f.axpy(out_row, a, other.row(k));
                }
            }
        };
        if self.rows * self.cols * oc > PAR_THRESHOLD && oc > 0 {
            out.data.par_chunks_mut(oc).enumerate().for_each(work);
        } else if oc > 0 {
            out.data.chunks_mut(oc).enumerate().for_each(work);
        }
        Ok(out)
    }

    /// `M · v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.cols {
            return Err(dim(format!("vector length {} vs {} columns", v.len(), self.cols)));
        }
        Ok(self.row_iter().map(|r| self.field.dot(r, v)).collect())
    }

    /// `v · M` for a row vector `v`.
    pub fn vec_mul(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.rows {
            return Err(dim(format!("vector length {} vs {} rows", v.len(), self.rows)));
        }
        let mut out = vec![0u32; self.cols];
        for (r, &c) in v.iter().enumerate() {
            self.field.axpy(&mut out, c, self.row(r));
        }
        Ok(out)
    }

    pub fn select_cols(&self, cols: &[usize]) -> Result<Mat> {
        for &c in cols {
            if c >= self.cols {
                return Err(Error::IndexOutOfRange {
                    index: c,
                    len: self.cols,
                });
            }
        }
        let mut data = Vec::with_capacity(self.rows * cols.len());
        for r in 0..self.rows {
            let row = self.row(r);
            data.extend(cols.iter().map(|&c| row[c]));
        }
        Ok(Mat::from_flat(&self.field, self.rows, cols.len(), data))
    }

    pub fn select_rows(&self, rows: &[usize]) -> Result<Mat> {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            if r >= self.rows {
                return Err(Error::IndexOutOfRange {
                    index: r,
                    len: self.rows,
                });
            }
            data.extend_from_slice(self.row(r));
        }
        Ok(Mat::from_flat(&self.field, rows.len(), self.cols, data))
    }

    pub fn vstack(&self, other: &Mat) -> Result<Mat> {
        self.same_field(other)?;
        if self.cols != other.cols {
            return Err(dim(format!("vstack widths {} vs {}", self.cols, other.cols)));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Mat::from_flat(&self.field, self.rows + other.rows, self.cols, data))
    }

    pub fn hstack(&self, other: &Mat) -> Result<Mat> {
        self.same_field(other)?;
        if self.rows != other.rows {
            return Err(dim(format!("hstack heights {} vs {}", self.rows, other.rows)));
        }
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            data.extend_from_slice(self.row(r));
            data.extend_from_slice(other.row(r));
        }
        Ok(Mat::from_flat(&self.field, self.rows, cols, data))
    }

    /// Reduced row echelon form. Pivots are chosen leftmost column first, then
    /// the topmost eligible row; zero rows are dropped.
    pub fn rref(&self) -> Rref {
        let f = &self.field;
        let cols = self.cols;
        let mut m = self.data.clone();
        let rows = self.rows;
        let mut pivots = Vec::new();
        let mut top = 0usize;
        for c in 0..cols {
            if top == rows {
                break;
            }
            let Some(pr) = (top..rows).find(|&r| m[r * cols + c] != 0) else {
                continue;
            };
            if pr != top {
                for j in 0..cols {
                    m.swap(pr * cols + j, top * cols + j);
                }
            }
            let inv = f.inv(m[top * cols + c]).unwrap();
            if inv != 1 {
                f.scale(&mut m[top * cols..(top + 1) * cols], inv);
            }
            let prow: Vec<u32> = m[top * cols + c..(top + 1) * cols].to_vec();
            let eliminate = |(r, row): (usize, &mut [u32])| {
                if r == top {
                    return;
                }
                let x = row[c];
                if x != 0 {
                    f.axpy(&mut row[c..], f.neg(x), &prow);
                }
            };
            if rows * (cols - c) > PAR_THRESHOLD {
                m.par_chunks_mut(cols).enumerate().for_each(eliminate);
            } else {
                m.chunks_mut(cols).enumerate().for_each(eliminate);
            }
            pivots.push(c);
            top += 1;
        }
        m.truncate(top * cols);
        Rref {
            mat: Mat::from_flat(f, top, cols, m),
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank()
    }

    /// Canonical RREF basis of the row space.
    pub fn row_space(&self) -> Mat {
        self.rref().mat
    }

    /// RREF basis of the right null space `{v : M vᵀ = 0}`.
    pub fn kernel(&self) -> Mat {
        self.rref().kernel()
    }

    /// One solution of `M x = b` with free variables set to zero, or `None`.
    pub fn solve(&self, b: &[u32]) -> Result<Option<Vec<u32>>> {
        if b.len() != self.rows {
            return Err(dim(format!("rhs length {} vs {} rows", b.len(), self.rows)));
        }
        let bcol = Mat::from_flat(&self.field, self.rows, 1, b.to_vec());
        let aug = self.hstack(&bcol)?.rref();
        let n = self.cols;
        if aug.pivots.last() == Some(&n) {
            return Ok(None);
        }
        let mut x = vec![0u32; n];
        for (i, &p) in aug.pivots.iter().enumerate() {
            x[p] = aug.mat.get(i, n);
        }
        Ok(Some(x))
    }

    /// Inverse of a square matrix, if it is invertible.
    pub fn inverse(&self) -> Result<Option<Mat>> {
        if self.rows != self.cols {
            return Err(dim("inverse of a non-square matrix"));
        }
        let n = self.rows;
        let aug = self.hstack(&Mat::identity(&self.field, n))?.rref();
        if aug.rank() < n || aug.pivots[n - 1] != n - 1 {
            return Ok(None);
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        Ok(Some(aug.mat.select_cols(&cols)?))
    }
}

/// An RREF matrix together with its pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub mat: Mat,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn field(&self) -> &Field {
        self.mat.field()
    }

    /// Reduces `v` modulo the row space: the result vanishes on every pivot
    /// column and is the canonical coset representative.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let f = self.mat.field();
        let mut out = v.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            let x = out[p];
            if x != 0 {
                f.axpy(&mut out, f.neg(x), self.mat.row(i));
            }
        }
        out
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Coefficients expressing `v` in the RREF basis, if `v` lies in the span.
    pub fn coordinates(&self, v: &[u32]) -> Option<Vec<u32>> {
        self.contains(v)
            .then(|| self.pivots.iter().map(|&p| v[p]).collect())
    }

    pub fn kernel(&self) -> Mat {
        let f = self.mat.field();
        let n = self.mat.cols();
        let mut is_pivot = vec![false; n];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
        let mut data = vec![0u32; free.len() * n];
        for (t, &fc) in free.iter().enumerate() {
            let row = &mut data[t * n..(t + 1) * n];
            row[fc] = 1;
            for (i, &p) in self.pivots.iter().enumerate() {
                row[p] = f.neg(self.mat.get(i, fc));
            }
        }
        Mat::from_flat(f, free.len(), n, data).row_space()
    }
}

/// RREF basis of the sum of two row spaces.
pub fn sum(a: &Mat, b: &Mat) -> Result<Mat> {
    Ok(a.vstack(b)?.row_space())
}

/// RREF basis of the intersection of two row spaces, computed as the kernel of
/// the stacked duals.
pub fn intersection(a: &Mat, b: &Mat) -> Result<Mat> {
    if a.cols() != b.cols() {
        return Err(dim(format!("intersection widths {} vs {}", a.cols(), b.cols())));
    }
    Ok(a.kernel().vstack(&b.kernel())?.kernel())
}

/// Whether the row space of `a` is contained in that of `b`.
pub fn is_subspace(a: &Mat, b: &Mat) -> Result<bool> {
    if a.cols() != b.cols() {
        return Err(dim(format!("subspace widths {} vs {}", a.cols(), b.cols())));
    }
    let rb = b.rref();
    Ok(a.row_iter().all(|r| rb.contains(r)))
}

/// `(span(a) ∩ ({0}^zero × F^rest))|_rest`: codewords vanishing on `zero`,
/// restricted to the remaining coordinates (in increasing order).
pub fn shorten(a: &Mat, zero: &[usize]) -> Result<Mat> {
    let n = a.cols();
    let mut on = vec![false; n];
    for &z in zero {
        if z >= n {
            return Err(Error::IndexOutOfRange { index: z, len: n });
        }
        on[z] = true;
    }
    let rest: Vec<usize> = (0..n).filter(|&c| !on[c]).collect();
    let basis = a.row_space();
    let combos = basis.select_cols(zero)?.transpose().kernel();
    let words = combos.mul(&basis)?;
    Ok(words.select_cols(&rest)?.row_space())
}

/// Row space restricted to `keep` (puncturing), in RREF.
pub fn puncture(a: &Mat, keep: &[usize]) -> Result<Mat> {
    Ok(a.select_cols(keep)?.row_space())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fp(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    fn random_mat(f: &Field, rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Mat {
        let q = f.order() as u32;
        let data = (0..rows * cols).map(|_| rng.gen_range(0..q)).collect();
        Mat::from_flat(f, rows, cols, data)
    }

    /// Independent elimination: random pivot row selection, no reduction above
    /// pivots. Returns the echelon rows and the rank.
    fn echelon_random_pivot(m: &Mat, rng: &mut ChaCha8Rng) -> (Vec<Vec<u32>>, usize) {
        let f = m.field().clone();
        let mut rows = m.to_rows();
        let mut out = Vec::new();
        for c in 0..m.cols() {
            let cands: Vec<usize> = (0..rows.len()).filter(|&r| rows[r][c] != 0).collect();
            if cands.is_empty() {
                continue;
            }
            let pick = cands[rng.gen_range(0..cands.len())];
            let prow = rows.remove(pick);
            let inv = f.inv(prow[c]).unwrap();
            for r in rows.iter_mut() {
                let factor = f.mul(r[c], inv);
                for j in 0..r.len() {
                    r[j] = f.sub(r[j], f.mul(factor, prow[j]));
                }
            }
            out.push(prow);
        }
        let rank = out.len();
        (out, rank)
    }

    #[test]
    fn rref_identity() {
        let f = fp(5);
        let i = Mat::identity(&f, 3);
        let r = i.rref();
        assert_eq!(r.mat, i);
        assert_eq!(r.rank(), 3);
        let one = Mat::from_rows(&fp(2), vec![vec![1, 1]]).unwrap();
        assert_eq!(one.rref().mat, one);
    }

    #[test]
    fn rref_matches_independent_elimination() {
        let f = fp(7);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let m = random_mat(&f, 4, 6, &mut rng);
            let (rows, rank) = echelon_random_pivot(&m, &mut rng);
            assert_eq!(m.rank(), rank);
            let other = Mat::from_rows_with_cols(&f, rows, 6).unwrap();
            assert_eq!(other.row_space(), m.row_space());
        }
    }

    #[test]
    fn kernel_examples() {
        let f2 = fp(2);
        let m = Mat::from_rows(&f2, vec![vec![1, 1]]).unwrap();
        assert_eq!(m.kernel().to_rows(), vec![vec![1, 1]]);
        assert!(Mat::identity(&fp(5), 3).kernel().is_empty());
    }

    #[test]
    fn solve_examples() {
        let f3 = fp(3);
        let i = Mat::identity(&f3, 3);
        assert_eq!(i.solve(&[2, 0, 1]).unwrap(), Some(vec![2, 0, 1]));
        let m = Mat::from_rows(&f3, vec![vec![1, 0], vec![1, 0]]).unwrap();
        assert_eq!(m.solve(&[1, 2]).unwrap(), None);
    }

    #[test]
    fn shorten_rs_5_2() {
        let f = fp(5);
        let gen = Mat::from_rows(
            &f,
            vec![vec![1, 1, 1, 1, 1], vec![0, 1, 2, 3, 4]],
        )
        .unwrap();
        let s = shorten(&gen, &[4]).unwrap();
        // Oracle: enumerate all 25 codewords, keep those vanishing at 4.
        let mut kept = Vec::new();
        for a in 0..5u32 {
            for b in 0..5u32 {
                let w = gen.vec_mul(&[a, b]).unwrap();
                if w[4] == 0 {
                    kept.push(w[..4].to_vec());
                }
            }
        }
        let oracle = Mat::from_rows(&f, kept).unwrap().row_space();
        assert_eq!(s, oracle);
        assert_eq!(s.rows(), 1);
    }

    #[test]
    fn subspace_ops() {
        let f = fp(2);
        let a = Mat::from_rows(&f, vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0]]).unwrap();
        let b = Mat::from_rows(&f, vec![vec![0, 0, 1, 0], vec![0, 0, 0, 1]]).unwrap();
        assert_eq!(sum(&a, &b).unwrap(), Mat::identity(&f, 4));
        assert_eq!(intersection(&a, &a).unwrap(), a.row_space());
        assert!(intersection(&a, &b).unwrap().is_empty());
        assert!(is_subspace(&a, &sum(&a, &b).unwrap()).unwrap());
        assert!(matches!(
            shorten(&a, &[9]),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn inverse_roundtrip() {
        let f = fp(11);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let m = random_mat(&f, 4, 4, &mut rng);
            match m.inverse().unwrap() {
                Some(inv) => assert_eq!(m.mul(&inv).unwrap(), Mat::identity(&f, 4)),
                None => assert!(m.rank() < 4),
            }
        }
    }

    fn arb_mat() -> impl Strategy<Value = (u64, usize, usize, Vec<u32>)> {
        (prop_oneof![Just(2u64), Just(3), Just(5), Just(7)], 1usize..6, 1usize..8).prop_flat_map(
            |(p, r, c)| {
                (
                    Just(p),
                    Just(r),
                    Just(c),
                    proptest::collection::vec(0..p as u32, r * c),
                )
            },
        )
    }

    proptest! {
        #[test]
        fn rank_nullity((p, r, c, data) in arb_mat()) {
            let m = Mat::from_flat(&fp(p), r, c, data);
            let k = m.kernel();
            prop_assert_eq!(m.rank() + k.rows(), c);
            for v in k.row_iter() {
                prop_assert!(m.mul_vec(v).unwrap().iter().all(|&x| x == 0));
            }
        }

        #[test]
        fn double_dual((p, r, c, data) in arb_mat()) {
            let m = Mat::from_flat(&fp(p), r, c, data);
            prop_assert_eq!(m.kernel().kernel(), m.row_space());
        }

        #[test]
        fn solve_residual((p, r, c, data) in arb_mat(), seed in any::<u64>()) {
            let f = fp(p);
            let m = Mat::from_flat(&f, r, c, data);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x0: Vec<u32> = (0..c).map(|_| rng.gen_range(0..p as u32)).collect();
            let b = m.mul_vec(&x0).unwrap();
            let x = m.solve(&b).unwrap().expect("consistent by construction");
            prop_assert_eq!(m.mul_vec(&x).unwrap(), b);
        }

        #[test]
        fn puncture_commutes_with_span((p, r, c, data) in arb_mat(), mask in any::<u16>()) {
            let m = Mat::from_flat(&fp(p), r, c, data);
            let keep: Vec<usize> = (0..c).filter(|i| mask >> i & 1 == 1).collect();
            prop_assume!(!keep.is_empty());
            prop_assert_eq!(
                puncture(&m.row_space(), &keep).unwrap(),
                puncture(&m, &keep).unwrap()
            );
        }
    }
}
