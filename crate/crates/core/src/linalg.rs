//! Dense exact linear algebra over a [`FieldCtx`].

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ff::{FieldCtx, FieldElem};

/// Work size above which row elimination is spread over threads.
const PAR_THRESHOLD: usize = 1 << 15;

/// Row-major matrix over one field. Entries are stored packed; the context is
/// shared so every accessor hands back properly tagged [`FieldElem`]s.
#[derive(Clone)]
pub struct FieldMatrix {
    ctx: Arc<FieldCtx>,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl PartialEq for FieldMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.id() == other.ctx.id() && self.rows == other.rows && self.cols == other.cols && self.data == other.data
    }
}

impl Eq for FieldMatrix {}

impl fmt::Debug for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FieldMatrix {}x{} over GF({})", self.rows, self.cols, self.ctx.order())?;
        for r in 0..self.rows.min(12) {
            let row: Vec<i64> = self.row(r).into_iter().map(|e| self.ctx.power_code(e)).collect();
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}

impl FieldMatrix {
    pub fn zeros(ctx: &Arc<FieldCtx>, rows: usize, cols: usize) -> Self {
        FieldMatrix { ctx: ctx.clone(), rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(ctx: &Arc<FieldCtx>, n: usize) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Build from rows of equal length. `cols` is needed for the zero-row case.
    pub fn from_rows(ctx: &Arc<FieldCtx>, cols: usize, rows: &[Vec<FieldElem>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::Dimension(format!("row {i} has {} entries, expected {cols}", r.len())));
            }
            data.extend(r.iter().map(|&e| ctx.own(e)));
        }
        Ok(FieldMatrix { ctx: ctx.clone(), rows: rows.len(), cols, data })
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> FieldElem {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        self.ctx.wrap(self.data[r * self.cols + c])
    }

    pub fn set(&mut self, r: usize, c: usize, e: FieldElem) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        self.data[r * self.cols + c] = self.ctx.own(e);
    }

    pub fn row(&self, r: usize) -> Vec<FieldElem> {
        self.raw_row(r).iter().map(|&v| self.ctx.wrap(v)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<FieldElem>> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    fn raw_row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn push_row(&mut self, row: &[FieldElem]) -> Result<()> {
        if row.len() != self.cols {
            return Err(Error::Dimension(format!("row has {} entries, expected {}", row.len(), self.cols)));
        }
        self.data.extend(row.iter().map(|&e| self.ctx.own(e)));
        self.rows += 1;
        Ok(())
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn vstack(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        self.same_field(other)?;
        if self.cols != other.cols {
            return Err(Error::Dimension(format!("vstack of {} and {} columns", self.cols, other.cols)));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(FieldMatrix { ctx: self.ctx.clone(), rows: self.rows + other.rows, cols: self.cols, data })
    }

    pub fn transpose(&self) -> FieldMatrix {
        let mut data = vec![0; self.data.len()];
        for r in 0..self.rows {
            for c in 0..self.cols {
                data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        FieldMatrix { ctx: self.ctx.clone(), rows: self.cols, cols: self.rows, data }
    }

    fn same_field(&self, other: &FieldMatrix) -> Result<()> {
        if self.ctx.id() != other.ctx.id() {
            return Err(Error::FieldMismatch { left: self.ctx.id(), right: other.ctx.id() });
        }
        Ok(())
    }

    pub fn mul(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        self.same_field(other)?;
        if self.cols != other.rows {
            return Err(Error::Dimension(format!("product of {}x{} and {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let mut out = FieldMatrix::zeros(&self.ctx, self.rows, other.cols);
        let n = other.cols;
        for r in 0..self.rows {
            let dst = &mut out.data[r * n..(r + 1) * n];
            for (k, &a) in self.raw_row(r).iter().enumerate() {
                self.ctx.axpy_raw(dst, a, other.raw_row(k));
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[FieldElem]) -> Result<Vec<FieldElem>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!("vector of length {} for {} columns", v.len(), self.cols)));
        }
        let f = &self.ctx;
        let raw: Vec<u32> = v.iter().map(|&e| f.own(e)).collect();
        Ok((0..self.rows)
            .map(|r| {
                let acc = self.raw_row(r).iter().zip(&raw).fold(0u32, |acc, (&a, &b)| f.add_raw(acc, f.mul_raw(a, b)));
                f.wrap(acc)
            })
            .collect())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// Reduced row echelon form and its pivot columns. The pivot for each column
    /// is the first row at or below the current one with a nonzero entry.
    pub fn rref(&self) -> (FieldMatrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place(self.cols);
        (m, pivots)
    }

    /// Gauss-Jordan on the first `limit` columns; later columns are carried along.
    fn rref_in_place(&mut self, limit: usize) -> Vec<usize> {
        let f = self.ctx.clone();
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..limit {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.data[i * cols + c] != 0) else {
                continue;
            };
            if p != r {
                for j in 0..cols {
                    self.data.swap(p * cols + j, r * cols + j);
                }
            }
            let inv = f.inv_raw(self.data[r * cols + c]);
            for x in &mut self.data[r * cols + c..(r + 1) * cols] {
                *x = f.mul_raw(*x, inv);
            }
            let (before, rest) = self.data.split_at_mut(r * cols);
            let (pivot_row, after) = rest.split_at_mut(cols);
            let pivot_tail = &pivot_row[c..];
            let eliminate = |row: &mut [u32]| {
                let factor = row[c];
                if factor != 0 {
                    f.axpy_raw(&mut row[c..], f.neg_raw(factor), pivot_tail);
                }
            };
            if self.rows * (cols - c) > PAR_THRESHOLD {
                before.par_chunks_mut(cols).for_each(eliminate);
                after.par_chunks_mut(cols).for_each(eliminate);
            } else {
                before.chunks_mut(cols).for_each(eliminate);
                after.chunks_mut(cols).for_each(eliminate);
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Nonzero rows of the RREF: a canonical basis of the row space.
    pub fn row_space_basis(&self) -> FieldMatrix {
        let (mut m, pivots) = self.rref();
        m.rows = pivots.len();
        m.data.truncate(m.rows * m.cols);
        m
    }

    /// Basis of `{v : M v = 0}` as the rows of the result, one per free column.
    pub fn nullspace(&self) -> FieldMatrix {
        let (red, pivots) = self.rref();
        let f = &self.ctx;
        let mut is_pivot = vec![None; self.cols];
        for (i, &c) in pivots.iter().enumerate() {
            is_pivot[c] = Some(i);
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| is_pivot[c].is_none()).collect();
        let mut out = FieldMatrix::zeros(f, free.len(), self.cols);
        for (k, &fc) in free.iter().enumerate() {
            let row = &mut out.data[k * self.cols..(k + 1) * self.cols];
            row[fc] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                row[pc] = f.neg_raw(red.data[i * self.cols + fc]);
            }
        }
        out
    }

    /// A particular solution of `M x = b` (free variables set to zero), or `None`
    /// if the system is inconsistent.
    pub fn solve(&self, b: &[FieldElem]) -> Result<Option<Vec<FieldElem>>> {
        if b.len() != self.rows {
            return Err(Error::Dimension(format!("right-hand side of length {} for {} rows", b.len(), self.rows)));
        }
        let f = &self.ctx;
        let w = self.cols + 1;
        let mut aug = FieldMatrix::zeros(f, self.rows, w);
        for r in 0..self.rows {
            aug.data[r * w..r * w + self.cols].copy_from_slice(self.raw_row(r));
            aug.data[r * w + self.cols] = f.own(b[r]);
        }
        let pivots = aug.rref_in_place(self.cols);
        let rank = pivots.len();
        if (rank..self.rows).any(|r| aug.data[r * w + self.cols] != 0) {
            return Ok(None);
        }
        let mut x = vec![f.zero(); self.cols];
        for (i, &c) in pivots.iter().enumerate() {
            x[c] = f.wrap(aug.data[i * w + self.cols]);
        }
        if self.mul_vec(&x)? != b {
            return Err(Error::consistency("linear solve left a nonzero residual"));
        }
        Ok(Some(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::ConwayTable;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn gf(p: u32, k: u32) -> Arc<FieldCtx> {
        FieldCtx::conway(p, k, &ConwayTable::builtin().unwrap()).unwrap()
    }

    fn random(f: &Arc<FieldCtx>, rows: usize, cols: usize, rng: &mut impl Rng) -> FieldMatrix {
        let data: Vec<Vec<FieldElem>> = (0..rows).map(|_| (0..cols).map(|_| f.elem(rng.gen_range(0..f.order()))).collect()).collect();
        FieldMatrix::from_rows(f, cols, &data).unwrap()
    }

    /// Random matrix of rank at most `r`, as a product of thin factors.
    fn low_rank(f: &Arc<FieldCtx>, rows: usize, cols: usize, r: usize, rng: &mut impl Rng) -> FieldMatrix {
        random(f, rows, r, rng).mul(&random(f, r, cols, rng)).unwrap()
    }

    fn det_by_minors(f: &FieldCtx, m: &[Vec<FieldElem>]) -> FieldElem {
        if m.len() == 1 {
            return m[0][0];
        }
        let mut acc = f.zero();
        for j in 0..m.len() {
            let minor: Vec<Vec<FieldElem>> =
                m[1..].iter().map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &e)| e).collect()).collect();
            let term = f.mul(m[0][j], det_by_minors(f, &minor));
            acc = if j % 2 == 0 { f.add(acc, term) } else { f.sub(acc, term) };
        }
        acc
    }

    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        if n < k {
            return vec![];
        }
        let mut out = subsets(n - 1, k);
        for mut s in subsets(n - 1, k - 1) {
            s.push(n - 1);
            out.push(s);
        }
        out
    }

    /// Largest size of a nonvanishing square minor.
    fn rank_by_minors(m: &FieldMatrix) -> usize {
        let f = m.ctx();
        for k in (1..=m.rows().min(m.cols())).rev() {
            for rs in subsets(m.rows(), k) {
                for cs in subsets(m.cols(), k) {
                    let sub: Vec<Vec<FieldElem>> = rs.iter().map(|&r| cs.iter().map(|&c| m.get(r, c)).collect()).collect();
                    if !det_by_minors(f, &sub).is_zero() {
                        return k;
                    }
                }
            }
        }
        0
    }

    #[test]
    fn trivial_cases() {
        let f = gf(7, 2);
        let id = FieldMatrix::identity(&f, 3);
        let (r, piv) = id.rref();
        assert_eq!(r, id);
        assert_eq!(piv, vec![0, 1, 2]);
        assert_eq!(id.nullspace().rows(), 0);
        let z = FieldMatrix::zeros(&f, 2, 3);
        let (r, piv) = z.rref();
        assert_eq!(r, z);
        assert!(piv.is_empty());

        let f2 = gf(2, 1);
        let m = FieldMatrix::from_rows(&f2, 2, &[vec![f2.one(), f2.one()]]).unwrap();
        let ns = m.nullspace();
        assert_eq!(ns.to_rows(), vec![vec![f2.one(), f2.one()]]);
    }

    #[test]
    fn solve_identity_and_inconsistent() {
        let f = gf(7, 2);
        let b: Vec<FieldElem> = (0..4).map(|i| f.gen_pow(i * 5)).collect();
        assert_eq!(FieldMatrix::identity(&f, 4).solve(&b).unwrap(), Some(b.clone()));
        let zero = FieldMatrix::zeros(&f, 1, 1);
        assert_eq!(zero.solve(&[f.one()]).unwrap(), None);
        assert!(matches!(zero.solve(&[]), Err(Error::Dimension(_))));
    }

    #[test]
    fn rank_agrees_with_minor_expansion() {
        let f = gf(7, 2);
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for trial in 0..30 {
            let (rows, cols) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
            let r = rng.gen_range(0..=rows.min(cols));
            let m = if trial % 3 == 0 { random(&f, rows, cols, &mut rng) } else { low_rank(&f, rows, cols, r.max(1), &mut rng) };
            assert_eq!(m.rank(), rank_by_minors(&m), "{m:?}");
        }
        // 20x30 of rank 5: every 6x6 minor vanishes, some 5x5 minor does not
        let m = low_rank(&f, 20, 30, 5, &mut rng);
        assert_eq!(m.rank(), 5);
        let corner: Vec<Vec<FieldElem>> = (0..6).map(|r| m.row(r)[..6].to_vec()).collect();
        let corner = FieldMatrix::from_rows(&f, 6, &corner).unwrap();
        assert_eq!(corner.rank(), rank_by_minors(&corner));
    }

    #[test]
    fn large_system_uses_parallel_path() {
        let f = gf(7, 2);
        let mut rng = rand::rngs::StdRng::seed_from_u64(5);
        let m = low_rank(&f, 300, 320, 250, &mut rng);
        let ns = m.nullspace();
        assert_eq!(ns.rows(), 320 - 250);
        assert!(m.mul(&ns.transpose()).unwrap().is_zero());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn rank_nullity_and_idempotence(rows in 0usize..12, cols in 1usize..12, seed: u64, field in 0usize..4) {
            let f = [gf(2, 1), gf(2, 4), gf(7, 2), gf(3, 6)][field].clone();
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            let r = rng.gen_range(1..=cols);
            let m = if seed % 2 == 0 { random(&f, rows, cols, &mut rng) } else { low_rank(&f, rows, cols, r, &mut rng) };
            let (red, piv) = m.rref();
            prop_assert!(piv.windows(2).all(|w| w[0] < w[1]));
            prop_assert_eq!(red.rref().0, red.clone());
            let ns = m.nullspace();
            prop_assert_eq!(piv.len() + ns.rows(), cols);
            prop_assert!(m.mul(&ns.transpose()).unwrap().is_zero());
            // a consistent right-hand side is always solved
            let x: Vec<FieldElem> = (0..cols).map(|_| f.elem(rng.gen_range(0..f.order()))).collect();
            let b = m.mul_vec(&x).unwrap();
            let sol = m.solve(&b).unwrap().expect("consistent");
            prop_assert_eq!(m.mul_vec(&sol).unwrap(), b);
        }
    }
}
