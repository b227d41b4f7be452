//! Exact sparse matrices and the rank/kernel engine.
//!
//! Matrices are immutable after construction; elimination always works on a
//! private row-major copy. Degenerate 0×n and n×0 shapes are legal and show
//! up constantly as empty degrees of chain complexes.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::field::{FieldSpec, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("entry ({0}, {1}) outside a {2}x{3} matrix")]
    OutOfRange(usize, usize, usize, usize),
    #[error("entry field {0} does not match matrix field {1}")]
    MixedFields(FieldSpec, FieldSpec),
    #[error("cannot compose {0}x{1} with {2}x{3}")]
    NotComposable(usize, usize, usize, usize),
}

/// A sparse matrix over a fixed field, stored as (row, col) -> nonzero Scalar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    field: FieldSpec,
    entries: BTreeMap<(usize, usize), Scalar>,
}

/// Accumulating builder: repeated coordinates are summed, zeros dropped.
#[derive(Debug, Clone)]
pub struct MatrixBuilder {
    rows: usize,
    cols: usize,
    field: FieldSpec,
    entries: BTreeMap<(usize, usize), Scalar>,
}

impl MatrixBuilder {
    pub fn new(rows: usize, cols: usize, field: FieldSpec) -> Self {
        MatrixBuilder {
            rows,
            cols,
            field,
            entries: BTreeMap::new(),
        }
    }

    pub fn add(&mut self, row: usize, col: usize, value: Scalar) -> Result<(), MatrixError> {
        if row >= self.rows || col >= self.cols {
            return Err(MatrixError::OutOfRange(row, col, self.rows, self.cols));
        }
        if value.field() != self.field {
            return Err(MatrixError::MixedFields(value.field(), self.field));
        }
        if value.is_zero() {
            return Ok(());
        }
        match self.entries.entry((row, col)) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(value);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &value;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
        Ok(())
    }

    pub fn build(self) -> SparseMatrix {
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            entries: self.entries,
        }
    }
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize, field: FieldSpec) -> Self {
        SparseMatrix {
            rows,
            cols,
            field,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize, field: FieldSpec) -> Self {
        let mut b = MatrixBuilder::new(n, n, field);
        for i in 0..n {
            b.add(i, i, field.one()).unwrap();
        }
        b.build()
    }

    pub fn from_triplets(
        rows: usize,
        cols: usize,
        field: FieldSpec,
        triplets: impl IntoIterator<Item = (usize, usize, Scalar)>,
    ) -> Result<Self, MatrixError> {
        let mut b = MatrixBuilder::new(rows, cols, field);
        for (r, c, v) in triplets {
            b.add(r, c, v)?;
        }
        Ok(b.build())
    }

    /// Integer entries, handy in tests and structure-constant assembly.
    pub fn from_int_rows(field: FieldSpec, rows: &[&[i64]]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut b = MatrixBuilder::new(nrows, ncols, field);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), ncols, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                b.add(i, j, field.from_integer(v)).unwrap();
            }
        }
        b.build()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, row: usize, col: usize) -> Scalar {
        self.entries
            .get(&(row, col))
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut entries = BTreeMap::new();
        for (&(r, c), v) in &self.entries {
            entries.insert((c, r), v.clone());
        }
        SparseMatrix {
            rows: self.cols,
            cols: self.rows,
            field: self.field,
            entries,
        }
    }

    pub fn scaled(&self, by: &Scalar) -> SparseMatrix {
        let mut b = MatrixBuilder::new(self.rows, self.cols, self.field);
        for (&(r, c), v) in &self.entries {
            b.add(r, c, v * by).unwrap();
        }
        b.build()
    }

    pub fn compose(&self, rhs: &SparseMatrix) -> Result<SparseMatrix, MatrixError> {
        if self.cols != rhs.rows {
            return Err(MatrixError::NotComposable(
                self.rows, self.cols, rhs.rows, rhs.cols,
            ));
        }
        if self.field != rhs.field {
            return Err(MatrixError::MixedFields(rhs.field, self.field));
        }
        // index rhs by row for the sparse product
        let mut rhs_rows: BTreeMap<usize, Vec<(usize, &Scalar)>> = BTreeMap::new();
        for (&(r, c), v) in &rhs.entries {
            rhs_rows.entry(r).or_default().push((c, v));
        }
        let mut b = MatrixBuilder::new(self.rows, rhs.cols, self.field);
        for (&(i, k), v) in &self.entries {
            if let Some(row) = rhs_rows.get(&k) {
                for (j, w) in row {
                    b.add(i, *j, v * w).unwrap();
                }
            }
        }
        Ok(b.build())
    }

    /// Matrix-vector product with a dense column vector.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        let mut out = vec![self.field.zero(); self.rows];
        for (&(r, c), a) in &self.entries {
            if !v[c].is_zero() {
                out[r] = &out[r] + &(a * &v[c]);
            }
        }
        out
    }

    /// Exact rank by fraction-free-style Gaussian elimination with sparsest
    /// column / smallest pivot selection to limit fill-in.
    pub fn rank(&self) -> usize {
        Elimination::new(self).forward().rank
    }

    /// Exact basis of the null space; `cols - rank` dense column vectors,
    /// each satisfying `m * v = 0`.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let mut elim = Elimination::new(self).forward();
        elim.back_substitute();
        elim.kernel()
    }
}

/// rank(a * b); dimension of the image of the composite.
pub fn image_dimension_of_composite(
    a: &SparseMatrix,
    b: &SparseMatrix,
) -> Result<usize, MatrixError> {
    Ok(a.compose(b)?.rank())
}

struct Elimination {
    field: FieldSpec,
    cols: usize,
    /// live rows as sparse maps col -> value
    rows: Vec<BTreeMap<usize, Scalar>>,
    /// (row index into `rows`, pivot column), in elimination order
    pivots: Vec<(usize, usize)>,
    rank: usize,
}

impl Elimination {
    fn new(m: &SparseMatrix) -> Self {
        let mut rows: Vec<BTreeMap<usize, Scalar>> = vec![BTreeMap::new(); m.rows];
        for (r, c, v) in m.iter() {
            rows[r].insert(c, v.clone());
        }
        Elimination {
            field: m.field,
            cols: m.cols,
            rows,
            pivots: Vec::new(),
            rank: 0,
        }
    }

    fn forward(mut self) -> Self {
        let mut col_used = vec![false; self.cols];
        let mut row_used = vec![false; self.rows.len()];

        loop {
            // count live entries per unused column
            let mut col_count: BTreeMap<usize, usize> = BTreeMap::new();
            for (ri, row) in self.rows.iter().enumerate() {
                if row_used[ri] {
                    continue;
                }
                for (&c, _) in row {
                    if !col_used[c] {
                        *col_count.entry(c).or_insert(0) += 1;
                    }
                }
            }
            let Some((&pivot_col, _)) = col_count.iter().min_by_key(|&(&c, &n)| (n, c)) else {
                break; // nothing nonzero left
            };

            // smallest pivot value in that column, lowest row index on ties
            let pivot_row = self
                .rows
                .iter()
                .enumerate()
                .filter(|(ri, row)| !row_used[*ri] && row.contains_key(&pivot_col))
                .min_by_key(|(ri, row)| (row[&pivot_col].pivot_size(), *ri))
                .map(|(ri, _)| ri)
                .expect("counted column must have an entry");

            let pivot_val = self.rows[pivot_row][&pivot_col].clone();
            let pivot_inv = pivot_val.inverse().expect("pivot is nonzero");

            let pivot_entries: Vec<(usize, Scalar)> = self.rows[pivot_row]
                .iter()
                .map(|(&c, v)| (c, v.clone()))
                .collect();

            for ri in 0..self.rows.len() {
                if ri == pivot_row || row_used[ri] {
                    continue;
                }
                let Some(factor) = self.rows[ri].get(&pivot_col).cloned() else {
                    continue;
                };
                let scale = &factor * &pivot_inv;
                for (c, v) in &pivot_entries {
                    let delta = &scale * v;
                    match self.rows[ri].entry(*c) {
                        std::collections::btree_map::Entry::Vacant(e) => {
                            if !delta.is_zero() {
                                e.insert(-&delta);
                            }
                        }
                        std::collections::btree_map::Entry::Occupied(mut e) => {
                            let new = e.get() - &delta;
                            if new.is_zero() {
                                e.remove();
                            } else {
                                *e.get_mut() = new;
                            }
                        }
                    }
                }
                debug_assert!(!self.rows[ri].contains_key(&pivot_col));
            }

            row_used[pivot_row] = true;
            col_used[pivot_col] = true;
            self.pivots.push((pivot_row, pivot_col));
            self.rank += 1;
        }
        self
    }

    /// Clears pivot columns from earlier pivot rows and normalizes pivots,
    /// leaving the live rows in reduced echelon form.
    fn back_substitute(&mut self) {
        let pivots = self.pivots.clone();
        for &(prow, pcol) in &pivots {
            let inv = self.rows[prow][&pcol].inverse().expect("pivot nonzero");
            let normalized: BTreeMap<usize, Scalar> = self.rows[prow]
                .iter()
                .map(|(&c, v)| (c, v * &inv))
                .collect();
            self.rows[prow] = normalized;
        }
        for i in (0..pivots.len()).rev() {
            let (prow, pcol) = pivots[i];
            let pivot_entries: Vec<(usize, Scalar)> = self.rows[prow]
                .iter()
                .map(|(&c, v)| (c, v.clone()))
                .collect();
            for &(orow, _) in &pivots[..i] {
                let Some(factor) = self.rows[orow].get(&pcol).cloned() else {
                    continue;
                };
                for (c, v) in &pivot_entries {
                    let delta = &factor * v;
                    match self.rows[orow].entry(*c) {
                        std::collections::btree_map::Entry::Vacant(e) => {
                            if !delta.is_zero() {
                                e.insert(-&delta);
                            }
                        }
                        std::collections::btree_map::Entry::Occupied(mut e) => {
                            let new = e.get() - &delta;
                            if new.is_zero() {
                                e.remove();
                            } else {
                                *e.get_mut() = new;
                            }
                        }
                    }
                }
            }
        }
    }

    /// One kernel vector per free column, read off the reduced echelon form.
    fn kernel(&self) -> Vec<Vec<Scalar>> {
        let mut pivot_of_col: BTreeMap<usize, usize> = BTreeMap::new();
        for &(prow, pcol) in &self.pivots {
            pivot_of_col.insert(pcol, prow);
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_of_col.contains_key(&free) {
                continue;
            }
            let mut v = vec![self.field.zero(); self.cols];
            v[free] = self.field.one();
            for (&pcol, &prow) in &pivot_of_col {
                if let Some(coeff) = self.rows[prow].get(&free) {
                    v[pcol] = -coeff;
                }
            }
            basis.push(v);
        }
        basis
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    #[test]
    fn empty_matrices_have_rank_zero() {
        assert_eq!(SparseMatrix::zero(0, 0, q()).rank(), 0);
        assert_eq!(SparseMatrix::zero(0, 5, q()).rank(), 0);
        assert_eq!(SparseMatrix::zero(5, 0, q()).rank(), 0);
        assert_eq!(SparseMatrix::zero(3, 4, q()).rank(), 0);
    }

    #[test]
    fn identity_rank() {
        assert_eq!(SparseMatrix::identity(2, q()).rank(), 2);
    }

    #[test]
    fn f2_rank_collapses() {
        // [[1,1],[1,1]] over F2 has rank 1
        let f2 = FieldSpec::prime_field(2).unwrap();
        let m = SparseMatrix::from_int_rows(f2, &[&[1, 1], &[1, 1]]);
        assert_eq!(m.rank(), 1);
        // same matrix over Q also has rank 1, but [[1,1],[1,-1]] differs:
        let m2 = SparseMatrix::from_int_rows(q(), &[&[1, 1], &[1, -1]]);
        assert_eq!(m2.rank(), 2);
        let m2f2 = SparseMatrix::from_int_rows(f2, &[&[1, 1], &[1, -1]]);
        assert_eq!(m2f2.rank(), 1);
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        assert!(SparseMatrix::identity(2, q()).kernel_basis().is_empty());
    }

    #[test]
    fn kernel_of_zero_row() {
        // 1x2 zero matrix: kernel is everything
        let m = SparseMatrix::zero(1, 2, q());
        let basis = m.kernel_basis();
        assert_eq!(basis.len(), 2);
        for v in &basis {
            assert!(m.apply(v).iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn kernel_of_single_row() {
        // [[1,2]]: kernel spanned by (-2, 1)
        let m = SparseMatrix::from_int_rows(q(), &[&[1, 2]]);
        let basis = m.kernel_basis();
        assert_eq!(basis.len(), 1);
        let v = &basis[0];
        assert!(m.apply(v).iter().all(Scalar::is_zero));
        // proportional to (-2, 1): v0 * 1 == v1 * -2
        assert_eq!(&v[0] * &q().from_integer(1), &v[1] * &q().from_integer(-2));
        assert!(!v[1].is_zero());
    }

    #[test]
    fn composite_image_dimensions() {
        let id2 = SparseMatrix::identity(2, q());
        assert_eq!(image_dimension_of_composite(&id2, &id2).unwrap(), 2);

        let a = SparseMatrix::from_int_rows(q(), &[&[1, 0]]);
        let zero = SparseMatrix::zero(2, 3, q());
        assert_eq!(image_dimension_of_composite(&a, &zero).unwrap(), 0);

        // a = [[1,0]], b = [[0],[1]], a*b = [[0]]
        let b = SparseMatrix::from_int_rows(q(), &[&[0], &[1]]);
        assert_eq!(image_dimension_of_composite(&a, &b).unwrap(), 0);

        let bad = SparseMatrix::zero(3, 3, q());
        assert!(image_dimension_of_composite(&a, &bad).is_err());
    }

    #[test]
    fn rank_with_fractions() {
        let m = SparseMatrix::from_triplets(
            2,
            2,
            q(),
            vec![
                (0, 0, q().from_ratio(1, 2).unwrap()),
                (0, 1, q().from_ratio(1, 3).unwrap()),
                (1, 0, q().from_ratio(3, 2).unwrap()),
                (1, 1, q().from_integer(1)),
            ],
        )
        .unwrap();
        // second row = 3 * first row
        assert_eq!(m.rank(), 1);
        let basis = m.kernel_basis();
        assert_eq!(basis.len(), 1);
        assert!(m.apply(&basis[0]).iter().all(Scalar::is_zero));
    }

    #[test]
    fn builder_accumulates_and_cancels() {
        let mut b = MatrixBuilder::new(1, 1, q());
        b.add(0, 0, q().from_integer(2)).unwrap();
        b.add(0, 0, q().from_integer(-2)).unwrap();
        let m = b.build();
        assert!(m.is_zero());
        assert!(MatrixBuilder::new(1, 1, q())
            .add(1, 0, q().one())
            .is_err());
    }
}
