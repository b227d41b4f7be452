//! Chain complexes of degreewise finite-dimensional vector spaces.
//!
//! Homological (lower) indexing everywhere: the differential `d_n` maps
//! degree n to degree n-1. Cochain-type inputs live in non-positive degrees.
//! A degree with no stored basis is zero-dimensional, and a degree with no
//! stored differential has the zero differential; constructions that truncate
//! are responsible for building enough padding degrees that homology queries
//! stay interior.

use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::field::FieldSpec;
use crate::matrix::{MatrixBuilder, SparseMatrix};
use crate::window::{TruncationWindow, WindowError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexViolation {
    #[error("duplicate basis label `{label}` in degree {degree}")]
    DuplicateLabel { degree: i64, label: String },
    #[error(
        "differential at degree {degree} has shape {rows}x{cols}, expected {expected_rows}x{expected_cols}"
    )]
    ShapeMismatch {
        degree: i64,
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
    #[error("differential at degree {degree} is over {found}, complex is over {expected}")]
    MixedFields {
        degree: i64,
        found: FieldSpec,
        expected: FieldSpec,
    },
    #[error("d∘d ≠ 0 from degree {degree} on basis element `{witness}`")]
    NonvanishingSquare { degree: i64, witness: String },
}

/// Ordered basis labels per degree, over a fixed field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedBasis {
    field: FieldSpec,
    degrees: BTreeMap<i64, Vec<String>>,
}

impl GradedBasis {
    pub fn new(field: FieldSpec) -> Self {
        GradedBasis {
            field,
            degrees: BTreeMap::new(),
        }
    }

    pub fn from_labels(
        field: FieldSpec,
        labels: impl IntoIterator<Item = (i64, Vec<String>)>,
    ) -> Self {
        let mut degrees = BTreeMap::new();
        for (degree, ls) in labels {
            if !ls.is_empty() {
                degrees.insert(degree, ls);
            }
        }
        GradedBasis { field, degrees }
    }

    pub fn push(&mut self, degree: i64, label: impl Into<String>) -> usize {
        let v = self.degrees.entry(degree).or_default();
        v.push(label.into());
        v.len() - 1
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dimension(&self, degree: i64) -> usize {
        self.degrees.get(&degree).map_or(0, Vec::len)
    }

    pub fn labels(&self, degree: i64) -> &[String] {
        self.degrees.get(&degree).map_or(&[], Vec::as_slice)
    }

    pub fn nonempty_degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.degrees.keys().copied()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.degrees.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.degrees.keys().next_back().copied()
    }

    pub fn total_dimension(&self) -> usize {
        self.degrees.values().map(Vec::len).sum()
    }

    fn first_duplicate(&self) -> Option<(i64, String)> {
        for (&degree, labels) in &self.degrees {
            let mut seen = std::collections::BTreeSet::new();
            for l in labels {
                if !seen.insert(l) {
                    return Some((degree, l.clone()));
                }
            }
        }
        None
    }
}

/// Degree-indexed homology (or chain) dimensions on a certified window.
///
/// Every degree of the window is listed explicitly, zeros included, so that
/// emitted tables are deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BettiTable {
    entries: BTreeMap<i64, usize>,
    window: TruncationWindow,
}

impl BettiTable {
    pub fn new(window: TruncationWindow, dims: impl IntoIterator<Item = (i64, usize)>) -> Self {
        let mut entries: BTreeMap<i64, usize> = window.degrees().map(|d| (d, 0)).collect();
        for (degree, dim) in dims {
            assert!(
                window.contains(degree),
                "dimension reported outside certified window"
            );
            entries.insert(degree, dim);
        }
        BettiTable { entries, window }
    }

    pub fn window(&self) -> &TruncationWindow {
        &self.window
    }

    pub fn dimension(&self, degree: i64) -> Option<usize> {
        self.entries.get(&degree).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, usize)> + '_ {
        self.entries.iter().map(|(&d, &n)| (d, n))
    }

    /// Degrees carrying nonzero dimensions.
    pub fn support(&self) -> Vec<i64> {
        self.entries
            .iter()
            .filter(|(_, &n)| n > 0)
            .map(|(&d, _)| d)
            .collect()
    }

    /// Degreewise comparison on `window`; `Err(d)` reports the first
    /// mismatching degree. Degrees absent from a table count as 0.
    pub fn agree_on(&self, other: &BettiTable, window: &TruncationWindow) -> Result<(), i64> {
        for d in window.degrees() {
            let a = self.dimension(d).unwrap_or(0);
            let b = other.dimension(d).unwrap_or(0);
            if a != b {
                return Err(d);
            }
        }
        Ok(())
    }

    /// The same table with all degrees negated.
    pub fn negated(&self) -> BettiTable {
        let window = TruncationWindow {
            lo: -self.window.hi,
            hi: -self.window.lo,
            word_bound: self.window.word_bound,
            certified: self.window.certified,
        };
        let entries = self.entries.iter().map(|(&d, &n)| (-d, n)).collect();
        BettiTable { entries, window }
    }

    /// Restriction to a sub-window (degrees outside self's window are 0).
    pub fn restricted(&self, window: TruncationWindow) -> BettiTable {
        BettiTable::new(
            window,
            self.entries
                .iter()
                .filter(|(&d, _)| window.contains(d))
                .map(|(&d, &n)| (d, n)),
        )
    }
}

/// A chain complex: graded basis plus one matrix per degree.
#[derive(Debug, Clone)]
pub struct ChainComplex {
    basis: GradedBasis,
    /// d_n : C_n -> C_{n-1}, keyed by source degree n.
    differentials: BTreeMap<i64, SparseMatrix>,
}

impl ChainComplex {
    pub fn new(basis: GradedBasis, differentials: BTreeMap<i64, SparseMatrix>) -> Self {
        // zero matrices are never stored; `differential` materializes them
        let differentials = differentials
            .into_iter()
            .filter(|(_, m)| !m.is_zero())
            .collect();
        ChainComplex {
            basis,
            differentials,
        }
    }

    pub fn zero(field: FieldSpec) -> Self {
        ChainComplex {
            basis: GradedBasis::new(field),
            differentials: BTreeMap::new(),
        }
    }

    pub fn basis(&self) -> &GradedBasis {
        &self.basis
    }

    pub fn field(&self) -> FieldSpec {
        self.basis.field
    }

    pub fn dimension(&self, degree: i64) -> usize {
        self.basis.dimension(degree)
    }

    /// The matrix of d_n, materializing zeros with the right shape.
    pub fn differential(&self, degree: i64) -> SparseMatrix {
        match self.differentials.get(&degree) {
            Some(m) => m.clone(),
            None => SparseMatrix::zero(
                self.basis.dimension(degree - 1),
                self.basis.dimension(degree),
                self.basis.field,
            ),
        }
    }

    /// Shape coherence and d² = 0, exactly. The report names the first
    /// failing degree and the witnessing basis element.
    pub fn validate(&self) -> Result<(), ComplexViolation> {
        if let Some((degree, label)) = self.basis.first_duplicate() {
            return Err(ComplexViolation::DuplicateLabel { degree, label });
        }
        for (&n, m) in &self.differentials {
            if m.field() != self.basis.field {
                return Err(ComplexViolation::MixedFields {
                    degree: n,
                    found: m.field(),
                    expected: self.basis.field,
                });
            }
            let expected_rows = self.basis.dimension(n - 1);
            let expected_cols = self.basis.dimension(n);
            if m.rows() != expected_rows || m.cols() != expected_cols {
                return Err(ComplexViolation::ShapeMismatch {
                    degree: n,
                    rows: m.rows(),
                    cols: m.cols(),
                    expected_rows,
                    expected_cols,
                });
            }
        }
        for (&n, dn) in &self.differentials {
            if let Some(dn1) = self.differentials.get(&(n - 1)) {
                let square = dn1.compose(dn).expect("shapes already checked");
                if !square.is_zero() {
                    let col = square.iter().map(|(_, c, _)| c).min().unwrap();
                    return Err(ComplexViolation::NonvanishingSquare {
                        degree: n,
                        witness: self.basis.labels(n)[col].clone(),
                    });
                }
            }
        }
        Ok(())
    }

    /// dim H_n = dim ker d_n - rank d_{n+1} for every degree of the window.
    ///
    /// Ranks for distinct degrees are computed in parallel; each degree only
    /// reads d_n and d_{n+1}.
    pub fn homology_dimensions(
        &self,
        window: &TruncationWindow,
    ) -> Result<BettiTable, WindowError> {
        window.require_certified()?;
        let ranks: BTreeMap<i64, usize> = (window.lo..=window.hi + 1)
            .collect::<Vec<_>>()
            .par_iter()
            .map(|&n| (n, self.differential(n).rank()))
            .collect();
        let dims = window.degrees().map(|n| {
            let kernel = self.dimension(n) - ranks[&n];
            (n, kernel - ranks[&(n + 1)])
        });
        Ok(BettiTable::new(*window, dims.collect::<Vec<_>>()))
    }

    /// Linear dual: D(C)_m is the dual of C_{-m}; the differential is the
    /// transpose of d_{-m+1} with sign (-1)^m on the degree-m component.
    pub fn dual(&self) -> ChainComplex {
        let mut basis = GradedBasis::new(self.basis.field);
        for degree in self.basis.nonempty_degrees() {
            for label in self.basis.labels(degree) {
                basis.push(-degree, format!("{label}*"));
            }
        }
        let mut differentials = BTreeMap::new();
        for (&k, dk) in &self.differentials {
            // d_k : C_k -> C_{k-1} dualizes to a map in dual degree m = 1-k.
            let m = 1 - k;
            let sign = if m.rem_euclid(2) == 0 {
                self.basis.field.one()
            } else {
                -&self.basis.field.one()
            };
            differentials.insert(m, dk.transpose().scaled(&sign));
        }
        ChainComplex::new(basis, differentials)
    }

    /// Tensor product restricted to `window`, with the Koszul rule
    /// d(a⊗b) = da⊗b + (-1)^{|a|} a⊗db.
    ///
    /// Degrees outside the window are dropped wholesale, so homology is only
    /// meaningful where the window already contains everything adjacent.
    pub fn tensor(&self, other: &ChainComplex, window: &TruncationWindow) -> ChainComplex {
        assert_eq!(self.field(), other.field(), "tensor over mixed fields");
        let field = self.field();
        let layout = TensorLayout::new(self, other, window);

        let mut basis = GradedBasis::new(field);
        for (&n, blocks) in &layout.blocks {
            for &(i, _) in blocks {
                for la in self.basis.labels(i) {
                    for lb in other.basis.labels(n - i) {
                        basis.push(n, format!("{la}⊗{lb}"));
                    }
                }
            }
        }

        let mut differentials = BTreeMap::new();
        for (&n, _) in &layout.blocks {
            let rows = layout.dimension(n - 1);
            let cols = layout.dimension(n);
            if cols == 0 || rows == 0 {
                continue;
            }
            let mut b = MatrixBuilder::new(rows, cols, field);
            for &(i, _) in &layout.blocks[&n] {
                let j = n - i;
                let da = self.differential(i);
                let db = other.differential(j);
                let parity = i.rem_euclid(2) == 1;
                for ai in 0..self.dimension(i) {
                    for bi in 0..other.dimension(j) {
                        let col = layout.index(n, i, ai, bi).unwrap();
                        // da ⊗ 1
                        for (r, c, v) in da.iter() {
                            if c == ai {
                                if let Some(row) = layout.index(n - 1, i - 1, r, bi) {
                                    b.add(row, col, v.clone()).unwrap();
                                }
                            }
                        }
                        // (-1)^{|a|} 1 ⊗ db
                        for (r, c, v) in db.iter() {
                            if c == bi {
                                if let Some(row) = layout.index(n - 1, i, ai, r) {
                                    let v = if parity { -v } else { v.clone() };
                                    b.add(row, col, v).unwrap();
                                }
                            }
                        }
                    }
                }
            }
            let m = b.build();
            if !m.is_zero() {
                differentials.insert(n, m);
            }
        }
        ChainComplex::new(basis, differentials)
    }

    /// Alternating sum of chain dimensions. Complexes are finitely supported
    /// by construction, so this is always defined.
    pub fn euler_characteristic(&self) -> i64 {
        self.basis
            .nonempty_degrees()
            .map(|n| {
                let d = self.basis.dimension(n) as i64;
                if n.rem_euclid(2) == 0 {
                    d
                } else {
                    -d
                }
            })
            .sum()
    }
}

/// Index bookkeeping for (A⊗B)_n = ⊕_i A_i ⊗ B_{n-i}, blocks ordered by i.
struct TensorLayout {
    /// degree -> ordered (i, block offset)
    blocks: BTreeMap<i64, Vec<(i64, usize)>>,
    dims_b: BTreeMap<i64, usize>,
    dims: BTreeMap<i64, usize>,
}

impl TensorLayout {
    fn new(a: &ChainComplex, b: &ChainComplex, window: &TruncationWindow) -> Self {
        let mut blocks: BTreeMap<i64, Vec<(i64, usize)>> = BTreeMap::new();
        let mut dims: BTreeMap<i64, usize> = BTreeMap::new();
        let mut dims_b: BTreeMap<i64, usize> = BTreeMap::new();
        for j in b.basis.nonempty_degrees() {
            dims_b.insert(j, b.dimension(j));
        }
        for n in window.lo..=window.hi {
            let mut offset = 0;
            let mut list = Vec::new();
            for i in a.basis.nonempty_degrees() {
                let db = b.dimension(n - i);
                if db == 0 {
                    continue;
                }
                list.push((i, offset));
                offset += a.dimension(i) * db;
            }
            if !list.is_empty() {
                blocks.insert(n, list);
                dims.insert(n, offset);
            }
        }
        TensorLayout {
            blocks,
            dims_b,
            dims,
        }
    }

    fn dimension(&self, degree: i64) -> usize {
        self.dims.get(&degree).copied().unwrap_or(0)
    }

    fn index(&self, degree: i64, i: i64, a_idx: usize, b_idx: usize) -> Option<usize> {
        let blocks = self.blocks.get(&degree)?;
        let &(_, offset) = blocks.iter().find(|&&(bi, _)| bi == i)?;
        let db = self.dims_b.get(&(degree - i)).copied()?;
        Some(offset + a_idx * db + b_idx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::SparseMatrix;

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    fn two_term_identity() -> ChainComplex {
        // k in degrees 1 and 0, d_1 = identity
        let basis = GradedBasis::from_labels(q(), [(1, vec!["e".into()]), (0, vec!["v".into()])]);
        let mut d = BTreeMap::new();
        d.insert(1, SparseMatrix::identity(1, q()));
        ChainComplex::new(basis, d)
    }

    #[test]
    fn zero_complex_validates() {
        let c = ChainComplex::zero(q());
        assert!(c.validate().is_ok());
        assert_eq!(c.euler_characteristic(), 0);
        let t = c
            .homology_dimensions(&TruncationWindow::exact(-2, 2))
            .unwrap();
        assert!(t.support().is_empty());
    }

    #[test]
    fn two_term_identity_is_acyclic() {
        let c = two_term_identity();
        assert!(c.validate().is_ok());
        assert_eq!(c.euler_characteristic(), 0);
        let t = c
            .homology_dimensions(&TruncationWindow::exact(-1, 2))
            .unwrap();
        assert!(t.support().is_empty());
    }

    #[test]
    fn single_generator_homology() {
        let basis = GradedBasis::from_labels(q(), [(0, vec!["v".into()])]);
        let c = ChainComplex::new(basis, BTreeMap::new());
        let t = c
            .homology_dimensions(&TruncationWindow::exact(-1, 1))
            .unwrap();
        assert_eq!(t.dimension(0), Some(1));
        assert_eq!(t.support(), vec![0]);
    }

    #[test]
    fn d_squared_violation_is_reported() {
        // k -> k -> k with both maps the identity
        let basis = GradedBasis::from_labels(
            q(),
            [
                (2, vec!["a".into()]),
                (1, vec!["b".into()]),
                (0, vec!["c".into()]),
            ],
        );
        let mut d = BTreeMap::new();
        d.insert(2, SparseMatrix::identity(1, q()));
        d.insert(1, SparseMatrix::identity(1, q()));
        let c = ChainComplex::new(basis, d);
        match c.validate() {
            Err(ComplexViolation::NonvanishingSquare { degree, witness }) => {
                assert_eq!(degree, 2);
                assert_eq!(witness, "a");
            }
            other => panic!("expected d² violation, got {other:?}"),
        }
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let basis = GradedBasis::from_labels(q(), [(1, vec!["e".into()]), (0, vec!["v".into()])]);
        let mut d = BTreeMap::new();
        d.insert(1, SparseMatrix::zero(3, 1, q()));
        let c = ChainComplex {
            basis,
            differentials: d,
        };
        assert!(matches!(
            c.validate(),
            Err(ComplexViolation::ShapeMismatch { degree: 1, .. })
        ));
    }

    #[test]
    fn uncertified_window_is_refused() {
        let c = two_term_identity();
        let w = TruncationWindow::new(0, 1, 0, false).unwrap();
        assert!(matches!(
            c.homology_dimensions(&w),
            Err(WindowError::NotCertified { .. })
        ));
    }

    #[test]
    fn dual_of_zero_and_singleton() {
        let c = ChainComplex::zero(q());
        assert_eq!(c.dual().basis().total_dimension(), 0);

        let basis = GradedBasis::from_labels(q(), [(3, vec!["g".into()])]);
        let c = ChainComplex::new(basis, BTreeMap::new());
        let d = c.dual();
        assert_eq!(d.dimension(-3), 1);
        assert_eq!(d.basis().labels(-3), &["g*".to_string()]);
        assert_eq!(d.basis().total_dimension(), 1);
    }

    #[test]
    fn dual_homology_mirrors_degrees() {
        let c = two_term_identity();
        let d = c.dual();
        assert!(d.validate().is_ok());
        let t = d
            .homology_dimensions(&TruncationWindow::exact(-2, 2))
            .unwrap();
        assert!(t.support().is_empty());
        // double dual matches the original's Betti table and ranks
        let dd = d.dual();
        assert!(dd.validate().is_ok());
        for n in [-1, 0, 1, 2] {
            assert_eq!(dd.dimension(n), c.dimension(n));
            assert_eq!(dd.differential(n).rank(), c.differential(n).rank());
        }
    }

    #[test]
    fn tensor_with_unit_complex() {
        let c = two_term_identity();
        let unit = ChainComplex::new(
            GradedBasis::from_labels(q(), [(0, vec!["1".into()])]),
            BTreeMap::new(),
        );
        let w = TruncationWindow::exact(-2, 4);
        let t = c.tensor(&unit, &w);
        assert!(t.validate().is_ok());
        for n in -2..=4 {
            assert_eq!(t.dimension(n), c.dimension(n));
            assert_eq!(t.differential(n).rank(), c.differential(n).rank());
        }
    }

    #[test]
    fn euler_characteristic_multiplies_under_tensor() {
        let c = two_term_identity();
        let basis = GradedBasis::from_labels(q(), [(1, vec!["x".into(), "y".into()])]);
        let e = ChainComplex::new(basis, BTreeMap::new());
        assert_eq!(e.euler_characteristic(), -2);
        let w = TruncationWindow::exact(-4, 6);
        let t = c.tensor(&e, &w);
        assert!(t.validate().is_ok());
        assert_eq!(
            t.euler_characteristic(),
            c.euler_characteristic() * e.euler_characteristic()
        );
        // and the euler characteristic equals the alternating homology sum
        let h = t.homology_dimensions(&w).unwrap();
        let alt: i64 = h
            .iter()
            .map(|(d, n)| if d.rem_euclid(2) == 0 { n as i64 } else { -(n as i64) })
            .sum();
        assert_eq!(t.euler_characteristic(), alt);
    }

    #[test]
    fn single_generator_in_degree_one_has_chi_minus_one() {
        let basis = GradedBasis::from_labels(q(), [(1, vec!["x".into()])]);
        let c = ChainComplex::new(basis, BTreeMap::new());
        assert_eq!(c.euler_characteristic(), -1);
    }
}
