//! Window operators: finite blocks with a declared off-window tail.
//!
//! An operator is stored as a rational block indexed by row and column
//! labels plus a tail rule. `Tail::Identity` means the operator acts as the
//! identity outside its window, which is the canonical shape for a doubly
//! stochastic operator on the full coordinate space. `Tail::Zero` means the
//! operator is only defined on the span of its column window and is used
//! for embeddings such as non-surjective relabelings.
//!
//! Stochasticity checks on a zero-tail window read the block as a map from
//! the span of its columns into the ambient space. Row and column sums are
//! checked on the declared window; additionally, when the block alone looks
//! doubly stochastic but its row label set differs from its column label
//! set, the columns missing from the row set are reported as rows summing
//! to zero. That refinement is what keeps a pure shift, a column-stochastic
//! isometry, from being certified doubly stochastic on the common index
//! set.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_integer::Integer;
use thiserror::Error;

use crate::label::IndexLabel;
use crate::scalar::{NormValue, PNorm, Scalar};
use crate::sparse::SparseVec;

/// Behaviour of an operator outside its window.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Tail {
    /// Acts as the identity off the window; requires equal row and column
    /// label sets.
    Identity,
    /// Defined only on the span of the column window.
    Zero,
}

impl fmt::Display for Tail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tail::Identity => write!(f, "identity"),
            Tail::Zero => write!(f, "zero"),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum OperatorError {
    #[error("block shape does not match {rows} row labels x {cols} column labels")]
    ShapeMismatch { rows: usize, cols: usize },
    #[error("duplicate label {label} in window")]
    DuplicateLabel { label: IndexLabel },
    #[error("identity tail requires equal row and column label sets; {label} appears on one side only")]
    WindowMismatch { label: IndexLabel },
    #[error("negative entry {value} at row {row}, column {col}")]
    NegativeEntry {
        row: IndexLabel,
        col: IndexLabel,
        value: Scalar,
    },
    #[error("row {row} sums to {sum}, expected 1")]
    RowSum { row: IndexLabel, sum: Scalar },
    #[error("column {col} sums to {sum}, expected 1")]
    ColSum { col: IndexLabel, sum: Scalar },
    #[error("vector support includes {label}, outside the operator's column window")]
    SupportOutsideWindow { label: IndexLabel },
    #[error("windows are incompatible: output label {label} is outside the left operator's column window")]
    IncompatibleWindows { label: IndexLabel },
    #[error("operator is not doubly stochastic")]
    NotDoublyStochastic,
    #[error("injections {first} and {second} have overlapping images (label {collision})")]
    OverlappingImages {
        first: usize,
        second: usize,
        collision: IndexLabel,
    },
    #[error(transparent)]
    Injection(#[from] InjectionError),
}

/// One failed stochasticity condition.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum StochasticViolation {
    NegativeEntry {
        row: IndexLabel,
        col: IndexLabel,
        value: Scalar,
    },
    NonSquareBlock {
        rows: usize,
        cols: usize,
    },
    RowSum {
        row: IndexLabel,
        sum: Scalar,
    },
    ColSum {
        col: IndexLabel,
        sum: Scalar,
    },
}

impl fmt::Display for StochasticViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StochasticViolation::NegativeEntry { row, col, value } => {
                write!(f, "negative entry {value} at ({row}, {col})")
            }
            StochasticViolation::NonSquareBlock { rows, cols } => {
                write!(f, "non-square block ({rows}x{cols})")
            }
            StochasticViolation::RowSum { row, sum } => {
                write!(f, "row {row} sums to {sum}")
            }
            StochasticViolation::ColSum { col, sum } => {
                write!(f, "column {col} sums to {sum}")
            }
        }
    }
}

/// The outcome of a stochasticity check.
///
/// `doubly_stochastic` holds exactly when both one-sided flags hold, and
/// `permutation` implies `doubly_stochastic`. Violations are listed in a
/// fixed order: negative entries in row-major scan order, a non-square
/// block note, column sums left to right, row sums top to bottom, then
/// rows missing from a zero-tail window in ascending label order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StochasticVerdict {
    pub row_stochastic: bool,
    pub column_stochastic: bool,
    pub doubly_stochastic: bool,
    pub permutation: bool,
    pub violations: Vec<StochasticViolation>,
}

impl fmt::Display for StochasticVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "row stochastic: {}\ncolumn stochastic: {}\ndoubly stochastic: {}\npermutation: {}",
            self.row_stochastic, self.column_stochastic, self.doubly_stochastic, self.permutation
        )?;
        if self.violations.is_empty() {
            write!(f, "violations: none")
        } else {
            write!(f, "violations:")?;
            for v in &self.violations {
                write!(f, "\n  {v}")?;
            }
            Ok(())
        }
    }
}

/// A finite rational block with labelled rows and columns and a tail rule.
///
/// Construction canonicalizes the window: labels are sorted ascending and
/// the block is permuted to match, so equal operators have equal stored
/// forms.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WindowOperator {
    rows: Vec<IndexLabel>,
    cols: Vec<IndexLabel>,
    block: Vec<Vec<Scalar>>,
    tail: Tail,
}

impl WindowOperator {
    pub fn new(
        rows: Vec<IndexLabel>,
        cols: Vec<IndexLabel>,
        block: Vec<Vec<Scalar>>,
        tail: Tail,
    ) -> Result<Self, OperatorError> {
        if block.len() != rows.len() || block.iter().any(|r| r.len() != cols.len()) {
            return Err(OperatorError::ShapeMismatch {
                rows: rows.len(),
                cols: cols.len(),
            });
        }
        check_distinct(&rows)?;
        check_distinct(&cols)?;
        if tail == Tail::Identity {
            let row_set: BTreeSet<&IndexLabel> = rows.iter().collect();
            let col_set: BTreeSet<&IndexLabel> = cols.iter().collect();
            if let Some(label) = row_set.symmetric_difference(&col_set).next() {
                return Err(OperatorError::WindowMismatch {
                    label: (*label).clone(),
                });
            }
        }

        let row_order = sort_order(&rows);
        let col_order = sort_order(&cols);
        let sorted_rows: Vec<IndexLabel> = row_order.iter().map(|&i| rows[i].clone()).collect();
        let sorted_cols: Vec<IndexLabel> = col_order.iter().map(|&j| cols[j].clone()).collect();
        let sorted_block: Vec<Vec<Scalar>> = row_order
            .iter()
            .map(|&i| col_order.iter().map(|&j| block[i][j].clone()).collect())
            .collect();
        Ok(WindowOperator {
            rows: sorted_rows,
            cols: sorted_cols,
            block: sorted_block,
            tail,
        })
    }

    /// Builds the operator determined by nonnegative coefficients whose
    /// rows and columns each sum to one, with an identity tail.
    ///
    /// The first failing condition is reported, scanning negativity in
    /// row-major order, then column sums left to right, then row sums top
    /// to bottom.
    pub fn from_coefficients(
        rows: Vec<IndexLabel>,
        cols: Vec<IndexLabel>,
        block: Vec<Vec<Scalar>>,
    ) -> Result<Self, OperatorError> {
        let op = WindowOperator::new(rows, cols, block, Tail::Identity)?;
        for (i, row) in op.block.iter().enumerate() {
            for (j, value) in row.iter().enumerate() {
                if value.is_negative() {
                    return Err(OperatorError::NegativeEntry {
                        row: op.rows[i].clone(),
                        col: op.cols[j].clone(),
                        value: value.clone(),
                    });
                }
            }
        }
        for (j, col) in op.cols.iter().enumerate() {
            let sum: Scalar = op.block.iter().map(|row| &row[j]).sum();
            if sum != Scalar::one() {
                return Err(OperatorError::ColSum {
                    col: col.clone(),
                    sum,
                });
            }
        }
        for (i, row) in op.rows.iter().enumerate() {
            let sum: Scalar = op.block[i].iter().sum();
            if sum != Scalar::one() {
                return Err(OperatorError::RowSum {
                    row: row.clone(),
                    sum,
                });
            }
        }
        Ok(op)
    }

    /// The identity operator on `labels`.
    pub fn identity(labels: Vec<IndexLabel>) -> Result<Self, OperatorError> {
        let n = labels.len();
        let block = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Scalar::one() } else { Scalar::zero() })
                    .collect()
            })
            .collect();
        WindowOperator::new(labels.clone(), labels, block, Tail::Identity)
    }

    /// The uniform averaging operator on `labels`.
    pub fn uniform(labels: Vec<IndexLabel>) -> Result<Self, OperatorError> {
        let n = labels.len() as i64;
        let w = Scalar::one() / Scalar::from_int(n.max(1));
        let block = vec![vec![w; labels.len()]; labels.len()];
        WindowOperator::new(labels.clone(), labels, block, Tail::Identity)
    }

    pub fn row_labels(&self) -> &[IndexLabel] {
        &self.rows
    }

    pub fn col_labels(&self) -> &[IndexLabel] {
        &self.cols
    }

    pub fn block(&self) -> &[Vec<Scalar>] {
        &self.block
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    pub fn entry(&self, row: &IndexLabel, col: &IndexLabel) -> Scalar {
        let (ri, ci) = (index_of(&self.rows, row), index_of(&self.cols, col));
        match (ri, ci) {
            (Some(i), Some(j)) => self.block[i][j].clone(),
            _ => match self.tail {
                Tail::Identity if row == col => Scalar::one(),
                _ => Scalar::zero(),
            },
        }
    }

    /// Runs the stochasticity checks described on the module.
    pub fn validate(&self) -> StochasticVerdict {
        let mut violations = Vec::new();
        for (i, row) in self.block.iter().enumerate() {
            for (j, value) in row.iter().enumerate() {
                if value.is_negative() {
                    violations.push(StochasticViolation::NegativeEntry {
                        row: self.rows[i].clone(),
                        col: self.cols[j].clone(),
                        value: value.clone(),
                    });
                }
            }
        }
        if self.rows.len() != self.cols.len() {
            violations.push(StochasticViolation::NonSquareBlock {
                rows: self.rows.len(),
                cols: self.cols.len(),
            });
        }
        let mut col_ok = true;
        for (j, col) in self.cols.iter().enumerate() {
            let sum: Scalar = self.block.iter().map(|row| &row[j]).sum();
            if sum != Scalar::one() {
                col_ok = false;
                violations.push(StochasticViolation::ColSum {
                    col: col.clone(),
                    sum,
                });
            }
        }
        let mut row_ok = true;
        for (i, row) in self.rows.iter().enumerate() {
            let sum: Scalar = self.block[i].iter().sum();
            if sum != Scalar::one() {
                row_ok = false;
                violations.push(StochasticViolation::RowSum {
                    row: row.clone(),
                    sum,
                });
            }
        }
        let negatives = violations
            .iter()
            .any(|v| matches!(v, StochasticViolation::NegativeEntry { .. }));

        if self.tail == Tail::Zero && !negatives && row_ok && col_ok {
            let row_set: BTreeSet<&IndexLabel> = self.rows.iter().collect();
            for col in &self.cols {
                if !row_set.contains(col) {
                    row_ok = false;
                    violations.push(StochasticViolation::RowSum {
                        row: col.clone(),
                        sum: Scalar::zero(),
                    });
                }
            }
        }

        let row_stochastic = row_ok && !negatives;
        let column_stochastic = col_ok && !negatives;
        let doubly_stochastic = row_stochastic && column_stochastic;
        let permutation = doubly_stochastic
            && self
                .block
                .iter()
                .flatten()
                .all(|v| v.is_zero() || *v == Scalar::one());
        StochasticVerdict {
            row_stochastic,
            column_stochastic,
            doubly_stochastic,
            permutation,
            violations,
        }
    }

    pub fn is_doubly_stochastic(&self) -> bool {
        self.validate().doubly_stochastic
    }

    /// Applies the operator to a finitely supported vector, exactly.
    ///
    /// Under a zero tail the support of `f` must lie inside the column
    /// window; under an identity tail, off-window coordinates pass through
    /// unchanged.
    pub fn apply(&self, f: &SparseVec) -> Result<SparseVec, OperatorError> {
        let mut out = SparseVec::new();
        for (label, value) in f.iter() {
            match index_of(&self.cols, label) {
                Some(j) => {
                    for (i, row) in self.block.iter().enumerate() {
                        if !row[j].is_zero() {
                            out.add_at(self.rows[i].clone(), &(&row[j] * value));
                        }
                    }
                }
                None => match self.tail {
                    Tail::Identity => out.add_at(label.clone(), value),
                    Tail::Zero => {
                        return Err(OperatorError::SupportOutsideWindow {
                            label: label.clone(),
                        })
                    }
                },
            }
        }
        Ok(out)
    }

    /// The composition `self` after `other`, unified onto a common window.
    ///
    /// When `self` has a zero tail, every label the right operator can emit
    /// must lie in `self`'s column window; otherwise mass would be silently
    /// dropped and the composition is refused as incompatible.
    pub fn compose(&self, other: &WindowOperator) -> Result<WindowOperator, OperatorError> {
        match (self.tail, other.tail) {
            (Tail::Identity, Tail::Identity) => {
                let union = label_union(&[&self.cols, &other.cols]);
                let a = self.extended_block(&union, &union);
                let b = other.extended_block(&union, &union);
                WindowOperator::new(union.clone(), union, matmul(&a, &b), Tail::Identity)
            }
            (Tail::Zero, Tail::Identity) => {
                let col_set: BTreeSet<&IndexLabel> = self.cols.iter().collect();
                if let Some(label) = other.cols.iter().find(|l| !col_set.contains(l)) {
                    return Err(OperatorError::IncompatibleWindows {
                        label: label.clone(),
                    });
                }
                let b = other.extended_block(&self.cols, &self.cols);
                WindowOperator::new(
                    self.rows.clone(),
                    self.cols.clone(),
                    matmul(&self.block, &b),
                    Tail::Zero,
                )
            }
            (Tail::Identity, Tail::Zero) => {
                let mid = label_union(&[&self.cols, &other.rows]);
                let a = self.extended_block(&mid, &mid);
                let b = other.extended_block(&mid, &other.cols);
                WindowOperator::new(mid, other.cols.clone(), matmul(&a, &b), Tail::Zero)
            }
            (Tail::Zero, Tail::Zero) => {
                let col_set: BTreeSet<&IndexLabel> = self.cols.iter().collect();
                if let Some(label) = other.rows.iter().find(|l| !col_set.contains(l)) {
                    return Err(OperatorError::IncompatibleWindows {
                        label: label.clone(),
                    });
                }
                let b = other.extended_block(&self.cols, &other.cols);
                WindowOperator::new(
                    self.rows.clone(),
                    other.cols.clone(),
                    matmul(&self.block, &b),
                    Tail::Zero,
                )
            }
        }
    }

    /// The permutation-style operator of an injection restricted to a
    /// window: entry one at `(image, source)` for each window label.
    ///
    /// When the injection maps the window onto itself the result is a true
    /// permutation of the coordinate space (identity tail); otherwise the
    /// result is a zero-tail embedding whose validation deliberately
    /// reports the rows missing from the common index set.
    pub fn permutation_from_injection(
        injection: &IndexInjection,
        window: &[IndexLabel],
    ) -> Result<WindowOperator, OperatorError> {
        check_distinct(window)?;
        let mut cols = window.to_vec();
        cols.sort();
        let mut images = Vec::with_capacity(cols.len());
        let mut seen = BTreeSet::new();
        for label in &cols {
            let image = injection.apply(label)?;
            if !seen.insert(image.clone()) {
                return Err(InjectionError::NotInjective { image }.into());
            }
            images.push(image);
        }
        let col_set: BTreeSet<&IndexLabel> = cols.iter().collect();
        let onto_window = images.iter().all(|l| col_set.contains(l));
        let rows: Vec<IndexLabel> = if onto_window {
            cols.clone()
        } else {
            seen.into_iter().collect()
        };
        let mut block = vec![vec![Scalar::zero(); cols.len()]; rows.len()];
        for (j, image) in images.iter().enumerate() {
            let i = index_of(&rows, image).expect("image is a row label");
            block[i][j] = Scalar::one();
        }
        let tail = if onto_window { Tail::Identity } else { Tail::Zero };
        WindowOperator::new(rows, cols, block, tail)
    }

    /// Conjugates a doubly stochastic operator by a family of injections
    /// with pairwise disjoint images.
    ///
    /// The result carries one copy of the block on each injection's image
    /// of the window, vanishes across distinct images, and keeps the
    /// original tail kind, so with an identity tail it is the identity off
    /// all images. The defining property is the exact intertwining
    /// `P D = D' P` for each injection's window operator `P`.
    pub fn conjugate_by_injections(
        &self,
        injections: &[IndexInjection],
    ) -> Result<WindowOperator, OperatorError> {
        if !self.is_doubly_stochastic() {
            return Err(OperatorError::NotDoublyStochastic);
        }
        for (a, one) in injections.iter().enumerate() {
            for (b, two) in injections.iter().enumerate().skip(a + 1) {
                if let Some(collision) = one.image_intersection_witness(two) {
                    return Err(OperatorError::OverlappingImages {
                        first: a,
                        second: b,
                        collision,
                    });
                }
            }
        }

        // self is doubly stochastic, so its row and column label sets agree.
        let window = &self.cols;
        let mut image_to_source: BTreeMap<IndexLabel, (usize, IndexLabel)> = BTreeMap::new();
        for (k, injection) in injections.iter().enumerate() {
            for label in window {
                let image = injection.apply(label)?;
                if image_to_source
                    .insert(image.clone(), (k, label.clone()))
                    .is_some()
                {
                    return Err(OperatorError::OverlappingImages {
                        first: k,
                        second: k,
                        collision: image,
                    });
                }
            }
        }
        let out_labels: Vec<IndexLabel> = image_to_source.keys().cloned().collect();
        let n = out_labels.len();
        let mut block = vec![vec![Scalar::zero(); n]; n];
        for (i, row_label) in out_labels.iter().enumerate() {
            let (ki, source_row) = &image_to_source[row_label];
            for (j, col_label) in out_labels.iter().enumerate() {
                let (kj, source_col) = &image_to_source[col_label];
                if ki == kj {
                    block[i][j] = self.entry(source_row, source_col);
                }
            }
        }
        WindowOperator::new(out_labels.clone(), out_labels, block, self.tail)
    }

    pub fn transpose(&self) -> WindowOperator {
        let mut block = vec![vec![Scalar::zero(); self.rows.len()]; self.cols.len()];
        for (i, row) in self.block.iter().enumerate() {
            for (j, value) in row.iter().enumerate() {
                block[j][i] = value.clone();
            }
        }
        WindowOperator {
            rows: self.cols.clone(),
            cols: self.rows.clone(),
            block,
            tail: self.tail,
        }
    }

    /// Whether both operators act identically on the whole space. Requires
    /// the same tail kind; windows are unified before comparison.
    pub fn equivalent(&self, other: &WindowOperator) -> bool {
        if self.tail != other.tail {
            return false;
        }
        let rows = label_union(&[&self.rows, &other.rows]);
        let cols = if self.tail == Tail::Identity {
            rows.clone()
        } else {
            label_union(&[&self.cols, &other.cols])
        };
        self.extended_block(&rows, &cols) == other.extended_block(&rows, &cols)
    }

    /// The block re-indexed onto larger label lists; the tail rule fills
    /// entries outside the stored window.
    fn extended_block(&self, rows: &[IndexLabel], cols: &[IndexLabel]) -> Vec<Vec<Scalar>> {
        rows.iter()
            .map(|r| cols.iter().map(|c| self.entry(r, c)).collect())
            .collect()
    }
}

impl fmt::Display for WindowOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let col_headers: Vec<String> = self.cols.iter().map(|l| l.to_string()).collect();
        let row_headers: Vec<String> = self.rows.iter().map(|l| l.to_string()).collect();
        let cells: Vec<Vec<String>> = self
            .block
            .iter()
            .map(|row| row.iter().map(|v| v.to_string()).collect())
            .collect();
        let row_width = row_headers.iter().map(String::len).max().unwrap_or(0);
        let mut widths: Vec<usize> = col_headers.iter().map(String::len).collect();
        for row in &cells {
            for (j, cell) in row.iter().enumerate() {
                widths[j] = widths[j].max(cell.len());
            }
        }
        writeln!(f, "tail: {}", self.tail)?;
        write!(f, "{:>row_width$}", "")?;
        for (j, header) in col_headers.iter().enumerate() {
            write!(f, "  {:>width$}", header, width = widths[j])?;
        }
        for (i, row) in cells.iter().enumerate() {
            write!(f, "\n{:>row_width$}", row_headers[i])?;
            for (j, cell) in row.iter().enumerate() {
                write!(f, "  {:>width$}", cell, width = widths[j])?;
            }
        }
        Ok(())
    }
}

/// Contraction evidence for one operator over a batch of sample vectors.
#[derive(Clone, Debug)]
pub struct ContractionReport {
    pub checked: usize,
    /// Largest observed `|Df|_p / |f|_p` over samples with nonzero norm.
    pub max_ratio: f64,
    /// Indices of samples whose image norm exceeded the source norm.
    pub violations: Vec<usize>,
}

impl ContractionReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ContractionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "checked {} samples, max norm ratio {:.6}: {}",
            self.checked,
            self.max_ratio,
            if self.passed() {
                "no expansion"
            } else {
                "EXPANSION OBSERVED"
            }
        )
    }
}

/// Checks `|Df|_p <= |f|_p` for each sample: exactly at `p = 1`, and with
/// relative slack 1e-9 otherwise. The operator must be doubly stochastic.
pub fn contraction_check(
    op: &WindowOperator,
    samples: &[SparseVec],
    p: &PNorm,
) -> Result<ContractionReport, OperatorError> {
    if !op.is_doubly_stochastic() {
        return Err(OperatorError::NotDoublyStochastic);
    }
    let mut max_ratio = 0.0f64;
    let mut violations = Vec::new();
    for (k, f) in samples.iter().enumerate() {
        let image = op.apply(f)?;
        let lhs = image.p_norm(p);
        let rhs = f.p_norm(p);
        let contractive = match (&lhs, &rhs) {
            (NormValue::Exact(a), NormValue::Exact(b)) => a <= b,
            _ => lhs.as_f64() <= rhs.as_f64() * (1.0 + 1e-9),
        };
        if !contractive {
            violations.push(k);
        }
        let denom = rhs.as_f64();
        if denom > 0.0 {
            max_ratio = max_ratio.max(lhs.as_f64() / denom);
        }
    }
    Ok(ContractionReport {
        checked: samples.len(),
        max_ratio,
        violations,
    })
}

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum InjectionError {
    #[error("map sends two labels to {image}; an injection cannot")]
    NotInjective { image: IndexLabel },
    #[error("affine rule requires a nonzero scale")]
    ZeroScale,
    #[error("label {label} is outside the injection's domain")]
    OutsideDomain { label: IndexLabel },
    #[error("affine image of {label} overflows the integer label range")]
    Overflow { label: IndexLabel },
}

/// An injective relabeling: an explicit finite map, or an affine rule
/// `n -> scale * n + offset` on all integer labels.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum IndexInjection {
    Map(BTreeMap<IndexLabel, IndexLabel>),
    Affine { scale: i64, offset: i64 },
}

impl IndexInjection {
    pub fn from_map(
        map: BTreeMap<IndexLabel, IndexLabel>,
    ) -> Result<IndexInjection, InjectionError> {
        let mut seen = BTreeSet::new();
        for image in map.values() {
            if !seen.insert(image.clone()) {
                return Err(InjectionError::NotInjective {
                    image: image.clone(),
                });
            }
        }
        Ok(IndexInjection::Map(map))
    }

    pub fn affine(scale: i64, offset: i64) -> Result<IndexInjection, InjectionError> {
        if scale == 0 {
            return Err(InjectionError::ZeroScale);
        }
        Ok(IndexInjection::Affine { scale, offset })
    }

    /// The identity map on an explicit window.
    pub fn identity_on(labels: &[IndexLabel]) -> IndexInjection {
        IndexInjection::Map(labels.iter().map(|l| (l.clone(), l.clone())).collect())
    }

    pub fn apply(&self, label: &IndexLabel) -> Result<IndexLabel, InjectionError> {
        match self {
            IndexInjection::Map(map) => {
                map.get(label).cloned().ok_or(InjectionError::OutsideDomain {
                    label: label.clone(),
                })
            }
            IndexInjection::Affine { scale, offset } => {
                let n = label.as_int().ok_or(InjectionError::OutsideDomain {
                    label: label.clone(),
                })?;
                let image = i128::from(*scale) * i128::from(n) + i128::from(*offset);
                i64::try_from(image)
                    .map(IndexLabel::Int)
                    .map_err(|_| InjectionError::Overflow {
                        label: label.clone(),
                    })
            }
        }
    }

    /// Whether `label` lies in the injection's full image.
    pub fn image_contains(&self, label: &IndexLabel) -> bool {
        match self {
            IndexInjection::Map(map) => map.values().any(|v| v == label),
            IndexInjection::Affine { scale, offset } => match label.as_int() {
                Some(v) => {
                    (i128::from(v) - i128::from(*offset)) % i128::from(*scale) == 0
                }
                None => false,
            },
        }
    }

    /// A label in both full images, if any exists. Affine images are
    /// arithmetic progressions over all integer labels, so two affine rules
    /// intersect exactly when their offsets agree modulo the gcd of their
    /// scales.
    pub fn image_intersection_witness(&self, other: &IndexInjection) -> Option<IndexLabel> {
        use IndexInjection::{Affine, Map};
        match (self, other) {
            (Map(a), Map(_)) => a.values().find(|v| other.image_contains(v)).cloned(),
            (Map(a), Affine { .. }) => a.values().find(|v| other.image_contains(v)).cloned(),
            (Affine { .. }, Map(b)) => b.values().find(|v| self.image_contains(v)).cloned(),
            (
                Affine {
                    scale: k1,
                    offset: c1,
                },
                Affine {
                    scale: k2,
                    offset: c2,
                },
            ) => {
                let g = i128::from(*k1).gcd(&i128::from(*k2));
                let diff = i128::from(*c2) - i128::from(*c1);
                if diff % g != 0 {
                    return None;
                }
                // Walk the first progression for a small concrete witness.
                for n in 0..=(k2.unsigned_abs() as i64) {
                    for candidate in [n, -n] {
                        if let Ok(image) =
                            self.apply(&IndexLabel::Int(candidate))
                        {
                            if other.image_contains(&image) {
                                return Some(image);
                            }
                        }
                    }
                }
                None
            }
        }
    }
}

impl fmt::Display for IndexInjection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexInjection::Map(map) => {
                write!(f, "{{")?;
                for (i, (from, to)) in map.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{from} -> {to}")?;
                }
                write!(f, "}}")
            }
            IndexInjection::Affine { scale, offset } => {
                write!(f, "n -> {scale}n")?;
                match offset.cmp(&0) {
                    std::cmp::Ordering::Greater => write!(f, "+{offset}"),
                    std::cmp::Ordering::Less => write!(f, "{offset}"),
                    std::cmp::Ordering::Equal => Ok(()),
                }
            }
        }
    }
}

fn check_distinct(labels: &[IndexLabel]) -> Result<(), OperatorError> {
    let mut seen = BTreeSet::new();
    for label in labels {
        if !seen.insert(label.clone()) {
            return Err(OperatorError::DuplicateLabel {
                label: label.clone(),
            });
        }
    }
    Ok(())
}

fn sort_order(labels: &[IndexLabel]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..labels.len()).collect();
    order.sort_by(|&a, &b| labels[a].cmp(&labels[b]));
    order
}

fn index_of(labels: &[IndexLabel], label: &IndexLabel) -> Option<usize> {
    labels.binary_search(label).ok()
}

fn label_union(sets: &[&[IndexLabel]]) -> Vec<IndexLabel> {
    let mut union = BTreeSet::new();
    for set in sets {
        union.extend(set.iter().cloned());
    }
    union.into_iter().collect()
}

fn matmul(a: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let rows = a.len();
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![Scalar::zero(); cols]; rows];
    for i in 0..rows {
        debug_assert_eq!(a[i].len(), inner);
        for (k, b_row) in b.iter().enumerate() {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..cols {
                let term = &a[i][k] * &b_row[j];
                if !term.is_zero() {
                    out[i][j] = &out[i][j] + &term;
                }
            }
        }
    }
    out
}
