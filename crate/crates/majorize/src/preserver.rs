//! Order-preserving operators in injection-sum form.
//!
//! For exponents strictly between 1 and infinity, the bounded linear maps
//! that carry majorized pairs to majorized pairs are exactly the sums
//! `T = sum_i alpha_i P_{sigma_i}` of weighted injective relabelings with
//! pairwise disjoint images. This module builds such operators column by
//! column, verifies the two structural conditions that characterize them
//! (each row touched by at most one column, all columns equal up to
//! relabeling), recovers the `(alpha_i, sigma_i)` family from raw columns,
//! and exhibits the boundary phenomena: a sum with overlapping images that
//! fails to preserve the order, and the trace-times-density operator that
//! preserves it at exponent 1 while escaping the injection-sum form.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::label::IndexLabel;
use crate::majorization::{majorizes, Refutation};
use crate::scalar::{NormValue, PNorm, Scalar};
use crate::sparse::SparseVec;
use crate::stochastic::IndexInjection;

/// A structural defect that rules out the injection-sum form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ViolationReport {
    /// One row receives nonzero entries from two distinct columns.
    RowWithTwoEntries {
        row: IndexLabel,
        first_col: IndexLabel,
        second_col: IndexLabel,
    },
    /// A column's nonzero value multiset differs from the reference
    /// column's.
    ColumnsNotEquivalent {
        first_col: IndexLabel,
        second_col: IndexLabel,
    },
    /// Two terms' injections reach a common label (term positions are
    /// zero-based).
    OverlappingInjectionImages {
        first_term: usize,
        second_term: usize,
        collision: IndexLabel,
    },
}

impl fmt::Display for ViolationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ViolationReport::RowWithTwoEntries {
                row,
                first_col,
                second_col,
            } => write!(f, "RowWithTwoEntries({row}, {first_col}, {second_col})"),
            ViolationReport::ColumnsNotEquivalent {
                first_col,
                second_col,
            } => write!(f, "ColumnsNotEquivalent({first_col}, {second_col})"),
            ViolationReport::OverlappingInjectionImages {
                first_term,
                second_term,
                collision,
            } => write!(
                f,
                "OverlappingInjectionImages({first_term}, {second_term}, {collision})"
            ),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum PreserverError {
    #[error("term {term} has a zero coefficient")]
    ZeroCoefficient { term: usize },
    #[error("column window repeats label {0}")]
    DuplicateColumn(IndexLabel),
    #[error("term {term} is undefined at column label {label}: {source}")]
    InjectionUndefined {
        term: usize,
        label: IndexLabel,
        source: crate::stochastic::InjectionError,
    },
    #[error("vector is supported at {label}, outside the operator's columns")]
    SupportOutsideColumns { label: IndexLabel },
    #[error("structure check failed: {0}")]
    StructureViolation(ViolationReport),
    #[error("sample pair {index} is not majorized, so there is nothing to preserve")]
    PairNotMajorized { index: usize },
    #[error("the trace operator needs a nonzero density vector")]
    ZeroVector,
    #[error("replication multiplicity must be at least 1")]
    ZeroReplication,
}

/// A weighted family of injective relabelings with pairwise disjoint
/// images, together with the norm exponent it is considered on.
///
/// Construction checks the invariants: nonzero weights and global image
/// disjointness (affine images are full arithmetic progressions).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PreserverSpec {
    terms: Vec<(Scalar, IndexInjection)>,
    p: PNorm,
}

impl PreserverSpec {
    pub fn new(
        terms: Vec<(Scalar, IndexInjection)>,
        p: PNorm,
    ) -> Result<Self, PreserverError> {
        for (i, (alpha, _)) in terms.iter().enumerate() {
            if alpha.is_zero() {
                return Err(PreserverError::ZeroCoefficient { term: i });
            }
        }
        for i in 0..terms.len() {
            for j in i + 1..terms.len() {
                if let Some(collision) = terms[i].1.image_intersection_witness(&terms[j].1) {
                    return Err(PreserverError::StructureViolation(
                        ViolationReport::OverlappingInjectionImages {
                            first_term: i,
                            second_term: j,
                            collision,
                        },
                    ));
                }
            }
        }
        Ok(PreserverSpec { terms, p })
    }

    pub fn terms(&self) -> &[(Scalar, IndexInjection)] {
        &self.terms
    }

    pub fn p(&self) -> &PNorm {
        &self.p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The shared norm of every built column: the p-norm of the weight
    /// family. Exact at p = 1, flagged approximate otherwise.
    pub fn column_norm(&self) -> NormValue {
        let weights: SparseVec = self
            .terms
            .iter()
            .enumerate()
            .map(|(i, (alpha, _))| (IndexLabel::Int(i as i64), alpha.clone()))
            .collect();
        weights.p_norm(&self.p)
    }
}

impl fmt::Display for PreserverSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p = {}", self.p)?;
        if self.terms.is_empty() {
            write!(f, "; zero operator (no terms)")?;
        }
        for (alpha, sigma) in &self.terms {
            write!(f, "\n  {alpha} * P[{sigma}]")?;
        }
        Ok(())
    }
}

/// An operator recorded column by column: the image of each basis vector
/// of the declared column window, every support lying in a finite set of
/// rows. Columns absent from the map are outside the operator's domain,
/// not zero; stored empty columns are genuinely zero.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct OperatorColumns {
    columns: BTreeMap<IndexLabel, SparseVec>,
}

impl OperatorColumns {
    pub fn from_columns(columns: BTreeMap<IndexLabel, SparseVec>) -> Self {
        OperatorColumns { columns }
    }

    pub fn column(&self, label: &IndexLabel) -> Option<&SparseVec> {
        self.columns.get(label)
    }

    pub fn column_labels(&self) -> impl Iterator<Item = &IndexLabel> {
        self.columns.keys()
    }

    /// Sorted union of the column supports.
    pub fn row_labels(&self) -> Vec<IndexLabel> {
        let mut rows: Vec<IndexLabel> = self
            .columns
            .values()
            .flat_map(|col| col.support().cloned())
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        rows.sort();
        rows
    }

    pub fn iter(&self) -> impl Iterator<Item = (&IndexLabel, &SparseVec)> {
        self.columns.iter()
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    /// Pointwise sum on the union of the column windows.
    pub fn add(&self, other: &OperatorColumns) -> OperatorColumns {
        let mut columns = self.columns.clone();
        for (label, col) in &other.columns {
            let merged = match columns.get(label) {
                Some(existing) => existing.add(col),
                None => col.clone(),
            };
            columns.insert(label.clone(), merged);
        }
        OperatorColumns { columns }
    }

    /// Scales every column by a rational factor.
    pub fn scale(&self, factor: &Scalar) -> OperatorColumns {
        OperatorColumns {
            columns: self
                .columns
                .iter()
                .map(|(label, col)| (label.clone(), col.scale(factor)))
                .collect(),
        }
    }
}

impl fmt::Display for OperatorColumns {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.columns.is_empty() {
            return write!(f, "(no columns)");
        }
        for (i, (label, col)) in self.columns.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "column {label}: {col}")?;
        }
        Ok(())
    }
}

/// Materializes the spec over a finite column window: column `j` is
/// `sum_i alpha_i e_{sigma_i(j)}`, so each column carries exactly one
/// entry per term.
pub fn build_preserver(
    spec: &PreserverSpec,
    column_window: &[IndexLabel],
) -> Result<OperatorColumns, PreserverError> {
    let mut columns: BTreeMap<IndexLabel, SparseVec> = BTreeMap::new();
    for label in column_window {
        if columns.insert(label.clone(), SparseVec::new()).is_some() {
            return Err(PreserverError::DuplicateColumn(label.clone()));
        }
    }
    for (i, (alpha, sigma)) in spec.terms().iter().enumerate() {
        for label in column_window {
            let image = sigma.apply(label).map_err(|source| {
                PreserverError::InjectionUndefined {
                    term: i,
                    label: label.clone(),
                    source,
                }
            })?;
            columns
                .get_mut(label)
                .expect("window label was inserted above")
                .add_at(image, alpha);
        }
    }
    Ok(OperatorColumns { columns })
}

/// Applies the operator to a vector supported inside its column window:
/// the weighted sum of the touched columns, exact.
pub fn apply_preserver(
    operator: &OperatorColumns,
    f: &SparseVec,
) -> Result<SparseVec, PreserverError> {
    let mut image = SparseVec::new();
    for (label, value) in f.iter() {
        let column = operator
            .column(label)
            .ok_or_else(|| PreserverError::SupportOutsideColumns {
                label: label.clone(),
            })?;
        image = image.add(&column.scale(value));
    }
    Ok(image)
}

/// Verifies that no row is touched by two distinct columns. Columns are
/// scanned in ascending label order and the first repeated row is
/// reported.
pub fn check_row_structure(operator: &OperatorColumns) -> Result<(), ViolationReport> {
    let mut first_touch: BTreeMap<&IndexLabel, &IndexLabel> = BTreeMap::new();
    for (col_label, column) in operator.iter() {
        for row in column.support() {
            if let Some(previous) = first_touch.get(row) {
                return Err(ViolationReport::RowWithTwoEntries {
                    row: row.clone(),
                    first_col: (*previous).clone(),
                    second_col: col_label.clone(),
                });
            }
            first_touch.insert(row, col_label);
        }
    }
    Ok(())
}

/// Verifies that every column carries the same nonzero value multiset as
/// the first nonzero column (so all columns are relabelings of each
/// other). The zero operator passes vacuously.
pub fn check_columns_equivalent(operator: &OperatorColumns) -> Result<(), ViolationReport> {
    let reference = match operator.iter().find(|(_, col)| !col.is_empty()) {
        Some(reference) => reference,
        None => return Ok(()),
    };
    for (label, column) in operator.iter() {
        if label != reference.0 && !column.same_value_multiset(reference.1) {
            return Err(ViolationReport::ColumnsNotEquivalent {
                first_col: reference.0.clone(),
                second_col: label.clone(),
            });
        }
    }
    Ok(())
}

/// Recovers a weighted-injection family from raw columns.
///
/// Both structure checks must pass. The weights are read off the lowest
/// nonzero column; each one's relabeling sends a column label to the row
/// where that column carries the matching value, with repeated values
/// paired off in ascending row order on both sides. Term order follows
/// ascending row order in the reference column, and rebuilding from the
/// result reproduces the input exactly.
pub fn decompose(
    operator: &OperatorColumns,
    p: PNorm,
) -> Result<PreserverSpec, PreserverError> {
    check_row_structure(operator).map_err(PreserverError::StructureViolation)?;
    check_columns_equivalent(operator).map_err(PreserverError::StructureViolation)?;
    let reference = match operator.iter().find(|(_, col)| !col.is_empty()) {
        Some(reference) => reference,
        None => {
            return PreserverSpec::new(Vec::new(), p);
        }
    };

    // Rows of one column, grouped by value, each group ascending.
    let groups_by_value = |column: &SparseVec| -> BTreeMap<Scalar, Vec<IndexLabel>> {
        let mut groups: BTreeMap<Scalar, Vec<IndexLabel>> = BTreeMap::new();
        for (row, value) in column.iter() {
            groups.entry(value.clone()).or_default().push(row.clone());
        }
        groups
    };
    let reference_groups = groups_by_value(reference.1);

    // maps[r] collects sigma for the term anchored at reference row r.
    let mut maps: BTreeMap<IndexLabel, BTreeMap<IndexLabel, IndexLabel>> = reference
        .1
        .support()
        .map(|row| (row.clone(), BTreeMap::new()))
        .collect();
    for (col_label, column) in operator.iter() {
        let column_groups = groups_by_value(column);
        for (value, reference_rows) in &reference_groups {
            let column_rows = &column_groups[value];
            for (anchor, image) in reference_rows.iter().zip(column_rows) {
                maps.get_mut(anchor)
                    .expect("anchor rows come from the reference column")
                    .insert(col_label.clone(), image.clone());
            }
        }
    }

    let terms = reference
        .1
        .iter()
        .map(|(row, alpha)| {
            let sigma = IndexInjection::from_map(maps[row].clone())
                .expect("row structure makes each term's images distinct");
            (alpha.clone(), sigma)
        })
        .collect();
    let spec = PreserverSpec::new(terms, p)?;
    debug_assert_eq!(
        &build_preserver(
            &spec,
            &operator.column_labels().cloned().collect::<Vec<_>>()
        )
        .expect("decomposed terms cover the column window"),
        operator,
    );
    Ok(spec)
}

/// One failed sample: the images of the pair and the certificate showing
/// they are not majorized.
#[derive(Clone, PartialEq, Debug)]
pub struct PreservationFailure {
    pub index: usize,
    pub image_f: SparseVec,
    pub image_g: SparseVec,
    pub refutation: Refutation,
}

/// The outcome of checking an operator against witnessed majorized pairs.
#[derive(Clone, PartialEq, Debug)]
pub struct PreservationReport {
    pub checked: usize,
    pub failures: Vec<PreservationFailure>,
}

impl PreservationReport {
    pub fn all_preserved(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for PreservationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.all_preserved() {
            return write!(f, "checked {} pairs: order preserved on all images", self.checked);
        }
        write!(
            f,
            "checked {} pairs: {} violations",
            self.checked,
            self.failures.len()
        )?;
        for failure in &self.failures {
            write!(
                f,
                "\n  pair {}: image {} is not majorized by image {} ({})",
                failure.index, failure.image_f, failure.image_g, failure.refutation
            )?;
        }
        Ok(())
    }
}

/// Runs the order-preservation test on sample pairs, each of which must
/// itself be majorized and supported inside the column window. Every
/// failure is returned with its refutation certificate.
pub fn verify_preserver_on_samples(
    operator: &OperatorColumns,
    pairs: &[(SparseVec, SparseVec)],
) -> Result<PreservationReport, PreserverError> {
    let mut failures = Vec::new();
    for (index, (f, g)) in pairs.iter().enumerate() {
        if !majorizes(f, g).is_majorized() {
            return Err(PreserverError::PairNotMajorized { index });
        }
        let image_f = apply_preserver(operator, f)?;
        let image_g = apply_preserver(operator, g)?;
        if let Some(refutation) = majorizes(&image_f, &image_g).refutation() {
            failures.push(PreservationFailure {
                index,
                image_f,
                image_g,
                refutation: refutation.clone(),
            });
        }
    }
    Ok(PreservationReport {
        checked: pairs.len(),
        failures,
    })
}

/// The rank-one operator `f -> trace(f) * h` on a finite column window:
/// every column equals the density `h`.
///
/// At exponent 1 this preserves majorization (majorized pairs share a
/// trace, so both images coincide), yet with two or more columns it fails
/// the row-structure condition — the injection-sum form is sufficient but
/// not necessary at exponent 1.
pub fn trace_operator_l1(
    h: &SparseVec,
    column_window: &[IndexLabel],
) -> Result<OperatorColumns, PreserverError> {
    if h.is_empty() {
        return Err(PreserverError::ZeroVector);
    }
    let mut columns = BTreeMap::new();
    for label in column_window {
        if columns.insert(label.clone(), h.clone()).is_some() {
            return Err(PreserverError::DuplicateColumn(label.clone()));
        }
    }
    Ok(OperatorColumns { columns })
}

/// The k-fold replication operator on integer labels: term `i` of `k`
/// relabels `n -> k * n + i - 1`, so each basis vector spreads to `k`
/// fresh rows with weight 1.
pub fn replication_operator(
    k: i64,
    column_window: &[IndexLabel],
) -> Result<OperatorColumns, PreserverError> {
    build_preserver(&replication_spec(k, PNorm::one())?, column_window)
}

/// The spec behind [`replication_operator`], with an explicit exponent.
pub fn replication_spec(k: i64, p: PNorm) -> Result<PreserverSpec, PreserverError> {
    if k < 1 {
        return Err(PreserverError::ZeroReplication);
    }
    let terms = (1..=k)
        .map(|i| {
            let sigma = IndexInjection::affine(k, i - 1).expect("k >= 1 is nonzero");
            (Scalar::one(), sigma)
        })
        .collect();
    PreserverSpec::new(terms, p)
}

/// The shared column norm of the k-fold replication operator: the p-th
/// root of k. Exact at p = 1, flagged approximate otherwise.
pub fn replication_norm(k: i64, p: &PNorm) -> Result<NormValue, PreserverError> {
    if k < 1 {
        return Err(PreserverError::ZeroReplication);
    }
    if p.is_one() {
        return Ok(NormValue::Exact(Scalar::from_int(k)));
    }
    Ok(NormValue::Approx((k as f64).powf(1.0 / p.to_f64())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::majorization::HingeSide;

    fn s(text: &str) -> Scalar {
        text.parse().unwrap()
    }

    fn vec_of(pairs: &[(&str, &str)]) -> SparseVec {
        pairs
            .iter()
            .map(|(l, v)| (IndexLabel::parse(l), s(v)))
            .collect()
    }

    fn labels(names: &[&str]) -> Vec<IndexLabel> {
        names.iter().map(|n| IndexLabel::parse(n)).collect()
    }

    fn shift_spec() -> PreserverSpec {
        PreserverSpec::new(
            vec![(s("1"), IndexInjection::affine(1, 1).unwrap())],
            PNorm::from_int(2).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn shift_columns_are_shifted_units() {
        let t = build_preserver(&shift_spec(), &labels(&["1", "2"])).unwrap();
        assert_eq!(t.column(&"1".into()), Some(&vec_of(&[("2", "1")])));
        assert_eq!(t.column(&"2".into()), Some(&vec_of(&[("3", "1")])));
    }

    #[test]
    fn twofold_replication_doubles_each_column() {
        let t = replication_operator(2, &labels(&["1", "2"])).unwrap();
        assert_eq!(
            t.column(&"1".into()),
            Some(&vec_of(&[("2", "1"), ("3", "1")]))
        );
        assert_eq!(
            t.column(&"2".into()),
            Some(&vec_of(&[("4", "1"), ("5", "1")]))
        );
    }

    #[test]
    fn zero_spec_builds_the_zero_operator() {
        let spec = PreserverSpec::new(Vec::new(), PNorm::one()).unwrap();
        let t = build_preserver(&spec, &labels(&["1", "2"])).unwrap();
        assert_eq!(t.len(), 2);
        assert!(t.iter().all(|(_, col)| col.is_empty()));
        assert_eq!(apply_preserver(&t, &vec_of(&[("1", "5")])).unwrap(), SparseVec::new());
    }

    #[test]
    fn overlapping_images_are_rejected_at_spec_construction() {
        let result = PreserverSpec::new(
            vec![
                (s("1"), IndexInjection::affine(2, 0).unwrap()),
                (s("1"), IndexInjection::affine(1, 0).unwrap()),
            ],
            PNorm::one(),
        );
        assert!(matches!(
            result,
            Err(PreserverError::StructureViolation(
                ViolationReport::OverlappingInjectionImages { first_term: 0, second_term: 1, .. }
            ))
        ));
    }

    #[test]
    fn application_is_the_columnwise_sum() {
        let t = replication_operator(2, &labels(&["1", "2"])).unwrap();
        assert_eq!(
            apply_preserver(&t, &vec_of(&[("1", "1")])).unwrap(),
            vec_of(&[("2", "1"), ("3", "1")])
        );
        let shift = build_preserver(&shift_spec(), &labels(&["1", "2"])).unwrap();
        assert_eq!(
            apply_preserver(&shift, &vec_of(&[("1", "3/7"), ("2", "-5")])).unwrap(),
            vec_of(&[("2", "3/7"), ("3", "-5")])
        );
    }

    #[test]
    fn off_window_support_is_rejected() {
        let t = replication_operator(2, &labels(&["1"])).unwrap();
        assert_eq!(
            apply_preserver(&t, &vec_of(&[("9", "1")])),
            Err(PreserverError::SupportOutsideColumns { label: "9".into() })
        );
    }

    #[test]
    fn doubling_plus_identity_fails_row_structure_at_row_two() {
        let doubling = build_preserver(
            &PreserverSpec::new(
                vec![(s("1"), IndexInjection::affine(2, 0).unwrap())],
                PNorm::from_int(2).unwrap(),
            )
            .unwrap(),
            &labels(&["1", "2", "3"]),
        )
        .unwrap();
        let identity = build_preserver(
            &PreserverSpec::new(
                vec![(s("1"), IndexInjection::affine(1, 0).unwrap())],
                PNorm::from_int(2).unwrap(),
            )
            .unwrap(),
            &labels(&["1", "2", "3"]),
        )
        .unwrap();
        let t = doubling.add(&identity);
        assert_eq!(
            check_row_structure(&t),
            Err(ViolationReport::RowWithTwoEntries {
                row: "2".into(),
                first_col: "1".into(),
                second_col: "2".into(),
            })
        );
    }

    #[test]
    fn replication_passes_both_structure_checks() {
        let t = replication_operator(2, &labels(&["1", "2", "3"])).unwrap();
        assert_eq!(check_row_structure(&t), Ok(()));
        assert_eq!(check_columns_equivalent(&t), Ok(()));
    }

    #[test]
    fn scaled_unit_columns_are_not_equivalent()  {
        let t = OperatorColumns::from_columns(
            [
                ("1".into(), vec_of(&[("1", "1")])),
                ("2".into(), vec_of(&[("2", "2")])),
            ]
            .into_iter()
            .collect(),
        );
        assert_eq!(
            check_columns_equivalent(&t),
            Err(ViolationReport::ColumnsNotEquivalent {
                first_col: "1".into(),
                second_col: "2".into(),
            })
        );
    }

    #[test]
    fn decompose_reads_back_the_replication_family() {
        let t = replication_operator(2, &labels(&["1", "2"])).unwrap();
        let spec = decompose(&t, PNorm::from_int(2).unwrap()).unwrap();
        assert_eq!(spec.terms().len(), 2);
        assert_eq!(spec.terms()[0].0, s("1"));
        assert_eq!(spec.terms()[1].0, s("1"));
        let sigma1 = &spec.terms()[0].1;
        let sigma2 = &spec.terms()[1].1;
        assert_eq!(sigma1.apply(&"1".into()).unwrap(), "2".into());
        assert_eq!(sigma1.apply(&"2".into()).unwrap(), "4".into());
        assert_eq!(sigma2.apply(&"1".into()).unwrap(), "3".into());
        assert_eq!(sigma2.apply(&"2".into()).unwrap(), "5".into());
    }

    #[test]
    fn decompose_reads_back_a_scaled_shift() {
        let t = build_preserver(
            &PreserverSpec::new(
                vec![(s("2"), IndexInjection::affine(1, 1).unwrap())],
                PNorm::one(),
            )
            .unwrap(),
            &labels(&["1", "2", "3"]),
        )
        .unwrap();
        let spec = decompose(&t, PNorm::one()).unwrap();
        assert_eq!(spec.terms().len(), 1);
        assert_eq!(spec.terms()[0].0, s("2"));
        assert_eq!(spec.terms()[0].1.apply(&"3".into()).unwrap(), "4".into());
    }

    #[test]
    fn zero_operator_decomposes_to_no_terms() {
        let t = build_preserver(
            &PreserverSpec::new(Vec::new(), PNorm::one()).unwrap(),
            &labels(&["1", "2"]),
        )
        .unwrap();
        let spec = decompose(&t, PNorm::one()).unwrap();
        assert!(spec.is_zero());
    }

    #[test]
    fn decompose_forwards_structure_failures() {
        let t = OperatorColumns::from_columns(
            [
                ("1".into(), vec_of(&[("1", "1")])),
                ("2".into(), vec_of(&[("1", "1")])),
            ]
            .into_iter()
            .collect(),
        );
        assert_eq!(
            decompose(&t, PNorm::one()),
            Err(PreserverError::StructureViolation(
                ViolationReport::RowWithTwoEntries {
                    row: "1".into(),
                    first_col: "1".into(),
                    second_col: "2".into(),
                }
            ))
        );
    }

    #[test]
    fn decompose_matches_ties_by_ascending_row_label() {
        // Both columns repeat the value 1/2 twice; matching must pair the
        // rows in ascending order on both sides so the rebuild is exact.
        let t = OperatorColumns::from_columns(
            [
                ("1".into(), vec_of(&[("10", "1/2"), ("11", "1/2")])),
                ("2".into(), vec_of(&[("20", "1/2"), ("21", "1/2")])),
            ]
            .into_iter()
            .collect(),
        );
        let spec = decompose(&t, PNorm::from_int(2).unwrap()).unwrap();
        let sigma1 = &spec.terms()[0].1;
        let sigma2 = &spec.terms()[1].1;
        assert_eq!(sigma1.apply(&"1".into()).unwrap(), "10".into());
        assert_eq!(sigma1.apply(&"2".into()).unwrap(), "20".into());
        assert_eq!(sigma2.apply(&"1".into()).unwrap(), "11".into());
        assert_eq!(sigma2.apply(&"2".into()).unwrap(), "21".into());
    }

    #[test]
    fn replication_preserves_a_witnessed_pair() {
        let t = replication_operator(2, &labels(&["1", "2"])).unwrap();
        let f = vec_of(&[("1", "1/2"), ("2", "1/2")]);
        let g = vec_of(&[("1", "1")]);
        assert_eq!(
            apply_preserver(&t, &f).unwrap(),
            vec_of(&[("2", "1/2"), ("3", "1/2"), ("4", "1/2"), ("5", "1/2")])
        );
        assert_eq!(
            apply_preserver(&t, &g).unwrap(),
            vec_of(&[("2", "1"), ("3", "1")])
        );
        let report = verify_preserver_on_samples(&t, &[(f, g)]).unwrap();
        assert!(report.all_preserved());
    }

    #[test]
    fn overlapping_sum_breaks_preservation_on_a_unit_pair() {
        let doubling = build_preserver(
            &PreserverSpec::new(
                vec![(s("1"), IndexInjection::affine(2, 0).unwrap())],
                PNorm::from_int(2).unwrap(),
            )
            .unwrap(),
            &labels(&["1", "2", "3"]),
        )
        .unwrap();
        let identity = build_preserver(
            &PreserverSpec::new(
                vec![(s("1"), IndexInjection::affine(1, 0).unwrap())],
                PNorm::from_int(2).unwrap(),
            )
            .unwrap(),
            &labels(&["1", "2", "3"]),
        )
        .unwrap();
        let t = doubling.add(&identity);
        let f = vec_of(&[("1", "1"), ("2", "1")]);
        let g = vec_of(&[("1", "1"), ("3", "1")]);
        let report = verify_preserver_on_samples(&t, &[(f, g)]).unwrap();
        assert_eq!(report.failures.len(), 1);
        assert_eq!(
            report.failures[0].refutation,
            Refutation::ConvexGap {
                cut: s("1"),
                side: HingeSide::Upper,
                lhs: s("1"),
                rhs: s("0"),
            }
        );
    }

    #[test]
    fn unmajorized_samples_are_a_precondition_failure() {
        let t = replication_operator(2, &labels(&["1", "2"])).unwrap();
        let pairs = vec![(vec_of(&[("1", "2")]), vec_of(&[("1", "1")]))];
        assert_eq!(
            verify_preserver_on_samples(&t, &pairs),
            Err(PreserverError::PairNotMajorized { index: 0 })
        );
    }

    #[test]
    fn trace_operator_repeats_the_density() {
        let h = vec_of(&[("1", "1/2"), ("2", "1/2")]);
        let t = trace_operator_l1(&h, &labels(&["1", "2", "3"])).unwrap();
        assert!(t.iter().all(|(_, col)| *col == h));
        assert_eq!(
            check_row_structure(&t),
            Err(ViolationReport::RowWithTwoEntries {
                row: "1".into(),
                first_col: "1".into(),
                second_col: "2".into(),
            })
        );
    }

    #[test]
    fn trace_operator_with_one_column_passes_row_structure() {
        let h = vec_of(&[("1", "1")]);
        let t = trace_operator_l1(&h, &labels(&["1"])).unwrap();
        assert_eq!(check_row_structure(&t), Ok(()));
    }

    #[test]
    fn trace_operator_rejects_a_zero_density() {
        assert_eq!(
            trace_operator_l1(&SparseVec::new(), &labels(&["1"])),
            Err(PreserverError::ZeroVector)
        );
    }

    #[test]
    fn trace_operator_preserves_because_images_coincide() {
        let h = vec_of(&[("1", "1/2"), ("2", "1/2")]);
        let t = trace_operator_l1(&h, &labels(&["1", "2"])).unwrap();
        let f = vec_of(&[("1", "1/2"), ("2", "1/2")]);
        let g = vec_of(&[("1", "1")]);
        assert_eq!(
            apply_preserver(&t, &f).unwrap(),
            apply_preserver(&t, &g).unwrap()
        );
        let report = verify_preserver_on_samples(&t, &[(f, g)]).unwrap();
        assert!(report.all_preserved());
    }

    #[test]
    fn replication_norm_takes_the_p_th_root() {
        assert_eq!(
            replication_norm(3, &PNorm::one()).unwrap(),
            NormValue::Exact(s("3"))
        );
        assert_eq!(replication_norm(1, &PNorm::from_int(7).unwrap()).unwrap().as_f64(), 1.0);
        let sqrt2 = replication_norm(2, &PNorm::from_int(2).unwrap()).unwrap();
        assert!((sqrt2.as_f64() - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn column_norms_match_the_weight_family_norm() {
        let spec = PreserverSpec::new(
            vec![
                (s("3"), IndexInjection::affine(2, 0).unwrap()),
                (s("4"), IndexInjection::affine(2, 1).unwrap()),
            ],
            PNorm::from_int(2).unwrap(),
        )
        .unwrap();
        let t = build_preserver(&spec, &labels(&["1", "2"])).unwrap();
        let expected = spec.column_norm().as_f64();
        assert!((expected - 5.0).abs() < 1e-12);
        for (_, column) in t.iter() {
            let got = column.p_norm(spec.p()).as_f64();
            assert!((got - expected).abs() < 1e-9);
        }
    }

    #[test]
    fn scaling_the_operator_scales_the_decomposed_weights() {
        let t = replication_operator(3, &labels(&["1", "2"])).unwrap();
        let scaled = t.scale(&s("5/3"));
        let spec = decompose(&scaled, PNorm::from_int(2).unwrap()).unwrap();
        assert!(spec.terms().iter().all(|(alpha, _)| *alpha == s("5/3")));
        assert_eq!(spec.terms().len(), 3);
    }
}
