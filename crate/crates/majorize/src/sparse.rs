//! Finitely supported vectors over the label universe.
//!
//! A [`SparseVec`] stores only nonzero coordinates; all summary operations
//! (trace, norms, rearrangements, level sets) are exact over the rationals
//! except for non-unit norm exponents, which return flagged approximations.

use std::collections::{btree_map, BTreeMap, BTreeSet};
use std::fmt;

use crate::label::IndexLabel;
use crate::scalar::{cmp_desc, NormValue, PNorm, Scalar};

/// A finitely supported vector: a map from labels to nonzero scalars.
///
/// Zero values are never stored, so two vectors are equal exactly when they
/// agree coordinatewise on the whole universe.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct SparseVec {
    entries: BTreeMap<IndexLabel, Scalar>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec::default()
    }

    /// The standard basis vector at `label`.
    pub fn unit(label: impl Into<IndexLabel>) -> Self {
        let mut v = SparseVec::new();
        v.set(label, Scalar::one());
        v
    }

    /// Accumulates `(label, value)` pairs; duplicate labels add up and zero
    /// totals vanish.
    pub fn from_pairs<L, I>(pairs: I) -> Self
    where
        L: Into<IndexLabel>,
        I: IntoIterator<Item = (L, Scalar)>,
    {
        let mut v = SparseVec::new();
        for (label, value) in pairs {
            v.add_at(label, &value);
        }
        v
    }

    /// Sets one coordinate, dropping the entry when the value is zero.
    pub fn set(&mut self, label: impl Into<IndexLabel>, value: Scalar) {
        let label = label.into();
        if value.is_zero() {
            self.entries.remove(&label);
        } else {
            self.entries.insert(label, value);
        }
    }

    /// Adds `value` into one coordinate.
    pub fn add_at(&mut self, label: impl Into<IndexLabel>, value: &Scalar) {
        let label = label.into();
        let current = self.get(&label);
        self.set(label, current + value);
    }

    /// The coordinate value, zero when the label is off the support.
    pub fn get(&self, label: &IndexLabel) -> Scalar {
        self.entries.get(label).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = &IndexLabel> {
        self.entries.keys()
    }

    pub fn support_set(&self) -> BTreeSet<IndexLabel> {
        self.entries.keys().cloned().collect()
    }

    pub fn iter(&self) -> btree_map::Iter<'_, IndexLabel, Scalar> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Coordinate sum over the support.
    pub fn trace(&self) -> Scalar {
        self.entries.values().sum()
    }

    pub fn scale(&self, c: &Scalar) -> SparseVec {
        let mut out = SparseVec::new();
        for (label, value) in &self.entries {
            out.set(label.clone(), c * value);
        }
        out
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        let mut out = self.clone();
        for (label, value) in &other.entries {
            out.add_at(label.clone(), value);
        }
        out
    }

    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        let mut out = self.clone();
        for (label, value) in &other.entries {
            out.add_at(label.clone(), &-value);
        }
        out
    }

    pub fn negate(&self) -> SparseVec {
        self.scale(&-Scalar::one())
    }

    /// The `p`-norm. Exact for `p = 1`; otherwise a flagged binary-float
    /// approximation whose relative error stays within 1e-12 at the window
    /// sizes this crate targets.
    pub fn p_norm(&self, p: &PNorm) -> NormValue {
        if p.is_one() {
            return NormValue::Exact(self.entries.values().map(Scalar::abs).sum());
        }
        if let Some(k) = p.as_u32() {
            let sum: Scalar = self
                .entries
                .values()
                .map(|v| v.abs().pow_u32(k))
                .sum();
            return NormValue::Approx(sum.to_f64().powf(1.0 / f64::from(k)));
        }
        let pf = p.to_f64();
        let sum: f64 = self
            .entries
            .values()
            .map(|v| v.abs().to_f64().powf(pf))
            .sum();
        NormValue::Approx(sum.powf(1.0 / pf))
    }

    /// Groups the support by value: positive values in strictly decreasing
    /// order, then negative values in strictly increasing order, each level
    /// carrying its index set. Zero is never a level.
    pub fn level_sets(&self) -> LevelSetPartition {
        let mut by_value: BTreeMap<Scalar, BTreeSet<IndexLabel>> = BTreeMap::new();
        for (label, value) in &self.entries {
            by_value.entry(value.clone()).or_default().insert(label.clone());
        }
        let mut positive = Vec::new();
        let mut negative = Vec::new();
        for (value, indices) in by_value.into_iter().rev() {
            if value.is_positive() {
                positive.push(Level { value, indices });
            } else {
                negative.push(Level { value, indices });
            }
        }
        negative.reverse();
        LevelSetPartition { positive, negative }
    }

    /// Whether both vectors carry exactly the same multiset of nonzero
    /// values, support sizes included.
    pub fn same_value_multiset(&self, other: &SparseVec) -> bool {
        let mut a: Vec<&Scalar> = self.entries.values().collect();
        let mut b: Vec<&Scalar> = other.entries.values().collect();
        a.sort();
        b.sort();
        a == b
    }
}

impl fmt::Display for SparseVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (label, value)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{label}: {value}")?;
        }
        write!(f, "}}")
    }
}

impl<L: Into<IndexLabel>> FromIterator<(L, Scalar)> for SparseVec {
    fn from_iter<I: IntoIterator<Item = (L, Scalar)>>(iter: I) -> Self {
        SparseVec::from_pairs(iter)
    }
}

/// One value level of a vector: the value and the labels carrying it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Level {
    pub value: Scalar,
    pub indices: BTreeSet<IndexLabel>,
}

/// The level structure of a vector, split by sign.
///
/// `positive` lists strictly decreasing positive values; `negative` lists
/// strictly increasing negative values, so the first negative level is the
/// most negative one. Labels with value zero are left implicit.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LevelSetPartition {
    pub positive: Vec<Level>,
    pub negative: Vec<Level>,
}

impl LevelSetPartition {
    /// Levels in certificate order: positive levels first (decreasing),
    /// then negative levels (most negative first).
    pub fn ordered(&self) -> impl Iterator<Item = &Level> {
        self.positive.iter().chain(self.negative.iter())
    }
}

/// Pads both vectors with zeros onto their common support and returns both
/// value sequences sorted in non-increasing order.
pub fn sorted_padded(f: &SparseVec, g: &SparseVec) -> (Vec<Scalar>, Vec<Scalar>) {
    let labels = union_support(f, g);
    let mut fv: Vec<Scalar> = labels.iter().map(|l| f.get(l)).collect();
    let mut gv: Vec<Scalar> = labels.iter().map(|l| g.get(l)).collect();
    fv.sort_by(cmp_desc);
    gv.sort_by(cmp_desc);
    (fv, gv)
}

/// The union of both supports, ascending.
pub fn union_support(f: &SparseVec, g: &SparseVec) -> Vec<IndexLabel> {
    let mut labels = f.support_set();
    labels.extend(g.support().cloned());
    labels.into_iter().collect()
}

/// Value/label pairs of `v` padded onto `labels`, sorted by value
/// (non-increasing) with ties broken by ascending label.
pub(crate) fn padded_ranking(v: &SparseVec, labels: &[IndexLabel]) -> Vec<(Scalar, IndexLabel)> {
    let mut ranked: Vec<(Scalar, IndexLabel)> = labels
        .iter()
        .map(|l| (v.get(l), l.clone()))
        .collect();
    ranked.sort_by(|(va, la), (vb, lb)| vb.cmp(va).then_with(|| la.cmp(lb)));
    ranked
}
