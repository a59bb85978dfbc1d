//! Majorization decisions with verifiable certificates.
//!
//! `f` is majorized by `g` when `f` is the image of `g` under a doubly
//! stochastic operator. For finitely supported vectors this is equivalent
//! to a finite check: pad both vectors onto their common support, sort both
//! in non-increasing order, and require equal totals together with prefix
//! sum dominance of `g` over `f`.
//!
//! The decision never returns a bare boolean. A positive answer carries a
//! doubly stochastic witness, built as a chain of at most `n - 1`
//! two-coordinate averaging steps composed with relabeling permutations,
//! and satisfying `witness(g) = f` exactly. A negative answer carries
//! either the two differing totals or a convex test function, a hinge
//! `(x - c)+` or `(c - x)+` at a cut value taken from `g`'s sorted values,
//! whose coordinate sum strictly separates the two vectors.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::label::IndexLabel;
use crate::scalar::Scalar;
use crate::sparse::{padded_ranking, union_support, SparseVec};
use crate::stochastic::{Tail, WindowOperator};

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum MajorizationError {
    #[error("the pair is not majorized, so no doubly stochastic witness exists")]
    NotMajorizedInput,
}

/// Which hinge a refuting convex test function uses.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum HingeSide {
    /// `(x - cut)+`, valid for nonnegative cuts.
    Upper,
    /// `(cut - x)+`, valid for nonpositive cuts.
    Lower,
}

impl fmt::Display for HingeSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HingeSide::Upper => write!(f, "upper"),
            HingeSide::Lower => write!(f, "lower"),
        }
    }
}

/// Evidence that `f` is not majorized by `g`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Refutation {
    /// The coordinate totals differ, and majorization preserves them.
    TraceMismatch { f_trace: Scalar, g_trace: Scalar },
    /// A hinge test function whose sum over `f` strictly exceeds its sum
    /// over `g`; the cut is a sorted value of `g`.
    ConvexGap {
        cut: Scalar,
        side: HingeSide,
        lhs: Scalar,
        rhs: Scalar,
    },
}

impl Refutation {
    /// Recomputes the refuting inequality from scratch.
    pub fn verify(&self, f: &SparseVec, g: &SparseVec) -> bool {
        match self {
            Refutation::TraceMismatch { f_trace, g_trace } => {
                *f_trace != *g_trace && f.trace() == *f_trace && g.trace() == *g_trace
            }
            Refutation::ConvexGap {
                cut,
                side,
                lhs,
                rhs,
            } => {
                let phi = match side {
                    HingeSide::Upper => ConvexTestFn::upper_hinge(cut.clone()),
                    HingeSide::Lower => ConvexTestFn::lower_hinge(cut.clone()),
                };
                let phi = match phi {
                    Ok(phi) => phi,
                    Err(_) => return false,
                };
                phi.sum_over(f) == *lhs && phi.sum_over(g) == *rhs && lhs > rhs
            }
        }
    }
}

impl fmt::Display for Refutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Refutation::TraceMismatch { f_trace, g_trace } => {
                write!(f, "traces differ: {f_trace} vs {g_trace}")
            }
            Refutation::ConvexGap {
                cut,
                side,
                lhs,
                rhs,
            } => write!(
                f,
                "{side} hinge at cut {cut} separates the pair: {lhs} > {rhs}"
            ),
        }
    }
}

/// The outcome of a majorization decision, always with checkable evidence.
#[derive(Clone, PartialEq, Debug)]
pub enum MajorizationCertificate {
    Majorized { witness: WindowOperator },
    NotMajorized { refutation: Refutation },
}

impl MajorizationCertificate {
    pub fn is_majorized(&self) -> bool {
        matches!(self, MajorizationCertificate::Majorized { .. })
    }

    pub fn witness(&self) -> Option<&WindowOperator> {
        match self {
            MajorizationCertificate::Majorized { witness } => Some(witness),
            MajorizationCertificate::NotMajorized { .. } => None,
        }
    }

    pub fn refutation(&self) -> Option<&Refutation> {
        match self {
            MajorizationCertificate::Majorized { .. } => None,
            MajorizationCertificate::NotMajorized { refutation } => Some(refutation),
        }
    }
}

impl fmt::Display for MajorizationCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MajorizationCertificate::Majorized { witness } => {
                write!(f, "majorized; doubly stochastic witness:\n{witness}")
            }
            MajorizationCertificate::NotMajorized { refutation } => {
                write!(f, "not majorized: {refutation}")
            }
        }
    }
}

enum Decision {
    Majorized,
    Refuted(Refutation),
}

/// Runs the padded prefix-sum check. On failure, the cut is the sorted
/// value of `g` one past the first failing prefix, which always yields a
/// strict hinge separation.
fn decide(f: &SparseVec, g: &SparseVec) -> Decision {
    let f_trace = f.trace();
    let g_trace = g.trace();
    if f_trace != g_trace {
        return Decision::Refuted(Refutation::TraceMismatch { f_trace, g_trace });
    }
    let (fv, gv) = crate::sparse::sorted_padded(f, g);
    let mut f_prefix = Scalar::zero();
    let mut g_prefix = Scalar::zero();
    for i in 0..fv.len() {
        f_prefix += &fv[i];
        g_prefix += &gv[i];
        if f_prefix > g_prefix {
            let cut = gv[i + 1].clone();
            let side = if cut.is_negative() {
                HingeSide::Lower
            } else {
                HingeSide::Upper
            };
            let phi = match side {
                HingeSide::Upper => ConvexTestFn::upper_hinge(cut.clone()),
                HingeSide::Lower => ConvexTestFn::lower_hinge(cut.clone()),
            }
            .expect("cut sign matches hinge side");
            return Decision::Refuted(Refutation::ConvexGap {
                cut,
                side,
                lhs: phi.sum_over(f),
                rhs: phi.sum_over(g),
            });
        }
    }
    Decision::Majorized
}

/// Decides whether `f` is majorized by `g`, returning a doubly stochastic
/// witness with `witness(g) = f` or a refutation, both exact.
pub fn majorizes(f: &SparseVec, g: &SparseVec) -> MajorizationCertificate {
    match decide(f, g) {
        Decision::Majorized => MajorizationCertificate::Majorized {
            witness: build_ds_witness(f, g).expect("decision was positive"),
        },
        Decision::Refuted(refutation) => MajorizationCertificate::NotMajorized { refutation },
    }
}

/// Builds a doubly stochastic operator sending `g` to `f` on the padded
/// common window.
///
/// Works on the sorted value sequences: while they differ, one
/// two-coordinate averaging step moves the dominating sequence toward the
/// dominated one and fixes at least one coordinate for good, so at most
/// `n - 1` steps occur. The averaging chain is then conjugated back
/// through the two sort permutations.
pub fn build_ds_witness(
    f: &SparseVec,
    g: &SparseVec,
) -> Result<WindowOperator, MajorizationError> {
    if !matches!(decide(f, g), Decision::Majorized) {
        return Err(MajorizationError::NotMajorizedInput);
    }
    let labels = union_support(f, g);
    let n = labels.len();
    let ranked_f = padded_ranking(f, &labels);
    let ranked_g = padded_ranking(g, &labels);
    let target: Vec<Scalar> = ranked_f.iter().map(|(v, _)| v.clone()).collect();
    let mut current: Vec<Scalar> = ranked_g.iter().map(|(v, _)| v.clone()).collect();

    // chain[r][s] accumulates the averaging steps in sorted coordinates.
    let mut chain: Vec<Vec<Scalar>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Scalar::one() } else { Scalar::zero() })
                .collect()
        })
        .collect();
    let mut steps = 0usize;
    while let Some(j) = (0..n).find(|&i| current[i] != target[i]) {
        debug_assert!(current[j] > target[j], "prefix dominance pins the first difference");
        let k = (j + 1..n)
            .find(|&i| current[i] < target[i])
            .expect("equal totals provide a deficient coordinate");
        let delta = (&current[j] - &target[j]).min(&target[k] - &current[k]);
        let gap = &current[j] - &current[k];
        let mix = &delta / &gap;
        let keep = &Scalar::one() - &mix;

        current[j] = &current[j] - &delta;
        current[k] = &current[k] + &delta;
        for s in 0..n {
            let top = &chain[j][s] * &keep + &chain[k][s] * &mix;
            let bottom = &chain[j][s] * &mix + &chain[k][s] * &keep;
            chain[j][s] = top;
            chain[k][s] = bottom;
        }
        steps += 1;
        debug_assert!(steps < n.max(1), "each step fixes a coordinate");
    }

    // Conjugate the chain through both sort permutations: the witness entry
    // at (row label, column label) is the chain entry at their ranks.
    let rank_by_label = |ranked: &[(Scalar, IndexLabel)]| -> BTreeMap<IndexLabel, usize> {
        ranked
            .iter()
            .enumerate()
            .map(|(r, (_, label))| (label.clone(), r))
            .collect()
    };
    let f_rank = rank_by_label(&ranked_f);
    let g_rank = rank_by_label(&ranked_g);
    let block: Vec<Vec<Scalar>> = labels
        .iter()
        .map(|row| {
            let r = f_rank[row];
            labels
                .iter()
                .map(|col| chain[r][g_rank[col]].clone())
                .collect()
        })
        .collect();
    let witness = WindowOperator::new(labels.clone(), labels, block, Tail::Identity)
        .expect("witness window is square and distinct");
    debug_assert_eq!(witness.apply(g).unwrap(), *f);
    Ok(witness)
}

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum ConvexTestFnError {
    #[error("need exactly one more slope than breakpoints")]
    ShapeMismatch,
    #[error("breakpoints must increase strictly")]
    BreakpointsNotIncreasing,
    #[error("slopes must be non-decreasing for convexity")]
    SlopesDecreasing,
    #[error("function would dip below zero; the slope must change sign at the origin")]
    NegativeSomewhere,
}

/// A piecewise-linear convex function with `phi(0) = 0` and `phi >= 0`.
///
/// `slopes[i]` applies between `breakpoints[i - 1]` and `breakpoints[i]`,
/// with the outer slopes extending to both infinities. Nonnegativity holds
/// exactly when the slope is nonpositive left of the origin and
/// nonnegative right of it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConvexTestFn {
    breakpoints: Vec<Scalar>,
    slopes: Vec<Scalar>,
}

impl ConvexTestFn {
    pub fn new(breakpoints: Vec<Scalar>, slopes: Vec<Scalar>) -> Result<Self, ConvexTestFnError> {
        if slopes.len() != breakpoints.len() + 1 {
            return Err(ConvexTestFnError::ShapeMismatch);
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ConvexTestFnError::BreakpointsNotIncreasing);
        }
        if slopes.windows(2).any(|w| w[0] > w[1]) {
            return Err(ConvexTestFnError::SlopesDecreasing);
        }
        let zero = Scalar::zero();
        let left = breakpoints.iter().filter(|b| **b < zero).count();
        let right = breakpoints.iter().filter(|b| **b <= zero).count();
        if slopes[left].is_positive() || slopes[right].is_negative() {
            return Err(ConvexTestFnError::NegativeSomewhere);
        }
        Ok(ConvexTestFn {
            breakpoints,
            slopes,
        })
    }

    /// `x -> (x - cut)+`; the cut must be nonnegative.
    pub fn upper_hinge(cut: Scalar) -> Result<Self, ConvexTestFnError> {
        ConvexTestFn::new(vec![cut], vec![Scalar::zero(), Scalar::one()])
    }

    /// `x -> (cut - x)+`; the cut must be nonpositive.
    pub fn lower_hinge(cut: Scalar) -> Result<Self, ConvexTestFnError> {
        ConvexTestFn::new(vec![cut], vec![-Scalar::one(), Scalar::zero()])
    }

    /// `x -> |x|`.
    pub fn abs_value() -> Self {
        ConvexTestFn::new(vec![Scalar::zero()], vec![-Scalar::one(), Scalar::one()])
            .expect("absolute value is a valid test function")
    }

    pub fn breakpoints(&self) -> &[Scalar] {
        &self.breakpoints
    }

    pub fn slopes(&self) -> &[Scalar] {
        &self.slopes
    }

    /// Exact evaluation by integrating the slope from the origin.
    pub fn eval(&self, x: &Scalar) -> Scalar {
        let zero = Scalar::zero();
        let m = self.breakpoints.len();
        let mut value = Scalar::zero();
        if *x >= zero {
            let mut piece = self.breakpoints.iter().filter(|b| **b <= zero).count();
            let mut position = zero;
            while piece < m && self.breakpoints[piece] < *x {
                value += &(&self.slopes[piece] * &(&self.breakpoints[piece] - &position));
                position = self.breakpoints[piece].clone();
                piece += 1;
            }
            value += &(&self.slopes[piece] * &(x - &position));
        } else {
            let mut piece = self.breakpoints.iter().filter(|b| **b < zero).count();
            let mut position = zero;
            while piece > 0 && self.breakpoints[piece - 1] > *x {
                value += &(&self.slopes[piece] * &(&self.breakpoints[piece - 1] - &position));
                position = self.breakpoints[piece - 1].clone();
                piece -= 1;
            }
            value += &(&self.slopes[piece] * &(x - &position));
        }
        value
    }

    /// The coordinate sum of the function over a vector. Since the
    /// function vanishes at zero, the sum over the support equals the sum
    /// over the whole coordinate space.
    pub fn sum_over(&self, f: &SparseVec) -> Scalar {
        f.iter().map(|(_, v)| self.eval(v)).sum()
    }

    /// Pointwise sum, again a valid test function.
    pub fn add(&self, other: &ConvexTestFn) -> ConvexTestFn {
        let mut merged: Vec<Scalar> = self
            .breakpoints
            .iter()
            .chain(other.breakpoints.iter())
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        merged.sort();
        let slope_right_of = |phi: &ConvexTestFn, x: Option<&Scalar>| -> Scalar {
            let index = match x {
                None => 0,
                Some(x) => phi.breakpoints.iter().filter(|b| *b <= x).count(),
            };
            phi.slopes[index].clone()
        };
        let mut slopes = Vec::with_capacity(merged.len() + 1);
        slopes.push(slope_right_of(self, None) + slope_right_of(other, None));
        for b in &merged {
            slopes.push(slope_right_of(self, Some(b)) + slope_right_of(other, Some(b)));
        }
        ConvexTestFn::new(merged, slopes).expect("sum of valid test functions is valid")
    }

    /// Scales by a nonnegative rational factor.
    pub fn scale(&self, factor: &Scalar) -> ConvexTestFn {
        assert!(!factor.is_negative(), "test functions scale by nonnegative factors");
        if factor.is_zero() {
            return ConvexTestFn::new(vec![], vec![Scalar::zero()])
                .expect("zero function is valid");
        }
        ConvexTestFn::new(
            self.breakpoints.clone(),
            self.slopes.iter().map(|s| s * factor).collect(),
        )
        .expect("nonnegative scaling preserves validity")
    }
}

/// The two sums compared by a convex test.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConvexComparison {
    pub holds: bool,
    pub lhs: Scalar,
    pub rhs: Scalar,
}

/// Checks the majorization-monotone inequality `sum phi(f) <= sum phi(g)`.
pub fn check_convex_inequality(
    f: &SparseVec,
    g: &SparseVec,
    phi: &ConvexTestFn,
) -> ConvexComparison {
    let lhs = phi.sum_over(f);
    let rhs = phi.sum_over(g);
    ConvexComparison {
        holds: lhs <= rhs,
        lhs,
        rhs,
    }
}

/// A bijection between supports carrying one vector onto the other; labels
/// with value zero are left implicit.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PermutationWitness {
    map: BTreeMap<IndexLabel, IndexLabel>,
}

impl PermutationWitness {
    /// The image of a source-support label.
    pub fn image_of(&self, label: &IndexLabel) -> Option<&IndexLabel> {
        self.map.get(label)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&IndexLabel, &IndexLabel)> {
        self.map.iter()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Checks that the map is a support bijection with
    /// `f(image) = g(source)` everywhere.
    pub fn verifies(&self, f: &SparseVec, g: &SparseVec) -> bool {
        let sources: BTreeSet<&IndexLabel> = self.map.keys().collect();
        let images: BTreeSet<&IndexLabel> = self.map.values().collect();
        sources == g.support().collect()
            && images == f.support().collect()
            && images.len() == self.map.len()
            && self.map.iter().all(|(j, i)| f.get(i) == g.get(j))
    }
}

impl fmt::Display for PermutationWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (from, to)) in self.map.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{from} -> {to}")?;
        }
        Ok(())
    }
}

/// Tests whether the vectors are relabelings of each other and, if so,
/// produces the level-matching bijection from `g`'s support to `f`'s.
///
/// Levels are matched in certificate order (positive values decreasing,
/// then negative values from the most negative up) and labels inside one
/// level are paired in ascending order on both sides.
pub fn equivalent_by_permutation(f: &SparseVec, g: &SparseVec) -> Option<PermutationWitness> {
    let f_levels = f.level_sets();
    let g_levels = g.level_sets();
    let f_ordered: Vec<_> = f_levels.ordered().collect();
    let g_ordered: Vec<_> = g_levels.ordered().collect();
    if f_ordered.len() != g_ordered.len() {
        return None;
    }
    let mut map = BTreeMap::new();
    for (fl, gl) in f_ordered.iter().zip(&g_ordered) {
        if fl.value != gl.value || fl.indices.len() != gl.indices.len() {
            return None;
        }
        for (source, image) in gl.indices.iter().zip(&fl.indices) {
            map.insert(source.clone(), image.clone());
        }
    }
    Some(PermutationWitness { map })
}
