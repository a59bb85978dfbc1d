//! Shared generators for the integration suites: seeded rational samplers,
//! Birkhoff-style doubly stochastic operators (convex combinations of
//! permutation blocks), and witnessed pairs produced by averaging.
#![allow(dead_code)]

use majorize::{IndexLabel, Scalar, SparseVec, Tail, WindowOperator};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Integer labels `lo..=hi` in ascending order.
pub fn int_labels(lo: i64, hi: i64) -> Vec<IndexLabel> {
    (lo..=hi).map(IndexLabel::Int).collect()
}

/// A rational with numerator in `-9..=9` and denominator in `1..=9`.
pub fn any_scalar(rng: &mut ChaCha8Rng) -> Scalar {
    Scalar::ratio(rng.random_range(-9..=9), rng.random_range(1..=9))
}

/// Like [`any_scalar`] but never zero.
pub fn nonzero_scalar(rng: &mut ChaCha8Rng) -> Scalar {
    loop {
        let s = any_scalar(rng);
        if !s.is_zero() {
            return s;
        }
    }
}

/// A nonnegative rational (possibly zero) with small numerator/denominator.
pub fn nonneg_scalar(rng: &mut ChaCha8Rng) -> Scalar {
    Scalar::ratio(rng.random_range(0..=9), rng.random_range(1..=9))
}

/// In-place Fisher–Yates shuffle.
pub fn shuffle<T>(rng: &mut ChaCha8Rng, items: &mut [T]) {
    for i in (1..items.len()).rev() {
        let j = rng.random_range(0..=i);
        items.swap(i, j);
    }
}

/// A nonempty random subset of `pool` with at most `max` elements.
pub fn label_subset(
    rng: &mut ChaCha8Rng,
    pool: &[IndexLabel],
    max: usize,
) -> Vec<IndexLabel> {
    let mut drawn = pool.to_vec();
    shuffle(rng, &mut drawn);
    let take = rng.random_range(1..=max.min(pool.len()));
    drawn.truncate(take);
    drawn.sort();
    drawn
}

/// A vector with nonzero rational values on a random subset of `pool`.
pub fn random_vector(
    rng: &mut ChaCha8Rng,
    pool: &[IndexLabel],
    max_support: usize,
) -> SparseVec {
    let support = label_subset(rng, pool, max_support);
    let mut v = SparseVec::new();
    for label in support {
        v.set(label, nonzero_scalar(rng));
    }
    v
}

/// A uniformly shuffled permutation of `0..n`.
pub fn random_permutation(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    shuffle(rng, &mut perm);
    perm
}

/// A doubly stochastic operator on `labels` built as a convex combination
/// of up to four permutation blocks with positive rational weights.
pub fn random_doubly_stochastic(rng: &mut ChaCha8Rng, labels: &[IndexLabel]) -> WindowOperator {
    let n = labels.len();
    let count = rng.random_range(1..=4);
    let weights: Vec<Scalar> = (0..count)
        .map(|_| Scalar::from_int(rng.random_range(1..=5)))
        .collect();
    let total = weights
        .iter()
        .fold(Scalar::zero(), |acc, w| acc + w.clone());
    let mut block = vec![vec![Scalar::zero(); n]; n];
    for weight in &weights {
        let perm = random_permutation(rng, n);
        let share = weight.clone() / total.clone();
        for (j, &i) in perm.iter().enumerate() {
            block[i][j] = block[i][j].clone() + share.clone();
        }
    }
    let op = WindowOperator::new(labels.to_vec(), labels.to_vec(), block, Tail::Identity)
        .expect("square block over distinct labels");
    debug_assert!(op.is_doubly_stochastic());
    op
}

/// A pair `(f, g)` with `f = D g` for a random doubly stochastic `D`, so
/// `f` is majorized by `g` by construction.
pub fn witnessed_pair(rng: &mut ChaCha8Rng, labels: &[IndexLabel]) -> (SparseVec, SparseVec) {
    let g = random_vector(rng, labels, labels.len());
    let d = random_doubly_stochastic(rng, labels);
    let f = d.apply(&g).expect("identity-tail application is total");
    (f, g)
}

/// A small operator with arbitrary rational entries: square with an
/// identity tail, or rectangular with a zero tail. Not necessarily
/// stochastic in any sense.
pub fn random_operator(rng: &mut ChaCha8Rng) -> WindowOperator {
    let identity = rng.random_bool(0.5);
    let n = rng.random_range(1..=3);
    let m = if identity { n } else { rng.random_range(1..=3) };
    let rows = int_labels(1, n);
    let cols = int_labels(1, m);
    let block = (0..n)
        .map(|_| (0..m).map(|_| any_scalar(rng)).collect())
        .collect();
    let tail = if identity { Tail::Identity } else { Tail::Zero };
    WindowOperator::new(rows, cols, block, tail).expect("distinct labels, rectangular block")
}
