//! Property-based suite: randomized laws the library must satisfy for
//! arbitrary inputs, including an independent hinge-sum decision oracle
//! the certified order decision is checked against.

mod common;

use std::collections::BTreeSet;

use majorize::sparse::sorted_padded;
use majorize::{
    build_preserver, decompose, equivalent_by_permutation, majorizes, ConvexTestFn, FormatError,
    IndexInjection, IndexLabel, NormValue, PNorm, PreserverSpec, Scalar, SparseVec,
};
use majorize::format::{
    parse_operator, parse_preserver_spec, parse_vector, render_operator, render_preserver_spec,
    render_vector,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{
    int_labels, label_subset, nonzero_scalar, random_doubly_stochastic, random_operator, shuffle,
    witnessed_pair,
};

fn scalar_strategy() -> impl Strategy<Value = Scalar> {
    (-20i64..=20, 1i64..=12).prop_map(|(num, den)| Scalar::ratio(num, den))
}

fn label_strategy() -> impl Strategy<Value = IndexLabel> {
    prop_oneof![
        (0i64..=9).prop_map(IndexLabel::Int),
        "[a-d]{1,2}".prop_map(IndexLabel::Text),
    ]
}

fn entries_strategy() -> impl Strategy<Value = Vec<(IndexLabel, Scalar)>> {
    proptest::collection::vec((label_strategy(), scalar_strategy()), 0..=7)
}

fn vector_strategy() -> impl Strategy<Value = SparseVec> {
    entries_strategy().prop_map(SparseVec::from_pairs)
}

/// Decides the order by brute hinge sums over the zero-padded pair: equal
/// traces, and for every cut drawn from the padded entries, the upper
/// parts of `f` sum no higher than those of `g`. This is a complete
/// criterion and shares no code with the certified decision.
fn hinge_oracle(f: &SparseVec, g: &SparseVec) -> bool {
    if f.trace() != g.trace() {
        return false;
    }
    let union: BTreeSet<&IndexLabel> = f.support().chain(g.support()).collect();
    let pad = |v: &SparseVec| -> Vec<Scalar> {
        let mut values: Vec<Scalar> = v.iter().map(|(_, x)| x.clone()).collect();
        values.resize(union.len(), Scalar::zero());
        values
    };
    let fv = pad(f);
    let gv = pad(g);
    let mut cuts: Vec<Scalar> = fv.iter().chain(gv.iter()).cloned().collect();
    cuts.push(Scalar::zero());
    let upper_sum = |values: &[Scalar], t: &Scalar| -> Scalar {
        values
            .iter()
            .filter(|x| *x > t)
            .map(|x| x - t)
            .sum()
    };
    cuts.iter().all(|t| upper_sum(&fv, t) <= upper_sum(&gv, t))
}

proptest! {
    #[test]
    fn zeros_are_never_stored(entries in entries_strategy()) {
        let built = SparseVec::from_pairs(entries.clone());
        for (_, value) in built.iter() {
            prop_assert!(!value.is_zero(), "stored a zero: {built}");
        }
        let labels: BTreeSet<IndexLabel> = entries.iter().map(|(l, _)| l.clone()).collect();
        for label in labels {
            let total: Scalar = entries
                .iter()
                .filter(|(l, _)| *l == label)
                .map(|(_, v)| v.clone())
                .sum();
            prop_assert_eq!(built.get(&label), total);
        }
    }

    #[test]
    fn sorted_padding_preserves_the_multiset(f in vector_strategy(), g in vector_strategy()) {
        let union: BTreeSet<&IndexLabel> = f.support().chain(g.support()).collect();
        let (fv, gv) = sorted_padded(&f, &g);
        prop_assert_eq!(fv.len(), union.len());
        prop_assert_eq!(gv.len(), union.len());
        for (side, values) in [(&f, &fv), (&g, &gv)] {
            for pair in values.windows(2) {
                prop_assert!(pair[0] >= pair[1], "not sorted decreasingly: {values:?}");
            }
            let mut stored: Vec<Scalar> = side.iter().map(|(_, v)| v.clone()).collect();
            stored.resize(union.len(), Scalar::zero());
            stored.sort();
            let mut padded = values.clone();
            padded.sort();
            prop_assert_eq!(stored, padded, "padding changed the value multiset");
        }
    }

    #[test]
    fn level_sets_partition_the_support(f in vector_strategy()) {
        let partition = f.level_sets();
        for level in partition.positive.iter() {
            prop_assert!(level.value.is_positive());
        }
        for level in partition.negative.iter() {
            prop_assert!(level.value.is_negative());
        }
        for pair in partition.positive.windows(2) {
            prop_assert!(pair[0].value > pair[1].value);
        }
        for pair in partition.negative.windows(2) {
            prop_assert!(pair[0].value < pair[1].value);
        }
        let mut rebuilt = SparseVec::new();
        for level in partition.ordered() {
            for label in &level.indices {
                prop_assert!(rebuilt.get(label).is_zero(), "levels overlap at {label}");
                rebuilt.set(label.clone(), level.value.clone());
            }
        }
        prop_assert_eq!(rebuilt, f);
    }

    #[test]
    fn exponent_one_norm_is_the_absolute_trace(f in vector_strategy()) {
        let total: Scalar = f.iter().map(|(_, v)| v.abs()).sum();
        prop_assert_eq!(f.p_norm(&PNorm::one()), NormValue::Exact(total));
    }

    #[test]
    fn vector_arithmetic_is_componentwise(
        f in vector_strategy(),
        g in vector_strategy(),
        c in scalar_strategy(),
    ) {
        let sum = f.add(&g);
        let scaled = f.scale(&c);
        prop_assert_eq!(sum.trace(), f.trace() + g.trace());
        prop_assert_eq!(scaled.trace(), &c * &f.trace());
        for label in f.support().chain(g.support()) {
            prop_assert_eq!(sum.get(label), f.get(label) + g.get(label));
        }
        for label in f.support() {
            prop_assert_eq!(scaled.get(label), &c * &f.get(label));
        }
        prop_assert_eq!(f.sub(&g), f.add(&g.negate()));
    }

    #[test]
    fn transpose_swaps_row_and_column_verdicts(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let operator = random_operator(&mut rng);
        let direct = operator.validate();
        let flipped = operator.transpose().validate();
        prop_assert_eq!(direct.row_stochastic, flipped.column_stochastic);
        prop_assert_eq!(direct.column_stochastic, flipped.row_stochastic);
        prop_assert_eq!(direct.doubly_stochastic, flipped.doubly_stochastic);
    }

    #[test]
    fn doubly_stochastic_products_validate(seed in any::<u64>(), n in 1i64..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let labels = int_labels(1, n);
        let a = random_doubly_stochastic(&mut rng, &labels);
        let b = random_doubly_stochastic(&mut rng, &labels);
        let product = a.compose(&b).expect("same window composes");
        prop_assert!(product.validate().doubly_stochastic);
    }

    #[test]
    fn decision_matches_the_hinge_oracle(f in vector_strategy(), g in vector_strategy()) {
        let certificate = majorizes(&f, &g);
        prop_assert_eq!(certificate.is_majorized(), hinge_oracle(&f, &g));
        match (certificate.witness(), certificate.refutation()) {
            (Some(witness), None) => {
                prop_assert!(witness.validate().doubly_stochastic);
                prop_assert_eq!(witness.apply(&g).expect("total"), f);
            }
            (None, Some(refutation)) => prop_assert!(refutation.verify(&f, &g)),
            _ => prop_assert!(false, "certificate carries neither witness nor refutation"),
        }
    }

    #[test]
    fn averaging_produces_majorized_vectors(seed in any::<u64>(), n in 1i64..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let labels = int_labels(1, n);
        let (f, g) = witnessed_pair(&mut rng, &labels);
        prop_assert!(majorizes(&f, &g).is_majorized());
        prop_assert!(majorizes(&f, &f).is_majorized(), "the order is reflexive");
        let further = random_doubly_stochastic(&mut rng, &labels)
            .apply(&f)
            .expect("total");
        prop_assert!(
            majorizes(&further, &g).is_majorized(),
            "two averaging steps stay below the source"
        );
    }

    #[test]
    fn equivalence_is_mutual_majorization(f in vector_strategy(), g in vector_strategy()) {
        let mutual = majorizes(&f, &g).is_majorized() && majorizes(&g, &f).is_majorized();
        match equivalent_by_permutation(&f, &g) {
            Some(witness) => {
                prop_assert!(mutual, "equivalent pairs must majorize each other");
                prop_assert!(witness.verifies(&f, &g));
            }
            None => prop_assert!(!mutual, "mutually majorizing pairs must be equivalent"),
        }
    }

    #[test]
    fn convex_test_functions_form_a_cone(
        up in 0i64..=6,
        down in 0i64..=6,
        weight_num in 0i64..=5,
        x in scalar_strategy(),
    ) {
        let upper = ConvexTestFn::upper_hinge(Scalar::from_int(up)).expect("nonnegative cut");
        let lower = ConvexTestFn::lower_hinge(Scalar::from_int(-down)).expect("nonpositive cut");
        let weight = Scalar::ratio(weight_num, 3);
        let expected_upper = (&x - &Scalar::from_int(up)).max(Scalar::zero());
        let expected_lower = (&Scalar::from_int(-down) - &x).max(Scalar::zero());
        prop_assert_eq!(upper.eval(&x), expected_upper.clone());
        prop_assert_eq!(lower.eval(&x), expected_lower.clone());
        let combined = upper.scale(&weight).add(&lower).add(&ConvexTestFn::abs_value());
        prop_assert_eq!(
            combined.eval(&x),
            &weight * &expected_upper + expected_lower + x.abs()
        );
    }

    #[test]
    fn vector_files_round_trip(f in vector_strategy()) {
        let parsed = parse_vector(&render_vector(&f)).expect("rendered vectors parse");
        prop_assert_eq!(parsed, f);
    }

    #[test]
    fn operator_files_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let operator = random_operator(&mut rng);
        let parsed = parse_operator(&render_operator(&operator)).expect("rendered operators parse");
        prop_assert_eq!(parsed, operator);
    }

    #[test]
    fn spec_files_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = random_spec(&mut rng);
        let parsed =
            parse_preserver_spec(&render_preserver_spec(&spec)).expect("rendered specs parse");
        prop_assert_eq!(parsed, spec);
    }

    #[test]
    fn decomposition_is_scale_covariant(seed in any::<u64>(), num in 1i64..=6, den in 1i64..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = random_spec(&mut rng);
        let window = label_subset(&mut rng, &int_labels(1, 6), 6);
        let operator = build_preserver(&spec, &window).expect("affine specs build anywhere");
        let factor = Scalar::ratio(num, den);
        let scaled = operator.scale(&factor);
        let base = decompose(&operator, PNorm::one()).expect("clean structure");
        let recovered = decompose(&scaled, PNorm::one()).expect("scaling keeps the structure");
        prop_assert_eq!(
            build_preserver(&recovered, &window).expect("recovered specs rebuild"),
            scaled.clone()
        );
        match (base.column_norm(), recovered.column_norm()) {
            (NormValue::Exact(a), NormValue::Exact(b)) => {
                prop_assert_eq!(b, &factor.abs() * &a, "column lengths must scale with the factor");
            }
            _ => prop_assert!(false, "exponent-one column lengths are exact"),
        }
    }

    #[test]
    fn zero_padding_never_changes_the_verdict(
        f in vector_strategy(),
        g in vector_strategy(),
        count in 1usize..=4,
    ) {
        let baseline = majorizes(&f, &g);
        let mut padded_f = f.clone();
        let mut padded_g = g.clone();
        for t in 0..count {
            let fresh = IndexLabel::Int(1000 + t as i64);
            padded_f.set(fresh.clone(), Scalar::zero());
            padded_g.set(fresh, Scalar::zero());
        }
        prop_assert_eq!(&padded_f, &f);
        prop_assert_eq!(&padded_g, &g);
        prop_assert_eq!(majorizes(&padded_f, &padded_g), baseline);
    }
}

/// A random weighted family of injections with pairwise disjoint images:
/// affine rules sharing one scale with distinct residues, plus sometimes a
/// finite map built from fresh labels.
fn random_spec(rng: &mut ChaCha8Rng) -> PreserverSpec {
    let term_count = rng.random_range(1..=3usize);
    let scale = rng.random_range(term_count as i64..=5);
    let mut offsets: Vec<i64> = (0..scale).collect();
    shuffle(rng, &mut offsets);
    let mut terms: Vec<(Scalar, IndexInjection)> = offsets[..term_count]
        .iter()
        .map(|&offset| {
            (
                nonzero_scalar(rng),
                IndexInjection::affine(scale, offset).expect("nonzero scale"),
            )
        })
        .collect();
    if rng.random_bool(0.3) {
        // A finite relabeling into labels no affine term can reach keeps
        // the images disjoint.
        let sources = int_labels(1, 6);
        let map: std::collections::BTreeMap<IndexLabel, IndexLabel> = sources
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), IndexLabel::Text(format!("m{i}"))))
            .collect();
        terms.push((
            nonzero_scalar(rng),
            IndexInjection::from_map(map).expect("distinct images"),
        ));
    }
    let p = match rng.random_range(0..3) {
        0 => PNorm::one(),
        1 => PNorm::from_int(2).expect("2 >= 1"),
        _ => PNorm::new(Scalar::ratio(7, 2)).expect("7/2 >= 1"),
    };
    PreserverSpec::new(terms, p).expect("images are disjoint by construction")
}

#[test]
fn rendered_specs_reject_overlapping_images_on_parse() {
    let text = r#"{"p": "1", "terms": [
        {"alpha": "1", "sigma": {"affine": {"k": 1, "c": 0}}},
        {"alpha": "1", "sigma": {"affine": {"k": 1, "c": 1}}}
    ]}"#;
    match parse_preserver_spec(text) {
        Err(FormatError::Preserver(_)) => {}
        other => panic!("expected an overlap rejection, got {other:?}"),
    }
}
