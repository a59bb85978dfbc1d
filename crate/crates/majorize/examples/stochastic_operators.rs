//! Build, validate, compose, and apply doubly stochastic window
//! operators.
//!
//! A window operator is a finite rational block on labeled rows and
//! columns plus a declared tail: identity off the window (the operator
//! fixes every unlisted coordinate) or zero off the window. Validation is
//! exact — no tolerances anywhere.

use majorize::{contraction_check, PNorm, Scalar, SparseVec, Tail, WindowOperator};

fn main() {
    let labels = |names: &[&str]| names.iter().map(|n| (*n).into()).collect::<Vec<_>>();

    // The strict constructor checks every row and column sum.
    let uniform = WindowOperator::from_coefficients(
        labels(&["a", "b"]),
        labels(&["a", "b"]),
        vec![
            vec![Scalar::ratio(1, 2), Scalar::ratio(1, 2)],
            vec![Scalar::ratio(1, 2), Scalar::ratio(1, 2)],
        ],
    )
    .unwrap();
    println!("uniform averaging operator:\n{uniform}");
    println!("{}", uniform.validate());

    // Bad sums are rejected with the offending line.
    let lopsided = WindowOperator::from_coefficients(
        labels(&["a", "b"]),
        labels(&["a", "b"]),
        vec![
            vec![Scalar::ratio(2, 3), Scalar::ratio(1, 3)],
            vec![Scalar::ratio(1, 3), Scalar::ratio(1, 3)],
        ],
    );
    println!("lopsided block: {}\n", lopsided.unwrap_err());

    // Application is an exact matrix-vector product; identity tails pass
    // off-window coordinates through untouched.
    let f = SparseVec::from_pairs([("a", Scalar::one()), ("z", Scalar::from_int(7))]);
    println!("uniform applied to {f}: {}", uniform.apply(&f).unwrap());

    // Composition stays doubly stochastic — exactly.
    let swap = WindowOperator::new(
        labels(&["a", "b"]),
        labels(&["a", "b"]),
        vec![
            vec![Scalar::zero(), Scalar::one()],
            vec![Scalar::one(), Scalar::zero()],
        ],
        Tail::Identity,
    )
    .unwrap();
    let composed = swap.compose(&uniform).unwrap();
    assert!(composed.validate().doubly_stochastic);
    println!("\nswap o uniform:\n{composed}");

    // Doubly stochastic operators never increase a p-norm.
    let samples = vec![
        SparseVec::unit("a"),
        SparseVec::from_pairs([("a", Scalar::one()), ("b", -Scalar::one())]),
    ];
    let report =
        contraction_check(&uniform, &samples, &PNorm::from_int(2).unwrap()).unwrap();
    println!("\ncontraction check: {report}");
}
