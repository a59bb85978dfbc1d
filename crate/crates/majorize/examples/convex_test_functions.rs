//! Piecewise-linear convex test functions and the inequality they induce.
//!
//! Majorization forces `sum phi(f) <= sum phi(g)` for every convex
//! `phi >= 0` with `phi(0) = 0`. The library evaluates these sums exactly,
//! so the inequality doubles as an independent oracle against the prefix
//! decision rule — and a violated instance is a checkable refutation.

use majorize::{check_convex_inequality, majorizes, ConvexTestFn, Scalar, SparseVec};

fn vec_of(pairs: &[(&str, &str)]) -> SparseVec {
    pairs
        .iter()
        .map(|(label, value)| (*label, value.parse().unwrap()))
        .collect()
}

fn s(text: &str) -> Scalar {
    text.parse().unwrap()
}

fn main() {
    // Hinges are the workhorses: (x - c)+ for c >= 0, (c - x)+ for c <= 0.
    let upper = ConvexTestFn::upper_hinge(s("1/4")).unwrap();
    let f = vec_of(&[("a", "1/2"), ("b", "1/2")]);
    let g = vec_of(&[("a", "1")]);
    println!("sum (x - 1/4)+ over f = {}", upper.sum_over(&f));
    println!("sum (x - 1/4)+ over g = {}", upper.sum_over(&g));
    let comparison = check_convex_inequality(&f, &g, &upper);
    assert!(comparison.holds);
    println!(
        "inequality holds on the majorized pair: {} <= {}\n",
        comparison.lhs, comparison.rhs
    );

    // On a non-majorized pair some hinge fails, and that failure is the
    // refutation the decision procedure emits.
    let h = vec_of(&[("a", "2")]);
    let k = vec_of(&[("a", "1"), ("b", "1")]);
    let hinge_at_one = ConvexTestFn::upper_hinge(s("1")).unwrap();
    let comparison = check_convex_inequality(&h, &k, &hinge_at_one);
    assert!(!comparison.holds);
    println!(
        "hinge at 1 separates h = {h} from k = {k}: {} > {}",
        comparison.lhs, comparison.rhs
    );
    println!("decision procedure agrees: {}\n", majorizes(&h, &k));

    // Richer functions come from sums and nonnegative scalings; evaluation
    // stays exact.
    let phi = ConvexTestFn::abs_value()
        .scale(&s("2"))
        .add(&ConvexTestFn::upper_hinge(s("1")).unwrap())
        .add(&ConvexTestFn::lower_hinge(s("-3/2")).unwrap());
    println!("phi = 2|x| + (x - 1)+ + (-3/2 - x)+");
    for x in ["-2", "-3/2", "0", "1", "3"] {
        println!("  phi({x}) = {}", phi.eval(&s(x)));
    }

    // Convexity and nonnegativity are enforced at construction.
    println!(
        "\ndecreasing slopes: {}",
        ConvexTestFn::new(vec![s("0")], vec![s("1"), s("0")]).unwrap_err()
    );
    println!(
        "hinge dipping below zero: {}",
        ConvexTestFn::upper_hinge(s("-1")).unwrap_err()
    );
}
