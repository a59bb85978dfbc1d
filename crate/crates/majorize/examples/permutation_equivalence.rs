//! Extract the relabeling bijection between mutually majorized vectors.
//!
//! Two finitely supported vectors majorize each other exactly when one is
//! a relabeling of the other. The bijection is built level set by level
//! set: indices carrying the same value are matched in ascending label
//! order, making the witness deterministic.

use majorize::{equivalent_by_permutation, majorizes, SparseVec};

fn vec_of(pairs: &[(&str, &str)]) -> SparseVec {
    pairs
        .iter()
        .map(|(label, value)| (*label, value.parse().unwrap()))
        .collect()
}

fn main() {
    // A geometric vector and its shift carry the same values at shifted
    // labels.
    let f = vec_of(&[("2", "1/2"), ("3", "1/4"), ("4", "1/8")]);
    let g = vec_of(&[("1", "1/2"), ("2", "1/4"), ("3", "1/8")]);
    println!("f = {f}");
    println!("g = {g}");
    assert!(majorizes(&f, &g).is_majorized());
    assert!(majorizes(&g, &f).is_majorized());

    let witness = equivalent_by_permutation(&f, &g).unwrap();
    println!("bijection from g's support onto f's:\n{witness}");
    assert!(witness.verifies(&f, &g));

    // The level-set structure drives the matching: values group the
    // support, positive levels first in decreasing order, then negative
    // levels from the most negative up.
    let v = vec_of(&[("a", "3"), ("b", "3"), ("c", "1"), ("d", "-2")]);
    println!("\nlevel sets of {v}:");
    for level in v.level_sets().ordered() {
        let labels: Vec<String> = level.indices.iter().map(|l| l.to_string()).collect();
        println!("  value {}: {{{}}}", level.value, labels.join(", "));
    }

    // Same values at swapped signs is NOT equivalence: the multisets must
    // agree exactly.
    let w = vec_of(&[("a", "1"), ("b", "-1")]);
    let x = vec_of(&[("a", "-1"), ("b", "1")]);
    println!(
        "\n{w} vs {x}: equivalent? {}",
        equivalent_by_permutation(&w, &x).is_some()
    );

    let y = vec_of(&[("a", "1"), ("b", "1")]);
    let z = vec_of(&[("x", "2")]);
    println!(
        "{y} vs {z}: equivalent? {}",
        equivalent_by_permutation(&y, &z).is_some()
    );
}
