//! Decide majorization for a few pairs and inspect the certificates.
//!
//! Every decision returns evidence: a doubly stochastic witness that maps
//! the dominating vector onto the dominated one exactly, or a refutation
//! (trace mismatch or a separating hinge function) that recomputes from
//! scratch.

use majorize::{majorizes, MajorizationCertificate, SparseVec};

fn vec_of(pairs: &[(&str, &str)]) -> SparseVec {
    pairs
        .iter()
        .map(|(label, value)| (*label, value.parse().unwrap()))
        .collect()
}

fn main() {
    // An averaging pair: spreading mass is always majorized by
    // concentrating it.
    let f = vec_of(&[("a", "1/2"), ("b", "1/2")]);
    let g = vec_of(&[("a", "1")]);
    let certificate = majorizes(&f, &g);
    println!("f = {f}");
    println!("g = {g}");
    println!("{certificate}");
    if let MajorizationCertificate::Majorized { witness } = &certificate {
        assert!(witness.is_doubly_stochastic());
        assert_eq!(witness.apply(&g).unwrap(), f);
        println!("witness re-applied to g reproduces f exactly\n");
    }

    // The reverse direction fails; the certificate carries the separating
    // hinge and both of its sums.
    let certificate = majorizes(&g, &f);
    println!("g majorized by f? {certificate}");
    let refutation = certificate.refutation().unwrap();
    assert!(refutation.verify(&g, &f));
    println!("refutation recomputes exactly\n");

    // Unequal totals short-circuit: no doubly stochastic operator can
    // change the trace.
    let h = vec_of(&[("a", "2")]);
    println!("h = {h} against g = {g}");
    println!("{}", majorizes(&h, &g));

    // A pair with negative entries exercises the lower hinge.
    let f = vec_of(&[("a", "2"), ("b", "-2")]);
    let g = vec_of(&[("a", "1"), ("b", "-1")]);
    println!("\nf = {f} against g = {g}");
    println!("{}", majorizes(&f, &g));
}
