//! Relabel doubly stochastic operators through injective index maps.
//!
//! An injection sigma turns into a 0/1 operator P_sigma sending e_j to
//! e_{sigma(j)}. Conjugating a doubly stochastic D through a family of
//! injections with pairwise disjoint images produces the relabeled
//! operator D-tilde acting inside each image copy and as the identity
//! elsewhere, and the exchange rule P_sigma D = D-tilde P_sigma holds
//! exactly.

use majorize::{IndexInjection, IndexLabel, SparseVec, WindowOperator};

fn main() {
    let window: Vec<IndexLabel> = [1, 2].map(IndexLabel::Int).to_vec();

    // The doubling rule n -> 2n is injective on all integer labels.
    let doubling = IndexInjection::affine(2, 0).unwrap();
    let p_sigma = WindowOperator::permutation_from_injection(&doubling, &window).unwrap();
    println!("P for n -> 2n on window {{1, 2}}:\n{p_sigma}");
    println!("{}", p_sigma.validate());

    // Conjugate the uniform averaging block through the doubling: the
    // block moves to the even labels, everything else stays fixed.
    let uniform = WindowOperator::uniform(window.clone()).unwrap();
    let conjugated = uniform.conjugate_by_injections(&[doubling.clone()]).unwrap();
    println!("\nuniform on {{1, 2}} conjugated through n -> 2n:\n{conjugated}");

    // The exchange rule, checked on a basis vector: both orders of
    // application agree exactly.
    let e1 = SparseVec::unit(1);
    let lhs = p_sigma.apply(&uniform.apply(&e1).unwrap()).unwrap();
    let rhs = conjugated.apply(&p_sigma.apply(&e1).unwrap()).unwrap();
    assert_eq!(lhs, rhs);
    println!("\nP(D e1) = D-tilde(P e1) = {lhs}");

    // Two injections with disjoint images relabel independently: evens
    // carry one copy of the swap, odds another.
    let swap = WindowOperator::new(
        window.clone(),
        window.clone(),
        vec![
            vec![majorize::Scalar::zero(), majorize::Scalar::one()],
            vec![majorize::Scalar::one(), majorize::Scalar::zero()],
        ],
        majorize::Tail::Identity,
    )
    .unwrap();
    let odds = IndexInjection::affine(2, 1).unwrap();
    let two_copies = swap.conjugate_by_injections(&[doubling, odds]).unwrap();
    println!("\nswap conjugated through n -> 2n and n -> 2n + 1:\n{two_copies}");

    // Overlapping images are rejected: the identity image meets every
    // other image.
    let identity = IndexInjection::affine(1, 0).unwrap();
    let overlap = swap.conjugate_by_injections(&[identity, IndexInjection::affine(2, 0).unwrap()]);
    println!("\noverlapping family: {}", overlap.unwrap_err());
}
