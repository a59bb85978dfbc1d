//! A sum of two order-preserving relabelings that fails to preserve the
//! order.
//!
//! Each weighted injective relabeling preserves majorization on its own,
//! and so does a sum whose injections have disjoint images. Here the
//! images overlap — the doubling rule n -> 2n collides with the identity
//! in row 2 — and a concrete mutually majorized pair maps to a strictly
//! unordered image pair, with the separating hinge as the certificate.

use majorize::demo::sum_of_preservers;
use majorize::{majorizes, IndexLabel, ViolationReport};

fn main() {
    let demo = sum_of_preservers();
    print!("{}", demo.render_text());

    // The violation pins down the exact collision.
    assert_eq!(
        demo.violation,
        ViolationReport::RowWithTwoEntries {
            row: IndexLabel::Int(2),
            first_col: IndexLabel::Int(1),
            second_col: IndexLabel::Int(2),
        }
    );

    // The refutation re-verifies against the images.
    let (tf, tg) = &demo.images;
    assert!(demo.refutation.verify(tf, tg));
    assert!(!majorizes(tf, tg).is_majorized());
}
