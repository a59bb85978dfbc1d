//! Truncations of a geometric pair related by the index shift.
//!
//! At every finite depth the two truncations carry the same values at
//! shifted labels, so they majorize each other and the equivalence
//! bijection is the shift n -> n + 1. This is a finite phenomenon: the
//! untruncated vectors have infinite support, which is outside the
//! crate's decision scope, and nothing about their order follows from the
//! truncations.

use majorize::demo::shift_truncation;

fn main() {
    for depth in [3, 6] {
        let demo = shift_truncation(depth);
        print!("{}", demo.render_text());
        assert!(demo.forward.is_majorized());
        assert!(demo.backward.is_majorized());
        println!();
    }
}
