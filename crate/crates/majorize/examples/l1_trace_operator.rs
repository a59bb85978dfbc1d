//! The trace-times-density operator: order-preserving at exponent 1, yet
//! outside the weighted-injection form.
//!
//! T sends f to trace(f) * h for a fixed density h, so every column of T
//! equals h. Majorized pairs share a trace and map to the same image —
//! order trivially preserved — but with two or more columns every support
//! row of h is hit by all of them, so the row-structure condition that
//! characterizes preservers at exponents above 1 fails. The
//! characterization genuinely needs p > 1.

use majorize::demo::l1_trace;
use majorize::{check_row_structure, trace_operator_l1, IndexLabel, SparseVec};

fn main() {
    let demo = l1_trace();
    print!("{}", demo.render_text());
    assert!(demo.report.all_preserved());

    // With a single column there is no collision and the structure check
    // passes — the phenomenon needs at least two columns.
    let h = SparseVec::unit(1);
    let single = trace_operator_l1(&h, &[IndexLabel::Int(1)]).unwrap();
    assert!(check_row_structure(&single).is_ok());
    println!("\nsingle-column trace operator passes the row check trivially");
}
