//! Three self-contained demonstrations of boundary phenomena, each
//! returning the full evidence (operators, certificates, violation
//! reports) so callers can re-verify every claim.

use serde_json::{json, Value};

use crate::format;
use crate::label::IndexLabel;
use crate::majorization::{
    equivalent_by_permutation, majorizes, MajorizationCertificate, PermutationWitness, Refutation,
};
use crate::preserver::{
    build_preserver, check_row_structure, trace_operator_l1, verify_preserver_on_samples,
    OperatorColumns, PreservationReport, PreserverSpec, ViolationReport,
};
use crate::scalar::{PNorm, Scalar};
use crate::sparse::SparseVec;
use crate::stochastic::IndexInjection;

/// Truncations of the geometric pair `f = sum 2^-n e_{n+1}`,
/// `g = sum 2^-n e_n`: mutually majorized at every depth, related by the
/// shift `n -> n + 1`.
///
/// The untruncated vectors have infinite support, which is outside this
/// crate's decision scope; the truncations being equivalent at every
/// depth says nothing about the limit pair, and no claim about it is
/// decided here.
pub struct ShiftTruncationDemo {
    pub depth: u32,
    pub f: SparseVec,
    pub g: SparseVec,
    pub forward: MajorizationCertificate,
    pub backward: MajorizationCertificate,
    pub bijection: PermutationWitness,
}

pub fn shift_truncation(depth: u32) -> ShiftTruncationDemo {
    let mut f = SparseVec::new();
    let mut g = SparseVec::new();
    let mut weight = Scalar::one();
    let half = Scalar::ratio(1, 2);
    for n in 1..=i64::from(depth) {
        weight = weight * half.clone();
        f.set(IndexLabel::Int(n + 1), weight.clone());
        g.set(IndexLabel::Int(n), weight.clone());
    }
    let forward = majorizes(&f, &g);
    let backward = majorizes(&g, &f);
    let bijection =
        equivalent_by_permutation(&f, &g).expect("truncations share their value multiset");
    ShiftTruncationDemo {
        depth,
        f,
        g,
        forward,
        backward,
        bijection,
    }
}

impl ShiftTruncationDemo {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "geometric pair truncated at depth {}\n",
            self.depth
        ));
        out.push_str(&format!("f = {}\n", self.f));
        out.push_str(&format!("g = {}\n", self.g));
        out.push_str(&format!(
            "f majorized by g: {}\n",
            yes_no(self.forward.is_majorized())
        ));
        out.push_str(&format!(
            "g majorized by f: {}\n",
            yes_no(self.backward.is_majorized())
        ));
        out.push_str("relabeling bijection (g support -> f support):\n");
        out.push_str(&format!("{}\n", self.bijection));
        out.push_str(
            "note: the untruncated pair has infinite support and lies outside \
             this crate's decision scope; nothing is claimed about its order.\n",
        );
        out
    }

    pub fn to_value(&self) -> Value {
        json!({
            "depth": self.depth,
            "f": format::vector_value(&self.f),
            "g": format::vector_value(&self.g),
            "f_majorized_by_g": self.forward.is_majorized(),
            "g_majorized_by_f": self.backward.is_majorized(),
            "bijection": format::permutation_value(&self.bijection)["bijection"].clone(),
            "note": "untruncated pair is outside finite-support decision scope",
        })
    }
}

/// A sum of two weighted relabelings whose images overlap: the doubling
/// rule `n -> 2n` plus the identity. The overlap puts two entries into
/// row 2, and a concrete majorized pair maps to an unordered image pair.
pub struct SumOfPreserversDemo {
    pub operator: OperatorColumns,
    pub violation: ViolationReport,
    pub pair: (SparseVec, SparseVec),
    pub images: (SparseVec, SparseVec),
    pub refutation: Refutation,
}

pub fn sum_of_preservers() -> SumOfPreserversDemo {
    let window: Vec<IndexLabel> = [1, 2, 3].map(IndexLabel::Int).to_vec();
    let p = PNorm::from_int(2).expect("2 >= 1");
    let single_term = |scale: i64, offset: i64| -> OperatorColumns {
        let spec = PreserverSpec::new(
            vec![(
                Scalar::one(),
                IndexInjection::affine(scale, offset).expect("nonzero scale"),
            )],
            p.clone(),
        )
        .expect("a single term cannot overlap");
        build_preserver(&spec, &window).expect("affine terms cover integer windows")
    };
    let operator = single_term(2, 0).add(&single_term(1, 0));
    let violation =
        check_row_structure(&operator).expect_err("doubling and identity collide in row 2");
    let f = SparseVec::from_pairs([(1, Scalar::one()), (2, Scalar::one())]);
    let g = SparseVec::from_pairs([(1, Scalar::one()), (3, Scalar::one())]);
    let report = verify_preserver_on_samples(&operator, &[(f.clone(), g.clone())])
        .expect("the sample pair is mutually majorized");
    let failure = report
        .failures
        .first()
        .expect("the image pair is strictly unordered");
    SumOfPreserversDemo {
        operator,
        violation,
        images: (failure.image_f.clone(), failure.image_g.clone()),
        refutation: failure.refutation.clone(),
        pair: (f, g),
    }
}

impl SumOfPreserversDemo {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str("sum of the doubling relabeling (n -> 2n) and the identity on window {1, 2, 3}\n");
        out.push_str(&format!("{}\n", self.operator));
        out.push_str(&format!("row-structure check: {}\n", self.violation));
        out.push_str(
            "columns 1 and 2 both place the value 1 in row 2, so two distinct \
             columns feed one row\n",
        );
        out.push_str(&format!(
            "sample pair (mutually majorized): f = {}, g = {}\n",
            self.pair.0, self.pair.1
        ));
        out.push_str(&format!(
            "images: Tf = {}, Tg = {}\n",
            self.images.0, self.images.1
        ));
        out.push_str(&format!(
            "Tf majorized by Tg: no — {}\n",
            self.refutation
        ));
        out.push_str("the sum form with overlapping images does not preserve the order\n");
        out
    }

    pub fn to_value(&self) -> Value {
        json!({
            "operator": format::columns_value(&self.operator),
            "row_structure": self.violation.to_string(),
            "pair": {
                "f": format::vector_value(&self.pair.0),
                "g": format::vector_value(&self.pair.1),
            },
            "images": {
                "f": format::vector_value(&self.images.0),
                "g": format::vector_value(&self.images.1),
            },
            "refutation": format::refutation_value(&self.refutation),
        })
    }
}

/// The rank-one operator `f -> trace(f) * h` at exponent 1: order is
/// preserved on every majorized pair (their traces agree, so the images
/// coincide), yet the row-structure condition fails outright — the
/// injection-sum form is not necessary at exponent 1.
pub struct L1TraceDemo {
    pub density: SparseVec,
    pub operator: OperatorColumns,
    pub report: PreservationReport,
    pub violation: ViolationReport,
}

pub fn l1_trace() -> L1TraceDemo {
    let density = SparseVec::from_pairs([
        (1, Scalar::ratio(1, 2)),
        (2, Scalar::ratio(1, 2)),
    ]);
    let window: Vec<IndexLabel> = [1, 2, 3, 4].map(IndexLabel::Int).to_vec();
    let operator = trace_operator_l1(&density, &window).expect("density is nonzero");
    let pairs = sample_pairs_in_window();
    let report = verify_preserver_on_samples(&operator, &pairs)
        .expect("every sample pair is majorized");
    let violation = check_row_structure(&operator)
        .expect_err("equal columns collide in every density row");
    L1TraceDemo {
        density,
        operator,
        report,
        violation,
    }
}

/// Twenty fixed majorized pairs supported inside the window {1, 2, 3, 4}:
/// four averaging shapes, scaled by the pair number.
fn sample_pairs_in_window() -> Vec<(SparseVec, SparseVec)> {
    (1..=20i64)
        .map(|i| {
            let n = Scalar::from_int(i);
            let (f, g) = match i % 4 {
                0 => (
                    SparseVec::from_pairs(
                        (1..=4).map(|l| (l, &n * &Scalar::ratio(1, 4))),
                    ),
                    SparseVec::from_pairs([(1, n.clone())]),
                ),
                1 => (
                    SparseVec::from_pairs([
                        (1, &n * &Scalar::ratio(1, 2)),
                        (2, &n * &Scalar::ratio(1, 2)),
                    ]),
                    SparseVec::from_pairs([(2, n.clone())]),
                ),
                2 => (
                    SparseVec::from_pairs(
                        (2..=4).map(|l| (l, &n * &Scalar::ratio(1, 3))),
                    ),
                    SparseVec::from_pairs([(3, n.clone())]),
                ),
                _ => (
                    SparseVec::from_pairs([
                        (1, &n * &Scalar::ratio(1, 2)),
                        (3, &n * &Scalar::ratio(1, 4)),
                        (4, &n * &Scalar::ratio(1, 4)),
                    ]),
                    SparseVec::from_pairs([
                        (1, &n * &Scalar::ratio(1, 2)),
                        (3, &n * &Scalar::ratio(1, 2)),
                    ]),
                ),
            };
            debug_assert!(majorizes(&f, &g).is_majorized());
            (f, g)
        })
        .collect()
}

impl L1TraceDemo {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "trace-times-density operator at exponent 1, density h = {}, window {{1, 2, 3, 4}}\n",
            self.density
        ));
        out.push_str(&format!("{}\n", self.operator));
        out.push_str(&format!(
            "order preservation: {}\n",
            self.report
        ));
        out.push_str("(majorized pairs share a trace, so both images equal trace * h)\n");
        out.push_str(&format!("row-structure check: {}\n", self.violation));
        out.push_str(
            "the operator preserves the order at exponent 1 while escaping the \
             injection-sum form; at exponents above 1 that form is exact\n",
        );
        out
    }

    pub fn to_value(&self) -> Value {
        json!({
            "density": format::vector_value(&self.density),
            "operator": format::columns_value(&self.operator),
            "pairs_checked": self.report.checked,
            "all_preserved": self.report.all_preserved(),
            "row_structure": self.violation.to_string(),
        })
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}
