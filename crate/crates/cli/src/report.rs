//! Report documents. Each command builds one document; `--format json`
//! prints it as a single JSON value and `--format text` renders the same
//! value as indented `key: value` lines.

use eigperturb::bounds::{
    corollary41_check, corollary42_check, corollary43_from_report, AlphaCandidate, BoundReport,
    ShiftParameter, SplitReport,
};
use eigperturb::eigenstructure::{rational_eigenvalues, EigenstructureSummary};
use eigperturb::fuzz::{ExampleSuite, FamilyRow, FuzzConfig, FuzzReport};
use eigperturb::matrix::ExactMatrix;
use eigperturb::{Error, Result, Violation, ViolationKind};
use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    /// `pass` or `not_applicable`.
    pub status: &'static str,
    pub detail: String,
}

impl Check {
    fn pass(name: &'static str, detail: String) -> Self {
        Self {
            name,
            status: "pass",
            detail,
        }
    }

    fn skipped(name: &'static str, detail: String) -> Self {
        Self {
            name,
            status: "not_applicable",
            detail,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundDocument {
    pub n: usize,
    pub rank_b: usize,
    pub distinct_a: usize,
    pub defectivity_a: usize,
    pub derogatory_a: usize,
    pub distinct_c: usize,
    pub defectivity_c: usize,
    pub derogatory_c: usize,
    pub farrell_bound: usize,
    pub improved_bound: i64,
    pub actual_distinct: usize,
    pub slack: i64,
    pub s1_size: usize,
    pub s2_size: usize,
    pub checks: Vec<Check>,
}

fn fail(kind: ViolationKind, detail: String) -> Error {
    Violation::new(kind, detail).into()
}

impl BoundDocument {
    /// Runs every applicable check on top of the report. `a`, `b` are needed
    /// for the rank-one corollary, which has its own preconditions.
    pub fn build(a: &ExactMatrix, b: &ExactMatrix, r: &BoundReport) -> Result<Self> {
        let (sa, sc) = (&r.summary_a, &r.summary_c);
        let mut checks = vec![
            Check::pass(
                "improved_bound",
                format!(
                    "|Λ(C)| = {} ≤ {} = (rank(B)+1)|Λ(A)| + d(A) − d(C)",
                    r.actual_distinct_c, r.improved_bound
                ),
            ),
            Check::pass(
                "distinct_plus_defectivity",
                format!(
                    "|Λ(C)| + d(C) = {} ≤ n = {}",
                    r.distinct_plus_defectivity_c(),
                    r.n
                ),
            ),
        ];
        checks.push(if r.s1_size == 0 {
            Check::pass(
                "disjoint_spectra",
                format!(
                    "no shared eigenvalue and (rank(B)+1)|Λ(A)| + d(A) = {} > n",
                    r.farrell_bound
                ),
            )
        } else {
            Check::skipped("disjoint_spectra", format!("|Λ(A) ∩ Λ(C)| = {}", r.s1_size))
        });
        for m in &r.mg_drop_checks {
            checks.push(Check::pass(
                "geometric_multiplicity_drop",
                format!(
                    "λ = {}: m_g(C) = {} ≥ m_g(A) − rank(B) = {} − {}",
                    m.lambda, m.mg_c, m.mg_a, r.rank_b
                ),
            ));
        }
        if !r.mg_roots_complete {
            checks.push(Check::skipped(
                "geometric_multiplicity_drop",
                "some Gaussian-rational eigenvalues of A may be missing: root search incomplete"
                    .into(),
            ));
        }

        let cor41 = corollary41_check(r);
        if !cor41.holds {
            return Err(fail(
                ViolationKind::DerogatoryIndexLowerBound,
                format!("I(C) = {} < {}", cor41.lhs, cor41.rhs),
            ));
        }
        checks.push(Check::pass(
            "derogatory_index_lower_bound",
            format!(
                "I(C) = {} ≥ I(A) − rank(B)|Λ(A)| = {}",
                cor41.lhs, cor41.rhs
            ),
        ));

        checks.push(if r.rank_b == 1 && sa.defectivity == 0 {
            let c = corollary42_check(a, b)?;
            Check::pass(
                "rank_one_diagonalizable",
                format!(
                    "|Λ(C)| = {} ≤ {} (C {}diagonalizable)",
                    c.actual,
                    c.bound,
                    if c.c_diagonalizable { "" } else { "not " }
                ),
            )
        } else {
            Check::skipped(
                "rank_one_diagonalizable",
                format!(
                    "needs rank(B) = 1 and d(A) = 0, got {} and {}",
                    r.rank_b, sa.defectivity
                ),
            )
        });

        checks.push(if sc.is_nonderogatory() {
            let c = corollary43_from_report(r)?;
            Check::pass(
                "nonderogatory_sandwich",
                format!("{} ≤ |Λ(A)| = {} ≤ {}", c.lower, c.value, c.upper),
            )
        } else {
            Check::skipped(
                "nonderogatory_sandwich",
                format!("C is derogatory, I(C) = {}", sc.derogatory_index),
            )
        });

        if !r.remark32_holds() {
            return Err(fail(
                ViolationKind::FarrellComparison,
                format!(
                    "d(C) = {}, improved {} vs Farrell {}",
                    sc.defectivity, r.improved_bound, r.farrell_bound
                ),
            ));
        }
        checks.push(Check::pass(
            "farrell_comparison",
            if sc.defectivity >= 1 {
                format!(
                    "d(C) = {} ≥ 1 and improved {} < Farrell {}",
                    sc.defectivity, r.improved_bound, r.farrell_bound
                )
            } else {
                format!("d(C) = 0 and improved = Farrell = {}", r.farrell_bound)
            },
        ));

        Ok(Self {
            n: r.n,
            rank_b: r.rank_b,
            distinct_a: sa.num_distinct,
            defectivity_a: sa.defectivity,
            derogatory_a: sa.derogatory_index,
            distinct_c: sc.num_distinct,
            defectivity_c: sc.defectivity,
            derogatory_c: sc.derogatory_index,
            farrell_bound: r.farrell_bound,
            improved_bound: r.improved_bound,
            actual_distinct: r.actual_distinct_c,
            slack: r.slack,
            s1_size: r.s1_size,
            s2_size: r.s2_size,
            checks,
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ProfileEntry {
    pub multiplicity: usize,
    pub factor: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenvalueEntry {
    pub value: String,
    pub algebraic: usize,
    pub geometric: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalyzeDocument {
    pub n: usize,
    pub distinct: usize,
    pub defectivity: usize,
    pub derogatory_index: usize,
    pub diagonalizable: bool,
    pub nonderogatory: bool,
    pub krylov_degree: usize,
    pub char_poly: String,
    pub min_poly: String,
    pub invariant_factors: Vec<String>,
    pub multiplicity_profile: Vec<ProfileEntry>,
    /// Eigenvalues in ℚ(i); the rest are only counted.
    pub eigenvalues: Vec<EigenvalueEntry>,
    pub other_eigenvalues: usize,
    pub eigenvalue_search_complete: bool,
}

impl AnalyzeDocument {
    pub fn build(m: &ExactMatrix, s: &EigenstructureSummary) -> Result<Self> {
        let (data, complete) = rational_eigenvalues(m)?;
        Ok(Self {
            n: s.n,
            distinct: s.num_distinct,
            defectivity: s.defectivity,
            derogatory_index: s.derogatory_index,
            diagonalizable: s.is_diagonalizable(),
            nonderogatory: s.is_nonderogatory(),
            krylov_degree: s.krylov_degree(),
            char_poly: s.char_poly.to_string(),
            min_poly: s.min_poly.to_string(),
            invariant_factors: s
                .invariant_factors
                .factors
                .iter()
                .map(ToString::to_string)
                .collect(),
            multiplicity_profile: s
                .multiplicity_profile
                .parts
                .iter()
                .map(|p| ProfileEntry {
                    multiplicity: p.multiplicity,
                    factor: p.factor.to_string(),
                })
                .collect(),
            other_eigenvalues: s.num_distinct - data.len(),
            eigenvalues: data
                .into_iter()
                .map(|e| EigenvalueEntry {
                    value: e.value.to_string(),
                    algebraic: e.algebraic,
                    geometric: e.geometric,
                })
                .collect(),
            eigenvalue_search_complete: complete,
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CandidateEntry {
    pub alpha: String,
    pub rank_h: usize,
    pub rank_s: usize,
    pub min_value: i64,
    pub product_value: i64,
}

fn describe_alpha(alpha: &ShiftParameter) -> String {
    match alpha {
        ShiftParameter::Exact(v) => v.to_string(),
        ShiftParameter::NegatedRootsOf { factor, .. } => format!("-λ for each root λ of {factor}"),
        ShiftParameter::RootsOf { factor, .. } => format!("μ for each root μ of {factor}"),
    }
}

impl From<&AlphaCandidate> for CandidateEntry {
    fn from(c: &AlphaCandidate) -> Self {
        Self {
            alpha: describe_alpha(&c.alpha),
            rank_h: c.rank_h,
            rank_s: c.rank_s,
            min_value: c.min_value,
            product_value: c.product_value,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SplitDocument {
    pub n: usize,
    pub rank_h: usize,
    pub rank_s: usize,
    pub distinct_h: usize,
    pub distinct_s: usize,
    pub distinct_a: usize,
    pub defectivity_a: usize,
    pub cor44_bound: i64,
    pub rem45_bound: i64,
    pub rem46_min_bound: i64,
    pub rem46_product_bound: i64,
    pub best_min_alpha: String,
    pub best_product_alpha: String,
    pub candidates: Vec<CandidateEntry>,
}

impl SplitDocument {
    pub fn build(r: &SplitReport) -> Self {
        let best = |f: fn(&AlphaCandidate) -> i64| {
            r.alpha_candidates
                .iter()
                .min_by_key(|c| f(c))
                .map(|c| describe_alpha(&c.alpha))
                .unwrap_or_default()
        };
        Self {
            n: r.n,
            rank_h: r.rank_h,
            rank_s: r.rank_s,
            distinct_h: r.distinct_h,
            distinct_s: r.distinct_s,
            distinct_a: r.distinct_a,
            defectivity_a: r.defectivity_a,
            cor44_bound: r.cor44_bound,
            rem45_bound: r.rem45_bound,
            rem46_min_bound: r.rem46_min_bound,
            rem46_product_bound: r.rem46_product_bound,
            best_min_alpha: best(|c| c.min_value),
            best_product_alpha: best(|c| c.product_value),
            candidates: r
                .alpha_candidates
                .iter()
                .map(CandidateEntry::from)
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FuzzDocument<'a> {
    pub config: &'a FuzzConfig,
    pub report: &'a FuzzReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExamplesDocument {
    pub n: usize,
    pub family: Vec<FamilyRow>,
    pub example_two: BoundDocument,
}

impl ExamplesDocument {
    pub fn build(suite: &ExampleSuite) -> Result<Self> {
        let (a, b) = eigperturb::fuzz::example_two_matrices();
        Ok(Self {
            n: suite.n,
            family: suite.family.clone(),
            example_two: BoundDocument::build(&a, &b, &suite.example_two)?,
        })
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "none".into(),
        other => other.to_string(),
    }
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn render(v: &Value, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    let Value::Object(map) = v else {
        out.push_str(&format!("{pad}{}\n", scalar_text(v)));
        return;
    };
    for (key, val) in map {
        match val {
            Value::Array(items) if items.iter().all(is_scalar) => {
                let joined: Vec<String> = items.iter().map(scalar_text).collect();
                out.push_str(&format!("{pad}{key}: [{}]\n", joined.join(", ")));
            }
            Value::Array(items) => {
                out.push_str(&format!("{pad}{key}:\n"));
                for item in items {
                    match item {
                        Value::Object(fields) if fields.values().all(is_scalar) => {
                            let parts: Vec<String> = fields
                                .iter()
                                .map(|(k, v)| format!("{k}={}", scalar_text(v)))
                                .collect();
                            out.push_str(&format!("{pad}  - {}\n", parts.join(", ")));
                        }
                        other => {
                            out.push_str(&format!("{pad}  -\n"));
                            render(other, indent + 4, out);
                        }
                    }
                }
            }
            Value::Object(_) => {
                out.push_str(&format!("{pad}{key}:\n"));
                render(val, indent + 2, out);
            }
            scalar => out.push_str(&format!("{pad}{key}: {}\n", scalar_text(scalar))),
        }
    }
}

/// Plain-text rendering of any document.
pub fn to_text<T: Serialize>(doc: &T) -> String {
    let value = serde_json::to_value(doc).expect("documents serialize");
    let mut out = String::new();
    render(&value, 0, &mut out);
    out
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_rendering_shapes() {
        let v = serde_json::json!({
            "n": 3,
            "name": "x^2 + 1",
            "list": [1, 2],
            "rows": [{"a": 1, "b": "q"}],
            "nested": {"k": null}
        });
        let mut out = String::new();
        render(&v, 0, &mut out);
        assert_eq!(
            out,
            "n: 3\nname: x^2 + 1\nlist: [1, 2]\nrows:\n  - a=1, b=q\nnested:\n  k: none\n"
        );
    }
}
