//! Upper bounds on the number of distinct eigenvalues of `C = A + B`.
//!
//! For any square `A`, `B` of the same size:
//!
//! ```text
//! |Λ(C)| ≤ (rank(B)+1)·|Λ(A)| + d(A)            (Farrell)
//! |Λ(C)| ≤ (rank(B)+1)·|Λ(A)| + d(A) − d(C)     (improved)
//! ```
//!
//! Each report is verified on the spot. A failure of a proved inequality is
//! returned as [`Error::Violation`], never as an input error.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::eigenstructure::{
    char_poly, distinct_eigenvalue_count, geometric_multiplicity_at, invariant_factors,
    shared_root_count, summarize, EigenstructureSummary,
};
use crate::error::{Error, Result, Violation, ViolationKind};
use crate::exactpoly::{
    gaussian_rational_roots, squarefree_decompose, GaussianRational, Poly, SquarefreeDecomposition,
};
use crate::matrix::ExactMatrix;

/// `m_g(C,λ) ≥ m_g(A,λ) − rank(B)` at one Gaussian-rational eigenvalue of `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MgDropCheck {
    pub lambda: GaussianRational,
    pub mg_a: usize,
    pub mg_c: usize,
    pub satisfied: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub n: usize,
    pub rank_b: usize,
    pub summary_a: EigenstructureSummary,
    pub summary_c: EigenstructureSummary,
    pub farrell_bound: usize,
    pub improved_bound: i64,
    pub actual_distinct_c: usize,
    /// `improved_bound − actual_distinct_c`.
    pub slack: i64,
    /// Eigenvalues of `C` shared with `A`.
    pub s1_size: usize,
    /// Eigenvalues of `C` not in `Λ(A)`.
    pub s2_size: usize,
    pub mg_drop_checks: Vec<MgDropCheck>,
    /// Whether every Gaussian-rational eigenvalue of `A` was found, so the
    /// drop checks are exhaustive over them.
    pub mg_roots_complete: bool,
}

impl BoundReport {
    pub fn is_tight(&self) -> bool {
        self.slack == 0
    }

    /// Improved bound is strictly below Farrell's exactly when `C` is
    /// defective.
    pub fn remark32_holds(&self) -> bool {
        (self.improved_bound < self.farrell_bound as i64) == (self.summary_c.defectivity >= 1)
    }

    pub fn distinct_plus_defectivity_c(&self) -> usize {
        self.summary_c.num_distinct + self.summary_c.defectivity
    }
}

fn same_dim(a: &ExactMatrix, b: &ExactMatrix) -> Result<usize> {
    let n = a.square_dim()?;
    let nb = b.square_dim()?;
    if n != nb {
        return Err(Error::DimensionMismatch(format!(
            "A is {n}x{n} but B is {nb}x{nb}"
        )));
    }
    Ok(n)
}

fn violation(kind: ViolationKind, detail: String) -> Error {
    Violation::new(kind, detail).into()
}

/// Evaluates both bounds for `C := A + B` and checks every consequence that
/// is testable on the instance.
pub fn bound_report(a: &ExactMatrix, b: &ExactMatrix) -> Result<BoundReport> {
    let n = same_dim(a, b)?;
    let c = a + b;
    let rank_b = b.rank();
    let summary_a = summarize(a)?;
    let summary_c = summarize(&c)?;

    let farrell_bound = (rank_b + 1) * summary_a.num_distinct + summary_a.defectivity;
    let improved_bound = farrell_bound as i64 - summary_c.defectivity as i64;
    let actual_distinct_c = summary_c.num_distinct;
    let slack = improved_bound - actual_distinct_c as i64;
    let s1_size = shared_root_count(&summary_a.char_poly, &summary_c.char_poly)?;
    let s2_size = actual_distinct_c - s1_size;

    let roots = gaussian_rational_roots(&summary_a.char_poly)?;
    let mg_drop_checks = roots
        .roots
        .into_iter()
        .map(|lambda| {
            let mg_a = geometric_multiplicity_at(a, &lambda)?;
            let mg_c = geometric_multiplicity_at(&c, &lambda)?;
            Ok(MgDropCheck {
                satisfied: mg_c + rank_b >= mg_a,
                lambda,
                mg_a,
                mg_c,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let report = BoundReport {
        n,
        rank_b,
        summary_a,
        summary_c,
        farrell_bound,
        improved_bound,
        actual_distinct_c,
        slack,
        s1_size,
        s2_size,
        mg_drop_checks,
        mg_roots_complete: roots.complete,
    };
    verify_report(&report)?;
    Ok(report)
}

fn verify_report(r: &BoundReport) -> Result<()> {
    if r.slack < 0 {
        return Err(violation(
            ViolationKind::ImprovedBound,
            format!(
                "|Λ(C)| = {} exceeds the improved bound {}",
                r.actual_distinct_c, r.improved_bound
            ),
        ));
    }
    if r.distinct_plus_defectivity_c() > r.n {
        return Err(violation(
            ViolationKind::DistinctPlusDefectivity,
            format!(
                "|Λ(C)| + d(C) = {} > n = {}",
                r.distinct_plus_defectivity_c(),
                r.n
            ),
        ));
    }
    if r.s1_size == 0 && r.farrell_bound <= r.n {
        return Err(violation(
            ViolationKind::DisjointSpectra,
            format!(
                "spectra are disjoint but (rank(B)+1)|Λ(A)| + d(A) = {} ≤ n = {}",
                r.farrell_bound, r.n
            ),
        ));
    }
    if let Some(bad) = r.mg_drop_checks.iter().find(|c| !c.satisfied) {
        return Err(violation(
            ViolationKind::GeometricMultiplicityDrop,
            format!(
                "at λ = {}: m_g(C) = {} < m_g(A) − rank(B) = {} − {}",
                bad.lambda, bad.mg_c, bad.mg_a, r.rank_b
            ),
        ));
    }
    Ok(())
}

/// `I(C) ≥ I(A) − rank(B)·|Λ(A)|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Corollary41 {
    pub lhs: usize,
    pub rhs: i64,
    pub holds: bool,
}

pub fn corollary41_check(report: &BoundReport) -> Corollary41 {
    let lhs = report.summary_c.derogatory_index;
    let rhs = report.summary_a.derogatory_index as i64
        - (report.rank_b * report.summary_a.num_distinct) as i64;
    Corollary41 {
        lhs,
        rhs,
        holds: lhs as i64 >= rhs,
    }
}

/// Rank-one update of a diagonalizable matrix: `|Λ(C)| ≤ 2|Λ(A)|`, or
/// `2|Λ(A)| − 1` when `C` is defective.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Corollary42 {
    pub bound: usize,
    pub actual: usize,
    pub c_diagonalizable: bool,
}

pub fn corollary42_check(a: &ExactMatrix, b: &ExactMatrix) -> Result<Corollary42> {
    same_dim(a, b)?;
    let rank_b = b.rank();
    if rank_b != 1 {
        return Err(Error::InvalidInput(format!(
            "the rank-one corollary needs rank(B) = 1, got {rank_b}"
        )));
    }
    let sa = summarize(a)?;
    if sa.defectivity != 0 {
        return Err(Error::InvalidInput(format!(
            "the rank-one corollary needs a diagonalizable A, got d(A) = {}",
            sa.defectivity
        )));
    }
    let sc = summarize(&(a + b))?;
    let c_diagonalizable = sc.is_diagonalizable();
    let bound = if c_diagonalizable {
        2 * sa.num_distinct
    } else {
        2 * sa.num_distinct - 1
    };
    if sc.num_distinct > bound {
        return Err(violation(
            ViolationKind::RankOneDiagonalizable,
            format!("|Λ(C)| = {} exceeds {bound}", sc.num_distinct),
        ));
    }
    Ok(Corollary42 {
        bound,
        actual: sc.num_distinct,
        c_diagonalizable,
    })
}

/// For nonderogatory `C`: `(n − d(A))/(rank(B)+1) ≤ |Λ(A)| ≤ n − d(A)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Corollary43 {
    pub lower: BigRational,
    pub upper: usize,
    pub value: usize,
    pub holds: bool,
}

pub fn corollary43_check(a: &ExactMatrix, b: &ExactMatrix) -> Result<Corollary43> {
    same_dim(a, b)?;
    corollary43_from_report(&bound_report(a, b)?)
}

/// Same as [`corollary43_check`], reusing a computed report.
pub fn corollary43_from_report(r: &BoundReport) -> Result<Corollary43> {
    if r.summary_c.derogatory_index != 0 {
        return Err(Error::InvalidInput(format!(
            "C must be nonderogatory, got I(C) = {}",
            r.summary_c.derogatory_index
        )));
    }
    let upper = r.n - r.summary_a.defectivity;
    let lower = BigRational::new(BigInt::from(upper), BigInt::from(r.rank_b + 1));
    let value = r.summary_a.num_distinct;
    let holds = lower <= BigRational::from_integer(value.into()) && value <= upper;
    if !holds {
        return Err(violation(
            ViolationKind::NonderogatorySandwich,
            format!("{lower} ≤ |Λ(A)| = {value} ≤ {upper} fails"),
        ));
    }
    Ok(Corollary43 {
        lower,
        upper,
        value,
        holds,
    })
}

/// `(H, S)` with `H = ½(A + A*)` Hermitian and `S = ½(A − A*)`
/// skew-Hermitian.
pub fn hermitian_split(a: &ExactMatrix) -> Result<(ExactMatrix, ExactMatrix)> {
    a.square_dim()?;
    let half = GaussianRational::from_ratio(1, 2);
    let adj = a.conj_transpose();
    let h = (a + &adj).scale(&half);
    let s = (a - &adj).scale(&half);
    if &h + &s != *a || !h.is_hermitian() || !s.is_skew_hermitian() {
        return Err(Error::Internal(
            "Hermitian splitting is inconsistent".into(),
        ));
    }
    Ok((h, s))
}

/// Which part of the splitting a shift candidate comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitPart {
    Hermitian,
    SkewHermitian,
}

/// A value of the shift `α` in `A = (H + αI) + (S − αI)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShiftParameter {
    Exact(GaussianRational),
    /// Every `α = −λ` with `λ` a root of `factor`, none of them in ℚ(i).
    /// All such roots have multiplicity `multiplicity` in `char(H)`.
    NegatedRootsOf {
        factor: Poly,
        multiplicity: usize,
    },
    /// Every `α = μ` with `μ` a root of `factor`, none of them in ℚ(i);
    /// each is an eigenvalue of `S` of the given multiplicity.
    RootsOf {
        factor: Poly,
        multiplicity: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaCandidate {
    pub alpha: ShiftParameter,
    pub rank_h: usize,
    pub rank_s: usize,
    /// `min{(rank(H_α)+1)|Λ(S)|, (rank(S_α)+1)|Λ(H)|} − d(A)`.
    pub min_value: i64,
    /// `(rank(H_α)+1)(rank(S_α)+1) − d(A)`.
    pub product_value: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitReport {
    pub n: usize,
    pub h_part: ExactMatrix,
    pub s_part: ExactMatrix,
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
    pub alpha_candidates: Vec<AlphaCandidate>,
}

/// Direct evaluation of the shifted-splitting bounds at one `α`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftEvaluation {
    pub rank_h: usize,
    pub rank_s: usize,
    pub distinct_h: usize,
    pub distinct_s: usize,
    pub min_value: i64,
    pub product_value: i64,
}

fn split_values(
    rank_h: usize,
    rank_s: usize,
    distinct_h: usize,
    distinct_s: usize,
    d: usize,
) -> (i64, i64) {
    let d = d as i64;
    let (rh, rs) = (rank_h as i64 + 1, rank_s as i64 + 1);
    let min = (rh * distinct_s as i64).min(rs * distinct_h as i64) - d;
    (min, rh * rs - d)
}

impl SplitReport {
    /// Recomputes ranks and spectra of `H + αI` and `S − αI` from scratch.
    /// Independent of the candidate-set reasoning in [`split_bounds`].
    pub fn evaluate_shift(&self, alpha: &GaussianRational) -> Result<ShiftEvaluation> {
        let h = self.h_part.add_scalar(alpha);
        let s = self.s_part.add_scalar(&-alpha);
        let (rank_h, rank_s) = (h.rank(), s.rank());
        let distinct_h = distinct_eigenvalue_count(&h)?;
        let distinct_s = distinct_eigenvalue_count(&s)?;
        let (min_value, product_value) =
            split_values(rank_h, rank_s, distinct_h, distinct_s, self.defectivity_a);
        Ok(ShiftEvaluation {
            rank_h,
            rank_s,
            distinct_h,
            distinct_s,
            min_value,
            product_value,
        })
    }
}

/// Splits a squarefree class factor into its ℚ(i) roots (zero excluded) and
/// the remaining factor carrying the other roots.
fn class_roots(factor: &Poly) -> Result<(Vec<GaussianRational>, Poly)> {
    let mut g = factor.clone();
    if g.coeff(0).is_zero() {
        g = g.div_exact(&Poly::x())?;
    }
    if g.is_constant() {
        return Ok((Vec::new(), Poly::one()));
    }
    let roots = gaussian_rational_roots(&g)?.roots;
    let rest = g.div_exact(&Poly::from_roots(&roots))?;
    Ok((roots, rest))
}

fn shift_candidates(
    profile: &SquarefreeDecomposition,
    part: SplitPart,
    n: usize,
    distinct: (usize, usize),
    d: usize,
) -> Result<Vec<AlphaCandidate>> {
    let mut out = Vec::new();
    for class in &profile.parts {
        let k = class.multiplicity;
        // A nonzero shift that hits this class leaves the other part at full
        // rank: Λ(H) ⊂ ℝ and Λ(S) ⊂ iℝ meet only at 0.
        let (rank_h, rank_s) = match part {
            SplitPart::Hermitian => (n - k, n),
            SplitPart::SkewHermitian => (n, n - k),
        };
        let (min_value, product_value) = split_values(rank_h, rank_s, distinct.0, distinct.1, d);
        let (roots, rest) = class_roots(&class.factor)?;
        for root in roots {
            let alpha = match part {
                SplitPart::Hermitian => -root,
                SplitPart::SkewHermitian => root,
            };
            out.push(AlphaCandidate {
                alpha: ShiftParameter::Exact(alpha),
                rank_h,
                rank_s,
                min_value,
                product_value,
            });
        }
        if !rest.is_constant() {
            let alpha = match part {
                SplitPart::Hermitian => ShiftParameter::NegatedRootsOf {
                    factor: rest,
                    multiplicity: k,
                },
                SplitPart::SkewHermitian => ShiftParameter::RootsOf {
                    factor: rest,
                    multiplicity: k,
                },
            };
            out.push(AlphaCandidate {
                alpha,
                rank_h,
                rank_s,
                min_value,
                product_value,
            });
        }
    }
    Ok(out)
}

/// Bounds on `|Λ(A)|` from the Hermitian/skew-Hermitian splitting, with
/// the infimum over shifts `α ∈ ℂ` taken over a finite candidate set.
///
/// `rank(H + αI) < n` only when `−α ∈ Λ(H)`, `rank(S − αI) < n` only when
/// `α ∈ Λ(S)`, and shifting leaves `|Λ(H)|`, `|Λ(S)|` unchanged. So only
/// `α = 0`, `α ∈ −Λ(H)` and `α ∈ Λ(S)` can lower the bound, and because `H`
/// and `S` are normal the rank at such a shift is `n` minus the root's
/// multiplicity in the characteristic polynomial.
pub fn split_bounds(a: &ExactMatrix) -> Result<SplitReport> {
    let n = a.square_dim()?;
    let (h, s) = hermitian_split(a)?;
    let summary_a = summarize(a)?;
    let d = summary_a.defectivity;
    let profile_h = squarefree_decompose(&char_poly(&h)?)?;
    let profile_s = squarefree_decompose(&char_poly(&s)?)?;
    let distinct = (profile_h.distinct_roots(), profile_s.distinct_roots());
    let (rank_h, rank_s) = (h.rank(), s.rank());

    let (cor44_bound, rem45_bound) = split_values(rank_h, rank_s, distinct.0, distinct.1, d);
    let mut alpha_candidates = vec![AlphaCandidate {
        alpha: ShiftParameter::Exact(GaussianRational::zero()),
        rank_h,
        rank_s,
        min_value: cor44_bound,
        product_value: rem45_bound,
    }];
    alpha_candidates.extend(shift_candidates(
        &profile_h,
        SplitPart::Hermitian,
        n,
        distinct,
        d,
    )?);
    alpha_candidates.extend(shift_candidates(
        &profile_s,
        SplitPart::SkewHermitian,
        n,
        distinct,
        d,
    )?);

    let rem46_min_bound = alpha_candidates
        .iter()
        .map(|c| c.min_value)
        .min()
        .expect("α = 0 is a candidate");
    let rem46_product_bound = alpha_candidates
        .iter()
        .map(|c| c.product_value)
        .min()
        .expect("α = 0 is a candidate");

    let report = SplitReport {
        n,
        h_part: h,
        s_part: s,
        rank_h,
        rank_s,
        distinct_h: distinct.0,
        distinct_s: distinct.1,
        distinct_a: summary_a.num_distinct,
        defectivity_a: d,
        cor44_bound,
        rem45_bound,
        rem46_min_bound,
        rem46_product_bound,
        alpha_candidates,
    };
    verify_split(&report)?;
    Ok(report)
}

fn verify_split(r: &SplitReport) -> Result<()> {
    let la = r.distinct_a as i64;
    let ordered = la <= r.rem46_min_bound
        && r.rem46_min_bound <= r.cor44_bound
        && r.cor44_bound <= r.rem45_bound
        && la <= r.rem46_product_bound
        && r.rem46_product_bound <= r.rem45_bound;
    if !ordered {
        return Err(violation(
            ViolationKind::SplitBound,
            format!(
                "|Λ(A)| = {la}, shifted min {}, shifted product {}, unshifted min {}, unshifted product {}",
                r.rem46_min_bound, r.rem46_product_bound, r.cor44_bound, r.rem45_bound
            ),
        ));
    }
    Ok(())
}

/// Degree of the minimal polynomial: the most Krylov iterations an exact
/// Krylov solver can need for a system with this matrix.
pub fn krylov_degree_bound(m: &ExactMatrix) -> Result<usize> {
    Ok(invariant_factors(m)?.minimal_polynomial().deg())
}
