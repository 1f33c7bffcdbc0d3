//! Jordan-structure invariants computed without finding eigenvalues.
//!
//! Everything is read off the characteristic polynomial and the invariant
//! factors `f₁ | f₂ | ⋯ | f_n` of `xI − M`:
//!
//! * `|Λ(M)|` is the degree of the squarefree part of `f_n`, the minimal
//!   polynomial.
//! * `(x − λ)` divides exactly `m_g(M, λ)` of the invariant factors, so
//!   `Σᵢ deg sqfree(fᵢ) = Σ_λ m_g(M, λ)` and the defectivity is
//!   `d(M) = n − Σᵢ deg sqfree(fᵢ)`.
//! * The derogatory index is `I(M) = n − d(M) − |Λ(M)|`.
//!
//! Per-eigenvalue multiplicities are available at points of ℚ(i).

use num_traits::Zero;

use crate::error::{Error, Result, Violation, ViolationKind};
use crate::exactpoly::{
    gaussian_rational_roots, squarefree_decompose, GaussianRational, Poly, SquarefreeDecomposition,
};
use crate::matrix::ExactMatrix;

/// The invariant factors of `xI − M`, all monic, trivial factors included.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantFactors {
    pub factors: Vec<Poly>,
}

impl InvariantFactors {
    pub fn minimal_polynomial(&self) -> &Poly {
        self.factors.last().expect("at least one invariant factor")
    }

    pub fn product(&self) -> Poly {
        self.factors.iter().fold(Poly::one(), |acc, f| &acc * f)
    }

    /// `fᵢ | fᵢ₊₁` for every consecutive pair.
    pub fn is_divisibility_chain(&self) -> Result<bool> {
        for w in self.factors.windows(2) {
            if !w[0].divides(&w[1])? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The nontrivial factors.
    pub fn nontrivial(&self) -> impl Iterator<Item = &Poly> {
        self.factors.iter().filter(|f| !f.is_one())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenstructureSummary {
    pub n: usize,
    pub char_poly: Poly,
    pub min_poly: Poly,
    pub invariant_factors: InvariantFactors,
    /// `|Λ(M)|`.
    pub num_distinct: usize,
    /// `d(M)`.
    pub defectivity: usize,
    /// `I(M)`.
    pub derogatory_index: usize,
    /// Squarefree decomposition of the characteristic polynomial.
    pub multiplicity_profile: SquarefreeDecomposition,
}

impl EigenstructureSummary {
    pub fn is_diagonalizable(&self) -> bool {
        self.defectivity == 0
    }

    pub fn is_nonderogatory(&self) -> bool {
        self.derogatory_index == 0
    }

    /// Upper bound on Krylov iterations in exact arithmetic.
    pub fn krylov_degree(&self) -> usize {
        self.min_poly.deg()
    }
}

/// Algebraic and geometric multiplicity of one Gaussian-rational eigenvalue.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenvalueData {
    pub value: GaussianRational,
    pub algebraic: usize,
    pub geometric: usize,
}

pub fn rank(m: &ExactMatrix) -> usize {
    m.rank()
}

fn nonempty_square(m: &ExactMatrix) -> Result<usize> {
    let n = m.square_dim()?;
    if n == 0 {
        return Err(Error::InvalidInput("empty matrix".into()));
    }
    Ok(n)
}

/// `det(xI − M)`: similarity reduction to upper Hessenberg form `H`, then
/// the recurrence `p_k = (x − h_kk)·p_{k−1} − Σ_{i<k} h_ik·(Π_{i<j≤k} h_{j,j−1})·p_{i−1}`.
pub fn char_poly(m: &ExactMatrix) -> Result<Poly> {
    let n = nonempty_square(m)?;
    let mut h: Vec<Vec<GaussianRational>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    for j in 0..n.saturating_sub(2) {
        let Some(p) = (j + 1..n).find(|&i| !h[i][j].is_zero()) else {
            continue;
        };
        if p != j + 1 {
            h.swap(p, j + 1);
            for row in h.iter_mut() {
                row.swap(p, j + 1);
            }
        }
        let pivot = h[j + 1][j].clone();
        for r in j + 2..n {
            if h[r][j].is_zero() {
                continue;
            }
            let u = &h[r][j] / &pivot;
            let (upper, lower) = h.split_at_mut(r);
            for (dst, src) in lower[0].iter_mut().zip(&upper[j + 1]).skip(j) {
                *dst = &*dst - &(&u * src);
            }
            for row in h.iter_mut() {
                let add = &u * &row[r];
                row[j + 1] = &row[j + 1] + &add;
            }
        }
    }

    let mut p = vec![Poly::one()];
    for k in 0..n {
        let mut next = &Poly::linear(&h[k][k]) * &p[k];
        let mut t = GaussianRational::from_int(1);
        for i in (0..k).rev() {
            t = &t * &h[i + 1][i];
            if t.is_zero() {
                break;
            }
            let c = &t * &h[i][k];
            if !c.is_zero() {
                next = &next - &p[i].scale(&c);
            }
        }
        p.push(next);
    }
    Ok(p.pop().expect("n >= 1"))
}

/// Invariant factors of `xI − M` via Smith reduction over ℚ(i)[x].
pub fn invariant_factors(m: &ExactMatrix) -> Result<InvariantFactors> {
    let n = nonempty_square(m)?;
    invariant_factors_with(m, n, &char_poly(m)?)
}

/// With `n` distinct eigenvalues the factors are `1, …, 1, χ` and the
/// reduction is skipped.
fn invariant_factors_with(m: &ExactMatrix, n: usize, chi: &Poly) -> Result<InvariantFactors> {
    if chi.is_squarefree()? {
        let mut factors = vec![Poly::one(); n - 1];
        factors.push(chi.clone());
        return Ok(InvariantFactors { factors });
    }
    let x = Poly::x();
    let a: Vec<Vec<Poly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = Poly::constant(-m.get(i, j));
                    if i == j {
                        &x + &c
                    } else {
                        c
                    }
                })
                .collect()
        })
        .collect();
    let factors = smith_diagonal(a)?;
    Ok(InvariantFactors { factors })
}

/// Position of the minimal-degree nonzero entry in the trailing block,
/// ties broken by smallest (row, col).
fn min_degree_entry(a: &[Vec<Poly>], k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(k) {
        for (j, p) in row.iter().enumerate().skip(k) {
            if let Some(d) = p.degree() {
                if best.is_none_or(|(bd, _, _)| d < bd) {
                    best = Some((d, i, j));
                    if d == 0 {
                        return Some((i, j));
                    }
                }
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

/// Diagonal of the Smith normal form of a square polynomial matrix, monic,
/// in divisibility order. Zero diagonal entries trail.
fn smith_diagonal(mut a: Vec<Vec<Poly>>) -> Result<Vec<Poly>> {
    let n = a.len();
    let mut diag = Vec::with_capacity(n);
    for k in 0..n {
        loop {
            let Some((pi, pj)) = min_degree_entry(&a, k) else {
                diag.resize(n, Poly::zero());
                return Ok(diag);
            };
            a.swap(k, pi);
            if pj != k {
                for row in a.iter_mut() {
                    row.swap(k, pj);
                }
            }
            let lc = a[k][k].leading().expect("pivot is nonzero").clone();
            if !num_traits::One::is_one(&lc) {
                let inv = lc.inv().expect("pivot is nonzero");
                for p in a[k].iter_mut().skip(k) {
                    *p = p.scale(&inv);
                }
            }
            let pivot = a[k][k].clone();

            let mut dirty = false;
            for i in k + 1..n {
                if a[i][k].is_zero() {
                    continue;
                }
                let (q, r) = a[i][k].divmod(&pivot)?;
                let (top, rest) = a.split_at_mut(i);
                let pivot_row = &top[k];
                let row = &mut rest[0];
                for j in k + 1..n {
                    if !pivot_row[j].is_zero() {
                        row[j] = &row[j] - &(&q * &pivot_row[j]);
                    }
                }
                dirty |= !r.is_zero();
                row[k] = r;
            }
            if dirty {
                continue;
            }

            // Column k is zero below the pivot, so only row k changes.
            for entry in a[k][k + 1..].iter_mut().filter(|e| !e.is_zero()) {
                let r = entry.rem(&pivot)?;
                dirty |= !r.is_zero();
                *entry = r;
            }
            if dirty {
                continue;
            }

            // Pivot must divide the whole trailing block.
            let offender = (k + 1..n).find(|&i| {
                (k + 1..n).any(|j| {
                    !a[i][j].is_zero() && !matches!(a[i][j].rem(&pivot), Ok(r) if r.is_zero())
                })
            });
            if let Some(i) = offender {
                let (top, rest) = a.split_at_mut(i);
                for (dst, src) in top[k].iter_mut().zip(rest[0].iter()).skip(k + 1) {
                    *dst = &*dst + src;
                }
                continue;
            }
            diag.push(pivot);
            break;
        }
    }
    Ok(diag)
}

pub fn summarize(m: &ExactMatrix) -> Result<EigenstructureSummary> {
    let n = nonempty_square(m)?;
    let char_poly = char_poly(m)?;
    let invariant_factors = invariant_factors_with(m, n, &char_poly)?;
    let min_poly = invariant_factors.minimal_polynomial().clone();
    let multiplicity_profile = squarefree_decompose(&char_poly)?;

    let num_distinct = min_poly.distinct_root_count()?;
    let total_geometric: usize = invariant_factors
        .factors
        .iter()
        .map(Poly::distinct_root_count)
        .sum::<Result<usize>>()?;

    if num_distinct != multiplicity_profile.distinct_roots()
        || total_geometric > n
        || num_distinct > total_geometric
    {
        return Err(Violation::new(
            ViolationKind::Eigenstructure,
            format!(
                "inconsistent counts: |Λ| from minimal polynomial {num_distinct}, from characteristic polynomial {}, Σ m_g {total_geometric}, n {n}",
                multiplicity_profile.distinct_roots()
            ),
        )
        .into());
    }
    if invariant_factors.product() != char_poly {
        return Err(Violation::new(
            ViolationKind::Eigenstructure,
            "product of invariant factors differs from the characteristic polynomial",
        )
        .into());
    }

    let defectivity = n - total_geometric;
    let derogatory_index = total_geometric - num_distinct;
    Ok(EigenstructureSummary {
        n,
        char_poly,
        min_poly,
        invariant_factors,
        num_distinct,
        defectivity,
        derogatory_index,
        multiplicity_profile,
    })
}

/// `|Λ(M)|` from the characteristic polynomial alone.
pub fn distinct_eigenvalue_count(m: &ExactMatrix) -> Result<usize> {
    char_poly(m)?.distinct_root_count()
}

/// `n − rank(λI − M)`; zero when `λ` is not an eigenvalue.
pub fn geometric_multiplicity_at(m: &ExactMatrix, lambda: &GaussianRational) -> Result<usize> {
    let n = m.square_dim()?;
    Ok(n - m.shifted(lambda).rank())
}

/// Multiplicity of `λ` as a root of the characteristic polynomial.
pub fn algebraic_multiplicity_at(m: &ExactMatrix, lambda: &GaussianRational) -> Result<usize> {
    char_poly(m)?.root_multiplicity(lambda)
}

/// `|Λ(A) ∩ Λ(C)|` as the degree of the gcd of the squarefree parts.
pub fn shared_spectrum_count(a: &ExactMatrix, c: &ExactMatrix) -> Result<usize> {
    let na = a.square_dim()?;
    let nc = c.square_dim()?;
    if na != nc {
        return Err(Error::DimensionMismatch(format!("{na}x{na} and {nc}x{nc}")));
    }
    shared_root_count(&char_poly(a)?, &char_poly(c)?)
}

pub(crate) fn shared_root_count(p: &Poly, q: &Poly) -> Result<usize> {
    Ok(Poly::gcd(&p.squarefree_part()?, &q.squarefree_part()?)?.deg())
}

/// Eigenvalues of `M` lying in ℚ(i) with their multiplicities, plus whether
/// the root search was exhaustive.
pub fn rational_eigenvalues(m: &ExactMatrix) -> Result<(Vec<EigenvalueData>, bool)> {
    let chi = char_poly(m)?;
    rational_eigenvalues_of(m, &chi)
}

pub(crate) fn rational_eigenvalues_of(
    m: &ExactMatrix,
    chi: &Poly,
) -> Result<(Vec<EigenvalueData>, bool)> {
    let search = gaussian_rational_roots(chi)?;
    let data = search
        .roots
        .into_iter()
        .map(|value| {
            Ok(EigenvalueData {
                algebraic: chi.root_multiplicity(&value)?,
                geometric: geometric_multiplicity_at(m, &value)?,
                value,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((data, search.complete))
}
