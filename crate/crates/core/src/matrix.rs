//! Dense matrices over ℚ(i).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactpoly::{GaussianRational, Poly};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<GaussianRational>,
}

impl ExactMatrix {
    /// Row-major constructor; fails unless `entries.len() == rows * cols`.
    pub fn new(rows: usize, cols: usize, entries: Vec<GaussianRational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> GaussianRational,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self {
            rows,
            cols,
            entries,
        }
    }

    /// Integer matrix from row slices. Panics on ragged input.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::from_fn(rows.len(), cols, |i, j| {
            GaussianRational::from_int(rows[i][j])
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| GaussianRational::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, &GaussianRational::one())
    }

    /// `c·I`.
    pub fn scalar(n: usize, c: &GaussianRational) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                c.clone()
            } else {
                GaussianRational::zero()
            }
        })
    }

    pub fn diag(values: &[GaussianRational]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| {
            if i == j {
                values[i].clone()
            } else {
                GaussianRational::zero()
            }
        })
    }

    /// Companion matrix of a monic polynomial of degree ≥ 1: ones on the
    /// subdiagonal and `−c₀, …, −c_{n−1}` down the last column.
    pub fn companion(p: &Poly) -> Result<Self> {
        let n = match p.degree() {
            Some(d) if d >= 1 => d,
            _ => {
                return Err(Error::InvalidInput(format!(
                    "companion matrix needs degree >= 1, got {p}"
                )))
            }
        };
        let p = p.monic();
        Ok(Self::from_fn(n, n, |i, j| {
            if j == n - 1 {
                -p.coeff(i)
            } else if i == j + 1 {
                GaussianRational::one()
            } else {
                GaussianRational::zero()
            }
        }))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[GaussianRational] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &GaussianRational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: GaussianRational) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[GaussianRational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// The dimension, or [`Error::NotSquare`].
    pub fn square_dim(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.entries
            .iter()
            .all(GaussianRational::is_gaussian_integer)
    }

    pub fn map(&self, f: impl Fn(&GaussianRational) -> GaussianRational) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        self.map(|x| x * c)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// `M*`, the conjugate transpose.
    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn is_hermitian(&self) -> bool {
        self.is_square() && *self == self.conj_transpose()
    }

    pub fn is_skew_hermitian(&self) -> bool {
        self.is_square() && *self == -&self.conj_transpose()
    }

    pub fn trace(&self) -> GaussianRational {
        (0..self.rows.min(self.cols)).fold(GaussianRational::zero(), |acc, i| &acc + self.get(i, i))
    }

    /// `M + c·I`.
    pub fn add_scalar(&self, c: &GaussianRational) -> Self {
        let mut out = self.clone();
        for i in 0..self.rows.min(self.cols) {
            let v = self.get(i, i) + c;
            out.set(i, i, v);
        }
        out
    }

    /// `λ·I − M`.
    pub fn shifted(&self, lambda: &GaussianRational) -> Self {
        (-self).add_scalar(lambda)
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.same_shape(rhs, "addition")?;
        Ok(self + rhs)
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(self * rhs)
    }

    fn same_shape(&self, rhs: &Self, what: &str) -> Result<()> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch(format!(
                "{what} of {}x{} and {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(())
    }

    /// `p(M)` by Horner's rule.
    pub fn eval_poly(&self, p: &Poly) -> Result<Self> {
        let n = self.square_dim()?;
        let mut acc = Self::zeros(n, n);
        for c in p.coeffs().iter().rev() {
            acc = (&acc * self).add_scalar(c);
        }
        Ok(acc)
    }

    /// Exact rank.
    ///
    /// Fraction-free (Bareiss) elimination with full pivoting: the pivot is
    /// the first nonzero entry of the trailing submatrix in row-major order.
    pub fn rank(&self) -> usize {
        self.bareiss().0
    }

    pub fn determinant(&self) -> Result<GaussianRational> {
        let n = self.square_dim()?;
        if n == 0 {
            return Ok(GaussianRational::one());
        }
        let (rank, last_pivot, swaps) = self.bareiss();
        if rank < n {
            return Ok(GaussianRational::zero());
        }
        Ok(if swaps % 2 == 0 {
            last_pivot
        } else {
            -last_pivot
        })
    }

    /// Returns (rank, last pivot, number of row and column transpositions).
    fn bareiss(&self) -> (usize, GaussianRational, usize) {
        let (r, c) = (self.rows, self.cols);
        let mut a: Vec<Vec<GaussianRational>> = (0..r).map(|i| self.row(i).to_vec()).collect();
        let mut prev = GaussianRational::one();
        let mut swaps = 0;
        let mut rank = 0;
        for k in 0..r.min(c) {
            let pivot = (k..r)
                .flat_map(|i| (k..c).map(move |j| (i, j)))
                .find(|&(i, j)| !a[i][j].is_zero());
            let Some((pi, pj)) = pivot else { break };
            if pi != k {
                a.swap(pi, k);
                swaps += 1;
            }
            if pj != k {
                for row in a.iter_mut() {
                    row.swap(pj, k);
                }
                swaps += 1;
            }
            let (top, rest) = a.split_at_mut(k + 1);
            let pivot_row = &top[k];
            for row in rest.iter_mut() {
                let lead = std::mem::take(&mut row[k]);
                for j in k + 1..c {
                    let v = &(&pivot_row[k] * &row[j]) - &(&lead * &pivot_row[j]);
                    row[j] = &v / &prev;
                }
            }
            prev = a[k][k].clone();
            rank += 1;
        }
        (rank, prev, swaps)
    }

    /// Gauss–Jordan inverse; `InvalidInput` when singular.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.square_dim()?;
        let mut a: Vec<Vec<GaussianRational>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut inv: Vec<Vec<GaussianRational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            GaussianRational::one()
                        } else {
                            GaussianRational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        for k in 0..n {
            let p = (k..n)
                .find(|&i| !a[i][k].is_zero())
                .ok_or_else(|| Error::InvalidInput("matrix is singular".into()))?;
            a.swap(p, k);
            inv.swap(p, k);
            let piv_inv = a[k][k].inv().expect("pivot is nonzero");
            for j in 0..n {
                a[k][j] = &a[k][j] * &piv_inv;
                inv[k][j] = &inv[k][j] * &piv_inv;
            }
            for i in 0..n {
                if i == k || a[i][k].is_zero() {
                    continue;
                }
                let f = a[i][k].clone();
                for j in 0..n {
                    let da = &f * &a[k][j];
                    let di = &f * &inv[k][j];
                    a[i][j] -= &da;
                    inv[i][j] -= &di;
                }
            }
        }
        Ok(Self::from_fn(n, n, |i, j| inv[i][j].clone()))
    }
}

impl Add<&ExactMatrix> for &ExactMatrix {
    type Output = ExactMatrix;
    fn add(self, rhs: &ExactMatrix) -> ExactMatrix {
        assert!(
            self.rows == rhs.rows && self.cols == rhs.cols,
            "shape mismatch in addition"
        );
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub<&ExactMatrix> for &ExactMatrix {
    type Output = ExactMatrix;
    fn sub(self, rhs: &ExactMatrix) -> ExactMatrix {
        assert!(
            self.rows == rhs.rows && self.cols == rhs.cols,
            "shape mismatch in subtraction"
        );
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul<&ExactMatrix> for &ExactMatrix {
    type Output = ExactMatrix;
    fn mul(self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in multiplication");
        let mut out = ExactMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * rhs.cols + j] += &(a * b);
                    }
                }
            }
        }
        out
    }
}

impl Neg for &ExactMatrix {
    type Output = ExactMatrix;
    fn neg(self) -> ExactMatrix {
        self.map(|x| -x)
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactMatrix {}x{}\n{}", self.rows, self.cols, self)
    }
}
