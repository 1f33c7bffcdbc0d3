use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::GaussianRational;
use crate::error::{Error, Result};

/// Univariate polynomial over ℚ(i), coefficients lowest degree first.
///
/// The zero polynomial is the empty coefficient vector; every other value has
/// a nonzero last coefficient.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<GaussianRational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<GaussianRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| GaussianRational::from_int(c))
                .collect(),
        )
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::new(vec![c])
    }

    pub fn x() -> Self {
        Self::from_ints(&[0, 1])
    }

    /// `x − root`.
    pub fn linear(root: &GaussianRational) -> Self {
        Self::new(vec![-root, GaussianRational::one()])
    }

    /// `(x − root)^k`.
    pub fn linear_power(root: &GaussianRational, k: usize) -> Self {
        Self::linear(root).pow(k)
    }

    /// Product of `(x − r)` over the given roots.
    pub fn from_roots<'a>(roots: impl IntoIterator<Item = &'a GaussianRational>) -> Self {
        roots
            .into_iter()
            .fold(Self::one(), |acc, r| &acc * &Self::linear(r))
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    /// Coefficient of `x^k`, zero past the degree.
    pub fn coeff(&self, k: usize) -> GaussianRational {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(GaussianRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0. Only for callers that
    /// have already excluded zero.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&GaussianRational> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    /// Scaled to leading coefficient one; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(lc) if lc.is_one() => self.clone(),
            Some(lc) => {
                let inv = lc.inv().expect("leading coefficient is nonzero");
                self.scale(&inv)
            }
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &GaussianRational::from_int(k as i64))
                .collect(),
        )
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &GaussianRational) -> GaussianRational {
        self.coeffs
            .iter()
            .rev()
            .fold(GaussianRational::zero(), |acc, c| &(&acc * x) + c)
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Euclidean division: `self = divisor·q + r` with `deg r < deg divisor`.
    pub fn divmod(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        let Some(dd) = divisor.degree() else {
            return Err(Error::ZeroDivisor);
        };
        let Some(nd) = self.degree() else {
            return Ok((Poly::zero(), Poly::zero()));
        };
        if nd < dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let lc_inv = divisor.coeffs[dd]
            .inv()
            .expect("leading coefficient is nonzero");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![GaussianRational::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let top = &rem[k + dd];
            if top.is_zero() {
                continue;
            }
            let q = top * &lc_inv;
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &(&q * dc);
            }
            quot[k] = q;
        }
        rem.truncate(dd);
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly> {
        Ok(self.divmod(divisor)?.1)
    }

    /// Quotient when `divisor` is known to divide `self`; an inexact
    /// division is reported as an internal error.
    pub fn div_exact(&self, divisor: &Poly) -> Result<Poly> {
        let (q, r) = self.divmod(divisor)?;
        if !r.is_zero() {
            return Err(Error::Internal(format!("{divisor} does not divide {self}")));
        }
        Ok(q)
    }

    pub fn divides(&self, other: &Poly) -> Result<bool> {
        Ok(other.rem(self)?.is_zero())
    }

    /// Monic greatest common divisor.
    pub fn gcd(a: &Poly, b: &Poly) -> Result<Poly> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::ZeroPolynomial("gcd of two zero polynomials"));
        }
        let (mut u, mut v) = (a.monic(), b.monic());
        while !v.is_zero() {
            let r = u.rem(&v)?.monic();
            u = v;
            v = r;
        }
        Ok(u)
    }

    /// Product of the distinct monic irreducible factors, i.e.
    /// `p / gcd(p, p′)` made monic.
    pub fn squarefree_part(&self) -> Result<Poly> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial("squarefree part"));
        }
        let g = Poly::gcd(self, &self.derivative())?;
        self.monic().div_exact(&g)
    }

    /// Number of distinct complex roots.
    pub fn distinct_root_count(&self) -> Result<usize> {
        Ok(self.squarefree_part()?.deg())
    }

    pub fn is_squarefree(&self) -> Result<bool> {
        Ok(self.distinct_root_count()? == self.deg())
    }

    /// Largest `k` with `(x − root)^k` dividing `self`.
    pub fn root_multiplicity(&self, root: &GaussianRational) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial("root multiplicity"));
        }
        let lin = Poly::linear(root);
        let mut p = self.clone();
        let mut k = 0;
        loop {
            let (q, r) = p.divmod(&lin)?;
            if !r.is_zero() {
                return Ok(k);
            }
            k += 1;
            p = q;
        }
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = long.coeffs.clone();
        for (o, c) in out.iter_mut().zip(&short.coeffs) {
            *o += c;
        }
        Poly::new(out)
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![GaussianRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

/// Descending-degree rendering such as `x^2 - 5x + 3` or `x - (1+i)`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (negative, mag) = if c.is_real() && c.re().is_negative() {
                (true, -c)
            } else {
                (false, c.clone())
            };
            match (first, negative) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            let show_coeff = !mag.is_one() || k == 0;
            if show_coeff {
                if mag.is_real() {
                    write!(f, "{mag}")?;
                } else {
                    write!(f, "({mag})")?;
                }
            }
            match k {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(v: i64) -> GaussianRational {
        GaussianRational::from_int(v)
    }

    #[test]
    fn zero_is_canonical() {
        assert_eq!(Poly::from_ints(&[0, 0, 0]), Poly::zero());
        assert_eq!(Poly::zero().degree(), None);
        assert_eq!(Poly::from_ints(&[1, 2, 0]).degree(), Some(1));
    }

    #[test]
    fn divmod_examples() {
        // (x^2 - 1) / (x - 1) = x + 1
        let (q, r) = Poly::from_ints(&[-1, 0, 1])
            .divmod(&Poly::from_ints(&[-1, 1]))
            .unwrap();
        assert_eq!(q, Poly::from_ints(&[1, 1]));
        assert!(r.is_zero());

        // x^3 / x^2 = x
        let (q, r) = Poly::from_ints(&[0, 0, 0, 1])
            .divmod(&Poly::from_ints(&[0, 0, 1]))
            .unwrap();
        assert_eq!(q, Poly::x());
        assert!(r.is_zero());

        assert!(matches!(
            Poly::x().divmod(&Poly::zero()),
            Err(Error::ZeroDivisor)
        ));
    }

    #[test]
    fn divmod_of_linear_powers() {
        // Expanded by hand: (x-1)^5 = x^5 - 5x^4 + 10x^3 - 10x^2 + 5x - 1,
        // (x-1)^3 = x^3 - 3x^2 + 3x - 1, (x-1)^2 = x^2 - 2x + 1.
        let p5 = Poly::from_ints(&[-1, 5, -10, 10, -5, 1]);
        let p3 = Poly::from_ints(&[-1, 3, -3, 1]);
        let p2 = Poly::from_ints(&[1, -2, 1]);
        assert_eq!(Poly::linear_power(&g(1), 5), p5);
        let (q, r) = p5.divmod(&p3).unwrap();
        assert_eq!(q, p2);
        assert!(r.is_zero());
    }

    #[test]
    fn divmod_with_remainder() {
        let a = Poly::from_ints(&[3, 0, 2, 1]);
        let b = Poly::from_ints(&[1, 2]);
        let (q, r) = a.divmod(&b).unwrap();
        assert_eq!(&(&b * &q) + &r, a);
        assert!(r.deg() < b.deg() || r.is_zero());
    }

    #[test]
    fn gcd_examples() {
        let one = Poly::one();
        assert_eq!(
            Poly::gcd(&Poly::linear(&g(1)), &Poly::linear(&g(2))).unwrap(),
            one
        );
        let a = &Poly::linear_power(&g(1), 2) * &Poly::linear(&g(3));
        let b = &Poly::linear(&g(1)) * &Poly::linear(&g(4));
        assert_eq!(Poly::gcd(&a, &b).unwrap(), Poly::linear(&g(1)));
        assert!(Poly::gcd(&Poly::zero(), &Poly::zero()).is_err());
        assert_eq!(
            Poly::gcd(&Poly::zero(), &Poly::from_ints(&[2, 4])).unwrap(),
            Poly::from_ints(&[1, 2]).monic()
        );
    }

    #[test]
    fn root_multiplicity_counts() {
        let p = &Poly::linear_power(&g(1), 3) * &Poly::from_ints(&[3, -5, 1]);
        assert_eq!(p.root_multiplicity(&g(1)).unwrap(), 3);
        assert_eq!(p.root_multiplicity(&g(2)).unwrap(), 0);
        assert_eq!(p.distinct_root_count().unwrap(), 3);
    }

    #[test]
    fn display() {
        assert_eq!(Poly::from_ints(&[3, -5, 1]).to_string(), "x^2 - 5x + 3");
        assert_eq!(
            Poly::linear(&GaussianRational::from_integers(1, 1)).to_string(),
            "x + (-1-i)"
        );
        assert_eq!(Poly::from_ints(&[-1]).to_string(), "-1");
        assert_eq!(Poly::from_ints(&[0, -1, 2]).to_string(), "2x^2 - x");
    }
}
