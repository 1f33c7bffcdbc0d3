//! Squarefree decomposition by Yun's algorithm.
//!
//! Writes a nonzero `p` as `unit · g₁^k₁ · g₂^k₂ ⋯` with every `gⱼ` monic,
//! squarefree, nonconstant and pairwise coprime, and `k₁ < k₂ < ⋯`. Over a
//! field of characteristic zero the degree of `Π gⱼ` is the number of distinct
//! complex roots, so no root finding is needed to count eigenvalues.

use num_traits::Zero;

use super::{GaussianRational, Poly};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquarefreePart {
    pub factor: Poly,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquarefreeDecomposition {
    pub unit: GaussianRational,
    pub parts: Vec<SquarefreePart>,
}

impl SquarefreeDecomposition {
    /// `unit · Π gⱼ^kⱼ`.
    pub fn reconstruct(&self) -> Poly {
        self.parts
            .iter()
            .fold(Poly::constant(self.unit.clone()), |acc, p| {
                &acc * &p.factor.pow(p.multiplicity)
            })
    }

    /// `Π gⱼ`, monic.
    pub fn squarefree_part(&self) -> Poly {
        self.parts
            .iter()
            .fold(Poly::one(), |acc, p| &acc * &p.factor)
    }

    /// Number of distinct roots.
    pub fn distinct_roots(&self) -> usize {
        self.parts.iter().map(|p| p.factor.deg()).sum()
    }

    /// Multiplicity class of each distinct root, as `(multiplicity, count)`.
    pub fn profile(&self) -> Vec<(usize, usize)> {
        self.parts
            .iter()
            .map(|p| (p.multiplicity, p.factor.deg()))
            .collect()
    }

    /// Multiplicity of `root`, 0 when it is not a root.
    pub fn multiplicity_of(&self, root: &GaussianRational) -> usize {
        self.parts
            .iter()
            .find(|p| p.factor.eval(root).is_zero())
            .map_or(0, |p| p.multiplicity)
    }
}

pub fn squarefree_decompose(p: &Poly) -> Result<SquarefreeDecomposition> {
    let Some(unit) = p.leading().cloned() else {
        return Err(Error::ZeroPolynomial("squarefree decomposition"));
    };
    let f = p.monic();
    let mut parts = Vec::new();
    if f.deg() == 0 {
        return Ok(SquarefreeDecomposition { unit, parts });
    }

    let df = f.derivative();
    let a0 = Poly::gcd(&f, &df)?;
    let mut b = f.div_exact(&a0)?;
    let mut c = df.div_exact(&a0)?;
    let mut d = &c - &b.derivative();
    let mut k = 1;
    loop {
        let a = Poly::gcd(&b, &d)?;
        if !a.is_constant() {
            parts.push(SquarefreePart {
                factor: a.clone(),
                multiplicity: k,
            });
        }
        b = b.div_exact(&a)?;
        if b.is_constant() {
            break;
        }
        c = d.div_exact(&a)?;
        d = &c - &b.derivative();
        k += 1;
    }
    Ok(SquarefreeDecomposition { unit, parts })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(v: i64) -> GaussianRational {
        GaussianRational::from_int(v)
    }

    #[test]
    fn single_repeated_root() {
        let p = Poly::linear_power(&g(1), 5);
        let sq = squarefree_decompose(&p).unwrap();
        assert!(sq.unit == g(1));
        assert_eq!(
            sq.parts,
            vec![SquarefreePart {
                factor: Poly::linear(&g(1)),
                multiplicity: 5
            }]
        );
    }

    #[test]
    fn mixed_multiplicities() {
        let quad = Poly::from_ints(&[3, -5, 1]);
        let p = &Poly::linear_power(&g(1), 3) * &quad;
        let sq = squarefree_decompose(&p).unwrap();
        assert_eq!(
            sq.parts,
            vec![
                SquarefreePart {
                    factor: quad,
                    multiplicity: 1
                },
                SquarefreePart {
                    factor: Poly::linear(&g(1)),
                    multiplicity: 3
                },
            ]
        );
        assert_eq!(sq.reconstruct(), p);
        assert_eq!(sq.distinct_roots(), 3);
        assert_eq!(sq.multiplicity_of(&g(1)), 3);
        assert_eq!(sq.multiplicity_of(&g(2)), 0);
    }

    #[test]
    fn irreducible_quadratic_is_left_whole() {
        let p = Poly::from_ints(&[1, 0, 1]);
        let sq = squarefree_decompose(&p).unwrap();
        assert_eq!(
            sq.parts,
            vec![SquarefreePart {
                factor: p,
                multiplicity: 1
            }]
        );
    }

    #[test]
    fn non_monic_input_keeps_unit() {
        let p = Poly::linear_power(&GaussianRational::i(), 2)
            .scale(&GaussianRational::from_integers(2, 1));
        let sq = squarefree_decompose(&p).unwrap();
        assert_eq!(sq.unit, GaussianRational::from_integers(2, 1));
        assert_eq!(sq.reconstruct(), p);
    }

    #[test]
    fn constants_and_zero() {
        let sq = squarefree_decompose(&Poly::from_ints(&[7])).unwrap();
        assert!(sq.parts.is_empty());
        assert!(squarefree_decompose(&Poly::zero()).is_err());
    }
}
