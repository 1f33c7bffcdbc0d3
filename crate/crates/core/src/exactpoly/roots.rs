//! Exact search for the roots of a polynomial that lie in ℚ(i).
//!
//! After clearing denominators, a root `λ` of the monic squarefree part
//! `s` becomes a root `y = D·λ` of a monic polynomial `h` with Gaussian
//! integer coefficients. ℤ[i] is integrally closed, so `y` is a Gaussian
//! integer dividing `h(0)`. Candidates are generated from the Gaussian prime
//! factorization of `h(0)`, obtained by factoring its norm over ℤ, and each
//! one is confirmed by exact evaluation.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{GaussianRational, Poly};
use crate::error::{Error, Result};

const TRIAL_LIMIT: u64 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSearch {
    /// Distinct Gaussian-rational roots, sorted by real then imaginary part.
    pub roots: Vec<GaussianRational>,
    /// False when the constant term's norm kept a cofactor above 2^64 after
    /// trial division, so roots built from it were not examined.
    pub complete: bool,
}

pub fn gaussian_rational_roots(p: &Poly) -> Result<RootSearch> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial("root search"));
    }
    let mut s = p.squarefree_part()?;
    let mut roots = Vec::new();
    if s.coeff(0).is_zero() {
        roots.push(GaussianRational::zero());
        s = s.div_exact(&Poly::x())?;
    }
    let mut complete = true;
    match s.deg() {
        0 => {}
        1 => roots.push(-s.coeff(0)),
        m => {
            let denom = monic_scale(&s, m);
            // h_j = s_j · D^(m−j): monic with Gaussian-integer coefficients.
            let h: Vec<GaussianRational> = (0..m)
                .map(|j| s.coeff(j).scale_int(&denom.pow((m - j) as u32)))
                .collect();
            debug_assert!(h.iter().all(GaussianRational::is_gaussian_integer));
            let norm = h[0].norm_sqr().to_integer().magnitude().clone();
            let (factors, factored) = factor_norm(&norm);
            complete = factored;
            // Cauchy: every root y of h has |y| ≤ 1 + max |h_j|.
            let max_norm = h
                .iter()
                .map(|c| c.norm_sqr().to_integer().magnitude().clone())
                .max()
                .unwrap_or_default();
            let radius = max_norm.sqrt() + 2u32;
            let bound = &radius * &radius;
            let denom_q =
                GaussianRational::from_real(num_rational::BigRational::from_integer(denom));
            let total = roots.len() + m;
            for y in gaussian_divisor_candidates(&factors, &bound) {
                if !(&h[0] / &y).is_gaussian_integer() {
                    continue;
                }
                let lambda = &y / &denom_q;
                if s.eval(&lambda).is_zero() {
                    roots.push(lambda);
                    if roots.len() == total {
                        break;
                    }
                }
            }
        }
    }
    roots.sort_by(|a, b| a.re().cmp(b.re()).then_with(|| a.im().cmp(b.im())));
    roots.dedup();
    Ok(RootSearch { roots, complete })
}

/// Smallest `D` such that `s_j · D^(m−j)` is a Gaussian integer for every
/// `j`, up to primes above the trial-division limit, whose leftover
/// cofactors are multiplied in whole.
fn monic_scale(s: &Poly, m: usize) -> BigInt {
    let mut exponents: Vec<(u64, u32)> = Vec::new();
    let mut extra = BigUint::one();
    for j in 0..m {
        let den = s.coeff(j).denominator_lcm().magnitude().clone();
        let (small, rest) = trial_divide(&den);
        let k = (m - j) as u32;
        for (p, e) in small {
            let need = e.div_ceil(k);
            match exponents.iter_mut().find(|(q, _)| *q == p) {
                Some((_, cur)) => *cur = (*cur).max(need),
                None => exponents.push((p, need)),
            }
        }
        extra = extra.lcm(&rest);
    }
    let d = exponents
        .iter()
        .fold(extra, |acc, &(p, e)| acc * BigUint::from(p).pow(e));
    BigInt::from(d)
}

/// Strips prime factors below the trial-division limit from `n`.
fn trial_divide(n: &BigUint) -> (Vec<(u64, u32)>, BigUint) {
    let mut n = n.clone();
    let mut out = Vec::new();
    let mut p = 2u64;
    while p < TRIAL_LIMIT && BigUint::from(p * p) <= n {
        let bp = BigUint::from(p);
        let mut e = 0;
        while (&n % &bp).is_zero() {
            n /= &bp;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > BigUint::one() && n < BigUint::from(TRIAL_LIMIT * TRIAL_LIMIT) {
        out.push((n.to_u64().expect("below 2^32"), 1));
        n = BigUint::one();
    }
    (out, n)
}

/// Prime factorization `[(p, e)]` of `n`, plus whether it is complete.
/// Small primes go by trial division, the rest by Pollard's rho with a
/// bounded number of steps.
fn factor_norm(n: &BigUint) -> (Vec<(BigUint, u32)>, bool) {
    let (small, rest) = trial_divide(n);
    let mut primes = Vec::new();
    let complete = split(rest, &mut primes);
    primes.sort_unstable();
    let mut out: Vec<(BigUint, u32)> = small
        .into_iter()
        .map(|(p, e)| (BigUint::from(p), e))
        .collect();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    (out, complete)
}

fn split(n: BigUint, primes: &mut Vec<BigUint>) -> bool {
    if n.is_one() {
        return true;
    }
    if is_probable_prime(&n) {
        primes.push(n);
        return true;
    }
    match pollard_rho(&n) {
        Some(d) => {
            let rest = &n / &d;
            split(d, primes) & split(rest, primes)
        }
        None => false,
    }
}

const RHO_STEPS: u64 = 1 << 16;

/// A nontrivial factor of an odd composite `n`, unless the step budget
/// runs out.
fn pollard_rho(n: &BigUint) -> Option<BigUint> {
    let r = n.sqrt();
    if &r * &r == *n {
        return Some(r);
    }
    for c in 1u32..=4 {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let (mut x, mut y) = (BigUint::from(2u32), BigUint::from(2u32));
        for _ in 0..RHO_STEPS {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            let d = diff.gcd(n);
            if d == *n {
                break;
            }
            if !d.is_one() {
                return Some(d);
            }
        }
    }
    None
}

const MR_BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Miller–Rabin on the first 13 prime bases: deterministic below
/// 3.3·10^24, a strong probable-prime test beyond.
fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    for &b in &MR_BASES {
        if (n % b).is_zero() {
            return *n == BigUint::from(b);
        }
    }
    let n1 = n - 1u32;
    let s = n1.trailing_zeros().expect("n > 1");
    let d = &n1 >> s;
    'bases: for &a in &MR_BASES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x.is_one() || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// `(a, b)` with `a² + b² = p` for a prime `p ≡ 1 (mod 4)`, by Cornacchia.
fn two_squares(p: &BigUint) -> (BigInt, BigInt) {
    let p1 = p - 1u32;
    let quarter = &p1 >> 2u32;
    let r = (2u32..)
        .map(|t| BigUint::from(t).modpow(&quarter, p))
        .find(|r| (r * r) % p == p1)
        .expect("p ≡ 1 mod 4 has a square root of -1");
    let (mut a, mut b) = (p.clone(), r);
    while &b * &b > *p {
        let m = &a % &b;
        (a, b) = (b, m);
    }
    let rest = p - &b * &b;
    let y = rest.sqrt();
    debug_assert_eq!(&y * &y, rest);
    (BigInt::from(b), BigInt::from(y))
}

/// Every Gaussian integer whose norm divides `Π p^e`, up to the choice of
/// associates (all four are emitted).
fn gaussian_divisor_candidates(
    factors: &[(BigUint, u32)],
    max_norm: &BigUint,
) -> Vec<GaussianRational> {
    let int = |v: BigInt| num_rational::BigRational::from_integer(v);
    let mut acc = vec![GaussianRational::one()];
    for (p, e) in factors {
        let e = *e;
        let mut powers_sets: Vec<GaussianRational> = Vec::new();
        let residue = (p % 4u32).to_u32().expect("small");
        if *p == BigUint::from(2u32) {
            let pi = GaussianRational::from_integers(1, 1);
            powers_sets.extend((0..=e).map(|k| pi.pow(k)));
        } else if residue == 3 {
            let pp = GaussianRational::from_real(int(BigInt::from(p.clone())));
            powers_sets.extend((0..=e / 2).map(|k| pp.pow(k)));
        } else {
            let (a, b) = two_squares(p);
            let pi = GaussianRational::new(int(a), int(b));
            let pi_bar = pi.conj();
            for i in 0..=e {
                for j in 0..=(e - i) {
                    powers_sets.push(&pi.pow(i) * &pi_bar.pow(j));
                }
            }
        }
        acc = acc
            .iter()
            .flat_map(|x| powers_sets.iter().map(move |y| x * y))
            .filter(|z| z.norm_sqr().to_integer().magnitude() <= max_norm)
            .collect();
    }
    let units = [
        GaussianRational::one(),
        GaussianRational::i(),
        GaussianRational::from_int(-1),
        GaussianRational::from_integers(0, -1),
    ];
    acc.iter()
        .flat_map(|x| units.iter().map(move |u| x * u))
        .collect()
}
