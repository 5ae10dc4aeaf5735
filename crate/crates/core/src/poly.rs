//! Univariate rational polynomials: characteristic polynomials and
//! rational root isolation.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::linalg::Matrix;
use crate::scalar::Rational;

/// Trial division bound for rational root candidates.
const MAX_FACTOR_MAGNITUDE: u64 = 1_000_000_000_000;

/// Coefficients in increasing degree; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// Distinct rational roots in increasing order.
    ///
    /// Returns `None` when a candidate set cannot be enumerated because a
    /// coefficient is too large to factor by trial division.
    pub fn rational_roots(&self) -> Option<Vec<Rational>> {
        if self.coeffs.is_empty() {
            return None;
        }
        let mut roots = Vec::new();
        let lowest = self.coeffs.iter().position(|c| !c.is_zero())?;
        if lowest > 0 {
            roots.push(Rational::zero());
        }
        let trimmed = &self.coeffs[lowest..];
        if trimmed.len() > 1 {
            let lcm = trimmed
                .iter()
                .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            let ints: Vec<BigInt> = trimmed
                .iter()
                .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
                .collect();
            let p_divs = divisors(&ints[0])?;
            let q_divs = divisors(ints.last().expect("nonempty"))?;
            let reduced = Poly::new(trimmed.to_vec());
            for p in &p_divs {
                for q in &q_divs {
                    for sign in [1, -1] {
                        let cand = Rational::new(BigInt::from(sign) * p, q.clone());
                        if !roots.contains(&cand) && reduced.eval(&cand).is_zero() {
                            roots.push(cand);
                        }
                    }
                }
            }
        }
        roots.sort();
        Some(roots)
    }

    /// Characteristic polynomial `det(x I − A)` by Faddeev–LeVerrier.
    pub fn characteristic(a: &Matrix<Rational>) -> Self {
        let n = a.nrows();
        let mut coeffs = vec![Rational::zero(); n + 1];
        coeffs[n] = Rational::one();
        let mut m = Matrix::<Rational>::zeros(n, n);
        for k in 1..=n {
            m = a.mul(&m).add(&Matrix::identity(n).scale(&coeffs[n - k + 1]));
            let am = a.mul(&m);
            coeffs[n - k] = -am.trace() / Rational::from_integer(BigInt::from(k));
        }
        Self::new(coeffs)
    }
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n == 0 || n > MAX_FACTOR_MAGNITUDE {
        return None;
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(BigInt::from(d));
            if d * d != n {
                large.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Some(small)
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                1 if a.is_one() => write!(f, "t")?,
                1 => write!(f, "{a}·t")?,
                _ if a.is_one() => write!(f, "t^{k}")?,
                _ => write!(f, "{a}·t^{k}")?,
            }
        }
        Ok(())
    }
}
