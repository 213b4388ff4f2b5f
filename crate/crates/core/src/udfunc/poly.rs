use num_bigint::BigInt;

use crate::error::Result;
use crate::padic::{PAdicContext, PAdicScalar};

use super::combinatorics::{factorial, stirling2_row};

/// A polynomial in the monomial basis, `c_0 + c_1 x + ... + c_d x^d`.
///
/// The coefficient list carries no trailing zeros, so the last entry is the
/// leading coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    ctx: PAdicContext,
    coeffs: Vec<PAdicScalar>,
}

impl Polynomial {
    pub fn new(ctx: &PAdicContext, mut coeffs: Vec<PAdicScalar>) -> Self {
        while coeffs.last().is_some_and(PAdicScalar::is_zero) {
            coeffs.pop();
        }
        Self {
            ctx: ctx.clone(),
            coeffs,
        }
    }

    pub fn zero(ctx: &PAdicContext) -> Self {
        Self::new(ctx, Vec::new())
    }

    pub fn constant(c: PAdicScalar) -> Self {
        let ctx = c.context().clone();
        Self::new(&ctx, vec![c])
    }

    /// `x^k`.
    pub fn monomial(ctx: &PAdicContext, k: usize) -> Self {
        let mut coeffs = vec![ctx.zero(); k];
        coeffs.push(ctx.one());
        Self::new(ctx, coeffs)
    }

    pub fn from_integers(ctx: &PAdicContext, coeffs: &[i64]) -> Self {
        Self::new(ctx, coeffs.iter().map(|&c| ctx.integer(c)).collect())
    }

    /// `binomial(x, n)` expanded into monomials.
    pub fn binomial(ctx: &PAdicContext, n: usize) -> Result<Self> {
        let mut falling = Self::constant(ctx.one());
        for i in 0..n {
            let factor = Self::new(ctx, vec![ctx.integer(-(i as i64)), ctx.one()]);
            falling = falling.mul(&factor)?;
        }
        let inv = PAdicScalar::from_bigint(&factorial(n), ctx)?.inverse()?;
        falling.scale(&inv)
    }

    pub fn context(&self) -> &PAdicContext {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[PAdicScalar] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> PAdicScalar {
        self.coeffs.get(k).cloned().unwrap_or_else(|| self.ctx.zero())
    }

    /// All coefficients lie in Z_p.
    pub fn has_integral_coefficients(&self) -> bool {
        self.coeffs.iter().all(PAdicScalar::is_integral)
    }

    pub fn evaluate(&self, x: &PAdicScalar) -> Result<PAdicScalar> {
        let mut acc = self.ctx.zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.try_mul(x)?.try_add(c)?;
        }
        Ok(acc)
    }

    pub fn evaluate_int(&self, x: u64) -> Result<PAdicScalar> {
        self.evaluate(&self.ctx.integer(x as i64))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|k| self.coeff(k).try_add(&other.coeff(k)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(&self.ctx, coeffs))
    }

    pub fn scale(&self, c: &PAdicScalar) -> Result<Self> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|x| x.try_mul(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(&self.ctx, coeffs))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Ok(Self::zero(&self.ctx));
        }
        let mut out = vec![self.ctx.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].try_add(&a.try_mul(b)?)?;
            }
        }
        Ok(Self::new(&self.ctx, out))
    }

    /// `P(a + s x)` as a polynomial in `x`.
    pub fn compose_affine(&self, a: &PAdicScalar, s: &PAdicScalar) -> Result<Self> {
        let linear = Self::new(&self.ctx, vec![a.clone(), s.clone()]);
        let mut acc = Self::zero(&self.ctx);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&linear)?.add(&Self::constant(c.clone()))?;
        }
        Ok(acc)
    }

    /// Mahler coefficients `a_0..a_d` via `x^k = sum_j S(k, j) j! binomial(x, j)`.
    pub fn mahler_coeffs(&self) -> Result<Vec<PAdicScalar>> {
        let ctx = &self.ctx;
        let mut out = vec![ctx.zero(); self.coeffs.len()];
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_exact_zero() {
                continue;
            }
            for (j, s) in stirling2_row(k).into_iter().enumerate() {
                if s == BigInt::from(0) {
                    continue;
                }
                let weight = PAdicScalar::from_bigint(&(s * factorial(j)), ctx)?;
                out[j] = out[j].try_add(&c.try_mul(&weight)?)?;
            }
        }
        Ok(out)
    }
}
