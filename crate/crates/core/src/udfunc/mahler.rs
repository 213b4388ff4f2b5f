use crate::error::{Error, Result};
use crate::padic::{PAdicContext, PAdicScalar};

use super::combinatorics::binomial;
use super::poly::Polynomial;

/// A finite Mahler series `f(x) = sum_n a_n binomial(x, n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MahlerFunction {
    ctx: PAdicContext,
    coeffs: Vec<PAdicScalar>,
}

impl MahlerFunction {
    pub fn new(ctx: &PAdicContext, coeffs: Vec<PAdicScalar>) -> Self {
        Self {
            ctx: ctx.clone(),
            coeffs,
        }
    }

    pub fn context(&self) -> &PAdicContext {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[PAdicScalar] {
        &self.coeffs
    }

    /// `max_{n >= 1} n |a_n|_p` over the stored coefficients.
    pub fn decay_witness(&self) -> f64 {
        weighted_tail_sup(&self.coeffs, 1)
    }

    /// Exact value at an integer point.
    pub fn evaluate_int(&self, x: u64) -> Result<PAdicScalar> {
        let mut acc = self.ctx.zero();
        for (n, a) in self.coeffs.iter().enumerate() {
            if (n as u64) > x {
                break;
            }
            let b = PAdicScalar::from_bigint(&binomial(x, n as u64), &self.ctx)?;
            acc = acc.try_add(&a.try_mul(&b)?)?;
        }
        Ok(acc)
    }

    /// Value at an arbitrary point of Z_p, building `binomial(x, n)` by the
    /// recurrence `binomial(x, n) = binomial(x, n - 1) (x - n + 1) / n`.
    pub fn evaluate(&self, x: &PAdicScalar) -> Result<PAdicScalar> {
        let mut acc = self.ctx.zero();
        let mut basis = self.ctx.one();
        for (n, a) in self.coeffs.iter().enumerate() {
            if n > 0 {
                let shift = self.ctx.integer(n as i64 - 1);
                basis = basis
                    .try_mul(&x.try_sub(&shift)?)?
                    .try_div(&self.ctx.integer(n as i64))?;
            }
            acc = acc.try_add(&a.try_mul(&basis)?)?;
        }
        Ok(acc)
    }

    /// Exact conversion to the monomial basis.
    pub fn to_polynomial(&self) -> Result<Polynomial> {
        let mut acc = Polynomial::zero(&self.ctx);
        for (n, a) in self.coeffs.iter().enumerate() {
            if a.is_exact_zero() {
                continue;
            }
            acc = acc.add(&Polynomial::binomial(&self.ctx, n)?.scale(a)?)?;
        }
        Ok(acc)
    }

    /// `f_m = sum_{i < m} a_i binomial(x, i)` in monomial form, with the
    /// sup-norm error bound `sup_{n >= m} n |a_n|_p`.
    pub fn truncate(&self, m: usize) -> Result<(Polynomial, f64)> {
        if m > self.coeffs.len() {
            return Err(Error::Precondition(format!(
                "truncation order {m} exceeds the {} stored coefficients",
                self.coeffs.len()
            )));
        }
        let head = Self::new(&self.ctx, self.coeffs[..m].to_vec());
        Ok((head.to_polynomial()?, weighted_tail_sup(&self.coeffs, m)))
    }
}

fn weighted_tail_sup(coeffs: &[PAdicScalar], from: usize) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .skip(from)
        .map(|(n, a)| n as f64 * a.norm())
        .fold(0.0, f64::max)
}
