//! Uniformly differentiable functions on Z_p with finite descriptions.
//!
//! A [`UDFunction`] is an expression tree whose leaves are polynomials in
//! the monomial basis, finite Mahler series, or locally constant step
//! functions. All evaluations are exact at working precision.

mod combinatorics;
mod mahler;
mod poly;
mod step;

pub use mahler::MahlerFunction;
pub use poly::Polynomial;
pub use step::StepFunction;

pub(crate) use combinatorics::binomial;

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::padic::{max_norm, PAdicContext, PAdicScalar};

#[derive(Clone, Debug, PartialEq)]
pub enum UDFunction {
    Poly(Polynomial),
    Mahler(MahlerFunction),
    Step(StepFunction),
    Scaled(PAdicScalar, Box<UDFunction>),
    Sum(Box<UDFunction>, Box<UDFunction>),
}

impl From<Polynomial> for UDFunction {
    fn from(p: Polynomial) -> Self {
        UDFunction::Poly(p)
    }
}

impl From<MahlerFunction> for UDFunction {
    fn from(m: MahlerFunction) -> Self {
        UDFunction::Mahler(m)
    }
}

impl From<StepFunction> for UDFunction {
    fn from(s: StepFunction) -> Self {
        UDFunction::Step(s)
    }
}

impl UDFunction {
    /// Parses `poly:c0,c1,...` (monomial basis) or `mahler:a0,a1,...`.
    pub fn parse(literal: &str, ctx: &PAdicContext) -> Result<Self> {
        let literal = literal.trim();
        let (kind, body) = literal
            .split_once(':')
            .ok_or_else(|| Error::Parse(literal.to_string()))?;
        let coeffs = body
            .split(',')
            .map(|c| PAdicScalar::parse(c, ctx))
            .collect::<Result<Vec<_>>>()?;
        match kind.trim() {
            "poly" => Ok(Polynomial::new(ctx, coeffs).into()),
            "mahler" => Ok(MahlerFunction::new(ctx, coeffs).into()),
            _ => Err(Error::Parse(literal.to_string())),
        }
    }

    pub fn scaled(c: PAdicScalar, f: UDFunction) -> Self {
        UDFunction::Scaled(c, Box::new(f))
    }

    pub fn sum(f: UDFunction, g: UDFunction) -> Self {
        UDFunction::Sum(Box::new(f), Box::new(g))
    }

    /// `alpha f + beta g`.
    pub fn linear_combination(alpha: PAdicScalar, f: UDFunction, beta: PAdicScalar, g: UDFunction) -> Self {
        Self::sum(Self::scaled(alpha, f), Self::scaled(beta, g))
    }

    pub fn context(&self) -> &PAdicContext {
        match self {
            UDFunction::Poly(p) => p.context(),
            UDFunction::Mahler(m) => m.context(),
            UDFunction::Step(s) => s.context(),
            UDFunction::Scaled(c, _) => c.context(),
            UDFunction::Sum(f, _) => f.context(),
        }
    }

    /// Polynomial degree bound; `None` when a non-constant step function is
    /// involved.
    pub fn degree_bound(&self) -> Option<usize> {
        match self {
            UDFunction::Poly(p) => Some(p.degree().unwrap_or(0)),
            UDFunction::Mahler(m) => Some(m.coeffs().len().saturating_sub(1)),
            UDFunction::Step(s) => (s.level() == 0).then_some(0),
            UDFunction::Scaled(_, f) => f.degree_bound(),
            UDFunction::Sum(f, g) => Some(f.degree_bound()?.max(g.degree_bound()?)),
        }
    }

    pub fn evaluate(&self, x: &PAdicScalar) -> Result<PAdicScalar> {
        if let Some(v) = x.valuation().filter(|&v| v < 0) {
            return Err(Error::NotIntegral(v));
        }
        match self {
            UDFunction::Poly(p) => p.evaluate(x),
            UDFunction::Mahler(m) => m.evaluate(x),
            UDFunction::Step(s) => s.evaluate(x),
            UDFunction::Scaled(c, f) => c.try_mul(&f.evaluate(x)?),
            UDFunction::Sum(f, g) => f.evaluate(x)?.try_add(&g.evaluate(x)?),
        }
    }

    pub fn evaluate_int(&self, x: u64) -> Result<PAdicScalar> {
        match self {
            UDFunction::Poly(p) => p.evaluate_int(x),
            UDFunction::Mahler(m) => m.evaluate_int(x),
            UDFunction::Step(s) => Ok(s.evaluate_int(x)),
            UDFunction::Scaled(c, f) => c.try_mul(&f.evaluate_int(x)?),
            UDFunction::Sum(f, g) => f.evaluate_int(x)?.try_add(&g.evaluate_int(x)?),
        }
    }

    /// Mahler coefficients `a_0..a_{count-1}`. Polynomial and Mahler leaves
    /// are converted exactly (coefficients above the degree are exact
    /// zeros); step functions go through forward differences.
    pub fn mahler_coeffs(&self, count: usize) -> Result<Vec<PAdicScalar>> {
        let ctx = self.context();
        let pad = |mut v: Vec<PAdicScalar>| {
            v.resize(count, ctx.zero());
            v
        };
        match self {
            UDFunction::Poly(p) => Ok(pad(p.mahler_coeffs()?)),
            UDFunction::Mahler(m) => Ok(pad(m.coeffs().to_vec())),
            UDFunction::Step(_) => self.forward_differences(count),
            UDFunction::Scaled(c, f) => f
                .mahler_coeffs(count)?
                .iter()
                .map(|a| c.try_mul(a))
                .collect(),
            UDFunction::Sum(f, g) => f
                .mahler_coeffs(count)?
                .iter()
                .zip(g.mahler_coeffs(count)?)
                .map(|(a, b)| a.try_add(&b))
                .collect(),
        }
    }

    /// `a_n = sum_{k <= n} (-1)^(n-k) binomial(n, k) f(k)`.
    pub fn forward_differences(&self, count: usize) -> Result<Vec<PAdicScalar>> {
        let ctx = self.context();
        let values = (0..count as u64)
            .map(|k| self.evaluate_int(k))
            .collect::<Result<Vec<_>>>()?;
        (0..count as u64)
            .map(|n| {
                let mut acc = ctx.zero();
                for k in 0..=n {
                    let w = PAdicScalar::from_bigint(&binomial(n, k), ctx)?.signed(n - k);
                    acc = acc.try_add(&w.try_mul(&values[k as usize])?)?;
                }
                Ok(acc)
            })
            .collect()
    }

    /// Exact monomial form, when one exists.
    pub fn to_polynomial(&self) -> Result<Polynomial> {
        match self {
            UDFunction::Poly(p) => Ok(p.clone()),
            UDFunction::Mahler(m) => m.to_polynomial(),
            UDFunction::Step(s) if s.level() == 0 => Ok(Polynomial::constant(s.values()[0].clone())),
            UDFunction::Step(_) => Err(Error::NotFinitelyExpandable),
            UDFunction::Scaled(c, f) => f.to_polynomial()?.scale(c),
            UDFunction::Sum(f, g) => f.to_polynomial()?.add(&g.to_polynomial()?),
        }
    }

    /// Collapses trees built only from step functions and constants.
    pub fn as_step(&self) -> Option<StepFunction> {
        match self {
            UDFunction::Step(s) => Some(s.clone()),
            UDFunction::Poly(_) | UDFunction::Mahler(_) => {
                if self.degree_bound()? == 0 {
                    Some(StepFunction::constant(self.evaluate_int(0).ok()?))
                } else {
                    None
                }
            }
            UDFunction::Scaled(c, f) => f.as_step()?.scale(c).ok(),
            UDFunction::Sum(f, g) => f.as_step()?.add(&g.as_step()?).ok(),
        }
    }

    /// `x -> f(a + p^n x)`.
    pub fn compose_affine(&self, a: u64, n: u32) -> Result<UDFunction> {
        let ctx = self.context();
        let shift = || -> Result<(PAdicScalar, PAdicScalar)> {
            let a = PAdicScalar::from_bigint(&a.into(), ctx)?;
            Ok((a, ctx.p_power(n)))
        };
        Ok(match self {
            UDFunction::Poly(p) => {
                let (a, s) = shift()?;
                p.compose_affine(&a, &s)?.into()
            }
            UDFunction::Mahler(m) => {
                let (a, s) = shift()?;
                m.to_polynomial()?.compose_affine(&a, &s)?.into()
            }
            UDFunction::Step(s) => s.compose_affine(a, n)?.into(),
            UDFunction::Scaled(c, f) => Self::scaled(c.clone(), f.compose_affine(a, n)?),
            UDFunction::Sum(f, g) => Self::sum(f.compose_affine(a, n)?, g.compose_affine(a, n)?),
        })
    }

    /// `||f||_inf`, computed as `max_n |a_n|_p` over the Mahler coefficients
    /// (or the largest value for step functions).
    pub fn sup_norm(&self) -> Result<f64> {
        if let Some(d) = self.degree_bound() {
            return Ok(max_norm(&self.mahler_coeffs(d + 1)?));
        }
        match self.as_step() {
            Some(s) => Ok(max_norm(s.values())),
            None => Err(Error::NotFinitelyExpandable),
        }
    }

    /// `(f(x + m) - f(x)) / m`.
    pub fn difference_quotient(&self, m: &PAdicScalar, x: &PAdicScalar) -> Result<PAdicScalar> {
        if m.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let shifted = x.try_add(m)?;
        self.evaluate(&shifted)?
            .try_sub(&self.evaluate(x)?)?
            .try_div(m)
    }

    /// Lower estimate of `||f||_1`: the sup norm together with the largest
    /// sampled difference quotient over `x < p^depth` and
    /// `m = u p^j` (`1 <= u < p`, `0 <= j < depth`).
    pub fn lip_norm_estimate(&self, depth: u32) -> Result<f64> {
        if depth == 0 {
            return Err(Error::Precondition("depth must be at least 1".into()));
        }
        let ctx = self.context();
        let p = ctx.p();
        let span = ctx
            .pow_u64(depth)
            .ok_or_else(|| Error::Precondition(format!("p^{depth} sample points do not fit")))?;
        let steps: Vec<u64> = (0..depth)
            .flat_map(|j| (1..p).map(move |u| u * p.pow(j)))
            .collect();
        let per_point = exec::try_map(span, Execution::default(), |x| {
            let fx = self.evaluate_int(x)?;
            let mut worst = 0.0f64;
            for &m in &steps {
                let q = self
                    .evaluate_int(x + m)?
                    .try_sub(&fx)?
                    .try_div(&ctx.integer(m as i64))?;
                worst = worst.max(q.norm());
            }
            Ok(worst)
        })?;
        let sampled = per_point.into_iter().fold(0.0, f64::max);
        Ok(self.sup_norm()?.max(sampled))
    }

    /// Exact product, via the monomial forms.
    pub fn product(&self, other: &UDFunction) -> Result<UDFunction> {
        Ok(self.to_polynomial()?.mul(&other.to_polynomial()?)?.into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u64) -> PAdicContext {
        PAdicContext::new(p, 12).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let c = ctx(5);
        let sq = UDFunction::parse("poly:0,0,1", &c).unwrap();
        assert_eq!(sq.evaluate(&c.integer(3)).unwrap(), c.integer(9));
        let b2 = UDFunction::parse("mahler:0,0,1", &c).unwrap();
        assert_eq!(b2.evaluate(&c.integer(4)).unwrap(), c.integer(6));
        let mixed = UDFunction::parse("mahler:0,1,2", &c).unwrap();
        assert_eq!(mixed.evaluate(&c.integer(5)).unwrap(), c.integer(25));
        assert_eq!(
            sq.evaluate(&c.ratio(1, 5).unwrap()),
            Err(Error::NotIntegral(-1))
        );
    }

    #[test]
    fn mahler_coeff_examples() {
        let c = ctx(5);
        let ints = |xs: &[i64]| xs.iter().map(|&x| c.integer(x)).collect::<Vec<_>>();
        let sq = UDFunction::parse("poly:0,0,1", &c).unwrap();
        let a = sq.mahler_coeffs(4).unwrap();
        assert_eq!(a, ints(&[0, 1, 2, 0]));
        assert!(a[3].is_exact_zero());
        let b3 = UDFunction::parse("mahler:0,0,0,1", &c).unwrap();
        assert_eq!(b3.mahler_coeffs(5).unwrap(), ints(&[0, 0, 0, 1, 0]));
        let seven = UDFunction::parse("poly:7", &c).unwrap();
        assert_eq!(seven.mahler_coeffs(3).unwrap(), ints(&[7, 0, 0]));
    }

    #[test]
    fn forward_differences_match_stirling_route() {
        let c = ctx(3);
        let f = UDFunction::parse("poly:2,-1,0,4,1/2", &c).unwrap();
        let exact = f.mahler_coeffs(7).unwrap();
        let fd = f.forward_differences(7).unwrap();
        for (a, b) in exact.iter().zip(&fd) {
            assert!(a.try_sub(b).unwrap().is_zero());
        }
    }

    #[test]
    fn difference_quotient_examples() {
        let c = ctx(5);
        let sq = UDFunction::parse("poly:0,0,1", &c).unwrap();
        assert_eq!(
            sq.difference_quotient(&c.integer(5), &c.integer(1)).unwrap(),
            c.integer(7)
        );
        let k = UDFunction::parse("poly:3", &c).unwrap();
        assert!(k
            .difference_quotient(&c.integer(10), &c.integer(2))
            .unwrap()
            .is_zero());
        let id = UDFunction::parse("poly:0,1", &c).unwrap();
        assert_eq!(
            id.difference_quotient(&c.integer(25), &c.integer(4)).unwrap(),
            c.one()
        );
        assert_eq!(
            id.difference_quotient(&c.zero(), &c.integer(4)),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn norm_examples() {
        let c = ctx(5);
        assert_eq!(UDFunction::parse("poly:0,0,1", &c).unwrap().sup_norm().unwrap(), 1.0);
        assert_eq!(UDFunction::parse("poly:0,5", &c).unwrap().sup_norm().unwrap(), 0.2);
        assert_eq!(UDFunction::parse("poly:0", &c).unwrap().sup_norm().unwrap(), 0.0);

        assert_eq!(UDFunction::parse("poly:0,1", &c).unwrap().lip_norm_estimate(2).unwrap(), 1.0);
        let c3 = ctx(3);
        let sq = UDFunction::parse("poly:0,0,1", &c3).unwrap();
        assert_eq!(sq.lip_norm_estimate(2).unwrap(), 1.0);
        let k = UDFunction::parse("poly:50", &c).unwrap();
        assert_eq!(k.lip_norm_estimate(2).unwrap(), 1.0 / 25.0);
    }

    #[test]
    fn step_leaves() {
        let c = ctx(3);
        let s = StepFunction::new(&c, 1, vec![c.integer(3), c.integer(1), c.integer(9)]).unwrap();
        let f = UDFunction::from(s);
        assert_eq!(f.sup_norm().unwrap(), 1.0);
        assert_eq!(f.to_polynomial(), Err(Error::NotFinitelyExpandable));
        let mixed = UDFunction::sum(f.clone(), UDFunction::parse("poly:0,1", &c).unwrap());
        assert_eq!(mixed.sup_norm(), Err(Error::NotFinitelyExpandable));
        let shifted = UDFunction::sum(f, UDFunction::parse("poly:1", &c).unwrap());
        assert_eq!(shifted.evaluate_int(4).unwrap(), c.integer(2));
        assert_eq!(shifted.sup_norm().unwrap(), 1.0);
    }

    #[test]
    fn parse_rejects_garbage() {
        let c = ctx(5);
        assert!(UDFunction::parse("poly", &c).is_err());
        assert!(UDFunction::parse("taylor:1,2", &c).is_err());
        assert!(UDFunction::parse("poly:1,a", &c).is_err());
    }
}
