use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::padic::{PAdicContext, PAdicScalar};
use crate::udfunc::{binomial, UDFunction};

/// Default cap on the number of terms of a brute-force alternating sum.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Euler numbers as exact rationals, from
/// `E_n = -1/2 sum_{j<n} binomial(n, j) E_j`, `E_0 = 1`.
fn euler_rational(k: usize) -> BigRational {
    static CACHE: OnceLock<RwLock<Vec<BigRational>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(vec![BigRational::one()]));
    if let Some(e) = cache.read().expect("euler cache poisoned").get(k) {
        return e.clone();
    }
    let mut table = cache.write().expect("euler cache poisoned");
    let minus_half = BigRational::new(BigInt::from(-1), BigInt::from(2));
    while table.len() <= k {
        let n = table.len() as u64;
        let s = table
            .iter()
            .enumerate()
            .fold(BigRational::zero(), |acc, (j, e)| {
                acc + e * BigRational::from_integer(binomial(n, j as u64))
            });
        table.push(&minus_half * s);
    }
    table[k].clone()
}

/// Euler numbers `E_0..` reduced into one p-adic context, grown on demand.
pub struct EulerTable {
    ctx: PAdicContext,
    values: RwLock<Vec<PAdicScalar>>,
}

impl EulerTable {
    pub fn new(ctx: &PAdicContext) -> Self {
        Self {
            ctx: ctx.clone(),
            values: RwLock::new(Vec::new()),
        }
    }

    /// Shared table for `ctx`.
    pub fn for_context(ctx: &PAdicContext) -> Arc<EulerTable> {
        type Key = (u64, u32, i64);
        static TABLES: OnceLock<Mutex<HashMap<Key, Arc<EulerTable>>>> = OnceLock::new();
        let key = (ctx.p(), ctx.precision(), ctx.floor());
        TABLES
            .get_or_init(Default::default)
            .lock()
            .expect("euler tables poisoned")
            .entry(key)
            .or_insert_with(|| Arc::new(EulerTable::new(ctx)))
            .clone()
    }

    pub fn context(&self) -> &PAdicContext {
        &self.ctx
    }

    pub fn get(&self, k: usize) -> Result<PAdicScalar> {
        if let Some(e) = self.values.read().expect("euler table poisoned").get(k) {
            return Ok(e.clone());
        }
        let mut values = self.values.write().expect("euler table poisoned");
        while values.len() <= k {
            let e = euler_rational(values.len());
            values.push(PAdicScalar::from_ratio(e.numer(), e.denom(), &self.ctx)?);
        }
        Ok(values[k].clone())
    }

    /// `E_0..=E_k`.
    pub fn upto(&self, k: usize) -> Result<Vec<PAdicScalar>> {
        self.get(k)?;
        Ok(self.values.read().expect("euler table poisoned")[..=k].to_vec())
    }
}

/// `E_k = I_{-1}(x^k)`.
pub fn euler_number(k: usize, ctx: &PAdicContext) -> Result<PAdicScalar> {
    EulerTable::for_context(ctx).get(k)
}

/// `S_m = sum_{x < p^m} (-1)^x f(x)`, the level-m approximation of `I_{-1}(f)`.
pub fn fermionic_sum(f: &UDFunction, m: u32, budget: u64) -> Result<PAdicScalar> {
    fermionic_sum_with(f, m, budget, Execution::default())
}

pub fn fermionic_sum_with(f: &UDFunction, m: u32, budget: u64, exec: Execution) -> Result<PAdicScalar> {
    let ctx = f.context();
    let terms = u128::from(ctx.p()).pow(m);
    if terms > u128::from(budget) {
        return Err(Error::BudgetExceeded { terms, budget });
    }
    exec::try_alternating_sum(ctx, terms as u64, exec, |x| f.evaluate_int(x))
}

/// `I_{-1}(binomial(x, n)) = (-1/2)^n`.
pub fn mahler_basis_integral(n: usize, ctx: &PAdicContext) -> Result<PAdicScalar> {
    ctx.ratio(-1, 2)?.pow(n as u32)
}

/// `I_{-1}(f)` by closed forms: Euler numbers for monomials, `(-1/2)^n` for
/// Mahler basis elements, and the finite alternating sum for step functions.
pub fn integrate(f: &UDFunction) -> Result<PAdicScalar> {
    let ctx = f.context();
    match f {
        UDFunction::Poly(p) => {
            let table = EulerTable::for_context(ctx);
            p.coeffs()
                .iter()
                .enumerate()
                .try_fold(ctx.zero(), |acc, (k, c)| {
                    if c.is_exact_zero() {
                        return Ok(acc);
                    }
                    acc.try_add(&c.try_mul(&table.get(k)?)?)
                })
        }
        UDFunction::Mahler(m) => {
            let minus_half = ctx.ratio(-1, 2)?;
            let mut weight = ctx.one();
            let mut acc = ctx.zero();
            for a in m.coeffs() {
                acc = acc.try_add(&a.try_mul(&weight)?)?;
                weight = weight.try_mul(&minus_half)?;
            }
            Ok(acc)
        }
        // Constant on classes mod p^L: every level m >= L sum collapses to
        // sum_{x < p^L} (-1)^x f(x), since p^L is odd.
        UDFunction::Step(s) => s
            .values()
            .iter()
            .enumerate()
            .try_fold(ctx.zero(), |acc, (x, v)| acc.try_add(&v.signed(x as u64))),
        UDFunction::Scaled(c, g) => c.try_mul(&integrate(g)?),
        UDFunction::Sum(g, h) => integrate(g)?.try_add(&integrate(h)?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::udfunc::StepFunction;

    fn f(lit: &str, ctx: &PAdicContext) -> UDFunction {
        UDFunction::parse(lit, ctx).unwrap()
    }

    #[test]
    fn fermionic_sum_examples() {
        let c5 = PAdicContext::new(5, 6).unwrap();
        for m in 0..4 {
            assert_eq!(fermionic_sum(&f("poly:1", &c5), m, DEFAULT_BUDGET).unwrap(), c5.one());
        }
        assert_eq!(fermionic_sum(&f("poly:0,1", &c5), 2, DEFAULT_BUDGET).unwrap(), c5.integer(12));
        let c3 = PAdicContext::new(3, 6).unwrap();
        assert_eq!(
            fermionic_sum(&f("mahler:0,0,1", &c3), 2, DEFAULT_BUDGET).unwrap(),
            c3.integer(16)
        );
        assert!(matches!(
            fermionic_sum(&f("poly:1", &c3), 10, 1000),
            Err(Error::BudgetExceeded { terms: 59049, budget: 1000 })
        ));
    }

    #[test]
    fn euler_examples() {
        let c = PAdicContext::new(5, 2).unwrap();
        assert_eq!(euler_number(0, &c).unwrap(), c.one());
        let e1 = euler_number(1, &c).unwrap();
        assert_eq!(e1.canonical(), "5^0 * 12 mod 5^2");
        assert_eq!(euler_number(3, &c).unwrap().canonical(), "5^0 * 19 mod 5^2");
        assert!(euler_number(2, &c).unwrap().is_exact_zero());
        let table = EulerTable::new(&c);
        assert_eq!(table.upto(3).unwrap().len(), 4);
    }

    #[test]
    fn euler_rationals() {
        let expect = [(1, 1), (-1, 2), (0, 1), (1, 4), (0, 1), (-1, 2), (0, 1), (17, 8)];
        for (k, (n, d)) in expect.into_iter().enumerate() {
            assert_eq!(
                euler_rational(k),
                BigRational::new(BigInt::from(n), BigInt::from(d))
            );
        }
    }

    #[test]
    fn integrate_examples() {
        let c5 = PAdicContext::new(5, 6).unwrap();
        assert!(integrate(&f("poly:0,0,1", &c5)).unwrap().is_zero());
        assert!(integrate(&f("mahler:0,1,2", &c5)).unwrap().is_zero());
        assert_eq!(integrate(&f("poly:1", &c5)).unwrap(), c5.one());
        let c3 = PAdicContext::new(3, 2).unwrap();
        let i = integrate(&f("mahler:0,0,1", &c3)).unwrap();
        assert_eq!(i.canonical(), "3^0 * 7 mod 3^2");
        assert_eq!(integrate(&f("poly:0,-1/2,1/2", &c3)).unwrap(), i);
    }

    #[test]
    fn step_integral_matches_brute_force() {
        let c = PAdicContext::new(3, 8).unwrap();
        let vals = (0..9).map(|i| c.integer(i * i - 3)).collect();
        let s = UDFunction::from(StepFunction::new(&c, 2, vals).unwrap());
        let exact = integrate(&s).unwrap();
        for m in 2..5 {
            assert_eq!(fermionic_sum(&s, m, DEFAULT_BUDGET).unwrap(), exact);
        }
    }
}
