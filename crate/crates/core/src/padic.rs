//! Elements of Q_p held at a fixed working precision.
//!
//! A nonzero scalar is stored as `p^v * u` with `u` a unit known modulo
//! `p^d`, where `d <= N` is the scalar's relative precision. Every
//! operation propagates `d` so that digits lost to cancellation are never
//! reported as known. Zero comes in two flavours: the exact zero, and a
//! "zero modulo p^k" produced when a subtraction cancels every known digit.

use std::cmp::{min, Ordering};
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default number of significant p-adic digits.
pub const DEFAULT_PRECISION: u32 = 24;

struct ContextInner {
    p: u64,
    precision: u32,
    floor: i64,
    powers: Vec<BigUint>,
}

/// A fixed odd prime together with the working precision and valuation floor.
#[derive(Clone)]
pub struct PAdicContext(Arc<ContextInner>);

impl PAdicContext {
    /// Context with the default valuation floor `-N`.
    pub fn new(p: u64, precision: u32) -> Result<Self> {
        Self::with_floor(p, precision, i64::from(precision))
    }

    pub fn with_floor(p: u64, precision: u32, floor: i64) -> Result<Self> {
        if !is_odd_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        if precision == 0 {
            return Err(Error::InvalidPrecision);
        }
        let base = BigUint::from(p);
        let mut powers = Vec::with_capacity(precision as usize + 1);
        let mut acc = BigUint::one();
        for _ in 0..=precision {
            powers.push(acc.clone());
            acc *= &base;
        }
        Ok(Self(Arc::new(ContextInner {
            p,
            precision,
            floor: floor.max(0),
            powers,
        })))
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    /// Working precision N.
    pub fn precision(&self) -> u32 {
        self.0.precision
    }

    /// The valuation floor V; nonzero scalars must have valuation `>= -V`.
    pub fn floor(&self) -> i64 {
        self.0.floor
    }

    /// `p^k` for `0 <= k <= N`.
    pub(crate) fn pow(&self, k: u32) -> &BigUint {
        &self.0.powers[k as usize]
    }

    /// `p^k` as a machine integer, if it fits.
    pub fn pow_u64(&self, k: u32) -> Option<u64> {
        self.0.p.checked_pow(k)
    }

    pub fn zero(&self) -> PAdicScalar {
        PAdicScalar::exact_zero(self)
    }

    pub fn one(&self) -> PAdicScalar {
        self.integer(1)
    }

    pub fn integer(&self, n: i64) -> PAdicScalar {
        PAdicScalar::from_bigint(&BigInt::from(n), self)
            .expect("integers never breach the valuation floor")
    }

    /// `(-1)^k`.
    pub fn sign(&self, k: u64) -> PAdicScalar {
        self.integer(if k.is_multiple_of(2) { 1 } else { -1 })
    }

    /// `p^k` as a scalar.
    pub fn p_power(&self, k: u32) -> PAdicScalar {
        PAdicScalar::from_parts(self, i64::from(k), BigUint::one(), self.precision())
    }

    pub fn ratio(&self, num: i64, den: i64) -> Result<PAdicScalar> {
        make_scalar(num, den, self)
    }

    fn same(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p
                && self.0.precision == other.0.precision
                && self.0.floor == other.0.floor)
    }
}

impl PartialEq for PAdicContext {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}

impl Eq for PAdicContext {}

impl fmt::Debug for PAdicContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PAdicContext")
            .field("p", &self.0.p)
            .field("precision", &self.0.precision)
            .field("floor", &self.0.floor)
            .finish()
    }
}

pub fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Repr {
    /// `known_to = None` is the exact zero; `Some(k)` is zero modulo `p^k`.
    Zero { known_to: Option<i64> },
    Unit {
        valuation: i64,
        unit: BigUint,
        digits: u32,
    },
}

/// An element of Q_p at working precision.
///
/// Equality compares values at the precision both sides are known to, so
/// `3/2` computed through a chain of operations equals `make_scalar(3, 2)`
/// even when the chain lost a few digits. Use [`PAdicScalar::canonical`] for
/// representation-level comparison.
#[derive(Clone)]
pub struct PAdicScalar {
    ctx: PAdicContext,
    repr: Repr,
}

/// Field operation selector for [`arithmetic`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn arithmetic(op: ArithOp, x: &PAdicScalar, y: &PAdicScalar) -> Result<PAdicScalar> {
    match op {
        ArithOp::Add => x.try_add(y),
        ArithOp::Sub => x.try_sub(y),
        ArithOp::Mul => x.try_mul(y),
        ArithOp::Div => x.try_div(y),
    }
}

/// Embeds `num / den` into Q_p. Powers of p in the denominator lower the
/// valuation, subject to the context's floor.
pub fn make_scalar(num: i64, den: i64, ctx: &PAdicContext) -> Result<PAdicScalar> {
    PAdicScalar::from_ratio(&BigInt::from(num), &BigInt::from(den), ctx)
}

/// Like [`make_scalar`] but rejects denominators divisible by p.
pub fn make_scalar_strict(num: i64, den: i64, ctx: &PAdicContext) -> Result<PAdicScalar> {
    if den != 0 && den.unsigned_abs().is_multiple_of(ctx.p()) {
        return Err(Error::DenominatorDivisibleByP(ctx.p()));
    }
    make_scalar(num, den, ctx)
}

pub fn padic_norm(x: &PAdicScalar) -> f64 {
    x.norm()
}

/// True iff `|x - y|_p <= p^-k`; `k` may not exceed the precision both
/// operands are known to.
pub fn congruent(x: &PAdicScalar, y: &PAdicScalar, k: i64) -> Result<bool> {
    x.check_ctx(y)?;
    let available = match (x.absolute_precision(), y.absolute_precision()) {
        (Some(a), Some(b)) => Some(min(a, b)),
        (a, b) => a.or(b),
    };
    if let Some(available) = available {
        if k > available {
            return Err(Error::PrecisionExceeded {
                requested: k,
                available,
            });
        }
    }
    let diff = x.try_sub(y)?;
    Ok(match diff.valuation() {
        None => true,
        Some(v) => v >= k,
    })
}

fn strip_p(n: &BigUint, p: &BigUint) -> (BigUint, i64) {
    let mut n = n.clone();
    let mut v = 0i64;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return (n, v);
        }
        n = q;
        v += 1;
    }
}

fn mod_inverse(u: &BigUint, modulus: &BigUint) -> BigUint {
    if modulus.is_one() {
        return BigUint::zero();
    }
    let a = BigInt::from(u.clone());
    let m = BigInt::from(modulus.clone());
    let eg = a.extended_gcd(&m);
    debug_assert!(eg.gcd.is_one(), "unit must be invertible");
    eg.x.mod_floor(&m)
        .to_biguint()
        .expect("mod_floor is nonnegative")
}

impl PAdicScalar {
    pub fn exact_zero(ctx: &PAdicContext) -> Self {
        Self {
            ctx: ctx.clone(),
            repr: Repr::Zero { known_to: None },
        }
    }

    /// Zero known only modulo `p^k`.
    pub fn zero_mod(ctx: &PAdicContext, k: i64) -> Self {
        Self {
            ctx: ctx.clone(),
            repr: Repr::Zero { known_to: Some(k) },
        }
    }

    /// `unit` must be coprime to p and nonzero.
    fn from_parts(ctx: &PAdicContext, valuation: i64, unit: BigUint, digits: u32) -> Self {
        let digits = digits.min(ctx.precision());
        debug_assert!(digits >= 1);
        let unit = unit % ctx.pow(digits);
        Self {
            ctx: ctx.clone(),
            repr: Repr::Unit {
                valuation,
                unit,
                digits,
            },
        }
    }

    fn checked_parts(ctx: &PAdicContext, valuation: i64, unit: BigUint, digits: u32) -> Result<Self> {
        if valuation < -ctx.floor() {
            return Err(Error::ValuationFloor {
                valuation,
                floor: ctx.floor(),
            });
        }
        Ok(Self::from_parts(ctx, valuation, unit, digits))
    }

    pub fn from_bigint(n: &BigInt, ctx: &PAdicContext) -> Result<Self> {
        Self::from_ratio(n, &BigInt::one(), ctx)
    }

    pub fn from_ratio(num: &BigInt, den: &BigInt, ctx: &PAdicContext) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(Self::exact_zero(ctx));
        }
        let p = BigUint::from(ctx.p());
        let (n_free, vn) = strip_p(num.magnitude(), &p);
        let (d_free, vd) = strip_p(den.magnitude(), &p);
        let modulus = ctx.pow(ctx.precision());
        let mut unit = (n_free % modulus) * mod_inverse(&(d_free % modulus), modulus) % modulus;
        let negative = (num.sign() == Sign::Minus) != (den.sign() == Sign::Minus);
        if negative {
            unit = modulus - unit;
        }
        Self::checked_parts(ctx, vn - vd, unit, ctx.precision())
    }

    /// Parses an integer or a `num/den` rational.
    pub fn parse(s: &str, ctx: &PAdicContext) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(s.to_string());
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        Self::from_ratio(&num, &den, ctx)
    }

    pub fn context(&self) -> &PAdicContext {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero { .. })
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero { known_to: None })
    }

    /// Valuation of a nonzero scalar; `None` for both kinds of zero.
    pub fn valuation(&self) -> Option<i64> {
        match &self.repr {
            Repr::Unit { valuation, .. } => Some(*valuation),
            Repr::Zero { .. } => None,
        }
    }

    pub fn unit(&self) -> Option<&BigUint> {
        match &self.repr {
            Repr::Unit { unit, .. } => Some(unit),
            Repr::Zero { .. } => None,
        }
    }

    /// Number of known digits of the unit part (0 for zeros).
    pub fn relative_precision(&self) -> u32 {
        match &self.repr {
            Repr::Unit { digits, .. } => *digits,
            Repr::Zero { .. } => 0,
        }
    }

    /// The value is known modulo `p^k`; `None` means exactly known.
    pub fn absolute_precision(&self) -> Option<i64> {
        match &self.repr {
            Repr::Zero { known_to } => *known_to,
            Repr::Unit {
                valuation, digits, ..
            } => Some(valuation + i64::from(*digits)),
        }
    }

    pub fn norm(&self) -> f64 {
        match self.valuation() {
            None => 0.0,
            Some(v) => (self.ctx.p() as f64).powi(-(v as i32)),
        }
    }

    /// `|x|_p <= 1`.
    pub fn is_integral(&self) -> bool {
        self.valuation().is_none_or(|v| v >= 0)
    }

    fn check_ctx(&self, other: &Self) -> Result<()> {
        if self.ctx.same(&other.ctx) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let ctx = &self.ctx;
        Ok(match (&self.repr, &other.repr) {
            (Repr::Zero { known_to: None }, _) => other.clone(),
            (_, Repr::Zero { known_to: None }) => self.clone(),
            (Repr::Zero { known_to: Some(a) }, Repr::Zero { known_to: Some(b) }) => {
                Self::zero_mod(ctx, min(*a, *b))
            }
            (Repr::Zero { known_to: Some(k) }, Repr::Unit { valuation, unit, digits })
            | (Repr::Unit { valuation, unit, digits }, Repr::Zero { known_to: Some(k) }) => {
                let abs = min(*k, valuation + i64::from(*digits));
                if abs <= *valuation {
                    Self::zero_mod(ctx, abs)
                } else {
                    Self::from_parts(ctx, *valuation, unit.clone(), (abs - valuation) as u32)
                }
            }
            (
                Repr::Unit {
                    valuation: v1,
                    unit: u1,
                    digits: d1,
                },
                Repr::Unit {
                    valuation: v2,
                    unit: u2,
                    digits: d2,
                },
            ) => {
                let w = min(*v1, *v2);
                let abs = min(v1 + i64::from(*d1), v2 + i64::from(*d2));
                // abs - w is at most the relative precision of the lower term.
                let m = (abs - w) as u32;
                let modulus = ctx.pow(m);
                let shifted = |v: i64, u: &BigUint| -> BigUint {
                    let shift = v - w;
                    if shift >= i64::from(m) {
                        BigUint::zero()
                    } else {
                        u * ctx.pow(shift as u32)
                    }
                };
                let s = (shifted(*v1, u1) + shifted(*v2, u2)) % modulus;
                if s.is_zero() {
                    Self::zero_mod(ctx, abs)
                } else {
                    let (unit, t) = strip_p(&s, &BigUint::from(ctx.p()));
                    let v = w + t;
                    Self::from_parts(ctx, v, unit, (abs - v) as u32)
                }
            }
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.negate())
    }

    pub fn negate(&self) -> Self {
        match &self.repr {
            Repr::Zero { .. } => self.clone(),
            Repr::Unit {
                valuation,
                unit,
                digits,
            } => Self::from_parts(&self.ctx, *valuation, self.ctx.pow(*digits) - unit, *digits),
        }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let ctx = &self.ctx;
        match (&self.repr, &other.repr) {
            (Repr::Zero { known_to: None }, _) | (_, Repr::Zero { known_to: None }) => {
                Ok(Self::exact_zero(ctx))
            }
            (Repr::Zero { known_to: Some(a) }, Repr::Zero { known_to: Some(b) }) => {
                Ok(Self::zero_mod(ctx, a + b))
            }
            (Repr::Zero { known_to: Some(k) }, Repr::Unit { valuation, .. })
            | (Repr::Unit { valuation, .. }, Repr::Zero { known_to: Some(k) }) => {
                Ok(Self::zero_mod(ctx, k + valuation))
            }
            (
                Repr::Unit {
                    valuation: v1,
                    unit: u1,
                    digits: d1,
                },
                Repr::Unit {
                    valuation: v2,
                    unit: u2,
                    digits: d2,
                },
            ) => {
                let d = min(*d1, *d2);
                Self::checked_parts(ctx, v1 + v2, u1 * u2, d)
            }
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        match &self.repr {
            Repr::Zero { .. } => Err(Error::DivisionByZero),
            Repr::Unit {
                valuation,
                unit,
                digits,
            } => Self::checked_parts(
                &self.ctx,
                -valuation,
                mod_inverse(unit, self.ctx.pow(*digits)),
                *digits,
            ),
        }
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        self.try_mul(&other.inverse()?)
    }

    pub fn pow(&self, mut e: u32) -> Result<Self> {
        let mut base = self.clone();
        let mut acc = self.ctx.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.try_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.try_mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Multiplies by `(-1)^k`.
    pub fn signed(&self, k: u64) -> Self {
        if k.is_multiple_of(2) {
            self.clone()
        } else {
            self.negate()
        }
    }

    /// Multiplies by `p^k`.
    pub fn shift(&self, k: i64) -> Result<Self> {
        match &self.repr {
            Repr::Zero { known_to: None } => Ok(self.clone()),
            Repr::Zero { known_to: Some(a) } => Ok(Self::zero_mod(&self.ctx, a + k)),
            Repr::Unit {
                valuation,
                unit,
                digits,
            } => Self::checked_parts(&self.ctx, valuation + k, unit.clone(), *digits),
        }
    }

    /// `x mod p^k` for `x` in Z_p known to at least `k` digits.
    pub fn residue(&self, k: u32) -> Result<BigUint> {
        let k_i = i64::from(k);
        if let Some(abs) = self.absolute_precision() {
            if abs < k_i {
                return Err(Error::PrecisionExceeded {
                    requested: k_i,
                    available: abs,
                });
            }
        }
        match &self.repr {
            Repr::Zero { .. } => Ok(BigUint::zero()),
            Repr::Unit {
                valuation, unit, ..
            } => {
                if *valuation < 0 {
                    return Err(Error::NotIntegral(*valuation));
                }
                if *valuation >= k_i {
                    return Ok(BigUint::zero());
                }
                let p = BigUint::from(self.ctx.p());
                Ok(unit * p.pow(*valuation as u32) % p.pow(k))
            }
        }
    }

    /// Residue modulo `p^k` as a machine integer.
    pub fn residue_u64(&self, k: u32) -> Result<u64> {
        self.residue(k)?
            .to_u64()
            .ok_or_else(|| Error::Precondition(format!("p^{k} does not fit in 64 bits")))
    }

    /// Base-p digits `(exponent, digit)` of the known part, lowest first.
    pub fn digits(&self) -> Vec<(i64, u64)> {
        match &self.repr {
            Repr::Zero { .. } => Vec::new(),
            Repr::Unit {
                valuation,
                unit,
                digits,
            } => {
                let p = BigUint::from(self.ctx.p());
                let mut rest = unit.clone();
                let mut out = Vec::with_capacity(*digits as usize);
                for i in 0..*digits {
                    let (q, r) = rest.div_rem(&p);
                    out.push((valuation + i64::from(i), r.to_u64().unwrap_or(0)));
                    rest = q;
                }
                out
            }
        }
    }

    /// `"p^v * u mod p^d"`.
    pub fn canonical(&self) -> String {
        let p = self.ctx.p();
        match &self.repr {
            Repr::Zero { known_to: None } => "0".to_string(),
            Repr::Zero { known_to: Some(k) } => format!("0 mod {p}^{k}"),
            Repr::Unit {
                valuation,
                unit,
                digits,
            } => format!("{p}^{valuation} * {unit} mod {p}^{digits}"),
        }
    }

    /// Integer (or `num/p^k`) representative, parseable by [`PAdicScalar::parse`].
    pub fn to_rational_string(&self) -> String {
        match &self.repr {
            Repr::Zero { .. } => "0".to_string(),
            Repr::Unit {
                valuation, unit, ..
            } => {
                let p = BigUint::from(self.ctx.p());
                match valuation.cmp(&0) {
                    Ordering::Less => format!("{unit}/{}", p.pow((-valuation) as u32)),
                    _ => format!("{}", unit * p.pow(*valuation as u32)),
                }
            }
        }
    }
}

impl fmt::Display for PAdicScalar {
    /// Digit expansion `d0 + d1*p + ... + O(p^k)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.ctx.p();
        if self.is_exact_zero() {
            return f.write_str("0");
        }
        let mut terms: Vec<String> = self
            .digits()
            .into_iter()
            .filter(|&(_, d)| d != 0)
            .map(|(e, d)| match e {
                0 => format!("{d}"),
                1 => format!("{d}*{p}"),
                _ => format!("{d}*{p}^{e}"),
            })
            .collect();
        let abs = self.absolute_precision().unwrap_or(0);
        terms.push(format!("O({p}^{abs})"));
        f.write_str(&terms.join(" + "))
    }
}

impl PartialEq for PAdicScalar {
    fn eq(&self, other: &Self) -> bool {
        self.try_sub(other).is_ok_and(|d| d.is_zero())
    }
}

impl fmt::Debug for PAdicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PAdicScalar({})", self.canonical())
    }
}

impl Add for &PAdicScalar {
    type Output = PAdicScalar;

    /// Panics if the operands come from different contexts.
    fn add(self, rhs: Self) -> PAdicScalar {
        self.try_add(rhs).expect("operands must share a p-adic context")
    }
}

impl Sub for &PAdicScalar {
    type Output = PAdicScalar;

    fn sub(self, rhs: Self) -> PAdicScalar {
        self.try_sub(rhs).expect("operands must share a p-adic context")
    }
}

impl Neg for &PAdicScalar {
    type Output = PAdicScalar;

    fn neg(self) -> PAdicScalar {
        self.negate()
    }
}

/// Largest of a set of p-adic norms, 0 for an empty set.
pub fn max_norm<'a>(xs: impl IntoIterator<Item = &'a PAdicScalar>) -> f64 {
    xs.into_iter().map(PAdicScalar::norm).fold(0.0, f64::max)
}

/// Minimum valuation among nonzero entries; `None` if all are zero.
pub fn min_valuation<'a>(xs: impl IntoIterator<Item = &'a PAdicScalar>) -> Option<i64> {
    xs.into_iter().filter_map(PAdicScalar::valuation).reduce(min)
}
