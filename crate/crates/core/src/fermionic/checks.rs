//! Finite-level verification of the measure-theoretic properties of
//! `mu_{f,-1}`: child-sum additivity, the strong Cauchy bound, the
//! derivative `lim mu(a + p^n Z_p)`, the congruence
//! `mu_{P,-1}(a + p^n Z_p) = (-1)^a P(a) (mod p^n)`, integration against
//! `mu_{P,-1}`, and the decomposition of a strongly fermionic measure into
//! a function-induced part plus a remainder.

use std::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::padic::{congruent, PAdicScalar};
use crate::udfunc::{Polynomial, StepFunction, UDFunction};

use super::integral::integrate;
use super::measure::{level_delta, measure_combine, measure_value, Cylinder, FermionicMeasure, LevelDelta};
use super::report::{CheckReport, Status, Witness};

/// Default number of p-adic digits given up when comparing a finite-level
/// Riemann sum with its limit.
pub const DEFAULT_SLACK: u32 = 1;

fn ensure_level(mu: &FermionicMeasure, n: u32) -> Result<()> {
    match mu.max_level() {
        Some(depth) if n > depth => Err(Error::LevelBeyondTable {
            requested: n,
            available: depth,
        }),
        _ => Ok(()),
    }
}

/// `mu(c) = sum_j mu((a + j p^n) + p^(n+1) Z_p)`.
pub fn additivity_check(mu: &FermionicMeasure, c: Cylinder) -> Result<CheckReport> {
    let ctx = mu.context();
    ensure_level(mu, c.level + 1)?;
    let whole = measure_value(mu, c)?;
    let parts = c
        .children(ctx)?
        .into_iter()
        .try_fold(ctx.zero(), |acc, child| acc.try_add(&measure_value(mu, child)?))?;
    let residual = whole.try_sub(&parts)?;
    let mut report = CheckReport::new("additivity", ctx).param("cylinder", c);
    report.status = Status::from_bool(residual.is_zero());
    report.constants.insert("residual_norm".into(), residual.norm());
    report.witness = Some(Witness {
        a: c.base,
        n: c.level,
        residual_norm: residual.norm(),
    });
    report.levels = vec![c.level, c.level + 1];
    Ok(report)
}

/// Sign-normalized level-to-level differences `delta_n` for each `n` in
/// `levels`.
pub(crate) fn strong_profile(
    mu: &FermionicMeasure,
    levels: RangeInclusive<u32>,
    exec: Execution,
) -> Result<Vec<(u32, LevelDelta)>> {
    let (first, last) = (*levels.start(), *levels.end());
    if first > last {
        return Ok(Vec::new());
    }
    ensure_level(mu, last + 1)?;
    let ctx = mu.context();
    let values = (first..=last + 1)
        .map(|n| mu.level_values(n, exec))
        .collect::<Result<Vec<_>>>()?;
    values
        .windows(2)
        .zip(first..)
        .map(|(pair, n)| Ok((n, level_delta(ctx, &pair[0], &pair[1])?)))
        .collect()
}

/// Fits `delta_n <= c p^-n` over `levels`. The check passes when the
/// per-level constants `delta_n p^n` do not grow from level 1 on.
pub fn strong_delta(mu: &FermionicMeasure, levels: RangeInclusive<u32>) -> Result<CheckReport> {
    strong_delta_with(mu, levels, Execution::default())
}

pub fn strong_delta_with(
    mu: &FermionicMeasure,
    levels: RangeInclusive<u32>,
    exec: Execution,
) -> Result<CheckReport> {
    let ctx = mu.context();
    let p = ctx.p() as f64;
    let profile = strong_profile(mu, levels.clone(), exec)?;
    let mut report = CheckReport::new("strong", ctx)
        .param("levels", format!("{}..={}", levels.start(), levels.end()));
    let mut c = 0.0f64;
    let mut monotone = true;
    let mut previous: Option<f64> = None;
    let mut worst: Option<Witness> = None;
    for (n, d) in &profile {
        let cn = d.delta * p.powi(*n as i32);
        report.constants.insert(format!("delta_{n}"), d.delta);
        report.constants.insert(format!("c_{n}"), cn);
        if *n >= 1 {
            if let Some(prev) = previous {
                monotone &= cn <= prev;
            }
            previous = Some(cn);
        }
        if worst.is_none() || cn > c {
            worst = Some(Witness {
                a: d.parent,
                n: *n,
                residual_norm: d.delta,
            });
        }
        c = c.max(cn);
    }
    report.constants.insert("c".into(), c);
    report.status = Status::from_bool(c.is_finite() && monotone);
    report.witness = worst;
    report.levels = profile.iter().map(|(n, _)| *n).collect();
    Ok(report)
}

/// Approximates the derivative `f_mu(a) = lim_n mu(a + p^n Z_p)` with a
/// certified bound `C p^-n`, `C` fitted from the strong-measure profile.
pub struct DerivativeEstimator<'a> {
    mu: &'a FermionicMeasure,
    constants: Vec<f64>,
}

impl<'a> DerivativeEstimator<'a> {
    /// Fits constants for levels `0..=max_level` (capped by the measure's depth).
    pub fn new(mu: &'a FermionicMeasure, max_level: u32) -> Result<Self> {
        let top = match mu.max_level() {
            Some(0) => None,
            Some(depth) => Some(max_level.min(depth - 1)),
            None => Some(max_level),
        };
        let p = mu.context().p() as f64;
        let constants = match top {
            Some(top) => strong_profile(mu, 0..=top, Execution::default())?
                .into_iter()
                .map(|(n, d)| d.delta * p.powi(n as i32))
                .collect(),
            None => Vec::new(),
        };
        Ok(Self { mu, constants })
    }

    /// `((-1)^(a - a_n) mu(a_n + p^n Z_p), C p^-n)` with `a_n = a mod p^n`.
    pub fn at(&self, a: u64, n: u32) -> Result<(PAdicScalar, f64)> {
        if n == 0 {
            return Err(Error::Precondition("derivative level must be at least 1".into()));
        }
        let ctx = self.mu.context();
        let c = Cylinder::containing(a, n, ctx)?;
        let value = measure_value(self.mu, c)?.signed(a - c.base);
        let fitted = self
            .constants
            .iter()
            .take(n as usize + 1)
            .copied()
            .fold(0.0, f64::max);
        Ok((value, fitted * (ctx.p() as f64).powi(-(n as i32))))
    }
}

pub fn rn_derivative(mu: &FermionicMeasure, a: u64, n: u32) -> Result<(PAdicScalar, f64)> {
    DerivativeEstimator::new(mu, n)?.at(a, n)
}

/// `mu_{P,-1}(a + p^n Z_p) = (-1)^a P(a) E_0 (mod p^n)` for `P` with
/// coefficients in Z_p.
pub fn congruence_check(poly: &Polynomial, c: Cylinder) -> Result<CheckReport> {
    if !poly.has_integral_coefficients() {
        return Err(Error::Precondition(
            "congruence check needs polynomial coefficients in Z_p".into(),
        ));
    }
    let ctx = poly.context();
    let mu = FermionicMeasure::induced(poly.clone());
    let lhs = measure_value(&mu, c)?;
    let rhs = poly.evaluate_int(c.base)?.signed(c.base);
    let ok = congruent(&lhs, &rhs, i64::from(c.level))?;
    let residual = lhs.try_sub(&rhs)?.norm();
    let mut report = CheckReport::new("congruence", ctx).param("cylinder", c);
    report.status = Status::from_bool(ok);
    report.constants.insert("residual_norm".into(), residual);
    report.witness = Some(Witness {
        a: c.base,
        n: c.level,
        residual_norm: residual,
    });
    report.levels = vec![c.level];
    Ok(report)
}

/// Level-n Riemann sum `sum_{i < p^n} g(i) mu(i + p^n Z_p)`.
pub fn integrate_against(g: &UDFunction, mu: &FermionicMeasure, n: u32) -> Result<PAdicScalar> {
    integrate_against_with(g, mu, n, Execution::default())
}

pub fn integrate_against_with(
    g: &UDFunction,
    mu: &FermionicMeasure,
    n: u32,
    exec: Execution,
) -> Result<PAdicScalar> {
    ensure_level(mu, n)?;
    let ctx = mu.context();
    let size = ctx.pow_u64(n).ok_or(Error::InvalidCylinder { a: 0, n })?;
    exec::try_sum(ctx, size, exec, |i| {
        g.evaluate_int(i)?
            .try_mul(&measure_value(mu, Cylinder { base: i, level: n })?)
    })
}

fn integer_valued(f: &UDFunction) -> Result<bool> {
    let degree = f.degree_bound().ok_or(Error::NotFinitelyExpandable)?;
    Ok(f.mahler_coeffs(degree + 1)?.iter().all(PAdicScalar::is_integral))
}

/// `int g d mu_{P,-1} = int g P d mu_{-1}` at level `n`, compared modulo
/// `p^(n - slack)`, together with the strong-measure bound on `mu_{P,-1}`
/// over levels `< n`.
pub fn verify_theorem1(poly: &Polynomial, g: &UDFunction, n: u32, slack: u32) -> Result<CheckReport> {
    let pf = UDFunction::from(poly.clone());
    if !integer_valued(&pf)? || !integer_valued(g)? {
        return Err(Error::Precondition(
            "P and g must map Z_p into Z_p (integral Mahler coefficients)".into(),
        ));
    }
    let ctx = poly.context();
    let mu = FermionicMeasure::induced(poly.clone());
    let lhs = integrate_against(g, &mu, n)?;
    let rhs = integrate(&g.product(&pf)?)?;
    let modulus = i64::from(n) - i64::from(slack);
    let identity = congruent(&lhs, &rhs, modulus)?;
    let residual = lhs.try_sub(&rhs)?.norm();

    let mut report = CheckReport::new("theorem1", ctx)
        .param("level", n)
        .param("slack", slack);
    let strong = if n >= 1 {
        Some(strong_delta(&mu, 0..=n - 1)?)
    } else {
        None
    };
    report.status = Status::from_bool(identity && strong.as_ref().is_none_or(CheckReport::passed));
    report.constants.insert("residual_norm".into(), residual);
    if let Some(strong) = &strong {
        report.constants.insert("c".into(), strong.constant("c").unwrap_or(0.0));
    }
    report.witness = Some(Witness {
        a: 0,
        n,
        residual_norm: residual,
    });
    report.levels = (0..=n).collect();
    Ok(report)
}

/// Result of [`decompose`]: `mu = mu1 + mu2`.
pub struct Decomposition {
    /// `mu_{g,-1}` with `g` the step function `(-1)^a h(a)` on residues mod p^L.
    pub mu1: FermionicMeasure,
    pub mu2: FermionicMeasure,
    /// `h(a) = mu(a + p^L Z_p)` for `a < p^L`.
    pub derivative: Vec<PAdicScalar>,
    pub report: CheckReport,
}

/// Splits a strongly fermionic measure into the measure induced by its
/// level-L derivative table and a remainder, and measures the remainder on
/// every cylinder up to level L.
pub fn decompose(mu: &FermionicMeasure, level: u32) -> Result<Decomposition> {
    if level == 0 {
        return Err(Error::Precondition("decomposition level must be at least 1".into()));
    }
    let ctx = mu.context();
    let exec = Execution::default();
    let strong = strong_delta_with(mu, 0..=level - 1, exec)?;
    if !strong.passed() {
        return Err(Error::Precondition("input is not strongly fermionic".into()));
    }
    let last_delta = strong.constant(&format!("delta_{}", level - 1)).unwrap_or(0.0);
    if last_delta >= 1.0 {
        return Err(Error::Precondition(format!(
            "derivative table not stabilized at level {level}"
        )));
    }

    let derivative = mu.level_values(level, exec)?;
    let step_values = derivative
        .iter()
        .enumerate()
        .map(|(a, h)| h.signed(a as u64))
        .collect();
    let g = StepFunction::new(ctx, level, step_values)?;
    let mu1 = FermionicMeasure::induced(g);
    let mu2 = measure_combine(ctx.one(), mu.clone(), ctx.integer(-1), mu1.clone())?;

    let p = ctx.p() as f64;
    let mut exact = true;
    let mut bound_k = 0.0f64;
    let mut decay_c = 0.0f64;
    let mut worst: Option<Witness> = None;
    for n in 0..=level {
        let m = mu.level_values(n, exec)?;
        let m1 = mu1.level_values(n, exec)?;
        let m2 = mu2.level_values(n, exec)?;
        for (a, ((x, y), z)) in m.iter().zip(&m1).zip(&m2).enumerate() {
            exact &= x.try_sub(&y.try_add(z)?)?.is_zero();
            let norm = z.norm();
            bound_k = bound_k.max(norm);
            let scaled = norm * p.powi(n as i32);
            if scaled > decay_c || worst.is_none() {
                decay_c = decay_c.max(scaled);
                worst = Some(Witness {
                    a: a as u64,
                    n,
                    residual_norm: norm,
                });
            }
        }
    }

    let mut report = CheckReport::new("decompose", ctx).param("level", level);
    report.status = Status::from_bool(exact);
    report.constants.insert("K".into(), bound_k);
    report.constants.insert("C".into(), decay_c);
    report.constants.insert("c".into(), strong.constant("c").unwrap_or(0.0));
    report.witness = worst;
    report.levels = (0..=level).collect();
    Ok(Decomposition {
        mu1,
        mu2,
        derivative,
        report,
    })
}
