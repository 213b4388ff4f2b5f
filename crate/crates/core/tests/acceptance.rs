//! Acceptance gate: runs every criterion at its stated tolerance and prints
//! one PASS/FAIL line each. Exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use padic_fermionic::fermionic::{
    fermionic_sum_with, mahler_basis_integral, DerivativeEstimator, DEFAULT_BUDGET, DEFAULT_SLACK,
};
use padic_fermionic::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

fn ctx(p: u64) -> PAdicContext {
    PAdicContext::new(p, DEFAULT_PRECISION).unwrap()
}

fn err(e: Error) -> String {
    e.to_string()
}

/// Monomials and binomial coefficients `binomial(x, k)` of degree at most `d`.
fn corpus(c: &PAdicContext, d: usize) -> Vec<(String, Polynomial)> {
    let mut out = Vec::new();
    for k in 0..=d {
        out.push((format!("x^{k}"), Polynomial::monomial(c, k)));
        if k >= 2 {
            out.push((format!("C(x,{k})"), Polynomial::binomial(c, k).unwrap()));
        }
    }
    out
}

fn cylinders(c: &PAdicContext, n: u32) -> impl Iterator<Item = Cylinder> + '_ {
    (0..c.pow_u64(n).unwrap()).map(move |a| Cylinder::new(a, n, c).unwrap())
}

fn nu(c: &PAdicContext, depth: u32) -> FermionicMeasure {
    let levels = (0..=depth)
        .map(|n| vec![c.p_power(n); c.pow_u64(n).unwrap() as usize])
        .collect();
    FermionicMeasure::Tabulated(MeasureTable::new(c, "tabulated", levels).unwrap())
}

fn euler_partial_sums() -> Outcome {
    let mut checked = 0;
    for p in [3, 5, 7] {
        let c = ctx(p);
        for k in 0..=8 {
            let f: UDFunction = Polynomial::monomial(&c, k).into();
            let e = euler_number(k, &c).map_err(err)?;
            let s4 = fermionic_sum_with(&f, 4, DEFAULT_BUDGET, Execution::Parallel).map_err(err)?;
            let s5 = fermionic_sum_with(&f, 5, DEFAULT_BUDGET, Execution::Parallel).map_err(err)?;
            ensure!(congruent(&e, &s5, 3).map_err(err)?, "E_{k} vs S_5 at p={p}");
            ensure!(congruent(&s4, &s5, 3).map_err(err)?, "S_4 vs S_5 for x^{k} at p={p}");
            checked += 1;
        }
    }
    let c = ctx(5);
    let e1 = euler_number(1, &c).map_err(err)?.residue_u64(2).map_err(err)?;
    let e3 = euler_number(3, &c).map_err(err)?.residue_u64(2).map_err(err)?;
    ensure!(e1 == 12 && e3 == 19, "witnesses E_1 = {e1}, E_3 = {e3} mod 25");
    Ok(format!("{checked} Euler numbers; E_1 = 12, E_3 = 19 mod 25"))
}

fn mahler_constant() -> Outcome {
    let mut checked = 0;
    for p in [3, 5] {
        let c = ctx(p);
        let minus_half = c.ratio(-1, 2).map_err(err)?;
        for n in 0..=6usize {
            let mut coeffs = vec![c.zero(); n + 1];
            coeffs[n] = c.one();
            let f: UDFunction = MahlerFunction::new(&c, coeffs).into();
            let brute = fermionic_sum_with(&f, 5, DEFAULT_BUDGET, Execution::Parallel).map_err(err)?;
            let expected = minus_half.pow(n as u32).map_err(err)?;
            ensure!(congruent(&brute, &expected, 3).map_err(err)?, "binomial(x,{n}) at p={p}");
            ensure!(mahler_basis_integral(n, &c).map_err(err)? == expected, "closed form n={n}");
            checked += 1;
        }
    }
    let w = mahler_basis_integral(2, &ctx(3)).map_err(err)?.residue_u64(2).map_err(err)?;
    ensure!(w == 7, "witness 1/4 = {w} mod 9");
    Ok(format!("{checked} basis integrals; 1/4 = 7 mod 9"))
}

fn congruence_display() -> Outcome {
    let mut checked = 0;
    for p in [3, 5, 7] {
        let c = ctx(p);
        for k in 0..=5 {
            let poly = Polynomial::monomial(&c, k);
            for n in 0..=4 {
                for cyl in cylinders(&c, n) {
                    let report = congruence_check(&poly, cyl).map_err(err)?;
                    ensure!(report.passed(), "x^{k} on {cyl} at p={p}");
                    checked += 1;
                }
            }
        }
    }
    let c = ctx(3);
    let mu = FermionicMeasure::induced(Polynomial::monomial(&c, 2));
    let w = measure_value(&mu, Cylinder::new(2, 2, &c).unwrap()).map_err(err)?;
    ensure!(w == c.integer(-14), "witness {}", w.to_rational_string());
    ensure!(w.residue_u64(2).map_err(err)? == 4, "witness residue");
    Ok(format!("{checked} cylinders; mu_(x^2)(2 + 9Z_3) = -14 = 4 mod 9"))
}

fn child_sum_additivity() -> Outcome {
    let mut checked = 0;
    for p in [3, 5, 7] {
        let c = ctx(p);
        let mut functions = corpus(&c, 4);
        functions.push(("1-3x+2x^2+x^4/2".into(), Polynomial::new(&c, vec![
            c.one(), c.integer(-3), c.integer(2), c.zero(), c.ratio(1, 2).unwrap(),
        ])));
        for (name, poly) in functions {
            let mu = FermionicMeasure::induced(poly);
            for n in 0..=3 {
                for cyl in cylinders(&c, n) {
                    let report = additivity_check(&mu, cyl).map_err(err)?;
                    ensure!(report.passed(), "{name} on {cyl} at p={p}");
                    checked += 1;
                }
            }
        }
    }
    let c = ctx(3);
    let mu = FermionicMeasure::induced(Polynomial::monomial(&c, 1));
    let values: Vec<_> = [(1, 1), (1, 2), (4, 2), (7, 2)]
        .iter()
        .map(|&(a, n)| measure_value(&mu, Cylinder::new(a, n, &c).unwrap()).unwrap())
        .collect();
    let expected = [(1, 2), (7, 2), (-1, 2), (-5, 2)];
    for (v, (num, den)) in values.iter().zip(expected) {
        ensure!(*v == c.ratio(num, den).unwrap(), "witness {}", v.to_rational_string());
    }
    Ok(format!("{checked} cylinders with zero residual; 1/2 = 7/2 - 1/2 - 5/2"))
}

fn theorem_one() -> Outcome {
    let mut checked = 0;
    let mut worst_c = 0.0f64;
    for p in [3, 5] {
        let c = ctx(p);
        let functions = corpus(&c, 4);
        for (pname, poly) in &functions {
            let strong = strong_delta(&FermionicMeasure::induced(poly.clone()), 0..=3).map_err(err)?;
            let fitted = strong.constant("c").unwrap_or(f64::INFINITY);
            ensure!(strong.passed() && fitted.is_finite(), "strong_delta for {pname} at p={p}");
            worst_c = worst_c.max(fitted);
            for (gname, g) in &functions {
                let g: UDFunction = g.clone().into();
                for n in [2, 3] {
                    let report = verify_theorem1(poly, &g, n, DEFAULT_SLACK).map_err(err)?;
                    ensure!(report.passed(), "P = {pname}, g = {gname}, n = {n}, p = {p}");
                    checked += 1;
                }
            }
        }
    }
    let c = ctx(5);
    let x = Polynomial::monomial(&c, 1);
    let lhs = integrate_against(&x.clone().into(), &FermionicMeasure::induced(x.clone()), 2).map_err(err)?;
    let rhs = integrate(&x.mul(&x).map_err(err)?.into()).map_err(err)?;
    ensure!(lhs == c.integer(150) && rhs.is_zero(), "witness LHS {} RHS {}", lhs.to_rational_string(), rhs.to_rational_string());
    ensure!(congruent(&lhs, &rhs, 2).map_err(err)?, "witness mod 25");
    Ok(format!("{checked} instances; max c = {worst_c}; LHS 150 = RHS 0 mod 25"))
}

fn derivative_formula() -> Outcome {
    let mut checked = 0;
    for p in [3, 5] {
        let c = ctx(p);
        for (name, poly) in corpus(&c, 4) {
            let mu = FermionicMeasure::induced(poly.clone());
            let estimator = DerivativeEstimator::new(&mu, 4).map_err(err)?;
            for a in 0..p * p {
                let exact = poly.evaluate_int(a).map_err(err)?.signed(a);
                for n in 1..=4 {
                    let (value, bound) = estimator.at(a, n).map_err(err)?;
                    ensure!(
                        congruent(&value, &exact, i64::from(n) - 1).map_err(err)?,
                        "{name} at a={a}, n={n}, p={p}"
                    );
                    let residual = value.try_sub(&exact).map_err(err)?.norm();
                    ensure!(residual <= bound, "{name} at a={a}, n={n}, p={p}: residual {residual} > bound {bound}");
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} derivative estimates within their bounds"))
}

fn decomposition() -> Outcome {
    const LEVEL: u32 = 3;
    let mut checked = 0;
    for p in [3, 5] {
        let c = ctx(p);
        for (name, poly) in corpus(&c, 4) {
            let pure = FermionicMeasure::induced(poly);
            let d = decompose(&pure, LEVEL).map_err(err)?;
            ensure!(d.report.passed(), "reconstruction of {name} at p={p}");
            for n in 0..=LEVEL {
                for cyl in cylinders(&c, n) {
                    ensure!(d.mu2.value(cyl).map_err(err)?.is_zero(), "mu2 nonzero for {name} on {cyl}");
                }
            }

            let perturbed = measure_combine(c.one(), pure, c.one(), nu(&c, LEVEL + 1)).map_err(err)?;
            let d = decompose(&perturbed, LEVEL).map_err(err)?;
            ensure!(d.report.passed(), "reconstruction of {name} + nu at p={p}");
            let k = d.report.constant("K").unwrap_or(f64::INFINITY);
            ensure!(k <= 1.0, "K = {k} for {name} + nu at p={p}");
            for n in 0..=LEVEL {
                let limit = (p as f64).powi(-(n as i32));
                for cyl in cylinders(&c, n) {
                    let norm = d.mu2.value(cyl).map_err(err)?.norm();
                    ensure!(norm <= limit, "|mu2({cyl})| = {norm} for {name} + nu at p={p}");
                }
            }
            checked += 2;
        }
    }
    Ok(format!("{checked} decompositions at level {LEVEL}"))
}

fn truncation_bound() -> Outcome {
    let c = ctx(5);
    let coeffs: Vec<_> = (0..10).map(|n| c.p_power(n)).collect();
    let f = MahlerFunction::new(&c, coeffs.clone());
    let mut worst = 0.0f64;
    for m in 1..=coeffs.len() {
        let (fm, bound) = f.truncate(m).map_err(err)?;
        let mut sup = 0.0f64;
        for x in 0..625 {
            let diff = f.evaluate_int(x).map_err(err)?.try_sub(&fm.evaluate_int(x).map_err(err)?).map_err(err)?;
            sup = sup.max(diff.norm());
        }
        ensure!(sup <= bound, "m = {m}: sup {sup} > bound {bound}");
        if m == 3 {
            ensure!(bound <= 3.0 * 5f64.powi(-3), "bound for f_3 is {bound}");
            worst = sup;
        }
    }
    Ok(format!("||f - f_3|| = {worst} <= 3*5^-3 over x < 625"))
}

fn random_bigint(rng: &mut StdRng) -> BigInt {
    let digits: u32 = rng.gen_range(1..=30);
    let mut n = BigInt::from(0);
    for _ in 0..digits {
        n = n * 10 + rng.gen_range(0..10);
    }
    if rng.gen_bool(0.5) {
        -n
    } else {
        n
    }
}

fn random_scalar(rng: &mut StdRng, c: &PAdicContext) -> PAdicScalar {
    loop {
        let num = random_bigint(rng);
        let den = random_bigint(rng);
        if let Ok(x) = PAdicScalar::from_ratio(&num, &den, c) {
            return x;
        }
    }
}

fn padic_algebra() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_f00d);
    let contexts = [ctx(3), ctx(5), ctx(7)];
    let trials = 10_000;
    for i in 0..trials {
        let c = &contexts[i % 3];
        let (x, y) = (random_scalar(&mut rng, c), random_scalar(&mut rng, c));
        let sum = x.try_add(&y).map_err(err)?;
        ensure!(sum.norm() <= x.norm().max(y.norm()), "ultrametric: {x} + {y}");
        let prod = x.try_mul(&y).map_err(err)?;
        if let (Some(vx), Some(vy)) = (x.valuation(), y.valuation()) {
            ensure!(prod.valuation() == Some(vx + vy), "multiplicativity: {x} * {y}");
            let inv = x.inverse().map_err(err)?;
            ensure!(x.try_mul(&inv).map_err(err)? == c.one(), "inverse: {x}");
            ensure!(inv.inverse().map_err(err)? == x, "double inverse: {x}");
        } else {
            ensure!(prod.is_zero(), "zero product: {x} * {y}");
        }
    }
    Ok(format!("{trials} seeded trials at N = {DEFAULT_PRECISION}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 euler numbers vs partial sums", euler_partial_sums),
        ("2 mahler integral constant", mahler_constant),
        ("3 congruence display", congruence_display),
        ("4 child-sum additivity", child_sum_additivity),
        ("5 theorem 1", theorem_one),
        ("6 derivative formula", derivative_formula),
        ("7 decomposition", decomposition),
        ("8 truncation bound", truncation_bound),
        ("9 p-adic algebra", padic_algebra),
    ];
    let mut failures = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {name} ({secs:.2}s): {detail}"),
            Err(detail) => {
                failures += 1;
                println!("FAIL criterion {name} ({secs:.2}s): {detail}");
            }
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
