use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::padic::{PAdicContext, PAdicScalar};
use crate::udfunc::UDFunction;

use super::integral::integrate;

/// The cylinder set `a + p^n Z_p` with `0 <= a < p^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cylinder {
    pub base: u64,
    pub level: u32,
}

impl Cylinder {
    pub fn new(base: u64, level: u32, ctx: &PAdicContext) -> Result<Self> {
        match ctx.pow_u64(level) {
            Some(m) if base < m => Ok(Self { base, level }),
            _ => Err(Error::InvalidCylinder { a: base, n: level }),
        }
    }

    /// The cylinder of level `n` containing the integer `x`.
    pub fn containing(x: u64, level: u32, ctx: &PAdicContext) -> Result<Self> {
        let m = ctx
            .pow_u64(level)
            .ok_or(Error::InvalidCylinder { a: x, n: level })?;
        Ok(Self {
            base: x % m,
            level,
        })
    }

    /// The `p` sub-cylinders `(a + j p^n) + p^(n+1) Z_p`.
    pub fn children(&self, ctx: &PAdicContext) -> Result<Vec<Cylinder>> {
        let step = ctx.pow_u64(self.level).expect("valid cylinder");
        (0..ctx.p())
            .map(|j| Cylinder::new(self.base + j * step, self.level + 1, ctx))
            .collect()
    }

    /// Parses `"a,n"`.
    pub fn parse(s: &str, ctx: &PAdicContext) -> Result<Self> {
        let bad = || Error::Parse(s.to_string());
        let (a, n) = s.split_once(',').ok_or_else(bad)?;
        let a = a.trim().parse().map_err(|_| bad())?;
        let n = n.trim().parse().map_err(|_| bad())?;
        Self::new(a, n, ctx)
    }
}

impl fmt::Display for Cylinder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.base, self.level)
    }
}

/// Values of a measure on every cylinder of levels `0..=L`.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureTable {
    ctx: PAdicContext,
    kind: String,
    levels: Vec<Vec<PAdicScalar>>,
}

impl MeasureTable {
    /// Builds a table, checking its shape and the weak-measure Cauchy
    /// condition: the sign-normalized level-to-level differences
    /// `delta_n` must be nonincreasing for `n >= 1`.
    pub fn new(ctx: &PAdicContext, kind: &str, levels: Vec<Vec<PAdicScalar>>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::MalformedTable("no levels".into()));
        }
        for (n, row) in levels.iter().enumerate() {
            let expected = ctx
                .pow_u64(n as u32)
                .ok_or_else(|| Error::MalformedTable(format!("level {n} is too deep")))?;
            if row.len() as u64 != expected {
                return Err(Error::MalformedTable(format!(
                    "level {n} has {} values, expected {expected}",
                    row.len()
                )));
            }
        }
        let table = Self {
            ctx: ctx.clone(),
            kind: kind.to_string(),
            levels,
        };
        let deltas = (0..table.depth())
            .map(|n| Ok(level_delta(ctx, &table.levels[n as usize], &table.levels[n as usize + 1])?.delta))
            .collect::<Result<Vec<_>>>()?;
        for n in 2..deltas.len() {
            if deltas[n] > deltas[n - 1] {
                return Err(Error::MalformedTable(format!(
                    "weak-measure condition fails: delta_{n} = {} exceeds delta_{} = {}",
                    deltas[n],
                    n - 1,
                    deltas[n - 1]
                )));
            }
        }
        Ok(table)
    }

    pub fn context(&self) -> &PAdicContext {
        &self.ctx
    }

    pub fn kind(&self) -> &str {
        &self.kind
    }

    /// Deepest tabulated level L.
    pub fn depth(&self) -> u32 {
        self.levels.len() as u32 - 1
    }

    pub fn level(&self, n: u32) -> Option<&[PAdicScalar]> {
        self.levels.get(n as usize).map(Vec::as_slice)
    }

    pub fn get(&self, c: Cylinder) -> Result<PAdicScalar> {
        self.levels
            .get(c.level as usize)
            .and_then(|row| row.get(c.base as usize))
            .cloned()
            .ok_or(Error::LevelBeyondTable {
                requested: c.level,
                available: self.depth(),
            })
    }

    /// Text form: a header `p N L kind`, then one `a n value [k]` line per
    /// cylinder. The optional `k` marks the value as known modulo `p^k`; a
    /// value without it is exact up to the context's relative precision.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} {} {} {}\n",
            self.ctx.p(),
            self.ctx.precision(),
            self.depth(),
            self.kind
        );
        for (n, row) in self.levels.iter().enumerate() {
            for (a, v) in row.iter().enumerate() {
                match v.absolute_precision() {
                    Some(k) => out.push_str(&format!("{a} {n} {} {k}\n", v.to_rational_string())),
                    None => out.push_str(&format!("{a} {n} {}\n", v.to_rational_string())),
                }
            }
        }
        out
    }

    /// Parses [`MeasureTable::to_text`] output. Blank lines and `#` comments
    /// are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::MalformedTable("missing header".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let [p, prec, depth, kind] = fields[..] else {
            return Err(Error::MalformedTable(format!("bad header {header:?}")));
        };
        let num = |s: &str| -> Result<u64> {
            s.parse()
                .map_err(|_| Error::MalformedTable(format!("bad number {s:?}")))
        };
        let ctx = PAdicContext::new(num(p)?, num(prec)? as u32)?;
        let depth = num(depth)? as u32;
        let mut levels: Vec<Vec<Option<PAdicScalar>>> = (0..=depth)
            .map(|n| {
                let size = ctx
                    .pow_u64(n)
                    .ok_or_else(|| Error::MalformedTable(format!("level {n} is too deep")))?;
                Ok(vec![None; size as usize])
            })
            .collect::<Result<_>>()?;
        for line in lines {
            let mut parts = line.split_whitespace();
            let (Some(a), Some(n), Some(v), known_to, None) =
                (parts.next(), parts.next(), parts.next(), parts.next(), parts.next())
            else {
                return Err(Error::MalformedTable(format!("bad line {line:?}")));
            };
            let (a, n) = (num(a)?, num(n)?);
            let slot = levels
                .get_mut(n as usize)
                .and_then(|row| row.get_mut(a as usize))
                .ok_or_else(|| Error::MalformedTable(format!("cylinder {a},{n} out of range")))?;
            if slot.is_some() {
                return Err(Error::MalformedTable(format!("cylinder {a},{n} listed twice")));
            }
            let mut value = PAdicScalar::parse(v, &ctx)?;
            if let Some(k) = known_to {
                let k = k
                    .parse::<i64>()
                    .map_err(|_| Error::MalformedTable(format!("bad precision {k:?}")))?;
                value = value.try_add(&PAdicScalar::zero_mod(&ctx, k))?;
            }
            *slot = Some(value);
        }
        let levels = levels
            .into_iter()
            .enumerate()
            .map(|(n, row)| {
                row.into_iter()
                    .enumerate()
                    .map(|(a, v)| v.ok_or_else(|| Error::MalformedTable(format!("cylinder {a},{n} missing"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(&ctx, kind, levels)
    }
}

/// A finitely described assignment of values to cylinders.
#[derive(Clone, Debug, PartialEq)]
pub enum FermionicMeasure {
    /// `mu_{f,-1}(a + p^n Z_p) = (-1)^a I_{-1}(f(a + p^n x))`.
    FunctionInduced(UDFunction),
    Tabulated(MeasureTable),
    /// `alpha mu + beta nu`.
    Combination {
        alpha: PAdicScalar,
        mu: Arc<FermionicMeasure>,
        beta: PAdicScalar,
        nu: Arc<FermionicMeasure>,
    },
}

impl FermionicMeasure {
    pub fn induced(f: impl Into<UDFunction>) -> Self {
        FermionicMeasure::FunctionInduced(f.into())
    }

    pub fn context(&self) -> &PAdicContext {
        match self {
            FermionicMeasure::FunctionInduced(f) => f.context(),
            FermionicMeasure::Tabulated(t) => t.context(),
            FermionicMeasure::Combination { alpha, .. } => alpha.context(),
        }
    }

    /// Deepest level at which the measure can be evaluated; `None` if unbounded.
    pub fn max_level(&self) -> Option<u32> {
        match self {
            FermionicMeasure::FunctionInduced(_) => None,
            FermionicMeasure::Tabulated(t) => Some(t.depth()),
            FermionicMeasure::Combination { mu, nu, .. } => match (mu.max_level(), nu.max_level()) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            },
        }
    }

    pub fn value(&self, c: Cylinder) -> Result<PAdicScalar> {
        measure_value(self, c)
    }

    /// All values on level `n`, indexed by residue.
    pub fn level_values(&self, n: u32, exec: Execution) -> Result<Vec<PAdicScalar>> {
        if let FermionicMeasure::Tabulated(t) = self {
            return t.level(n).map(<[_]>::to_vec).ok_or(Error::LevelBeyondTable {
                requested: n,
                available: t.depth(),
            });
        }
        let ctx = self.context();
        let size = ctx
            .pow_u64(n)
            .ok_or(Error::InvalidCylinder { a: 0, n })?;
        exec::try_map(size, exec, |a| measure_value(self, Cylinder { base: a, level: n }))
    }

    /// Evaluates levels `0..=depth` into a table.
    pub fn tabulate(&self, depth: u32, exec: Execution) -> Result<MeasureTable> {
        let kind = match self {
            FermionicMeasure::FunctionInduced(_) => "induced",
            FermionicMeasure::Tabulated(_) => "tabulated",
            FermionicMeasure::Combination { .. } => "combination",
        };
        let levels = (0..=depth)
            .map(|n| self.level_values(n, exec))
            .collect::<Result<Vec<_>>>()?;
        MeasureTable::new(self.context(), kind, levels)
    }
}

pub fn measure_value(mu: &FermionicMeasure, c: Cylinder) -> Result<PAdicScalar> {
    match mu {
        FermionicMeasure::FunctionInduced(f) => {
            let inner = f.compose_affine(c.base, c.level)?;
            Ok(integrate(&inner)?.signed(c.base))
        }
        FermionicMeasure::Tabulated(t) => t.get(c),
        FermionicMeasure::Combination {
            alpha,
            mu,
            beta,
            nu,
        } => alpha
            .try_mul(&measure_value(mu, c)?)?
            .try_add(&beta.try_mul(&measure_value(nu, c)?)?),
    }
}

pub fn measure_combine(
    alpha: PAdicScalar,
    mu: FermionicMeasure,
    beta: PAdicScalar,
    nu: FermionicMeasure,
) -> Result<FermionicMeasure> {
    let ctx = alpha.context();
    if beta.context() != ctx || mu.context() != ctx || nu.context() != ctx {
        return Err(Error::ContextMismatch);
    }
    Ok(FermionicMeasure::Combination {
        alpha,
        mu: Arc::new(mu),
        beta,
        nu: Arc::new(nu),
    })
}

/// Worst sign-normalized difference between one level and the next.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct LevelDelta {
    pub delta: f64,
    pub parent: u64,
    pub child: u64,
}

/// `max |(-1)^a mu(a + p^n Z_p) - (-1)^a' mu(a' + p^(n+1) Z_p)|_p` over all
/// `a < p^n` and lifts `a' = a + j p^n`.
pub(crate) fn level_delta(ctx: &PAdicContext, upper: &[PAdicScalar], lower: &[PAdicScalar]) -> Result<LevelDelta> {
    let step = upper.len() as u64;
    let mut worst = LevelDelta {
        delta: 0.0,
        parent: 0,
        child: 0,
    };
    for (a, v) in upper.iter().enumerate() {
        let a = a as u64;
        let normalized = v.signed(a);
        for j in 0..ctx.p() {
            let child = a + j * step;
            let w = lower[child as usize].signed(child);
            let d = normalized.try_sub(&w)?.norm();
            if d > worst.delta {
                worst = LevelDelta {
                    delta: d,
                    parent: a,
                    child,
                };
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn induced(lit: &str, ctx: &PAdicContext) -> FermionicMeasure {
        FermionicMeasure::induced(UDFunction::parse(lit, ctx).unwrap())
    }

    #[test]
    fn measure_value_examples() {
        let c5 = PAdicContext::new(5, 3).unwrap();
        let v = measure_value(&induced("poly:0,1", &c5), Cylinder::new(1, 1, &c5).unwrap()).unwrap();
        assert_eq!(v.canonical(), "5^0 * 64 mod 5^3");
        let c3 = PAdicContext::new(3, 10).unwrap();
        let v = measure_value(&induced("poly:0,0,1", &c3), Cylinder::new(2, 2, &c3).unwrap()).unwrap();
        assert_eq!(v, c3.integer(-14));
        let one = induced("poly:1", &c3);
        for (a, n) in [(0, 0), (1, 1), (5, 2), (20, 3)] {
            let v = measure_value(&one, Cylinder::new(a, n, &c3).unwrap()).unwrap();
            assert_eq!(v, c3.sign(a));
        }
    }

    #[test]
    fn combination_examples() {
        let c = PAdicContext::new(5, 8).unwrap();
        let x = induced("poly:0,1", &c);
        let diff = measure_combine(c.one(), x.clone(), c.integer(-1), x.clone()).unwrap();
        for a in 0..5 {
            assert!(diff.value(Cylinder::new(a, 1, &c).unwrap()).unwrap().is_zero());
        }
        let sum = measure_combine(c.one(), x, c.one(), induced("poly:0,0,1", &c)).unwrap();
        let direct = induced("poly:0,1,1", &c);
        let cyl = Cylinder::new(1, 1, &c).unwrap();
        assert_eq!(sum.value(cyl).unwrap(), direct.value(cyl).unwrap());
        let twice = measure_combine(c.integer(2), induced("poly:1", &c), c.zero(), induced("poly:1", &c)).unwrap();
        assert_eq!(twice.value(Cylinder::new(0, 0, &c).unwrap()).unwrap(), c.integer(2));
    }

    #[test]
    fn cylinder_validation() {
        let c = PAdicContext::new(3, 4).unwrap();
        assert!(Cylinder::new(9, 2, &c).is_err());
        assert_eq!(Cylinder::parse("4,2", &c).unwrap(), Cylinder { base: 4, level: 2 });
        assert!(Cylinder::parse("4;2", &c).is_err());
        let kids = Cylinder::new(1, 1, &c).unwrap().children(&c).unwrap();
        assert_eq!(kids.iter().map(|k| k.base).collect::<Vec<_>>(), vec![1, 4, 7]);
        assert_eq!(Cylinder::containing(13, 2, &c).unwrap().base, 4);
    }

    #[test]
    fn table_round_trip_and_errors() {
        let c = PAdicContext::new(3, 6).unwrap();
        let t = induced("mahler:1,2,1/2", &c).tabulate(2, Execution::Sequential).unwrap();
        let back = MeasureTable::parse(&t.to_text()).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.to_text(), t.to_text());

        // mu(2 + 3Z_3) for (1 + x)^2 is zero only modulo p^N.
        let t = induced("poly:1,2,1", &c).tabulate(2, Execution::Sequential).unwrap();
        let back = MeasureTable::parse(&t.to_text()).unwrap();
        let v = back.get(Cylinder::new(2, 1, &c).unwrap()).unwrap();
        assert!(v.is_zero() && !v.is_exact_zero());
        assert_eq!(back.to_text(), t.to_text());
        assert_eq!(back.kind(), "induced");

        let short = "3 6 1 tabulated\n0 0 1\n0 1 1\n1 1 1\n";
        assert!(matches!(MeasureTable::parse(short), Err(Error::MalformedTable(_))));
        assert!(MeasureTable::parse("3 6 0 t\n0 0 1\n0 0 2\n").is_err());
        assert!(MeasureTable::parse("3 6 t\n").is_err());
        let lookup = back.get(Cylinder { base: 0, level: 3 });
        assert!(matches!(lookup, Err(Error::LevelBeyondTable { requested: 3, available: 2 })));
    }

    #[test]
    fn weak_condition_rejects_growing_deltas() {
        let c = PAdicContext::new(3, 6).unwrap();
        // delta_1 = 1/3, delta_2 = 1: growing past level 1.
        let levels = vec![
            vec![c.zero()],
            vec![c.zero(); 3],
            (0..9).map(|a| c.integer(3).signed(a)).collect(),
            (0..27).map(|a| c.integer(1).signed(a)).collect(),
        ];
        assert!(matches!(
            MeasureTable::new(&c, "tabulated", levels),
            Err(Error::MalformedTable(_))
        ));
    }
}
