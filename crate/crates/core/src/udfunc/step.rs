use crate::error::{Error, Result};
use crate::padic::{PAdicContext, PAdicScalar};

/// A locally constant function on Z_p: `x -> values[x mod p^level]`.
#[derive(Clone, Debug, PartialEq)]
pub struct StepFunction {
    ctx: PAdicContext,
    level: u32,
    values: Vec<PAdicScalar>,
}

impl StepFunction {
    pub fn new(ctx: &PAdicContext, level: u32, values: Vec<PAdicScalar>) -> Result<Self> {
        let expected = ctx
            .pow_u64(level)
            .ok_or_else(|| Error::Precondition(format!("p^{level} residues do not fit in memory")))?;
        if values.len() as u64 != expected {
            return Err(Error::Precondition(format!(
                "step function of level {level} needs {expected} values, got {}",
                values.len()
            )));
        }
        Ok(Self {
            ctx: ctx.clone(),
            level,
            values,
        })
    }

    pub fn constant(c: PAdicScalar) -> Self {
        let ctx = c.context().clone();
        Self {
            ctx,
            level: 0,
            values: vec![c],
        }
    }

    pub fn context(&self) -> &PAdicContext {
        &self.ctx
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn values(&self) -> &[PAdicScalar] {
        &self.values
    }

    fn modulus(&self) -> u64 {
        self.values.len() as u64
    }

    pub fn evaluate_int(&self, x: u64) -> PAdicScalar {
        self.values[(x % self.modulus()) as usize].clone()
    }

    pub fn evaluate(&self, x: &PAdicScalar) -> Result<PAdicScalar> {
        let r = x.residue_u64(self.level)?;
        Ok(self.values[r as usize].clone())
    }

    /// `x -> f(a + p^n x)`, again locally constant.
    pub fn compose_affine(&self, a: u64, n: u32) -> Result<Self> {
        let m = self.modulus();
        if n >= self.level {
            return Ok(Self::constant(self.evaluate_int(a)));
        }
        let step = self.ctx.pow_u64(n).expect("n < level");
        let level = self.level - n;
        let count = m / step;
        let values = (0..count)
            .map(|x| self.values[((a % m + step * x) % m) as usize].clone())
            .collect();
        Self::new(&self.ctx, level, values)
    }

    /// Re-expresses the function at a finer level.
    pub fn refine(&self, level: u32) -> Result<Self> {
        if level <= self.level {
            return Ok(self.clone());
        }
        let size = self
            .ctx
            .pow_u64(level)
            .ok_or_else(|| Error::Precondition(format!("p^{level} residues do not fit")))?;
        Self::new(&self.ctx, level, (0..size).map(|x| self.evaluate_int(x)).collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let level = self.level.max(other.level);
        let (a, b) = (self.refine(level)?, other.refine(level)?);
        let values = a
            .values
            .iter()
            .zip(&b.values)
            .map(|(x, y)| x.try_add(y))
            .collect::<Result<Vec<_>>>()?;
        Self::new(&self.ctx, level, values)
    }

    pub fn scale(&self, c: &PAdicScalar) -> Result<Self> {
        let values = self
            .values
            .iter()
            .map(|x| x.try_mul(c))
            .collect::<Result<Vec<_>>>()?;
        Self::new(&self.ctx, self.level, values)
    }
}
