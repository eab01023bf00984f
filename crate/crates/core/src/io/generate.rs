use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::rng::SplitMix64;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::model::RidgeProblem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Distribution {
    StandardNormal,
    Uniform01,
}

/// Recipe for a seeded random problem, written as
/// `d=10,n=500,m=1,lambda=0.002,seed=42,dist=normal`.
///
/// `d` and `n` are required. Defaults: `m = 1`, `lambda = 1/n`, `seed = 0`,
/// `dist = normal` (the other option is `uniform`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub d: usize,
    pub n: usize,
    pub m: usize,
    pub lambda: f64,
    pub seed: u64,
    pub distribution: Distribution,
}

impl GeneratorSpec {
    /// Standard normal entries with `λ = 1/n`.
    pub fn new(d: usize, n: usize, m: usize, seed: u64) -> Self {
        Self {
            d,
            n,
            m,
            lambda: 1.0 / n as f64,
            seed,
            distribution: Distribution::StandardNormal,
        }
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn with_distribution(mut self, distribution: Distribution) -> Self {
        self.distribution = distribution;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.d == 0 || self.n == 0 || self.m == 0 {
            return Err(Error::InvalidArgument(format!(
                "generator dimensions must be positive (d={}, n={}, m={})",
                self.d, self.n, self.m
            )));
        }
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::InvalidArgument(format!("lambda must be positive, got {}", self.lambda)));
        }
        Ok(())
    }
}

impl FromStr for GeneratorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: String| Error::InvalidArgument(format!("generator spec '{s}': {msg}"));
        let (mut d, mut n, mut m, mut lambda, mut seed, mut distribution) =
            (None, None, 1usize, None, 0u64, Distribution::StandardNormal);
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key=value, got '{part}'")))?;
            let value = value.trim();
            let count = |v: &str| v.parse::<usize>().map_err(|_| bad(format!("{key} must be an integer, got '{v}'")));
            match key.trim() {
                "d" => d = Some(count(value)?),
                "n" => n = Some(count(value)?),
                "m" => m = count(value)?,
                "lambda" => {
                    lambda = Some(value.parse::<f64>().map_err(|_| bad(format!("lambda must be a number, got '{value}'")))?)
                }
                "seed" => seed = value.parse().map_err(|_| bad(format!("seed must be a u64, got '{value}'")))?,
                "dist" => {
                    distribution = match value {
                        "normal" => Distribution::StandardNormal,
                        "uniform" => Distribution::Uniform01,
                        other => return Err(bad(format!("dist must be normal or uniform, got '{other}'"))),
                    }
                }
                other => return Err(bad(format!("unknown key '{other}'"))),
            }
        }
        let d = d.ok_or_else(|| bad("missing d".into()))?;
        let n = n.ok_or_else(|| bad("missing n".into()))?;
        let spec = GeneratorSpec {
            d,
            n,
            m,
            lambda: lambda.unwrap_or(1.0 / n.max(1) as f64),
            seed,
            distribution,
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dist = match self.distribution {
            Distribution::StandardNormal => "normal",
            Distribution::Uniform01 => "uniform",
        };
        write!(
            f,
            "d={},n={},m={},lambda={},seed={},dist={}",
            self.d, self.n, self.m, self.lambda, self.seed, dist
        )
    }
}

/// Draws `A` row by row, then `y`, from one [`SplitMix64`] stream seeded with
/// `spec.seed`.
pub fn generate_problem(spec: &GeneratorSpec) -> Result<RidgeProblem> {
    spec.validate()?;
    let big_n = spec.n * spec.m;
    let mut rng = SplitMix64::new(spec.seed);
    let mut draw = || match spec.distribution {
        Distribution::StandardNormal => rng.next_standard_normal(),
        Distribution::Uniform01 => rng.next_f64(),
    };
    let data: Vec<f64> = (0..spec.d * big_n).map(|_| draw()).collect();
    let y: Vec<f64> = (0..big_n).map(|_| draw()).collect();
    RidgeProblem::new(Matrix::new(spec.d, big_n, data)?, y, spec.lambda, spec.n, spec.m)
}
