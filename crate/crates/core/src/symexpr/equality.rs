//! Randomized identity testing by evaluation at sample points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use std::collections::BTreeMap;

use super::eval::{evaluate_exact, evaluate_with, Bindings};
use super::rational::to_f64;
use super::{Expr, Rational};
use crate::error::{Error, Result};

/// Closed real interval `[lo, hi]` with `lo < hi`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidConfig(format!("empty or unbounded domain [{lo}, {hi}]")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    fn sample(&self, rng: &mut impl Rng) -> f64 {
        rng.gen_range(self.lo..=self.hi)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EqualityConfig {
    sample_count: usize,
    domain: Interval,
    tolerance: f64,
    max_rejects: usize,
    rng_seed: u64,
}

impl Default for EqualityConfig {
    /// 24 points on `[0.1, 10]`, relative tolerance `1e-9`, 500 rejects.
    fn default() -> Self {
        EqualityConfig {
            sample_count: 24,
            domain: Interval { lo: 0.1, hi: 10.0 },
            tolerance: 1e-9,
            max_rejects: 500,
            rng_seed: Self::DEFAULT_SEED,
        }
    }
}

impl EqualityConfig {
    pub const DEFAULT_SEED: u64 = 0x5eed_d0c5;

    pub fn new(
        sample_count: usize,
        domain: Interval,
        tolerance: f64,
        max_rejects: usize,
        rng_seed: u64,
    ) -> Result<Self> {
        if sample_count == 0 {
            return Err(Error::InvalidConfig("sample_count must be at least 1".into()));
        }
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(Error::InvalidConfig(format!("tolerance must be positive, got {tolerance}")));
        }
        if max_rejects == 0 {
            return Err(Error::InvalidConfig("max_rejects must be at least 1".into()));
        }
        Ok(EqualityConfig { sample_count, domain, tolerance, max_rejects, rng_seed })
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }

    pub fn with_domain(mut self, domain: Interval) -> Self {
        self.domain = domain;
        self
    }

    pub fn sample_count(&self) -> usize {
        self.sample_count
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn max_rejects(&self) -> usize {
        self.max_rejects
    }

    pub fn rng_seed(&self) -> u64 {
        self.rng_seed
    }

    /// Accepted sample points (x and symbol values) where every expression
    /// in `exprs` is defined.
    pub(crate) fn sample_points(&self, exprs: &[&Expr]) -> Result<Vec<(f64, Bindings, Vec<f64>)>> {
        let mut names: Vec<String> = exprs.iter().flat_map(|e| e.symbols()).collect();
        names.sort();
        names.dedup();
        let mut rng = ChaCha8Rng::seed_from_u64(self.rng_seed);
        let mut out = Vec::with_capacity(self.sample_count);
        let mut rejects = 0;
        while out.len() < self.sample_count {
            let x0 = self.domain.sample(&mut rng);
            let env: Bindings = names.iter().map(|n| (n.clone(), self.domain.sample(&mut rng))).collect();
            let values: Option<Vec<f64>> = exprs.iter().map(|e| evaluate_with(e, x0, &env)).collect();
            match values {
                Some(v) => out.push((x0, env, v)),
                None => {
                    rejects += 1;
                    if rejects > self.max_rejects {
                        return Err(Error::InsufficientDomain { accepted: out.len(), rejects });
                    }
                }
            }
        }
        Ok(out)
    }

    pub(crate) fn close(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.tolerance * (1.0 + a.abs().max(b.abs()))
    }
}

/// Decides `a ≡ b` by comparing values at `cfg.sample_count` random points
/// of the domain where both sides are defined. Opaque symbols are bound to
/// fresh random values at each point.
///
/// Where the floating-point values disagree, the point is re-evaluated in
/// exact rational arithmetic if both sides are rational there, so that
/// cancellation in large unsimplified rational functions does not produce
/// false negatives.
pub fn equal_probabilistic(a: &Expr, b: &Expr, cfg: &EqualityConfig) -> Result<bool> {
    let points = cfg.sample_points(&[a, b])?;
    Ok(points.iter().all(|(x0, env, v)| cfg.close(v[0], v[1]) || exact_close(a, b, *x0, env, cfg)))
}

fn exact_close(a: &Expr, b: &Expr, x0: f64, env: &Bindings, cfg: &EqualityConfig) -> bool {
    let to_rat = |v: f64| Rational::from_float(v);
    let Some(x) = to_rat(x0) else { return false };
    let Some(env) = env.iter().map(|(k, v)| Some((k.clone(), to_rat(*v)?))).collect::<Option<BTreeMap<_, _>>>() else {
        return false;
    };
    match (evaluate_exact(a, &x, &env), evaluate_exact(b, &x, &env)) {
        (Some(va), Some(vb)) => va == vb || cfg.close(to_f64(&va), to_f64(&vb)),
        _ => false,
    }
}

pub fn is_zero_probabilistic(a: &Expr, cfg: &EqualityConfig) -> Result<bool> {
    equal_probabilistic(a, &Expr::zero(), cfg)
}
