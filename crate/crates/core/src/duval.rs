//! The Duval–Ovsienko map between second-order operators acting on
//! densities of different weights, on the line, and the pencil it sweeps
//! out as the target weight varies.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::symexpr::{equal_probabilistic, rat, EqualityConfig, Expr, Rational};

/// `a₂∂² + a₁∂ + a₀` acting on densities of weight `weight`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedOp2 {
    pub a2: Expr,
    pub a1: Expr,
    pub a0: Expr,
    pub weight: Rational,
}

impl WeightedOp2 {
    pub fn new(a2: Expr, a1: Expr, a0: Expr, weight: Rational) -> Self {
        WeightedOp2 { a2: a2.simplify(), a1: a1.simplify(), a0: a0.simplify(), weight }
    }

    pub fn coeffs(&self) -> [&Expr; 3] {
        [&self.a2, &self.a1, &self.a0]
    }

    pub fn eq_probabilistic(&self, other: &WeightedOp2, cfg: &EqualityConfig) -> Result<bool> {
        if self.weight != other.weight {
            return Ok(false);
        }
        for (a, b) in self.coeffs().into_iter().zip(other.coeffs()) {
            if !equal_probabilistic(a, b, cfg)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Rejects the weights where a denominator of the map vanishes.
pub fn check_weight(mu: &Rational) -> Result<()> {
    let denominator = if mu.is_zero() {
        "mu"
    } else if *mu == -Rational::one() {
        "mu + 1"
    } else if *mu == rat(-1, 2) {
        "2*mu + 1"
    } else {
        return Ok(());
    };
    Err(Error::SingularWeight { weight: mu.clone(), denominator: denominator.into() })
}

/// Maps `src` (weight `μ`) to weight `lambda`:
///
/// ```text
/// ã₂ = a₂
/// ã₁ = (2λ+1)/(2μ+1)·a₁ + 2(μ-λ)/(2μ+1)·a₂'
/// ã₀ = λ(λ+1)/(μ(μ+1))·a₀ + λ(μ-λ)/((2μ+1)(μ+1))·(a₁' - a₂'')
/// ```
pub fn duval_ovsienko_map(src: &WeightedOp2, lambda: &Rational) -> Result<WeightedOp2> {
    let mu = &src.weight;
    check_weight(mu)?;
    Ok(map_unchecked(src, lambda))
}

fn map_unchecked(src: &WeightedOp2, lambda: &Rational) -> WeightedOp2 {
    let mu = &src.weight;
    let one = Rational::one();
    let two = rat(2, 1);
    let m21 = &two * mu + &one;
    let da2 = src.a2.derivative();
    let a1 = src.a1.scale(&((&two * lambda + &one) / &m21)) + da2.scale(&(&two * (mu - lambda) / &m21));
    let a0 = src.a0.scale(&(lambda * (lambda + &one) / (mu * (mu + &one))))
        + (src.a1.derivative() - da2.derivative()).scale(&(lambda * (mu - lambda) / (&m21 * (mu + &one))));
    WeightedOp2 { a2: src.a2.clone(), a1, a0, weight: lambda.clone() }
}

/// The family `λ ↦ duval_ovsienko_map(src, λ)`.
pub fn pencil_from_duval(src: &WeightedOp2) -> Result<impl Fn(&Rational) -> WeightedOp2 + '_> {
    check_weight(&src.weight)?;
    Ok(move |lambda: &Rational| map_unchecked(src, lambda))
}

/// Degrees in `λ` of `(ã₂, ã₁, ã₀)`, read off from finite differences of the
/// pencil at `λ = 2, 3, 4, 5`. Degrees up to 3 are detectable.
pub fn pencil_degrees(src: &WeightedOp2, cfg: &EqualityConfig) -> Result<[usize; 3]> {
    let pencil = pencil_from_duval(src)?;
    let samples: Vec<WeightedOp2> = (2..=5).map(|l| pencil(&rat(l, 1))).collect();
    let mut out = [0; 3];
    for (i, slot) in out.iter_mut().enumerate() {
        let mut row: Vec<Expr> = samples.iter().map(|s| s.coeffs()[i].clone()).collect();
        let mut degree = 0;
        for k in 1..row.len() {
            row = row.windows(2).map(|w| w[1].clone() - w[0].clone()).collect();
            if row.iter().any(|d| !d.is_zero()) && !all_zero(&row, cfg)? {
                degree = k;
            }
        }
        *slot = degree;
    }
    Ok(out)
}

fn all_zero(es: &[Expr], cfg: &EqualityConfig) -> Result<bool> {
    for e in es {
        if !equal_probabilistic(e, &Expr::zero(), cfg)? {
            return Ok(false);
        }
    }
    Ok(true)
}
