//! Factorization of a general monic second-order operator
//! `L = t²(∂² + (p₁ŵ + p₀)∂ + q₂ŵ² + q₁ŵ + q₀)` as `t(∂ - α̂) ∘ t(∂ - β̂)`.
//!
//! Matching coefficients gives `α₁ = -p₁ - β₁`, `α₀ = -p₀ + p₁ + β₁ - β₀`
//! and the system
//!
//! ```text
//!      0 = β₁² + p₁β₁ + q₂
//!   -β₁' = 2β₀β₁ + p₀β₁ + p₁β₀ + q₁
//!   -β₀' = β₀² + p₀β₀ + q₀
//! ```
//!
//! The first two equations fix `β₁` and `β₀` algebraically; the third is the
//! obstruction.

use crate::densalg::DensOp;
use crate::error::{Error, Result};
use crate::sturm::{AffinePair, DegenerateData, FactorizationOutcome, Sign};
use crate::symexpr::{equal_probabilistic, rat, EqualityConfig, Expr};

#[derive(Clone, Debug, PartialEq)]
pub struct SecondOrderData {
    pub p1: Expr,
    pub p0: Expr,
    pub q2: Expr,
    pub q1: Expr,
    pub q0: Expr,
}

const SHAPE: [(u32, u32); 6] = [(0, 2), (1, 1), (0, 1), (2, 0), (1, 0), (0, 0)];

pub fn extract_coefficients(l: &DensOp) -> Result<SecondOrderData> {
    if *l.weight() != rat(2, 1) {
        return Err(Error::ShapeMismatch { reason: format!("weight is {}, expected 2", l.weight()), keys: vec![] });
    }
    let extra: Vec<(u32, u32)> = l.coeffs().keys().copied().filter(|k| !SHAPE.contains(k)).collect();
    if !extra.is_empty() {
        return Err(Error::ShapeMismatch { reason: "terms outside the second-order shape".into(), keys: extra });
    }
    if !l.coeff(0, 2).is_one() {
        return Err(Error::ShapeMismatch { reason: "leading coefficient is not 1".into(), keys: vec![(0, 2)] });
    }
    Ok(SecondOrderData {
        p1: l.coeff(1, 1),
        p0: l.coeff(0, 1),
        q2: l.coeff(2, 0),
        q1: l.coeff(1, 0),
        q0: l.coeff(0, 0),
    })
}

impl SecondOrderData {
    pub fn discriminant(&self) -> Expr {
        self.p1.powi(2) - self.q2.scale(&rat(4, 1))
    }

    pub fn to_op(&self) -> DensOp {
        DensOp::from_terms(
            rat(2, 1),
            [
                ((0, 2), Expr::one()),
                ((1, 1), self.p1.clone()),
                ((0, 1), self.p0.clone()),
                ((2, 0), self.q2.clone()),
                ((1, 0), self.q1.clone()),
                ((0, 0), self.q0.clone()),
            ],
        )
    }

    fn alpha(&self, beta: &AffinePair) -> AffinePair {
        AffinePair::new(
            self.p1.clone() + beta.c1.clone() - self.p0.clone() - beta.c0.clone(),
            -(self.p1.clone() + beta.c1.clone()),
        )
    }
}

pub fn factorize_second_order(d: &SecondOrderData, sign: Sign, cfg: &EqualityConfig) -> Result<FactorizationOutcome> {
    let half = rat(1, 2);
    if equal_probabilistic(&d.p1.powi(2), &d.q2.scale(&rat(4, 1)), cfg)? {
        let beta1 = d.p1.scale(&-half.clone());
        let lhs = -beta1.derivative();
        let rhs = d.p0.clone() * beta1.clone() + d.q1.clone();
        if !equal_probabilistic(&lhs, &rhs, cfg)? {
            return Ok(FactorizationOutcome::Obstructed { residual: rhs - lhs });
        }
        let shift = d.p0.scale(&half);
        let potential = d.q0.clone() - d.p0.powi(2).scale(&rat(1, 4)) - d.p0.derivative().scale(&half);
        return Ok(FactorizationOutcome::Degenerate(DegenerateData { beta1, shift, potential }));
    }
    let root = sign.apply(d.discriminant().sqrt());
    let beta1 = (root.clone() - d.p1.clone()).scale(&half);
    let beta0 = -(beta1.derivative() + d.p0.clone() * beta1.clone() + d.q1.clone()) / root;
    let lhs = -beta0.derivative();
    let rhs = beta0.powi(2) + d.p0.clone() * beta0.clone() + d.q0.clone();
    if !equal_probabilistic(&lhs, &rhs, cfg)? {
        return Ok(FactorizationOutcome::Obstructed { residual: rhs - lhs });
    }
    let beta = AffinePair::new(beta0, beta1);
    Ok(FactorizationOutcome::Complete { alpha: d.alpha(&beta), beta })
}

/// Whether a complete outcome re-expands to `l`; false for other outcomes.
pub fn verify_factorization(l: &DensOp, outcome: &FactorizationOutcome, cfg: &EqualityConfig) -> Result<bool> {
    match outcome.product() {
        Some(p) => p.eq_probabilistic(l, cfg),
        None => Ok(false),
    }
}
