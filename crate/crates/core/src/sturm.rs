//! The generalized Sturm–Liouville operator
//! `L = t²(∂² + γ(2ŵ+1)∂ + θŵ² + (θ + γ')ŵ)` and its factorization into
//! first-order factors.
//!
//! Factorizations are written `L = t(∂ - α̂) ∘ t(∂ - β̂)` with
//! `α̂ = α₀ + α₁ŵ`, `β̂ = β₀ + β₁ŵ`. In terms of `λ̂ = ŵ + ½` the right
//! factor reads `∂ - b₀ - b₁λ̂`.

use crate::densalg::DensOp;
use crate::error::{Error, Result};
use crate::symexpr::{equal_probabilistic, rat, EqualityConfig, Expr, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct GenSL {
    pub gamma: Expr,
    pub theta: Expr,
}

impl GenSL {
    pub fn new(gamma: Expr, theta: Expr) -> Self {
        GenSL { gamma: gamma.simplify(), theta: theta.simplify() }
    }

    /// The pair with the given `γ` and potential `u`, i.e. `θ = -4u - 2γ'`.
    pub fn from_potential(gamma: Expr, u: Expr) -> Self {
        let gamma = gamma.simplify();
        let theta = u.simplify().scale(&rat(-4, 1)) - gamma.derivative().scale(&rat(2, 1));
        GenSL { gamma, theta }
    }

    /// `γ² - θ`.
    pub fn radicand(&self) -> Expr {
        self.gamma.powi(2) - self.theta.clone()
    }
}

/// `c0 + c1·ŵ`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffinePair {
    pub c0: Expr,
    pub c1: Expr,
}

impl AffinePair {
    pub fn new(c0: Expr, c1: Expr) -> Self {
        AffinePair { c0: c0.simplify(), c1: c1.simplify() }
    }

    pub fn as_op(&self) -> DensOp {
        DensOp::from_terms(Rational::from_integer(0.into()), [((0, 0), self.c0.clone()), ((1, 0), self.c1.clone())])
    }

    /// The first-order factor `t(∂ - c0 - c1ŵ)`.
    pub fn factor(&self) -> DensOp {
        let inner = DensOp::d().sub(&self.as_op()).expect("weight zero");
        DensOp::t_pow(Rational::from_integer(1.into())).multiply(&inner)
    }

    /// The same affine function written `c0' + c1'λ̂` with `λ̂ = ŵ + ½`.
    pub fn in_lambda_hat(&self) -> (Expr, Expr) {
        (self.c0.clone() - self.c1.scale(&rat(1, 2)), self.c1.clone())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn both() -> [Sign; 2] {
        [Sign::Plus, Sign::Minus]
    }

    pub(crate) fn apply(self, e: Expr) -> Expr {
        match self {
            Sign::Plus => e,
            Sign::Minus => -e,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }
}

/// When the first Riccati equation has a double root the system decouples:
/// `β₁` is fixed and `β₀ = b - shift` for any solution `b` of the classical
/// Riccati equation `-b' = b² + potential`.
#[derive(Clone, Debug, PartialEq)]
pub struct DegenerateData {
    pub beta1: Expr,
    pub shift: Expr,
    pub potential: Expr,
}

impl DegenerateData {
    /// Completes the factorization from a kernel element `φ` of
    /// `∂² + potential`.
    pub fn complete(&self, phi: &Expr, cfg: &EqualityConfig) -> Result<FactorizationOutcome> {
        let phi = phi.simplify();
        let dphi = phi.derivative();
        if !equal_probabilistic(&dphi.derivative(), &-(self.potential.clone() * phi.clone()), cfg)? {
            return Err(Error::KernelMismatch);
        }
        let beta0 = dphi / phi - self.shift.clone();
        let beta1 = self.beta1.clone();
        // p₁ = -2β₁ and p₀ = 2·shift on the degenerate locus.
        let alpha1 = beta1.clone();
        let alpha0 = -(self.shift.scale(&rat(2, 1)) + beta1.clone() + beta0.clone());
        Ok(FactorizationOutcome::Complete {
            alpha: AffinePair::new(alpha0, alpha1),
            beta: AffinePair::new(beta0, beta1),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FactorizationOutcome {
    Complete { alpha: AffinePair, beta: AffinePair },
    Degenerate(DegenerateData),
    Obstructed { residual: Expr },
}

impl FactorizationOutcome {
    pub fn tag(&self) -> &'static str {
        match self {
            FactorizationOutcome::Complete { .. } => "complete",
            FactorizationOutcome::Degenerate(_) => "degenerate",
            FactorizationOutcome::Obstructed { .. } => "obstructed",
        }
    }

    /// `t(∂ - α̂) ∘ t(∂ - β̂)` for a complete outcome.
    pub fn product(&self) -> Option<DensOp> {
        match self {
            FactorizationOutcome::Complete { alpha, beta } => Some(alpha.factor().multiply(&beta.factor())),
            _ => None,
        }
    }
}

pub fn build_gsl(g: &GenSL) -> DensOp {
    let two = rat(2, 1);
    DensOp::from_terms(
        two.clone(),
        [
            ((0, 2), Expr::one()),
            ((1, 1), g.gamma.scale(&two)),
            ((0, 1), g.gamma.clone()),
            ((2, 0), g.theta.clone()),
            ((1, 0), g.theta.clone() + g.gamma.derivative()),
        ],
    )
}

/// `u = -½(γ' + θ/2)`.
pub fn potential(g: &GenSL) -> Expr {
    (g.gamma.derivative() + g.theta.scale(&rat(1, 2))).scale(&rat(-1, 2))
}

/// `t²(∂² + 2γλ̂∂ - 2(γ' + 2u)λ̂² + γ'λ̂ + u)` rewritten with `λ̂ = ŵ + ½`.
pub fn gsl_lambda_form(gamma: &Expr, u: &Expr) -> DensOp {
    let gamma = gamma.simplify();
    let u = u.simplify();
    let dg = gamma.derivative();
    DensOp::from_shifted(
        rat(2, 1),
        &rat(1, 2),
        [
            ((0, 2), Expr::one()),
            ((1, 1), gamma.scale(&rat(2, 1))),
            ((2, 0), (dg.clone() + u.scale(&rat(2, 1))).scale(&rat(-2, 1))),
            ((1, 0), dg),
            ((0, 0), u),
        ],
    )
}

fn check_radicand(g: &GenSL, cfg: &EqualityConfig) -> Result<()> {
    if equal_probabilistic(&g.gamma.powi(2), &g.theta, cfg)? {
        Err(Error::DegenerateRadicand)
    } else {
        Ok(())
    }
}

/// `ψ = (γ² - θ)^(-1/4)`.
pub fn psi_invariant(g: &GenSL, cfg: &EqualityConfig) -> Result<Expr> {
    check_radicand(g, cfg)?;
    let psi = g.radicand().pow(rat(-1, 4));
    // Real branch only: a radicand negative on the whole domain leaves no
    // sample points and is reported as InsufficientDomain.
    cfg.sample_points(&[&psi])?;
    Ok(psi)
}

struct Split {
    psi: Expr,
    u: Expr,
    b0: Expr,
    b1: Expr,
    alpha: AffinePair,
    beta: AffinePair,
}

fn split(g: &GenSL, sign: Sign, cfg: &EqualityConfig) -> Result<Split> {
    let psi = psi_invariant(g, cfg)?;
    let u = potential(g);
    let b0 = psi.derivative() / psi.clone();
    let b1 = sign.apply(psi.powi(-2)) - g.gamma.clone();
    let beta1 = b1.clone();
    let beta0 = b0.clone() + b1.scale(&rat(1, 2));
    let alpha1 = -(g.gamma.scale(&rat(2, 1)) + beta1.clone());
    let alpha0 = g.gamma.clone() + beta1.clone() - beta0.clone();
    Ok(Split { psi, u, b0, b1, alpha: AffinePair::new(alpha0, alpha1), beta: AffinePair::new(beta0, beta1) })
}

/// Complete exactly when `(∂² + u)ψ ≡ 0`; the residual reported otherwise is
/// `(∂² + u)ψ`.
pub fn factorize_gsl(g: &GenSL, sign: Sign, cfg: &EqualityConfig) -> Result<FactorizationOutcome> {
    if equal_probabilistic(&g.gamma.powi(2), &g.theta, cfg)? {
        return Ok(FactorizationOutcome::Degenerate(DegenerateData {
            beta1: -g.gamma.clone(),
            shift: g.gamma.scale(&rat(1, 2)),
            potential: potential(g),
        }));
    }
    let s = split(g, sign, cfg)?;
    let d2 = s.psi.nth_derivative(2);
    let u_psi = s.u.clone() * s.psi.clone();
    if equal_probabilistic(&d2, &-u_psi.clone(), cfg)? {
        Ok(FactorizationOutcome::Complete { alpha: s.alpha, beta: s.beta })
    } else {
        Ok(FactorizationOutcome::Obstructed { residual: d2 + u_psi })
    }
}

pub fn factorize_gsl_both(g: &GenSL, cfg: &EqualityConfig) -> Result<[(Sign, FactorizationOutcome); 2]> {
    Ok([(Sign::Plus, factorize_gsl(g, Sign::Plus, cfg)?), (Sign::Minus, factorize_gsl(g, Sign::Minus, cfg)?)])
}

/// `L = t(∂ - α̂) ∘ t(∂ - β̂) + t²f` with `f = ψ⁻¹(∂² + u)ψ`.
#[derive(Clone, Debug, PartialEq)]
pub struct IncompleteFactorization {
    pub b0: Expr,
    pub b1: Expr,
    pub f: Expr,
    pub alpha: AffinePair,
    pub beta: AffinePair,
}

impl IncompleteFactorization {
    pub fn reexpand(&self) -> DensOp {
        let prod = self.alpha.factor().multiply(&self.beta.factor());
        prod.add(&DensOp::monomial(rat(2, 1), 0, 0, self.f.clone())).expect("both of weight 2")
    }
}

pub fn factorize_incomplete(g: &GenSL, sign: Sign, cfg: &EqualityConfig) -> Result<IncompleteFactorization> {
    let s = split(g, sign, cfg)?;
    let f = s.psi.nth_derivative(2) / s.psi.clone() + s.u.clone();
    Ok(IncompleteFactorization { b0: s.b0, b1: s.b1, f, alpha: s.alpha, beta: s.beta })
}

/// From a kernel element `φ` of `∂² + p∂ + q`, the factorization
/// `(∂ - α)(∂ - β)` with `β = φ'/φ`, `α = -p - β`. Returns `(β, α)`.
pub fn classical_factor_from_kernel(p: &Expr, q: &Expr, phi: &Expr, cfg: &EqualityConfig) -> Result<(Expr, Expr)> {
    let (p, q, phi) = (p.simplify(), q.simplify(), phi.simplify());
    let dphi = phi.derivative();
    let lower = p.clone() * dphi.clone() + q * phi.clone();
    if !equal_probabilistic(&dphi.derivative(), &-lower, cfg)? {
        return Err(Error::KernelMismatch);
    }
    let beta = dphi / phi;
    let alpha = -(p + beta.clone());
    Ok((beta, alpha))
}
