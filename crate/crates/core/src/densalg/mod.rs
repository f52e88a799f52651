//! Homogeneous differential operators on the algebra of densities.
//!
//! An operator of weight `μ` is stored in normal order
//! `t^μ Σ a_pq(x) ŵ^p ∂^q`: the power of `t` leftmost, then the coefficient,
//! then powers of the weight operator, then derivatives. Composition uses
//!
//! * `ŵ t^ν = t^ν (ŵ + ν)`,
//! * `∂ f = f ∂ + f'`,
//! * `ŵ` commutes with functions of `x` and with `∂`; `∂` commutes with `t`.

mod dsl;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

pub use dsl::parse_op;

use crate::error::{Error, Result};
use crate::symexpr::{self, equal_probabilistic, EqualityConfig, Expr, Rational};
use crate::symexpr::{binomial, pow_int};

/// Normal-ordering key: exponent of `ŵ`, then order of `∂`.
pub type Key = (u32, u32);

#[derive(Clone, Debug, PartialEq)]
pub struct DensOp {
    weight: Rational,
    coeffs: BTreeMap<Key, Expr>,
}

/// A generator of the operator algebra, used to write words for
/// [`normal_order`].
#[derive(Clone, Debug, PartialEq)]
pub enum Generator {
    /// Multiplication by `t^a`.
    T(Rational),
    /// The weight operator `ŵ`.
    W,
    /// `∂ = d/dx`.
    D,
    /// Multiplication by a function of `x`.
    F(Expr),
}

/// Normal form of the composition of `word`, read left to right.
pub fn normal_order(word: &[Generator]) -> DensOp {
    word.iter().fold(DensOp::identity(), |acc, g| {
        let g = match g {
            Generator::T(a) => DensOp::t_pow(a.clone()),
            Generator::W => DensOp::w(),
            Generator::D => DensOp::d(),
            Generator::F(f) => DensOp::scalar(f.clone()),
        };
        acc.multiply(&g)
    })
}

impl DensOp {
    pub fn zero(weight: Rational) -> Self {
        DensOp { weight, coeffs: BTreeMap::new() }
    }

    pub fn identity() -> Self {
        Self::monomial(Rational::zero(), 0, 0, Expr::one())
    }

    pub fn t_pow(a: Rational) -> Self {
        Self::monomial(a, 0, 0, Expr::one())
    }

    pub fn w() -> Self {
        Self::monomial(Rational::zero(), 1, 0, Expr::one())
    }

    pub fn d() -> Self {
        Self::monomial(Rational::zero(), 0, 1, Expr::one())
    }

    /// Multiplication by `f(x)`, weight 0.
    pub fn scalar(f: Expr) -> Self {
        Self::monomial(Rational::zero(), 0, 0, f)
    }

    /// `t^weight · coeff · ŵ^p ∂^q`.
    pub fn monomial(weight: Rational, p: u32, q: u32, coeff: Expr) -> Self {
        Self::from_terms(weight, [((p, q), coeff)])
    }

    /// Collects terms with equal keys; coefficients are simplified and zero
    /// ones dropped.
    pub fn from_terms(weight: Rational, terms: impl IntoIterator<Item = (Key, Expr)>) -> Self {
        let mut grouped: BTreeMap<Key, Vec<Expr>> = BTreeMap::new();
        for (k, c) in terms {
            grouped.entry(k).or_default().push(c.simplify());
        }
        Self::from_grouped(weight, grouped)
    }

    fn from_grouped(weight: Rational, grouped: BTreeMap<Key, Vec<Expr>>) -> Self {
        let coeffs = grouped
            .into_iter()
            .filter_map(|(k, v)| {
                let c = symexpr::sum(v);
                (!c.is_zero()).then_some((k, c))
            })
            .collect();
        DensOp { weight, coeffs }
    }

    /// Builds an operator given as a polynomial in `λ̂ = ŵ + shift`:
    /// `terms` maps `(k, q)` to the coefficient of `λ̂^k ∂^q`.
    pub fn from_shifted(weight: Rational, shift: &Rational, terms: impl IntoIterator<Item = (Key, Expr)>) -> Self {
        let mut out = Vec::new();
        for ((k, q), c) in terms {
            for j in 0..=k {
                let factor = binomial(k, j) * pow_int(shift, (k - j) as i64).expect("nonnegative exponent");
                out.push(((j, q), c.scale(&factor)));
            }
        }
        Self::from_terms(weight, out)
    }

    pub fn weight(&self) -> &Rational {
        &self.weight
    }

    pub fn coeffs(&self) -> &BTreeMap<Key, Expr> {
        &self.coeffs
    }

    /// Coefficient of `ŵ^p ∂^q` (zero when absent).
    pub fn coeff(&self, p: u32, q: u32) -> Expr {
        self.coeffs.get(&(p, q)).cloned().unwrap_or_else(Expr::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Joint order in `ŵ` and `∂`.
    pub fn order(&self) -> u32 {
        self.coeffs.keys().map(|(p, q)| p + q).max().unwrap_or(0)
    }

    fn check_weight(&self, other: &DensOp) -> Result<Rational> {
        // The zero operator is homogeneous of every weight.
        if self.is_zero() {
            return Ok(other.weight.clone());
        }
        if other.is_zero() || self.weight == other.weight {
            return Ok(self.weight.clone());
        }
        Err(Error::WeightMismatch { left: Box::new(self.weight.clone()), right: Box::new(other.weight.clone()) })
    }

    pub fn add(&self, other: &DensOp) -> Result<DensOp> {
        let weight = self.check_weight(other)?;
        let mut grouped: BTreeMap<Key, Vec<Expr>> = BTreeMap::new();
        for (k, c) in self.coeffs.iter().chain(other.coeffs.iter()) {
            grouped.entry(*k).or_default().push(c.clone());
        }
        Ok(Self::from_grouped(weight, grouped))
    }

    pub fn sub(&self, other: &DensOp) -> Result<DensOp> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> DensOp {
        DensOp { weight: self.weight.clone(), coeffs: self.coeffs.iter().map(|(k, c)| (*k, -c)).collect() }
    }

    /// `f ∘ self`: multiplies every coefficient by `f` on the left.
    pub fn scale_left(&self, f: &Expr) -> DensOp {
        Self::from_terms(self.weight.clone(), self.coeffs.iter().map(|(k, c)| (*k, f * c)))
    }

    /// Normal-ordered composition `self ∘ other`.
    pub fn multiply(&self, other: &DensOp) -> DensOp {
        let nu = &other.weight;
        let max_q = self.coeffs.keys().map(|k| k.1).max().unwrap_or(0);
        let mut grouped: BTreeMap<Key, Vec<Expr>> = BTreeMap::new();
        for (&(r, s), b) in &other.coeffs {
            let mut derivs = vec![b.clone()];
            for k in 1..=max_q as usize {
                let next = derivs[k - 1].derivative();
                derivs.push(next);
            }
            for (&(p, q), a) in &self.coeffs {
                for k in 0..=q {
                    let bk = &derivs[k as usize];
                    if bk.is_zero() {
                        continue;
                    }
                    let ab = a * bk;
                    // (ŵ + ν)^p = Σ_j C(p, j) ν^(p-j) ŵ^j
                    for j in 0..=p {
                        let c = binomial(q, k) * binomial(p, j) * pow_int(nu, (p - j) as i64).unwrap();
                        if c.is_zero() {
                            continue;
                        }
                        grouped.entry((j + r, q - k + s)).or_default().push(ab.scale(&c));
                    }
                }
            }
        }
        Self::from_grouped(&self.weight + nu, grouped)
    }

    pub fn pow(&self, n: u32) -> DensOp {
        (0..n).fold(DensOp::identity(), |acc, _| acc.multiply(self))
    }

    /// Formal adjoint from `ŵ* = 1 - ŵ`, `∂* = -∂`, `t* = t`, `f* = f`,
    /// extended anti-multiplicatively.
    pub fn adjoint(&self) -> DensOp {
        let mut total = DensOp::zero(self.weight.clone());
        let t = DensOp::t_pow(self.weight.clone());
        for (&(p, q), a) in &self.coeffs {
            let sign = if q % 2 == 0 { Expr::one() } else { Expr::int(-1) };
            let d_star = DensOp::monomial(Rational::zero(), 0, q, sign);
            let w_star = DensOp::from_terms(
                Rational::zero(),
                (0..=p).map(|j| {
                    let c = binomial(p, j) * if j % 2 == 0 { Rational::one() } else { -Rational::one() };
                    ((j, 0), Expr::Const(c))
                }),
            );
            let term = d_star.multiply(&w_star).multiply(&DensOp::scalar(a.clone())).multiply(&t);
            total = total.add(&term).expect("adjoint preserves the weight");
        }
        total
    }

    /// `self ∘ other - other ∘ self`.
    pub fn commutator(&self, other: &DensOp) -> DensOp {
        self.multiply(other).sub(&other.multiply(self)).expect("both compositions have the same weight")
    }

    /// The member of the operator pencil acting on densities of weight
    /// `lambda`: `ŵ` replaced by `lambda`.
    pub fn restrict(&self, lambda: &Rational) -> PencilSlice {
        let mut grouped: BTreeMap<u32, Vec<Expr>> = BTreeMap::new();
        for (&(p, q), a) in &self.coeffs {
            let lp = pow_int(lambda, p as i64).unwrap();
            grouped.entry(q).or_default().push(a.scale(&lp));
        }
        PencilSlice::from_grouped(lambda.clone(), lambda + &self.weight, grouped)
    }

    pub fn apply(&self, rho: &Density) -> Density {
        let slice = self.restrict(&rho.weight);
        Density { weight: slice.weight_out.clone(), profile: slice.apply_to(&rho.profile) }
    }

    /// Exact coefficientwise equality after simplification.
    pub fn eq_exact(&self, other: &DensOp) -> bool {
        match self.sub(other) {
            Ok(diff) => diff.is_zero() && (self.weight == other.weight || self.is_zero() || other.is_zero()),
            Err(_) => false,
        }
    }

    /// Coefficientwise [`equal_probabilistic`]; weights must agree exactly.
    pub fn eq_probabilistic(&self, other: &DensOp, cfg: &EqualityConfig) -> Result<bool> {
        if self.weight != other.weight && !(self.is_zero() && other.is_zero()) {
            return Ok(false);
        }
        let keys: std::collections::BTreeSet<Key> = self.coeffs.keys().chain(other.coeffs.keys()).copied().collect();
        for (p, q) in keys {
            if !equal_probabilistic(&self.coeff(p, q), &other.coeff(p, q), cfg)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The operator in the DSL, e.g. `t^2 * (d^2 - w - w^2)`.
    pub fn to_dsl(&self) -> String {
        dsl::print_op(self)
    }
}

impl fmt::Display for DensOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_dsl())
    }
}

/// A density `ρ(x)|dx|^λ`.
#[derive(Clone, Debug, PartialEq)]
pub struct Density {
    pub weight: Rational,
    pub profile: Expr,
}

impl Density {
    pub fn new(weight: Rational, profile: Expr) -> Self {
        Density { weight, profile: profile.simplify() }
    }
}

/// An ordinary differential operator `Σ c_q(x) ∂^q` mapping densities of
/// weight `weight_in` to weight `weight_out`.
#[derive(Clone, Debug, PartialEq)]
pub struct PencilSlice {
    pub weight_in: Rational,
    pub weight_out: Rational,
    coeffs: BTreeMap<u32, Expr>,
}

impl PencilSlice {
    pub fn new(weight_in: Rational, weight_out: Rational, coeffs: impl IntoIterator<Item = (u32, Expr)>) -> Self {
        let mut grouped: BTreeMap<u32, Vec<Expr>> = BTreeMap::new();
        for (q, c) in coeffs {
            grouped.entry(q).or_default().push(c.simplify());
        }
        Self::from_grouped(weight_in, weight_out, grouped)
    }

    fn from_grouped(weight_in: Rational, weight_out: Rational, grouped: BTreeMap<u32, Vec<Expr>>) -> Self {
        let coeffs = grouped
            .into_iter()
            .filter_map(|(q, v)| {
                let c = symexpr::sum(v);
                (!c.is_zero()).then_some((q, c))
            })
            .collect();
        PencilSlice { weight_in, weight_out, coeffs }
    }

    pub fn coeffs(&self) -> &BTreeMap<u32, Expr> {
        &self.coeffs
    }

    pub fn coeff(&self, q: u32) -> Expr {
        self.coeffs.get(&q).cloned().unwrap_or_else(Expr::zero)
    }

    pub fn apply_to(&self, profile: &Expr) -> Expr {
        let profile = profile.simplify();
        let mut terms = Vec::new();
        let mut deriv = profile;
        let max_q = self.coeffs.keys().max().copied().unwrap_or(0);
        for q in 0..=max_q {
            if let Some(c) = self.coeffs.get(&q) {
                terms.push(c * &deriv);
            }
            if q < max_q {
                deriv = deriv.derivative();
            }
        }
        symexpr::sum(terms)
    }

    /// `self ∘ other`, with `other` landing in the weight `self` acts on.
    pub fn compose(&self, other: &PencilSlice) -> Result<PencilSlice> {
        if other.weight_out != self.weight_in {
            return Err(Error::WeightMismatch {
                left: Box::new(self.weight_in.clone()),
                right: Box::new(other.weight_out.clone()),
            });
        }
        let mut grouped: BTreeMap<u32, Vec<Expr>> = BTreeMap::new();
        for (&s, e) in &other.coeffs {
            let mut deriv = e.clone();
            let max_q = self.coeffs.keys().max().copied().unwrap_or(0);
            for k in 0..=max_q {
                for (&q, c) in self.coeffs.range(k..) {
                    grouped.entry(q - k + s).or_default().push((c * &deriv).scale(&binomial(q, k)));
                }
                if k < max_q {
                    deriv = deriv.derivative();
                }
            }
        }
        Ok(Self::from_grouped(other.weight_in.clone(), self.weight_out.clone(), grouped))
    }

    pub fn eq_probabilistic(&self, other: &PencilSlice, cfg: &EqualityConfig) -> Result<bool> {
        if self.weight_in != other.weight_in || self.weight_out != other.weight_out {
            return Ok(false);
        }
        let keys: std::collections::BTreeSet<u32> = self.coeffs.keys().chain(other.coeffs.keys()).copied().collect();
        for q in keys {
            if !equal_probabilistic(&self.coeff(q), &other.coeff(q), cfg)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The slice in the DSL, using `d` for `∂`.
    pub fn to_dsl(&self) -> String {
        let as_op = DensOp::from_terms(Rational::zero(), self.coeffs.iter().map(|(q, c)| ((0, *q), c.clone())));
        as_op.to_dsl()
    }
}
