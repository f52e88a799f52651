//! Differential operators on the algebra of densities on the real line.
//!
//! A homogeneous operator of weight `μ` is kept in normal order
//! `t^μ Σ a_pq(x) ŵ^p ∂^q`, where `t` is the auxiliary invertible variable
//! standing for `|dx|`, `ŵ = t ∂/∂t` is the weight operator and `∂ = d/dx`.
//! On top of that algebra the crate provides the generalized Sturm-Liouville
//! operator, its factorization criterion and incomplete factorization, the
//! general second-order obstruction system, coordinate-change laws with the
//! Schwarzian derivative, and the Duval-Ovsienko map.

pub mod cli;
pub mod coords;
pub mod densalg;
pub mod duval;
pub mod error;
pub mod riccati;
pub mod sturm;
pub mod symexpr;

pub use error::{Error, Result};
pub use symexpr::{EqualityConfig, Expr, Rational};
