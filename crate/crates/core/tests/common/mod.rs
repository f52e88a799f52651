#![allow(dead_code)]

use densfact::densalg::DensOp;
use densfact::symexpr::{parse_expr, rat, Expr, Rational};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn e(s: &str) -> Expr {
    parse_expr(s).unwrap().simplify()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Integer-coefficient polynomial of degree at most `deg`.
pub fn poly(r: &mut ChaCha8Rng, deg: u32) -> Expr {
    let terms = (0..=deg).map(|k| Expr::x().powi(k as i64).scale(&rat(r.gen_range(-3..=3), 1)));
    densfact::symexpr::sum(terms)
}

pub fn nonzero_poly(r: &mut ChaCha8Rng, deg: u32) -> Expr {
    loop {
        let p = poly(r, deg);
        if !p.is_zero() {
            return p;
        }
    }
}

pub fn rational(r: &mut ChaCha8Rng) -> Rational {
    rat(r.gen_range(-6..=6), r.gen_range(1..=4))
}

/// Operator of joint order at most 2 with cubic coefficients.
pub fn operator(r: &mut ChaCha8Rng) -> DensOp {
    let weight = rational(r);
    let keys = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)];
    DensOp::from_terms(weight, keys.into_iter().map(|k| (k, poly(r, 3))))
}

/// `(ax + b)/(cx + d)` with `ad - bc > 0`, `c ≥ 0`, `d ≥ 1`, and its inverse.
pub fn mobius(r: &mut ChaCha8Rng) -> (Expr, Expr) {
    loop {
        let (a, b, c, d) = (r.gen_range(-4..=4), r.gen_range(-4..=4), r.gen_range(0..=3), r.gen_range(1..=4));
        if a * d - b * c <= 0 {
            continue;
        }
        let fwd = e(&format!("({a}*x + {b})/({c}*x + {d})"));
        let inv = e(&format!("({d}*x - {b})/({a} - {c}*x)"));
        return (fwd, inv);
    }
}
