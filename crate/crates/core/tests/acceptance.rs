//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};

use common::{e, mobius, nonzero_poly, operator, poly, rational, rng};
use densfact::coords::{check_psi_invariance, schwarzian, transform_gsl, transform_potential, CoordChange};
use densfact::densalg::DensOp;
use densfact::duval::{duval_ovsienko_map, pencil_degrees, WeightedOp2};
use densfact::riccati::{extract_coefficients, factorize_second_order, verify_factorization};
use densfact::sturm::{
    build_gsl, classical_factor_from_kernel, factorize_gsl, factorize_incomplete, potential, psi_invariant,
    FactorizationOutcome, GenSL, Sign,
};
use densfact::symexpr::{equal_probabilistic, evaluate, is_zero_probabilistic, rat, EqualityConfig, Expr, Rational};
use rand::Rng;

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn cfg() -> EqualityConfig {
    EqualityConfig::default()
}

fn eq(a: &Expr, b: &Expr) -> bool {
    equal_probabilistic(a, b, &cfg()).unwrap()
}

fn c1_non_factorizable() -> Outcome {
    let g = GenSL::new(Expr::zero(), Expr::int(-1));
    for sign in Sign::both() {
        match factorize_gsl(&g, sign, &cfg()).map_err(|e| e.to_string())? {
            FactorizationOutcome::Obstructed { residual } => {
                ensure(residual.as_const() == Some(&rat(1, 4)), || format!("residual {residual}"))?
            }
            other => return Err(format!("{} on branch {}", other.tag(), sign.as_str())),
        }
    }
    Ok(())
}

fn c2_incomplete_theorem() -> Outcome {
    let g = GenSL::new(Expr::zero(), Expr::int(-1));
    let l = build_gsl(&g);
    for (sign, b1) in [(Sign::Plus, 1), (Sign::Minus, -1)] {
        let inc = factorize_incomplete(&g, sign, &cfg()).map_err(|e| e.to_string())?;
        ensure(inc.b0.is_zero(), || format!("b0 = {}", inc.b0))?;
        ensure(inc.b1 == Expr::int(b1), || format!("b1 = {}", inc.b1))?;
        ensure(inc.f == Expr::frac(1, 4), || format!("f = {}", inc.f))?;
        ensure(inc.reexpand().eq_exact(&l), || format!("re-expansion {}", inc.reexpand()))?;
    }
    Ok(())
}

fn c3_complete_witness() -> Outcome {
    let g = GenSL::new(Expr::zero(), e("-1/x^2"));
    let psi = psi_invariant(&g, &cfg()).map_err(|e| e.to_string())?;
    ensure(psi == e("x^(1/2)"), || format!("psi = {psi}"))?;
    let l = build_gsl(&g);
    for (sign, b1) in [(Sign::Plus, "1/x"), (Sign::Minus, "-1/x")] {
        let out = factorize_gsl(&g, sign, &cfg()).unwrap();
        let FactorizationOutcome::Complete { beta, .. } = &out else {
            return Err(format!("{} on branch {}", out.tag(), sign.as_str()));
        };
        let (b0, b1_got) = beta.in_lambda_hat();
        ensure(eq(&b0, &e("1/(2*x)")), || format!("b0 = {b0}"))?;
        ensure(eq(&b1_got, &e(b1)), || format!("b1 = {b1_got}"))?;
        ensure(verify_factorization(&l, &out, &cfg()).unwrap(), || "verify_factorization false".into())?;
        let inc = factorize_incomplete(&g, sign, &cfg()).unwrap();
        ensure(is_zero_probabilistic(&inc.f, &cfg()).unwrap(), || format!("f = {}", inc.f))?;
    }
    Ok(())
}

fn c4_frobenius_family() -> Outcome {
    let mut r = rng(4);
    let d2 = DensOp::d().pow(2);
    for _ in 0..10 {
        let c = rat(r.gen_range(1..=40), r.gen_range(1..=7));
        let phi = Expr::x() + Expr::constant(c.clone());
        let (beta, alpha) = classical_factor_from_kernel(&Expr::zero(), &Expr::zero(), &phi, &cfg()).unwrap();
        let inv = phi.recip();
        ensure(eq(&beta, &inv) && eq(&alpha, &-inv.clone()), || format!("c = {c}: β = {beta}, α = {alpha}"))?;
        let left = DensOp::d().sub(&DensOp::scalar(alpha)).unwrap();
        let right = DensOp::d().sub(&DensOp::scalar(beta)).unwrap();
        let prod = left.multiply(&right);
        ensure(prod.eq_probabilistic(&d2, &cfg()).unwrap(), || format!("c = {c}: product {prod}"))?;
    }
    Ok(())
}

fn c5_adjoint_suite() -> Outcome {
    let mut r = rng(5);
    for i in 0..100 {
        let a = operator(&mut r);
        let b = operator(&mut r);
        ensure(a.adjoint().adjoint().eq_exact(&a), || format!("#{i}: (A*)* != A for {a}"))?;
        let lhs = a.multiply(&b).adjoint();
        let rhs = b.adjoint().multiply(&a.adjoint());
        ensure(lhs.eq_exact(&rhs), || format!("#{i}: (AB)* != B*A* for {a} ; {b}"))?;
    }
    for i in 0..20 {
        let (ca, cb, cc, mu) = (poly(&mut r, 3), poly(&mut r, 3), poly(&mut r, 3), rational(&mut r));
        let l = DensOp::from_terms(mu.clone(), [((0, 1), ca.clone()), ((1, 0), cb.clone()), ((0, 0), cc.clone())]);
        let one_minus_mu = Rational::from_integer(1.into()) - &mu;
        let expected = DensOp::from_terms(
            mu,
            [((0, 1), -ca.clone()), ((1, 0), -cb.clone()), ((0, 0), -ca.derivative() + cb.scale(&one_minus_mu) + cc)],
        );
        ensure(l.adjoint().eq_exact(&expected), || format!("#{i}: first-order adjoint of {l}"))?;
    }
    Ok(())
}

fn random_gsl(r: &mut rand_chacha::ChaCha8Rng) -> GenSL {
    GenSL::new(poly(r, 3), poly(r, 3))
}

fn c6_self_adjoint_weight_two() -> Outcome {
    let mut r = rng(6);
    for i in 0..50 {
        let g = random_gsl(&mut r);
        let l = build_gsl(&g);
        ensure(l.adjoint().eq_exact(&l), || format!("#{i}: L* != L for {l}"))?;
        let twice = l.add(&l).unwrap();
        ensure(DensOp::w().commutator(&l).eq_exact(&twice), || format!("#{i}: [w, L] != 2L for {l}"))?;
    }
    Ok(())
}

fn c7_pencil_consistency() -> Outcome {
    let mut r = rng(7);
    for i in 0..50 {
        let g = random_gsl(&mut r);
        let slice = build_gsl(&g).restrict(&rat(-1, 2));
        let u = potential(&g);
        let ok = slice.coeffs().keys().all(|q| [0, 2].contains(q))
            && eq(&slice.coeff(2), &Expr::one())
            && eq(&slice.coeff(0), &u);
        ensure(ok, || format!("#{i}: restriction {} vs potential {u}", slice.to_dsl()))?;
    }
    for i in 0..50 {
        let (a, b, lambda) = (operator(&mut r), operator(&mut r), rational(&mut r));
        let lhs = a.multiply(&b).restrict(&lambda);
        let rhs = a.restrict(&(&lambda + b.weight())).compose(&b.restrict(&lambda)).unwrap();
        ensure(lhs.eq_probabilistic(&rhs, &cfg()).unwrap(), || format!("#{i}: pencil of {a} ; {b} at {lambda}"))?;
    }
    Ok(())
}

fn sample_xs(seed: u64) -> Vec<f64> {
    let mut r = rng(seed);
    (0..24).map(|_| r.gen_range(0.1..=10.0)).collect()
}

/// Increasing self-maps of the positive half-line: polynomials with
/// nonnegative coefficients and Möbius maps with nonnegative entries.
fn random_map(r: &mut rand_chacha::ChaCha8Rng) -> Expr {
    match r.gen_range(0..3) {
        0 => loop {
            let (a, b, c, d) = (r.gen_range(1..=4), r.gen_range(0..=4), r.gen_range(0..=3), r.gen_range(1..=4));
            if a * d - b * c > 0 {
                break e(&format!("({a}*x + {b})/({c}*x + {d})"));
            }
        },
        1 => Expr::x().powi(r.gen_range(2..=3)).scale(&rat(r.gen_range(1..=3), 1)),
        _ => {
            let coeffs: Vec<i64> = (0..4).map(|_| r.gen_range(0..=3)).collect();
            e(&format!("{} + {}*x + {}*x^2 + {}*x^3", coeffs[0], coeffs[1] + 1, coeffs[2], coeffs[3]))
        }
    }
}

fn c8_schwarzian_laws() -> Outcome {
    let mut r = rng(8);
    let xs = sample_xs(80);
    for i in 0..20 {
        let (f, _) = mobius(&mut r);
        let s = schwarzian(&f).unwrap();
        let mut accepted = 0;
        for &x0 in &xs {
            if let Some(v) = evaluate(&s, x0) {
                accepted += 1;
                ensure(v.abs() < 1e-9, || format!("#{i}: S({f}) = {v} at {x0}"))?;
            }
        }
        ensure(accepted >= 20, || format!("#{i}: only {accepted} points defined for {f}"))?;
    }
    for i in 0..20 {
        let (f, g) = (random_map(&mut r), random_map(&mut r));
        let lhs = schwarzian(&f.substitute(&g)).unwrap();
        let dg = g.derivative();
        let rhs = schwarzian(&f).unwrap().substitute(&g) * dg.powi(2) + schwarzian(&g).unwrap();
        ensure(eq(&lhs, &rhs), || format!("#{i}: cocycle fails for f = {f}, g = {g}"))?;
    }
    let s = schwarzian(&e("x^2")).unwrap();
    ensure(s == e("-3/(2*x^2)"), || format!("S(x^2) = {s}"))
}

/// `γ = 0`, `θ = -1/Q²` with `Q = A + 2Bx + Cx²`, `B² - AC = ¼`: then
/// `ψ = Q^(1/2)` solves `ψ'' + uψ = 0`.
fn complete_case(r: &mut rand_chacha::ChaCha8Rng) -> GenSL {
    let a = rat(r.gen_range(1..=5), r.gen_range(1..=3));
    let b = rat(r.gen_range(1..=6), 2);
    let c = (&b * &b - rat(1, 4)) / &a;
    let q = Expr::constant(a) + Expr::x().scale(&(b * rat(2, 1))) + Expr::x().powi(2).scale(&c);
    GenSL::new(Expr::zero(), -q.powi(-2))
}

/// Orientation-preserving bijections of the positive half-line.
fn half_line_map(r: &mut rand_chacha::ChaCha8Rng) -> CoordChange {
    let k = rat(r.gen_range(1..=4), 1);
    let (f, inv) = match r.gen_range(0..4) {
        0 => (Expr::x().scale(&k), Expr::x().scale(&k.recip())),
        1 => (e("x^2"), e("x^(1/2)")),
        2 => (e("x^3").scale(&k), Expr::x().scale(&k.recip()).pow(rat(1, 3))),
        _ => (e("x^(1/2)"), e("x^2")),
    };
    CoordChange::new(f, Some(inv)).unwrap()
}

fn c9_transformation_coherence() -> Outcome {
    let mut r = rng(9);
    for i in 0..20 {
        let g = GenSL::new(poly(&mut r, 2), nonzero_poly(&mut r, 2));
        let (f, inv) = mobius(&mut r);
        let c = CoordChange::new(f.clone(), Some(inv)).unwrap();
        let lhs = potential(&transform_gsl(&g, &c).unwrap());
        let rhs = transform_potential(&potential(&g), &c).unwrap();
        ensure(eq(&lhs, &rhs), || format!("#{i}: potential law for {g:?} under {f}"))?;
        let invariant = check_psi_invariance(&g, &c, &cfg()).map_err(|e| format!("#{i}: {e}"))?;
        ensure(invariant, || format!("#{i}: psi invariance for {g:?} under {f}"))?;
    }
    let mut cases: Vec<GenSL> = (0..4).map(|_| complete_case(&mut r)).collect();
    cases.push(GenSL::new(Expr::zero(), Expr::int(-1)));
    cases.push(GenSL::new(e("x"), e("x^2 - 3")));
    cases.push(GenSL::new(e("x^2"), e("-x")));
    cases.push(GenSL::new(Expr::int(1), e("-x^3 - 1")));
    cases.push(GenSL::new(Expr::zero(), Expr::zero()));
    cases.push(GenSL::new(e("x"), e("x^2")));
    for (i, g) in cases.iter().enumerate() {
        let c = half_line_map(&mut r);
        c.validate(&cfg()).map_err(|e| format!("case {i}: {e}"))?;
        let moved = transform_gsl(g, &c).unwrap();
        for sign in Sign::both() {
            let before = factorize_gsl(g, sign, &cfg()).map_err(|e| format!("case {i}: {e}"))?;
            let after = factorize_gsl(&moved, sign, &cfg()).map_err(|e| format!("case {i} moved: {e}"))?;
            ensure(before.tag() == after.tag(), || {
                format!("case {i}: {} becomes {} under {}", before.tag(), after.tag(), c.forward())
            })?;
        }
    }
    Ok(())
}

fn same_factors(a: &FactorizationOutcome, b: &FactorizationOutcome) -> bool {
    match (a, b) {
        (
            FactorizationOutcome::Complete { alpha: a1, beta: b1 },
            FactorizationOutcome::Complete { alpha: a2, beta: b2 },
        ) => eq(&a1.c0, &a2.c0) && eq(&a1.c1, &a2.c1) && eq(&b1.c0, &b2.c0) && eq(&b1.c1, &b2.c1),
        (FactorizationOutcome::Degenerate(x), FactorizationOutcome::Degenerate(y)) => {
            eq(&x.beta1, &y.beta1) && eq(&x.shift, &y.shift) && eq(&x.potential, &y.potential)
        }
        (FactorizationOutcome::Obstructed { .. }, FactorizationOutcome::Obstructed { .. }) => true,
        _ => false,
    }
}

fn c10_cross_module_agreement() -> Outcome {
    let mut r = rng(10);
    let mut corpus = Vec::new();
    for _ in 0..20 {
        // θ = γ² - s with s positive on the domain keeps ψ real.
        let gamma = poly(&mut r, 2);
        let s = Expr::x().powi(2).scale(&rat(r.gen_range(0..=3), 1)) + Expr::int(r.gen_range(1..=4));
        corpus.push(GenSL::new(gamma.clone(), gamma.powi(2) - s));
    }
    let sq = CoordChange::new(e("x^2"), Some(e("x^(1/2)"))).unwrap();
    for _ in 0..6 {
        let g = complete_case(&mut r);
        corpus.push(if r.gen_bool(0.5) { transform_gsl(&g, &sq).unwrap() } else { g });
    }
    for _ in 0..4 {
        let gamma = poly(&mut r, 2);
        corpus.push(GenSL::new(gamma.clone(), gamma.powi(2)));
    }
    let mut tags = std::collections::BTreeMap::new();
    for (i, g) in corpus.iter().enumerate() {
        let l = build_gsl(g);
        let d = extract_coefficients(&l).map_err(|e| format!("#{i}: {e}"))?;
        ensure(eq(&d.discriminant(), &g.radicand().scale(&rat(4, 1))), || format!("#{i}: discriminant"))?;
        for sign in Sign::both() {
            let ours = factorize_second_order(&d, sign, &cfg()).map_err(|e| format!("#{i}: {e}"))?;
            let theirs = factorize_gsl(g, sign, &cfg()).map_err(|e| format!("#{i}: {e}"))?;
            ensure(ours.tag() == theirs.tag(), || format!("#{i}: {} vs {} for {g:?}", ours.tag(), theirs.tag()))?;
            ensure(same_factors(&ours, &theirs), || format!("#{i}: factors differ for {g:?}"))?;
            if ours.tag() == "complete" {
                ensure(verify_factorization(&l, &ours, &cfg()).unwrap(), || format!("#{i}: re-expansion"))?;
            }
            *tags.entry(ours.tag()).or_insert(0) += 1;
        }
    }
    ensure(tags.len() == 3, || format!("corpus does not exercise every outcome: {tags:?}"))
}

fn admissible(r: &mut rand_chacha::ChaCha8Rng) -> Rational {
    loop {
        let w = rational(r);
        if densfact::duval::check_weight(&w).is_ok() {
            return w;
        }
    }
}

fn c11_duval_ovsienko() -> Outcome {
    let mut r = rng(11);
    for i in 0..30 {
        let src = WeightedOp2::new(poly(&mut r, 3), poly(&mut r, 3), poly(&mut r, 3), admissible(&mut r));
        let same = duval_ovsienko_map(&src, &src.weight.clone()).unwrap();
        ensure(same == src, || format!("#{i}: not the identity at the source weight"))?;
        let (kappa, lambda) = (admissible(&mut r), rational(&mut r));
        let two_step = duval_ovsienko_map(&duval_ovsienko_map(&src, &kappa).unwrap(), &lambda).unwrap();
        let direct = duval_ovsienko_map(&src, &lambda).unwrap();
        ensure(two_step.eq_probabilistic(&direct, &cfg()).unwrap(), || {
            format!("#{i}: composition through {kappa} to {lambda}")
        })?;
    }
    let mut attained = 0;
    for i in 0..20 {
        let src =
            WeightedOp2::new(nonzero_poly(&mut r, 3), nonzero_poly(&mut r, 3), poly(&mut r, 3), admissible(&mut r));
        let deg = pencil_degrees(&src, &cfg()).unwrap();
        ensure(deg[0] == 0 && deg[1] <= 1 && deg[2] <= 2, || format!("#{i}: degrees {deg:?}"))?;
        attained += (deg == [0, 1, 2]) as usize;
    }
    ensure(attained >= 15, || format!("generic degrees attained only {attained} times"))?;
    let worked =
        duval_ovsienko_map(&WeightedOp2::new(Expr::one(), Expr::x(), Expr::zero(), rat(1, 1)), &rat(2, 1)).unwrap();
    ensure(worked.a0 == Expr::frac(-1, 3), || format!("a0 = {}", worked.a0))
}

fn c12_cli_golden() -> Outcome {
    let cases: [(&[&str], &str); 3] = [
        (
            &["sl-factor", "--gamma", "0", "--theta", "-1"],
            r#"{"ok":true,"result":{"tag":"obstructed","residual":"1/4"}}"#,
        ),
        (&["adjoint", "w"], r#"{"ok":true,"result":{"op":"1 - w","weight":"0"}}"#),
        (&["schwarzian", "x"], r#"{"ok":true,"result":"0"}"#),
    ];
    for (args, expected) in cases {
        let (code, out) = densfact::cli::run(std::iter::once("densfact").chain(args.iter().copied()));
        ensure(code == 0 && out == expected, || format!("{args:?} gave [{code}] {out}"))?;
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("non-factorizable constant theta", c1_non_factorizable),
        ("incomplete factorization theorem", c2_incomplete_theorem),
        ("complete factorization witness", c3_complete_witness),
        ("classical one-parameter family", c4_frobenius_family),
        ("adjoint anti-involution", c5_adjoint_suite),
        ("self-adjointness and weight", c6_self_adjoint_weight_two),
        ("pencil consistency", c7_pencil_consistency),
        ("schwarzian laws", c8_schwarzian_laws),
        ("transformation coherence", c9_transformation_coherence),
        ("cross-module agreement", c10_cross_module_agreement),
        ("duval-ovsienko map", c11_duval_ovsienko),
        ("cli golden output", c12_cli_golden),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panic: {msg}"))
        });
        match result {
            Ok(()) => println!("criterion {:>2} {name}: PASS", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {:>2} {name}: FAIL ({why})", i + 1);
            }
        }
    }
    if failures > 0 {
        std::process::exit(1);
    }
}
