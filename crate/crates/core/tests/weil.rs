use cbct_core::characters::Characters;
use cbct_core::weil::*;
use cbct_core::{Cx, Error, Fe, FieldCtx};

fn f(p: u32, n: u32) -> FieldCtx {
    FieldCtx::new(p, n, None).unwrap()
}

fn close(a: Cx, b: Cx, tol: f64) -> bool {
    (a - b).norm() < tol
}

fn all_k(ctx: &FieldCtx) -> Vec<GoldParams> {
    (1..ctx.n()).map(|k| GoldParams::new(ctx, k).unwrap()).collect()
}

#[test]
fn gold_params_fields() {
    let ctx = f(3, 4);
    let gp = GoldParams::new(&ctx, 2).unwrap();
    assert_eq!((gp.e, gp.d_lin, gp.m, gp.t, gp.ne_even), (2, 4, Some(2), Some(1), true));
    let gp = GoldParams::new(&f(5, 3), 1).unwrap();
    assert_eq!((gp.e, gp.d_lin, gp.m, gp.t, gp.ne_even), (1, 1, None, None, false));
    assert_eq!(GoldParams::from_exponent(&f(3, 3), 10).unwrap().k, 2);
    assert_eq!(GoldParams::from_exponent(&f(3, 3), 5).unwrap_err(), Error::NotAGoldExponent(5));
    assert_eq!(GoldParams::new(&f(3, 3), 3).unwrap_err(), Error::InvalidK { k: 3, n: 3 });
}

#[test]
fn direct_sum_examples() {
    let ctx = f(3, 3);
    let ch = Characters::<f64>::new(&ctx);
    let q = 27.0;
    assert!(close(s_alpha_beta_direct(&ch, 10, Fe::ZERO, Fe::ZERO), Cx::new(q, 0.0), 1e-9));
    for a in ctx.elements() {
        for b in ctx.elements() {
            let s = s_alpha_beta_direct(&ch, 1, a, b);
            let expect = if ctx.add(a, b).is_zero() { ch.chi1(b) * q } else { Cx::new(0.0, 0.0) };
            assert!(close(s, expect, 1e-9 * q));
        }
    }
    let gp = GoldParams::new(&ctx, 2).unwrap();
    let g = ctx.generator();
    let closed = gold_s_alpha_beta(&ch, &gp, g, ctx.mul(g, g)).unwrap().value;
    assert!(close(s_alpha_beta_direct(&ch, 10, g, ctx.mul(g, g)), closed, 1e-6 * q));
}

#[test]
fn gauss_expansion_matches_direct() {
    for (p, n, d, pairs) in [(3, 2, 4, None), (5, 2, 6, Some((1, 3)))] {
        let ctx = f(p, n);
        let ch = Characters::<f64>::new(&ctx);
        let gauss = ch.conjugate_gauss_sums();
        let q = ctx.q() as f64;
        let list: Vec<(Fe, Fe)> = match pairs {
            None => ctx.nonzero().flat_map(|a| ctx.nonzero().map(move |b| (a, b))).collect(),
            Some((i, j)) => vec![(ctx.exp(i), ctx.exp(j))],
        };
        for (a, b) in list {
            let s = s_alpha_beta_gauss(&ch, &gauss, d, a, b).unwrap();
            assert!(close(s, s_alpha_beta_direct(&ch, d, a, b), 1e-6 * q), "({a},{b})");
        }
        assert_eq!(
            s_alpha_beta_gauss(&ch, &gauss, d, Fe::ZERO, Fe::ONE).unwrap_err(),
            Error::ZeroCoefficient
        );
    }
}

#[test]
fn s0_closed_form_examples() {
    let ctx = f(5, 2);
    let ch = Characters::<f64>::new(&ctx);
    let gp = GoldParams::new(&ctx, 1).unwrap();
    let v = coulter_s0(&ch, &gp, Fe::ONE).unwrap();
    assert_eq!(v.branch, Branch::Co98_1EvenGeneric);
    assert!(close(v.value, Cx::new(-5.0, 0.0), 1e-12));
    let minus_one = ctx.neg(Fe::ONE);
    let a = ctx.nonzero().find(|&a| ctx.pow(a, 4) == minus_one).unwrap();
    let v = coulter_s0(&ch, &gp, a).unwrap();
    assert_eq!(v.branch, Branch::Co98_1EvenSpecial);
    assert!(close(v.value, Cx::new(25.0, 0.0), 1e-12));
    assert!(close(v.value, s_k_direct(&ch, &gp, a, Fe::ZERO), 1e-6 * 125.0));

    let ctx = f(5, 3);
    let ch = Characters::<f64>::new(&ctx);
    let gp = GoldParams::new(&ctx, 1).unwrap();
    let v = coulter_s0(&ch, &gp, Fe::ONE).unwrap();
    assert_eq!(v.branch, Branch::Co98_1Odd);
    let expect = Cx::new(5.0 * 5f64.sqrt(), 0.0);
    assert!(close(v.value, expect, 1e-9));
    let tol = 1e-6 * 125f64.sqrt() * 125.0;
    assert!(close(s_k_direct(&ch, &gp, Fe::ONE, Fe::ZERO), expect, tol));
    assert_eq!(coulter_s0(&ch, &gp, Fe::ZERO).unwrap_err(), Error::ZeroA);
}

#[test]
fn s_k_direct_trivial_cases() {
    let ctx = f(3, 3);
    let ch = Characters::<f64>::new(&ctx);
    let gp = GoldParams::new(&ctx, 1).unwrap();
    assert!(close(s_k_direct(&ch, &gp, Fe::ZERO, Fe::ZERO), Cx::new(27.0, 0.0), 1e-9));
    for b in ctx.nonzero() {
        assert!(s_k_direct(&ch, &gp, Fe::ZERO, b).norm() < 1e-9);
    }
    let g = ctx.generator();
    let v = coulter_s(&ch, &gp, Fe::ONE, g).unwrap();
    assert!(close(v.value, s_k_direct(&ch, &gp, Fe::ONE, g), 1e-6 * 27.0));
    let v = coulter_s(&ch, &gp, Fe::ONE, Fe::ONE).unwrap();
    assert_eq!(v.branch, Branch::Co98PpOdd);
    assert!(close(v.value, s_k_direct(&ch, &gp, Fe::ONE, Fe::ONE), 1e-6 * 27.0 * 27f64.sqrt()));
}

#[test]
fn closed_forms_match_direct_sums() {
    for (p, n) in [(3, 2), (5, 2), (3, 3), (3, 4), (7, 2), (5, 3)] {
        let ctx = f(p, n);
        let ch = Characters::<f64>::new(&ctx);
        let q = ctx.q() as f64;
        let tol = 1e-6 * q * q.sqrt();
        for gp in all_k(&ctx) {
            for a in ctx.nonzero() {
                let s0 = coulter_s0(&ch, &gp, a).unwrap();
                let via_s = coulter_s(&ch, &gp, a, Fe::ZERO).unwrap();
                assert_eq!(s0, via_s);
                for b in ctx.elements() {
                    let v = coulter_s(&ch, &gp, a, b).unwrap();
                    let direct = s_k_direct(&ch, &gp, a, b);
                    assert!(close(v.value, direct, tol), "p={p} n={n} k={} A={a} B={b} {}", gp.k, v.branch);
                    let mag = v.value.norm();
                    let allowed: Vec<f64> = match v.branch {
                        Branch::Co98NonppZero => vec![0.0],
                        Branch::Co98_1Odd | Branch::Co98PpOdd => vec![q.sqrt()],
                        Branch::Co98_1EvenGeneric | Branch::Co98PpEven => vec![q.sqrt()],
                        Branch::Co98_1EvenSpecial | Branch::Co98NonppRoot => {
                            vec![q.sqrt() * (p as f64).powi(gp.e as i32)]
                        }
                        other => panic!("unexpected branch {other}"),
                    };
                    assert!(allowed.iter().any(|&m| (mag - m).abs() < 1e-9 * q), "{mag}");
                }
            }
        }
    }
}

#[test]
fn inconsistent_non_permutation_gives_zero() {
    let ctx = f(3, 4);
    let ch = Characters::<f64>::new(&ctx);
    let gp = GoldParams::new(&ctx, 2).unwrap();
    let a = ctx.nonzero().find(|&a| coulter_condition(&ctx, &gp, a)).unwrap();
    let fa = coulter_map(&ctx, &gp, a);
    assert!(!fa.is_permutation());
    let b = ctx
        .nonzero()
        .find(|&b| fa.solve(&ctx, ctx.neg(ctx.frobenius(b, gp.k))).is_none())
        .unwrap();
    let v = coulter_s(&ch, &gp, a, b).unwrap();
    assert_eq!(v.branch, Branch::Co98NonppZero);
    assert_eq!(v.value, Cx::new(0.0, 0.0));
    assert!(s_k_direct(&ch, &gp, a, b).norm() < 1e-6 * 81.0 * 9.0);
}

#[test]
fn phase_is_independent_of_the_root() {
    let mut multi = 0;
    for (p, n) in [(3, 4), (5, 2), (3, 2), (7, 2)] {
        let ctx = f(p, n);
        let ch = Characters::<f64>::new(&ctx);
        for gp in all_k(&ctx) {
            for a in ctx.nonzero().filter(|&a| coulter_condition(&ctx, &gp, a)) {
                let fa = coulter_map(&ctx, &gp, a);
                for b in ctx.nonzero() {
                    let roots = fa.solutions(&ctx, ctx.neg(ctx.frobenius(b, gp.k)));
                    if roots.len() > 1 {
                        multi += 1;
                    }
                    let phases: Vec<Cx> = roots
                        .iter()
                        .map(|&x| ch.chi1(ctx.mul(a, ctx.pow_u(x, gp.exponent()))))
                        .collect();
                    for w in phases.windows(2) {
                        assert!(close(w[0], w[1], 1e-9));
                    }
                }
            }
        }
    }
    assert!(multi > 0);
}

#[test]
fn explicit_root_solves_the_linearized_equation() {
    for (p, n) in [(3, 3), (5, 3), (3, 5), (7, 3)] {
        let ctx = f(p, n);
        for gp in all_k(&ctx).into_iter().filter(|gp| !gp.ne_even) {
            for a in ctx.nonzero().step_by(3) {
                let fa = coulter_map(&ctx, &gp, a);
                for b in ctx.elements().step_by(5) {
                    let x0 = coulter_root_explicit(&ctx, &gp, a, b).unwrap();
                    assert_eq!(fa.eval(&ctx, x0), ctx.neg(ctx.frobenius(b, gp.k)));
                }
            }
        }
    }
}

#[test]
fn gold_degenerate_cases() {
    let ctx = f(3, 2);
    let ch = Characters::<f64>::new(&ctx);
    let gp = GoldParams::new(&ctx, 1).unwrap();
    let minus_one = ctx.neg(Fe::ONE);
    let roots: Vec<Fe> = ctx
        .nonzero()
        .filter(|&b| ctx.pow(b, ctx.p() as i64 - 1) == minus_one)
        .collect();
    assert_eq!(roots.len(), 2);
    for &b in &roots {
        let v = gold_s_alpha_beta(&ch, &gp, ctx.neg(b), b).unwrap();
        assert_eq!(v.branch, Branch::GoldDegenerateQ);
        assert!(close(v.value, ch.chi1(b) * 9.0, 1e-12));
    }
    for b in ctx.nonzero().filter(|b| !roots.contains(b)) {
        let v = gold_s_alpha_beta(&ch, &gp, ctx.neg(b), b).unwrap();
        assert_eq!(v.branch, Branch::GoldDegenerateZero);
        assert_eq!(v.value, Cx::new(0.0, 0.0));
    }
}

#[test]
fn gold_reduction_matches_direct_exhaustively() {
    for (p, n) in [(3, 2), (5, 2), (3, 3), (7, 2), (3, 4)] {
        let ctx = f(p, n);
        let ch = Characters::<f64>::new(&ctx);
        let tol = 1e-6 * ctx.q() as f64;
        for gp in all_k(&ctx) {
            let direct = SMemo::direct(&ch, gp.exponent());
            let gold = SMemo::gold(&ch, &gp).unwrap();
            for a in ctx.elements() {
                for b in ctx.elements() {
                    assert!(
                        close(direct.get(a, b), gold.get(a, b), tol),
                        "p={p} n={n} k={} ({a},{b}) {}",
                        gp.k,
                        gold.branch(a, b)
                    );
                }
            }
        }
    }
}

#[test]
fn norm_criterion_matches_rank() {
    for (p, n) in [(3, 3), (5, 2), (3, 4), (3, 2)] {
        let ctx = f(p, n);
        for gp in all_k(&ctx) {
            for a in ctx.elements() {
                for b in ctx.elements() {
                    let lin = lab_map(&ctx, &gp, a, b);
                    match lab_is_permutation(&ctx, &gp, a, b) {
                        Ok(pp) => assert_eq!(pp, lin.is_permutation(), "({a},{b})"),
                        Err(e) => {
                            assert_eq!(e, Error::ZeroLeadCoefficient);
                            assert!(ctx.add(a, b).is_zero());
                        }
                    }
                }
            }
        }
    }
    // B = 0 leaves a monomial map.
    let ctx = f(3, 2);
    let gp = GoldParams::new(&ctx, 1).unwrap();
    let minus_one = ctx.neg(Fe::ONE);
    let beta = ctx.nonzero().find(|&b| ctx.pow(b, 2) == minus_one).unwrap();
    assert!(lab_is_permutation(&ctx, &gp, Fe::ONE, beta).unwrap());
}

#[test]
fn even_characteristic_is_refused() {
    let ctx = f(2, 5);
    let gp = GoldParams::new(&ctx, 1).unwrap();
    let ch = Characters::<f64>::new(&ctx);
    assert_eq!(coulter_s0(&ch, &gp, Fe::ONE).unwrap_err(), Error::EvenCharacteristic);
    assert_eq!(gold_s_alpha_beta(&ch, &gp, Fe::ONE, Fe::ONE).unwrap_err(), Error::EvenCharacteristic);
}

#[test]
fn single_precision_gold_values() {
    let ctx = f(3, 3);
    let gp = GoldParams::new(&ctx, 1).unwrap();
    let ch = Characters::<f32>::new(&ctx);
    for a in ctx.nonzero() {
        for b in ctx.nonzero() {
            let v = gold_s_alpha_beta(&ch, &gp, a, b).unwrap().value;
            let d = s_alpha_beta_direct(&ch, gp.exponent(), a, b);
            assert!((v - d).norm() < 1e-3);
        }
    }
}
