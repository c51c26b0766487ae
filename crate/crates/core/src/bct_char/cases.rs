//! Closed case formulas for T_b with d = p^k + 1: c = 1, c = -1 and c^(p^k-1) = 1.
//!
//! Each formula exists in the readings of [`Reading`]. The sets come from a
//! [`GoldCaseSets`] whose basis must match the reading.

use num_complex::Complex;

use super::sets::{GoldCaseSets, PairInfo};
use super::{Reading, TbParts};
use crate::characters::{eta, Characters};
use crate::error::{Error, Result};
use crate::field::{Fe, FieldCtx};
use crate::scalar::{real, sign, Scalar};
use crate::weil::{coulter_condition, GoldParams};

fn pw<T: Scalar>(p: u32, e: u32) -> T {
    T::from_u64(p as u64).powi(e as i32)
}

fn zero<T: Scalar>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

fn check(sets: &GoldCaseSets<'_>, reading: Reading) -> Result<()> {
    if sets.basis() != reading.basis() {
        return Err(Error::PreconditionViolated(format!(
            "reading `{}` needs sets built on the {:?} basis",
            reading.as_str(),
            reading.basis()
        )));
    }
    Ok(())
}

/// Sigma_1 = sum over A != 0 with the norm condition of chi_1(-bA).
fn sigma1<T: Scalar>(ch: &Characters<'_, T>, gp: &GoldParams, b: Fe) -> Complex<T> {
    let ctx = ch.field();
    ctx.nonzero()
        .filter(|&a| coulter_condition(ctx, gp, a))
        .fold(zero(), |acc, a| acc + ch.chi1(ctx.neg(ctx.mul(b, a))))
}

fn label<T: Scalar>(parts: Vec<(&str, Complex<T>)>) -> Vec<(String, Complex<T>)> {
    parts.into_iter().map(|(l, v)| (l.to_string(), v)).collect()
}

fn indicator<T: Scalar>(cond: bool, v: T) -> T {
    if cond {
        v
    } else {
        T::zero()
    }
}

pub fn gold_tb_c1<T: Scalar>(sets: &GoldCaseSets<'_>, ch: &Characters<'_, T>, b: Fe, reading: Reading) -> Result<TbParts<T>> {
    check(sets, reading)?;
    if sets.cp().c != Fe::ONE {
        return Err(Error::PreconditionViolated("c = 1 formula called with c != 1".into()));
    }
    let ctx = ch.field();
    let gp = sets.gp();
    let (p, n, e) = (gp.p, gp.n, gp.e);
    let q: T = pw(p, n);
    let chb = |a: Fe| ch.chi1(ctx.neg(ctx.mul(b, a)));
    let generic = || sets.pairs().iter().map(|pi| &pi.first).filter(|f| f.generic());
    let ybar = generic().filter(|f| f.in_ybar()).fold(zero(), |acc, f| acc + chb(f.a));
    if !gp.ne_even {
        let s = match reading {
            Reading::Repaired => T::one(),
            _ => sign::<T>(n as u64 * (p as u64 + 1) / 2),
        };
        let terms = label(vec![("T_b", ybar * q * s)]);
        let sums = label(vec![("Sigma(Ybar1)", ybar)]);
        return Ok(TbParts::from_terms(terms, sums, reading));
    }
    let a1 = generic().filter(|f| f.in_a()).fold(zero(), |acc, f| acc + chb(f.a));
    let s1 = sigma1(ch, gp, b);
    let t4 = a1 * pw::<T>(p, n + 2 * e) + ybar * q;
    let pe: T = pw(p, e);
    let one = T::one();
    let terms = match reading {
        Reading::Stated => vec![
            ("constant", real(pw::<T>(p, 2 * n + e) - q * q * T::from_f64(2.0) + q)),
            ("Sigma_1 term", s1 * (pw::<T>(p, 2 * n + 2 * e) - pw::<T>(p, n + 2 * e) - q * q + q)),
            ("T_b4", t4),
        ],
        Reading::Proof => vec![
            ("T_b1", real(q * q * (pe - one))),
            ("T_b2", s1 * (pw::<T>(p, n + 2 * e) * (q - one))),
            ("T_b3", -(s1 + one) * (q * (q - one))),
            ("T_b4", t4),
        ],
        Reading::Repaired => {
            let r = T::from_u64(sets.roots().len() as u64);
            let sr = sets.roots().iter().fold(zero(), |acc, &beta| acc + chb(beta));
            vec![
                ("T_b1", real(q * q * r)),
                ("T_b2", (s1 * r - sr) * pw::<T>(p, n + 2 * e)),
                ("T_b3", (real(indicator(b.is_zero(), q) - one) - s1) * (q * r)),
                ("T_b4", t4),
            ]
        }
    };
    let sums = label(vec![("Sigma_1", s1), ("Sigma(A1)", a1), ("Sigma(Ybar1)", ybar)]);
    Ok(TbParts::from_terms(label(terms), sums, reading))
}

pub fn gold_tb_cm1<T: Scalar>(sets: &GoldCaseSets<'_>, ch: &Characters<'_, T>, b: Fe, reading: Reading) -> Result<TbParts<T>> {
    check(sets, reading)?;
    let ctx = ch.field();
    if sets.cp().c != ctx.neg(Fe::ONE) {
        return Err(Error::PreconditionViolated("c = -1 formula called with c != -1".into()));
    }
    let gp = sets.gp();
    let (p, n, e) = (gp.p, gp.n, gp.e);
    let q: T = pw(p, n);
    let d = gp.exponent();
    let two = ctx.from_int(2);
    // chi_1(2 beta - A (2 x^(p^k+1) + b))
    let phi = |pi: &PairInfo| {
        let f = &pi.first;
        let x = f.root.expect("pairs in A1 and Ybar1 have a root");
        let inner = ctx.add(ctx.mul(two, ctx.pow_u(x, d)), b);
        ch.chi1(ctx.sub(ctx.mul(two, f.beta), ctx.mul(f.a, inner)))
    };
    let generic = || sets.pairs().iter().filter(|pi| pi.first.generic());
    let ybar = generic().filter(|pi| pi.first.in_ybar()).fold(zero(), |acc, pi| acc + phi(pi));
    if !gp.ne_even {
        let s = sign::<T>(n as u64 * (p as u64 - 1) / 2);
        let terms = label(vec![("T_b", ybar * q * s)]);
        let sums = label(vec![("Sigma(Ybar1)", ybar)]);
        return Ok(TbParts::from_terms(terms, sums, reading));
    }
    let a1 = generic().filter(|pi| pi.first.in_a()).fold(zero(), |acc, pi| acc + phi(pi));
    let s1 = sigma1(ch, gp, b);
    let s2 = sets.roots().iter().fold(zero(), |acc, &beta| acc + ch.chi1(ctx.mul(two, beta)));
    let t4 = a1 * pw::<T>(p, n + 2 * e) + ybar * q;
    let one = T::one();
    let terms = match reading {
        Reading::Stated => vec![
            ("first", s1 * (q * (q - one))),
            ("Sigma_1 Sigma_2 term", s1 * s2 * (q * (pw::<T>(p, 2 * e) - one))),
            ("T_b4", t4),
        ],
        Reading::Proof => vec![
            ("T_b1", s2 * (q * q)),
            ("T_b2", s1 * s2 * pw::<T>(p, n + 2 * e)),
            ("T_b3", -s2 * (s1 + one) * q),
            ("T_b4", t4),
        ],
        Reading::Repaired => {
            let x = sets
                .roots()
                .iter()
                .fold(zero(), |acc, &beta| acc + ch.chi1(ctx.sub(ctx.mul(two, beta), ctx.mul(b, beta))));
            vec![
                ("T_b1", s2 * (q * q)),
                ("T_b2", (s1 * s2 - x) * pw::<T>(p, n + 2 * e)),
                ("T_b3", s2 * (real(indicator(b.is_zero(), q) - one) - s1) * q),
                ("T_b4", t4),
            ]
        }
    };
    let sums = label(vec![("Sigma_1", s1), ("Sigma_2", s2), ("Sigma(A1)", a1), ("Sigma(Ybar1)", ybar)]);
    Ok(TbParts::from_terms(label(terms), sums, reading))
}

/// c != +-1 with c^(p^k-1) = 1, in encoding order.
pub fn unit_norm_cs(ctx: &FieldCtx, gp: &GoldParams) -> Vec<Fe> {
    let minus_one = ctx.neg(Fe::ONE);
    let exp = ctx.frobenius_exponent(gp.k) - 1;
    ctx.nonzero()
        .filter(|&c| c != Fe::ONE && c != minus_one && ctx.pow_u(c, exp) == Fe::ONE)
        .collect()
}

/// c^(p^k-1) = 1, c != +-1. `Proof` is evaluated as `Stated`: the two texts agree here.
pub fn gold_tb_unit<T: Scalar>(sets: &GoldCaseSets<'_>, ch: &Characters<'_, T>, b: Fe, reading: Reading) -> Result<TbParts<T>> {
    check(sets, reading)?;
    let ctx = ch.field();
    let gp = sets.gp();
    let cp = sets.cp();
    let c = cp.c;
    if c == Fe::ONE || c == ctx.neg(Fe::ONE) || ctx.pow_u(c, ctx.frobenius_exponent(gp.k) - 1) != Fe::ONE {
        return Err(Error::PreconditionViolated(format!("c = {c} needs c^(p^k-1) = 1 and c != +-1")));
    }
    let (p, n, e) = (gp.p, gp.n, gp.e);
    let q: T = pw(p, n);
    let repaired = reading == Reading::Repaired;
    let one_minus_ci = ctx.sub(Fe::ONE, cp.c_inv);
    let chb = |a: Fe| ch.chi1(ctx.neg(ctx.mul(b, a)));
    // Both factors of the generic stratum, with A' != 0.
    let both = || {
        sets.pairs()
            .iter()
            .filter(|pi| pi.first.generic() && !pi.second.a.is_zero())
    };
    // (beta - A x^d) + (beta' - A' x'^d), that is beta(1 - c^-1) - A x^d - A' x'^d.
    let core = |pi: &PairInfo| ctx.add(pi.first.phase(ctx, gp).unwrap(), pi.second.phase(ctx, gp).unwrap());
    let with_b = |pi: &PairInfo| ctx.sub(core(pi), ctx.mul(b, pi.first.a));
    if !gp.ne_even {
        let mut acc = zero();
        for pi in both().filter(|pi| pi.first.in_ybar() && pi.second.in_ybar()) {
            let eta_aa = eta(ctx, ctx.mul(pi.first.a, pi.second.a))? as f64;
            let v = ch.chi1(with_b(pi));
        acc = acc + v * T::from_f64(eta_aa);
        }
        let s = sign::<T>(n as u64 * (p as u64 - 1) / 2);
        let terms = label(vec![("T_b", acc * q * s)]);
        let sums = label(vec![("Sigma(Ybar1 & Ybar2)", acc)]);
        return Ok(TbParts::from_terms(terms, sums, reading));
    }
    let (m, t) = (gp.m.unwrap(), gp.t.unwrap() as u64);
    let big: T = pw::<T>(p, n + m + e) * sign::<T>(t + 1);
    let (w_cc, w_mixed, w_none) = (pw::<T>(p, n + 2 * e), -pw::<T>(p, n + e), q);
    let c_inv2 = ctx.mul(cp.c_inv, cp.c_inv);

    let sigma3 = sets.roots().iter().fold(zero(), |acc, &beta| acc + ch.chi1(ctx.mul(beta, one_minus_ci)));
    let t1 = sigma3 * big;

    let mut t2a = zero();
    let mut t2b = zero();
    for &beta in sets.roots() {
        let base = ch.chi1(ctx.mul(beta, one_minus_ci));
        let special_alpha = ctx.neg(ctx.mul(beta, c_inv2));
        for alpha in ctx.nonzero() {
            let a = ctx.add(alpha, beta);
            if a.is_zero() {
                continue;
            }
            if alpha == special_alpha {
                t2b = t2b + base * chb(a) * big;
                continue;
            }
            let a2 = ctx.neg(ctx.add(ctx.mul(c, alpha), ctx.mul(cp.c_inv, beta)));
            let w = match (coulter_condition(ctx, gp, a), coulter_condition(ctx, gp, a2)) {
                (true, true) => w_cc,
                (false, false) => w_none,
                _ => w_mixed,
            };
            t2a = t2a + base * chb(a) * w;
        }
    }

    let (mut s_aa, mut s_mixed, mut s_yy) = (zero(), zero(), zero());
    for pi in both() {
        let (f, g) = (&pi.first, &pi.second);
        let slot = match (f.in_a(), f.in_ybar(), g.in_a(), g.in_ybar()) {
            (true, _, true, _) => &mut s_aa,
            (true, _, _, true) | (_, true, true, _) => &mut s_mixed,
            (_, true, _, true) => &mut s_yy,
            _ => continue,
        };
        // The published Sigma(L) carries no chi_1(-bA).
        *slot = *slot + ch.chi1(if repaired { with_b(pi) } else { core(pi) });
    }
    let t3 = s_aa * w_cc + s_mixed * w_mixed + s_yy * w_none;
    let terms = label(vec![("T_b1", t1), ("T_b2", t2a), ("T_b2'", t2b), ("T_b3", t3)]);
    let sums = label(vec![
        ("Sigma_3", sigma3),
        ("Sigma(A1' & A2')", s_aa),
        ("Sigma(mixed)", s_mixed),
        ("Sigma(Y1~ & Y2~)", s_yy),
    ]);
    Ok(TbParts::from_terms(terms, sums, reading))
}
