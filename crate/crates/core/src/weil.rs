//! Weil sums of monomials and of the Gold exponent p^k + 1.
//!
//! S_{a,b} = sum_x chi_1(a x^d) chi_1(b (x+1)^d) and
//! S_k(A,B) = sum_x chi_1(A x^(p^k+1) + B x), by direct summation, through
//! Gauss sums, and through Coulter's closed forms.

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::characters::{eta, Characters};
use crate::error::{Error, Result};
use crate::field::{gcd, Fe, FieldCtx, LinMap};
use crate::scalar::{i_pow, real, sign, Scalar};

/// Constants attached to the Gold exponent p^k + 1 over F_{p^n}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldParams {
    pub p: u32,
    pub n: u32,
    pub k: u32,
    /// gcd(n, k)
    pub e: u32,
    /// gcd(2k, n), the subfield degree in the permutation test of A x^(p^2k) + B x.
    pub d_lin: u32,
    /// n / 2 when n is even.
    pub m: Option<u32>,
    /// m / e when n / e is even.
    pub t: Option<u32>,
    pub ne_even: bool,
}

impl GoldParams {
    pub fn new(ctx: &FieldCtx, k: u32) -> Result<Self> {
        let n = ctx.n();
        if k == 0 || k >= n {
            return Err(Error::InvalidK { k, n });
        }
        let e = gcd(n as u64, k as u64) as u32;
        let ne_even = (n / e) % 2 == 0;
        Ok(Self {
            p: ctx.p(),
            n,
            k,
            e,
            d_lin: gcd(2 * k as u64, n as u64) as u32,
            m: (n % 2 == 0).then_some(n / 2),
            t: ne_even.then_some(n / 2 / e),
            ne_even,
        })
    }

    /// Recovers k from an exponent of the form p^k + 1.
    pub fn from_exponent(ctx: &FieldCtx, d: u64) -> Result<Self> {
        let p = ctx.p() as u64;
        (1..ctx.n())
            .find(|&k| p.pow(k) + 1 == d)
            .map_or(Err(Error::NotAGoldExponent(d)), |k| Self::new(ctx, k))
    }

    pub fn exponent(&self) -> u64 {
        (self.p as u64).pow(self.k) + 1
    }

    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.n)
    }

    fn t_or_zero(&self) -> u64 {
        self.t.unwrap_or(0) as u64
    }
}

/// Which evaluation produced a Weil-sum value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Direct,
    #[serde(rename = "co98_1_odd")]
    Co98_1Odd,
    #[serde(rename = "co98_1_even_generic")]
    Co98_1EvenGeneric,
    #[serde(rename = "co98_1_even_special")]
    Co98_1EvenSpecial,
    #[serde(rename = "co98_pp_odd")]
    Co98PpOdd,
    #[serde(rename = "co98_pp_even")]
    Co98PpEven,
    #[serde(rename = "co98_nonpp_zero")]
    Co98NonppZero,
    #[serde(rename = "co98_nonpp_root")]
    Co98NonppRoot,
    GoldDegenerateQ,
    GoldDegenerateZero,
}

impl Branch {
    pub const ALL: [Branch; 10] = [
        Branch::Direct,
        Branch::Co98_1Odd,
        Branch::Co98_1EvenGeneric,
        Branch::Co98_1EvenSpecial,
        Branch::Co98PpOdd,
        Branch::Co98PpEven,
        Branch::Co98NonppZero,
        Branch::Co98NonppRoot,
        Branch::GoldDegenerateQ,
        Branch::GoldDegenerateZero,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Direct => "direct",
            Branch::Co98_1Odd => "co98_1_odd",
            Branch::Co98_1EvenGeneric => "co98_1_even_generic",
            Branch::Co98_1EvenSpecial => "co98_1_even_special",
            Branch::Co98PpOdd => "co98_pp_odd",
            Branch::Co98PpEven => "co98_pp_even",
            Branch::Co98NonppZero => "co98_nonpp_zero",
            Branch::Co98NonppRoot => "co98_nonpp_root",
            Branch::GoldDegenerateQ => "gold_degenerate_q",
            Branch::GoldDegenerateZero => "gold_degenerate_zero",
        }
    }

    /// True when the value is identically zero.
    pub fn vanishes(self) -> bool {
        matches!(self, Branch::Co98NonppZero | Branch::GoldDegenerateZero)
    }
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeilValue<T: Scalar> {
    pub value: Complex<T>,
    pub branch: Branch,
}

/// A closed-form value split as `weight * chi_1(phase)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GoldFactor<T: Scalar> {
    pub branch: Branch,
    pub weight: Complex<T>,
    pub phase: Fe,
}

impl<T: Scalar> GoldFactor<T> {
    fn zero(branch: Branch) -> Self {
        Self { branch, weight: Complex::new(T::zero(), T::zero()), phase: Fe::ZERO }
    }

    pub fn eval(&self, ch: &Characters<'_, T>) -> WeilValue<T> {
        let value = if self.branch.vanishes() {
            Complex::new(T::zero(), T::zero())
        } else {
            self.weight * ch.chi1(self.phase)
        };
        WeilValue { value, branch: self.branch }
    }
}

fn require_odd(ctx: &FieldCtx) -> Result<()> {
    if ctx.p() == 2 {
        Err(Error::EvenCharacteristic)
    } else {
        Ok(())
    }
}

/// x -> x^d for every element.
pub fn power_table(ctx: &FieldCtx, d: u64) -> Vec<Fe> {
    ctx.elements().map(|x| ctx.pow_u(x, d)).collect()
}

fn s_with_table<T: Scalar>(ch: &Characters<'_, T>, pw: &[Fe], alpha: Fe, beta: Fe) -> Complex<T> {
    let ctx = ch.field();
    let mut acc = Complex::new(T::zero(), T::zero());
    for x in ctx.elements() {
        let x1 = ctx.add(x, Fe::ONE);
        let arg = ctx.add(ctx.mul(alpha, pw[x.0 as usize]), ctx.mul(beta, pw[x1.0 as usize]));
        acc = acc + ch.chi1(arg);
    }
    acc
}

pub fn s_alpha_beta_direct<T: Scalar>(ch: &Characters<'_, T>, d: u64, alpha: Fe, beta: Fe) -> Complex<T> {
    s_with_table(ch, &power_table(ch.field(), d), alpha, beta)
}

/// S_{a,b} with chi_1(w) = (q-1)^-1 sum_j G(conj psi_j, chi_1) psi_j(w) applied to both
/// factors for x outside {0, -1}; the two remaining terms are summed directly.
pub fn s_alpha_beta_gauss<T: Scalar>(
    ch: &Characters<'_, T>,
    gauss: &[Complex<T>],
    d: u64,
    alpha: Fe,
    beta: Fe,
) -> Result<Complex<T>> {
    if alpha.is_zero() || beta.is_zero() {
        return Err(Error::ZeroCoefficient);
    }
    let ctx = ch.field();
    let order = ctx.q() as u64 - 1;
    if gauss.len() as u64 != order {
        return Err(Error::PreconditionViolated("Gauss sum table has the wrong length".into()));
    }
    let minus_one = ctx.neg(Fe::ONE);
    let expand = |w: Fe| -> Complex<T> {
        let s = (0..order).fold(Complex::new(T::zero(), T::zero()), |acc, j| acc + gauss[j as usize] * ch.psi(j, w));
        s / T::from_u64(order)
    };
    let mut acc = ch.chi1(beta) + ch.chi1(ctx.mul(alpha, ctx.pow_u(minus_one, d)));
    for x in ctx.nonzero().filter(|&x| x != minus_one) {
        let u = ctx.mul(alpha, ctx.pow_u(x, d));
        let v = ctx.mul(beta, ctx.pow_u(ctx.add(x, Fe::ONE), d));
        acc = acc + expand(u) * expand(v);
    }
    Ok(acc)
}

pub fn s_k_direct<T: Scalar>(ch: &Characters<'_, T>, gp: &GoldParams, a: Fe, b: Fe) -> Complex<T> {
    let ctx = ch.field();
    let d = gp.exponent();
    ctx.elements().fold(Complex::new(T::zero(), T::zero()), |acc, x| {
        acc + ch.chi1(ctx.add(ctx.mul(a, ctx.pow_u(x, d)), ctx.mul(b, x)))
    })
}

/// A^((q-1)/(p^e+1)) = (-1)^(m/e); only possible when n/e is even.
pub fn coulter_condition(ctx: &FieldCtx, gp: &GoldParams, a: Fe) -> bool {
    let Some(t) = gp.t else { return false };
    let Some(l) = ctx.log(a) else { return false };
    let order = ctx.q() as u64 - 1;
    let exp = order / ((ctx.p() as u64).pow(gp.e) + 1);
    let lhs = l as u64 * exp % order;
    let rhs = if t % 2 == 0 { 0 } else { order / 2 };
    lhs == rhs
}

/// f_A(x) = A^(p^k) x^(p^2k) + A x.
pub fn coulter_map(ctx: &FieldCtx, gp: &GoldParams, a: Fe) -> LinMap {
    let terms = [(ctx.frobenius(a, gp.k), (2 * gp.k) % gp.n), (a, 0)];
    LinMap::new(ctx, &terms).expect("indices are reduced mod n")
}

/// L_{a,b}(x) = (a+b) x^(p^2k) + (b^(p^(n-k)) + b) x.
pub fn lab_map(ctx: &FieldCtx, gp: &GoldParams, alpha: Fe, beta: Fe) -> LinMap {
    let (a, b) = gold_ab(ctx, gp, alpha, beta);
    LinMap::new(ctx, &[(a, (2 * gp.k) % gp.n), (b, 0)]).expect("indices are reduced mod n")
}

/// A = a + b and B = b^(p^(n-k)) + b.
pub fn gold_ab(ctx: &FieldCtx, gp: &GoldParams, alpha: Fe, beta: Fe) -> (Fe, Fe) {
    (ctx.add(alpha, beta), ctx.add(ctx.frobenius(beta, gp.n - gp.k), beta))
}

/// Norm criterion for L_{a,b}: not a permutation iff
/// (-1)^(n/d) ((b^(p^(n-k)) + b)/(a+b))^((q-1)/(p^d-1)) = 1 with d = gcd(2k, n).
pub fn lab_is_permutation(ctx: &FieldCtx, gp: &GoldParams, alpha: Fe, beta: Fe) -> Result<bool> {
    let (a, b) = gold_ab(ctx, gp, alpha, beta);
    if a.is_zero() {
        return Err(Error::ZeroLeadCoefficient);
    }
    let ratio = ctx.div(b, a)?;
    let norm = ctx.rel_norm(ratio, gp.d_lin)?;
    let s = if (gp.n / gp.d_lin) % 2 == 0 { norm } else { ctx.neg(norm) };
    Ok(s != Fe::ONE)
}

/// The root of f_A(x) = -B^(p^k) from the explicit formula for odd n/e:
/// x0 = -1/2 sum_{j < n/e} (-1)^j A^(-(p^((2j+1)k)+1)/(p^k+1)) B^(p^((2j+1)k)).
pub fn coulter_root_explicit(ctx: &FieldCtx, gp: &GoldParams, a: Fe, b: Fe) -> Result<Fe> {
    if a.is_zero() {
        return Err(Error::ZeroA);
    }
    if gp.ne_even {
        return Err(Error::PreconditionViolated("explicit root needs n/e odd".into()));
    }
    let order = ctx.q() as i128 - 1;
    let pk = ctx.frobenius_exponent(gp.k) as i128;
    let mut sum = Fe::ZERO;
    for j in 0..gp.n / gp.e {
        // (p^((2j+1)k) + 1) / (p^k + 1) = sum_{i <= 2j} (-1)^i p^(ik)
        let mut s = 0i128;
        let mut pw = 1i128;
        for i in 0..=2 * j {
            s += if i % 2 == 0 { pw } else { -pw };
            pw = pw * pk % order;
        }
        let term = ctx.mul(
            ctx.pow(a, -(s.rem_euclid(order) as i64)),
            ctx.frobenius(b, ((2 * j + 1) * gp.k) % gp.n),
        );
        sum = if j % 2 == 0 { ctx.add(sum, term) } else { ctx.sub(sum, term) };
    }
    let half = ctx.inv(ctx.from_int(2))?;
    Ok(ctx.neg(ctx.mul(half, sum)))
}

/// (-1)^(n-1) sqrt(q), times i^(mult n) when p = 3 mod 4.
fn odd_prefactor<T: Scalar>(gp: &GoldParams, mult: u64) -> Complex<T> {
    let q = T::from_u64(gp.q());
    let base = real(sign::<T>(gp.n as u64 - 1) * q.sqrt());
    if gp.p % 4 == 3 {
        base * i_pow::<T>(mult * gp.n as u64)
    } else {
        base
    }
}

fn p_pow<T: Scalar>(p: u32, e: u32) -> T {
    T::from_u64(p as u64).powi(e as i32)
}

pub fn coulter_s0_factor<T: Scalar>(ctx: &FieldCtx, gp: &GoldParams, a: Fe) -> Result<GoldFactor<T>> {
    require_odd(ctx)?;
    if a.is_zero() {
        return Err(Error::ZeroA);
    }
    let (branch, weight) = if !gp.ne_even {
        let w = odd_prefactor::<T>(gp, 1) * T::from_i64(eta(ctx, a)? as i64);
        (Branch::Co98_1Odd, w)
    } else {
        let (m, t) = (gp.m.unwrap(), gp.t_or_zero());
        if coulter_condition(ctx, gp, a) {
            (Branch::Co98_1EvenSpecial, real(sign::<T>(t + 1) * p_pow::<T>(gp.p, m + gp.e)))
        } else {
            (Branch::Co98_1EvenGeneric, real(sign::<T>(t) * p_pow::<T>(gp.p, m)))
        }
    };
    Ok(GoldFactor { branch, weight, phase: Fe::ZERO })
}

pub fn coulter_s0<T: Scalar>(ch: &Characters<'_, T>, gp: &GoldParams, a: Fe) -> Result<WeilValue<T>> {
    Ok(coulter_s0_factor(ch.field(), gp, a)?.eval(ch))
}

/// S_k(A,B) as `weight * chi_1(-A x0^(p^k+1))`; delegates to the B = 0 form.
pub fn coulter_factor<T: Scalar>(ctx: &FieldCtx, gp: &GoldParams, a: Fe, b: Fe) -> Result<GoldFactor<T>> {
    coulter_factor_with(ctx, gp, &coulter_map(ctx, gp, a), a, b)
}

/// As [`coulter_factor`] with f_A supplied by the caller.
pub fn coulter_factor_with<T: Scalar>(
    ctx: &FieldCtx,
    gp: &GoldParams,
    f: &LinMap,
    a: Fe,
    b: Fe,
) -> Result<GoldFactor<T>> {
    require_odd(ctx)?;
    if a.is_zero() {
        return Err(Error::ZeroA);
    }
    if b.is_zero() {
        return coulter_s0_factor(ctx, gp, a);
    }
    let rhs = ctx.neg(ctx.frobenius(b, gp.k));
    let phase_of = |x0: Fe| ctx.neg(ctx.mul(a, ctx.pow_u(x0, gp.exponent())));
    let t = gp.t_or_zero();
    if f.is_permutation() {
        let x0 = f.solve(ctx, rhs).ok_or_else(|| Error::Internal("permutation without preimage".into()))?;
        if gp.ne_even {
            let w = real(sign::<T>(t) * p_pow::<T>(gp.p, gp.m.unwrap()));
            return Ok(GoldFactor { branch: Branch::Co98PpEven, weight: w, phase: phase_of(x0) });
        }
        let explicit = coulter_root_explicit(ctx, gp, a, b)?;
        if explicit != x0 {
            return Err(Error::Internal(format!("explicit root {explicit} differs from solved root {x0}")));
        }
        let w = odd_prefactor::<T>(gp, 3) * T::from_i64(eta(ctx, ctx.neg(a))? as i64);
        return Ok(GoldFactor { branch: Branch::Co98PpOdd, weight: w, phase: phase_of(x0) });
    }
    match f.solve(ctx, rhs) {
        None => Ok(GoldFactor::zero(Branch::Co98NonppZero)),
        Some(x0) => {
            let w = real(sign::<T>(t + 1) * p_pow::<T>(gp.p, gp.m.unwrap_or(0) + gp.e));
            Ok(GoldFactor { branch: Branch::Co98NonppRoot, weight: w, phase: phase_of(x0) })
        }
    }
}

pub fn coulter_s<T: Scalar>(ch: &Characters<'_, T>, gp: &GoldParams, a: Fe, b: Fe) -> Result<WeilValue<T>> {
    Ok(coulter_factor(ch.field(), gp, a, b)?.eval(ch))
}

/// S_{a,b} for d = p^k + 1 in the form `weight * chi_1(phase)`.
pub fn gold_factor<T: Scalar>(ctx: &FieldCtx, gp: &GoldParams, alpha: Fe, beta: Fe) -> Result<GoldFactor<T>> {
    require_odd(ctx)?;
    let (a, b) = gold_ab(ctx, gp, alpha, beta);
    if a.is_zero() {
        if b.is_zero() {
            let w = real(T::from_u64(gp.q()));
            return Ok(GoldFactor { branch: Branch::GoldDegenerateQ, weight: w, phase: beta });
        }
        return Ok(GoldFactor::zero(Branch::GoldDegenerateZero));
    }
    let mut f = coulter_factor::<T>(ctx, gp, a, b)?;
    if !f.branch.vanishes() {
        f.phase = ctx.add(f.phase, beta);
    }
    Ok(f)
}

pub fn gold_s_alpha_beta<T: Scalar>(
    ch: &Characters<'_, T>,
    gp: &GoldParams,
    alpha: Fe,
    beta: Fe,
) -> Result<WeilValue<T>> {
    Ok(gold_factor(ch.field(), gp, alpha, beta)?.eval(ch))
}

/// Every S_{a,b} of one field and exponent, indexed `a * q + b`.
#[derive(Clone, Debug)]
pub struct SMemo<T: Scalar> {
    q: u32,
    values: Vec<Complex<T>>,
    branches: Vec<Branch>,
}

impl<T: Scalar> SMemo<T> {
    pub fn direct(ch: &Characters<'_, T>, d: u64) -> Self {
        let ctx = ch.field();
        let q = ctx.q();
        let pw = power_table(ctx, d);
        let values: Vec<Complex<T>> = (0..q)
            .into_par_iter()
            .flat_map_iter(|a| {
                let pw = &pw;
                (0..q).map(move |b| s_with_table(ch, pw, Fe(a), Fe(b)))
            })
            .collect();
        Self { q, branches: vec![Branch::Direct; values.len()], values }
    }

    pub fn gold(ch: &Characters<'_, T>, gp: &GoldParams) -> Result<Self> {
        let ctx = ch.field();
        require_odd(ctx)?;
        let q = ctx.q();
        // f_A depends on A only.
        let maps: Vec<LinMap> = ctx.elements().map(|a| coulter_map(ctx, gp, a)).collect();
        let rows: Vec<Result<Vec<WeilValue<T>>>> = (0..q)
            .into_par_iter()
            .map(|alpha| {
                (0..q)
                    .map(|beta| {
                        let (alpha, beta) = (Fe(alpha), Fe(beta));
                        let (a, b) = gold_ab(ctx, gp, alpha, beta);
                        let f = if a.is_zero() {
                            gold_factor::<T>(ctx, gp, alpha, beta)?
                        } else {
                            let mut f = coulter_factor_with::<T>(ctx, gp, &maps[a.0 as usize], a, b)?;
                            if !f.branch.vanishes() {
                                f.phase = ctx.add(f.phase, beta);
                            }
                            f
                        };
                        Ok(f.eval(ch))
                    })
                    .collect()
            })
            .collect();
        let mut values = Vec::with_capacity((q as usize).pow(2));
        let mut branches = Vec::with_capacity(values.capacity());
        for row in rows {
            for v in row? {
                values.push(v.value);
                branches.push(v.branch);
            }
        }
        Ok(Self { q, values, branches })
    }

    pub fn get(&self, alpha: Fe, beta: Fe) -> Complex<T> {
        self.values[alpha.0 as usize * self.q as usize + beta.0 as usize]
    }

    pub fn branch(&self, alpha: Fe, beta: Fe) -> Branch {
        self.branches[alpha.0 as usize * self.q as usize + beta.0 as usize]
    }

    /// Flips the sign of one stored value. Used to exercise mismatch reporting.
    pub fn inject_fault(&mut self, alpha: Fe, beta: Fe) {
        let i = alpha.0 as usize * self.q as usize + beta.0 as usize;
        self.values[i] = -self.values[i];
    }
}
