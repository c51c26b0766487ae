//! Exact arithmetic in F_{p^n}.
//!
//! Elements are encoded as integers `enc = sum c_i p^i` whose little-endian
//! base-p digits are the coefficients in the polynomial basis 1, x, ..., x^(n-1)
//! modulo the field's defining polynomial. Multiplication runs through
//! exp/log tables of a fixed generator and addition through Zech logarithms,
//! so every operation on a built context is O(1).

mod linear;
mod poly;

use serde::{Deserialize, Serialize};

pub use linear::LinMap;

use crate::error::{Error, Result};

/// Default refusal threshold for the field size.
pub const DEFAULT_MAX_Q: u64 = 1 << 20;

const NO_LOG: u32 = u32::MAX;

/// A field element in canonical integer encoding.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn enc(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl std::fmt::Display for Fe {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Serializable description of a field: `{"p":3,"n":3,"modulus":[1,2,0,1]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub n: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
}

impl FieldSpec {
    pub fn build(&self) -> Result<FieldCtx> {
        FieldCtx::new(self.p, self.n, self.modulus.as_deref())
    }

    pub fn build_with_max_q(&self, max_q: u64) -> Result<FieldCtx> {
        FieldCtx::with_max_q(self.p, self.n, self.modulus.as_deref(), max_q)
    }
}

/// Immutable description of F_{p^n} with its lookup tables.
#[derive(Clone, Debug)]
pub struct FieldCtx {
    p: u32,
    n: u32,
    q: u32,
    modulus: Vec<u32>,
    generator: Fe,
    /// g^k for k in [0, 2(q-1)), doubled so sums of two logs index directly.
    exp: Vec<u32>,
    /// Discrete log of every nonzero element; `NO_LOG` at 0.
    log: Vec<u32>,
    /// zech[k] = log(1 + g^k), or `NO_LOG` when 1 + g^k = 0.
    zech: Vec<u32>,
    trace: Vec<u32>,
    /// log(-1).
    neg_one_log: u32,
}

impl FieldCtx {
    /// Builds F_{p^n}; `modulus` is monic of degree n, constant coefficient
    /// first. Without one, the smallest monic irreducible is used, comparing
    /// coefficients from the constant term upward.
    pub fn new(p: u32, n: u32, modulus: Option<&[u32]>) -> Result<Self> {
        Self::with_max_q(p, n, modulus, DEFAULT_MAX_Q)
    }

    pub fn with_max_q(p: u32, n: u32, modulus: Option<&[u32]>, max_q: u64) -> Result<Self> {
        if !poly::is_prime(p as u64) {
            return Err(Error::NonPrimeP(p as u64));
        }
        if n == 0 {
            return Err(Error::InvalidDegree);
        }
        let q64 = (p as u64).checked_pow(n).unwrap_or(u64::MAX);
        if q64 > max_q || q64 > u32::MAX as u64 / 2 {
            return Err(Error::FieldTooLarge { q: q64, cap: max_q.min(u32::MAX as u64 / 2) });
        }
        let q = q64 as u32;
        let modulus = match modulus {
            Some(m) => {
                validate_modulus(m, p, n)?;
                m.to_vec()
            }
            None => default_modulus(p, n),
        };
        let mod64: Vec<u64> = modulus.iter().map(|&c| c as u64).collect();
        let generator = find_generator(p, n, q, &mod64);
        Ok(Self::from_parts(p, n, q, modulus, generator))
    }

    fn from_parts(p: u32, n: u32, q: u32, modulus: Vec<u32>, generator: Fe) -> Self {
        let order = (q - 1) as usize;
        let mut exp = vec![0u32; 2 * order];
        let mut log = vec![NO_LOG; q as usize];
        let mut step = GeneratorStep::new(&modulus, generator, p, n);
        for k in 0..order {
            let e = step.current_enc();
            exp[k] = e;
            exp[k + order] = e;
            log[e as usize] = k as u32;
            step.advance();
        }
        let neg_one = if p == 2 { 1 } else { p - 1 };
        let neg_one_log = log[neg_one as usize];
        let zech: Vec<u32> = (0..order)
            .map(|k| {
                let s = add_digitwise(1, exp[k], p, n);
                if s == 0 { NO_LOG } else { log[s as usize] }
            })
            .collect();
        let mut ctx = Self {
            p,
            n,
            q,
            modulus,
            generator,
            exp,
            log,
            zech,
            trace: Vec::new(),
            neg_one_log,
        };
        // Tr is F_p-linear, so the traces of the basis monomials determine it.
        let basis_tr: Vec<u32> = (0..n)
            .map(|j| {
                let b = Fe(p.pow(j));
                let t = (0..n).fold(Fe::ZERO, |acc, i| ctx.add(acc, ctx.frobenius(b, i)));
                debug_assert!(t.0 < p);
                t.0
            })
            .collect();
        ctx.trace = (0..q)
            .map(|x| {
                let mut x = x;
                let mut s = 0u64;
                for &t in &basis_tr {
                    s += (x % p) as u64 * t as u64;
                    x /= p;
                }
                (s % p as u64) as u32
            })
            .collect();
        ctx
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn generator(&self) -> Fe {
        self.generator
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec { p: self.p, n: self.n, modulus: Some(self.modulus.clone()) }
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> + Clone {
        (0..self.q).map(Fe)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Fe> + Clone {
        (1..self.q).map(Fe)
    }

    pub fn element(&self, enc: u64) -> Result<Fe> {
        if enc < self.q as u64 {
            Ok(Fe(enc as u32))
        } else {
            Err(Error::ElementOutOfRange { enc, q: self.q })
        }
    }

    pub(crate) fn check(&self, x: Fe) -> Result<Fe> {
        self.element(x.0 as u64)
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(&self, c: i64) -> Fe {
        Fe(c.rem_euclid(self.p as i64) as u32)
    }

    pub fn digits(&self, x: Fe) -> Vec<u32> {
        let mut v = x.0;
        (0..self.n)
            .map(|_| {
                let d = v % self.p;
                v /= self.p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u32]) -> Fe {
        Fe(digits.iter().rev().fold(0u32, |acc, &d| acc * self.p + d))
    }

    /// Discrete log to base g; `None` for zero.
    pub fn log(&self, x: Fe) -> Option<u32> {
        match self.log[x.0 as usize] {
            NO_LOG => None,
            l => Some(l),
        }
    }

    /// g^k for any integer k.
    pub fn exp(&self, k: i64) -> Fe {
        Fe(self.exp[k.rem_euclid(self.q as i64 - 1) as usize])
    }

    pub fn add(&self, x: Fe, y: Fe) -> Fe {
        if x.0 == 0 {
            return y;
        }
        if y.0 == 0 {
            return x;
        }
        let order = self.q - 1;
        let lx = self.log[x.0 as usize];
        let ly = self.log[y.0 as usize];
        let diff = if ly >= lx { ly - lx } else { ly + order - lx };
        match self.zech[diff as usize] {
            NO_LOG => Fe::ZERO,
            z => Fe(self.exp[(lx + z) as usize]),
        }
    }

    pub fn neg(&self, x: Fe) -> Fe {
        if x.0 == 0 || self.p == 2 {
            return x;
        }
        let l = self.log[x.0 as usize] + self.neg_one_log;
        Fe(self.exp[l as usize])
    }

    pub fn sub(&self, x: Fe, y: Fe) -> Fe {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: Fe, y: Fe) -> Fe {
        if x.0 == 0 || y.0 == 0 {
            return Fe::ZERO;
        }
        Fe(self.exp[(self.log[x.0 as usize] + self.log[y.0 as usize]) as usize])
    }

    pub fn inv(&self, x: Fe) -> Result<Fe> {
        match self.log(x) {
            None => Err(Error::DivisionByZero),
            Some(0) => Ok(Fe::ONE),
            Some(l) => Ok(Fe(self.exp[(self.q - 1 - l) as usize])),
        }
    }

    pub fn div(&self, x: Fe, y: Fe) -> Result<Fe> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// x^e; exponents of nonzero bases are reduced mod q-1, 0^0 = 1.
    pub fn pow(&self, x: Fe, e: i64) -> Fe {
        match self.log(x) {
            None if e == 0 => Fe::ONE,
            None => Fe::ZERO,
            Some(l) => {
                let order = self.q as i128 - 1;
                let k = (l as i128 * e as i128).rem_euclid(order);
                Fe(self.exp[k as usize])
            }
        }
    }

    /// x^e for an exponent given modulo q-1 as an unsigned value.
    pub fn pow_u(&self, x: Fe, e: u64) -> Fe {
        match self.log(x) {
            None if e == 0 => Fe::ONE,
            None => Fe::ZERO,
            Some(l) => {
                let order = self.q as u64 - 1;
                Fe(self.exp[((l as u64 * (e % order)) % order) as usize])
            }
        }
    }

    /// p^i mod (q - 1), the exponent of the i-th Frobenius power.
    pub fn frobenius_exponent(&self, i: u32) -> u64 {
        poly::pow_mod(self.p as u64, (i % self.n) as u64, self.q as u64 - 1)
    }

    /// x^(p^i).
    pub fn frobenius(&self, x: Fe, i: u32) -> Fe {
        match self.log(x) {
            None => Fe::ZERO,
            Some(l) => {
                let order = self.q as u64 - 1;
                Fe(self.exp[(l as u64 * self.frobenius_exponent(i) % order) as usize])
            }
        }
    }

    /// Absolute trace Tr(x) = sum_i x^(p^i), an element of F_p returned as its integer.
    pub fn trace(&self, x: Fe) -> u32 {
        self.trace[x.0 as usize]
    }

    /// x^((q-1)/(p^d-1)), the norm into F_{p^d}.
    pub fn rel_norm(&self, x: Fe, d: u32) -> Result<Fe> {
        if d == 0 || self.n % d != 0 {
            return Err(Error::DegreeNotDividing { d, n: self.n });
        }
        let e = (self.q as u64 - 1) / ((self.p as u64).pow(d) - 1);
        Ok(self.pow_u(x, e))
    }

    /// Whether x lies in the subfield F_{p^d}.
    pub fn in_subfield(&self, x: Fe, d: u32) -> bool {
        self.frobenius(x, d) == x
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, x: Fe) -> Option<u64> {
        let l = self.log(x)? as u64;
        let order = self.q as u64 - 1;
        Some(order / gcd(l, order))
    }

    pub fn lin_map(&self, terms: &[(Fe, u32)]) -> Result<LinMap> {
        LinMap::new(self, terms)
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

pub fn is_prime(n: u64) -> bool {
    poly::is_prime(n)
}

fn validate_modulus(m: &[u32], p: u32, n: u32) -> Result<()> {
    if m.len() != n as usize + 1 {
        return Err(Error::ModulusLength { expected: n as usize + 1, got: m.len() });
    }
    if let Some(&c) = m.iter().find(|&&c| c >= p) {
        return Err(Error::ModulusCoefficient(c));
    }
    if m[n as usize] != 1 {
        return Err(Error::ModulusNotMonic);
    }
    let m64: Vec<u64> = m.iter().map(|&c| c as u64).collect();
    if !poly::is_irreducible(&m64, p as u64) {
        return Err(Error::ReducibleModulus(m.to_vec()));
    }
    Ok(())
}

fn default_modulus(p: u32, n: u32) -> Vec<u32> {
    let tails = (p as u64).pow(n);
    // Candidates with a zero constant term are divisible by x when n > 1.
    let start = if n > 1 { tails / p as u64 } else { 0 };
    for t in start..tails {
        // Constant coefficient is the most significant position in the ordering.
        let mut f = vec![0u64; n as usize + 1];
        let mut v = t;
        for i in (0..n as usize).rev() {
            f[i] = v % p as u64;
            v /= p as u64;
        }
        f[n as usize] = 1;
        if poly::is_irreducible(&f, p as u64) {
            return f.into_iter().map(|c| c as u32).collect();
        }
    }
    unreachable!("irreducible polynomials of every degree exist")
}

fn find_generator(p: u32, n: u32, q: u32, modulus: &[u64]) -> Fe {
    let order = q as u64 - 1;
    let factors = poly::prime_factors(order);
    for enc in 1..q {
        let g = enc_to_poly(enc, p, n);
        let primitive = order == 1
            || factors
                .iter()
                .all(|&r| poly::pow_poly_mod(&g, order / r, modulus, p as u64) != [1]);
        if primitive {
            return Fe(enc);
        }
    }
    unreachable!("the multiplicative group of a finite field is cyclic")
}

fn enc_to_poly(enc: u32, p: u32, n: u32) -> poly::Poly {
    let mut v = enc;
    let mut out: poly::Poly = (0..n)
        .map(|_| {
            let d = v % p;
            v /= p;
            d as u64
        })
        .collect();
    poly::trim(&mut out);
    out
}

/// Repeated multiplication by the generator with reusable buffers.
struct GeneratorStep {
    p: u64,
    n: usize,
    modulus: Vec<u64>,
    /// Nonzero digits of g as (position, coefficient).
    g_terms: Vec<(usize, u64)>,
    cur: Vec<u64>,
    scratch: Vec<u64>,
}

impl GeneratorStep {
    fn new(modulus: &[u32], g: Fe, p: u32, n: u32) -> Self {
        let g_terms = enc_to_poly(g.0, p, n)
            .into_iter()
            .enumerate()
            .filter(|&(_, c)| c != 0)
            .collect();
        let mut cur = vec![0u64; n as usize];
        cur[0] = 1;
        Self {
            p: p as u64,
            n: n as usize,
            modulus: modulus.iter().map(|&c| c as u64).collect(),
            g_terms,
            cur,
            scratch: vec![0u64; 2 * n as usize],
        }
    }

    fn current_enc(&self) -> u32 {
        self.cur.iter().rev().fold(0u64, |acc, &d| acc * self.p + d) as u32
    }

    fn advance(&mut self) {
        let (p, n) = (self.p, self.n);
        self.scratch.iter_mut().for_each(|v| *v = 0);
        for (i, &c) in self.cur.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for &(j, g) in &self.g_terms {
                self.scratch[i + j] = (self.scratch[i + j] + c * g) % p;
            }
        }
        // Reduce by the monic modulus from the top degree down.
        for top in (n..2 * n).rev() {
            let c = self.scratch[top];
            if c == 0 {
                continue;
            }
            self.scratch[top] = 0;
            for i in 0..n {
                let t = top - n + i;
                self.scratch[t] = (self.scratch[t] + (p - c) * self.modulus[i]) % p;
            }
        }
        self.cur.copy_from_slice(&self.scratch[..n]);
    }
}

fn add_digitwise(x: u32, y: u32, p: u32, n: u32) -> u32 {
    let (mut x, mut y) = (x, y);
    let mut out = 0u32;
    let mut w = 1u32;
    for _ in 0..n {
        out += ((x % p + y % p) % p) * w;
        x /= p;
        y /= p;
        w = w.wrapping_mul(p);
    }
    out
}
