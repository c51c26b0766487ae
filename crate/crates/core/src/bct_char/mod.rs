//! c-BCT entries from character sums.
//!
//! With a = 1 the entry N(b) satisfies
//! N = (M_c(b) + M_{c^-1}(b)) / q - 1 + T_b / q^2, where M_c(b) = #{(x, y) : x^d - c y^d = b}
//! and T_b = sum over alpha beta != 0 of chi_1(-b(alpha+beta)) S_{alpha,beta} S_{-alpha c,-beta c^-1}.
//! The engines here differ only in how T_b is produced.

mod cases;
mod general;
mod sets;

pub use cases::{gold_tb_c1, gold_tb_cm1, gold_tb_unit, unit_norm_cs};
pub use general::{FactorTable, GeneralCase, Stratum};
pub use sets::{FactorInfo, GoldCaseSets, PairInfo, SetBasis};

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::characters::Characters;
use crate::error::{Error, Result};
use crate::field::{Fe, FieldCtx};
use crate::scalar::Scalar;
use crate::tables::{CParam, Monomial, MonomialSpec};
use crate::weil::{GoldParams, SMemo};

/// Tolerance on |Im T_b|, relative to q^2.
pub const IMAG_TOL: f64 = 1e-6;
/// Tolerance on the distance of an assembled entry to the nearest integer.
pub const ROUNDING_TOL: f64 = 1e-4;

/// How the alpha beta = 0 terms of the counting identity are written.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    /// (M_c(b) + M_{c^-1}(b)) / q - 1.
    #[default]
    PairCount,
    /// (Delta_c(1,b) + Delta_{c^-1}(1,b)) / q + 1, as printed in the literature. Not an identity.
    StatedDdt,
}

/// Source of the S_{alpha,beta} values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SumEngine {
    Direct,
    GoldClosed,
}

/// Which reading of the published case formulas to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Reading {
    /// Theorem text, sets defined through L_{alpha,beta}.
    Stated,
    /// Final lines of the proofs, sets defined through L_{alpha,beta}.
    Proof,
    /// Sets defined through f_A, with the corrected constants and ranges.
    Repaired,
}

impl Reading {
    pub const ALL: [Reading; 3] = [Reading::Stated, Reading::Proof, Reading::Repaired];

    pub fn basis(self) -> SetBasis {
        match self {
            Reading::Stated | Reading::Proof => SetBasis::LinearizedLab,
            Reading::Repaired => SetBasis::CoulterF,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Reading::Stated => "stated",
            Reading::Proof => "proof",
            Reading::Repaired => "repaired",
        }
    }
}

/// T_b with its labelled summands and auxiliary sums.
#[derive(Clone, Debug, PartialEq)]
pub struct TbParts<T: Scalar> {
    pub t_b: Complex<T>,
    /// Summands; they add up to `t_b`.
    pub terms: Vec<(String, Complex<T>)>,
    /// Auxiliary character sums (Sigma_1, Sigma_2, ...), not summands.
    pub sums: Vec<(String, Complex<T>)>,
    pub reading: Reading,
}

impl<T: Scalar> TbParts<T> {
    pub(crate) fn from_terms(terms: Vec<(String, Complex<T>)>, sums: Vec<(String, Complex<T>)>, reading: Reading) -> Self {
        let t_b = terms.iter().fold(Complex::new(T::zero(), T::zero()), |acc, (_, v)| acc + *v);
        Self { t_b, terms, sums, reading }
    }

    pub fn single(t_b: Complex<T>, reading: Reading) -> Self {
        Self { t_b, terms: vec![("T_b".into(), t_b)], sums: Vec::new(), reading }
    }

    pub fn term(&self, label: &str) -> Option<Complex<T>> {
        self.terms.iter().find(|(l, _)| l == label).map(|(_, v)| *v)
    }

    pub fn sum(&self, label: &str) -> Option<Complex<T>> {
        self.sums.iter().find(|(l, _)| l == label).map(|(_, v)| *v)
    }
}

fn require_odd(ctx: &FieldCtx) -> Result<()> {
    if ctx.p() == 2 {
        Err(Error::EvenCharacteristic)
    } else {
        Ok(())
    }
}

/// T_b as the index-ordered sum of S_{alpha,beta} S_{-alpha c,-beta c^-1}.
pub fn t_b_product<T: Scalar>(ch: &Characters<'_, T>, memo: &SMemo<T>, cp: &CParam, b: Fe) -> Complex<T> {
    let ctx = ch.field();
    let mut acc = Complex::new(T::zero(), T::zero());
    for alpha in ctx.nonzero() {
        let alpha2 = ctx.neg(ctx.mul(alpha, cp.c));
        for beta in ctx.nonzero() {
            let beta2 = ctx.neg(ctx.mul(beta, cp.c_inv));
            let w = ch.chi1(ctx.neg(ctx.mul(b, ctx.add(alpha, beta))));
            acc = acc + w * memo.get(alpha, beta) * memo.get(alpha2, beta2);
        }
    }
    acc
}

fn boundary_value(mono: &Monomial<'_>, cp: &CParam, b: Fe, boundary: Boundary) -> f64 {
    let q = mono.ctx().q() as f64;
    match boundary {
        Boundary::PairCount => (mono.pair_count(cp.c, b) + mono.pair_count(cp.c_inv, b)) as f64 / q - 1.0,
        Boundary::StatedDdt => {
            let ddt = mono.ddt_entry(cp, Fe::ONE, b) + mono.ddt_entry(&cp.inverse(), Fe::ONE, b);
            ddt as f64 / q + 1.0
        }
    }
}

/// The un-rounded entry N(1, b) for a given T_b.
pub fn entry_estimate<T: Scalar>(mono: &Monomial<'_>, cp: &CParam, b: Fe, t_b: Complex<T>, boundary: Boundary) -> f64 {
    let q = mono.ctx().q() as f64;
    boundary_value(mono, cp, b, boundary) + t_b.re.to_f64() / (q * q)
}

/// T_b implied by a known count: q^2 (N + 1) - q (M_c(b) + M_{c^-1}(b)).
pub fn t_b_from_count(mono: &Monomial<'_>, cp: &CParam, b: Fe, count: u64) -> f64 {
    let q = mono.ctx().q() as f64;
    q * q * (count as f64 + 1.0) - q * (mono.pair_count(cp.c, b) + mono.pair_count(cp.c_inv, b)) as f64
}

/// Rounds the estimate after checking that T_b is real and the estimate is integral.
pub fn assemble_entry<T: Scalar>(mono: &Monomial<'_>, cp: &CParam, b: Fe, t_b: Complex<T>, boundary: Boundary) -> Result<u64> {
    let q = mono.ctx().q() as f64;
    let tol = IMAG_TOL * q * q;
    let imag = t_b.im.to_f64();
    if !(imag.abs() < tol) {
        return Err(Error::NonRealSum { imag, tol });
    }
    let value = entry_estimate(mono, cp, b, t_b, boundary);
    let rounded = value.round();
    let residual = (value - rounded).abs();
    if !(residual < ROUNDING_TOL) || rounded < 0.0 {
        return Err(Error::RoundingToleranceExceeded { value, residual });
    }
    Ok(rounded as u64)
}

/// Generic engine: an S memo of one field and exponent, reused across c and b.
pub struct CharEngine<'f, T: Scalar> {
    mono: Monomial<'f>,
    ch: Characters<'f, T>,
    memo: SMemo<T>,
    sum_engine: SumEngine,
}

impl<'f, T: Scalar> CharEngine<'f, T> {
    pub fn new(ctx: &'f FieldCtx, spec: MonomialSpec, sum_engine: SumEngine) -> Result<Self> {
        require_odd(ctx)?;
        let ch = Characters::new(ctx);
        let memo = match sum_engine {
            SumEngine::Direct => SMemo::direct(&ch, spec.d_exp),
            SumEngine::GoldClosed => SMemo::gold(&ch, &GoldParams::from_exponent(ctx, spec.d_exp)?)?,
        };
        Ok(Self { mono: Monomial::new(ctx, spec), ch, memo, sum_engine })
    }

    pub fn monomial(&self) -> &Monomial<'f> {
        &self.mono
    }

    pub fn characters(&self) -> &Characters<'f, T> {
        &self.ch
    }

    pub fn sum_engine(&self) -> SumEngine {
        self.sum_engine
    }

    pub fn memo(&self) -> &SMemo<T> {
        &self.memo
    }

    /// Negates one stored S value; for exercising mismatch reports only.
    pub fn inject_fault(&mut self, alpha: Fe, beta: Fe) {
        self.memo.inject_fault(alpha, beta);
    }

    pub fn t_b(&self, cp: &CParam, b: Fe) -> TbParts<T> {
        TbParts::single(t_b_product(&self.ch, &self.memo, cp, b), Reading::Repaired)
    }

    pub fn entry(&self, cp: &CParam, b: Fe) -> Result<u64> {
        assemble_entry(&self.mono, cp, b, self.t_b(cp, b).t_b, Boundary::PairCount)
    }

    /// Row a = 1, parallel over b.
    pub fn row1(&self, cp: &CParam) -> Result<Vec<u64>> {
        let q = self.mono.ctx().q();
        (0..q).into_par_iter().map(|b| self.entry(cp, Fe(b))).collect()
    }
}

/// c-BCT entry (1, b) through the generic character identity.
pub fn bct_entry_generic(ctx: &FieldCtx, spec: MonomialSpec, cp: &CParam, b: Fe, sum_engine: SumEngine) -> Result<u64> {
    CharEngine::<f64>::new(ctx, spec, sum_engine)?.entry(cp, b)
}
