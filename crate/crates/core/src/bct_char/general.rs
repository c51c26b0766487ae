//! T_b for any c != 0 from the closed form of each factor, grouped by the
//! pair of branches that produced S_{alpha,beta} and S_{-alpha c,-beta c^-1}.

use num_complex::Complex;
use rayon::prelude::*;

use super::{Reading, TbParts};
use crate::characters::Characters;
use crate::error::Result;
use crate::field::{Fe, FieldCtx, LinMap};
use crate::scalar::Scalar;
use crate::tables::CParam;
use crate::weil::{coulter_factor_with, coulter_map, gold_ab, gold_factor, Branch, GoldFactor, GoldParams};

/// Closed-form factor of every S_{alpha,beta}, indexed `alpha * q + beta`.
#[derive(Clone, Debug)]
pub struct FactorTable<T: Scalar> {
    q: u32,
    factors: Vec<GoldFactor<T>>,
}

impl<T: Scalar> FactorTable<T> {
    pub fn new(ctx: &FieldCtx, gp: &GoldParams) -> Result<Self> {
        let q = ctx.q();
        let maps: Vec<LinMap> = ctx.elements().map(|a| coulter_map(ctx, gp, a)).collect();
        let rows: Vec<Result<Vec<GoldFactor<T>>>> = (0..q)
            .into_par_iter()
            .map(|alpha| {
                ctx.elements()
                    .map(|beta| {
                        let alpha = Fe(alpha);
                        let (a, b) = gold_ab(ctx, gp, alpha, beta);
                        if a.is_zero() {
                            return gold_factor(ctx, gp, alpha, beta);
                        }
                        let mut f = coulter_factor_with::<T>(ctx, gp, &maps[a.0 as usize], a, b)?;
                        if !f.branch.vanishes() {
                            f.phase = ctx.add(f.phase, beta);
                        }
                        Ok(f)
                    })
                    .collect()
            })
            .collect();
        let mut factors = Vec::with_capacity((q as usize).pow(2));
        for row in rows {
            factors.extend(row?);
        }
        Ok(Self { q, factors })
    }

    pub fn get(&self, alpha: Fe, beta: Fe) -> &GoldFactor<T> {
        &self.factors[alpha.0 as usize * self.q as usize + beta.0 as usize]
    }
}

/// Pairs whose two factors come from the given branches.
#[derive(Clone, Debug, PartialEq)]
pub struct Stratum<T: Scalar> {
    pub first: Branch,
    pub second: Branch,
    pub count: u64,
    pub sum: Complex<T>,
}

#[derive(Clone, Copy, Debug)]
struct Term<T: Scalar> {
    key: usize,
    weight: Complex<T>,
    /// phase_1 + phase_2; -bA is added per b.
    phase: Fe,
    a: Fe,
}

fn branch_index(b: Branch) -> usize {
    Branch::ALL.iter().position(|&x| x == b).expect("listed branch")
}

const NB: usize = Branch::ALL.len();

/// Per-c precomputation of the general engine; evaluating one b is a single pass.
pub struct GeneralCase<'f, T: Scalar> {
    ch: &'f Characters<'f, T>,
    terms: Vec<Term<T>>,
    counts: Vec<u64>,
}

impl<'f, T: Scalar> GeneralCase<'f, T> {
    pub fn new(ch: &'f Characters<'f, T>, table: &FactorTable<T>, cp: &CParam) -> Self {
        let ctx = ch.field();
        let mut terms = Vec::with_capacity((ctx.q() as usize - 1).pow(2));
        let mut counts = vec![0u64; NB * NB];
        for alpha in ctx.nonzero() {
            let alpha2 = ctx.neg(ctx.mul(alpha, cp.c));
            for beta in ctx.nonzero() {
                let beta2 = ctx.neg(ctx.mul(beta, cp.c_inv));
                let (f, g) = (table.get(alpha, beta), table.get(alpha2, beta2));
                let key = branch_index(f.branch) * NB + branch_index(g.branch);
                counts[key] += 1;
                if f.branch.vanishes() || g.branch.vanishes() {
                    continue;
                }
                terms.push(Term {
                    key,
                    weight: f.weight * g.weight,
                    phase: ctx.add(f.phase, g.phase),
                    a: ctx.add(alpha, beta),
                });
            }
        }
        Self { ch, terms, counts }
    }

    /// Every nonempty stratum in branch order, with its contribution to T_b.
    pub fn strata(&self, b: Fe) -> Vec<Stratum<T>> {
        let ctx = self.ch.field();
        let mut sums = vec![Complex::new(T::zero(), T::zero()); NB * NB];
        for t in &self.terms {
            let v = t.weight * self.ch.chi1(ctx.sub(t.phase, ctx.mul(b, t.a)));
            sums[t.key] = sums[t.key] + v;
        }
        (0..NB * NB)
            .filter(|&i| self.counts[i] > 0)
            .map(|i| Stratum {
                first: Branch::ALL[i / NB],
                second: Branch::ALL[i % NB],
                count: self.counts[i],
                sum: sums[i],
            })
            .collect()
    }

    /// Number of classified pairs; (q-1)^2 when the strata partition the domain.
    pub fn classified(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn t_b(&self, b: Fe) -> TbParts<T> {
        let terms = self
            .strata(b)
            .into_iter()
            .map(|s| (format!("{}/{}", s.first, s.second), s.sum))
            .collect();
        TbParts::from_terms(terms, Vec::new(), Reading::Repaired)
    }
}
