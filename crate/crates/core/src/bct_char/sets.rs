//! Classification of (alpha, beta) and its twin (-alpha c, -beta c^-1) for d = p^k + 1.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Fe, FieldCtx, LinMap};
use crate::tables::CParam;
use crate::weil::{coulter_condition, coulter_map, gold_ab, lab_map, GoldParams};

/// Which linearized map decides permutation and supplies the root x_{alpha,beta}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SetBasis {
    /// L_{alpha,beta}(x) = A x^(p^2k) + B x.
    LinearizedLab,
    /// f_A(x) = A^(p^k) x^(p^2k) + A x.
    CoulterF,
}

/// One factor S_{alpha,beta} with A = alpha + beta, B = beta^(p^(n-k)) + beta.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FactorInfo {
    pub alpha: Fe,
    pub beta: Fe,
    pub a: Fe,
    pub b: Fe,
    /// The chosen map is a permutation. False when A = 0.
    pub pp: bool,
    /// Smallest solution of map(x) = -(beta + beta^(p^k)). None when A = 0.
    pub root: Option<Fe>,
    /// A^((q-1)/(p^e+1)) = (-1)^(m/e).
    pub special: bool,
}

impl FactorInfo {
    fn new(ctx: &FieldCtx, gp: &GoldParams, basis: SetBasis, f_maps: &[LinMap], alpha: Fe, beta: Fe) -> Self {
        let (a, b) = gold_ab(ctx, gp, alpha, beta);
        let (pp, root) = if a.is_zero() {
            (false, None)
        } else {
            let rhs = ctx.neg(ctx.add(beta, ctx.frobenius(beta, gp.k)));
            let lab;
            let map = match basis {
                SetBasis::CoulterF => &f_maps[a.0 as usize],
                SetBasis::LinearizedLab => {
                    lab = lab_map(ctx, gp, alpha, beta);
                    &lab
                }
            };
            (map.is_permutation(), map.solve(ctx, rhs))
        };
        Self { alpha, beta, a, b, pp, root, special: coulter_condition(ctx, gp, a) }
    }

    /// A != 0 and B != 0.
    pub fn generic(&self) -> bool {
        !self.a.is_zero() && !self.b.is_zero()
    }

    /// In Y: A != 0 and the map is not a permutation.
    pub fn in_y(&self) -> bool {
        !self.a.is_zero() && !self.pp
    }

    /// In the complement of Y: A != 0 and the map is a permutation.
    pub fn in_ybar(&self) -> bool {
        !self.a.is_zero() && self.pp
    }

    /// In Y with a root of the linearized equation.
    pub fn in_a(&self) -> bool {
        self.in_y() && self.root.is_some()
    }

    /// beta - A x^(p^k+1) at the stored root.
    pub fn phase(&self, ctx: &FieldCtx, gp: &GoldParams) -> Option<Fe> {
        self.root.map(|x| ctx.sub(self.beta, ctx.mul(self.a, ctx.pow_u(x, gp.exponent()))))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairInfo {
    pub first: FactorInfo,
    pub second: FactorInfo,
}

/// Every pair in F_q^* x F_q^*, in encoding order, plus the roots of beta^(p^k-1) = -1.
pub struct GoldCaseSets<'f> {
    ctx: &'f FieldCtx,
    gp: GoldParams,
    cp: CParam,
    basis: SetBasis,
    pairs: Vec<PairInfo>,
    roots: Vec<Fe>,
}

impl<'f> GoldCaseSets<'f> {
    pub fn new(ctx: &'f FieldCtx, gp: GoldParams, cp: CParam, basis: SetBasis) -> Result<Self> {
        if ctx.p() == 2 {
            return Err(Error::EvenCharacteristic);
        }
        let f_maps: Vec<LinMap> = match basis {
            SetBasis::CoulterF => ctx.elements().map(|a| coulter_map(ctx, &gp, a)).collect(),
            SetBasis::LinearizedLab => Vec::new(),
        };
        let mut pairs = Vec::with_capacity((ctx.q() as usize - 1).pow(2));
        for alpha in ctx.nonzero() {
            for beta in ctx.nonzero() {
                let alpha2 = ctx.neg(ctx.mul(alpha, cp.c));
                let beta2 = ctx.neg(ctx.mul(beta, cp.c_inv));
                pairs.push(PairInfo {
                    first: FactorInfo::new(ctx, &gp, basis, &f_maps, alpha, beta),
                    second: FactorInfo::new(ctx, &gp, basis, &f_maps, alpha2, beta2),
                });
            }
        }
        let roots = ctx.nonzero().filter(|&beta| gold_ab(ctx, &gp, Fe::ZERO, beta).1.is_zero()).collect();
        Ok(Self { ctx, gp, cp, basis, pairs, roots })
    }

    pub fn ctx(&self) -> &'f FieldCtx {
        self.ctx
    }

    pub fn gp(&self) -> &GoldParams {
        &self.gp
    }

    pub fn cp(&self) -> &CParam {
        &self.cp
    }

    pub fn basis(&self) -> SetBasis {
        self.basis
    }

    pub fn pairs(&self) -> &[PairInfo] {
        &self.pairs
    }

    /// Nonzero beta with beta^(p^(n-k)) + beta = 0; empty unless n/e is even.
    pub fn roots(&self) -> &[Fe] {
        &self.roots
    }
}
