//! Exhaustive c-DDT and c-BCT counts for F(x) = x^d. Works in every
//! characteristic and serves as the reference for the character engines.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Fe, FieldCtx};

/// Refusal threshold for materialized q x q tables.
pub const MAX_TABLE_CELLS: u64 = 1 << 26;

/// Random (a, b) pairs checked against the homogeneity map before a table is filled from row 1.
pub const HOMOGENEITY_SAMPLES: usize = 32;

const HOMOGENEITY_SEED: u64 = 0x0c_b0_0e_4a;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialSpec {
    pub d_exp: u64,
}

impl MonomialSpec {
    pub fn new(ctx: &FieldCtx, d_exp: u64) -> Result<Self> {
        if d_exp == 0 || d_exp >= ctx.q() as u64 {
            return Err(Error::InvalidExponent { d: d_exp, q: ctx.q() });
        }
        Ok(Self { d_exp })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CParam {
    pub c: Fe,
    pub c_inv: Fe,
}

impl CParam {
    pub fn new(ctx: &FieldCtx, c: Fe) -> Result<Self> {
        ctx.check(c)?;
        let c_inv = ctx.inv(c).map_err(|_| Error::ZeroC)?;
        Ok(Self { c, c_inv })
    }

    pub fn inverse(&self) -> Self {
        Self { c: self.c_inv, c_inv: self.c }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableKind {
    Ddt,
    Bct,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EngineTag {
    Brute,
    CharDirect,
    CharGold,
    Case,
}

impl EngineTag {
    pub fn as_str(self) -> &'static str {
        match self {
            EngineTag::Brute => "brute",
            EngineTag::CharDirect => "char-direct",
            EngineTag::CharGold => "char-gold",
            EngineTag::Case => "case",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableResult {
    pub kind: TableKind,
    pub p: u32,
    pub n: u32,
    pub modulus: Vec<u32>,
    pub d: u64,
    pub c: CParam,
    pub engine: EngineTag,
    /// `entries[a][b]`, indexed by encodings.
    pub entries: Vec<Vec<u64>>,
    pub uniformity: u64,
    pub argmax: Vec<(Fe, Fe)>,
    pub domain_note: String,
}

/// F(x) = x^d with a preimage index of its values.
#[derive(Clone, Debug)]
pub struct Monomial<'f> {
    ctx: &'f FieldCtx,
    d: u64,
    values: Vec<Fe>,
    /// Preimages of v are `pre[start[v]..start[v + 1]]`.
    start: Vec<u32>,
    pre: Vec<Fe>,
}

impl<'f> Monomial<'f> {
    pub fn new(ctx: &'f FieldCtx, spec: MonomialSpec) -> Self {
        let q = ctx.q() as usize;
        let values: Vec<Fe> = ctx.elements().map(|x| ctx.pow_u(x, spec.d_exp)).collect();
        let mut start = vec![0u32; q + 1];
        for v in &values {
            start[v.0 as usize + 1] += 1;
        }
        for i in 0..q {
            start[i + 1] += start[i];
        }
        let mut fill = start.clone();
        let mut pre = vec![Fe::ZERO; q];
        for x in ctx.elements() {
            let v = values[x.0 as usize].0 as usize;
            pre[fill[v] as usize] = x;
            fill[v] += 1;
        }
        Self { ctx, d: spec.d_exp, values, start, pre }
    }

    pub fn ctx(&self) -> &'f FieldCtx {
        self.ctx
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn eval(&self, x: Fe) -> Fe {
        self.values[x.0 as usize]
    }

    pub fn preimages(&self, v: Fe) -> &[Fe] {
        &self.pre[self.start[v.0 as usize] as usize..self.start[v.0 as usize + 1] as usize]
    }

    /// Number of x with F(x) = v.
    pub fn multiplicity(&self, v: Fe) -> u64 {
        (self.start[v.0 as usize + 1] - self.start[v.0 as usize]) as u64
    }

    /// c-DDT row a: counts of F(x+a) - cF(x) over all x.
    pub fn ddt_row(&self, cp: &CParam, a: Fe) -> Vec<u64> {
        let ctx = self.ctx;
        let mut row = vec![0u64; ctx.q() as usize];
        for x in ctx.elements() {
            let v = ctx.sub(self.eval(ctx.add(x, a)), ctx.mul(cp.c, self.eval(x)));
            row[v.0 as usize] += 1;
        }
        row
    }

    pub fn ddt_entry(&self, cp: &CParam, a: Fe, b: Fe) -> u64 {
        let ctx = self.ctx;
        ctx.elements()
            .filter(|&x| ctx.sub(self.eval(ctx.add(x, a)), ctx.mul(cp.c, self.eval(x))) == b)
            .count() as u64
    }

    /// Pairs (x, y) with F(y) - cF(x) = b and F(y+a) - c^-1 F(x+a) = b.
    pub fn bct_entry(&self, cp: &CParam, a: Fe, b: Fe) -> u64 {
        let ctx = self.ctx;
        let mut count = 0;
        for x in ctx.elements() {
            let target = ctx.add(b, ctx.mul(cp.c, self.eval(x)));
            let second = ctx.add(b, ctx.mul(cp.c_inv, self.eval(ctx.add(x, a))));
            for &y in self.preimages(target) {
                if self.eval(ctx.add(y, a)) == second {
                    count += 1;
                }
            }
        }
        count
    }

    /// The same count with the roles of x and y exchanged:
    /// pairs with x^d - c y^d = b and (x+a)^d - c^-1 (y+a)^d = b.
    pub fn bct_entry_swapped(&self, cp: &CParam, a: Fe, b: Fe) -> u64 {
        let ctx = self.ctx;
        let mut count = 0;
        for y in ctx.elements() {
            let target = ctx.add(b, ctx.mul(cp.c, self.eval(y)));
            let second = ctx.add(b, ctx.mul(cp.c_inv, self.eval(ctx.add(y, a))));
            for &x in self.preimages(target) {
                if self.eval(ctx.add(x, a)) == second {
                    count += 1;
                }
            }
        }
        count
    }

    /// #{(x, y) : x^d - c y^d = b}.
    pub fn pair_count(&self, c: Fe, b: Fe) -> u64 {
        let ctx = self.ctx;
        ctx.elements()
            .map(|w| {
                let v = ctx.add(b, ctx.mul(c, w));
                self.multiplicity(v) * self.multiplicity(w)
            })
            .sum()
    }

    /// Row a = 1 of the c-BCT.
    pub fn bct_row1(&self, cp: &CParam) -> Vec<u64> {
        let ctx = self.ctx;
        (0..ctx.q()).into_par_iter().map(|b| self.bct_entry(cp, Fe::ONE, Fe(b))).collect()
    }

    /// b a^-d: the row-1 column holding entry (a, b), a != 0.
    pub fn homogeneous_column(&self, a: Fe, b: Fe) -> Fe {
        let ctx = self.ctx;
        ctx.mul(b, ctx.pow(a, -((self.d % (ctx.q() as u64 - 1)) as i64)))
    }
}

fn check_table_size(ctx: &FieldCtx) -> Result<()> {
    if (ctx.q() as u64).pow(2) > MAX_TABLE_CELLS {
        return Err(Error::TableTooLarge { q: ctx.q(), cap: MAX_TABLE_CELLS });
    }
    Ok(())
}

fn max_and_argmax(cells: impl Iterator<Item = (Fe, Fe, u64)>) -> (u64, Vec<(Fe, Fe)>) {
    let mut best = 0;
    let mut arg = Vec::new();
    for (a, b, v) in cells {
        if v > best {
            best = v;
            arg.clear();
        }
        if v == best {
            arg.push((a, b));
        }
    }
    (best, arg)
}

pub fn c_ddt_entry(ctx: &FieldCtx, spec: MonomialSpec, cp: &CParam, a: Fe, b: Fe) -> u64 {
    Monomial::new(ctx, spec).ddt_entry(cp, a, b)
}

pub fn c_ddt_table(ctx: &FieldCtx, spec: MonomialSpec, cp: &CParam) -> Result<TableResult> {
    check_table_size(ctx)?;
    let mono = Monomial::new(ctx, spec);
    let entries: Vec<Vec<u64>> = (0..ctx.q()).into_par_iter().map(|a| mono.ddt_row(cp, Fe(a))).collect();
    let skip_zero_row = cp.c == Fe::ONE;
    let (uniformity, argmax) = max_and_argmax(entries.iter().enumerate().flat_map(|(a, row)| {
        row.iter()
            .enumerate()
            .filter(move |_| !(skip_zero_row && a == 0))
            .map(move |(b, &v)| (Fe(a as u32), Fe(b as u32), v))
    }));
    Ok(TableResult {
        kind: TableKind::Ddt,
        p: ctx.p(),
        n: ctx.n(),
        modulus: ctx.modulus().to_vec(),
        d: spec.d_exp,
        c: *cp,
        engine: EngineTag::Brute,
        entries,
        uniformity,
        argmax,
        domain_note: if skip_zero_row { "a != 0, all b".into() } else { "all a, all b".into() },
    })
}

/// c-differential uniformity; the a = 0 row is excluded exactly when c = 1.
pub fn c_ddt_uniformity(ctx: &FieldCtx, spec: MonomialSpec, cp: &CParam) -> Result<(u64, Vec<(Fe, Fe)>)> {
    let t = c_ddt_table(ctx, spec, cp)?;
    Ok((t.uniformity, t.argmax))
}

pub fn c_bct_entry(ctx: &FieldCtx, spec: MonomialSpec, cp: &CParam, a: Fe, b: Fe) -> u64 {
    Monomial::new(ctx, spec).bct_entry(cp, a, b)
}

pub fn c_bct_row1(ctx: &FieldCtx, spec: MonomialSpec, cp: &CParam) -> Vec<u64> {
    Monomial::new(ctx, spec).bct_row1(cp)
}

/// Maximum over a, b != 0 and every (a, b) attaining it, derived from row 1.
pub fn uniformity_from_row1(mono: &Monomial<'_>, row1: &[u64]) -> (u64, Vec<(Fe, Fe)>) {
    let ctx = mono.ctx();
    let (best, cols) = max_and_argmax(ctx.nonzero().map(|b| (Fe::ONE, b, row1[b.0 as usize])));
    let mut arg: Vec<(Fe, Fe)> = ctx
        .nonzero()
        .flat_map(|a| {
            let ad = ctx.pow_u(a, mono.d());
            cols.iter().map(move |&(_, b1)| (a, ctx.mul(b1, ad)))
        })
        .collect();
    arg.sort();
    (best, arg)
}

/// Checks entry(a, b) = row1[b a^-d] on random pairs with a != 0.
pub fn verify_homogeneity(mono: &Monomial<'_>, cp: &CParam, row1: &[u64], samples: usize) -> Result<()> {
    let ctx = mono.ctx();
    let mut rng = ChaCha8Rng::seed_from_u64(HOMOGENEITY_SEED);
    for _ in 0..samples {
        let a = Fe(rng.gen_range(1..ctx.q()));
        let b = Fe(rng.gen_range(0..ctx.q()));
        let direct = mono.bct_entry(cp, a, b);
        let mapped = row1[mono.homogeneous_column(a, b).0 as usize];
        if direct != mapped {
            return Err(Error::HomogeneityViolation { a: a.0, b: b.0, direct, mapped });
        }
    }
    Ok(())
}

/// Full c-BCT from a given row 1; the a = 0 row is counted directly.
pub fn bct_table_from_row1(
    mono: &Monomial<'_>,
    cp: &CParam,
    row1: Vec<u64>,
    engine: EngineTag,
) -> Result<TableResult> {
    let ctx = mono.ctx();
    check_table_size(ctx)?;
    verify_homogeneity(mono, cp, &row1, HOMOGENEITY_SAMPLES)?;
    let entries: Vec<Vec<u64>> = (0..ctx.q())
        .into_par_iter()
        .map(|a| {
            let a = Fe(a);
            ctx.elements()
                .map(|b| {
                    if a.is_zero() {
                        mono.bct_entry(cp, a, b)
                    } else {
                        row1[mono.homogeneous_column(a, b).0 as usize]
                    }
                })
                .collect()
        })
        .collect();
    let (uniformity, argmax) = uniformity_from_row1(mono, &row1);
    Ok(TableResult {
        kind: TableKind::Bct,
        p: ctx.p(),
        n: ctx.n(),
        modulus: ctx.modulus().to_vec(),
        d: mono.d(),
        c: *cp,
        engine,
        entries,
        uniformity,
        argmax,
        domain_note: "a != 0, b != 0".into(),
    })
}

pub fn c_bct_full(ctx: &FieldCtx, spec: MonomialSpec, cp: &CParam) -> Result<TableResult> {
    let mono = Monomial::new(ctx, spec);
    let row1 = mono.bct_row1(cp);
    bct_table_from_row1(&mono, cp, row1, EngineTag::Brute)
}

/// c-boomerang uniformity: maximum over a, b != 0.
pub fn c_bct_uniformity(ctx: &FieldCtx, spec: MonomialSpec, cp: &CParam) -> (u64, Vec<(Fe, Fe)>) {
    let mono = Monomial::new(ctx, spec);
    let row1 = mono.bct_row1(cp);
    uniformity_from_row1(&mono, &row1)
}

/// #{(x, y) : x^d - c y^d = b}.
pub fn pair_count(ctx: &FieldCtx, spec: MonomialSpec, c: Fe, b: Fe) -> u64 {
    Monomial::new(ctx, spec).pair_count(c, b)
}
