use cbct_core::bct_char::{
    assemble_entry, gold_tb_c1, gold_tb_cm1, gold_tb_unit, unit_norm_cs, Boundary, CharEngine, FactorTable,
    GeneralCase, GoldCaseSets, Reading, SumEngine,
};
use cbct_core::characters::Characters;
use cbct_core::field::DEFAULT_MAX_Q;
use cbct_core::tables::{CParam, Monomial, MonomialSpec};
use cbct_core::weil::GoldParams;
use cbct_core::{Error, Fe, FieldCtx, Result};
use rayon::prelude::*;

use crate::args::{Engine, FieldArgs, FunctionArgs};

pub fn build_field(args: &FieldArgs) -> Result<FieldCtx> {
    FieldCtx::with_max_q(args.p, args.n, args.modulus.as_deref(), args.max_q_override.unwrap_or(DEFAULT_MAX_Q))
}

/// The exponent, plus k when it is (or is given as) a Gold exponent.
pub struct Function {
    pub spec: MonomialSpec,
    pub gold: Option<GoldParams>,
}

pub fn build_function(ctx: &FieldCtx, args: &FunctionArgs) -> Result<Function> {
    match (args.d, args.k) {
        (_, Some(k)) => {
            let gp = GoldParams::new(ctx, k)?;
            Ok(Function { spec: MonomialSpec::new(ctx, gp.exponent())?, gold: Some(gp) })
        }
        (Some(d), None) => {
            let spec = MonomialSpec::new(ctx, d)?;
            Ok(Function { spec, gold: GoldParams::from_exponent(ctx, d).ok() })
        }
        (None, None) => Err(Error::PreconditionViolated("one of --d or --k is required".into())),
    }
}

pub fn parse_c(ctx: &FieldCtx, enc: u64) -> Result<CParam> {
    CParam::new(ctx, ctx.element(enc)?)
}

pub fn select_c(ctx: &FieldCtx, f: &Function, sel: &str) -> Result<Vec<CParam>> {
    let cs: Vec<Fe> = match sel {
        "all" => ctx.nonzero().collect(),
        "unit-norm" => {
            let gp = f.gold.as_ref().ok_or_else(|| {
                Error::PreconditionViolated("`unit-norm` needs a Gold exponent p^k + 1".into())
            })?;
            unit_norm_cs(ctx, gp)
        }
        enc => vec![ctx.element(parse_enc(enc, "c")?)?],
    };
    cs.into_iter().map(|c| CParam::new(ctx, c)).collect()
}

pub fn select_b(ctx: &FieldCtx, sel: &str) -> Result<Vec<Fe>> {
    match sel {
        "all" => Ok(ctx.elements().collect()),
        enc => Ok(vec![ctx.element(parse_enc(enc, "b")?)?]),
    }
}

fn parse_enc(s: &str, what: &str) -> Result<u64> {
    s.parse()
        .map_err(|_| Error::PreconditionViolated(format!("--{what} must be an encoding or a keyword, got `{s}`")))
}

fn unsupported(engine: Engine, reason: &str) -> Error {
    Error::UnsupportedEngine { engine: engine_name(engine).into(), reason: reason.into() }
}

pub fn engine_name(engine: Engine) -> &'static str {
    match engine {
        Engine::Brute => "brute",
        Engine::CharDirect => "char-direct",
        Engine::CharGold => "char-gold",
        Engine::Case => "case",
    }
}

/// Which closed formula the case engine uses for c.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseFormula {
    One,
    MinusOne,
    UnitNorm,
    General,
}

impl CaseFormula {
    pub fn for_c(ctx: &FieldCtx, gp: &GoldParams, c: Fe) -> Self {
        if c == Fe::ONE {
            CaseFormula::One
        } else if c == ctx.neg(Fe::ONE) {
            CaseFormula::MinusOne
        } else if unit_norm_cs(ctx, gp).contains(&c) {
            CaseFormula::UnitNorm
        } else {
            CaseFormula::General
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CaseFormula::One => "c=1",
            CaseFormula::MinusOne => "c=-1",
            CaseFormula::UnitNorm => "unit-norm",
            CaseFormula::General => "general",
        }
    }
}

/// Engines for one (field, exponent), built once and reused across c.
pub struct Kit<'f> {
    pub ctx: &'f FieldCtx,
    pub mono: Monomial<'f>,
    pub gold: Option<GoldParams>,
    pub direct: Option<CharEngine<'f, f64>>,
    pub closed: Option<CharEngine<'f, f64>>,
    pub table: Option<FactorTable<f64>>,
}

impl<'f> Kit<'f> {
    /// Builds what `engines` need; refuses engines that do not apply.
    pub fn new(ctx: &'f FieldCtx, f: &Function, engines: &[Engine]) -> Result<Self> {
        let odd = ctx.p() != 2;
        for &e in engines {
            if e != Engine::Brute && !odd {
                return Err(unsupported(e, "character engines need odd characteristic"));
            }
            if matches!(e, Engine::CharGold | Engine::Case) && f.gold.is_none() {
                return Err(unsupported(e, "exponent is not of the Gold form p^k + 1"));
            }
        }
        let wants = |e: Engine| engines.contains(&e);
        let direct = wants(Engine::CharDirect)
            .then(|| CharEngine::new(ctx, f.spec, SumEngine::Direct))
            .transpose()?;
        let closed = wants(Engine::CharGold)
            .then(|| CharEngine::new(ctx, f.spec, SumEngine::GoldClosed))
            .transpose()?;
        let table = match (&f.gold, wants(Engine::Case)) {
            (Some(gp), true) => Some(FactorTable::new(ctx, gp)?),
            _ => None,
        };
        Ok(Self { ctx, mono: Monomial::new(ctx, f.spec), gold: f.gold, direct, closed, table })
    }

    /// Entries (1, b) for the given b, in order, one result per b.
    pub fn entries(&self, ch: &Characters<'f, f64>, engine: Engine, cp: &CParam, bs: &[Fe]) -> Vec<Result<u64>> {
        match engine {
            Engine::Brute => bs.par_iter().map(|&b| Ok(self.mono.bct_entry(cp, Fe::ONE, b))).collect(),
            Engine::CharDirect => char_entries(self.direct.as_ref(), cp, bs),
            Engine::CharGold => char_entries(self.closed.as_ref(), cp, bs),
            Engine::Case => match self.case_formula(cp) {
                Some(CaseFormula::General) | None => self.general_entries(ch, cp, bs),
                Some(formula) => self.closed_case_entries(ch, formula, cp, bs),
            },
        }
    }

    pub fn case_formula(&self, cp: &CParam) -> Option<CaseFormula> {
        self.gold.as_ref().map(|gp| CaseFormula::for_c(self.ctx, gp, cp.c))
    }

    /// The branch-stratified engine, regardless of c.
    pub fn general_entries(&self, ch: &Characters<'f, f64>, cp: &CParam, bs: &[Fe]) -> Vec<Result<u64>> {
        let Some(table) = &self.table else {
            return bs.iter().map(|_| Err(unsupported(Engine::Case, "no factor table"))).collect();
        };
        let general = GeneralCase::new(ch, table, cp);
        bs.par_iter()
            .map(|&b| assemble_entry(&self.mono, cp, b, general.t_b(b).t_b, Boundary::PairCount))
            .collect()
    }

    pub fn general(&self, ch: &'f Characters<'f, f64>, cp: &CParam) -> Option<GeneralCase<'f, f64>> {
        self.table.as_ref().map(|t| GeneralCase::new(ch, t, cp))
    }

    fn closed_case_entries(
        &self,
        ch: &Characters<'f, f64>,
        formula: CaseFormula,
        cp: &CParam,
        bs: &[Fe],
    ) -> Vec<Result<u64>> {
        let gp = self.gold.expect("case formula implies Gold");
        let reading = Reading::Repaired;
        let sets = match GoldCaseSets::new(self.ctx, gp, *cp, reading.basis()) {
            Ok(s) => s,
            Err(e) => return bs.iter().map(|_| Err(e.clone())).collect(),
        };
        bs.par_iter()
            .map(|&b| {
                let parts = match formula {
                    CaseFormula::One => gold_tb_c1(&sets, ch, b, reading),
                    CaseFormula::MinusOne => gold_tb_cm1(&sets, ch, b, reading),
                    CaseFormula::UnitNorm => gold_tb_unit(&sets, ch, b, reading),
                    CaseFormula::General => unreachable!("dispatched to the general engine"),
                }?;
                assemble_entry(&self.mono, cp, b, parts.t_b, Boundary::PairCount)
            })
            .collect()
    }

    /// Row a = 1 over all b.
    pub fn row1(&self, ch: &Characters<'f, f64>, engine: Engine, cp: &CParam) -> Result<Vec<u64>> {
        let bs: Vec<Fe> = self.ctx.elements().collect();
        self.entries(ch, engine, cp, &bs).into_iter().collect()
    }
}

fn char_entries(engine: Option<&CharEngine<'_, f64>>, cp: &CParam, bs: &[Fe]) -> Vec<Result<u64>> {
    match engine {
        Some(e) => bs.par_iter().map(|&b| e.entry(cp, b)).collect(),
        None => bs.iter().map(|_| Err(Error::Internal("engine not built".into()))).collect(),
    }
}
