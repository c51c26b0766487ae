use std::collections::BTreeMap;
use std::io::Write;

use cbct_core::characters::Characters;
use cbct_core::tables::{bct_table_from_row1, c_ddt_table, uniformity_from_row1, CParam, EngineTag, TableResult};
use cbct_core::weil::{coulter_s, gold_s_alpha_beta, s_alpha_beta_direct, s_k_direct, Branch, GoldParams};
use cbct_core::{Error, Fe, FieldCtx};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{Engine, FieldInfoArgs, SweepArgs, TableArgs, VerifyArgs, WeilArgs, WeilMethod, WeilSum};
use crate::jobs::{build_field, build_function, engine_name, parse_c, select_b, select_c, Kit};
use crate::output::{emit, table_csv, TableJson, SCHEMA};
use crate::Failure;

type Outcome = std::result::Result<(), Failure>;

pub fn field_info(args: &FieldInfoArgs) -> Outcome {
    let ctx = build_field(&args.field)?;
    let exp_log = ctx.nonzero().all(|x| ctx.log(x).map(|l| ctx.exp(l as i64)) == Some(x));
    let frobenius = ctx.elements().all(|x| ctx.frobenius(x, ctx.n()) == x);
    let trace = ctx.elements().all(|x| {
        let s = (0..ctx.n()).fold(Fe::ZERO, |acc, i| ctx.add(acc, ctx.frobenius(x, i)));
        s.0 == ctx.trace(x)
    });
    let checks = [("exp_log", exp_log), ("frobenius", frobenius), ("trace", trace)];
    let json = json!({
        "schema": SCHEMA,
        "kind": "field-info",
        "p": ctx.p(),
        "n": ctx.n(),
        "q": ctx.q(),
        "modulus": ctx.modulus(),
        "generator": ctx.generator().0,
        "checks": checks.iter().map(|&(k, v)| (k, v)).collect::<BTreeMap<_, _>>(),
    });
    emit(args.output.out.as_deref(), args.output.format, &json, || {
        let mut rows = vec![
            vec!["p".into(), ctx.p().to_string()],
            vec!["n".into(), ctx.n().to_string()],
            vec!["q".into(), ctx.q().to_string()],
            vec!["modulus".into(), join(ctx.modulus())],
            vec!["generator".into(), ctx.generator().0.to_string()],
        ];
        rows.extend(checks.iter().map(|&(k, v)| vec![k.to_string(), v.to_string()]));
        (vec!["key".into(), "value".into()], rows)
    })?;
    if let Some((name, _)) = checks.iter().find(|(_, ok)| !ok) {
        return Err(Error::Internal(format!("field table check `{name}` failed")).into());
    }
    Ok(())
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn engine_tag(e: Engine) -> EngineTag {
    match e {
        Engine::Brute => EngineTag::Brute,
        Engine::CharDirect => EngineTag::CharDirect,
        Engine::CharGold => EngineTag::CharGold,
        Engine::Case => EngineTag::Case,
    }
}

pub fn ddt(args: &TableArgs) -> Outcome {
    let ctx = build_field(&args.field)?;
    let f = build_function(&ctx, &args.function)?;
    let cp = parse_c(&ctx, args.c)?;
    if args.engine != Engine::Brute {
        return Err(Error::UnsupportedEngine {
            engine: engine_name(args.engine).into(),
            reason: "the c-differential table is only counted directly".into(),
        }
        .into());
    }
    if let Some(b) = args.b {
        let b = ctx.element(b)?;
        let value = cbct_core::tables::Monomial::new(&ctx, f.spec).ddt_entry(&cp, Fe::ONE, b);
        return single_entry(args, &ctx, &cp, f.spec.d_exp, "ddt", b, value);
    }
    let table = c_ddt_table(&ctx, f.spec, &cp)?;
    write_table(args, "ddt", &table)
}

pub fn bct(args: &TableArgs) -> Outcome {
    let ctx = build_field(&args.field)?;
    let f = build_function(&ctx, &args.function)?;
    let cp = parse_c(&ctx, args.c)?;
    let kit = Kit::new(&ctx, &f, &[args.engine])?;
    let ch = Characters::<f64>::new(&ctx);
    if let Some(b) = args.b {
        let b = ctx.element(b)?;
        let value = kit.entries(&ch, args.engine, &cp, &[b]).remove(0)?;
        return single_entry(args, &ctx, &cp, f.spec.d_exp, "bct", b, value);
    }
    let row1 = kit.row1(&ch, args.engine, &cp)?;
    let table = bct_table_from_row1(&kit.mono, &cp, row1, engine_tag(args.engine))?;
    write_table(args, "bct", &table)
}

fn single_entry(args: &TableArgs, ctx: &FieldCtx, cp: &CParam, d: u64, kind: &str, b: Fe, value: u64) -> Outcome {
    let json = json!({
        "schema": SCHEMA,
        "kind": kind,
        "p": ctx.p(),
        "n": ctx.n(),
        "modulus": ctx.modulus(),
        "d": d,
        "c_enc": cp.c.0,
        "a": 1,
        "b": b.0,
        "value": value,
        "engine": engine_name(args.engine),
    });
    emit(args.output.out.as_deref(), args.output.format, &json, || {
        (vec!["a".into(), "b".into(), "value".into()], vec![vec!["1".into(), b.0.to_string(), value.to_string()]])
    })?;
    Ok(())
}

fn write_table(args: &TableArgs, kind: &'static str, t: &TableResult) -> Outcome {
    let json = TableJson {
        schema: SCHEMA,
        kind,
        p: t.p,
        n: t.n,
        modulus: &t.modulus,
        d: t.d,
        c_enc: t.c.c.0,
        entries: &t.entries,
        uniformity: t.uniformity,
        argmax: t.argmax.iter().map(|(a, b)| [a.0, b.0]).collect(),
        engine: t.engine.as_str(),
    };
    emit(args.output.out.as_deref(), args.output.format, &json, || table_csv(&t.entries))?;
    let summary = json!({ "uniformity": json.uniformity, "argmax": json.argmax });
    if args.output.out.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    Ok(())
}

pub fn weil(args: &WeilArgs) -> Outcome {
    let ctx = build_field(&args.field)?;
    let f = build_function(&ctx, &args.function)?;
    let ch = Characters::<f64>::new(&ctx);
    let (x, y) = (ctx.element(args.alpha)?, ctx.element(args.beta)?);
    let gold = || -> cbct_core::Result<GoldParams> { f.gold.ok_or(Error::NotAGoldExponent(f.spec.d_exp)) };
    let (value, branch) = match (args.sum, args.method) {
        (WeilSum::Sk, WeilMethod::Closed) => {
            let v = coulter_s(&ch, &gold()?, x, y)?;
            (v.value, v.branch)
        }
        (WeilSum::Sk, WeilMethod::Direct) => (s_k_direct(&ch, &gold()?, x, y), Branch::Direct),
        (WeilSum::Pair, WeilMethod::Closed) => {
            let v = gold_s_alpha_beta(&ch, &gold()?, x, y)?;
            (v.value, v.branch)
        }
        (WeilSum::Pair, WeilMethod::Direct) => (s_alpha_beta_direct(&ch, f.spec.d_exp, x, y), Branch::Direct),
    };
    let json = json!({ "schema": SCHEMA, "re": value.re, "im": value.im, "branch": branch.as_str() });
    emit(args.output.out.as_deref(), args.output.format, &json, || {
        (
            vec!["re".into(), "im".into(), "branch".into()],
            vec![vec![value.re.to_string(), value.im.to_string(), branch.as_str().into()]],
        )
    })?;
    Ok(())
}

#[derive(Serialize)]
struct SweepRow {
    c: u32,
    uniformity: u64,
    argmax_count: usize,
}

pub fn sweep(args: &SweepArgs) -> Outcome {
    let ctx = build_field(&args.field)?;
    let f = build_function(&ctx, &args.function)?;
    let cs = select_c(&ctx, &f, &args.c)?;
    let kit = Kit::new(&ctx, &f, &[args.engine])?;
    let ch = Characters::<f64>::new(&ctx);
    let mut rows = Vec::with_capacity(cs.len());
    for cp in &cs {
        let row1 = kit.row1(&ch, args.engine, cp)?;
        let (uniformity, argmax) = uniformity_from_row1(&kit.mono, &row1);
        rows.push(SweepRow { c: cp.c.0, uniformity, argmax_count: argmax.len() });
    }
    let json = json!({
        "schema": SCHEMA,
        "kind": "sweep",
        "p": ctx.p(),
        "n": ctx.n(),
        "modulus": ctx.modulus(),
        "d": f.spec.d_exp,
        "engine": engine_name(args.engine),
        "rows": rows,
    });
    emit(args.output.out.as_deref(), args.output.format, &json, || {
        let header = ["c", "uniformity", "argmax_count"].map(String::from).to_vec();
        let body = rows
            .iter()
            .map(|r| vec![r.c.to_string(), r.uniformity.to_string(), r.argmax_count.to_string()])
            .collect();
        (header, body)
    })?;
    Ok(())
}

#[derive(Serialize)]
struct VerifyRow {
    c: u32,
    b: u32,
    values: Vec<Option<u64>>,
    agree: bool,
}

/// Column label and engine; `general` is the stratified engine used by `case` off its special c.
const COLUMNS: [(&str, Option<Engine>); 5] = [
    ("brute", Some(Engine::Brute)),
    ("char-direct", Some(Engine::CharDirect)),
    ("char-gold", Some(Engine::CharGold)),
    ("case", Some(Engine::Case)),
    ("general", None),
];

pub fn verify(args: &VerifyArgs) -> Outcome {
    let ctx = build_field(&args.field)?;
    if ctx.p() == 2 {
        return Err(Error::EvenCharacteristic.into());
    }
    let f = build_function(&ctx, &args.function)?;
    let cs = select_c(&ctx, &f, &args.c)?;
    let bs = select_b(&ctx, &args.b)?;
    let columns: Vec<(&str, Option<Engine>)> =
        if f.gold.is_some() { COLUMNS.to_vec() } else { COLUMNS[..2].to_vec() };
    let engines: Vec<Engine> = columns.iter().filter_map(|c| c.1).collect();
    let mut kit = Kit::new(&ctx, &f, &engines)?;
    let fault = if args.inject_fault { Some(inject(&mut kit)?) } else { None };
    let ch = Characters::<f64>::new(&ctx);

    let mut rows = Vec::with_capacity(cs.len() * bs.len());
    let mut first_bad: Option<Value> = None;
    for cp in &cs {
        let results: Vec<Vec<cbct_core::Result<u64>>> = columns
            .iter()
            .map(|&(_, e)| match e {
                Some(e) => kit.entries(&ch, e, cp, &bs),
                None => kit.general_entries(&ch, cp, &bs),
            })
            .collect();
        for (i, &b) in bs.iter().enumerate() {
            let values: Vec<Option<u64>> = results.iter().map(|r| r[i].as_ref().ok().copied()).collect();
            let agree = values.iter().all(|v| v.is_some() && *v == values[0]);
            if !agree && first_bad.is_none() {
                let per_engine: BTreeMap<&str, Value> = columns
                    .iter()
                    .zip(&results)
                    .map(|(&(name, _), r)| {
                        let v = match &r[i] {
                            Ok(v) => json!(v),
                            Err(e) => json!(format!("error: {e}")),
                        };
                        (name, v)
                    })
                    .collect();
                first_bad = Some(counterexample(&ctx, &f, &kit, &ch, cp, b, per_engine, fault.as_ref()));
            }
            rows.push(VerifyRow { c: cp.c.0, b: b.0, values, agree });
        }
    }
    let mismatches = rows.iter().filter(|r| !r.agree).count();
    let names: Vec<&str> = columns.iter().map(|c| c.0).collect();
    let json = json!({
        "schema": SCHEMA,
        "kind": "verify",
        "p": ctx.p(),
        "n": ctx.n(),
        "modulus": ctx.modulus(),
        "d": f.spec.d_exp,
        "k": f.gold.map(|g| g.k),
        "engines": names,
        "rows": rows,
        "entries": rows.len(),
        "mismatches": mismatches,
    });
    emit(args.output.out.as_deref(), args.output.format, &json, || {
        let mut header = vec!["c".to_string(), "b".to_string()];
        header.extend(names.iter().map(|s| s.to_string()));
        header.push("agree".into());
        let body = rows
            .iter()
            .map(|r| {
                let mut row = vec![r.c.to_string(), r.b.to_string()];
                row.extend(r.values.iter().map(|v| v.map_or("error".to_string(), |v| v.to_string())));
                row.push(r.agree.to_string());
                row
            })
            .collect();
        (header, body)
    })?;
    let summary = json!({ "entries": rows.len(), "mismatches": mismatches });
    if args.output.out.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    match first_bad {
        None => Ok(()),
        Some(cx) => {
            let mut err = std::io::stderr().lock();
            writeln!(err, "{}", json!({ "counterexample": cx })).ok();
            Err(Failure::Mismatch(mismatches))
        }
    }
}

/// Negates the first nonzero S_{alpha,beta} held by the closed-form engine.
fn inject(kit: &mut Kit<'_>) -> std::result::Result<Value, Failure> {
    let ctx = kit.ctx;
    let engine = kit
        .closed
        .as_mut()
        .or(kit.direct.as_mut())
        .ok_or_else(|| Error::Internal("no character engine to perturb".into()))?;
    for alpha in ctx.nonzero() {
        for beta in ctx.nonzero() {
            if engine.memo().get(alpha, beta).norm() > 0.5 {
                let branch = engine.memo().branch(alpha, beta);
                engine.inject_fault(alpha, beta);
                return Ok(json!({ "alpha": alpha.0, "beta": beta.0, "branch": branch.as_str() }));
            }
        }
    }
    Err(Error::Internal("every S value vanishes".into()).into())
}

#[allow(clippy::too_many_arguments)]
fn counterexample<'f>(
    ctx: &FieldCtx,
    f: &crate::jobs::Function,
    kit: &Kit<'f>,
    ch: &'f Characters<'f, f64>,
    cp: &CParam,
    b: Fe,
    values: BTreeMap<&str, Value>,
    fault: Option<&Value>,
) -> Value {
    let strata: Vec<Value> = kit
        .general(ch, cp)
        .map(|g| {
            g.strata(b)
                .iter()
                .map(|s| {
                    json!({
                        "first": s.first.as_str(),
                        "second": s.second.as_str(),
                        "count": s.count,
                        "re": s.sum.re,
                    })
                })
                .collect()
        })
        .unwrap_or_default();
    json!({
        "p": ctx.p(),
        "n": ctx.n(),
        "modulus": ctx.modulus(),
        "d": f.spec.d_exp,
        "k": f.gold.map(|g| g.k),
        "c": cp.c.0,
        "b": b.0,
        "values": values,
        "case_formula": kit.case_formula(cp).map(|c| c.as_str()),
        "branches": strata,
        "injected_fault": fault,
    })
}
