use std::path::Path;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use kneser_lab::alternation::{
    alternation_number, max_alt_for_perm, strong_alt2, AltNumber, Permutation, PermMode,
};
use kneser_lab::defect::{colorability_defect, usual_defect_formula};
use kneser_lab::generators::kneser;
use kneser_lab::solver::{afl_coloring, afl_formula, chromatic_number_with, Chi, SolverConfig};
use kneser_lab::tucker::{
    build_lambda, check_tucker_with, verify_reduction, CheckMode, LambdaContext, LambdaVariant,
    ReductionVariant, DEFAULT_PATTERN_BUDGET,
};
use kneser_lab::{Coloring, Hypergraph, ProductSpace};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::cache::{cache_key, without_timings, Cache, Line, VERSION};
use crate::instance::{parse_instance, Based, Instance};
use crate::{
    CertifyArgs, ColoringSource, Command, Global, InvariantViolation, ModeArg, Output, VariantArg,
};

pub fn dispatch(g: &Global, cmd: &Command) -> Result<Output> {
    match cmd {
        Command::Gen { spec, out } => gen(g, &spec.join(" "), out.as_deref()),
        Command::Bound { spec, r } => {
            let based = parse(g, spec)?.based(*r)?;
            cached(g, "bound", key_of(&based.descriptor, &[&based.base]), json!({"r": based.r}), || {
                bound(g, &based)
            })
        }
        Command::Product { factors, r } => {
            let based = factors
                .iter()
                .map(|f| parse_instance(f, g.seed)?.based(*r))
                .collect::<Result<Vec<_>>>()?;
            let rank = based[0].r;
            if based.iter().any(|b| b.r != rank) {
                bail!("all factors need the same rank");
            }
            let names: Vec<&str> = based.iter().map(|b| b.descriptor.as_str()).collect();
            let bases: Vec<&Hypergraph> = based.iter().map(|b| &b.base).collect();
            cached(g, "product", key_of(&names.join(" x "), &bases), json!({"r": rank}), || {
                product(g, &based, rank)
            })
        }
        Command::Certify(args) => certify(g, args),
        Command::VerifyReduction {
            spec,
            r,
            s,
            c,
            variant,
        } => {
            let inst = parse(g, spec)?;
            let params = json!({"r": r, "s": s, "C": c, "variant": variant});
            cached(g, "verify-reduction", key_of(&inst.descriptor, &[&inst.hypergraph]), params, || {
                reduction(&inst, *r, *s, *c, *variant)
            })
        }
        Command::Alt {
            spec,
            r,
            perm,
            strong,
        } => {
            let inst = parse(g, spec)?;
            let params = json!({"r": r, "perm": perm, "strong": strong});
            cached(g, "alt", key_of(&inst.descriptor, &[&inst.hypergraph]), params, || {
                alt(&inst, *r, perm.as_deref(), *strong)
            })
        }
        Command::Defect { spec, r } => {
            let inst = parse(g, spec)?;
            cached(g, "defect", key_of(&inst.descriptor, &[&inst.hypergraph]), json!({"r": r}), || {
                defect(&inst, *r)
            })
        }
        Command::Chromatic { spec } => {
            let inst = parse(g, spec)?;
            cached(g, "chromatic", key_of(&inst.descriptor, &[&inst.hypergraph]), json!({}), || {
                chromatic(g, &inst)
            })
        }
    }
}

fn parse(g: &Global, spec: &[String]) -> Result<Instance> {
    parse_instance(&spec.join(" "), g.seed)
}

fn key_of(descriptor: &str, hs: &[&Hypergraph]) -> Value {
    json!({"descriptor": descriptor, "hypergraphs": hs})
}

fn cached(
    g: &Global,
    op: &str,
    instance: Value,
    params: Value,
    compute: impl Fn() -> Result<Output>,
) -> Result<Output> {
    let Some(path) = &g.cache else {
        return compute();
    };
    let cache = Cache::new(path);
    let key = cache_key(op, &instance, &params);
    if let Some(stored) = cache.lookup(&key)? {
        let stored: Output = serde_json::from_value(stored).context("malformed cache entry")?;
        if g.recheck {
            let fresh = compute()?;
            if without_timings(&serde_json::to_value(&fresh)?) != without_timings(&serde_json::to_value(&stored)?) {
                return Err(InvariantViolation(format!(
                    "cached {op} result differs from a fresh computation"
                ))
                .into());
            }
        }
        cache.append(&Line::Hit {
            key,
            op: op.into(),
        })?;
        return Ok(stored);
    }
    let out = compute()?;
    cache.append(&Line::Result {
        key,
        op: op.into(),
        version: VERSION.into(),
        output: serde_json::to_value(&out)?,
    })?;
    Ok(out)
}

fn solver_config(g: &Global) -> SolverConfig {
    SolverConfig {
        node_limit: g.budget,
        ..SolverConfig::default()
    }
}

fn ms(t: Instant) -> f64 {
    (t.elapsed().as_secs_f64() * 1e6).round() / 1e3
}

fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

fn chi_value(chi: Chi) -> Value {
    match chi {
        Chi::Value(v) => json!(v),
        Chi::Uncolorable => json!("uncolorable"),
    }
}

fn opt(v: Option<usize>) -> String {
    v.map_or(String::new(), |v| v.to_string())
}

/// `alternation_number`, or `None` when it is over the size caps.
fn alt_if_feasible(h: &Hypergraph, r: usize) -> Result<Option<AltNumber>> {
    match alternation_number(h, r) {
        Ok(a) => Ok(Some(a)),
        Err(kneser_lab::Error::CapExceeded { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

struct Checks(Vec<(String, bool)>);

impl Checks {
    fn new() -> Self {
        Checks(Vec::new())
    }

    fn add(&mut self, name: impl Into<String>, holds: bool) {
        self.0.push((name.into(), holds));
    }

    fn json(&self) -> Value {
        Value::Array(
            self.0
                .iter()
                .map(|(n, h)| json!({"name": n, "holds": h}))
                .collect(),
        )
    }

    fn failed(&self) -> Vec<String> {
        self.0.iter().filter(|(_, h)| !h).map(|(n, _)| n.clone()).collect()
    }
}

fn gen(g: &Global, spec: &str, out: Option<&Path>) -> Result<Output> {
    let inst = parse_instance(spec, g.seed)?;
    let h = &inst.hypergraph;
    let mut report = json!({
        "instance": inst.descriptor,
        "vertices": h.n(),
        "edges": h.num_edges(),
    });
    match out {
        Some(path) => {
            std::fs::write(path, h.to_json_pretty() + "\n")
                .with_context(|| format!("writing {}", path.display()))?;
            report["out"] = json!(path.display().to_string());
        }
        None => report["hypergraph"] = serde_json::to_value(h)?,
    }
    Ok(Output {
        report,
        header: vec!["instance".into(), "vertices".into(), "edges".into()],
        rows: vec![vec![inst.descriptor.clone(), h.n().to_string(), h.num_edges().to_string()]],
        violations: Vec::new(),
    })
}

fn bound(g: &Global, b: &Based) -> Result<Output> {
    let r = b.r;
    let h = &b.base;
    let kg = kneser(h, r)?.hypergraph;

    let t = Instant::now();
    let chi_result = chromatic_number_with(&kg, &solver_config(g))?;
    let chi_ms = ms(t);
    let t = Instant::now();
    let cd = colorability_defect(h, r)?;
    let cd_ms = ms(t);
    let t = Instant::now();
    let alt = alt_if_feasible(h, r)?;
    let alt_ms = ms(t);

    let chi = chi_result.chi.value();
    let cd_bound = ceil_div(cd, r - 1);
    let alt_bound = alt.as_ref().map(|a| ceil_div(h.n() - a.value, r - 1));
    let afl = b.usual.and_then(|(n, k)| afl_formula(n, k, r).ok());
    let usual_cd = b.usual.and_then(|(n, k)| usual_defect_formula(n, k, r).ok());

    let mut checks = Checks::new();
    if let Some(chi) = chi {
        checks.add("chi >= cd_bound", chi >= cd_bound);
        if let Some(ab) = alt_bound {
            checks.add("chi >= alt_bound", chi >= ab);
        }
        if let Some(f) = afl {
            checks.add("chi == afl_formula", chi == f);
        }
    }
    if let Some(ab) = alt_bound {
        checks.add("alt_bound >= cd_bound", ab >= cd_bound);
    }
    if let Some(f) = usual_cd {
        checks.add("cd == usual_defect_formula", cd == f);
    }

    let report = json!({
        "instance": b.descriptor,
        "r": r,
        "base": {"vertices": h.n(), "edges": h.num_edges()},
        "kneser": {"vertices": kg.n(), "edges": kg.num_edges()},
        "chi": chi_value(chi_result.chi),
        "search_nodes": chi_result.total_nodes,
        "cd": cd,
        "alt": alt.as_ref().map(|a| a.value),
        "alt_permutation": alt.as_ref().map(|a| a.permutation.sequence()),
        "cd_bound": cd_bound,
        "alt_bound": alt_bound,
        "formula": {"afl": afl, "usual_defect": usual_cd},
        "invariants": checks.json(),
        "ok": checks.failed().is_empty(),
        "timings_ms": {"chi": chi_ms, "cd": cd_ms, "alt": alt_ms},
    });
    Ok(Output {
        report,
        header: ["instance", "r", "chi", "cd", "alt", "cd_bound", "alt_bound", "afl", "ok"]
            .map(String::from)
            .to_vec(),
        rows: vec![vec![
            b.descriptor.clone(),
            r.to_string(),
            opt(chi),
            cd.to_string(),
            opt(alt.as_ref().map(|a| a.value)),
            cd_bound.to_string(),
            opt(alt_bound),
            opt(afl),
            checks.failed().is_empty().to_string(),
        ]],
        violations: checks.failed(),
    })
}

fn product(g: &Global, factors: &[Based], r: usize) -> Result<Output> {
    let cfg = solver_config(g);
    let mut kgs = Vec::new();
    let mut rows = Vec::new();
    for b in factors {
        let kg = kneser(&b.base, r)?.hypergraph;
        let chi = chromatic_number_with(&kg, &cfg)?.chi.value();
        let cd = colorability_defect(&b.base, r)?;
        let alt = alt_if_feasible(&b.base, r)?.map(|a| a.value);
        let afl = b.usual.and_then(|(n, k)| afl_formula(n, k, r).ok());
        rows.push((b, chi, cd, alt, afl));
        kgs.push(kg);
    }
    let space = ProductSpace::new(kgs)?;
    let t = Instant::now();
    let result = chromatic_number_with(&space, &cfg)?;
    let chi_ms = ms(t);
    let chi = result.chi.value();

    let pullback = rows.iter().filter_map(|r| r.1).min();
    let cd_bound = ceil_div(rows.iter().map(|r| r.2).min().unwrap_or(0), r - 1);
    let alt_bound = rows
        .iter()
        .map(|row| row.3.map(|a| row.0.base.n() - a))
        .collect::<Option<Vec<_>>>()
        .map(|v| ceil_div(v.into_iter().min().unwrap_or(0), r - 1));
    let equality = rows
        .iter()
        .map(|row| row.4)
        .collect::<Option<Vec<_>>>()
        .map(|v| v.into_iter().min().unwrap_or(0));

    let mut checks = Checks::new();
    if let Some(chi) = chi {
        if let Some(pb) = pullback {
            checks.add("chi <= min factor chi", chi <= pb);
        }
        checks.add("chi >= cd_bound", chi >= cd_bound);
        if let Some(ab) = alt_bound {
            checks.add("chi >= alt_bound", chi >= ab);
        }
        if let Some(e) = equality {
            checks.add("chi == min afl_formula", chi == e);
        }
    }

    let factor_json: Vec<Value> = rows
        .iter()
        .map(|(b, chi, cd, alt, afl)| {
            json!({"instance": b.descriptor, "chi": chi, "cd": cd, "alt": alt, "afl": afl})
        })
        .collect();
    let name = factors
        .iter()
        .map(|b| b.descriptor.as_str())
        .collect::<Vec<_>>()
        .join(" x ");
    let report = json!({
        "factors": factor_json,
        "r": r,
        "product_vertices": space.num_vertices(),
        "chi": chi_value(result.chi),
        "search_nodes": result.total_nodes,
        "pullback_bound": pullback,
        "cd_bound": cd_bound,
        "alt_bound": alt_bound,
        "expected_from_formula": equality,
        "invariants": checks.json(),
        "ok": checks.failed().is_empty(),
        "timings_ms": {"chi": chi_ms},
    });
    Ok(Output {
        report,
        header: ["factors", "r", "chi", "pullback_bound", "cd_bound", "alt_bound", "expected", "ok"]
            .map(String::from)
            .to_vec(),
        rows: vec![vec![
            name,
            r.to_string(),
            opt(chi),
            opt(pullback),
            cd_bound.to_string(),
            opt(alt_bound),
            opt(equality),
            checks.failed().is_empty().to_string(),
        ]],
        violations: checks.failed(),
    })
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ColoringFile {
    Plain(Vec<usize>),
    Full { colors: Vec<usize>, num_colors: usize },
}

fn read_coloring(path: &Path) -> Result<Coloring> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: ColoringFile = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(match file {
        ColoringFile::Plain(colors) => Coloring::from_colors(colors)?,
        ColoringFile::Full { colors, num_colors } => Coloring::new(colors, num_colors)?,
    })
}

pub fn certify(g: &Global, args: &CertifyArgs) -> Result<Output> {
    let p = args.p;
    let based = args
        .factors
        .iter()
        .map(|f| parse_instance(f, g.seed)?.based(Some(p)))
        .collect::<Result<Vec<_>>>()?;
    let bases: Vec<Hypergraph> = based.iter().map(|b| b.base.clone()).collect();
    let kgs = bases
        .iter()
        .map(|h| kneser(h, p).map(|k| k.hypergraph))
        .collect::<kneser_lab::Result<Vec<_>>>()?;
    let space = ProductSpace::new(kgs)?;

    let coloring = match args.coloring {
        ColoringSource::File => {
            let path = args
                .coloring_file
                .as_deref()
                .ok_or_else(|| anyhow!("--coloring file needs --coloring-file"))?;
            read_coloring(path)?
        }
        ColoringSource::Formula => {
            let chis = based
                .iter()
                .map(|b| {
                    let (n, k) = b
                        .usual
                        .ok_or_else(|| anyhow!("the formula coloring needs complete k-subset factors"))?;
                    Ok(afl_formula(n, k, p)?)
                })
                .collect::<Result<Vec<_>>>()?;
            let best = (0..chis.len()).min_by_key(|&i| chis[i]).unwrap();
            let (n, k) = based[best].usual.unwrap();
            space.pullback(best, &afl_coloring(n, k, p)?)?
        }
        ColoringSource::Solver => chromatic_number_with(&space, &solver_config(g))?
            .witness
            .ok_or_else(|| anyhow!("the product has no proper coloring"))?,
    };

    let variant = match args.variant {
        VariantArg::Defect => LambdaVariant::Defect,
        VariantArg::Alternation => LambdaVariant::Alternation {
            permutations: bases
                .iter()
                .map(|h| alternation_number(h, p).map(|a| a.permutation))
                .collect::<kneser_lab::Result<Vec<_>>>()?,
        },
    };
    let num_colors = coloring.num_colors();
    let ctx = LambdaContext::new(bases, p, coloring, variant)?;
    let factor_values = ctx.factor_values().to_vec();
    let inst = build_lambda(ctx);
    let mode = match args.mode {
        ModeArg::Exhaustive => CheckMode::Exhaustive,
        ModeArg::Sampled => CheckMode::Sampled {
            seed: g.seed,
            count: args.samples,
        },
    };
    let budget = g.budget.map_or(DEFAULT_PATTERN_BUDGET, u128::from);
    let t = Instant::now();
    let report = check_tucker_with(&inst, mode, budget)?;
    let check_ms = ms(t);

    let mut violations = Vec::new();
    for (name, ok) in [
        ("range", report.range_ok),
        ("equivariance", report.equivariance_ok),
        ("property1", report.property1_ok),
        ("property2", report.property2_ok),
        ("conclusion", report.conclusion.holds),
    ] {
        if !ok {
            violations.push(name.to_string());
        }
    }
    if report.is_critical() {
        violations.push("critical: hypotheses hold but the conclusion fails".into());
    }

    let names: Vec<&str> = based.iter().map(|b| b.descriptor.as_str()).collect();
    let certificate = json!({
        "version": VERSION,
        "factors": names,
        "p": p,
        "variant": args.variant,
        "coloring_source": args.coloring,
        "num_colors": num_colors,
        "factor_values": factor_values,
        "passed": report.passed(),
        "report": report,
        "timings_ms": {"check": check_ms},
    });
    if let Some(out) = &args.out {
        std::fs::write(out, serde_json::to_string_pretty(&certificate)? + "\n")
            .with_context(|| format!("writing {}", out.display()))?;
    }
    Ok(Output {
        header: [
            "factors", "p", "n", "alpha", "m", "range_ok", "equivariance_ok", "property1_ok",
            "property2_ok", "lhs", "rhs", "passed",
        ]
        .map(String::from)
        .to_vec(),
        rows: vec![vec![
            names.join(" x "),
            p.to_string(),
            report.n.to_string(),
            report.alpha.to_string(),
            report.m.to_string(),
            report.range_ok.to_string(),
            report.equivariance_ok.to_string(),
            report.property1_ok.to_string(),
            report.property2_ok.to_string(),
            report.conclusion.lhs.to_string(),
            report.conclusion.rhs.to_string(),
            report.passed().to_string(),
        ]],
        report: certificate,
        violations,
    })
}

fn reduction(inst: &Instance, r: usize, s: usize, c: usize, variant: VariantArg) -> Result<Output> {
    let v = match variant {
        VariantArg::Defect => ReductionVariant::Defect,
        VariantArg::Alternation => ReductionVariant::Alternation,
    };
    let check = verify_reduction(&inst.hypergraph, r, s, c, v)?;
    let mut report = serde_json::to_value(&check)?;
    report["instance"] = json!(inst.descriptor);
    let violations = if check.holds {
        Vec::new()
    } else {
        vec!["reduction inequality".to_string()]
    };
    Ok(Output {
        report,
        header: ["instance", "variant", "r", "s", "C", "lhs", "rhs", "holds"]
            .map(String::from)
            .to_vec(),
        rows: vec![vec![
            inst.descriptor.clone(),
            format!("{variant:?}").to_lowercase(),
            r.to_string(),
            s.to_string(),
            c.to_string(),
            check.lhs.to_string(),
            check.rhs.to_string(),
            check.holds.to_string(),
        ]],
        violations,
    })
}

fn parse_perm(text: &str) -> Result<Permutation> {
    let seq = text
        .split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .context("permutation entries must be integers")?;
    Ok(Permutation::new(seq)?)
}

fn alt(inst: &Instance, r: usize, perm: Option<&str>, strong: bool) -> Result<Output> {
    let h = &inst.hypergraph;
    let (value, permutation, kind) = match (strong, perm) {
        (true, _) if r != 2 => bail!("the strong alternation number is defined for r = 2"),
        (true, Some(p)) => {
            let pi = parse_perm(p)?;
            (strong_alt2(h, &PermMode::Fixed(pi.clone()))?, Some(pi), "strong_fixed")
        }
        (true, None) => (strong_alt2(h, &PermMode::Exact)?, None, "strong_exact"),
        (false, Some(p)) => {
            let pi = parse_perm(p)?;
            (max_alt_for_perm(h, r, &pi)?, Some(pi), "fixed")
        }
        (false, None) => {
            let a = alternation_number(h, r)?;
            (a.value, Some(a.permutation), "exact")
        }
    };
    let report = json!({
        "instance": inst.descriptor,
        "r": r,
        "mode": kind,
        "alt": value,
        "permutation": permutation.as_ref().map(|p| p.sequence()),
        "n_minus_alt": h.n() - value,
    });
    Ok(Output {
        report,
        header: ["instance", "r", "mode", "alt"].map(String::from).to_vec(),
        rows: vec![vec![inst.descriptor.clone(), r.to_string(), kind.into(), value.to_string()]],
        violations: Vec::new(),
    })
}

fn defect(inst: &Instance, r: usize) -> Result<Output> {
    let cd = colorability_defect(&inst.hypergraph, r)?;
    let formula = inst.usual.map(|(n, k)| usual_defect_formula(n, k, r)).transpose()?;
    let mut checks = Checks::new();
    if let Some(f) = formula {
        checks.add("cd == usual_defect_formula", cd == f);
    }
    let report = json!({
        "instance": inst.descriptor,
        "r": r,
        "cd": cd,
        "usual_defect": formula,
        "invariants": checks.json(),
    });
    Ok(Output {
        report,
        header: ["instance", "r", "cd", "usual_defect"].map(String::from).to_vec(),
        rows: vec![vec![inst.descriptor.clone(), r.to_string(), cd.to_string(), opt(formula)]],
        violations: checks.failed(),
    })
}

fn chromatic(g: &Global, inst: &Instance) -> Result<Output> {
    let h = &inst.hypergraph;
    let t = Instant::now();
    let result = chromatic_number_with(h, &solver_config(g))?;
    let chi_ms = ms(t);
    let report = json!({
        "instance": inst.descriptor,
        "vertices": h.n(),
        "edges": h.num_edges(),
        "chi": chi_value(result.chi),
        "witness": result.witness.as_ref().map(|c| c.colors()),
        "refutation": result.refutation,
        "search_nodes": result.total_nodes,
        "timings_ms": {"chi": chi_ms},
    });
    let chi_text = match result.chi {
        Chi::Value(v) => v.to_string(),
        Chi::Uncolorable => "uncolorable".into(),
    };
    Ok(Output {
        report,
        header: ["instance", "vertices", "edges", "chi"].map(String::from).to_vec(),
        rows: vec![vec![
            inst.descriptor.clone(),
            h.n().to_string(),
            h.num_edges().to_string(),
            chi_text,
        ]],
        violations: Vec::new(),
    })
}
