use crate::{Format, Scope};
use ncbv::algebra::{
    check_delta_m_zero, parse_algebra, validate_a_infinity, validate_cyclic_dga, AlgebraKind, AlgebraSpec,
    ValidationReport,
};
use ncbv::bvcalc::{parse_functional, write_functional, BvContext, Functional, Letter};
use ncbv::graphsum::{GraphSum, LegSpace};
use ncbv::homotopy::{construct_homotopy, validate_homotopy, ContractionScope, HomotopyData};
use ncbv::ribbon::{enumerate_graphs, enumerate_unlabeled, Valency};
use ncbv::superlinear::{fmt_q, parse_q, Matrix};
use ncbv::{Error, Result};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

pub struct EnumerateConfig {
    pub chi_min: i64,
    pub legs: usize,
    pub min3: bool,
    pub require_legs: bool,
    pub labeled: bool,
    pub count_only: bool,
}

pub struct SolveConfig {
    pub algebra: PathBuf,
    pub chi_min: i64,
    pub max_legs: usize,
    pub scope: Scope,
    pub format: Format,
    pub output: Option<PathBuf>,
}

pub struct CheckConfig {
    pub solution: PathBuf,
    pub algebra: PathBuf,
    pub max_letters: usize,
    pub max_hbar: u32,
    pub scope: Option<Scope>,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))
}

fn load(path: &Path) -> Result<AlgebraSpec> {
    parse_algebra(&read(path)?)
}

fn full_report(spec: &AlgebraSpec) -> ValidationReport {
    match spec.kind {
        AlgebraKind::Associative => validate_cyclic_dga(spec),
        AlgebraKind::AInfinity => {
            let mut r = validate_a_infinity(spec);
            r.extend(check_delta_m_zero(spec));
            r
        }
    }
}

pub fn validate(path: &Path) -> Result<bool> {
    let spec = load(path)?;
    let report = full_report(&spec);
    print!("{report}");
    let mut passed = report.passed();
    if let Some(h) = &spec.h_op {
        match validate_homotopy(&spec, h) {
            Ok(hom) => println!("PASS homotopy (dim B = {})", hom.dim_b()),
            Err(e) => {
                println!("FAIL homotopy: {e}");
                passed = false;
            }
        }
    }
    println!("{}", if passed { "result: PASS" } else { "result: FAIL" });
    Ok(passed)
}

pub fn enumerate(cfg: &EnumerateConfig) -> Result<bool> {
    let valency = if cfg.min3 {
        Valency::Min3
    } else {
        Valency::Trivalent
    };
    if cfg.chi_min > 1 {
        return Err(Error::Argument("--chi must be at most 1".into()));
    }
    let classes = enumerate_unlabeled(cfg.chi_min, cfg.legs, valency, cfg.require_legs);
    if cfg.count_only {
        let total: u128 = if cfg.labeled {
            classes.iter().map(|c| c.labeled_count()).sum()
        } else {
            classes.len() as u128
        };
        println!("{total}");
        return Ok(true);
    }
    let mut grouped: BTreeMap<i64, Vec<String>> = BTreeMap::new();
    if cfg.labeled {
        for g in enumerate_graphs(cfg.chi_min, cfg.legs, valency, cfg.require_legs) {
            grouped.entry(-g.chi()).or_default().push(g.encode());
        }
    } else {
        for c in &classes {
            grouped
                .entry(-c.chi)
                .or_default()
                .push(format!("{} aut={}", c.graph.encode(), c.automorphisms));
        }
    }
    for (neg_chi, lines) in grouped {
        println!("# chi={} graphs={}", -neg_chi, lines.len());
        for l in lines {
            println!("{l}");
        }
    }
    Ok(true)
}

fn scope_name(spec: &AlgebraSpec, scope: Scope) -> &'static str {
    match (spec.h_op.is_some(), scope) {
        (true, _) => "given",
        (false, Scope::Full) => "full",
        (false, Scope::InvertibleOnly) => "invertible-only",
    }
}

fn homotopy(spec: &AlgebraSpec, scope: Scope) -> Result<HomotopyData> {
    match &spec.h_op {
        Some(h) => validate_homotopy(spec, h),
        None => construct_homotopy(
            spec,
            match scope {
                Scope::Full => ContractionScope::Full,
                Scope::InvertibleOnly => ContractionScope::InvertibleOnly,
            },
        ),
    }
}

fn b_basis_names(spec: &AlgebraSpec, hom: &HomotopyData) -> Vec<String> {
    hom.b_basis
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let parts: Vec<String> = v
                .iter()
                .enumerate()
                .filter(|(_, x)| !num_traits_is_zero(x))
                .map(|(i, x)| format!("{}*{}", fmt_q(x), spec.basis.name(i)))
                .collect();
            format!("b{j}={}", parts.join("+"))
        })
        .collect()
}

fn num_traits_is_zero(x: &ncbv::superlinear::Q) -> bool {
    *x.numer() == 0.into()
}

fn refuse_invalid(spec: &AlgebraSpec) -> Result<()> {
    let report = full_report(spec);
    if report.passed() {
        return Ok(());
    }
    let failed: Vec<&str> = report
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name.as_str())
        .collect();
    if spec.kind == AlgebraKind::AInfinity && failed.iter().any(|n| n.starts_with("delta_m")) {
        return Err(Error::Refused(format!(
            "the tadpole condition (Delta m_n = 0) fails: {}",
            failed.join(", ")
        )));
    }
    Err(Error::Refused(format!(
        "the algebra fails validation: {}",
        failed.join(", ")
    )))
}

pub fn solve(cfg: &SolveConfig) -> Result<bool> {
    if cfg.chi_min > 1 {
        return Err(Error::Argument("--min-euler must be at most 1".into()));
    }
    let spec = load(&cfg.algebra)?;
    refuse_invalid(&spec)?;
    let hom = homotopy(&spec, cfg.scope)?;
    let gs = GraphSum::new(&spec, &hom, LegSpace::B)?;
    let s = gs.sum_s(cfg.chi_min, cfg.max_legs)?;
    let hbar = (1 - cfg.chi_min) as u32;
    let valency = match gs.valency() {
        Valency::Trivalent => "trivalent",
        Valency::Min3 => "min3",
    };
    let name = cfg
        .algebra
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let text = match cfg.format {
        Format::Text => {
            let mut out = String::new();
            out.push_str(&format!("# tool=ncbv-{}\n", env!("CARGO_PKG_VERSION")));
            out.push_str(&format!(
                "# algebra={name} homotopy={}\n",
                scope_name(&spec, cfg.scope)
            ));
            out.push_str(&format!(
                "# min_euler={} max_legs={} valency={valency} weighting=inverse-automorphisms\n",
                cfg.chi_min, cfg.max_legs
            ));
            out.push_str(&format!("# truncation letters={} hbar={hbar}\n", cfg.max_legs));
            out.push_str(&format!(
                "# dim_b={} {}\n",
                hom.dim_b(),
                b_basis_names(&spec, &hom).join(" ")
            ));
            out.push_str(&write_functional(&s));
            out
        }
        Format::Json => {
            let terms: Vec<Value> = s
                .terms()
                .map(|(k, v)| {
                    let cycles: Vec<&[Letter]> = k.monomial.cycles().iter().map(|c| c.letters()).collect();
                    json!({ "hbar": k.hbar, "cycles": cycles, "coeff": fmt_q(v) })
                })
                .collect();
            let doc = json!({
                "manifest": {
                    "tool": format!("ncbv-{}", env!("CARGO_PKG_VERSION")),
                    "algebra": name,
                    "homotopy": scope_name(&spec, cfg.scope),
                    "min_euler": cfg.chi_min,
                    "max_legs": cfg.max_legs,
                    "valency": valency,
                    "weighting": "inverse-automorphisms",
                    "truncation": { "letters": cfg.max_legs, "hbar": hbar },
                    "dim_b": hom.dim_b(),
                    "b_basis": b_basis_names(&spec, &hom),
                },
                "terms": terms,
            });
            let mut t = serde_json::to_string_pretty(&doc).expect("json serializes");
            t.push('\n');
            t
        }
    };
    match &cfg.output {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| Error::Input(format!("cannot write {}: {e}", p.display())))?
        }
        None => print!("{text}"),
    }
    Ok(true)
}

/// A solution file: the functional, the bounds it is complete to, and the
/// homotopy it was computed with.
struct Solution {
    s: Functional,
    truncation: Option<(usize, u32)>,
    homotopy: Option<String>,
}

fn manifest_fields(text: &str) -> BTreeMap<String, String> {
    text.lines()
        .filter_map(|l| l.trim().strip_prefix('#'))
        .flat_map(str::split_whitespace)
        .filter_map(|tok| tok.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

fn parse_solution(text: &str, hom: &HomotopyData) -> Result<Solution> {
    let par = hom.letter_parities();
    let bad = |m: &str| Error::Input(format!("malformed solution file: {m}"));
    if text.trim_start().starts_with('{') {
        let doc: Value = serde_json::from_str(text).map_err(|e| bad(&e.to_string()))?;
        let mut s = Functional::new();
        for t in doc["terms"].as_array().ok_or_else(|| bad("missing terms"))? {
            let hbar = t["hbar"].as_u64().ok_or_else(|| bad("bad hbar"))? as u32;
            let cycles: Vec<Vec<Letter>> =
                serde_json::from_value(t["cycles"].clone()).map_err(|e| bad(&e.to_string()))?;
            if cycles.iter().flatten().any(|&l| l as usize >= par.len()) {
                return Err(bad("letter out of range"));
            }
            let coeff = t["coeff"]
                .as_str()
                .and_then(parse_q)
                .ok_or_else(|| bad("bad coeff"))?;
            s.add_term(hbar, &cycles, coeff, &par)?;
        }
        let m = &doc["manifest"];
        let truncation = match (
            m["truncation"]["letters"].as_u64(),
            m["truncation"]["hbar"].as_u64(),
        ) {
            (Some(l), Some(h)) => Some((l as usize, h as u32)),
            _ => None,
        };
        return Ok(Solution {
            s,
            truncation,
            homotopy: m["homotopy"].as_str().map(str::to_string),
        });
    }
    let fields = manifest_fields(text);
    let truncation = match (fields.get("letters"), fields.get("hbar")) {
        (Some(l), Some(h)) => Some((
            l.parse().map_err(|_| bad("bad truncation letters"))?,
            h.parse().map_err(|_| bad("bad truncation hbar"))?,
        )),
        _ => None,
    };
    Ok(Solution {
        s: parse_functional(text, &par)?,
        truncation,
        homotopy: fields.get("homotopy").cloned(),
    })
}

pub fn check(cfg: &CheckConfig) -> Result<bool> {
    let spec = load(&cfg.algebra)?;
    let text = read(&cfg.solution)?;
    let manifest_scope = manifest_fields(&text).get("homotopy").cloned();
    let scope = cfg.scope.unwrap_or(match manifest_scope.as_deref() {
        Some("invertible-only") => Scope::InvertibleOnly,
        _ => Scope::Full,
    });
    let hom = homotopy(&spec, scope)?;
    let sol = parse_solution(&text, &hom)?;
    let scope_used = scope_name(&spec, scope);
    if let Some(h) = &sol.homotopy {
        if h != scope_used {
            return Err(Error::Input(format!(
                "solution was computed with homotopy '{h}' but the check uses '{scope_used}'"
            )));
        }
    }
    let pairing = if hom.dim_b() == 0 {
        Matrix::zeros(0, 0)
    } else {
        hom.beta_b
            .inverse()
            .ok_or_else(|| Error::Singular { radical: vec![] })?
    };
    let ctx = BvContext::new(hom.letter_parities(), pairing)?.with_derivation(hom.i_b.clone())?;
    // A solution without a manifest is taken as exact.
    let truncation = sol.truncation.unwrap_or((usize::MAX / 2, u32::MAX));
    let report = ctx.residual(&sol.s, truncation, cfg.max_letters, cfg.max_hbar)?;
    println!("window letters<={} hbar<={}", cfg.max_letters, cfg.max_hbar);
    println!("terms in S: {}", sol.s.len());
    for line in report.describe() {
        println!("nonzero {line}");
    }
    let passed = report.passed();
    println!("{}", if passed { "result: PASS" } else { "result: FAIL" });
    Ok(passed)
}
