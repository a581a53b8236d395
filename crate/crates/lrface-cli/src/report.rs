//! The structured report document every subcommand emits, plus the
//! human-readable rendering layered over the same data.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use lrface::reduce::ReducedProblem;
use serde::Serialize;

#[derive(Serialize)]
pub struct Report {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<Vec<i64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub face: Option<FaceDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdicts: Option<BTreeMap<String, bool>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub intersection: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub multiplicity: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mult_big: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mult_small: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduced: Option<ReducedDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub product: Option<Vec<TermDoc>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rules: Option<Vec<RuleDoc>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixtures: Option<Vec<FixtureDoc>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<String>,
    /// Wall-clock time; the single field excluded from byte-stability.
    pub elapsed_ms: u64,
}

impl Report {
    pub fn new(command: &str, group: Option<String>, mode: Option<&str>) -> Report {
        Report {
            command: command.into(),
            group,
            mode: mode.map(str::to_owned),
            seed: None,
            weights: None,
            target: None,
            face: None,
            verdicts: None,
            intersection: None,
            multiplicity: None,
            mult_big: None,
            mult_small: None,
            reduced: None,
            product: None,
            rules: None,
            fixtures: None,
            summary: None,
            elapsed_ms: 0,
        }
    }
}

#[derive(Serialize)]
pub struct FaceDoc {
    pub i: Vec<usize>,
    pub words: Vec<String>,
    pub w: String,
    pub codimension: usize,
}

#[derive(Serialize)]
pub struct ReducedDoc {
    pub group: String,
    pub node_map: Vec<usize>,
    pub factors: Vec<Vec<i64>>,
    pub target: Vec<i64>,
    pub display: String,
}

#[derive(Serialize)]
pub struct TermDoc {
    pub word: String,
    pub coefficient: String,
}

#[derive(Serialize)]
pub struct RuleDoc {
    pub i: Vec<usize>,
    pub words: Vec<String>,
    pub w: String,
    pub codimension: usize,
    pub all_pass: bool,
}

#[derive(Serialize)]
pub struct FixtureDoc {
    pub name: String,
    pub group: String,
    pub mode: String,
    pub expected: String,
    pub computed: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduced_multiplicity: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduction_ok: Option<bool>,
    pub ok: bool,
}

pub fn reduced_doc(reduced: &ReducedProblem) -> ReducedDoc {
    let (group, node_map) = match reduced.levi() {
        None => ("torus".to_string(), Vec::new()),
        Some(ls) => (ls.system.to_string(), ls.node_map.clone()),
    };
    ReducedDoc {
        group,
        node_map,
        factors: reduced.factor_coords().to_vec(),
        target: reduced.target_coords().to_vec(),
        display: reduced.to_string(),
    }
}

fn int_list(v: &[i64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

pub fn human(r: &Report) -> String {
    let mut out = String::new();
    match (&r.group, &r.mode) {
        (Some(g), Some(m)) => writeln!(out, "{} on {g} ({m} coordinates)", r.command),
        (Some(g), None) => writeln!(out, "{} on {g}", r.command),
        _ => writeln!(out, "{}", r.command),
    }
    .expect("write to string");
    if let Some(seed) = r.seed {
        writeln!(out, "seed: {seed} (sampled instance)").unwrap();
    }
    if let Some(ws) = &r.weights {
        let parts: Vec<String> = ws.iter().map(|b| int_list(b)).collect();
        writeln!(out, "factors: {}", parts.join(" ; ")).unwrap();
    }
    if let Some(t) = &r.target {
        writeln!(out, "target: {}", int_list(t)).unwrap();
    }
    if let Some(f) = &r.face {
        let i: Vec<String> = f.i.iter().map(|x| x.to_string()).collect();
        writeln!(
            out,
            "face: I={{{}}}, words [{}], w={} (codimension {})",
            i.join(","),
            f.words.join("; "),
            f.w,
            f.codimension
        )
        .unwrap();
    }
    if let Some(v) = &r.verdicts {
        let parts: Vec<String> = v.iter().map(|(k, b)| format!("{k}={b}")).collect();
        writeln!(out, "verdicts: {}", parts.join(", ")).unwrap();
    }
    if let Some(n) = &r.intersection {
        writeln!(out, "intersection number: {n}").unwrap();
    }
    if let Some(m) = &r.multiplicity {
        writeln!(out, "multiplicity: {m}").unwrap();
    }
    if let (Some(big), Some(small)) = (&r.mult_big, &r.mult_small) {
        writeln!(out, "multiplicity, original problem: {big}").unwrap();
        writeln!(out, "multiplicity, reduced problem:  {small}").unwrap();
    }
    if let Some(red) = &r.reduced {
        let nodes: Vec<String> = red.node_map.iter().map(|x| x.to_string()).collect();
        writeln!(out, "reduced to {} on nodes [{}]", red.group, nodes.join(",")).unwrap();
        writeln!(out, "  {}", red.display).unwrap();
    }
    if let Some(terms) = &r.product {
        writeln!(out, "product:").unwrap();
        for t in terms {
            writeln!(out, "  {} * [{}]", t.coefficient, t.word).unwrap();
        }
    }
    if let Some(rules) = &r.rules {
        writeln!(out, "rules:").unwrap();
        for rule in rules {
            let i: Vec<String> = rule.i.iter().map(|x| x.to_string()).collect();
            writeln!(
                out,
                "  I={{{}}} words [{}] w={} codim={} pass={}",
                i.join(","),
                rule.words.join("; "),
                rule.w,
                rule.codimension,
                rule.all_pass
            )
            .unwrap();
        }
    }
    if let Some(fixtures) = &r.fixtures {
        for fx in fixtures {
            let status = if fx.ok { "ok" } else { "FAIL" };
            let reduction = match (&fx.reduced_multiplicity, fx.reduction_ok) {
                (Some(m), Some(true)) => format!(", reduction agrees at {m}"),
                (Some(m), Some(false)) => format!(", reduction DISAGREES at {m}"),
                _ => String::new(),
            };
            writeln!(
                out,
                "  {} ({}, {}): expected {}, computed {}{} [{}]",
                fx.name, fx.group, fx.mode, fx.expected, fx.computed, reduction, status
            )
            .unwrap();
        }
    }
    if let Some(s) = &r.summary {
        writeln!(out, "{s}").unwrap();
    }
    writeln!(out, "elapsed: {} ms", r.elapsed_ms).unwrap();
    out
}
