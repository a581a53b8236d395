//! Command-line front end for the face-reduction toolkit: tensor
//! multiplicities, face-condition checks, reductions to smaller groups,
//! rule-family generation, Schubert products, and a replay of the recorded
//! example corpus. Every invocation produces one structured report; `--json`
//! prints it verbatim, otherwise a human rendering of the same document.

mod corpus;
mod report;

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lrface::reduce::{self, FaceDatum, MultiplicityProblem, ReduceError};
use lrface::reps::RepsError;
use lrface::rootsys::{
    Family, RootSysError, RootSystem, Weight, WeylElement, DEFAULT_WEYL_CAP,
};
use lrface::schubert::{SchubertError, SchubertRing};

use report::{FaceDoc, Report, RuleDoc, TermDoc};

const EXIT_OK: u8 = 0;
const EXIT_MISMATCH: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_CAP: u8 = 3;

#[derive(Parser)]
#[command(
    name = "lrface",
    version,
    about = "Exact multiplicity computations and face reductions for tensor product problems",
    long_about = "Exact multiplicity computations and face reductions for tensor product \
                  problems on the classical groups.\n\nEvery run emits one structured \
                  report; reports are byte-stable for identical inputs and seed except \
                  for the elapsed_ms field. Exit codes: 0 success, 1 verification \
                  mismatch, 2 input error, 3 resource cap exceeded."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Print the JSON report instead of the human rendering.
    #[arg(long, global = true)]
    json: bool,
    /// Cap on the size of any Weyl group enumeration.
    #[arg(long, global = true, value_name = "N", default_value_t = DEFAULT_WEYL_CAP)]
    max_weyl_size: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the multiplicity of the target in a tensor product.
    Mult(ProblemArgs),
    /// Check the conditions that make a datum a face of the cone.
    CheckFace(FaceArgs),
    /// Restrict a problem along a face and verify the multiplicity equality.
    Reduce(ReduceArgs),
    /// Emit the face datum for every index subset from one inversion-set partition.
    GenRules(WordsArgs),
    /// Expand a product of Schubert classes, optionally reading off one coefficient.
    Schubert(SchubertArgs),
    /// Re-run the bundled examples and compare against their recorded values.
    ReplayCorpus(ReplayArgs),
}

/// Weight coordinate convention: `sl` takes fundamental-weight coordinates
/// (rank entries per weight); `gl` takes weakly decreasing partition entries
/// (rank+1 per weight, irreducible type A only), converted by successive
/// differences.
#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Mode {
    Sl,
    Gl,
}

impl Mode {
    fn as_str(self) -> &'static str {
        match self {
            Mode::Sl => "sl",
            Mode::Gl => "gl",
        }
    }
}

#[derive(Args)]
struct ProblemArgs {
    /// Root system type, e.g. A5, D5, C5, or A2xA2.
    #[arg(long = "type", value_name = "TYPE")]
    group: String,
    #[arg(long, value_enum, default_value_t = Mode::Sl)]
    mode: Mode,
    /// Factor weights, semicolon-separated: "4,2,10,6,10; 10,4,12,4,2".
    #[arg(long, value_name = "LIST[;LIST..]")]
    weights: String,
    /// Target weight, e.g. "10,22,1,1,25".
    #[arg(long, value_name = "LIST")]
    target: String,
}

#[derive(Args)]
struct FaceArgs {
    /// Root system type, e.g. A5, D5, C5, or A2xA2.
    #[arg(long = "type", value_name = "TYPE")]
    group: String,
    /// Nodes of the index set I, e.g. "1,2,4,5"; empty for the torus face.
    #[arg(long = "I", value_name = "NODES", default_value = "")]
    i_nodes: String,
    /// Weyl words for the factors, semicolon-separated, e.g. "s3; s3".
    #[arg(long, value_name = "WORD[;WORD..]")]
    words: String,
    /// Weyl word for the target side, e.g. "s4s3".
    #[arg(long, value_name = "WORD")]
    w: String,
    #[arg(long, value_enum, default_value_t = Mode::Sl)]
    mode: Mode,
    /// Optional factor weights; with --target, membership on the face is checked too.
    #[arg(long, value_name = "LIST[;LIST..]")]
    weights: Option<String>,
    /// Target weight, required when --weights is given.
    #[arg(long, value_name = "LIST")]
    target: Option<String>,
}

#[derive(Args)]
struct ReduceArgs {
    #[command(flatten)]
    face: FaceArgs,
    /// Seed for sampling an on-face instance when no weights are given.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct WordsArgs {
    /// Root system type, e.g. A4.
    #[arg(long = "type", value_name = "TYPE")]
    group: String,
    /// Weyl words for the factors, semicolon-separated.
    #[arg(long, value_name = "WORD[;WORD..]")]
    words: String,
    /// Weyl word for the product side.
    #[arg(long, value_name = "WORD")]
    w: String,
}

#[derive(Args)]
struct SchubertArgs {
    /// Root system type, e.g. A4.
    #[arg(long = "type", value_name = "TYPE")]
    group: String,
    /// Weyl words naming the classes to multiply, semicolon-separated.
    #[arg(long, value_name = "WORD[;WORD..]")]
    words: String,
    /// Optional word whose coefficient in the product is reported.
    #[arg(long, value_name = "WORD")]
    w: Option<String>,
}

#[derive(Args)]
struct ReplayArgs {
    /// Case-insensitive substring matched against fixture names and groups.
    #[arg(long, value_name = "STR")]
    filter: Option<String>,
}

/// CLI-level failure: carries the exit code distinction between malformed
/// input and an exceeded resource cap.
#[derive(Debug)]
pub(crate) enum CliError {
    Input(String),
    Cap(String),
}

impl CliError {
    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Cap(m) => m,
        }
    }

    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Cap(_) => EXIT_CAP,
        }
    }
}

impl From<RootSysError> for CliError {
    fn from(e: RootSysError) -> Self {
        match e {
            RootSysError::WeylCapExceeded { .. } => CliError::Cap(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<SchubertError> for CliError {
    fn from(e: SchubertError) -> Self {
        match e {
            SchubertError::CapExceeded { .. } => CliError::Cap(e.to_string()),
            SchubertError::Root(inner) => inner.into(),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<RepsError> for CliError {
    fn from(e: RepsError) -> Self {
        match e {
            RepsError::OracleCapExceeded { .. } => CliError::Cap(e.to_string()),
            RepsError::Root(inner) => inner.into(),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<ReduceError> for CliError {
    fn from(e: ReduceError) -> Self {
        match e {
            ReduceError::Root(inner) => inner.into(),
            ReduceError::Reps(inner) => inner.into(),
            ReduceError::Schubert(inner) => inner.into(),
            _ => CliError::Input(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((rep, code)) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&rep).expect("report serializes"));
            } else {
                print!("{}", report::human(&rep));
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: &Cli) -> Result<(Report, u8), CliError> {
    match &cli.command {
        Command::Mult(a) => cmd_mult(a),
        Command::CheckFace(a) => cmd_check_face(a, cli.max_weyl_size),
        Command::Reduce(a) => cmd_reduce(a, cli.max_weyl_size),
        Command::GenRules(a) => cmd_gen_rules(a),
        Command::Schubert(a) => cmd_schubert(a, cli.max_weyl_size),
        Command::ReplayCorpus(a) => cmd_replay(a, cli.max_weyl_size),
    }
}

fn parse_int_list(s: &str) -> Result<Vec<i64>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<i64>()
                .map_err(|_| CliError::Input(format!("cannot parse integer `{t}`")))
        })
        .collect()
}

fn parse_blocks(s: &str) -> Result<Vec<Vec<i64>>, CliError> {
    let blocks: Vec<Vec<i64>> = s
        .split(';')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(parse_int_list)
        .collect::<Result<_, _>>()?;
    if blocks.is_empty() {
        return Err(CliError::Input("need at least one weight".into()));
    }
    Ok(blocks)
}

fn parse_nodes(s: &str) -> Result<BTreeSet<usize>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| CliError::Input(format!("cannot parse node index `{t}`")))
        })
        .collect()
}

fn parse_words(sys: &RootSystem, s: &str) -> Result<Vec<WeylElement>, CliError> {
    let words: Vec<WeylElement> = s
        .split(';')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| sys.parse_word(t).map_err(CliError::from))
        .collect::<Result<_, _>>()?;
    if words.is_empty() {
        return Err(CliError::Input("need at least one Weyl word".into()));
    }
    Ok(words)
}

/// Successive differences of a weakly decreasing integer vector; the
/// partition form of a type A weight on one more entry than the rank.
pub(crate) fn gl_to_sl(block: &[i64]) -> Result<Vec<i64>, CliError> {
    if block.len() < 2 {
        return Err(CliError::Input("a gl weight needs at least two entries".into()));
    }
    if block.windows(2).any(|p| p[0] < p[1]) {
        return Err(CliError::Input(format!(
            "gl weight entries must be weakly decreasing, got {block:?}"
        )));
    }
    Ok(block.windows(2).map(|p| p[0] - p[1]).collect())
}

/// Builds a problem from raw coordinate blocks under either convention.
pub(crate) fn problem_from_blocks(
    sys: &RootSystem,
    mode: Mode,
    factors: &[Vec<i64>],
    target: &[i64],
) -> Result<MultiplicityProblem, CliError> {
    if factors.is_empty() {
        return Err(CliError::Input("need at least one factor weight".into()));
    }
    if mode == Mode::Gl {
        if sys.factors().len() != 1 || sys.factors()[0].0 != Family::A {
            return Err(CliError::Input(
                "gl coordinates apply only to irreducible type A systems".into(),
            ));
        }
        let target_sum: i64 = target.iter().sum();
        let factor_sum: i64 = factors.iter().flat_map(|b| b.iter()).sum();
        if target_sum != factor_sum {
            return Err(CliError::Input(format!(
                "gl entry sums must balance: target entries sum to {target_sum}, \
                 factor entries to {factor_sum}"
            )));
        }
    }
    let convert = |block: &[i64]| -> Result<Weight, CliError> {
        let coords = match mode {
            Mode::Sl => block.to_vec(),
            Mode::Gl => {
                if block.len() != sys.rank() + 1 {
                    return Err(CliError::Input(format!(
                        "gl weight has {} entries, expected rank+1 = {}",
                        block.len(),
                        sys.rank() + 1
                    )));
                }
                gl_to_sl(block)?
            }
        };
        Ok(sys.weight(&coords)?)
    };
    let fw: Vec<Weight> = factors.iter().map(|b| convert(b)).collect::<Result<_, _>>()?;
    let tw = convert(target)?;
    Ok(MultiplicityProblem::new(sys, fw, tw)?)
}

fn face_doc(sys: &RootSystem, fd: &FaceDatum) -> FaceDoc {
    FaceDoc {
        i: fd.i_set().iter().copied().collect(),
        words: fd.ws().iter().map(|w| w.to_string()).collect(),
        w: fd.w().to_string(),
        codimension: sys.rank() - fd.i_set().len(),
    }
}

fn cmd_mult(a: &ProblemArgs) -> Result<(Report, u8), CliError> {
    let t0 = Instant::now();
    let sys = RootSystem::from_type_str(&a.group)?;
    let factors = parse_blocks(&a.weights)?;
    let target = parse_int_list(&a.target)?;
    let prob = problem_from_blocks(&sys, a.mode, &factors, &target)?;
    let mult = prob.multiplicity(&sys)?;
    let mut rep = Report::new("mult", Some(sys.to_string()), Some(a.mode.as_str()));
    rep.weights = Some(factors);
    rep.target = Some(target);
    rep.multiplicity = Some(mult.to_string());
    rep.elapsed_ms = t0.elapsed().as_millis() as u64;
    Ok((rep, EXIT_OK))
}

fn cmd_check_face(a: &FaceArgs, cap: usize) -> Result<(Report, u8), CliError> {
    let t0 = Instant::now();
    let sys = RootSystem::from_type_str(&a.group)?;
    let fd = FaceDatum::new(
        &sys,
        parse_nodes(&a.i_nodes)?,
        parse_words(&sys, &a.words)?,
        sys.parse_word(&a.w)?,
    )?;
    let face = reduce::check_face_conditions_with_cap(&sys, &fd, cap)?;
    let mut verdicts = BTreeMap::new();
    verdicts.insert("cond_i".into(), face.cond_i);
    verdicts.insert("cond_ii_length".into(), face.cond_ii_length);
    verdicts.insert("cond_ii_intersection".into(), face.cond_ii_intersection);
    verdicts.insert("cond_iii".into(), face.cond_iii);
    verdicts.insert("disjoint_certificate".into(), face.disjoint_certificate);
    verdicts.insert("all_pass".into(), face.all_pass());
    let mut pass = face.all_pass();

    let mut rep = Report::new("check-face", Some(sys.to_string()), Some(a.mode.as_str()));
    if let Some(wstr) = &a.weights {
        let tstr = a
            .target
            .as_ref()
            .ok_or_else(|| CliError::Input("--weights requires --target".into()))?;
        let factors = parse_blocks(wstr)?;
        let target = parse_int_list(tstr)?;
        let prob = problem_from_blocks(&sys, a.mode, &factors, &target)?;
        let member = match reduce::on_face(&sys, &fd, &prob) {
            Ok(m) => m,
            Err(ReduceError::FactorCountMismatch { datum, problem }) => {
                return Err(CliError::Input(format!(
                    "the face has {datum} Weyl elements but {problem} weights were given"
                )))
            }
            Err(e) => return Err(e.into()),
        };
        verdicts.insert("on_face".into(), member);
        pass = pass && member;
        rep.weights = Some(factors);
        rep.target = Some(target);
    }
    rep.face = Some(face_doc(&sys, &fd));
    rep.verdicts = Some(verdicts);
    rep.intersection = Some(face.intersection.to_string());
    rep.elapsed_ms = t0.elapsed().as_millis() as u64;
    Ok((rep, if pass { EXIT_OK } else { EXIT_MISMATCH }))
}

fn cmd_reduce(a: &ReduceArgs, cap: usize) -> Result<(Report, u8), CliError> {
    let t0 = Instant::now();
    let fa = &a.face;
    let sys = RootSystem::from_type_str(&fa.group)?;
    let fd = FaceDatum::new(
        &sys,
        parse_nodes(&fa.i_nodes)?,
        parse_words(&sys, &fa.words)?,
        sys.parse_word(&fa.w)?,
    )?;
    let mut rep = Report::new("reduce", Some(sys.to_string()), Some(fa.mode.as_str()));
    rep.face = Some(face_doc(&sys, &fd));

    let prob = match &fa.weights {
        Some(wstr) => {
            let tstr = fa
                .target
                .as_ref()
                .ok_or_else(|| CliError::Input("--weights requires --target".into()))?;
            problem_from_blocks(&sys, fa.mode, &parse_blocks(wstr)?, &parse_int_list(tstr)?)?
        }
        None => {
            rep.seed = Some(a.seed);
            reduce::sample_on_face_problem(&sys, &fd, a.seed, false)?
        }
    };
    rep.weights = Some(prob.factors().iter().map(|m| m.coords().to_vec()).collect());
    rep.target = Some(prob.target().coords().to_vec());

    let face = reduce::check_face_conditions_with_cap(&sys, &fd, cap)?;
    let mut verdicts = BTreeMap::new();
    verdicts.insert("cond_i".into(), face.cond_i);
    verdicts.insert("cond_ii_length".into(), face.cond_ii_length);
    verdicts.insert("cond_ii_intersection".into(), face.cond_ii_intersection);
    verdicts.insert("cond_iii".into(), face.cond_iii);
    verdicts.insert("disjoint_certificate".into(), face.disjoint_certificate);
    verdicts.insert("reduction_ready".into(), face.reduction_ready());
    rep.intersection = Some(face.intersection.to_string());
    if !face.reduction_ready() {
        rep.verdicts = Some(verdicts);
        rep.elapsed_ms = t0.elapsed().as_millis() as u64;
        return Ok((rep, EXIT_MISMATCH));
    }

    let member = reduce::on_face(&sys, &fd, &prob)?;
    verdicts.insert("on_face".into(), member);
    if !member {
        rep.verdicts = Some(verdicts);
        rep.elapsed_ms = t0.elapsed().as_millis() as u64;
        return Ok((rep, EXIT_MISMATCH));
    }

    let reduced = reduce::restrict_problem(&sys, &fd, &prob)?;
    let mult_big = prob.multiplicity(&sys)?;
    let mult_small = reduced.multiplicity()?;
    let equal = mult_big == mult_small;
    verdicts.insert("equal".into(), equal);
    rep.verdicts = Some(verdicts);
    rep.mult_big = Some(mult_big.to_string());
    rep.mult_small = Some(mult_small.to_string());
    rep.reduced = Some(report::reduced_doc(&reduced));
    rep.elapsed_ms = t0.elapsed().as_millis() as u64;
    Ok((rep, if equal { EXIT_OK } else { EXIT_MISMATCH }))
}

fn cmd_gen_rules(a: &WordsArgs) -> Result<(Report, u8), CliError> {
    let t0 = Instant::now();
    let sys = RootSystem::from_type_str(&a.group)?;
    let ws = parse_words(&sys, &a.words)?;
    let w = sys.parse_word(&a.w)?;
    let rules = reduce::generate_rules(&sys, &ws, &w)?;
    let mut docs = Vec::with_capacity(rules.len());
    for fd in &rules {
        let face = reduce::check_face_conditions(&sys, fd)?;
        docs.push(RuleDoc {
            i: fd.i_set().iter().copied().collect(),
            words: fd.ws().iter().map(|x| x.to_string()).collect(),
            w: fd.w().to_string(),
            codimension: sys.rank() - fd.i_set().len(),
            all_pass: face.all_pass(),
        });
    }
    let mut rep = Report::new("gen-rules", Some(sys.to_string()), None);
    rep.summary = Some(format!("{} rules generated", docs.len()));
    rep.rules = Some(docs);
    rep.elapsed_ms = t0.elapsed().as_millis() as u64;
    Ok((rep, EXIT_OK))
}

fn cmd_schubert(a: &SchubertArgs, cap: usize) -> Result<(Report, u8), CliError> {
    let t0 = Instant::now();
    let sys = RootSystem::from_type_str(&a.group)?;
    let factors = parse_words(&sys, &a.words)?;
    let mut ring = SchubertRing::new(&sys, cap)?;
    let expr = ring.product(&factors)?;
    let mut rep = Report::new("schubert", Some(sys.to_string()), None);
    rep.product = Some(
        expr.terms()
            .iter()
            .map(|(w, c)| TermDoc { word: w.to_string(), coefficient: c.to_string() })
            .collect(),
    );
    if let Some(wstr) = &a.w {
        let w = sys.parse_word(wstr)?;
        let out = ring.intersection_number(&factors, &w)?;
        rep.intersection = Some(out.value.to_string());
        let mut verdicts = BTreeMap::new();
        verdicts.insert("degree_match".into(), !out.degree_mismatch);
        rep.verdicts = Some(verdicts);
    }
    rep.elapsed_ms = t0.elapsed().as_millis() as u64;
    Ok((rep, EXIT_OK))
}

fn cmd_replay(a: &ReplayArgs, cap: usize) -> Result<(Report, u8), CliError> {
    let t0 = Instant::now();
    let docs = corpus::replay(a.filter.as_deref(), cap)?;
    let mut rep = Report::new("replay-corpus", None, None);
    let code = if docs.is_empty() {
        rep.summary = Some("no fixtures selected".into());
        EXIT_INPUT
    } else {
        let good = docs.iter().filter(|d| d.ok).count();
        rep.summary = Some(format!("{good}/{} fixtures verified", docs.len()));
        if good == docs.len() {
            EXIT_OK
        } else {
            EXIT_MISMATCH
        }
    };
    rep.fixtures = Some(docs);
    rep.elapsed_ms = t0.elapsed().as_millis() as u64;
    Ok((rep, code))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl_conversion_examples() {
        assert_eq!(gl_to_sl(&[32, 28, 26, 16, 10, 0]).unwrap(), vec![4, 2, 10, 6, 10]);
        assert_eq!(gl_to_sl(&[5, 5, 5]).unwrap(), vec![0, 0]);
        assert_eq!(
            gl_to_sl(&[21, 16, 13, 12, 9, 5, 0]).unwrap(),
            vec![5, 3, 1, 3, 4, 5]
        );
        assert!(gl_to_sl(&[1, 2]).is_err());
    }

    #[test]
    fn gl_problems_validate_entry_sums() {
        let a5 = RootSystem::from_type_str("A5").unwrap();
        let factors = vec![vec![32, 28, 26, 16, 10, 0], vec![32, 22, 18, 6, 2, 0]];
        let good = problem_from_blocks(&a5, Mode::Gl, &factors, &[60, 51, 28, 26, 25, 2]);
        assert!(good.is_ok());
        let bad = problem_from_blocks(&a5, Mode::Gl, &factors, &[60, 51, 28, 26, 25, 3]);
        assert!(matches!(bad, Err(CliError::Input(_))));
    }

    #[test]
    fn node_and_block_parsing() {
        assert_eq!(parse_nodes("1, 2,4").unwrap(), [1, 2, 4].into_iter().collect());
        assert!(parse_nodes("").unwrap().is_empty());
        assert_eq!(
            parse_blocks("1,2; 3,4").unwrap(),
            vec![vec![1, 2], vec![3, 4]]
        );
        assert!(parse_int_list("1,x").is_err());
    }
}
