//! The recorded example corpus: fixture schema, loading, and replay. Each
//! fixture states a multiplicity problem and its known value; most also
//! carry a face datum with the expected restricted weights, which the
//! replay re-derives and compares block by block.

use std::collections::BTreeSet;

use lrface::reduce::{self, FaceDatum};
use lrface::rootsys::RootSystem;
use num::bigint::BigUint;
use serde::Deserialize;

use crate::report::FixtureDoc;
use crate::{gl_to_sl, problem_from_blocks, CliError, Mode};

const CORPUS: &str = include_str!("../fixtures/corpus.toml");

#[derive(Deserialize)]
struct CorpusFile {
    fixture: Vec<Fixture>,
}

#[derive(Deserialize)]
struct Fixture {
    name: String,
    group: String,
    mode: String,
    factors: Vec<Vec<i64>>,
    target: Vec<i64>,
    expected: u64,
    face: Option<FaceFixture>,
}

#[derive(Deserialize)]
struct FaceFixture {
    i: Vec<usize>,
    words: Vec<String>,
    w: String,
    /// Expected restriction of each factor, one coordinate block per
    /// irreducible piece of the subsystem, in the fixture's own mode.
    reduced_factors: Vec<Vec<Vec<i64>>>,
    reduced_target: Vec<Vec<i64>>,
}

fn parse_mode(s: &str) -> Result<Mode, CliError> {
    match s {
        "sl" => Ok(Mode::Sl),
        "gl" => Ok(Mode::Gl),
        other => Err(CliError::Input(format!("fixture mode `{other}` is not sl or gl"))),
    }
}

/// Concatenates coordinate blocks, converting each from partition form
/// first when the fixture speaks gl.
fn flatten_blocks(mode: Mode, blocks: &[Vec<i64>]) -> Result<Vec<i64>, CliError> {
    let mut out = Vec::new();
    for b in blocks {
        match mode {
            Mode::Sl => out.extend_from_slice(b),
            Mode::Gl => out.extend(gl_to_sl(b)?),
        }
    }
    Ok(out)
}

fn run_fixture(fx: &Fixture, cap: usize) -> Result<FixtureDoc, CliError> {
    let sys = RootSystem::from_type_str(&fx.group)?;
    let mode = parse_mode(&fx.mode)?;
    let prob = problem_from_blocks(&sys, mode, &fx.factors, &fx.target)?;
    let expected = BigUint::from(fx.expected);
    let computed = prob.multiplicity(&sys)?;
    let mut ok = computed == expected;
    let mut reduced_multiplicity = None;
    let mut reduction_ok = None;
    if let Some(face) = &fx.face {
        let i_set: BTreeSet<usize> = face.i.iter().copied().collect();
        let ws = face
            .words
            .iter()
            .map(|s| sys.parse_word(s))
            .collect::<Result<Vec<_>, _>>()?;
        let fd = FaceDatum::new(&sys, i_set, ws, sys.parse_word(&face.w)?)?;
        let report = reduce::check_face_conditions_with_cap(&sys, &fd, cap)?;
        let member = reduce::on_face(&sys, &fd, &prob)?;
        let reduced = reduce::restrict_problem(&sys, &fd, &prob)?;
        let expect_factors: Vec<Vec<i64>> = face
            .reduced_factors
            .iter()
            .map(|blocks| flatten_blocks(mode, blocks))
            .collect::<Result<_, _>>()?;
        let expect_target = flatten_blocks(mode, &face.reduced_target)?;
        let coords_match = reduced.factor_coords() == expect_factors.as_slice()
            && reduced.target_coords() == expect_target.as_slice();
        let small = reduced.multiplicity()?;
        let agrees =
            report.all_pass() && member && coords_match && small == expected;
        reduced_multiplicity = Some(small.to_string());
        reduction_ok = Some(agrees);
        ok = ok && agrees;
    }
    Ok(FixtureDoc {
        name: fx.name.clone(),
        group: fx.group.clone(),
        mode: fx.mode.clone(),
        expected: expected.to_string(),
        computed: computed.to_string(),
        reduced_multiplicity,
        reduction_ok,
        ok,
    })
}

/// Runs every fixture whose name or group contains the filter substring
/// (case-insensitive); no filter runs them all. Fixtures run in file
/// order, and a fixture that fails internally is reported, not fatal.
pub fn replay(filter: Option<&str>, cap: usize) -> Result<Vec<FixtureDoc>, CliError> {
    let file: CorpusFile = toml::from_str(CORPUS)
        .map_err(|e| CliError::Input(format!("bundled fixtures are unreadable: {e}")))?;
    let needle = filter.map(str::to_lowercase);
    let mut docs = Vec::new();
    for fx in &file.fixture {
        if let Some(n) = &needle {
            let hit = fx.name.to_lowercase().contains(n) || fx.group.to_lowercase().contains(n);
            if !hit {
                continue;
            }
        }
        match run_fixture(fx, cap) {
            Ok(doc) => docs.push(doc),
            Err(CliError::Input(msg)) => docs.push(FixtureDoc {
                name: fx.name.clone(),
                group: fx.group.clone(),
                mode: fx.mode.clone(),
                expected: fx.expected.to_string(),
                computed: format!("error: {msg}"),
                reduced_multiplicity: None,
                reduction_ok: None,
                ok: false,
            }),
            Err(cap_err) => return Err(cap_err),
        }
    }
    Ok(docs)
}
