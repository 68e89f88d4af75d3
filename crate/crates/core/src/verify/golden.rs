//! Frozen series files compared byte-for-byte against fresh computations.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;

use crate::algebra::Field;
use crate::check::Witness;
use crate::dd::DSeries;
use crate::error::{Error, Result};
use crate::forms::{FormContext, FormId};
use crate::io::{dseries_to_json, series_from_json, series_to_json};

use super::report::{Case, Params, Record, VerificationReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GoldenKind {
    /// The first `count` v-coefficients of 𝐝.
    D { count: usize },
    Form { id: FormId, precision: i64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Golden {
    pub name: &'static str,
    pub q: u32,
    pub kind: GoldenKind,
}

const fn d(name: &'static str, q: u32, count: usize) -> Golden {
    Golden { name, q, kind: GoldenKind::D { count } }
}

const fn form(name: &'static str, q: u32, id: FormId, precision: i64) -> Golden {
    Golden { name, q, kind: GoldenKind::Form { id, precision } }
}

pub const GOLDENS: &[Golden] = &[
    d("d_q2", 2, 16),
    d("d_q3", 3, 24),
    d("d_q5", 5, 40),
    form("E_q2", 2, FormId::E, 40),
    form("g_q2", 2, FormId::G, 40),
    form("h_q2", 2, FormId::H, 40),
    form("E_q3", 3, FormId::E, 40),
    form("g_q3", 3, FormId::G, 40),
    form("h_q3", 3, FormId::H, 40),
    form("E_q4", 4, FormId::E, 30),
    form("F1_q2", 2, FormId::F(1), 60),
    form("F2_q2", 2, FormId::F(2), 60),
    form("F3_q2", 2, FormId::F(3), 60),
    form("F1_q3", 3, FormId::F(1), 60),
    form("F2_q3", 3, FormId::F(2), 60),
    form("F3_q3", 3, FormId::F(3), 60),
];

/// The golden directory shipped with the crate.
pub fn default_golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("goldens")
}

impl Golden {
    pub fn path(&self, dir: &Path) -> PathBuf {
        dir.join(format!("{}.json", self.name))
    }

    /// The canonical JSON text of the freshly computed series.
    pub fn render(&self) -> Result<String> {
        let field = Field::with_order(self.q)?;
        Ok(match self.kind {
            GoldenKind::D { count } => dseries_to_json(&DSeries::new(&field, count)),
            GoldenKind::Form { id, precision } => series_to_json(&id.compute(&FormContext::new(&field), precision)?),
        })
    }
}

/// Writes every golden file into `dir`.
pub fn write_goldens(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::Io(e.to_string()))?;
    for g in GOLDENS {
        let text = g.render()?;
        fs::write(g.path(dir), text + "\n").map_err(|e| Error::Io(e.to_string()))?;
    }
    Ok(())
}

fn compare(g: &Golden, stored: &str) -> Witness {
    let fresh = match g.render() {
        Ok(t) => t,
        Err(e) => return Witness::fail(0, None, e.to_string()),
    };
    let stored = stored.trim_end();
    if fresh == stored {
        return Witness::pass(0);
    }
    // locate the first differing exponent when both sides parse
    let field = Field::with_order(g.q).expect("golden fields are valid");
    match (series_from_json(&field, stored), series_from_json(&field, &fresh)) {
        (Ok(a), Ok(b)) => {
            let n = a.first_difference(&b);
            Witness::fail(a.precision().min(b.precision()), n, "fresh series differs from the golden file")
        }
        _ => Witness::fail(0, None, "golden file text differs from the fresh rendering"),
    }
}

/// Compares every golden in `dir` with a fresh computation. Missing files are an error.
pub fn golden_check(dir: &Path) -> Result<VerificationReport> {
    let missing: Vec<String> =
        GOLDENS.iter().map(|g| g.path(dir)).filter(|p| !p.is_file()).map(|p| p.display().to_string()).collect();
    if !missing.is_empty() {
        return Err(Error::MissingGolden(missing.join(", ")));
    }
    let records = GOLDENS
        .par_iter()
        .map(|g| {
            let start = Instant::now();
            let stored = fs::read_to_string(g.path(dir)).map_err(|e| Error::Io(e.to_string()))?;
            let mut case = Case::checked(Params::q(g.q).variant(g.name), compare(g, &stored));
            case.wall_ms = start.elapsed().as_secs_f64() * 1e3;
            let id = format!("golden.{}", g.name);
            Ok(Record::new(&id, "frozen u-expansion matches a fresh computation byte for byte", vec![case]))
        })
        .collect::<Result<Vec<Record>>>()?;
    Ok(VerificationReport { suite: "golden".into(), records })
}
