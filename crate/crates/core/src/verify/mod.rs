//! Property batteries over a constructed or loaded geometry, with
//! machine-readable reports.
//!
//! Each check yields one or more [`CheckResult`]s. A failing result always
//! carries a `witness` in its detail that can be re-checked by hand: a flag,
//! an element pair, or a tuple. Checks run in parallel; the report lists
//! results ordered by name, never by completion time.

mod diagram;
mod sd;
mod structural;

use std::str::FromStr;
use std::sync::OnceLock;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::actions::SymKind;
use crate::config;
use crate::error::{Error, Result};
use crate::geometry::{Pregeometry, RecursiveCondition};

pub use diagram::{predict_pa, PaExpectation, PaPrediction, PairPrediction};
pub use sd::{difficult_orbits_scan, DifficultOrbitsScan};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    /// Measurements; on failure a `witness` key, on skip a `reason` key.
    pub detail: Value,
    pub time_ms: f64,
}

impl CheckResult {
    fn new(name: &str, status: Status, detail: Value) -> Self {
        CheckResult {
            name: name.into(),
            status,
            detail,
            time_ms: 0.0,
        }
    }

    pub(crate) fn pass(name: &str, detail: Value) -> Self {
        Self::new(name, Status::Pass, detail)
    }

    /// `witness` is stored under the `witness` key next to the other fields of `detail`.
    pub(crate) fn fail(name: &str, mut detail: Value, witness: Value) -> Self {
        if !detail.is_object() {
            detail = json!({ "value": detail });
        }
        detail["witness"] = witness;
        Self::new(name, Status::Fail, detail)
    }

    pub(crate) fn skipped(name: &str, reason: impl Into<String>) -> Self {
        Self::new(name, Status::Skipped, json!({ "reason": reason.into() }))
    }

    pub(crate) fn verdict(name: &str, ok: bool, detail: Value, witness: impl FnOnce() -> Value) -> Self {
        if ok {
            Self::pass(name, detail)
        } else {
            Self::fail(name, detail, witness())
        }
    }
}

/// Resource exhaustion turns into a skipped result; other errors propagate.
pub(crate) fn skip_on_resource(name: &str, r: Result<CheckResult>) -> Result<CheckResult> {
    match r {
        Err(e) if e.is_resource() => Ok(CheckResult::skipped(name, e.to_string())),
        other => other,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    /// Family parameters or file reference.
    pub instance: Value,
    pub instance_hash: Option<String>,
    pub checks: Vec<CheckResult>,
}

#[derive(Serialize, Deserialize)]
struct Line {
    instance_hash: Option<String>,
    check: String,
    status: Status,
    detail: Value,
    time_ms: f64,
}

impl VerificationReport {
    /// One JSON object per check, each carrying the instance hash.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let line = Line {
                instance_hash: self.instance_hash.clone(),
                check: c.name.clone(),
                status: c.status,
                detail: c.detail.clone(),
                time_ms: c.time_ms,
            };
            out.push_str(&serde_json::to_string(&line).expect("report lines serialize"));
            out.push('\n');
        }
        out
    }

    pub fn from_json_lines(text: &str, instance: Value) -> Result<Self> {
        let mut hash = None;
        let mut checks = Vec::new();
        for l in text.lines().filter(|l| !l.trim().is_empty()) {
            let line: Line = serde_json::from_str(l)?;
            hash = line.instance_hash;
            checks.push(CheckResult {
                name: line.check,
                status: line.status,
                detail: line.detail,
                time_ms: line.time_ms,
            });
        }
        Ok(VerificationReport {
            instance,
            instance_hash: hash,
            checks,
        })
    }

    /// The same report with every wall time zeroed.
    pub fn without_timing(&self) -> Self {
        let mut r = self.clone();
        for c in &mut r.checks {
            c.time_ms = 0.0;
        }
        r
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Failures, counting skipped results when `strict`.
    pub fn failures(&self, strict: bool) -> Vec<&CheckResult> {
        self.checks
            .iter()
            .filter(|c| c.status == Status::Fail || (strict && c.status == Status::Skipped))
            .collect()
    }

    pub fn passed(&self, strict: bool) -> bool {
        self.failures(strict).is_empty()
    }

    /// One human-readable line per check.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skipped => "SKIP",
            };
            let note = match c.status {
                Status::Fail => format!("  witness: {}", c.detail["witness"]),
                Status::Skipped => format!("  ({})", c.detail["reason"].as_str().unwrap_or("")),
                Status::Pass => String::new(),
            };
            out.push_str(&format!("{tag} {:<40} {:>10.1} ms{note}\n", c.name, c.time_ms));
        }
        out
    }
}

/// Groups of checks selectable by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    CClass,
    Geometry,
    FlagTransitive,
    Thick,
    Connected,
    Diagram,
    HaBound,
    SdBattery,
    Structure,
}

impl CheckKind {
    pub const ALL: [CheckKind; 9] = [
        CheckKind::CClass,
        CheckKind::Geometry,
        CheckKind::FlagTransitive,
        CheckKind::Thick,
        CheckKind::Connected,
        CheckKind::Diagram,
        CheckKind::HaBound,
        CheckKind::SdBattery,
        CheckKind::Structure,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::CClass => "c-class",
            CheckKind::Geometry => "geometry",
            CheckKind::FlagTransitive => "flag-transitive",
            CheckKind::Thick => "thick",
            CheckKind::Connected => "connected",
            CheckKind::Diagram => "diagram",
            CheckKind::HaBound => "ha-bound",
            CheckKind::SdBattery => "sd-battery",
            CheckKind::Structure => "structure",
        }
    }

    fn needs_group(self) -> bool {
        !matches!(self, CheckKind::Geometry | CheckKind::Thick | CheckKind::SdBattery)
    }

    fn needs_geometry(self) -> bool {
        self != CheckKind::SdBattery
    }
}

impl FromStr for CheckKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CheckKind::ALL
            .into_iter()
            .find(|k| k.name() == s.trim())
            .ok_or_else(|| {
                let names: Vec<&str> = CheckKind::ALL.iter().map(|k| k.name()).collect();
                Error::Parse(format!("unknown check {s:?}; expected one of {}", names.join(", ")))
            })
    }
}

/// Flag-transitivity strategies to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Strategies {
    pub direct: bool,
    pub recursive: bool,
}

impl Default for Strategies {
    fn default() -> Self {
        Strategies {
            direct: true,
            recursive: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SdOptions {
    pub kind: SymKind,
    pub m: usize,
    /// Tuple lengths for the sampled coset checks.
    pub ns: Vec<usize>,
    /// Samples per `(n, s, a)` and per `n` for uniqueness.
    pub samples: usize,
    pub seed: u64,
    /// Largest tuple length of the exhaustive scan, over an alphabet of size 3.
    pub exhaustive_max_n: usize,
}

impl Default for SdOptions {
    fn default() -> Self {
        SdOptions {
            kind: SymKind::Alt,
            m: 5,
            ns: vec![9, 13],
            samples: 10_000,
            seed: 0x5eed,
            exhaustive_max_n: 10,
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub checks: Vec<CheckKind>,
    /// Partial-flag budget for exhaustive enumeration and BFS edge budget.
    pub budget: u64,
    pub strategies: Strategies,
    pub sd: SdOptions,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            checks: CheckKind::ALL.to_vec(),
            budget: config::flag_budget(),
            strategies: Strategies::default(),
            sd: SdOptions::default(),
        }
    }
}

impl VerifyOptions {
    pub fn with_checks(checks: &[CheckKind]) -> Self {
        VerifyOptions {
            checks: checks.to_vec(),
            ..Self::default()
        }
    }
}

/// Outcome of the geometry axiom, shared by checks that presuppose it.
#[derive(Clone, Debug)]
pub(crate) enum GeometryOutcome {
    Holds(Value),
    Fails(Value),
    Unknown(String),
}

/// A geometry under verification, with lazily computed shared facts.
pub struct Verifier<'a> {
    g: Option<&'a Pregeometry>,
    opts: VerifyOptions,
    recursive: OnceLock<Option<Vec<RecursiveCondition>>>,
    geometry: OnceLock<std::result::Result<GeometryOutcome, String>>,
}

impl<'a> Verifier<'a> {
    pub fn new(g: Option<&'a Pregeometry>, opts: VerifyOptions) -> Self {
        Verifier {
            g,
            opts,
            recursive: OnceLock::new(),
            geometry: OnceLock::new(),
        }
    }

    pub fn options(&self) -> &VerifyOptions {
        &self.opts
    }

    /// Refuses selections that need a group the geometry lacks.
    pub fn check_preconditions(&self) -> Result<()> {
        for &k in &self.opts.checks {
            match self.g {
                None if k.needs_geometry() => {
                    return Err(Error::Hypothesis(format!("check {} needs a geometry", k.name())));
                }
                Some(g) if k.needs_group() && g.attached().is_none() => {
                    return Err(Error::Hypothesis(format!(
                        "check {} needs a geometry with an attached group and base chamber",
                        k.name()
                    )));
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Runs the selected checks and assembles the report.
    pub fn run(&self, instance: Value) -> Result<VerificationReport> {
        self.check_preconditions()?;
        let mut kinds = self.opts.checks.clone();
        kinds.sort();
        kinds.dedup();
        let results: Vec<Result<Vec<CheckResult>>> = kinds.par_iter().map(|&k| self.run_kind(k)).collect();
        let mut checks = Vec::new();
        for r in results {
            checks.extend(r?);
        }
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        Ok(VerificationReport {
            instance,
            instance_hash: self.g.map(|g| g.instance_hash()),
            checks,
        })
    }

    pub fn run_kind(&self, kind: CheckKind) -> Result<Vec<CheckResult>> {
        match kind {
            CheckKind::CClass => self.c_class(),
            CheckKind::Geometry => Ok(vec![self.timed(|| self.geometry_check())?]),
            CheckKind::FlagTransitive => self.flag_transitive(),
            CheckKind::Thick => Ok(vec![self.timed(|| self.thick())?]),
            CheckKind::Connected => Ok(vec![self.timed(|| self.connected())?]),
            CheckKind::Diagram => self.diagram(),
            CheckKind::HaBound => Ok(vec![self.timed(|| self.ha_bound())?]),
            CheckKind::SdBattery => sd::battery(&self.opts.sd),
            CheckKind::Structure => Ok(vec![self.timed(|| self.structure())?]),
        }
    }

    pub(crate) fn geom(&self) -> &'a Pregeometry {
        self.g.expect("preconditions checked")
    }

    pub(crate) fn timed(&self, f: impl FnOnce() -> Result<CheckResult>) -> Result<CheckResult> {
        timed(f)
    }

    /// Recursive flag-transitivity conditions, `None` without a group.
    pub(crate) fn recursive_conditions(&self) -> Result<Option<&Vec<RecursiveCondition>>> {
        if let Some(v) = self.recursive.get() {
            return Ok(v.as_ref());
        }
        let g = self.geom();
        let v = match g.attached() {
            Some(_) => Some(g.recursive_conditions()?),
            None => None,
        };
        Ok(self.recursive.get_or_init(|| v).as_ref())
    }

    /// Do the recursive conditions all hold?
    pub(crate) fn recursive_holds(&self) -> Result<bool> {
        Ok(self
            .recursive_conditions()?
            .is_some_and(|c| c.iter().all(|c| c.holds())))
    }

    pub(crate) fn geometry_outcome(&self) -> Result<GeometryOutcome> {
        if let Some(v) = self.geometry.get() {
            return v.clone().map_err(Error::Invalid);
        }
        let v = self.compute_geometry().map_err(|e| e.to_string());
        self.geometry.get_or_init(|| v).clone().map_err(Error::Invalid)
    }
}

pub(crate) fn timed(f: impl FnOnce() -> Result<CheckResult>) -> Result<CheckResult> {
    let start = Instant::now();
    let mut r = f()?;
    r.time_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(r)
}

/// Convenience wrapper: verify `g` with `opts`.
pub fn verify(g: &Pregeometry, instance: Value, opts: VerifyOptions) -> Result<VerificationReport> {
    Verifier::new(Some(g), opts).run(instance)
}

/// Orders are reported as decimal strings; they may exceed JSON integers.
pub(crate) fn order_json(x: u128) -> Value {
    Value::String(x.to_string())
}
