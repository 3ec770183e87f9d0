//! Command-line front end: problem files in, JSON reports out.
//!
//! A problem file is TOML. Rationals are written as strings (`"1/3"`);
//! plain integers are accepted too.
//!
//! ```toml
//! rank = 2
//! nu = ["1", "2"]
//! degree = ["1", "0"]   # optional
//! rho = "5"             # optional
//! area = "1"            # optional
//! bound = "1"           # optional
//!
//! [[weights]]
//! vector = [1, 0]
//! multiplicity = 2      # optional, default 1
//! label = "x"           # optional
//! ```

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::gitq::{self, Support, WeightSystem};
use crate::inertia::{self, DEFAULT_ORDER_CAP};
use crate::mundet::{self, MundetProblem};
use crate::quasimap::{self, DegreeVector};
use crate::ratlin::{self, Rational, RationalVector};
use crate::treecomb::{self, DEFAULT_BUDGET};

pub const SCHEMA_VERSION: u32 = 1;
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalField {
    Int(i64),
    Text(String),
}

impl RationalField {
    pub fn to_rational(&self) -> Result<Rational> {
        match self {
            RationalField::Int(n) => Ok(ratlin::int(*n)),
            RationalField::Text(s) => ratlin::parse_rational(s),
        }
    }
}

fn to_vector(fields: &[RationalField]) -> Result<RationalVector> {
    fields
        .iter()
        .map(RationalField::to_rational)
        .collect::<Result<Vec<_>>>()
        .map(RationalVector::new)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightEntry {
    pub vector: Vec<i64>,
    #[serde(default = "one")]
    pub multiplicity: u64,
    #[serde(default)]
    pub label: Option<String>,
}

fn one() -> u64 {
    1
}

/// Parsed contents of a problem file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(default)]
    pub schema: Option<u32>,
    pub rank: usize,
    pub nu: Vec<RationalField>,
    pub weights: Vec<WeightEntry>,
    #[serde(default)]
    pub degree: Option<Vec<RationalField>>,
    #[serde(default)]
    pub rho: Option<RationalField>,
    #[serde(default)]
    pub area: Option<RationalField>,
    #[serde(default)]
    pub bound: Option<RationalField>,
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self> {
        let pf: ProblemFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if let Some(v) = pf.schema {
            if v != SCHEMA_VERSION {
                return Err(Error::Parse(format!(
                    "unsupported problem schema {v}, expected {SCHEMA_VERSION}"
                )));
            }
        }
        Ok(pf)
    }

    pub fn weight_system(&self) -> Result<WeightSystem> {
        let nu = to_vector(&self.nu)?;
        let ws = WeightSystem::new(
            self.rank,
            self.weights.iter().map(|w| w.vector.clone()).collect(),
            self.weights.iter().map(|w| w.multiplicity).collect(),
            nu,
        )?;
        if self.weights.iter().any(|w| w.label.is_some()) {
            let labels = self
                .weights
                .iter()
                .enumerate()
                .map(|(i, w)| w.label.clone().unwrap_or_else(|| format!("x{}", i + 1)))
                .collect();
            ws.with_labels(labels)
        } else {
            Ok(ws)
        }
    }

    pub fn degree(&self) -> Result<Option<DegreeVector>> {
        self.degree
            .as_deref()
            .map(|d| to_vector(d).map(DegreeVector::new))
            .transpose()
    }

    fn rational(field: &Option<RationalField>) -> Result<Option<Rational>> {
        field.as_ref().map(RationalField::to_rational).transpose()
    }
}

#[derive(Debug, Parser)]
#[command(name = "toricq", version, about = "Exact invariants of toric GIT quotients and their gauged maps")]
pub struct Cli {
    /// Worker threads for internal parallelism (output does not depend on it).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Cap on the summed orders of torsion subgroups scanned for inertia.
    #[arg(long, global = true, env = "TORICQ_ORDER_CAP", default_value_t = DEFAULT_ORDER_CAP)]
    pub order_cap: u64,
    /// Cap on partial structures produced by tree enumeration.
    #[arg(long, global = true, env = "TORICQ_BUDGET", default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Semistable locus, maximal unstable supports, properness, fixed points.
    Quotient { input: PathBuf },
    /// Chamber signature of ν, optionally compared with a second ν.
    Chambers {
        input: PathBuf,
        /// Second polarization, e.g. "2,1".
        #[arg(long)]
        nu2: Option<String>,
    },
    /// Twisted sectors of the inertia stack.
    Inertia { input: PathBuf },
    /// The quasimap space X(d) and its quotient.
    Quasimap {
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        degree: Option<String>,
    },
    /// Affine gauged maps of one degree, or all effective degrees up to a bound.
    Affine {
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true, conflicts_with = "sweep")]
        degree: Option<String>,
        #[arg(long)]
        sweep: Option<String>,
    },
    /// Gauged (Mundet) stability at a vortex parameter ρ.
    Mundet {
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        degree: Option<String>,
        #[arg(long)]
        rho: Option<String>,
        #[arg(long)]
        area: Option<String>,
        /// Also compute the large-ρ threshold.
        #[arg(long)]
        threshold: bool,
    },
    /// Strata of scaled affine curves with n markings.
    Strata {
        /// Optional problem file supplying the total degree and weights.
        input: Option<PathBuf>,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        splittings: bool,
    },
}

/// A report as printed on standard output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool: String,
    pub version: String,
    pub command: Value,
    /// Hex SHA-256 of the input file, if any.
    pub input_sha256: Option<String>,
    pub result: Value,
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

fn parse_flag_vector(s: &str) -> Result<DegreeVector> {
    DegreeVector::parse(s)
}

fn require<T>(v: Option<T>, what: &str) -> Result<T> {
    v.ok_or_else(|| Error::Parse(format!("{what} is required (flag or problem file)")))
}

struct Loaded {
    file: ProblemFile,
    ws: WeightSystem,
    digest: String,
}

fn load(path: &PathBuf) -> Result<Loaded> {
    let bytes = std::fs::read(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| Error::Parse(format!("{} is not UTF-8", path.display())))?;
    let file = ProblemFile::parse(&text)?;
    let ws = file.weight_system()?;
    Ok(Loaded {
        file,
        ws,
        digest: sha256_hex(&bytes),
    })
}

fn supports_json(s: &[Support]) -> Value {
    to_value(&s)
}

fn pick_degree(flag: &Option<String>, file: &ProblemFile) -> Result<Option<DegreeVector>> {
    match flag {
        Some(s) => parse_flag_vector(s).map(Some),
        None => file.degree(),
    }
}

fn command_quotient(ws: &WeightSystem) -> Result<Value> {
    let report = gitq::quotient_report(ws)?;
    Ok(json!({
        "max_unstable": supports_json(&gitq::max_unstable_supports(ws)?),
        "stable_eq_ss": report.stable_eq_ss,
        "proper": report.proper,
        "quotient": to_value(&report),
    }))
}

fn command_chambers(ws: &WeightSystem, nu2: Option<&str>) -> Result<Value> {
    let sig = gitq::chamber_signature(ws)?;
    let mut out = json!({
        "nu": ws.nu().to_strings(),
        "max_unstable": supports_json(&gitq::max_unstable_supports(ws)?),
        "signature": supports_json(&sig),
    });
    if let Some(s) = nu2 {
        let other = ws.with_nu(RationalVector::parse_list(s)?)?;
        let sig2 = gitq::chamber_signature(&other)?;
        out["comparison"] = json!({
            "nu": other.nu().to_strings(),
            "max_unstable": supports_json(&gitq::max_unstable_supports(&other)?),
            "signature": supports_json(&sig2),
            "same_chamber": sig == sig2,
        });
    }
    Ok(out)
}

fn command_inertia(ws: &WeightSystem, cap: u64) -> Result<Value> {
    let sectors = inertia::inertia_sectors(ws, cap)?;
    Ok(json!({
        "sector_count": sectors.len(),
        "sectors": to_value(&sectors),
    }))
}

fn weight_table(ws: &WeightSystem) -> Value {
    let rows: Vec<Value> = (0..ws.len())
        .map(|i| {
            let mut row = json!({
                "vector": ws.weight(i),
                "multiplicity": ws.multiplicities()[i],
            });
            if let Some(l) = ws.labels() {
                row["label"] = json!(l[i]);
            }
            row
        })
        .collect();
    Value::Array(rows)
}

fn command_quasimap(ws: &WeightSystem, d: &DegreeVector) -> Result<Value> {
    let problem = quasimap::quasimap_problem(ws, d)?;
    let report = gitq::quotient_report(&problem)?;
    let multiset: Vec<Value> = problem
        .weight_multiset()
        .into_iter()
        .map(|(w, m)| json!({"vector": w, "multiplicity": m}))
        .collect();
    Ok(json!({
        "degree": to_value(d),
        "weights": weight_table(&problem),
        "weight_multiset": multiset,
        "quotient": to_value(&report),
    }))
}

fn command_affine(ws: &WeightSystem, degree: Option<DegreeVector>, sweep: Option<Rational>) -> Result<Value> {
    match (degree, sweep) {
        (Some(d), _) => Ok(json!({"report": to_value(&quasimap::affine_report(ws, &d)?)})),
        (None, Some(b)) => {
            let rows = quasimap::effective_affine_degrees(ws, &b)?
                .iter()
                .map(|d| quasimap::affine_report(ws, d))
                .collect::<Result<Vec<_>>>()?;
            Ok(json!({
                "bound": ratlin::format_rational(&b),
                "rows": to_value(&rows),
            }))
        }
        (None, None) => Err(Error::Parse("affine needs --degree or --sweep (or degree/bound in the file)".into())),
    }
}

fn command_mundet(ws: &WeightSystem, d: DegreeVector, rho: Rational, area: Rational, threshold: bool) -> Result<Value> {
    let mp = MundetProblem::new(ws.clone(), d.clone(), rho.clone(), area.clone())?;
    let full = ws.full_support();
    let polarized = ws.with_nu(mp.effective_polarization())?;
    let mut out = json!({
        "degree": to_value(&d),
        "rho": ratlin::format_rational(&rho),
        "area": ratlin::format_rational(&area),
        "effective_polarization": mp.effective_polarization().to_strings(),
        "semistable": mundet::is_gauged_semistable(&mp, &full)?,
        "destabilizer": to_value(&mundet::gauged_destabilizer(&mp, &full)?),
        "gauged_max_unstable": supports_json(&gitq::max_unstable_supports(&polarized)?),
        "git_max_unstable": supports_json(&gitq::max_unstable_supports(ws)?),
    });
    if threshold {
        out["threshold"] = to_value(&mundet::rho_threshold(ws, &d, &area)?);
    }
    Ok(out)
}

fn command_strata(loaded: Option<&Loaded>, n: usize, splittings: bool, budget: usize) -> Result<Value> {
    let (total, effective) = match loaded {
        None => (DegreeVector::zero(1), vec![DegreeVector::zero(1)]),
        Some(l) => {
            let total = l.file.degree()?.unwrap_or_else(|| DegreeVector::zero(l.ws.rank()));
            total.vector().check_len(l.ws.rank())?;
            let effective = if total.is_zero() {
                vec![total.clone()]
            } else if l.ws.rank() == 1 {
                quasimap::effective_affine_degrees(&l.ws, &total.vector()[0])?
            } else {
                return Err(Error::Unsupported(
                    "strata with nonzero degree need a rank-1 torus".into(),
                ));
            };
            (total, effective)
        }
    };
    let types = treecomb::enumerate_types(n, &effective, &total, budget)?;
    let rows: Vec<Value> = types
        .iter()
        .map(|t| {
            json!({
                "shape": t.to_string(),
                "codimension": t.codimension(),
                "tree": to_value(t),
            })
        })
        .collect();
    let mut out = json!({
        "n": n,
        "total": to_value(&total),
        "effective_degrees": to_value(&effective),
        "type_count": types.len(),
        "types": rows,
    });
    if splittings {
        let sp = treecomb::infinite_splittings(n, &total, &effective, budget)?;
        out["splitting_count"] = json!(sp.len());
        out["splittings"] = to_value(&sp);
    }
    Ok(out)
}

/// Runs one command and renders the report. Thread count is not echoed,
/// so output is identical for any `--threads`.
pub fn run(cli: &Cli) -> Result<String> {
    let (echo, digest, result) = match &cli.command {
        Command::Quotient { input } => {
            let l = load(input)?;
            (json!({"name": "quotient"}), Some(l.digest.clone()), command_quotient(&l.ws)?)
        }
        Command::Chambers { input, nu2 } => {
            let l = load(input)?;
            (
                json!({"name": "chambers", "nu2": nu2}),
                Some(l.digest.clone()),
                command_chambers(&l.ws, nu2.as_deref())?,
            )
        }
        Command::Inertia { input } => {
            let l = load(input)?;
            (
                json!({"name": "inertia", "order_cap": cli.order_cap}),
                Some(l.digest.clone()),
                command_inertia(&l.ws, cli.order_cap)?,
            )
        }
        Command::Quasimap { input, degree } => {
            let l = load(input)?;
            let d = require(pick_degree(degree, &l.file)?, "degree")?;
            (
                json!({"name": "quasimap", "degree": d.vector().to_strings()}),
                Some(l.digest.clone()),
                command_quasimap(&l.ws, &d)?,
            )
        }
        Command::Affine { input, degree, sweep } => {
            let l = load(input)?;
            let d = match degree {
                Some(s) => Some(parse_flag_vector(s)?),
                None if sweep.is_none() => l.file.degree()?,
                None => None,
            };
            let bound = match sweep {
                Some(s) => Some(ratlin::parse_rational(s)?),
                None => ProblemFile::rational(&l.file.bound)?,
            };
            let echo = json!({
                "name": "affine",
                "degree": d.as_ref().map(|d| d.vector().to_strings()),
                "sweep": bound.as_ref().map(ratlin::format_rational),
            });
            (echo, Some(l.digest.clone()), command_affine(&l.ws, d, bound)?)
        }
        Command::Mundet {
            input,
            degree,
            rho,
            area,
            threshold,
        } => {
            let l = load(input)?;
            let d = require(pick_degree(degree, &l.file)?, "degree")?;
            let rho = match rho {
                Some(s) => ratlin::parse_rational(s)?,
                None => require(ProblemFile::rational(&l.file.rho)?, "rho")?,
            };
            let area = match area {
                Some(s) => ratlin::parse_rational(s)?,
                None => ProblemFile::rational(&l.file.area)?.unwrap_or_else(|| ratlin::int(1)),
            };
            let echo = json!({
                "name": "mundet",
                "degree": d.vector().to_strings(),
                "rho": ratlin::format_rational(&rho),
                "area": ratlin::format_rational(&area),
                "threshold": threshold,
            });
            (echo, Some(l.digest.clone()), command_mundet(&l.ws, d, rho, area, *threshold)?)
        }
        Command::Strata { input, n, splittings } => {
            let l = input.as_ref().map(load).transpose()?;
            let echo = json!({
                "name": "strata",
                "n": n,
                "splittings": splittings,
                "budget": cli.budget,
            });
            (
                echo,
                l.as_ref().map(|l| l.digest.clone()),
                command_strata(l.as_ref(), *n, *splittings, cli.budget)?,
            )
        }
    };
    let report = Report {
        schema_version: SCHEMA_VERSION,
        tool: "toricq".into(),
        version: VERSION.into(),
        command: echo,
        input_sha256: digest,
        result,
    };
    let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
    text.push('\n');
    Ok(text)
}

/// Parses arguments, runs, prints, and returns the process exit code:
/// 0 on success, 2 on unparseable input, 3 on a domain error.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("warning: could not configure {t} threads: {e}");
        }
    }
    match run(&cli) {
        Ok(text) => {
            print!("{text}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
