//! Command-line front end. Every command prints one JSON document (or a
//! flattened text rendering of it) and maps outcomes to exit codes:
//! 0 pass, 1 verification failure, 2 usage or input error.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bipoly::{monomial_basis, BiDegree, BiPoly};
use crate::endomorph::{apply_to_form, endo_space_dim, EndoRep};
use crate::error::{Error, Result};
use crate::foliation::{
    check_form, projective_equal, random_section, ruling_form, solve_forms, Section,
};
use crate::linebundle::{canonical, intersect, DivisorClass};
use crate::rng::derive_seed;
use crate::samesing::{
    lemma3_h0_check, sample_isolated, verify_corollary, verify_main_theorem, verify_remarks,
};
use crate::singscheme::{
    expected_multiplicity, scheme_contains, scheme_equal, singular_scheme, total_multiplicity,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const RUNNING_EXAMPLE: &str = include_str!("../fixtures/running_example.json");
const RULING_DELTA2: &str = include_str!("../fixtures/ruling_delta2.json");
const NORMAL_BUNDLE_DELTA0: &str = include_str!("../fixtures/normal_bundle_delta0.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "hirzefol",
    version,
    about = "Foliations on Hirzebruch surfaces in exact arithmetic"
)]
pub struct RunConfig {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct Bidegree {
    #[arg(long)]
    pub delta: u32,
    #[arg(long, allow_hyphen_values = true)]
    pub d1: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub d2: i64,
}

impl Bidegree {
    fn d(&self) -> BiDegree {
        BiDegree::new(self.d1, self.d2)
    }
}

#[derive(Debug, Clone, Copy, Args)]
pub struct Sampling {
    #[arg(long, env = "HIRZEFOL_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monomial basis of O(d1, d2).
    Basis(Bidegree),
    /// Cohomology dimensions of O(d1, d2).
    Dims(Bidegree),
    /// Cone membership and intersection data of d1 F + d2 M.
    Cones(Bidegree),
    /// Sample, convert and validate foliations
    #[command(subcommand)]
    Fol(FolCommand),
    /// Singular schemes and their multiplicity
    #[command(subcommand)]
    Sing(SingCommand),
    /// Endomorphisms of the tangent bundle
    #[command(subcommand)]
    Endo(EndoCommand),
    /// Check the same-singular-scheme statements on samples
    #[command(subcommand)]
    Verify(VerifyCommand),
}

#[derive(Debug, Subcommand)]
pub enum FolCommand {
    /// Seeded random vector field.
    Random {
        #[command(flatten)]
        bidegree: Bidegree,
        #[arg(long, env = "HIRZEFOL_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Converts a section file to its 1-form.
    ToForm { input: PathBuf },
    /// Checks bidegrees and the Euler conditions.
    Validate { input: PathBuf },
    /// Basis of all 1-forms of the bidegree.
    Solve(Bidegree),
}

#[derive(Debug, Subcommand)]
pub enum SingCommand {
    /// Chart Gröbner bases and multiplicity of a section.
    Compute { input: PathBuf },
    /// Equality and containment of two singular schemes.
    Compare { a: PathBuf, b: PathBuf },
    /// Stratified multiplicity against c2(TS ⊗ L*).
    Count { input: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum EndoCommand {
    /// Dimension of the endomorphism space.
    Dim {
        #[arg(long)]
        delta: u32,
    },
    /// Applies an endomorphism to a section.
    Apply {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        d: Option<String>,
        /// Form in X0, X1 of degree delta - 2.
        #[arg(long = "C", allow_hyphen_values = true)]
        c: Option<String>,
        input: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    /// Sections sharing the singular scheme are the endomorphism orbit.
    Main {
        #[command(flatten)]
        bidegree: Bidegree,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Schemes of images under invertible and singular endomorphisms.
    Corollary {
        #[command(flatten)]
        bidegree: Bidegree,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Ruling, normal-bundle twist and the shipped fixtures.
    Remarks {
        #[arg(long)]
        delta: u32,
    },
    /// h0(Θ ⊗ E) = 0 for E = L ⊗ K.
    Lemma3(Bidegree),
}

/// A finished command: report plus pass flag.
struct Outcome {
    report: Value,
    pass: bool,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Outcome { report, pass: true }
    }

    fn of<T: Serialize>(report: &T, pass: bool) -> Self {
        Outcome {
            report: serde_json::to_value(report).expect("plain data serializes"),
            pass,
        }
    }
}

fn read_section(path: &Path) -> Result<Section> {
    Section::from_json(&std::fs::read_to_string(path)?)
}

fn parse_rat(s: &str) -> Result<crate::Rat> {
    let p = BiPoly::parse(0, s)?;
    let first = p.terms().next().map(|(m, c)| (m.total_degree(), c.clone()));
    match first {
        None => Ok(crate::rat(0)),
        Some((0, c)) if p.len() == 1 => Ok(c),
        _ => Err(Error::Parse {
            offset: 0,
            msg: format!("expected a rational number, got {s:?}"),
        }),
    }
}

fn user_error(e: &Error) -> bool {
    !matches!(
        e,
        Error::NotIsolated | Error::ZeroForm | Error::EulerViolation | Error::NegativeH1(_)
    )
}

fn trial_seeds(s: &Sampling) -> Vec<(u64, u64)> {
    (0..s.trials)
        .map(|t| {
            (
                t,
                if t == 0 {
                    s.seed
                } else {
                    derive_seed(s.seed, t)
                },
            )
        })
        .collect()
}

/// Runs `f` once per trial in parallel; results come back in trial order.
fn fan_out<F>(s: &Sampling, f: F) -> Result<Outcome>
where
    F: Fn(u64) -> Result<Outcome> + Sync,
{
    let results: Vec<(u64, u64, Result<Outcome>)> = trial_seeds(s)
        .into_par_iter()
        .map(|(t, seed)| (t, seed, f(seed)))
        .collect();
    if s.trials == 1 {
        return results.into_iter().next().expect("one trial").2;
    }
    let mut trials = Vec::new();
    let mut pass = true;
    for (t, seed, r) in results {
        let o = r?;
        pass &= o.pass;
        trials.push(json!({ "trial": t, "seed": seed, "report": o.report }));
    }
    Ok(Outcome {
        report: json!({ "trials": trials, "pass": pass }),
        pass,
    })
}

fn run(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Basis(b) => {
            let basis: Vec<String> = monomial_basis(b.delta, b.d())
                .iter()
                .map(ToString::to_string)
                .collect();
            Ok(Outcome::ok(
                json!({ "delta": b.delta, "d1": b.d1, "d2": b.d2, "size": basis.len(), "basis": basis }),
            ))
        }
        Command::Dims(b) => {
            let c = DivisorClass::new(b.delta, b.d1, b.d2);
            let dims = c.cohomology()?;
            Ok(Outcome::ok(json!({
                "h0": dims.h0, "h1": dims.h1, "h2": dims.h2,
                "chi": c.euler_characteristic(),
                "ample": c.is_ample(), "nef": c.is_nef(), "effective": c.is_effective(),
            })))
        }
        Command::Cones(b) => {
            let c = DivisorClass::new(b.delta, b.d1, b.d2);
            let k = canonical(b.delta);
            Ok(Outcome::ok(json!({
                "effective": c.is_effective(), "nef": c.is_nef(), "ample": c.is_ample(),
                "self_intersection": intersect(&c, &c)?,
                "canonical": [k.d1, k.d2],
                "degree_on_fibre": intersect(&c, &DivisorClass::fibre(b.delta))?,
                "degree_on_negative_section": intersect(&c, &DivisorClass::negative_section(b.delta))?,
            })))
        }
        Command::Fol(f) => run_fol(f),
        Command::Sing(s) => run_sing(s),
        Command::Endo(e) => run_endo(e),
        Command::Verify(v) => run_verify(v),
    }
}

fn section_value(s: &Section) -> Value {
    serde_json::from_str(&s.to_json()).expect("own output parses")
}

fn run_fol(cmd: FolCommand) -> Result<Outcome> {
    match cmd {
        FolCommand::Random { bidegree: b, seed } => {
            let x = random_section(b.delta, b.d(), seed);
            Ok(Outcome::ok(section_value(&Section::Vf(x))))
        }
        FolCommand::ToForm { input } => {
            let form = read_section(&input)?.to_form()?;
            Ok(Outcome::ok(section_value(&Section::Form(form))))
        }
        FolCommand::Validate { input } => {
            let section = read_section(&input)?;
            let verdict = section.to_form().and_then(|w| {
                if w.is_zero() {
                    Err(Error::ZeroForm)
                } else {
                    check_form(&w)
                }
            });
            let report = json!({
                "valid": verdict.is_ok(),
                "error": verdict.as_ref().err().map(ToString::to_string),
            });
            Ok(Outcome {
                report,
                pass: verdict.is_ok(),
            })
        }
        FolCommand::Solve(b) => {
            let sols: Vec<Value> = solve_forms(b.delta, b.d())
                .into_iter()
                .map(|w| section_value(&Section::Form(w)))
                .collect();
            Ok(Outcome::ok(
                json!({ "dimension": sols.len(), "basis": sols }),
            ))
        }
    }
}

fn scheme_report(section: &Section) -> Result<(Value, bool)> {
    let w = section.to_form()?;
    let z = singular_scheme(&w)?;
    let charts: serde_json::Map<String, Value> = z
        .charts
        .iter()
        .map(|c| {
            let gb: Vec<String> = c.basis.elements().iter().map(ToString::to_string).collect();
            (c.chart.name(), json!(gb))
        })
        .collect();
    let mult = if z.is_isolated() {
        Some(total_multiplicity(&z)?)
    } else {
        None
    };
    let expected = expected_multiplicity(w.delta, w.d);
    let consistent = mult.is_some_and(|m| m.total as i64 == expected);
    Ok((
        json!({
            "delta": w.delta, "d1": w.d.d1, "d2": w.d.d2,
            "per_chart_gb": charts,
            "isolated": z.is_isolated(),
            "empty": z.is_empty(),
            "total_multiplicity": mult.map(|m| m.total),
            "strata": mult,
            "expected_multiplicity": expected,
        }),
        consistent,
    ))
}

fn run_sing(cmd: SingCommand) -> Result<Outcome> {
    match cmd {
        SingCommand::Compute { input } => {
            let (report, _) = scheme_report(&read_section(&input)?)?;
            Ok(Outcome::ok(report))
        }
        SingCommand::Count { input } => {
            let (report, consistent) = scheme_report(&read_section(&input)?)?;
            Ok(Outcome {
                report,
                pass: consistent,
            })
        }
        SingCommand::Compare { a, b } => {
            let za = singular_scheme(&read_section(&a)?.to_form()?)?;
            let zb = singular_scheme(&read_section(&b)?.to_form()?)?;
            Ok(Outcome::ok(json!({
                "equal": scheme_equal(&za, &zb),
                "a_in_b": scheme_contains(&za, &zb),
                "b_in_a": scheme_contains(&zb, &za),
            })))
        }
    }
}

fn run_endo(cmd: EndoCommand) -> Result<Outcome> {
    match cmd {
        EndoCommand::Dim { delta } => Ok(Outcome::ok(
            json!({ "delta": delta, "dimension": endo_space_dim(delta) }),
        )),
        EndoCommand::Apply { a, d, c, input } => {
            let section = read_section(&input)?;
            let delta = section.delta();
            let a = parse_rat(&a)?;
            let d = d.as_deref().map(parse_rat).transpose()?;
            let c = c.as_deref().map(|s| BiPoly::parse(delta, s)).transpose()?;
            let phi = EndoRep::new(delta, a, d, c)?;
            let w = section.to_form()?;
            let image = apply_to_form(&phi, &w)?;
            Ok(Outcome::ok(json!({
                "endomorphism": phi.to_string(),
                "invertible": phi.is_invertible(),
                "image_zero": image.is_zero(),
                "same_foliation": !image.is_zero() && projective_equal(&w, &image),
                "image": section_value(&Section::Form(image)),
            })))
        }
    }
}

#[derive(Serialize)]
struct MainTrial {
    seed_used: u64,
    theorem: crate::samesing::MainReport,
    total_multiplicity: usize,
    expected_multiplicity: i64,
    pass: bool,
}

fn fixture_checks() -> Result<Vec<(String, bool)>> {
    let mut out = Vec::new();
    let running = Section::from_json(RUNNING_EXAMPLE)?;
    let z = singular_scheme(&running.to_form()?)?;
    out.push((
        "running_example total multiplicity 4".to_string(),
        z.is_isolated() && total_multiplicity(&z)?.total == 4,
    ));
    let ruling = Section::from_json(RULING_DELTA2)?.to_form()?;
    let tau = solve_forms(2, ruling.d);
    out.push((
        "ruling_delta2 spans the tangent-sheaf forms".to_string(),
        tau.len() == 1
            && projective_equal(&tau[0], &ruling)
            && projective_equal(&ruling, &ruling_form(2)),
    ));
    let normal = Section::from_json(NORMAL_BUNDLE_DELTA0)?.to_form()?;
    let sols = solve_forms(0, normal.d);
    out.push((
        "normal_bundle_delta0 spans its twist".to_string(),
        sols.len() == 1 && projective_equal(&sols[0], &normal),
    ));
    Ok(out)
}

fn run_verify(cmd: VerifyCommand) -> Result<Outcome> {
    match cmd {
        VerifyCommand::Main {
            bidegree: b,
            sampling,
        } => {
            crate::samesing::in_theorem_region(b.delta, b.d())
                .then_some(())
                .ok_or(Error::RegionViolation {
                    delta: b.delta,
                    d1: b.d1,
                    d2: b.d2,
                    why: format!(
                        "need d2 >= 1 and d1 >= {}",
                        crate::samesing::min_d1(b.delta)
                    ),
                })?;
            fan_out(&sampling, |seed| {
                let (_, w, z, used) = sample_isolated(b.delta, b.d(), seed)?;
                let theorem = verify_main_theorem(&w)?;
                let total = total_multiplicity(&z)?.total;
                let expected = expected_multiplicity(b.delta, b.d());
                let pass = theorem.pass && total as i64 == expected;
                let t = MainTrial {
                    seed_used: used,
                    theorem,
                    total_multiplicity: total,
                    expected_multiplicity: expected,
                    pass,
                };
                Ok(Outcome::of(&t, pass))
            })
        }
        VerifyCommand::Corollary {
            bidegree: b,
            sampling,
        } => fan_out(&sampling, |seed| {
            let r = verify_corollary(b.delta, b.d(), seed)?;
            let pass = r.pass;
            Ok(Outcome::of(&r, pass))
        }),
        VerifyCommand::Remarks { delta } => {
            let r = verify_remarks(delta)?;
            let fixtures = fixture_checks()?;
            let pass = r.pass && fixtures.iter().all(|(_, ok)| *ok);
            let fixtures: Vec<Value> = fixtures
                .into_iter()
                .map(|(name, ok)| json!({ "fixture": name, "pass": ok }))
                .collect();
            Ok(Outcome {
                report: json!({ "remarks": r, "fixtures": fixtures, "pass": pass }),
                pass,
            })
        }
        VerifyCommand::Lemma3(b) => {
            let ok = lemma3_h0_check(b.delta, b.d());
            let e = BiDegree::new(i64::from(b.delta) - b.d1 - 2, -b.d2 - 2);
            Ok(Outcome {
                report: json!({ "delta": b.delta, "d1": b.d1, "d2": b.d2, "e": [e.d1, e.d2], "h0_zero": ok, "pass": ok }),
                pass: ok,
            })
        }
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let p = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&p, x, out);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        Value::String(s) => out.push(format!("{prefix}: {s}")),
        _ => out.push(format!("{prefix}: {v}")),
    }
}

fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(v).expect("serializable") + "\n",
        Format::Text => {
            let mut lines = Vec::new();
            flatten("", v, &mut lines);
            lines.join("\n") + "\n"
        }
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn dispatch<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
            return (code, e.to_string());
        }
    };
    match run(cfg.command) {
        Ok(o) => (
            if o.pass { EXIT_PASS } else { EXIT_FAIL },
            render(&o.report, cfg.format),
        ),
        Err(e) => {
            let code = if user_error(&e) {
                EXIT_USAGE
            } else {
                EXIT_FAIL
            };
            (code, format!("error: {e}\n"))
        }
    }
}
