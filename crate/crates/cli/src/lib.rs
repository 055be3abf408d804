//! `gt` command line. Exit codes: 0 valid/ok, 1 invalid/countermodel,
//! 2 usage or parse error, 3 resource limit.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use gt_core::calculus::{check_derivation, load_derivation, LoadError};
use gt_core::interpolation::{self, verify_report, InterpolationError};
use gt_core::prover::{prove_or_countermodel_with, Outcome, ProverConfig, ProverError};
use gt_core::resolutions::{partial_resolutions, resolutions};
use gt_core::semantics::{
    closure_properties, find_countermodel_with, is_countermodel, satisfies, sequent_valid_with, Budget,
    SemanticsError, Team,
};
use gt_core::sequent::{parse_sequent, ParsedSequent};
use gt_core::testgen::{Gen, Shape};
use gt_core::transforms::{eliminate_cuts, normalize, resolve_derivation, TransformError};
use gt_core::{parse_formula, Derivation, Multiset, PartitionSequent, Sequent};

pub const OK: i32 = 0;
pub const INVALID: i32 = 1;
pub const USAGE: i32 = 2;
pub const BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "gt", version, about = "Proofs, countermodels and interpolants for propositional team logic")]
struct Cli {
    /// Node budget for proof search.
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// Largest variable count accepted by team enumeration.
    #[arg(long, global = true)]
    max_vars: Option<usize>,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized runs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Derivation (exit 0) or countermodel team (exit 1), as JSON.
    Prove { sequent: String },
    /// Check a derivation JSON file.
    Check { file: PathBuf },
    /// Evaluate a formula on a team JSON file.
    Eval {
        formula: String,
        #[arg(long)]
        team: PathBuf,
    },
    /// Validity by team enumeration.
    Valid { sequent: String },
    /// Resolutions, or partial resolutions of the given degree.
    Resolutions {
        formula: String,
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Empty-team, downward, union closure and flatness.
    Closure { formula: String },
    /// Normal form of a cutfree derivation file.
    Normalize { file: PathBuf },
    /// Cut elimination on a derivation file.
    Cutelim { file: PathBuf },
    /// Classical parts of a derivation file, keyed by resolution.
    Resolve { file: PathBuf },
    /// Interpolant of `G1 ; G2 => L1 ; D2`; a plain `A => B` means `A ; => ; B`.
    Interpolate {
        sequent: String,
        /// Also print both component derivations.
        #[arg(short, long)]
        verbose: bool,
    },
    /// Prover against the enumeration oracle on random sequents.
    Fuzz {
        #[arg(long, default_value_t = 200)]
        count: usize,
    },
}

/// Failure with its exit code and message.
struct Fail(i32, String);

impl From<ProverError> for Fail {
    fn from(e: ProverError) -> Self {
        match e {
            ProverError::ResourceLimit { .. } => Fail(BUDGET, e.to_string()),
            other => Fail(USAGE, other.to_string()),
        }
    }
}

impl From<SemanticsError> for Fail {
    fn from(e: SemanticsError) -> Self {
        match e {
            SemanticsError::ResourceLimit { .. } => Fail(BUDGET, e.to_string()),
            other => Fail(USAGE, other.to_string()),
        }
    }
}

impl From<TransformError> for Fail {
    fn from(e: TransformError) -> Self {
        Fail(INVALID, e.to_string())
    }
}

impl From<InterpolationError> for Fail {
    fn from(e: InterpolationError) -> Self {
        match e {
            InterpolationError::Prover(p) => p.into(),
            InterpolationError::NonClassicalLambda1(_) | InterpolationError::PartitionMismatch { .. } => {
                Fail(USAGE, e.to_string())
            }
            other => Fail(INVALID, other.to_string()),
        }
    }
}

fn usage(e: impl std::fmt::Display) -> Fail {
    Fail(USAGE, e.to_string())
}

struct Ctx<'a> {
    out: &'a mut dyn Write,
    json: bool,
    prover: ProverConfig,
    budget: Budget,
    seed: u64,
}

impl Ctx<'_> {
    fn line(&mut self, s: impl AsRef<str>) {
        let _ = writeln!(self.out, "{}", s.as_ref());
    }

    fn value(&mut self, v: &Value) {
        let text = serde_json::to_string_pretty(v).expect("values serialize");
        self.line(text);
    }
}

/// Runs `gt` on `args` (program name first), writing to `out`.
pub fn run<I, S>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(out, "{e}");
            return if e.use_stderr() { USAGE } else { OK };
        }
    };
    let mut prover = ProverConfig::default();
    if let Some(b) = cli.budget {
        prover.node_budget = b;
    }
    let mut budget = Budget::default();
    if let Some(m) = cli.max_vars {
        budget.max_vars = m;
    }
    let json = cli.json;
    let mut ctx = Ctx {
        out,
        json,
        prover,
        budget,
        seed: cli.seed,
    };
    match dispatch(&mut ctx, cli.cmd) {
        Ok(code) => code,
        Err(Fail(code, msg)) => {
            if json {
                ctx.value(&json!({ "error": msg, "exit": code }));
            } else {
                ctx.line(format!("error: {msg}"));
            }
            code
        }
    }
}

fn sequent(text: &str) -> Result<Sequent, Fail> {
    match parse_sequent(text).map_err(usage)? {
        ParsedSequent::Plain(s) => Ok(s),
        ParsedSequent::Partition(p) => Ok(p.flatten()),
    }
}

fn read_json(path: &Path) -> Result<Value, Fail> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn derivation(path: &Path) -> Result<Derivation, Fail> {
    load_derivation(&read_json(path)?).map_err(|e| match e {
        LoadError::Violation { .. } => Fail(INVALID, e.to_string()),
        other => usage(other),
    })
}

fn dispatch(ctx: &mut Ctx, cmd: Cmd) -> Result<i32, Fail> {
    match cmd {
        Cmd::Prove { sequent: text } => {
            let s = sequent(&text)?;
            match prove_or_countermodel_with(&s, ctx.prover)? {
                Outcome::Proved(d) => {
                    ctx.value(&d.to_json());
                    Ok(OK)
                }
                Outcome::Countermodel(t) => {
                    ctx.value(&serde_json::to_value(&t).expect("teams serialize"));
                    Ok(INVALID)
                }
            }
        }
        Cmd::Check { file } => {
            let v = read_json(&file)?;
            match load_derivation(&v) {
                Ok(d) => {
                    if let Err(e) = check_derivation(&d) {
                        return Ok(violation_at(ctx, &e.address, &e.violation.to_string()));
                    }
                    if ctx.json {
                        ctx.value(&json!({ "ok": true, "conclusion": d.conclusion.to_string(), "height": d.height() }));
                    } else {
                        ctx.line(format!("ok: {}", d.conclusion));
                    }
                    Ok(OK)
                }
                Err(LoadError::Violation { address, violation }) => Ok(violation_at(ctx, &address, &violation.to_string())),
                Err(e) => Err(usage(e)),
            }
        }
        Cmd::Eval { formula, team } => {
            let f = parse_formula(&formula).map_err(usage)?;
            let t: Team = serde_json::from_value(read_json(&team)?).map_err(usage)?;
            let b = satisfies(&t, &f)?;
            if ctx.json {
                ctx.value(&json!({ "satisfied": b }));
            } else {
                ctx.line(b.to_string());
            }
            Ok(if b { OK } else { INVALID })
        }
        Cmd::Valid { sequent: text } => {
            let s = sequent(&text)?;
            let valid = sequent_valid_with(&s, &ctx.budget)?;
            let team = if valid {
                None
            } else {
                find_countermodel_with(&s, &ctx.budget)?
            };
            if ctx.json {
                ctx.value(&json!({ "valid": valid, "countermodel": team }));
            } else {
                ctx.line(if valid { "valid" } else { "invalid" });
                if let Some(t) = team {
                    ctx.line(format!("countermodel {t}"));
                }
            }
            Ok(if valid { OK } else { INVALID })
        }
        Cmd::Resolutions { formula, degree } => {
            let f = parse_formula(&formula).map_err(usage)?;
            let list = match degree {
                Some(n) => partial_resolutions(&f, n).map_err(usage)?,
                None => resolutions(&f),
            };
            if ctx.json {
                ctx.value(&json!(list.iter().map(|g| g.to_string()).collect::<Vec<_>>()));
            } else {
                for g in list {
                    ctx.line(g.to_string());
                }
            }
            Ok(OK)
        }
        Cmd::Closure { formula } => {
            let f = parse_formula(&formula).map_err(usage)?;
            let domain: Vec<_> = f.props().into_iter().collect();
            if domain.len() > ctx.budget.max_vars {
                return Err(Fail(BUDGET, format!("{} variables exceed --max-vars {}", domain.len(), ctx.budget.max_vars)));
            }
            let c = closure_properties(&f, &domain)?;
            if ctx.json {
                ctx.value(&serde_json::to_value(c).expect("flags serialize"));
            } else {
                ctx.line(format!("empty team: {}", c.empty_team));
                ctx.line(format!("downward closed: {}", c.downward_closed));
                ctx.line(format!("union closed: {}", c.union_closed));
                ctx.line(format!("flat: {}", c.flat));
            }
            Ok(OK)
        }
        Cmd::Normalize { file } => {
            let n = normalize(&derivation(&file)?)?;
            emit_derivation(ctx, &n);
            Ok(OK)
        }
        Cmd::Cutelim { file } => {
            let e = eliminate_cuts(&derivation(&file)?)?;
            emit_derivation(ctx, &e);
            Ok(OK)
        }
        Cmd::Resolve { file } => {
            let fam = resolve_derivation(&derivation(&file)?)?;
            if ctx.json {
                ctx.value(&serde_json::to_value(&fam).expect("families serialize"));
            } else {
                for e in &fam.entries {
                    ctx.line(format!("{}  ->  {}", e.resolution, e.derivation.conclusion));
                }
            }
            Ok(OK)
        }
        Cmd::Interpolate { sequent: text, verbose } => {
            let p = match parse_sequent(&text).map_err(usage)? {
                ParsedSequent::Partition(p) => p,
                ParsedSequent::Plain(s) => PartitionSequent {
                    gamma1: s.antecedent,
                    gamma2: Multiset::empty(),
                    delta1: Multiset::empty(),
                    delta2: s.succedent,
                },
            };
            interpolate(ctx, &p, verbose)
        }
        Cmd::Fuzz { count } => fuzz(ctx, count),
    }
}

fn violation_at(ctx: &mut Ctx, address: &[usize], violation: &str) -> i32 {
    if ctx.json {
        ctx.value(&json!({ "ok": false, "address": address, "violation": violation }));
    } else {
        ctx.line(format!("violation at {address:?}: {violation}"));
    }
    INVALID
}

fn emit_derivation(ctx: &mut Ctx, d: &Derivation) {
    if ctx.json {
        ctx.value(&d.to_json());
    } else {
        ctx.line(d.pretty().trim_end());
    }
}

fn interpolate(ctx: &mut Ctx, p: &PartitionSequent, verbose: bool) -> Result<i32, Fail> {
    if let Some(f) = p.delta1.iter().find(|f| !f.is_classical()) {
        return Err(InterpolationError::NonClassicalLambda1(f.clone()).into());
    }
    let d = match prove_or_countermodel_with(&p.flatten(), ctx.prover)? {
        Outcome::Proved(d) => d,
        Outcome::Countermodel(t) => return not_entailed(ctx, &t),
    };
    let r = match interpolation::interpolate_partition(&d, p) {
        Ok(r) => r,
        Err(e) => return Err(e.into()),
    };
    let v = verify_report(&r, p);
    if ctx.json {
        let mut o = json!({
            "interpolant": r.interpolant.to_string(),
            "verified": v.ok(),
            "polarity": r.polarity_report,
        });
        if verbose {
            o["left_derivation"] = r.left_derivation.to_json();
            o["right_derivation"] = r.right_derivation.to_json();
        }
        ctx.value(&o);
    } else {
        ctx.line(r.interpolant.to_string());
        if verbose {
            ctx.line(format!("left:\n{}", r.left_derivation.pretty().trim_end()));
            ctx.line(format!("right:\n{}", r.right_derivation.pretty().trim_end()));
        }
    }
    Ok(if v.ok() { OK } else { INVALID })
}

fn not_entailed(ctx: &mut Ctx, t: &Team) -> Result<i32, Fail> {
    if ctx.json {
        ctx.value(&json!({ "countermodel": t }));
    } else {
        ctx.line(format!("not valid; countermodel {t}"));
    }
    Ok(INVALID)
}

fn fuzz(ctx: &mut Ctx, count: usize) -> Result<i32, Fail> {
    let mut g = Gen::new(ctx.seed);
    let shape = Shape::default();
    let (mut proved, mut refuted, mut bad) = (0usize, 0usize, Vec::new());
    for i in 0..count {
        let s = g.sequent(&shape);
        let oracle = sequent_valid_with(&s, &ctx.budget)?;
        let agree = match prove_or_countermodel_with(&s, ctx.prover)? {
            Outcome::Proved(d) => {
                proved += 1;
                oracle && check_derivation(&d).is_ok() && d.conclusion == s
            }
            Outcome::Countermodel(t) => {
                refuted += 1;
                !oracle && is_countermodel(&t, &s)?
            }
        };
        if !agree {
            bad.push((i, s.to_string()));
        }
    }
    if ctx.json {
        ctx.value(&json!({ "count": count, "seed": ctx.seed, "proved": proved, "refuted": refuted, "disagreements": bad }));
    } else {
        ctx.line(format!("{count} sequents, seed {}: {proved} proved, {refuted} refuted, {} disagreements", ctx.seed, bad.len()));
        for (i, s) in &bad {
            ctx.line(format!("  #{i}: {s}"));
        }
    }
    Ok(if bad.is_empty() { OK } else { INVALID })
}
