//! pcdyn: exact piecewise circle dynamics from the command line.
//!
//! Every report starts with the line `pcdyn/1`. Exit status is 0 on success,
//! 2 when the verdict is UNDECIDED (including an exhausted piece budget) and 1
//! on input or usage errors.

mod input;
mod report;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use pcdyn_core::budget::BudgetExceeded;
use pcdyn_core::doubling::DoubledMap;
use pcdyn_core::holonomy::classify;
use pcdyn_core::models::model_diff;
use pcdyn_core::partial_action::{power_growth, transfix_scan, GrowthVerdict, TransfixVerdict};
use pcdyn_core::piecewise::{canonicalize, compose, invert};
use pcdyn_core::solver::{solve_invariant, SolveStatus, DEFAULT_DEPTH};
use pcdyn_core::structure::pullback;
use pcdyn_core::{selftest, PiecewiseMap, PseudogroupTag};
use serde_json::{json, Value};

use input::{InputError, Validated, HEADER};

#[derive(Parser)]
#[command(name = "pcdyn", version, about = "Exact piecewise isometric, affine and projective circle dynamics")]
struct Cli {
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Load and validate a map, structure, generator list or corpus file.
    Validate { input: String },
    /// Canonical form of a map, retagged.
    Canonical {
        map: String,
        #[arg(long)]
        tag: Option<String>,
    },
    /// A after B.
    Compose { a: String, b: String },
    Invert { map: String },
    /// Indeterminacy of the powers f^n, |n| <= N.
    PowerGrowth {
        map: String,
        #[arg(long)]
        tag: Option<String>,
        #[arg(long, default_value_t = 64)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Indeterminacy set, semi-indices and singularity profile.
    Indeterminacy {
        map: String,
        #[arg(long)]
        tag: Option<String>,
    },
    /// Word-ball scan with a certified verdict when one is available.
    Transfix {
        #[arg(required = true)]
        gens: Vec<String>,
        #[arg(long, default_value_t = 4)]
        radius: usize,
        #[arg(long)]
        tag: Option<String>,
    },
    /// Difference sets of the commensurated subset at level 0, 1 or 2.
    Lmodel {
        map: String,
        #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=2))]
        level: u8,
    },
    /// Pullback of a structure function by a map.
    Pullback { map: String, nu: String },
    /// Invariant structure functions of a generator set.
    Solve {
        #[arg(required = true)]
        gens: Vec<String>,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=2))]
        level: u8,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
    },
    /// Holonomy class of a totally defined level-2 structure.
    Classify { nu: String },
    /// Image on the orientation double cover, in length-2 coordinates.
    Double { map: String },
    /// Runs the invariant suite.
    Selftest {
        /// Run only these criteria (1 to 11).
        #[arg(long, value_delimiter = ',', value_parser = clap::value_parser!(u8).range(1..=11))]
        only: Vec<u8>,
    },
}

enum Failure {
    Input(String),
    Selftest,
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e.0)
    }
}

/// Report text plus whether the verdict was UNDECIDED.
struct Output {
    body: String,
    undecided: bool,
}

impl Output {
    fn json(v: &Value) -> Self {
        Output { body: to_pretty(v), undecided: false }
    }
    fn undecided_if(mut self, u: bool) -> Self {
        self.undecided = u;
        self
    }
}

fn to_pretty<T: serde::Serialize + ?Sized>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn tag_or(f: &PiecewiseMap, tag: &Option<String>) -> Result<PseudogroupTag, Failure> {
    match tag {
        None => Ok(f.tag()),
        Some(t) => PseudogroupTag::parse(t).ok_or_else(|| Failure::Input(format!("unknown tag {t:?}; use isom, aff, proj, c0, c1, c2 with optional +"))),
    }
}

/// Checks that every germ of `f` lies in the pseudogroup named by `tag`.
fn fit(f: &PiecewiseMap, tag: PseudogroupTag) -> Result<PiecewiseMap, Failure> {
    f.with_tag(tag).map_err(|e| Failure::Input(format!("map does not fit tag {tag}: {e}")))
}

fn join_tags(gens: &[PiecewiseMap]) -> PseudogroupTag {
    gens.iter().map(PiecewiseMap::tag).reduce(PseudogroupTag::join).expect("at least one generator")
}

fn load_all(refs: &[String]) -> Result<Vec<PiecewiseMap>, Failure> {
    let mut gens = Vec::new();
    for r in refs {
        gens.extend(input::load_generators(r)?);
    }
    if gens.is_empty() {
        return Err(Failure::Input("no generators given".into()));
    }
    Ok(gens)
}

fn budget_undecided(e: BudgetExceeded) -> Output {
    eprintln!("UNDECIDED: {e}");
    Output::json(&json!({ "verdict": "UNDECIDED", "reason": e.to_string() })).undecided_if(true)
}

fn run(cmd: Command) -> Result<Output, Failure> {
    Ok(match cmd {
        Command::Validate { input } => {
            let v = match input::validate(&input)? {
                Validated::Map(f) => json!({ "valid": true, "kind": "map", "tag": f.tag(), "pieces": f.piece_count() }),
                Validated::Doubled(d) => json!({ "valid": true, "kind": "doubled_map", "pieces": d.0.piece_count() }),
                Validated::Structure(nu) => {
                    json!({ "valid": true, "kind": "structure", "level": nu.level(), "support": nu.support_points() })
                }
                Validated::Corpus { maps, generators, structures } => json!({
                    "valid": true, "kind": "corpus", "maps": maps, "generators": generators, "structures": structures,
                }),
            };
            Output::json(&v)
        }
        Command::Canonical { map, tag } => {
            let f = input::load_map(&map)?;
            let tag = tag_or(&f, &tag)?;
            let c = canonicalize(&fit(&f, tag)?, tag);
            Output::json(&serde_json::to_value(&c).expect("maps serialize"))
        }
        Command::Compose { a, b } => {
            let (f, g) = (input::load_map(&a)?, input::load_map(&b)?);
            Output::json(&serde_json::to_value(compose(&f, &g)).expect("maps serialize"))
        }
        Command::Invert { map } => Output::json(&serde_json::to_value(invert(&input::load_map(&map)?)).expect("maps serialize")),
        Command::PowerGrowth { map, tag, n, format } => {
            let f = input::load_map(&map)?;
            let tag = tag_or(&f, &tag)?;
            let f = fit(&f, tag)?;
            if n < 8 {
                return Err(Failure::Input("--n must be at least 8".into()));
            }
            let r = match power_growth(&f, tag, n) {
                Ok(r) => r,
                Err(e) => return Ok(budget_undecided(e)),
            };
            let undecided = r.verdict == GrowthVerdict::Undecided;
            match format {
                Format::Csv => {
                    eprintln!("verdict {} m {} B {}", r.verdict.name(), r.slope, r.bound);
                    let body = report::growth_csv(&r).map_err(|e| Failure::Input(e.to_string()))?;
                    Output { body, undecided }
                }
                Format::Json => Output::json(&report::growth(&r, tag)).undecided_if(undecided),
            }
        }
        Command::Indeterminacy { map, tag } => {
            let f = input::load_map(&map)?;
            let tag = tag_or(&f, &tag)?;
            Output::json(&report::indeterminacy(&fit(&f, tag)?, tag))
        }
        Command::Transfix { gens, radius, tag } => {
            let gens = load_all(&gens)?;
            let tag = match tag {
                None => join_tags(&gens),
                Some(_) => tag_or(&gens[0], &tag)?,
            };
            let gens = gens.iter().map(|g| fit(g, tag)).collect::<Result<Vec<_>, _>>()?;
            match transfix_scan(&gens, tag, radius) {
                Ok(r) => Output::json(&report::transfix(&r)).undecided_if(r.verdict == TransfixVerdict::Undecided),
                Err(e) => budget_undecided(e),
            }
        }
        Command::Lmodel { map, level } => {
            let d = model_diff(&input::load_map(&map)?, level);
            let mut v = serde_json::to_value(&d).expect("diffs serialize");
            v["leaving_count"] = json!(d.leaving.len());
            v["entering_count"] = json!(d.entering.len());
            Output::json(&v)
        }
        Command::Pullback { map, nu } => {
            let f = input::load_map(&map)?;
            let nu = input::load_structure(&nu)?;
            Output::json(&serde_json::to_value(pullback(&f, &nu)).expect("structures serialize"))
        }
        Command::Solve { gens, level, depth } => {
            let gens = load_all(&gens)?;
            match solve_invariant(&gens, level, depth) {
                Ok(r) => Output::json(&report::solve(&r)).undecided_if(matches!(r.status, SolveStatus::Undecided(_))),
                Err(e) => budget_undecided(e),
            }
        }
        Command::Classify { nu } => {
            let nu = input::load_structure(&nu)?;
            let c = classify(&nu).map_err(|e| Failure::Input(format!("cannot classify: {e}")))?;
            Output::json(&serde_json::to_value(&c).expect("classes serialize"))
        }
        Command::Double { map } => {
            let d = DoubledMap::of(&input::load_map(&map)?);
            Output::json(&serde_json::to_value(&d).expect("doubled maps serialize"))
        }
        Command::Selftest { only } => {
            let ids: Vec<u8> = if only.is_empty() { (1..=11).collect() } else { only };
            let ctx = selftest::Context::new();
            let mut body = String::new();
            let mut failed = 0;
            for id in ids {
                let o = selftest::run_one(&ctx, id);
                failed += usize::from(!o.passed);
                body.push_str(&format!("{o}\n"));
            }
            if failed > 0 {
                write_out(&None, &body).map_err(Failure::Input)?;
                return Err(Failure::Selftest);
            }
            Output { body, undecided: false }
        }
    })
}

fn write_out(out: &Option<String>, body: &str) -> Result<(), String> {
    let text = format!("{HEADER}\n{body}");
    match out {
        Some(path) => fs::write(path, text).map_err(|e| format!("{path}: {e}")),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // help and version are not errors; usage errors exit 1 so that 2 stays UNDECIDED
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(o) => {
            if let Err(e) = write_out(&cli.out, &o.body) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            ExitCode::from(if o.undecided { 2 } else { 0 })
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Selftest) => {
            eprintln!("selftest failed");
            ExitCode::from(1)
        }
    }
}
