//! Command-line front end.
//!
//! Exit status: 0 when the command succeeds and the checked property holds,
//! 1 when the command ran but found violations, 2 on usage, parse or load
//! errors. Text output is line oriented; `--json` prints the owning module's
//! report type instead.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::analysis::{
    generate_scenario, is_ic, verify_prop33, Crossing, CrossingSite, IcCheck, PropertySlot,
    ScenarioKind, ScenarioSpec, DEFAULT_HOLE,
};
use crate::formula::{bind, parse};
use crate::interval::{has_watching_gap, locate_gaps};
use crate::semantics::{
    kleene_and, kleene_not, kleene_or, render_table, valuation, Connective, Context, TruthValue,
};
use crate::structure::{validate, FluxingStructure, StructureDoc, TimePoint};

pub const SEED_ENV: &str = "FLUXLOGIC_SEED";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FINDINGS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "fluxlogic",
    version,
    about = "Fluxing-object semantics toolkit"
)]
struct Cli {
    /// Print structured JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a structure file against every structural invariant.
    Validate { file: PathBuf },
    /// Evaluate a formula at an (agent, time) point.
    Eval {
        file: PathBuf,
        formula: String,
        #[arg(long)]
        agent: String,
        #[arg(long)]
        time: TimePoint,
    },
    /// Print the truth table of a connective (not, and, or).
    Table { connective: Connective },
    /// Check which objects change imperceptibly with respect to a property.
    AnalyzeIc {
        file: PathBuf,
        property: String,
        #[arg(long, default_value = DEFAULT_HOLE)]
        hole: String,
        /// Restrict to one object.
        #[arg(long)]
        object: Option<String>,
    },
    /// Report watching gaps of an object between two watched moments.
    Gaps {
        file: PathBuf,
        #[arg(long)]
        object: String,
        #[arg(long)]
        agent: String,
        #[arg(long = "from")]
        from: TimePoint,
        #[arg(long = "to")]
        to: TimePoint,
    },
    /// Pair every change of view of an i.c. object with its watching gaps.
    Verify {
        file: PathBuf,
        property: String,
        #[arg(long, default_value = DEFAULT_HOLE)]
        hole: String,
    },
    /// Generate a sorites scenario structure.
    Scenario(ScenarioArgs),
}

#[derive(Debug, Args)]
struct ScenarioArgs {
    /// JSON scenario spec; replaces the individual flags.
    #[arg(long, conflicts_with_all = ["kind", "threshold", "horizon", "offset", "watch"])]
    spec: Option<PathBuf>,
    #[arg(long, required_unless_present = "spec")]
    kind: Option<ScenarioKind>,
    #[arg(long, required_unless_present = "spec")]
    threshold: Option<u64>,
    #[arg(long, required_unless_present = "spec")]
    horizon: Option<TimePoint>,
    #[arg(long)]
    offset: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Watched moments of one agent, e.g. `0:0-3,7-9`. Repeatable.
    #[arg(long, value_parser = parse_watch)]
    watch: Vec<(String, Vec<TimePoint>)>,
    /// Output file; the structure goes to standard output when omitted.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

fn parse_watch(s: &str) -> Result<(String, Vec<TimePoint>), String> {
    let (agent, ranges) = s
        .split_once(':')
        .ok_or_else(|| format!("`{s}`: expected AGENT:TIMES, e.g. 0:0-3,7-9"))?;
    let mut times = Vec::new();
    for part in ranges.split(',').filter(|p| !p.is_empty()) {
        let num = |x: &str| {
            x.trim()
                .parse::<TimePoint>()
                .map_err(|_| format!("`{x}` is not a time point"))
        };
        match part.split_once('-') {
            Some((lo, hi)) => {
                let (lo, hi) = (num(lo)?, num(hi)?);
                if lo > hi {
                    return Err(format!("empty range `{part}`"));
                }
                times.extend(lo..=hi);
            }
            None => times.push(num(part)?),
        }
    }
    Ok((agent.to_owned(), times))
}

/// `eval --json` output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalReport {
    pub formula: String,
    pub agent: String,
    pub time: TimePoint,
    pub value: TruthValue,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub args: Vec<TruthValue>,
    pub value: TruthValue,
}

/// `table --json` output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableReport {
    pub connective: Connective,
    pub entries: Vec<TableEntry>,
}

/// `scenario --output … --json` output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub output: String,
    pub spec: ScenarioSpec,
    pub crossing: Option<Crossing>,
}

struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    json: bool,
}

impl Io<'_> {
    fn line(&mut self, text: impl AsRef<str>) -> Result<(), Failure> {
        writeln!(self.out, "{}", text.as_ref()).map_err(|e| usage(format!("write failed: {e}")))
    }

    fn json<T: Serialize>(&mut self, value: &T) -> Result<(), Failure> {
        let text = serde_json::to_string_pretty(value).expect("reports serialize");
        self.line(text)
    }
}

/// Runs the tool with `FLUXLOGIC_SEED` taken from the environment.
pub fn run_env<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let (mut out, mut err) = (stdout.lock(), stderr.lock());
    let seed = match std::env::var(SEED_ENV) {
        Ok(v) => match v.trim().parse::<u64>() {
            Ok(seed) => Some(seed),
            Err(_) => {
                let _ = writeln!(err, "error: {SEED_ENV}=`{v}` is not an unsigned integer");
                return EXIT_USAGE;
            }
        },
        Err(_) => None,
    };
    run(args, seed, &mut out, &mut err)
}

/// Runs the tool. `seed_override` replaces every scenario seed.
pub fn run<I, T>(
    args: I,
    seed_override: Option<u64>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{rendered}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{rendered}");
                    EXIT_USAGE
                }
            };
        }
    };
    let mut io = Io {
        out,
        err,
        json: cli.json,
    };
    match dispatch(cli.command, seed_override, &mut io) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(io.err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: Command, seed_override: Option<u64>, io: &mut Io<'_>) -> Result<i32, Failure> {
    match command {
        Command::Validate { file } => cmd_validate(&file, io),
        Command::Eval {
            file,
            formula,
            agent,
            time,
        } => cmd_eval(&file, &formula, &agent, time, io),
        Command::Table { connective } => cmd_table(connective, io),
        Command::AnalyzeIc {
            file,
            property,
            hole,
            object,
        } => cmd_analyze_ic(&file, &property, &hole, object.as_deref(), io),
        Command::Gaps {
            file,
            object,
            agent,
            from,
            to,
        } => cmd_gaps(&file, &object, &agent, from, to, io),
        Command::Verify {
            file,
            property,
            hole,
        } => cmd_verify(&file, &property, &hole, io),
        Command::Scenario(args) => cmd_scenario(args, seed_override, io),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<FluxingStructure, Failure> {
    let text = read(path)?;
    FluxingStructure::from_json(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn slot(property: &str, hole: &str) -> Result<PropertySlot, Failure> {
    PropertySlot::parse(property, hole).map_err(|e| usage(format!("property `{property}`: {e}")))
}

fn cmd_validate(file: &Path, io: &mut Io<'_>) -> Result<i32, Failure> {
    let text = read(file)?;
    let doc =
        StructureDoc::from_json(&text).map_err(|e| usage(format!("{}: {e}", file.display())))?;
    let report = validate(&doc);
    if io.json {
        io.json(&report)?;
    } else if report.ok {
        io.line("ok")?;
    } else {
        for v in &report.violations {
            io.line(format!("violation {v}"))?;
        }
    }
    Ok(if report.ok { EXIT_OK } else { EXIT_FINDINGS })
}

fn cmd_eval(
    file: &Path,
    formula: &str,
    agent: &str,
    time: TimePoint,
    io: &mut Io<'_>,
) -> Result<i32, Failure> {
    let structure = load(file)?;
    let phi = parse(formula).map_err(|e| usage(format!("formula {e}")))?;
    let bound = bind(&phi, &structure).map_err(|e| usage(format!("formula `{formula}`: {e}")))?;
    let ctx = Context::named(&structure, agent, time)
        .map_err(|e| usage(format!("{}: {e}", file.display())))?;
    let value = valuation(&ctx, &bound).map_err(|e| Failure {
        code: EXIT_FINDINGS,
        message: e.to_string(),
    })?;
    if io.json {
        io.json(&EvalReport {
            formula: phi.to_string(),
            agent: agent.to_owned(),
            time,
            value,
        })?;
    } else {
        io.line(value.as_str())?;
    }
    Ok(EXIT_OK)
}

fn cmd_table(connective: Connective, io: &mut Io<'_>) -> Result<i32, Failure> {
    if io.json {
        let entries = match connective {
            Connective::Not => TruthValue::ALL
                .iter()
                .map(|&v| TableEntry {
                    args: vec![v],
                    value: kleene_not(v),
                })
                .collect(),
            Connective::And | Connective::Or => {
                let op = if connective == Connective::And {
                    kleene_and
                } else {
                    kleene_or
                };
                TruthValue::ALL
                    .iter()
                    .flat_map(|&v| {
                        TruthValue::ALL.iter().map(move |&w| TableEntry {
                            args: vec![v, w],
                            value: op(v, w),
                        })
                    })
                    .collect()
            }
        };
        io.json(&TableReport {
            connective,
            entries,
        })?;
    } else {
        write!(io.out, "{}", render_table(connective))
            .map_err(|e| usage(format!("write failed: {e}")))?;
    }
    Ok(EXIT_OK)
}

fn cmd_analyze_ic(
    file: &Path,
    property: &str,
    hole: &str,
    object: Option<&str>,
    io: &mut Io<'_>,
) -> Result<i32, Failure> {
    let structure = load(file)?;
    let slot = slot(property, hole)?;
    let names: Vec<String> = match object {
        Some(o) => vec![o.to_owned()],
        None => structure
            .objects()
            .iter()
            .map(|o| o.name().to_owned())
            .collect(),
    };
    let checks = names
        .iter()
        .map(|n| is_ic(&structure, n, &slot))
        .collect::<Result<Vec<IcCheck>, _>>()
        .map_err(|e| usage(format!("{}: {e}", file.display())))?;
    if io.json {
        io.json(&checks)?;
    } else {
        for c in &checks {
            match &c.counterexample {
                None => io.line(format!("ic object={}", c.object))?,
                Some(w) => io.line(format!(
                    "not-ic object={} agent={} time={} next={}",
                    c.object,
                    w.agent,
                    w.time,
                    w.time + 1
                ))?,
            }
        }
    }
    Ok(if checks.iter().all(|c| c.holds) {
        EXIT_OK
    } else {
        EXIT_FINDINGS
    })
}

fn cmd_gaps(
    file: &Path,
    object: &str,
    agent: &str,
    from: TimePoint,
    to: TimePoint,
    io: &mut Io<'_>,
) -> Result<i32, Failure> {
    let structure = load(file)?;
    let fail = |e: crate::interval::GapError| usage(format!("{}: {e}", file.display()));
    let has_gap = has_watching_gap(&structure, object, agent, from, to).map_err(fail)?;
    let report = locate_gaps(&structure, object, agent, from, to).map_err(fail)?;
    debug_assert_eq!(has_gap, !report.is_empty());
    if io.json {
        io.json(&report)?;
    } else {
        io.line(format!(
            "watching-gap={has_gap} object={object} agent={agent} from={from} to={to} gaps={report}"
        ))?;
    }
    Ok(EXIT_OK)
}

fn cmd_verify(file: &Path, property: &str, hole: &str, io: &mut Io<'_>) -> Result<i32, Failure> {
    let structure = load(file)?;
    let slot = slot(property, hole)?;
    let report =
        verify_prop33(&structure, &slot).map_err(|e| usage(format!("{}: {e}", file.display())))?;
    if io.json {
        io.json(&report)?;
    } else {
        for name in &report.ic_objects_checked {
            io.line(format!("ic object={name}"))?;
        }
        for ex in &report.excluded {
            if let Some(w) = &ex.counterexample {
                io.line(format!(
                    "excluded object={} agent={} time={} reason=not-ic",
                    ex.object, w.agent, w.time
                ))?;
            }
        }
        for c in &report.view_changes {
            let ch = &c.change;
            io.line(format!(
                "view-change agent={} object={} from={} to={} values={}->{} gaps={}",
                ch.agent, ch.object, ch.from_time, ch.to_time, ch.from_value, ch.to_value, c.gaps
            ))?;
        }
        for v in &report.violations {
            io.line(format!(
                "violation agent={} object={} from={} to={} reason=no-watching-gap",
                v.agent, v.object, v.from_time, v.to_time
            ))?;
        }
        io.line(format!(
            "summary ic-objects={} excluded={} view-changes={} violations={}",
            report.ic_objects_checked.len(),
            report.excluded.len(),
            report.view_changes.len(),
            report.violations.len()
        ))?;
    }
    Ok(if report.holds() {
        EXIT_OK
    } else {
        EXIT_FINDINGS
    })
}

fn scenario_spec(args: &ScenarioArgs, seed_override: Option<u64>) -> Result<ScenarioSpec, Failure> {
    let mut spec = match &args.spec {
        Some(path) => serde_json::from_str::<ScenarioSpec>(&read(path)?)
            .map_err(|e| usage(format!("{}: {e}", path.display())))?,
        None => {
            let mut watch_pattern: BTreeMap<String, Vec<TimePoint>> = BTreeMap::new();
            for (agent, times) in &args.watch {
                watch_pattern
                    .entry(agent.clone())
                    .or_default()
                    .extend(times);
            }
            ScenarioSpec {
                kind: args.kind.expect("required by clap"),
                threshold: args.threshold.expect("required by clap"),
                horizon: args.horizon.expect("required by clap"),
                watch_pattern,
                offset: args.offset.unwrap_or(0),
                seed: 0,
            }
        }
    };
    if let Some(seed) = args.seed {
        spec.seed = seed;
    }
    if let Some(seed) = seed_override {
        spec.seed = seed;
    }
    Ok(spec)
}

fn site_text(site: &CrossingSite) -> String {
    match site {
        CrossingSite::Witnessed => "witnessed".to_owned(),
        CrossingSite::InGap { gap } => format!("gap {gap}"),
        CrossingSite::Unwatched => "unwatched".to_owned(),
    }
}

fn cmd_scenario(
    args: ScenarioArgs,
    seed_override: Option<u64>,
    io: &mut Io<'_>,
) -> Result<i32, Failure> {
    let spec = scenario_spec(&args, seed_override)?;
    let scenario = generate_scenario(&spec).map_err(|e| usage(format!("scenario: {e}")))?;
    let text = scenario.structure.to_json();
    let Some(path) = &args.output else {
        write!(io.out, "{text}").map_err(|e| usage(format!("write failed: {e}")))?;
        if let Some(c) = &scenario.crossing {
            for (agent, site) in &c.sites {
                let _ = writeln!(
                    io.err,
                    "crossing time={} agent={agent} site={}",
                    c.time,
                    site_text(site)
                );
            }
        }
        return Ok(EXIT_OK);
    };
    std::fs::write(path, &text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    if io.json {
        io.json(&ScenarioReport {
            output: path.display().to_string(),
            spec,
            crossing: scenario.crossing,
        })?;
    } else {
        io.line(format!("wrote {}", path.display()))?;
        if let Some(c) = &scenario.crossing {
            for (agent, site) in &c.sites {
                io.line(format!(
                    "crossing time={} agent={agent} site={}",
                    c.time,
                    site_text(site)
                ))?;
            }
        }
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn watch_syntax() {
        assert_eq!(
            parse_watch("0:0-3,7-9").unwrap(),
            ("0".to_owned(), vec![0, 1, 2, 3, 7, 8, 9])
        );
        assert_eq!(
            parse_watch("peter:5").unwrap(),
            ("peter".to_owned(), vec![5])
        );
        assert_eq!(parse_watch("a:").unwrap(), ("a".to_owned(), vec![]));
        assert!(parse_watch("0-3").is_err());
        assert!(parse_watch("0:4-2").is_err());
        assert!(parse_watch("0:x").is_err());
    }
}
