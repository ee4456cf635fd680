//! Command-line front end for the logicspace workbench.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse error.

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use logicspace::builders::{godel_witness, heyting_from_upsets, FiniteLattice};
use logicspace::connectives::{verify_connectives, Condition, Verdict, Witness};
use logicspace::corpus::{run_suites, CorpusConfig};
use logicspace::duality::{
    analyze_logic_map, functor_g_obj, logic_space, roundtrip_logic, roundtrip_space, Direction, DualityReport,
    LogicMap, MapAnalysis, Mode,
};
use logicspace::io::{emit_value, export_dot, parse_document, parse_document_at, to_value, Document, DotInput};
use logicspace::{AbstractLogic, ExprSet};

#[derive(Parser)]
#[command(name = "logicspace", version, about = "Finite abstract logics and their prime-theory spaces")]
struct Cli {
    /// Input document; standard input when omitted.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Check the connective conditions and report the logic class.
    Classify,
    /// List prime, totally prime and maximal theories.
    Spectrum,
    /// Emit the prime-theory space of a logic.
    Space,
    /// Logic to its space, or space to its filter logic.
    Dualize,
    /// Verify the round trip through both functors.
    Roundtrip {
        /// Logic map or point map whose commuting square is checked.
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// Analyse a logic map.
    CheckMap,
    /// Run every verification suite over the built-in instances.
    Corpus {
        #[arg(long, default_value_t = 4)]
        max_points: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, env = "WORKBENCH_JOBS", default_value_t = 1)]
        jobs: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Search a Heyting algebra for a failure of ¬(¬p∧¬q) = ¬¬p∨¬¬q.
    GodelWitness,
    /// Hasse diagram of a poset, lattice, space or logic space.
    ExportDot,
}

/// A finished command: rendered output and whether every check passed.
struct Outcome {
    text: String,
    ok: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            if let Err(e) = write_output(&cli, &outcome.text) {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
            if outcome.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Verification(e)) => {
            eprintln!("verification failed: {e:#}");
            ExitCode::from(1)
        }
    }
}

enum Failure {
    Usage(anyhow::Error),
    Verification(anyhow::Error),
}

fn usage(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Usage(e.into())
}

fn verification(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Verification(e.into())
}

fn write_output(cli: &Cli, text: &str) -> Result<()> {
    match &cli.output {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(out.flush()?)
        }
    }
}

fn load(cli: &Cli) -> Result<Document, Failure> {
    match &cli.input {
        Some(p) => parse_document_at(p).map_err(usage),
        None => {
            let mut text = String::new();
            std::io::stdin().read_to_string(&mut text).context("reading standard input").map_err(usage)?;
            parse_document(&text).map_err(usage)
        }
    }
}

fn expect_logic(doc: Document) -> Result<AbstractLogic, Failure> {
    match doc {
        Document::Logic(l) => Ok(l),
        d => Err(usage(anyhow!("expected a logic document, found {}", d.kind()))),
    }
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let format = cli.format;
    match &cli.command {
        Command::Classify => {
            let logic = expect_logic(load(cli)?)?;
            report(classification(&logic), true, format)
        }
        Command::Spectrum => {
            let logic = expect_logic(load(cli)?)?;
            report(spectrum(&logic), true, format)
        }
        Command::Space => {
            let logic = expect_logic(load(cli)?)?;
            let space = logic_space(&logic).map_err(verification)?;
            document(&Document::Space(space), format)
        }
        Command::Dualize => match load(cli)? {
            Document::Logic(l) => document(&Document::Space(logic_space(&l).map_err(verification)?), format),
            Document::Space(s) => document(&Document::Logic(functor_g_obj(&s).map_err(verification)?), format),
            d => Err(usage(anyhow!("dualize expects a logic or a space, found {}", d.kind()))),
        },
        Command::Roundtrip { map } => {
            let extra = match map {
                Some(p) => Some(parse_document_at(p).map_err(usage)?),
                None => None,
            };
            let r = match (load(cli)?, extra) {
                (Document::Logic(l), None) => roundtrip_logic(&l, None),
                (Document::Logic(l), Some(Document::LogicMap(h))) => roundtrip_logic(&l, Some(&h)),
                (Document::LogicMap(h), None) => roundtrip_logic(&h.source, Some(&h)),
                (Document::Space(s), None) => roundtrip_space(&s, None),
                (Document::Space(s), Some(Document::PointMap(f))) => roundtrip_space(&s, Some(&f)),
                (Document::PointMap(f), None) => roundtrip_space(&f.source, Some(&f)),
                (d, m) => {
                    return Err(usage(anyhow!(
                        "roundtrip cannot combine {} with {}",
                        d.kind(),
                        m.map_or("nothing", |m| m.kind())
                    )))
                }
            }
            .map_err(verification)?;
            let ok = r.ok();
            report(duality(&r), ok, format)
        }
        Command::CheckMap => match load(cli)? {
            Document::LogicMap(h) => {
                let a = analyze_logic_map(&h);
                let ok = a.is_logic_map && a.is_stable && a.is_normal && a.is_l_surjective && a.is_isomorphism;
                report(map_analysis(&h, &a), ok, format)
            }
            d => Err(usage(anyhow!("check-map expects a logic_map document, found {}", d.kind()))),
        },
        Command::Corpus { max_points, seed, jobs, samples } => {
            let config = CorpusConfig { max_points: *max_points, seed: *seed, jobs: *jobs, samples: *samples };
            let results = run_suites(&config).map_err(usage)?;
            let ok = results.iter().all(|r| r.passed());
            let value = json!({
                "passed": ok,
                "suites": results.iter().map(|r| json!({
                    "name": r.name,
                    "passed": r.passed(),
                    "checked": r.checked,
                    "failures": r.failures,
                })).collect::<Vec<_>>(),
            });
            let text = match format.unwrap_or(Format::Text) {
                Format::Json => emit_value(&value),
                Format::Dot => return Err(usage(anyhow!("corpus has no dot rendering"))),
                Format::Text => {
                    let mut t = String::new();
                    for r in &results {
                        let verdict = if r.passed() { "pass" } else { "FAIL" };
                        t.push_str(&format!("{}: {verdict} ({} checks)\n", r.name, r.checked));
                        for f in &r.failures {
                            t.push_str(&format!("  {f}\n"));
                        }
                    }
                    t.push_str(&format!("passed: {ok}\n"));
                    t
                }
            };
            Ok(Outcome { text, ok })
        }
        Command::GodelWitness => {
            let lattice: FiniteLattice = match load(cli)? {
                Document::Poset(p) => heyting_from_upsets(&p).map_err(verification)?,
                Document::Lattice(l) => l,
                d => return Err(usage(anyhow!("godel-witness expects a poset or lattice, found {}", d.kind()))),
            };
            let w = godel_witness(&lattice).map_err(verification)?;
            let names = lattice.names();
            let value = match w {
                Some(w) => json!({
                    "witness": true,
                    "p": names[w.p],
                    "q": names[w.q],
                    "lhs": names[w.lhs],
                    "rhs": names[w.rhs],
                }),
                None => json!({ "witness": false }),
            };
            report(value, true, format)
        }
        Command::ExportDot => {
            let text = match load(cli)? {
                Document::Poset(p) => export_dot(DotInput::Poset(&p)),
                Document::Space(s) => export_dot(DotInput::Space(&s)),
                Document::Logic(l) => export_dot(DotInput::Space(&logic_space(&l).map_err(verification)?)),
                Document::Lattice(l) => {
                    let n = l.len();
                    let pairs: Vec<(usize, usize)> = (0..n)
                        .flat_map(|a| (0..n).map(move |b| (a, b)))
                        .filter(|&(a, b)| a != b && l.leq(a, b))
                        .collect();
                    let order = logicspace::builders::FinitePoset::from_pairs(l.names().to_vec(), &pairs)
                        .map_err(verification)?;
                    export_dot(DotInput::Poset(&order))
                }
                d => return Err(usage(anyhow!("export-dot cannot draw {}", d.kind()))),
            };
            if matches!(format, Some(Format::Json) | Some(Format::Text)) {
                return Err(usage(anyhow!("export-dot only renders dot")));
            }
            Ok(Outcome { text, ok: true })
        }
    }
}

fn document(doc: &Document, format: Option<Format>) -> Result<Outcome, Failure> {
    match format.unwrap_or(Format::Json) {
        Format::Json => Ok(Outcome { text: emit_value(&to_value(doc)), ok: true }),
        Format::Text => Ok(Outcome { text: render_text(&to_value(doc)), ok: true }),
        Format::Dot => match doc {
            Document::Space(s) => Ok(Outcome { text: export_dot(DotInput::Space(s)), ok: true }),
            d => Err(usage(anyhow!("no dot rendering for {}", d.kind()))),
        },
    }
}

fn report(value: Value, ok: bool, format: Option<Format>) -> Result<Outcome, Failure> {
    let text = match format.unwrap_or(Format::Text) {
        Format::Json => emit_value(&value),
        Format::Text => render_text(&value),
        Format::Dot => return Err(usage(anyhow!("this report has no dot rendering"))),
    };
    Ok(Outcome { text, ok })
}

/// `key: value` lines; nested objects use dotted keys.
fn render_text(value: &Value) -> String {
    fn walk(prefix: &str, v: &Value, out: &mut String) {
        match v {
            Value::Object(obj) => {
                for (k, v) in obj {
                    let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&key, v, out);
                }
            }
            Value::String(s) => out.push_str(&format!("{prefix}: {s}\n")),
            Value::Null => out.push_str(&format!("{prefix}: none\n")),
            v => out.push_str(&format!("{prefix}: {v}\n")),
        }
    }
    let mut out = String::new();
    walk("", value, &mut out);
    out
}

fn set_name(logic: &AbstractLogic, s: &ExprSet) -> String {
    s.display_with(logic.expr_names())
}

fn classification(logic: &AbstractLogic) -> Value {
    let r = verify_connectives(logic);
    let mut conditions = Map::new();
    for c in Condition::ALL {
        let text = match r.verdict(c) {
            Verdict::Holds { formula: Some(e) } => format!("holds ({})", logic.name(*e)),
            Verdict::Holds { formula: None } => "holds".to_string(),
            Verdict::NotApplicable { missing } => format!("not applicable (no {missing})"),
            Verdict::Fails(Witness::Pair { theory, a, b }) => {
                format!("fails at theory {} with {}, {}", set_name(logic, theory), logic.name(*a), logic.name(*b))
            }
            Verdict::Fails(Witness::Single { theory, a }) => {
                format!("fails at theory {} with {}", set_name(logic, theory), logic.name(*a))
            }
            Verdict::Fails(Witness::NoSuchFormula) => "fails (no such formula)".to_string(),
        };
        conditions.insert(c.label().to_string(), json!(text));
    }
    json!({
        "class": r.class.to_string(),
        "distributive": r.distributive,
        "bounded": r.bounded,
        "intuitionistic": r.intuitionistic,
        "classical": r.classical,
        "maximal_equals_totally_prime": r.maximal_equals_totally_prime,
        "conditions": conditions,
    })
}

fn spectrum(logic: &AbstractLogic) -> Value {
    let s = logic.spectrum();
    let names = |v: &[ExprSet]| v.iter().map(|t| set_name(logic, t)).collect::<Vec<_>>().join(" ");
    json!({
        "theories": names(logic.theories().theories()),
        "primes": names(&s.primes),
        "totally_primes": names(&s.totally_primes),
        "maximals": names(&s.maximals),
        "minimal_generators": names(&s.minimal_generators),
    })
}

fn map_analysis(h: &LogicMap, a: &MapAnalysis) -> Value {
    let tset = |s: &Option<ExprSet>| s.map(|s| set_name(&h.target, &s));
    json!({
        "is_logic_map": a.is_logic_map,
        "is_stable": a.is_stable,
        "is_normal": a.is_normal,
        "is_l_surjective": a.is_l_surjective,
        "is_isomorphism": a.is_isomorphism,
        "witnesses": {
            "logic_map": tset(&a.logic_map_witness),
            "stable": tset(&a.stable_witness),
            "normal": a.normal_witness.map(|s| set_name(&h.source, &s)),
            "l_surjective": a.surjective_witness.map(|b| h.target.name(b).to_string()),
        },
    })
}

fn duality(r: &DualityReport) -> Value {
    let detail: Map<String, Value> = r.detail.iter().map(|(a, b)| (a.clone(), json!(b))).collect();
    json!({
        "direction": match r.direction {
            Direction::LogicRoundtrip => "logic",
            Direction::SpaceRoundtrip => "space",
        },
        "mode": match r.mode {
            Mode::Intuitionistic => "intuitionistic",
            Mode::Distributive => "distributive",
        },
        "iso_ok": r.iso_ok,
        "square_ok": r.square_ok,
        "detail": detail,
        "failures": r.failures,
    })
}
