//! The `treeauto` command line. Plain output is the bare JSON payload;
//! `--json` wraps it in an [`AnalysisReport`] envelope.

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;
use serde_json::{json, Value};

use crate::activity::{self, classify_activity};
use crate::automaton::Automorphism;
use crate::catalog;
use crate::error::Error;
use crate::freeness;
use crate::group::GeneratorSet;
use crate::nucleus;
use crate::report::{self, big_ratio_json, big_uint_json, AnalysisReport, OrderedMap};
use crate::schreier;
use crate::tree::{BoundaryPoint, Vertex};
use crate::word::GroupWord;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "treeauto", version, about = "Automorphisms of rooted trees given by finite automata")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Built-in generating set.
    #[arg(long, global = true, conflicts_with = "file")]
    pub catalog: Option<String>,
    /// Generating set in the automaton text format.
    #[arg(long, global = true)]
    pub file: Option<PathBuf>,
    /// Group word, e.g. "a b^-1" or "a*b^2".
    #[arg(long, global = true)]
    pub word: Option<String>,
    /// Vertex as digits ("011") or a comma list ("0,1,1").
    #[arg(long, global = true)]
    pub vertex: Option<String>,
    /// Eventually periodic point written PRE:PER; repeatable for `trichotomy`.
    #[arg(long, global = true)]
    pub point: Vec<String>,
    /// Tree level for theta, measure, schreier and folner.
    #[arg(long, global = true)]
    pub level: Option<usize>,
    /// Word length bound for searches.
    #[arg(long = "max-len", global = true)]
    pub max_len: Option<usize>,
    /// Cap on elements or vertices explored.
    #[arg(long, global = true)]
    pub budget: Option<usize>,
    /// Nucleus size cap.
    #[arg(long = "max-size", global = true)]
    pub max_size: Option<usize>,
    /// Nucleus iteration cap.
    #[arg(long = "max-depth", global = true)]
    pub max_depth: Option<usize>,
    /// Write the level graph as DOT.
    #[arg(long, global = true)]
    pub dot: Option<PathBuf>,
    /// Write the nucleus as a machine file.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Wrap the payload in a versioned report.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Image of a vertex or boundary point under a word.
    Eval,
    /// Activity class of each generator (or of --word).
    Classify,
    /// θ(n) for n = 0..=level; relative to the orbit of --point if given.
    Theta,
    /// Exact measure of the singular set and its level approximations.
    Measure,
    /// Nucleus of a contracting group.
    Nucleus,
    /// Germ classes at --point.
    Germs,
    /// Level Schreier graph.
    Schreier,
    /// Følner candidate at --level along --point.
    Folner,
    /// Relators up to --max-len.
    Relations,
    /// Stabilizer words of --point up to --max-len.
    Stabilizer,
    /// Evidence for the free subgroup trichotomy at each --point.
    Trichotomy,
    /// Built-in generating sets.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum CatalogAction {
    List,
    /// Print an entry in the automaton text format.
    Dump { name: String },
}

/// What a run printed and its exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type Run<T> = std::result::Result<T, Failure>;

/// A payload: either JSON or raw text (machine files).
enum Payload {
    Json(Value),
    Text(String),
}

struct Done {
    payload: Payload,
    budget_exhausted: bool,
}

impl Done {
    fn json(v: impl Serialize, budget_exhausted: bool) -> Run<Done> {
        Ok(Done {
            payload: Payload::Json(serde_json::to_value(v).map_err(|e| Failure::Usage(e.to_string()))?),
            budget_exhausted,
        })
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code, stdout: String::new(), stderr: text }
            } else {
                Outcome { code, stdout: text, stderr: String::new() }
            };
        }
    };
    let command = command_name(&cli.command);
    let input = match &cli.command {
        Command::Catalog { .. } => Ok(String::new()),
        _ => load_input(&cli),
    };
    let result = input.and_then(|text| dispatch(&cli, &text).map(|d| (text, d)));
    match result {
        Ok((text, done)) => {
            let body = match (cli.json, done.payload) {
                (true, Payload::Json(v)) => to_line(&AnalysisReport::new(command, &text, done.budget_exhausted, v)),
                (true, Payload::Text(t)) => to_line(&AnalysisReport::new(command, &text, done.budget_exhausted, t)),
                (false, Payload::Json(v)) => to_line(&v),
                (false, Payload::Text(t)) => t,
            };
            Outcome {
                code: if done.budget_exhausted { EXIT_BUDGET } else { EXIT_OK },
                stdout: body,
                stderr: if done.budget_exhausted {
                    "budget exhausted; results are partial\n".into()
                } else {
                    String::new()
                },
            }
        }
        Err(Failure::Usage(m)) => Outcome {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: {m}\n"),
        },
        Err(Failure::Budget(m)) => Outcome {
            code: EXIT_BUDGET,
            stdout: to_line(&json!({"budget_exhausted": true, "error": m})),
            stderr: format!("error: {m}\n"),
        },
    }
}

fn to_line(v: &impl Serialize) -> String {
    let mut s = serde_json::to_string(v).expect("reports serialize");
    s.push('\n');
    s
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Eval => "eval",
        Command::Classify => "classify",
        Command::Theta => "theta",
        Command::Measure => "measure",
        Command::Nucleus => "nucleus",
        Command::Germs => "germs",
        Command::Schreier => "schreier",
        Command::Folner => "folner",
        Command::Relations => "relations",
        Command::Stabilizer => "stabilizer",
        Command::Trichotomy => "trichotomy",
        Command::Catalog { .. } => "catalog",
    }
}

fn load_input(cli: &Cli) -> Run<String> {
    match (&cli.catalog, &cli.file) {
        (Some(name), _) => Ok(catalog::builtin(name)?.source.to_string()),
        (None, Some(path)) => std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display()))),
        (None, None) => Err(Failure::Usage("one of --catalog or --file is required".into())),
    }
}

fn word(cli: &Cli) -> Run<Option<GroupWord>> {
    cli.word.as_deref().map(|w| w.parse::<GroupWord>().map_err(Failure::from)).transpose()
}

fn points(cli: &Cli) -> Run<Vec<BoundaryPoint>> {
    cli.point
        .iter()
        .map(|p| p.parse::<BoundaryPoint>().map_err(Failure::from))
        .collect()
}

fn one_point(cli: &Cli, default: Option<&str>) -> Run<BoundaryPoint> {
    let mut ps = points(cli)?;
    match (ps.len(), default) {
        (1, _) => Ok(ps.remove(0)),
        (0, Some(d)) => Ok(d.parse()?),
        (0, None) => Err(Failure::Usage("--point is required".into())),
        _ => Err(Failure::Usage("give --point once".into())),
    }
}

/// `(name, element)` pairs: the generators, or `--word` alone.
fn targets(cli: &Cli, gens: &GeneratorSet) -> Run<Vec<(String, Automorphism)>> {
    match word(cli)? {
        Some(w) => Ok(vec![(w.to_string(), gens.evaluate(&w)?)]),
        None => Ok(gens.iter().map(|(n, g)| (n.to_string(), g.clone())).collect()),
    }
}

fn dispatch(cli: &Cli, text: &str) -> Run<Done> {
    if let Command::Catalog { action } = &cli.command {
        return catalog_command(action);
    }
    let gens = GeneratorSet::parse(text)?;
    let budget = cli.budget.unwrap_or(schreier::DEFAULT_BUDGET);
    match &cli.command {
        Command::Eval => {
            let w = word(cli)?.ok_or_else(|| Failure::Usage("--word is required".into()))?;
            let g = gens.evaluate(&w)?;
            match (&cli.vertex, cli.point.is_empty()) {
                (Some(v), true) => {
                    let v: Vertex = v.parse()?;
                    Done::json(g.apply(&v)?.to_string(), false)
                }
                (None, false) => Done::json(g.apply_boundary(&one_point(cli, None)?)?.to_string(), false),
                _ => Err(Failure::Usage("give exactly one of --vertex or --point".into())),
            }
        }
        Command::Classify => {
            let mut out = OrderedMap::new();
            for (name, g) in targets(cli, &gens)? {
                out.insert(name, classify_activity(&g).kind);
            }
            Done::json(out, false)
        }
        Command::Theta => {
            let level = cli.level.unwrap_or(10);
            let seed = points(cli)?;
            let mut out = OrderedMap::new();
            for (name, g) in targets(cli, &gens)? {
                let values: Vec<Value> = match seed.as_slice() {
                    [] => activity::theta_sequence(&g, level).iter().map(big_uint_json).collect(),
                    [w] => (0..=level)
                        .map(|n| activity::theta_relative(&gens, &g, w, n, budget).map(Value::from))
                        .collect::<Result<_, _>>()?,
                    _ => return Err(Failure::Usage("give --point at most once".into())),
                };
                out.insert(name, values);
            }
            Done::json(out, false)
        }
        Command::Measure => {
            let level = cli.level.unwrap_or(14);
            let mut out = OrderedMap::new();
            for (name, g) in targets(cli, &gens)? {
                let k = BigRational::from_integer(g.arity().into());
                let scale = (0..level).fold(BigRational::one(), |acc, _| acc * &k);
                let tail = BigRational::from_integer(activity::theta(&g, level).into()) / scale;
                out.insert(
                    name,
                    json!({
                        "singular_measure": big_ratio_json(&activity::singular_measure(&g)),
                        "empirical": activity::empirical_measure_sequence(&g, level)
                            .iter()
                            .map(big_ratio_json)
                            .collect::<Vec<_>>(),
                        "tail_bound": big_ratio_json(&tail),
                    }),
                );
            }
            Done::json(out, false)
        }
        Command::Nucleus => {
            let n = nucleus::nucleus(&gens, cli.max_size.unwrap_or(64), cli.max_depth.unwrap_or(10))?;
            let as_gens = nucleus::nucleus_generators(&gens, &n)?;
            let machine = as_gens.to_text();
            if let Some(path) = &cli.output {
                std::fs::write(path, &machine)
                    .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
            }
            let mut members = vec!["e".to_string()];
            members.extend(as_gens.names().iter().cloned());
            Done::json(
                json!({
                    "status": n.status,
                    "size": n.size(),
                    "generations": n.generations,
                    "stabilization_depth": n.stabilization_depth,
                    "elements": members,
                    "machine": machine,
                }),
                !n.is_found(),
            )
        }
        Command::Germs => {
            let w = one_point(cli, None)?;
            let n = nucleus::nucleus(&gens, cli.max_size.unwrap_or(64), cli.max_depth.unwrap_or(10))?;
            if !n.is_found() {
                return Done::json(json!({"nucleus": n, "germs": Value::Null}), true);
            }
            let table = nucleus::germ_group(&gens, &n, &w, cli.max_len.unwrap_or(6), budget)?;
            Done::json(
                json!({
                    "point": table.point,
                    "order": table.order(),
                    "nucleus_size": n.size(),
                    "representatives": table.representatives,
                    "multiplication": table.multiplication,
                    "search_length": table.search_length,
                    "complete": table.complete,
                }),
                false,
            )
        }
        Command::Schreier => {
            let seed = match (&cli.vertex, cli.level) {
                (Some(v), None) => v.parse::<Vertex>()?,
                (None, Some(n)) => Vertex::new(vec![0; n]),
                (None, None) => Vertex::new(vec![0; 3]),
                _ => return Err(Failure::Usage("give --vertex or --level, not both".into())),
            };
            let graph = schreier::schreier_level_graph(&gens, &seed, budget)?;
            if let Some(path) = &cli.dot {
                std::fs::write(path, report::export_dot(&graph))
                    .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
            }
            let components: Vec<Vec<String>> = schreier::gamma_prime_components(&graph)
                .iter()
                .map(|c| c.iter().map(|v| v.to_string()).collect())
                .collect();
            Done::json(
                json!({
                    "level": graph.level,
                    "generators": graph.generators,
                    "vertices": graph.vertices,
                    "edges": graph.edges,
                    "nontrivial_edges": graph.nontrivial_edges(),
                    "trivial_section_components": components,
                }),
                false,
            )
        }
        Command::Folner => {
            let w = one_point(cli, Some(":0"))?;
            let level = cli.level.unwrap_or(6);
            let best = schreier::folner_candidate(&gens, &w, level, budget)?;
            let profile = schreier::isoperimetric_profile(&gens, &w, level, budget)?;
            Done::json(json!({"report": best, "profile": profile}), false)
        }
        Command::Relations => {
            let r = freeness::find_relations(
                &gens,
                cli.max_len.unwrap_or(freeness::DEFAULT_RELATION_LENGTH),
                cli.budget.unwrap_or(freeness::DEFAULT_SEARCH_BUDGET),
            )?;
            let exhausted = !r.complete;
            Done::json(r, exhausted)
        }
        Command::Stabilizer => {
            let w = one_point(cli, None)?;
            let r = freeness::stabilizer_search(
                &gens,
                &w,
                cli.max_len.unwrap_or(freeness::DEFAULT_STABILIZER_LENGTH),
                cli.budget.unwrap_or(freeness::DEFAULT_SEARCH_BUDGET),
            )?;
            let exhausted = !r.complete;
            Done::json(r, exhausted)
        }
        Command::Trichotomy => {
            let mut ps = points(cli)?;
            if ps.is_empty() {
                ps = vec![BoundaryPoint::constant(0), BoundaryPoint::constant(1)];
            }
            let e = freeness::free_subgroup_certificate(
                &gens,
                &ps,
                cli.max_len.unwrap_or(freeness::DEFAULT_RELATION_LENGTH),
                cli.budget.unwrap_or(freeness::DEFAULT_SEARCH_BUDGET),
            )?;
            let exhausted = !e.complete;
            Done::json(e, exhausted)
        }
        Command::Catalog { .. } => unreachable!("handled above"),
    }
}

fn catalog_command(action: &CatalogAction) -> Run<Done> {
    match action {
        CatalogAction::List => {
            let entries: Vec<Value> = catalog::all()
                .iter()
                .map(|e| {
                    json!({
                        "name": e.name,
                        "alphabet": e.generators.alphabet().size(),
                        "generators": e.generators.names(),
                        "provenance": e.provenance,
                    })
                })
                .collect();
            Done::json(entries, false)
        }
        CatalogAction::Dump { name } => Ok(Done {
            payload: Payload::Text(catalog::builtin(name)?.generators.to_text()),
            budget_exhausted: false,
        }),
    }
}
