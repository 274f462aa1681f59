//! Command-line front end. [`dispatch`] parses an argument vector, runs the
//! requested computation, and returns both renderings plus an exit code.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::boolean::BooleanFunction;
use crate::dyadic::{ratio_string, Dyadic};
use crate::error::{Error, Result};
use crate::family::family_ratio;
use crate::graphs::{chromatic_number, edge_bound, fracch_bound, SupportGraph};
use crate::qtf::{igl, qtf_representable, QuadraticPolynomial, Representability};
use crate::search::{hunt_n5, max_influence_per_support, verify_conjecture_small, ConfirmedQtf};
use crate::spectral::wht;

/// Environment variable overriding `--workers`.
pub const WORKERS_ENV: &str = "PTFLAB_WORKERS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_INTERNAL: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "ptflab", version, about = "Exact influence analysis of quadratic threshold functions")]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Per-coordinate and total influence of a truth table.
    Influence(TableArgs),
    /// Nonzero Fourier coefficients of a truth table.
    Fourier(TableArgs),
    /// Decide whether a truth table is a QTF, optionally on a given support.
    QtfCheck {
        #[command(flatten)]
        table: TableArgs,
        #[arg(long)]
        support: Option<PathBuf>,
    },
    /// The conjectured maximum I_GL(n, d).
    Igl {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
    },
    /// Influence of the family member f_n against I_GL(n, 2).
    Family {
        #[arg(long)]
        n: usize,
    },
    /// Chromatic data and influence bounds for a support graph.
    Bounds {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Screened search over 5-variable functions symmetric in the last two.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long = "sym-last")]
        sym_last: usize,
        #[arg(long, default_value = "25/8")]
        threshold: String,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Maximum QTF influence for every 4-vertex support.
    Table1 {
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Exhaustive check that no QTF on n <= 4 variables beats I_GL(n, 2).
    VerifySmall {
        #[arg(long)]
        n: usize,
    },
}

#[derive(clap::Args, Debug)]
struct TableArgs {
    /// Truth table in hex; bit k is +1 iff f is +1 at input index k.
    #[arg(long)]
    table: String,
    #[arg(long)]
    n: usize,
}

/// Outcome of one invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct CommandResult {
    /// One element per output line for `search`, a single document otherwise.
    pub json: Vec<Value>,
    pub text: String,
    /// Progress and summary lines meant for stderr.
    pub diagnostics: String,
    pub exit_code: i32,
    pub json_mode: bool,
}

impl CommandResult {
    fn ok(json: Value, text: String) -> Self {
        CommandResult {
            json: vec![json],
            text,
            diagnostics: String::new(),
            exit_code: EXIT_OK,
            json_mode: false,
        }
    }

    fn failure(message: String, exit_code: i32) -> Self {
        CommandResult {
            json: vec![json!({ "error": message })],
            text: String::new(),
            diagnostics: message,
            exit_code,
            json_mode: false,
        }
    }

    /// What goes to stdout.
    pub fn stdout(&self) -> String {
        if self.exit_code != EXIT_OK {
            return String::new();
        }
        if self.json_mode {
            self.json
                .iter()
                .map(|v| format!("{v}\n"))
                .collect()
        } else {
            self.text.clone()
        }
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Internal(_) => EXIT_INTERNAL,
        _ => EXIT_INVALID,
    }
}

pub fn dispatch<I, T>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let mut r = CommandResult::failure(e.render().to_string(), code);
            if code == EXIT_OK {
                r.text = e.render().to_string();
                r.diagnostics.clear();
            }
            return r;
        }
    };
    let json_mode = cli.json;
    let mut result = match run(cli.command) {
        Ok(r) => r,
        Err(e) => CommandResult::failure(format!("error: {e}"), exit_code_for(&e)),
    };
    result.json_mode |= json_mode;
    result
}

/// Six significant digits.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

fn exact(d: &Dyadic) -> String {
    format!("{d} ({})", d.to_decimal())
}

fn parse_table(args: &TableArgs) -> Result<BooleanFunction> {
    BooleanFunction::from_hex(args.n, &args.table)
}

fn resolve_workers(flag: Option<usize>) -> Result<usize> {
    if let Ok(v) = std::env::var(WORKERS_ENV) {
        return match v.trim().parse::<usize>() {
            Ok(w) if w > 0 => Ok(w),
            _ => Err(Error::InvalidArgument(format!(
                "{WORKERS_ENV} must be a positive integer, got {v:?}"
            ))),
        };
    }
    match flag {
        Some(0) => Err(Error::InvalidArgument("--workers must be positive".into())),
        Some(w) => Ok(w),
        None => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

fn witness_json(q: &QuadraticPolynomial) -> Value {
    Value::Array(
        q.integer_coefficients()
            .iter()
            .map(|c| c.to_i64().map_or_else(|| json!(c.to_string()), |v| json!(v)))
            .collect(),
    )
}

fn confirmed_json(c: &ConfirmedQtf) -> Value {
    json!({
        "table_hex": c.table.to_hex(),
        "n": c.table.arity(),
        "influence": c.influence.to_string(),
        "witness": witness_json(&c.witness),
    })
}

fn set_string(mask: u64) -> String {
    let members: Vec<String> = (0..64)
        .filter(|b| mask >> b & 1 == 1)
        .map(|b| (b + 1).to_string())
        .collect();
    format!("{{{}}}", members.join(","))
}

fn run(command: Command) -> Result<CommandResult> {
    match command {
        Command::Influence(args) => {
            let f = parse_table(&args)?;
            let inf = f.influences();
            let total = f.total_influence();
            let mut text = String::new();
            for (i, v) in inf.iter().enumerate() {
                text.push_str(&format!("Inf_{} = {}\n", i + 1, exact(v)));
            }
            text.push_str(&format!("total = {}\n", exact(&total)));
            let json = json!({
                "n": f.arity(),
                "table_hex": f.to_hex(),
                "influences": inf.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                "total": total.to_string(),
            });
            Ok(CommandResult::ok(json, text))
        }
        Command::Fourier(args) => {
            let f = parse_table(&args)?;
            let s = wht(&f)?;
            let coeffs: Vec<(u64, Dyadic)> = s.nonzero().collect();
            let text = coeffs
                .iter()
                .map(|(m, v)| format!("{} {}\n", set_string(*m), exact(v)))
                .collect();
            let json = json!({
                "n": f.arity(),
                "table_hex": f.to_hex(),
                "coefficients": coeffs.iter().map(|(m, v)| json!({
                    "set": (0..64).filter(|b| m >> b & 1 == 1).map(|b| b + 1).collect::<Vec<u32>>(),
                    "value": v.to_string(),
                })).collect::<Vec<_>>(),
            });
            Ok(CommandResult::ok(json, text))
        }
        Command::QtfCheck { table, support } => {
            let f = parse_table(&table)?;
            let graph = match support {
                Some(path) => {
                    let text = std::fs::read_to_string(&path).map_err(|e| {
                        Error::InvalidArgument(format!("cannot read {}: {e}", path.display()))
                    })?;
                    Some(SupportGraph::parse(&text)?)
                }
                None => None,
            };
            let verdict = qtf_representable(&f, graph.as_ref())?;
            let (text, json) = match &verdict {
                Representability::Feasible(q) => (
                    format!(
                        "FEASIBLE\ncoefficients: {}\nwitness: sgn({q})\n",
                        witness_json(q)
                    ),
                    json!({
                        "table_hex": f.to_hex(),
                        "n": f.arity(),
                        "representable": true,
                        "witness": witness_json(q),
                    }),
                ),
                Representability::Infeasible(y) => {
                    let cert: Vec<String> = y.iter().map(ratio_string).collect();
                    (
                        format!("INFEASIBLE\ncertificate: [{}]\n", cert.join(", ")),
                        json!({
                            "table_hex": f.to_hex(),
                            "n": f.arity(),
                            "representable": false,
                            "farkas": cert,
                        }),
                    )
                }
            };
            Ok(CommandResult::ok(json, text))
        }
        Command::Igl { n, d } => {
            let v = igl(n, d)?;
            Ok(CommandResult::ok(
                json!({ "n": n, "d": d, "igl": v.to_string(), "decimal": v.to_decimal() }),
                format!("{}\n", exact(&v)),
            ))
        }
        Command::Family { n } => {
            let r = family_ratio(n)?;
            let excess = &r.ratio - num_rational::BigRational::from_integer(1.into());
            let text = format!(
                "I[f_n] = {}\nI_GL(n,2) = {}\nratio - 1 = {}\n",
                exact(&r.influence),
                exact(&r.igl),
                ratio_string(&excess)
            );
            let json = json!({
                "n": n,
                "influence": r.influence.to_string(),
                "influence_decimal": r.influence.to_decimal(),
                "igl": r.igl.to_string(),
                "igl_decimal": r.igl.to_decimal(),
                "ratio_minus_one": ratio_string(&excess),
            });
            Ok(CommandResult::ok(json, text))
        }
        Command::Bounds { graph } => {
            let text = std::fs::read_to_string(&graph).map_err(|e| {
                Error::InvalidArgument(format!("cannot read {}: {e}", graph.display()))
            })?;
            let g = SupportGraph::parse(&text)?;
            let (chi, _) = chromatic_number(&g)?;
            let frac = fracch_bound(&g)?;
            let edge = edge_bound(&g);
            let text = format!(
                "n = {}\n|E| = {}\nchi = {}\nchi_f = {}\nfractional bound = {} (sqrt of {})\nedge bound = {} (sqrt of {} + sqrt({}))\n",
                g.num_vertices(),
                g.num_edges(),
                chi,
                ratio_string(&frac.chi_f),
                sig6(frac.value),
                ratio_string(&frac.radicand),
                sig6(edge.value),
                edge.n,
                edge.inner_radicand,
            );
            let json = json!({
                "n": g.num_vertices(),
                "edges": g.num_edges(),
                "chi": chi,
                "chi_f": ratio_string(&frac.chi_f),
                "fracch_bound": { "value": sig6(frac.value), "radicand": ratio_string(&frac.radicand) },
                "edge_bound": {
                    "value": sig6(edge.value),
                    "radicand": format!("{} + sqrt({})", edge.n, edge.inner_radicand),
                },
            });
            Ok(CommandResult::ok(json, text))
        }
        Command::Search {
            n,
            sym_last,
            threshold,
            workers,
        } => {
            if n != 5 || sym_last != 2 {
                return Err(Error::InvalidArgument(
                    "search supports --n 5 --sym-last 2 only; use verify-small for n <= 4".into(),
                ));
            }
            let threshold: Dyadic = threshold.parse()?;
            let workers = resolve_workers(workers)?;
            let report = hunt_n5(&threshold, workers)?;
            let lines: Vec<Value> = report.confirmed.iter().map(confirmed_json).collect();
            let diagnostics = format!(
                "{}: scanned {}, threshold {}, survivors {}, LPs {}, confirmed {}, workers {}, {:.1}s\n",
                report.space,
                report.scanned,
                report.threshold,
                report.survivors,
                report.lp_calls,
                report.confirmed.len(),
                report.workers,
                report.elapsed.as_secs_f64()
            );
            let text = lines.iter().map(|v| format!("{v}\n")).collect();
            Ok(CommandResult {
                json: lines,
                text,
                diagnostics,
                exit_code: EXIT_OK,
                json_mode: true,
            })
        }
        Command::Table1 { workers } => {
            let workers = resolve_workers(workers)?;
            let rows = max_influence_per_support(4, workers)?;
            let mut text = String::from("edges | I[G] | witness | tabulated\n");
            let mut classes = Vec::new();
            for row in &rows {
                let m = &row.maximum;
                let edges: Vec<[usize; 2]> = m.graph.edges().map(|(i, j)| [i, j]).collect();
                let edge_text: Vec<String> = edges.iter().map(|[i, j]| format!("{i}{j}")).collect();
                text.push_str(&format!(
                    "{{{}}} | {} | {} | {}\n",
                    edge_text.join(","),
                    exact(m.influence()),
                    m.best.table.to_hex(),
                    if row.reference.is_some() { "yes" } else { "no" }
                ));
                classes.push(json!({
                    "edges": edges,
                    "influence": m.influence().to_string(),
                    "witness_hex": m.best.table.to_hex(),
                    "witness": witness_json(&m.best.witness),
                    "tabulated": row.reference.is_some(),
                }));
            }
            Ok(CommandResult::ok(json!({ "classes": classes }), text))
        }
        Command::VerifySmall { n } => {
            let report = verify_conjecture_small(n)?;
            let max = report
                .max_qtf
                .as_ref()
                .ok_or_else(|| Error::Internal("maximum not computed".into()))?;
            let text = format!(
                "n = {n}\nthreshold I_GL(n,2) = {}\nscanned {}, survivors {}, LPs {}\nviolators: {}\nmax QTF influence = {} (table {})\n",
                exact(&report.threshold),
                report.scanned,
                report.survivors,
                report.lp_calls,
                report.confirmed.len(),
                exact(&max.influence),
                max.table.to_hex()
            );
            let json = json!({
                "n": n,
                "threshold": report.threshold.to_string(),
                "scanned": report.scanned,
                "survivors": report.survivors,
                "lp_calls": report.lp_calls,
                "violators": report.confirmed.iter().map(confirmed_json).collect::<Vec<_>>(),
                "max_qtf_influence": max.influence.to_string(),
                "max_qtf_table_hex": max.table.to_hex(),
            });
            Ok(CommandResult::ok(json, text))
        }
    }
}
