//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::cardinal::Cardinal;
use crate::connsets::{ConnectionSet, DEFAULT_CLASSIFY_BUDGET};
use crate::error::{Error, Result};
use crate::export;
use crate::factorization::{BuildOptions, FactorId, Factorization, RegularFactorization};
use crate::groups::{parse_element_list, Group, SubgroupSpec};
use crate::subfact::{nested, NestedOptions};
use crate::table::FactorTable;
use crate::verify::verify_window;

#[derive(Debug, Parser)]
#[command(
    name = "regfact",
    version,
    about = "Regular 1-factorizations of infinite Cayley graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the factor of every window edge.
    Construct(GraphArgs),
    /// Check the factorization on a window; exit 1 on any failed check.
    Verify(GraphArgs),
    /// Look up the factor of one edge, or a partner inside one factor.
    Query(QueryArgs),
    /// Embed a factorization of K_m'[n'] into one of K_m[n].
    Embed(EmbedArgs),
    /// Decide whether S \ I(G) has size 0 or |G|.
    Classify(ClassifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Table,
}

#[derive(Debug, Args)]
pub struct Graph {
    /// Group, e.g. `Z`, `Z x C2`, `Dinf`, `F2`.
    #[arg(long)]
    pub group: String,
    /// Connection set: `all-nonzero`, `complement(H)`, `list[..]`, `pred:name`.
    #[arg(
        long,
        conflicts_with = "subgroup",
        required_unless_present = "subgroup"
    )]
    pub set: Option<String>,
    /// Subgroup H; the graph is Cay[G : G \ H] = K_m[n].
    #[arg(long)]
    pub subgroup: Option<String>,
    /// Candidates scanned per greedy phase.
    #[arg(long, env = "REGFACT_BUDGET", default_value_t = 100_000)]
    pub budget: u64,
    /// Group elements scanned when classifying S.
    #[arg(long, default_value_t = DEFAULT_CLASSIFY_BUDGET)]
    pub classify_budget: u64,
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    #[command(flatten)]
    pub graph: Graph,
    /// Number of leading group elements to examine.
    #[arg(long, default_value_t = 32)]
    pub window: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct QueryArgs {
    #[command(flatten)]
    pub graph: Graph,
    /// Edge as two elements, e.g. `(3,0),(3,1)`.
    #[arg(long, conflicts_with_all = ["factor", "vertex"], required_unless_present = "factor")]
    pub edge: Option<String>,
    /// Factor label, e.g. `Trans(5)`; use with --vertex.
    #[arg(long, requires = "vertex")]
    pub factor: Option<String>,
    #[arg(long, requires = "factor")]
    pub vertex: Option<String>,
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    /// Group H of the inner factorization.
    #[arg(long)]
    pub inner_group: Option<String>,
    /// Subgroup K of H; the inner graph is Cay[H : H \ K].
    #[arg(long, default_value = "{0}")]
    pub inner_subgroup: String,
    /// JSON factor table for a finite H.
    #[arg(
        long,
        conflicts_with = "inner_group",
        required_unless_present = "inner_group"
    )]
    pub inner_table: Option<PathBuf>,
    #[arg(long)]
    pub m: Cardinal,
    #[arg(long)]
    pub n: Cardinal,
    /// Group of order n/n' (default Z or Ck).
    #[arg(long)]
    pub g1: Option<String>,
    /// Group of order m/m' (default Z or Ck).
    #[arg(long)]
    pub l1: Option<String>,
    #[arg(long, env = "REGFACT_BUDGET", default_value_t = 100_000)]
    pub budget: u64,
    #[arg(long, default_value_t = 32)]
    pub window: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Print the window verification report instead of the table.
    #[arg(long)]
    pub report: bool,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub group: String,
    #[arg(long)]
    pub set: String,
    #[arg(long, default_value_t = DEFAULT_CLASSIFY_BUDGET)]
    pub budget: u64,
}

/// Outcome of a command: text for stdout and the exit code.
struct Output {
    text: String,
    code: i32,
}

fn ok(text: String) -> Result<Output> {
    Ok(Output { text, code: 0 })
}

impl Graph {
    fn build(&self) -> Result<RegularFactorization> {
        let group = Group::parse(&self.group)?;
        let options = BuildOptions {
            scan_limit: self.budget,
            classify_budget: self.classify_budget,
        };
        match (&self.set, &self.subgroup) {
            (_, Some(h)) => RegularFactorization::complete_equipartite_with(
                SubgroupSpec::parse(&group, h)?,
                options,
            ),
            (Some(s), None) => RegularFactorization::build_with(
                group.clone(),
                ConnectionSet::parse(&group, s)?,
                options,
            ),
            (None, None) => unreachable!("clap requires --set or --subgroup"),
        }
    }
}

fn render(f: &dyn Factorization, window: usize, format: Format) -> Result<String> {
    let rows = export::window_table(f, window)?;
    Ok(match format {
        Format::Json => export::to_json(f, window, &rows),
        Format::Dot => export::to_dot(f, &rows),
        Format::Table => export::to_text(&rows),
    })
}

fn report(f: &dyn Factorization, window: usize, format: Format) -> Output {
    let r = verify_window(f, window);
    let text = match format {
        Format::Json => r.to_json(),
        _ => r.to_string(),
    };
    Output {
        text,
        code: if r.passed() { 0 } else { 1 },
    }
}

fn inner_factorization(args: &EmbedArgs) -> Result<Arc<dyn Factorization>> {
    if let Some(path) = &args.inner_table {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidTable(format!("{}: {e}", path.display())))?;
        return Ok(Arc::new(FactorTable::from_json(&text)?));
    }
    let spec = args.inner_group.as_deref().expect("clap requires a source");
    let h = Group::parse(spec)?;
    let k = SubgroupSpec::parse(&h, &args.inner_subgroup)?;
    if h.is_infinite() {
        let options = BuildOptions {
            scan_limit: args.budget,
            ..BuildOptions::default()
        };
        Ok(Arc::new(RegularFactorization::complete_equipartite_with(
            k, options,
        )?))
    } else {
        Ok(Arc::new(FactorTable::from_involutions(k)?))
    }
}

fn execute(cli: Cli) -> Result<Output> {
    match cli.command {
        Command::Construct(a) => ok(render(&a.graph.build()?, a.window, a.format)?),
        Command::Verify(a) => Ok(report(&a.graph.build()?, a.window, a.format)),
        Command::Query(a) => {
            let f = a.graph.build()?;
            let g = f.group();
            if let Some(edge) = &a.edge {
                let ends = parse_element_list(g, edge)?;
                let [x, y] = ends.as_slice() else {
                    return Err(Error::Parse {
                        pos: 0,
                        msg: format!("--edge needs exactly two elements, got {}", ends.len()),
                    });
                };
                ok(serde_json::to_string(&f.factor_of_edge(x, y)?.to_json()).expect("json"))
            } else {
                let id = FactorId::parse(g, a.factor.as_deref().unwrap_or_default())?;
                let v = g.parse_element(a.vertex.as_deref().unwrap_or_default())?;
                let w = f.partner(&id, &v)?;
                ok(
                    json!({"factor": id.to_json(), "vertex": v.encode(), "partner": w.encode()})
                        .to_string(),
                )
            }
        }
        Command::Embed(a) => {
            let inner = inner_factorization(&a)?;
            let options = NestedOptions {
                g1: a.g1.as_deref().map(Group::parse).transpose()?,
                l1: a.l1.as_deref().map(Group::parse).transpose()?,
                build: BuildOptions {
                    scan_limit: a.budget,
                    ..BuildOptions::default()
                },
            };
            let f = nested(inner, a.m, a.n, options)?;
            if a.report {
                Ok(report(&f, a.window, a.format))
            } else {
                ok(render(&f, a.window, a.format)?)
            }
        }
        Command::Classify(a) => {
            let g = Group::parse(&a.group)?;
            let verdict = ConnectionSet::parse(&g, &a.set)?.classify(a.budget)?;
            ok(verdict.to_json().to_string())
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    if e.is_hypothesis_violation() {
        3
    } else if matches!(e, Error::Parse { .. } | Error::Encoding(_)) {
        2
    } else {
        1
    }
}

/// Parses `args`, runs the command and writes its output. Returns the
/// process exit code: 0 success, 1 failed verification or query error,
/// 2 usage error, 3 violated hypothesis.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = if code == 0 {
                write!(out, "{}", e.render())
            } else {
                write!(err, "{}", e.render())
            };
            return code;
        }
    };
    match execute(cli) {
        Ok(o) => {
            let _ = writeln!(out, "{}", o.text.trim_end());
            o.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            let _ = writeln!(err, "hint: {}", e.hint());
            exit_code(&e)
        }
    }
}
