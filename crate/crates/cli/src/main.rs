use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use graphmotive::count::count_with;
use graphmotive::io::GraphJson;
use graphmotive::verify::{class_primes, ClassEntry, ProjectiveEntry, Status, SCHEMA_VERSION};
use graphmotive::{
    catalog, generate_family, hodge_form, parse_graph, predicted_sb_constant,
    psi_by_deletion_contraction, psi_by_matrix_tree, psi_by_trees, run_verify, to_edge_list,
    CatalogEntry, Checker, ClassOutcome, CountOptions, FamilySpec, Method, Prime, VerifyConfig,
};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "graphmotive", version, about = "Graph polynomials, point counts and class checks for graph hypersurfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the graph polynomial.
    Psi {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
        /// Cross-check forest enumeration against matrix-tree and deletion-contraction.
        #[arg(long)]
        check: bool,
    },
    /// Point counts, one JSON line per graph and prime.
    Count {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        counting: Counting,
        #[command(flatten)]
        output: Output,
    },
    /// Fit a candidate class in Z[L] to the counts.
    Class {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        counting: Counting,
        #[command(flatten)]
        output: Output,
    },
    /// Run every check and write the full report.
    Verify {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        counting: Counting,
        #[command(flatten)]
        output: Output,
        /// Skip class fitting.
        #[arg(long)]
        no_classes: bool,
    },
    /// Deletion-contraction count identities per edge and prime.
    DcCheck {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        counting: Counting,
        #[command(flatten)]
        output: Output,
        /// Only this edge label.
        #[arg(long)]
        edge: Option<usize>,
    },
    /// Print generated graphs as edge lists (or JSON).
    Family {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args)]
struct Input {
    /// Graph files (edge-list or JSON).
    files: Vec<PathBuf>,
    /// Generated graph, e.g. `cycle:4`; repeatable.
    #[arg(long = "family", value_name = "NAME:M")]
    families: Vec<String>,
    /// Use the built-in catalog.
    #[arg(long)]
    catalog: bool,
}

#[derive(Args)]
struct Counting {
    /// Comma-separated primes.
    #[arg(long, value_delimiter = ',', default_value = "3,5,7,11,13")]
    primes: Vec<u64>,
    /// Maximum point evaluations per count.
    #[arg(long, default_value_t = graphmotive::DEFAULT_BUDGET)]
    budget: u64,
    #[arg(long, default_value = "fibered")]
    method: MethodArg,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct Output {
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Brute,
    Fibered,
    Both,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Brute => Method::Brute,
            MethodArg::Fibered => Method::Fibered,
            MethodArg::Both => Method::Both,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

/// Input or configuration error: exit code 2.
struct Usage(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// Returns whether every applicable check passed.
fn run(cli: Cli) -> Result<bool, Usage> {
    match cli.command {
        Command::Psi {
            input,
            output,
            check,
        } => psi(&load(&input)?, &output, check),
        Command::Count {
            input,
            counting,
            output,
        } => {
            let graphs = load(&input)?;
            let cfg = config(&counting)?;
            count(&graphs, &cfg, &output)
        }
        Command::Class {
            input,
            counting,
            output,
        } => {
            let graphs = load(&input)?;
            let cfg = config(&counting)?;
            class(&graphs, &cfg, &output)
        }
        Command::Verify {
            input,
            counting,
            output,
            no_classes,
        } => {
            let graphs = load(&input)?;
            let mut cfg = config(&counting)?;
            cfg.classes = !no_classes;
            verify(&graphs, &cfg, &output)
        }
        Command::DcCheck {
            input,
            counting,
            output,
            edge,
        } => {
            let graphs = load(&input)?;
            let cfg = config(&counting)?;
            dc_check(&graphs, &cfg, &output, edge)
        }
        Command::Family { input, output } => family(&load(&input)?, &output),
    }
}

fn load(input: &Input) -> Result<Vec<CatalogEntry>, Usage> {
    let mut graphs = Vec::new();
    for path in &input.files {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let graph = parse_graph(&text).with_context(|| format!("parsing {}", path.display()))?;
        graphs.push(CatalogEntry {
            id: path.display().to_string(),
            graph,
        });
    }
    for spec in &input.families {
        let parsed: FamilySpec = spec.parse()?;
        graphs.push(CatalogEntry {
            id: parsed.to_string(),
            graph: generate_family(parsed)?,
        });
    }
    if input.catalog {
        graphs.extend(catalog());
    }
    if graphs.is_empty() {
        return Err(Usage(anyhow::anyhow!(
            "no graphs given: pass files, --family NAME:M or --catalog"
        )));
    }
    Ok(graphs)
}

fn config(c: &Counting) -> Result<VerifyConfig, Usage> {
    if let Some(n) = c.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the worker pool")?;
    }
    let mut cfg = VerifyConfig::default().with_primes(&c.primes)?;
    cfg.budget = c.budget;
    cfg.method = c.method.into();
    Ok(cfg)
}

fn checker(cfg: &VerifyConfig) -> Checker {
    Checker::new(
        cfg.method,
        CountOptions {
            budget: cfg.budget,
            parallel: cfg.parallel,
        },
    )
}

fn emit(output: &Output, text: &str) -> Result<(), Usage> {
    match &output.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn json_lines(values: &[Value]) -> String {
    values.iter().map(|v| format!("{v}\n")).collect()
}

fn psi(graphs: &[CatalogEntry], output: &Output, check: bool) -> Result<bool, Usage> {
    let mut ok = true;
    let mut rows = Vec::new();
    for e in graphs {
        let p = psi_by_trees(&e.graph);
        let agrees = !check
            || (psi_by_matrix_tree(&e.graph) == p && psi_by_deletion_contraction(&e.graph) == p);
        ok &= agrees;
        rows.push((e, p, agrees));
    }
    let text = match output.format {
        Format::Table => rows
            .iter()
            .map(|(e, p, agrees)| {
                let mark = if !check { "" } else if *agrees { "  [3 methods agree]" } else { "  [MISMATCH]" };
                format!("{}: {p}{mark}\n", e.id)
            })
            .collect(),
        Format::Json => json_lines(
            &rows
                .iter()
                .map(|(e, p, agrees)| {
                    let mut v = json!({
                        "schema": SCHEMA_VERSION,
                        "graph": e.id,
                        "psi": p.to_string(),
                        "polynomial": p,
                        "forest_count": p.term_count(),
                        "degree": e.graph.betti_1(),
                    });
                    if check {
                        v["methods_agree"] = json!(agrees);
                    }
                    v
                })
                .collect::<Vec<_>>(),
        ),
    };
    emit(output, &text)?;
    Ok(ok)
}

fn count(graphs: &[CatalogEntry], cfg: &VerifyConfig, output: &Output) -> Result<bool, Usage> {
    let opts = CountOptions {
        budget: cfg.budget,
        parallel: cfg.parallel,
    };
    let mut ok = true;
    let mut rows = Vec::new();
    for e in graphs {
        let p = psi_by_trees(&e.graph);
        for &q in &cfg.primes {
            let row = match count_with(&p, q, cfg.method, opts) {
                Ok(rec) => json!({
                    "schema": SCHEMA_VERSION,
                    "graph": e.id,
                    "method": cfg.method,
                    "q": rec.q,
                    "n": rec.n,
                    "affine_zero_count": rec.affine_zero_count,
                    "complement_count": rec.complement_count,
                    "projective_count": rec.projective_count,
                }),
                Err(err) => {
                    if !matches!(err, graphmotive::Error::BudgetExceeded { .. }) {
                        ok = false;
                    }
                    json!({
                        "schema": SCHEMA_VERSION,
                        "graph": e.id,
                        "method": cfg.method,
                        "q": q.get(),
                        "error": err.to_string(),
                    })
                }
            };
            rows.push(row);
        }
    }
    let text = match output.format {
        Format::Json => json_lines(&rows),
        Format::Table => {
            let mut s = format!(
                "{:<24} {:>4} {:>3} {:>14} {:>14} {:>12}\n",
                "graph", "q", "n", "zeros", "complement", "projective"
            );
            for r in &rows {
                if let Some(err) = r.get("error") {
                    s.push_str(&format!("{:<24} {:>4}  {}\n", str_of(&r["graph"]), r["q"], str_of(err)));
                } else {
                    s.push_str(&format!(
                        "{:<24} {:>4} {:>3} {:>14} {:>14} {:>12}\n",
                        str_of(&r["graph"]),
                        r["q"],
                        r["n"],
                        r["affine_zero_count"],
                        r["complement_count"],
                        if r["projective_count"].is_null() { "-".to_string() } else { r["projective_count"].to_string() }
                    ));
                }
            }
            s
        }
    };
    emit(output, &text)?;
    Ok(ok)
}

fn str_of(v: &Value) -> String {
    v.as_str().map_or_else(|| v.to_string(), str::to_string)
}

fn class(graphs: &[CatalogEntry], cfg: &VerifyConfig, output: &Output) -> Result<bool, Usage> {
    let checker = checker(cfg);
    let mut ok = true;
    let mut rows = Vec::new();
    for e in graphs {
        let primes: Vec<Prime> = class_primes(&cfg.primes, e.graph.edge_count());
        let predicted = predicted_sb_constant(&e.graph);
        let row = match checker.interpolate_class(&e.graph, &primes) {
            Ok(ClassOutcome::Candidate {
                class,
                fit_primes,
                held_out_primes,
            }) => {
                let split = hodge_form(&class);
                let matches = graphmotive::motive::constant_matches(&split, &e.graph);
                ok &= matches;
                json!({
                    "schema": SCHEMA_VERSION,
                    "graph": e.id,
                    "status": "candidate",
                    "class": class.to_string(),
                    "coefficients": class,
                    "fit_primes": fit_primes,
                    "held_out_primes": held_out_primes,
                    "hodge": {
                        "constant": split.constant.to_string(),
                        "tail": split.tail.to_string(),
                        "predicted_constant": predicted,
                        "matches_prediction": matches,
                    },
                })
            }
            Ok(ClassOutcome::NotPolynomiallyConsistent { reason }) => json!({
                "schema": SCHEMA_VERSION,
                "graph": e.id,
                "status": "not_polynomially_consistent",
                "reason": reason,
            }),
            Err(err) => json!({
                "schema": SCHEMA_VERSION,
                "graph": e.id,
                "status": "skipped",
                "reason": err.to_string(),
            }),
        };
        rows.push(row);
    }
    let text = match output.format {
        Format::Json => json_lines(&rows),
        Format::Table => rows
            .iter()
            .map(|r| match r["status"].as_str() {
                Some("candidate") => format!(
                    "{}: {}  (constant {}, tail {})\n",
                    str_of(&r["graph"]),
                    str_of(&r["class"]),
                    str_of(&r["hodge"]["constant"]),
                    str_of(&r["hodge"]["tail"])
                ),
                _ => format!("{}: {} ({})\n", str_of(&r["graph"]), str_of(&r["status"]), str_of(&r["reason"])),
            })
            .collect(),
    };
    emit(output, &text)?;
    Ok(ok)
}

fn verify(graphs: &[CatalogEntry], cfg: &VerifyConfig, output: &Output) -> Result<bool, Usage> {
    let report = run_verify(graphs, cfg);
    let text = match output.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report)?;
            s.push('\n');
            s
        }
        Format::Table => {
            let mut s = format!(
                "{:<24} {:<8} {:<6} {:<12} {:<6} {}\n",
                "graph", "status", "modL", "projective", "dc", "class"
            );
            for g in &report.graphs {
                let modl = g.modl.as_ref().map_or("-", |v| if v.pass { "pass" } else { "FAIL" });
                let proj = match &g.projective {
                    ProjectiveEntry::Checked(v) => if v.pass { "pass" } else { "FAIL" },
                    ProjectiveEntry::Inapplicable { .. } => "n/a",
                    ProjectiveEntry::NotRun => "-",
                };
                let dc = if g.dc_checks.is_empty() {
                    "-"
                } else if g.dc_checks.iter().all(|v| v.pass) {
                    "pass"
                } else {
                    "FAIL"
                };
                let class = match &g.class {
                    ClassEntry::Candidate { class, .. } => class.clone(),
                    ClassEntry::NotPolynomiallyConsistent { .. } => "not polynomial".into(),
                    ClassEntry::Skipped { .. } => "skipped".into(),
                };
                let status = match g.status {
                    Status::Pass => "pass",
                    Status::Fail => "FAIL",
                    Status::Skipped => "skipped",
                };
                s.push_str(&format!("{:<24} {:<8} {:<6} {:<12} {:<6} {}\n", g.id, status, modl, proj, dc, class));
            }
            s.push_str(&format!(
                "{} graphs: {} passed, {} failed, {} skipped\n",
                report.summary.graphs, report.summary.passed, report.summary.failed, report.summary.skipped
            ));
            s
        }
    };
    emit(output, &text)?;
    Ok(report.overall_pass)
}

fn dc_check(
    graphs: &[CatalogEntry],
    cfg: &VerifyConfig,
    output: &Output,
    edge: Option<usize>,
) -> Result<bool, Usage> {
    let checker = checker(cfg);
    let mut ok = true;
    let mut verdicts = Vec::new();
    for e in graphs {
        let labels: Vec<usize> = match edge {
            Some(l) => {
                e.graph.edge(l)?;
                vec![l]
            }
            None => {
                let mut ls: Vec<usize> = e.graph.labels().collect();
                ls.sort_unstable();
                ls
            }
        };
        for &label in &labels {
            for &q in &cfg.primes {
                match checker.dc_identity_check(&e.id, &e.graph, label, q) {
                    Ok(v) => {
                        ok &= v.pass;
                        verdicts.push(serde_json::to_value(&v)?);
                    }
                    Err(err @ graphmotive::Error::BudgetExceeded { .. }) => verdicts.push(json!({
                        "graph": e.id, "edge": label, "q": q.get(), "skipped": err.to_string(),
                    })),
                    Err(err) => return Err(err.into()),
                }
            }
        }
    }
    let text = match output.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&json!({
                "schema": SCHEMA_VERSION,
                "verdicts": verdicts,
                "pass": ok,
            }))?;
            s.push('\n');
            s
        }
        Format::Table => verdicts
            .iter()
            .map(|v| {
                if let Some(reason) = v.get("skipped") {
                    return format!("{} e{} q={} skipped: {}\n", str_of(&v["graph"]), v["edge"], v["q"], str_of(reason));
                }
                let o = &v["observations"][0];
                format!(
                    "{} e{} {} q={}: {} vs {} {}\n",
                    str_of(&v["graph"]),
                    v["edge"],
                    str_of(&v["theorem"]),
                    o["q"],
                    o["observed"],
                    o["expected"],
                    if v["pass"].as_bool() == Some(true) { "pass" } else { "FAIL" }
                )
            })
            .collect(),
    };
    emit(output, &text)?;
    Ok(ok)
}

fn family(graphs: &[CatalogEntry], output: &Output) -> Result<bool, Usage> {
    let text = match output.format {
        Format::Table => graphs
            .iter()
            .map(|e| format!("# {}\n{}", e.id, to_edge_list(&e.graph)))
            .collect(),
        Format::Json => json_lines(
            &graphs
                .iter()
                .map(|e| {
                    json!({
                        "schema": SCHEMA_VERSION,
                        "graph": e.id,
                        "data": GraphJson::from(&e.graph),
                    })
                })
                .collect::<Vec<_>>(),
        ),
    };
    emit(output, &text)?;
    Ok(true)
}
