use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use qgrass::colouring::{self, ColourCertificate, ColourError, ColourOptions, DEFAULT_VERTEX_CAP};
use qgrass::johnson::{self, BoseChowlaOrigin, JohnsonMethod};
use qgrass::oracle::{self, DEFAULT_BUDGET, DEFAULT_GRAPH_CAP};
use qgrass::{selftest, FieldSpec, GrassmannParams, Grassmannian};

#[derive(Parser, Debug)]
#[command(
    name = "qgrass",
    version,
    about = "Colour powers of Grassmann graphs J_q(n,m,t)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the m-subspaces of F_q^n in canonical order.
    Enumerate {
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        out: OutputArgs,
        #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
        cap: u64,
    },
    /// Colour every vertex and write a certificate.
    Colour {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_enum, default_value_t = Method::Greedy)]
        johnson: Method,
        /// Check properness before writing (default: only up to 20000 vertices).
        #[arg(long)]
        verify: bool,
        #[command(flatten)]
        out: OutputArgs,
        #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
        cap: u64,
    },
    /// Re-check a certificate.
    Verify {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
        cap: u64,
    },
    /// Lower and upper bounds on the chromatic number.
    Bounds {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_enum, default_value_t = Method::Greedy)]
        johnson: Method,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Exact chromatic number and clique number of a small instance.
    Oracle {
        #[command(flatten)]
        graph: GraphArgs,
        /// Search-node budget for each solver.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, default_value_t = DEFAULT_GRAPH_CAP)]
        cap: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Write the graph as DIMACS (plus a `.labels` sidecar) or CSV.
    ExportGraph {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        out: OutputArgs,
        #[arg(long, default_value_t = DEFAULT_GRAPH_CAP)]
        cap: u64,
    },
    /// Colour the Johnson graph J(n,m,t).
    Johnson {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        t: usize,
        #[arg(long, value_enum, default_value_t = Method::Greedy)]
        johnson: Method,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run the seeded property suites.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random cases per suite.
        #[arg(long, default_value_t = 50)]
        trials: usize,
    },
}

#[derive(Args, Debug)]
struct SpaceArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
}

#[derive(Args, Debug)]
struct GraphArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    t: usize,
}

impl GraphArgs {
    fn params(&self) -> Result<GrassmannParams> {
        Ok(GrassmannParams::new(self.q, self.n, self.m, self.t)?)
    }
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dimacs,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Greedy,
    Gs,
}

impl From<Method> for JohnsonMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Greedy => JohnsonMethod::Greedy,
            Method::Gs => JohnsonMethod::GrahamSloane,
        }
    }
}

/// Raised when a check fails, as opposed to bad input.
#[derive(Debug)]
struct VerificationFailure(String);

impl std::fmt::Display for VerificationFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for VerificationFailure {}

fn emit(out: &OutputArgs, content: &str) -> Result<()> {
    match &out.out {
        Some(path) => {
            fs::write(path, content).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            std::io::stdout().lock().write_all(content.as_bytes())?;
            Ok(())
        }
    }
}

fn format_or(out: &OutputArgs, default: Format, allowed: &[Format]) -> Result<Format> {
    let f = out.format.unwrap_or(default);
    if !allowed.contains(&f) {
        bail!("format {f:?} is not available here; choose one of {allowed:?}");
    }
    Ok(f)
}

fn csv_string<R: AsRef<[u8]>>(rows: impl IntoIterator<Item = Vec<R>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.write_record(row)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn table(rows: &[(&str, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter()
        .map(|(k, v)| format!("{k:width$}  {v}\n"))
        .collect()
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Enumerate { space, out, cap } => {
            let field = FieldSpec::with_order(space.q)?;
            let g = Grassmannian::new(&field, space.n, space.m)?;
            if g.len() > cap {
                bail!("{} subspaces exceed the cap of {cap}", g.len());
            }
            let codes: Vec<String> = g.iter().map(|s| s.encode()).collect();
            let text = match format_or(&out, Format::Csv, &[Format::Json, Format::Csv])? {
                Format::Json => serde_json::to_string_pretty(&codes)? + "\n",
                _ => csv_string(
                    std::iter::once(vec!["index".to_string(), "vertex".to_string()]).chain(
                        codes
                            .iter()
                            .enumerate()
                            .map(|(i, c)| vec![i.to_string(), c.clone()]),
                    ),
                )?,
            };
            emit(&out, &text)
        }
        Command::Colour {
            graph,
            johnson,
            verify,
            out,
            cap,
        } => {
            let params = graph.params()?;
            let ctx = colouring::make_context(&params, johnson.into())?;
            let options = ColourOptions {
                cap,
                verify: verify.then_some(true),
            };
            let cert = colouring::full_colouring(&ctx, options)?;
            let text = match format_or(&out, Format::Json, &[Format::Json, Format::Csv])? {
                Format::Json => cert.to_json(),
                _ => csv_string(
                    std::iter::once(vec!["vertex".to_string(), "colour".to_string()]).chain(
                        cert.colours
                            .iter()
                            .map(|e| vec![e.vertex.clone(), e.colour.to_string()]),
                    ),
                )?,
            };
            emit(&out, &text)?;
            eprintln!(
                "{params}: {} regime, {} vertices, palette {}, bounds [{}, {}]",
                cert.regime,
                cert.colours.len(),
                cert.palette,
                cert.bounds.lower,
                cert.bounds.theorem_upper
            );
            match &cert.verified {
                Some(v) if !v.proper => {
                    Err(VerificationFailure("colouring is not proper".into()).into())
                }
                Some(v) => {
                    eprintln!("verified proper over {} pairs", v.pairs_checked);
                    Ok(())
                }
                None => {
                    eprintln!("verification skipped");
                    Ok(())
                }
            }
        }
        Command::Verify { cert, cap } => verify(&cert, cap),
        Command::Bounds {
            graph,
            johnson,
            out,
        } => {
            let params = graph.params()?;
            let ctx = colouring::make_context(&params, johnson.into())?;
            let b = colouring::bounds_report(&ctx);
            let rows = [
                ("params", params.to_string()),
                ("regime", ctx.regime().to_string()),
                ("vertices", b.vertices.to_string()),
                ("lower", b.lower.to_string()),
                ("theorem_upper", b.theorem_upper.to_string()),
                ("trivial_upper", b.trivial_upper.to_string()),
            ];
            let text = match out.format {
                None => table(&rows),
                Some(Format::Json) => serde_json::to_string_pretty(&b)? + "\n",
                Some(Format::Csv) => csv_string(
                    std::iter::once(vec!["quantity".to_string(), "value".to_string()])
                        .chain(rows.iter().map(|(k, v)| vec![k.to_string(), v.clone()])),
                )?,
                Some(Format::Dimacs) => bail!("bounds have no DIMACS form"),
            };
            emit(&out, &text)
        }
        Command::Oracle {
            graph,
            budget,
            cap,
            out,
        } => {
            let params = graph.params()?;
            let g = oracle::build_graph(&params, cap)?;
            let clique = oracle::max_clique(&g, budget);
            let chi = oracle::exact_chromatic(&g, budget);
            let exactness = |e: bool| if e { "exact" } else { "budget exhausted" };
            let chromatic = if chi.exact {
                chi.upper.to_string()
            } else {
                format!("[{}, {}]", chi.lower, chi.upper)
            };
            let rows = [
                ("params", params.to_string()),
                ("vertices", g.vertex_count().to_string()),
                ("edges", g.edge_count().to_string()),
                (
                    "max_clique",
                    format!("{} ({})", clique.size, exactness(clique.exact)),
                ),
                (
                    "chromatic",
                    format!("{chromatic} ({})", exactness(chi.exact)),
                ),
            ];
            let text = match out.format {
                None => table(&rows),
                Some(Format::Json) => {
                    let value = serde_json::json!({
                        "vertices": g.vertex_count().to_string(),
                        "edges": g.edge_count().to_string(),
                        "max_clique": {
                            "size": clique.size.to_string(),
                            "exact": clique.exact,
                            "witness": clique.witness.iter().map(|&i| g.labels()[i].clone()).collect::<Vec<_>>(),
                        },
                        "chromatic": {
                            "lower": chi.lower.to_string(),
                            "upper": chi.upper.to_string(),
                            "exact": chi.exact,
                        },
                    });
                    serde_json::to_string_pretty(&value)? + "\n"
                }
                Some(_) => bail!("oracle output is a table or JSON"),
            };
            emit(&out, &text)
        }
        Command::ExportGraph { graph, out, cap } => {
            let g = oracle::build_graph(&graph.params()?, cap)?;
            match format_or(&out, Format::Dimacs, &[Format::Dimacs, Format::Csv])? {
                Format::Dimacs => {
                    emit(&out, &oracle::to_dimacs(&g))?;
                    if let Some(path) = &out.out {
                        let sidecar = labels_path(path);
                        fs::write(&sidecar, oracle::labels_sidecar(&g))
                            .with_context(|| format!("writing {}", sidecar.display()))?;
                    }
                    Ok(())
                }
                _ => {
                    let labels = g.labels();
                    let text = csv_string(
                        std::iter::once(vec!["source".to_string(), "target".to_string()]).chain(
                            g.edges()
                                .into_iter()
                                .map(|(i, j)| vec![labels[i].clone(), labels[j].clone()]),
                        ),
                    )?;
                    emit(&out, &text)
                }
            }
        }
        Command::Johnson {
            n,
            m,
            t,
            johnson: method,
            out,
        } => {
            let c = johnson::colouring(n, m, t, method.into())?;
            let b = johnson::johnson_bounds(n, m, t)?;
            if !c.is_proper() {
                return Err(
                    VerificationFailure(format!("J({n},{m},{t}) colouring is not proper")).into(),
                );
            }
            let classes = c.classes();
            let text = match out.format {
                None => {
                    let mut rows = vec![
                        ("method", c.method.to_string()),
                        ("palette", c.palette().to_string()),
                        ("lower", b.lower.to_string()),
                        ("gs_upper", b.gs_upper.to_string()),
                    ];
                    if let Some(bc) = c.bose_chowla() {
                        let origin = match bc.origin {
                            BoseChowlaOrigin::ProjectiveLine => "projective line",
                            BoseChowlaOrigin::Search => "search",
                        };
                        rows.push((
                            "bose_chowla",
                            format!("{:?} mod {} ({origin})", bc.elements, bc.modulus),
                        ));
                    }
                    let mut s = table(&rows);
                    for (i, class) in classes.iter().enumerate() {
                        let members: Vec<String> = class.iter().map(|v| v.to_string()).collect();
                        s += &format!("{i}: {}\n", members.join(" "));
                    }
                    s
                }
                Some(Format::Json) => {
                    let value = serde_json::json!({
                        "n": n.to_string(),
                        "m": m.to_string(),
                        "t": t.to_string(),
                        "method": c.method.to_string(),
                        "palette": c.palette().to_string(),
                        "lower": b.lower.to_string(),
                        "gs_upper": b.gs_upper.to_string(),
                        "classes": classes
                            .iter()
                            .map(|cl| cl.iter().map(|v| v.to_string()).collect::<Vec<_>>())
                            .collect::<Vec<_>>(),
                    });
                    serde_json::to_string_pretty(&value)? + "\n"
                }
                Some(Format::Csv) => csv_string(
                    std::iter::once(vec!["subset".to_string(), "colour".to_string()]).chain(
                        c.subsets()
                            .iter()
                            .zip(c.colours())
                            .map(|(s, col)| vec![s.to_string(), col.to_string()]),
                    ),
                )?,
                Some(Format::Dimacs) => bail!("use export-graph for DIMACS"),
            };
            emit(&out, &text)
        }
        Command::Selftest { seed, trials } => {
            let results = selftest::run(seed, trials);
            let mut failed = 0;
            for r in &results {
                println!(
                    "{} {}: {}",
                    if r.passed { "pass" } else { "FAIL" },
                    r.name,
                    r.detail
                );
                failed += usize::from(!r.passed);
            }
            if failed > 0 {
                return Err(VerificationFailure(format!(
                    "{failed} of {} suites failed",
                    results.len()
                ))
                .into());
            }
            Ok(())
        }
    }
}

fn labels_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".labels");
    PathBuf::from(s)
}

fn verify(path: &Path, cap: u64) -> Result<()> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let cert = ColourCertificate::from_json(&text)?;
    let report = match colouring::verify_properness(&cert, cap) {
        Ok(r) => r,
        Err(e @ (ColourError::Coverage(_) | ColourError::Inconsistent(_))) => {
            return Err(VerificationFailure(e.to_string()).into());
        }
        Err(e) => return Err(e.into()),
    };
    print!(
        "{}",
        table(&[
            ("proper", report.proper.to_string()),
            ("vertices", report.vertices.to_string()),
            ("pairs_checked", report.pairs_checked.to_string()),
            ("same_colour_pairs", report.same_colour_pairs.to_string()),
            ("palette", cert.palette.to_string()),
        ])
    );
    if let Some(ce) = report.counterexample {
        return Err(VerificationFailure(format!(
            "counterexample: {} and {} share colour {} and meet in dimension {}",
            ce.first, ce.second, ce.colour, ce.intersection_dim
        ))
        .into());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<VerificationFailure>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
