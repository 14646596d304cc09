use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use polar_koszul::certificate::{certificate, verify_certificate, CertificateReport};
use polar_koszul::experiments::{
    depth_point, depth_series, emit_report, family_graphs, run_verification_suite, write_output,
    DepthSeries, ExperimentConfig, Family, Report, ReportFormat, Suite,
};
use polar_koszul::koszul::{DepthOptions, Enumeration};
use polar_koszul::monomial::DEFAULT_LATTICE_CAP;
use polar_koszul::polar::verify_polarized_basis;
use polar_koszul::{exec, Execution, MonomialIdeal, PrimeField, SimpleGraph, DEFAULT_PRIME};
use serde_json::json;

/// Depth of powers of whisker edge ideals, polarization of Koszul cycles and
/// depth certificates.
#[derive(Debug, Parser)]
#[command(name = "polar-koszul", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = polar_koszul::experiments::DEFAULT_SEED)]
    seed: u64,

    /// Worker threads; 1 runs everything sequentially.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Coefficient field characteristic; repeat to cross-check primes.
    #[arg(long = "prime", global = true)]
    primes: Vec<u64>,

    /// lcm-lattice size before falling back to the exponent box.
    #[arg(long, global = true, default_value_t = DEFAULT_LATTICE_CAP)]
    cap: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Json => ReportFormat::Json,
            Format::Csv => ReportFormat::Csv,
            Format::Text => ReportFormat::Text,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyArg {
    Trees,
    Connected,
    Cycles,
    Paths,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Trees => Family::Trees,
            FamilyArg::Connected => Family::Connected,
            FamilyArg::Cycles => Family::Cycles,
            FamilyArg::Paths => Family::Paths,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// depth(S*/I(G*)^k) for one power or a range of powers.
    Depth {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, conflicts_with = "kmax")]
        power: Option<usize>,
        #[arg(long)]
        kmax: Option<usize>,
    },
    /// Polarization of a monomial ideal.
    Polarize {
        #[arg(long)]
        ideal: PathBuf,
    },
    /// A friendly maximal independent set with its leaf-ordered tree.
    Friendly {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Certificate cycle for depth(S*/I(G*)^k) <= n - k + 1.
    Certificate {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        power: usize,
    },
    /// Verification suites.
    Verify {
        #[command(subcommand)]
        suite: VerifyCommand,
    },
    /// Depth functions over a graph family.
    DepthSeries {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        nmax: usize,
        #[arg(long, default_value_t = 1)]
        nmin: usize,
        /// Largest power; defaults to n for each graph.
        #[arg(long)]
        kmax: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
enum VerifyCommand {
    /// Polarized homology basis of H_i(x; I).
    Main {
        #[arg(long)]
        ideal: PathBuf,
        #[arg(long)]
        homdeg: usize,
    },
    /// Depth bound and certificates for connected graphs.
    Whisker(SweepArgs),
    /// depth = n - k + 1 for trees.
    Tree(SweepArgs),
    /// Stabilization for k >= n (n <= 3).
    Limit(SweepArgs),
    /// Colon identities on random trees.
    Colon {
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 5)]
        nmax: usize,
        #[arg(long)]
        kmax: Option<usize>,
    },
    /// Depth plateaus of forests (report only).
    Forest(SweepArgs),
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    nmax: usize,
    #[arg(long, default_value_t = 1)]
    nmin: usize,
    #[arg(long)]
    kmax: Option<usize>,
}

struct Outcome {
    text: String,
    pass: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(o) => {
            if let Err(e) = write_output(&o.text, cli.out.as_deref()) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if o.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let exec = match cli.jobs {
        Some(0) => bail!("--jobs must be at least 1"),
        Some(1) => Execution::Sequential,
        Some(j) => {
            rayon::ThreadPoolBuilder::new()
                .num_threads(j)
                .build_global()
                .context("configuring the worker pool")?;
            Execution::Parallel
        }
        None => Execution::Parallel,
    };
    let mut cfg = ExperimentConfig {
        primes: if cli.primes.is_empty() {
            vec![DEFAULT_PRIME]
        } else {
            cli.primes.clone()
        },
        cap: cli.cap,
        format: cli.format.into(),
        out: cli.out.clone(),
        exec,
        seed: cli.seed,
        ..ExperimentConfig::default()
    };
    let fields = cfg.validate()?;
    let format = cfg.format;

    match &cli.command {
        Command::Depth { graph, power, kmax } => {
            let g = read_graph(graph)?;
            let series = match power {
                Some(k) => {
                    let point = depth_point(&g, *k, &cfg)?.ok_or_else(|| capacity(cli.cap))?;
                    DepthSeries {
                        graph: g.id(),
                        n: g.n(),
                        values: vec![point],
                        truncated: None,
                    }
                }
                None => depth_series(&g, kmax.unwrap_or(g.n().max(1)), &cfg)?,
            };
            series_outcome(&[series], format, cli.cap)
        }
        Command::DepthSeries {
            family,
            nmax,
            nmin,
            kmax,
        } => {
            cfg.nmin = *nmin;
            cfg.nmax = *nmax;
            cfg.validate()?;
            let mut graphs = Vec::new();
            for n in *nmin..=*nmax {
                graphs.extend(family_graphs((*family).into(), n, &[])?);
            }
            let series = exec::map(cfg.exec, &graphs, |g| {
                depth_series(g, kmax.unwrap_or(g.n()).max(1), &cfg)
            })
            .into_iter()
            .collect::<polar_koszul::Result<Vec<_>>>()?;
            series_outcome(&series, format, cli.cap)
        }
        Command::Polarize { ideal } => {
            let i = read_ideal(ideal)?;
            let (p, space) = i.polarize();
            let text = match format {
                ReportFormat::Json => pretty(&json!({
                    "ideal": i.to_string(),
                    "bounds": i.max_degrees(),
                    "variables": space.labels(),
                    "polarized": p.to_string(),
                })),
                ReportFormat::Text => p.to_text(),
                ReportFormat::Csv => bail!("csv output is only available for depth reports"),
            };
            Ok(Outcome { text, pass: true })
        }
        Command::Friendly { graph } => {
            let g = read_graph(graph)?;
            let s = g.friendly_independent_set()?;
            let tree = g.spanning_tree_leaf_order(&s)?;
            let one = |v: &[usize]| v.iter().map(|x| x + 1).collect::<Vec<_>>();
            let edges: Vec<(usize, usize)> = tree
                .edges
                .iter()
                .map(|&(a, b)| (tree.labels[a] + 1, tree.labels[b] + 1))
                .collect();
            let text = match format {
                ReportFormat::Json => pretty(&json!({
                    "graph": g.id(),
                    "S": one(&s),
                    "gamma_connected": g.gamma_graph(&s)?.graph.is_connected(),
                    "leaf_order": one(&tree.labels),
                    "tree_edges": edges,
                    "witnesses": one(&tree.witnesses),
                })),
                ReportFormat::Text => {
                    let mut t =
                        format!("S = {:?}\nleaf order = {:?}\n", one(&s), one(&tree.labels));
                    for ((a, b), w) in edges.iter().zip(&tree.witnesses) {
                        t.push_str(&format!("edge {a}-{b} via {}\n", w + 1));
                    }
                    t
                }
                ReportFormat::Csv => bail!("csv output is only available for depth reports"),
            };
            Ok(Outcome { text, pass: true })
        }
        Command::Certificate { graph, power } => {
            let g = read_graph(graph)?;
            let cert = certificate(&g, *power, fields[0])?;
            let verified = verify_certificate(&cert)?;
            let report = CertificateReport::new(&cert, verified);
            let text =
                match format {
                    ReportFormat::Json => pretty(&report),
                    ReportFormat::Text => format!(
                    "graph {}\nS = {:?}\nk = {}\nverified = {}\nimplied bound = {}\nelement:\n{}",
                    report.graph,
                    report.set,
                    report.k,
                    report.verified,
                    report.implied_bound.map_or("none".into(), |b| b.to_string()),
                    report.element
                ),
                    ReportFormat::Csv => bail!("csv output is only available for depth reports"),
                };
            Ok(Outcome {
                text,
                pass: verified,
            })
        }
        Command::Verify { suite } => verify(suite, cfg, &fields, format),
    }
}

fn verify(
    suite: &VerifyCommand,
    mut cfg: ExperimentConfig,
    fields: &[PrimeField],
    format: ReportFormat,
) -> anyhow::Result<Outcome> {
    let sweep = |cfg: &mut ExperimentConfig, a: &SweepArgs| {
        cfg.nmin = a.nmin;
        cfg.nmax = a.nmax;
        cfg.kmax = a.kmax;
    };
    let which = match suite {
        VerifyCommand::Main { ideal, homdeg } => {
            let i = read_ideal(ideal)?;
            let opts = DepthOptions {
                cap: cfg.cap,
                enumeration: Enumeration::Auto,
                exec: cfg.exec,
            };
            let report = verify_polarized_basis(&i, *homdeg, &fields[0], &opts)?;
            let text = match format {
                ReportFormat::Json => pretty(&report),
                ReportFormat::Text => {
                    let mut t = format!(
                        "ideal {}\ni = {}\nr = {}\npass = {}\n",
                        report.ideal, report.i, report.r, report.pass
                    );
                    for (a, d) in &report.dims_by_degree {
                        t.push_str(&format!("  {a}: {d}\n"));
                    }
                    for f in &report.witness_failures {
                        t.push_str(&format!("  failed: {f}\n"));
                    }
                    t
                }
                ReportFormat::Csv => bail!("csv output is only available for depth reports"),
            };
            return Ok(Outcome {
                text,
                pass: report.pass,
            });
        }
        VerifyCommand::Whisker(a) => {
            sweep(&mut cfg, a);
            cfg.family = Family::Connected;
            Suite::Whisker
        }
        VerifyCommand::Tree(a) => {
            sweep(&mut cfg, a);
            Suite::Tree
        }
        VerifyCommand::Limit(a) => {
            sweep(&mut cfg, a);
            Suite::Limit
        }
        VerifyCommand::Colon { trials, nmax, kmax } => {
            cfg.trials = *trials;
            cfg.nmin = 2;
            cfg.nmax = *nmax;
            cfg.kmax = *kmax;
            Suite::Colon
        }
        VerifyCommand::Forest(a) => {
            sweep(&mut cfg, a);
            Suite::Forest
        }
    };
    let report = run_verification_suite(&cfg, &[which])?;
    Ok(Outcome {
        text: emit_report(&report, format)?,
        pass: report.all_pass(),
    })
}

fn series_outcome(
    series: &[DepthSeries],
    format: ReportFormat,
    cap: usize,
) -> anyhow::Result<Outcome> {
    let report = Report::from_series(series);
    let text = emit_report(&report, format)?;
    if series.iter().any(|s| s.truncated.is_some()) {
        // partial output is still written, but the run counts as a capacity error
        write_partial(&text)?;
        return Err(capacity(cap));
    }
    Ok(Outcome {
        text,
        pass: report.all_pass(),
    })
}

fn write_partial(text: &str) -> anyhow::Result<()> {
    eprint!("{text}");
    Ok(())
}

fn capacity(cap: usize) -> anyhow::Error {
    polar_koszul::Error::Capacity { cap }.into()
}

fn pretty<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable report");
    s.push('\n');
    s
}

fn read_graph(path: &Path) -> anyhow::Result<SimpleGraph> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    SimpleGraph::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read_ideal(path: &Path) -> anyhow::Result<MonomialIdeal> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    MonomialIdeal::parse(&text).with_context(|| format!("parsing {}", path.display()))
}
