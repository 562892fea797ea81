//! `gsp`: graph generation, companion models, graph z-transform and graph convolution.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use gsp_core::charpoly::{charpoly_exact, EXACT_MAX_N};
use gsp_core::companion::companion_graph;
use gsp_core::convolution::{convolve, verify_convolution, verify_convolution_z, FastOptions, Method};
use gsp_core::io;
use gsp_core::ztransform::{gzt, igzt};
use gsp_core::{
    CharpolySource, CompanionModel, Complex64, Domain, EigenOrdering, Graph, GraphSignal, GspError, ModelOptions,
    Polynomial, Precision,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(name = "gsp", version, about = "Graph signal processing with the companion model")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Seed for random signals.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest accepted relative cross-method difference for verification runs.
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol: f64,
    /// Eigenvalue ordering: `default` or `file:<path>` holding a permutation.
    #[arg(long, global = true, default_value = "default")]
    ordering: String,
    /// Trim trailing zero coefficients before the FFT product.
    #[arg(long, global = true)]
    pad: bool,
    /// Working precision of the z-transform: `auto`, `double` or a bit count.
    #[arg(long, global = true, default_value = "auto")]
    precision: String,
    /// Use the exact integer characteristic polynomial (integer adjacencies only).
    #[arg(long, global = true)]
    exact: bool,
    /// Tikhonov parameter for the z-transform; off unless given.
    #[arg(long, global = true)]
    ridge: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Cycle,
    Path,
    Ladder,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConvMethod {
    Filter,
    Spectral,
    Fast,
    Verify,
}

#[derive(Clone, Copy, ValueEnum)]
enum SignalKind {
    Random,
    Delta0,
    Basis,
}

#[derive(Subcommand)]
enum Command {
    /// Write the adjacency of a generated graph (`.coord`/`.txt` sparse, otherwise dense CSV).
    Gen { kind: Kind, n: usize, out: PathBuf },
    /// Build the companion model and export it as JSON.
    Model {
        graph: PathBuf,
        out: PathBuf,
        /// Also write the companion graph in DOT format.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Also write the characteristic polynomial as `k,re,im` lines.
        #[arg(long)]
        charpoly: Option<PathBuf>,
    },
    /// Export the spectral decomposition as JSON.
    Decompose { graph: PathBuf, out: PathBuf },
    /// Graph z-transform of a vertex signal, or its inverse.
    Gzt {
        graph: PathBuf,
        signal: PathBuf,
        out: PathBuf,
        #[arg(long)]
        inverse: bool,
    },
    /// Graph convolution of two vertex signals.
    Conv {
        graph: PathBuf,
        s: PathBuf,
        t: PathBuf,
        out: PathBuf,
        #[arg(long, value_enum, default_value = "fast")]
        method: ConvMethod,
        /// Write the JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Step and triangle convolution on the 100-node directed ladder, one CSV per stage.
    DemoLadder { out_dir: PathBuf },
    /// Write a test signal: seeded random, the vertex impulse of a graph, or a basis vector.
    Signal {
        kind: SignalKind,
        n: usize,
        out: PathBuf,
        /// Graph whose vertex impulse is written (required for `delta0`).
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Index for `basis`.
        #[arg(long, default_value_t = 0)]
        index: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            report_error("usage", &e.to_string());
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let category = e.downcast_ref::<GspError>().map_or_else(|| category_of(&e), |g| g.category());
            report_error(category, &format!("{e:#}"));
            ExitCode::FAILURE
        }
    }
}

fn category_of(e: &anyhow::Error) -> &'static str {
    if e.chain().any(|c| c.downcast_ref::<std::io::Error>().is_some()) {
        "io"
    } else if let Some(g) = e.chain().find_map(|c| c.downcast_ref::<GspError>()) {
        g.category()
    } else if e.downcast_ref::<Failure>().is_some() {
        "verification_failed"
    } else {
        "invalid_argument"
    }
}

fn report_error(category: &str, message: &str) {
    let json = serde_json::json!({ "error": category, "message": message });
    eprintln!("{json}");
}

#[derive(Debug)]
struct Failure(String);

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Failure {}

fn run(cli: Cli) -> Result<()> {
    let g = &cli.global;
    match cli.command {
        Command::Gen { kind, n, out } => {
            let graph = match kind {
                Kind::Cycle => Graph::cycle(n),
                Kind::Path => Graph::path(n),
                Kind::Ladder => Graph::directed_ladder(n),
            }?;
            io::write_graph(&out, &graph)?;
            println!("wrote {} with {} vertices", out.display(), graph.n());
        }
        Command::Model { graph, out, dot, charpoly } => {
            let graph = io::read_graph(&graph)?;
            let model = CompanionModel::build_with(&graph, &options(g)?)?;
            fs::write(&out, model.to_json()?).with_context(|| format!("writing {}", out.display()))?;
            let exact = exact_charpoly(&graph);
            let shown = exact.clone().unwrap_or_else(|| model.charpoly().clone());
            println!("n: {}", model.n());
            println!("charpoly: {}", shown.to_poly_string());
            println!("charpoly source: {}", if exact.is_some() { "exact" } else { "model" });
            println!("cond(V): {:.6e}", model.cond_v());
            println!("cond(D_imp): {:.6e}", model.cond_dimp());
            println!("precision bits: {}", model.precision_bits());
            for w in model.warnings() {
                println!("warning: {w}");
            }
            if let Some(path) = charpoly {
                fs::write(&path, io::polynomial_to_text(&shown))?;
            }
            if let Some(path) = dot {
                let cg = companion_graph(&shown)?;
                fs::write(&path, io::graph_to_dot(&cg, "companion"))?;
            }
        }
        Command::Decompose { graph, out } => {
            let graph = io::read_graph(&graph)?;
            let d = gsp_core::decompose_with(&graph, &ordering(&g.ordering)?)?;
            fs::write(&out, d.to_json()?)?;
            println!("wrote {} ({} eigenvalues)", out.display(), d.n());
        }
        Command::Gzt { graph, signal, out, inverse } => {
            let graph = io::read_graph(&graph)?;
            let model = CompanionModel::build_with(&graph, &options(g)?)?;
            if inverse {
                let p = io::read_signal(&signal, Domain::VertexZ)?;
                let s = igzt(&model, &model.lift(p.values()))?;
                io::write_signal(&out, s.values())?;
            } else {
                let s = io::read_signal(&signal, Domain::Vertex)?;
                let p = gzt(&model, &s)?;
                io::write_signal(&out, &p.to_vec())?;
                println!("p(x) = {}", p.to_poly_string());
            }
        }
        Command::Conv { graph, s, t, out, method, report } => {
            let graph = io::read_graph(&graph)?;
            let model = CompanionModel::build_with(&graph, &options(g)?)?;
            let s = io::read_signal(&s, Domain::Vertex)?;
            let t = io::read_signal(&t, Domain::Vertex)?;
            let fast = FastOptions { pad: g.pad };
            let rep = match method {
                ConvMethod::Filter => convolve(&model, &s, &t, Method::Filter, fast)?,
                ConvMethod::Spectral => convolve(&model, &s, &t, Method::Spectral, fast)?,
                ConvMethod::Fast => convolve(&model, &s, &t, Method::Fast, fast)?,
                ConvMethod::Verify => verify_convolution(&model, &s, &t, fast)?,
            };
            io::write_signal(&out, rep.result.values())?;
            if let Some(path) = report {
                fs::write(&path, rep.to_json()?)?;
            }
            if let Some(diff) = rep.max_crossmethod_diff {
                for d in &rep.diffs {
                    println!("{}-{}: max abs {:.3e}, relative {:.3e}", d.a.as_str(), d.b.as_str(), d.max_abs, d.relative);
                }
                check_tol(diff, g.tol)?;
            }
        }
        Command::DemoLadder { out_dir } => demo_ladder(g, &out_dir)?,
        Command::Signal { kind, n, out, graph, index } => {
            let signal = match kind {
                SignalKind::Random => GraphSignal::random_unit(n, &mut ChaCha8Rng::seed_from_u64(g.seed), Domain::Vertex),
                SignalKind::Basis => {
                    if index >= n {
                        bail!(GspError::InvalidSize { n: index, reason: "basis index must be below n" });
                    }
                    GraphSignal::basis(n, index, Domain::Vertex)
                }
                SignalKind::Delta0 => {
                    let path = graph.context("`delta0` needs --graph")?;
                    let graph = io::read_graph(&path)?;
                    if graph.n() != n {
                        bail!(GspError::DimensionMismatch { expected: graph.n(), found: n });
                    }
                    gsp_core::decompose_with(&graph, &ordering(&g.ordering)?)?.vertex_impulse()
                }
            };
            io::write_signal(&out, signal.values())?;
        }
    }
    Ok(())
}

fn check_tol(diff: f64, tol: f64) -> Result<()> {
    println!("max cross-method relative difference: {diff:.3e} (tolerance {tol:e})");
    if diff > tol {
        return Err(Failure(format!("cross-method difference {diff:.3e} exceeds {tol:e}")).into());
    }
    Ok(())
}

fn exact_charpoly(graph: &Graph) -> Option<Polynomial> {
    if graph.n() > EXACT_MAX_N {
        return None;
    }
    charpoly_exact(graph).ok().map(|p| p.to_polynomial())
}

fn ordering(spec: &str) -> Result<EigenOrdering> {
    if spec == "default" {
        return Ok(EigenOrdering::Default);
    }
    let Some(path) = spec.strip_prefix("file:") else {
        bail!("unknown ordering `{spec}`; expected `default` or `file:<path>`");
    };
    let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
    let perm = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .enumerate()
        .map(|(k, t)| t.parse::<usize>().map_err(|_| GspError::Parse { line: k + 1, msg: format!("bad index `{t}`") }))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(EigenOrdering::Permutation(perm))
}

fn precision(spec: &str) -> Result<Precision> {
    Ok(match spec {
        "auto" => Precision::Auto,
        "double" => Precision::Double,
        bits => Precision::Bits(bits.parse().with_context(|| format!("bad precision `{bits}`"))?),
    })
}

fn options(g: &Global) -> Result<ModelOptions> {
    Ok(ModelOptions {
        ordering: ordering(&g.ordering)?,
        charpoly: if g.exact { CharpolySource::Exact } else { CharpolySource::Spectral },
        precision: precision(&g.precision)?,
        ridge: g.ridge,
    })
}

fn write_series(dir: &Path, name: &str, values: &[Complex64]) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, io::series_to_csv(values)).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn demo_ladder(g: &Global, dir: &Path) -> Result<()> {
    const N: usize = 100;
    fs::create_dir_all(dir)?;
    let graph = Graph::directed_ladder(N)?;
    let model = CompanionModel::build_with(&graph, &options(g)?)?;
    let re = |v: f64| Complex64::new(v, 0.0);
    let step: Vec<Complex64> = (0..N).map(|k| re(if k < 25 { 1.0 } else { 0.0 })).collect();
    let half = N / 2;
    let triangle: Vec<Complex64> =
        (0..N).map(|k| re(if k < half { (k + 1) as f64 } else { (N - k) as f64 } / half as f64)).collect();
    let (ps, pt) = (model.lift(&step), model.lift(&triangle));
    let s = igzt(&model, &ps)?;
    let t = igzt(&model, &pt)?;
    let rep = verify_convolution_z(&model, &ps, &pt, FastOptions { pad: g.pad })?;

    io::write_graph(dir.join("ladder100.coord"), &graph)?;
    write_series(dir, "p_s.csv", &step)?;
    write_series(dir, "p_t.csv", &triangle)?;
    write_series(dir, "s.csv", s.values())?;
    write_series(dir, "t.csv", t.values())?;
    for (m, out) in &rep.outputs {
        write_series(dir, &format!("u_{}.csv", m.as_str()), out.values())?;
    }
    let filter = rep.output(Method::Filter).context("missing filter output")?;
    let fast = rep.output(Method::Fast).context("missing fast output")?;
    let diff: Vec<Complex64> = filter.values().iter().zip(fast.values()).map(|(a, b)| re((a - b).norm())).collect();
    write_series(dir, "abs_diff_filter_fast.csv", &diff)?;
    fs::write(dir.join("report.json"), rep.to_json()?)?;

    println!("graph: directed ladder, N = {N}, precision bits {}", model.precision_bits());
    println!("peak |u|: {:.6e}", rep.result.max_abs());
    for d in &rep.diffs {
        println!("{}-{}: max abs {:.3e}, relative {:.3e}", d.a.as_str(), d.b.as_str(), d.max_abs, d.relative);
    }
    println!("wrote stage CSVs to {}", dir.display());
    check_tol(rep.max_crossmethod_diff.unwrap_or(0.0), g.tol)
}
