//! `tecsim`: reproducible experiments on the eight-qubit error-correction
//! cluster, its cell complexes and its entanglement witness.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tecsim_core::cell_complex::{
    build_cuboid_complex, build_elementary_cell, build_g8_complex, CellComplex, FACE, VOLUME,
};
use tecsim_core::cluster::{build_cluster, interaction_graph, stabilizer_generators, surface_correlation, Engine};
use tecsim_core::tec::{
    analytic_protected, decode_table, exact_enumeration, monte_carlo_sweep, p_grid, sweep_to_csv,
    ErrorFrame, ErrorPattern, SweepConfig, SweepRow, SyndromeVector, TrialEngine,
};
use tecsim_core::witness::{build_witness, witness_report};
use tecsim_core::VERSION;

#[derive(Parser, Debug)]
#[command(name = "tecsim", version, about = "Topological error correction on small cluster states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Syndrome of every single-qubit error and the full decoder table.
    SyndromeTable {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte-Carlo error rates with and without correction over a grid of p.
    Sweep {
        #[arg(long, default_value_t = 2011)]
        seed: u64,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0.0)]
        p_min: f64,
        #[arg(long, default_value_t = 1.0)]
        p_max: f64,
        #[arg(long, default_value_t = 21)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = EngineArg::Fast)]
        engine: EngineArg,
        #[arg(long, value_enum, default_value_t = FrameArg::ClusterZ)]
        frame: FrameArg,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Worker threads; 0 uses one per core.
        #[arg(long, default_value_t = 0)]
        threads: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Witness value and fidelity bound under white noise.
    Witness {
        #[arg(long, value_delimiter = ',', default_values_t = vec![1.0, 0.605, 0.5, 0.0])]
        visibility: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cell counts, boundary check and closed-surface classes of a complex.
    Complex {
        /// `elementary`, `g8`, `cuboid:LxWxT` (or `cuboid LxWxT`), or a JSON file.
        #[arg(long, default_value = "g8")]
        complex: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Interaction graph of a complex as JSON adjacency lists.
    Graph {
        #[arg(long, default_value = "g8")]
        complex: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum EngineArg {
    Fast,
    Tableau,
    Dense,
}

impl From<EngineArg> for TrialEngine {
    fn from(e: EngineArg) -> Self {
        match e {
            EngineArg::Fast => TrialEngine::Fast,
            EngineArg::Tableau => TrialEngine::Tableau,
            EngineArg::Dense => TrialEngine::Dense,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FrameArg {
    ClusterZ,
    ExperimentX,
}

impl From<FrameArg> for ErrorFrame {
    fn from(f: FrameArg) -> Self {
        match f {
            FrameArg::ClusterZ => ErrorFrame::ClusterZ,
            FrameArg::ExperimentX => ErrorFrame::ExperimentX,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::SyndromeTable { format, out } => emit(out.as_deref(), &syndrome_table(format)?),
        Command::Sweep {
            seed,
            trials,
            p_min,
            p_max,
            steps,
            engine,
            frame,
            format,
            threads,
            out,
        } => {
            if format == Format::Text {
                bail!("sweep supports --format csv or json");
            }
            let config = SweepConfig {
                p_values: p_grid(p_min, p_max, steps)?,
                trials,
                seed,
                engine: engine.into(),
                frame: frame.into(),
            };
            self_check_enumeration(&config.p_values)?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .context("building worker pool")?;
            let rows = pool.install(|| monte_carlo_sweep(&config))?;
            let text = match format {
                Format::Json => sweep_json(&config, &rows)?,
                _ => sweep_to_csv(&rows, VERSION),
            };
            emit(out.as_deref(), &text)?;
            let worst = rows.iter().map(SweepRow::max_sigma_deviation).fold(0.0, f64::max);
            eprintln!(
                "{VERSION}: {} points x {trials} trials, max |MC - analytic| = {worst:.3} sigma",
                rows.len()
            );
            Ok(())
        }
        Command::Witness { visibility, out } => emit(out.as_deref(), &witness_json(&visibility)?),
        Command::Complex { complex, out } => {
            let cx = load_complex(&complex)?;
            let (text, ok) = complex_json(&complex, &cx)?;
            emit(out.as_deref(), &text)?;
            if !ok {
                bail!("boundary of a boundary is not zero in `{complex}`");
            }
            Ok(())
        }
        Command::Graph { complex, out } => {
            let cx = load_complex(&complex)?;
            let graph = interaction_graph(&cx)?;
            if graph.num_vertices() <= 64 {
                let state = build_cluster(&graph, Engine::Tableau)?;
                for k in stabilizer_generators(&graph) {
                    if state.expectation(&k.operator)? != 1 {
                        bail!("generator at `{}` is not stabilized", graph.label(k.center));
                    }
                }
            }
            let adjacency: Value = serde_json::from_str(&graph.to_json())?;
            let doc = json!({ "version": VERSION, "complex": complex, "graph": adjacency });
            emit(out.as_deref(), &pretty(&doc)?)
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn pretty(v: &Value) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn self_check_enumeration(p_values: &[f64]) -> Result<()> {
    for &p in p_values {
        let (exact, formula) = (exact_enumeration(p)?, analytic_protected(p)?);
        if (exact - formula).abs() > 1e-12 {
            bail!("self-check failed at p = {p}: enumeration {exact} vs formula {formula}");
        }
    }
    Ok(())
}

fn signs(s: SyndromeVector) -> Vec<String> {
    s.0.iter().map(|&v| if v > 0 { "+1".into() } else { "-1".into() }).collect()
}

fn syndrome_table(format: Format) -> Result<String> {
    let table = decode_table();
    let mut single = Vec::new();
    for q in 1..=6 {
        let pattern = ErrorPattern::from_labels(&[q])?;
        let s = SyndromeVector::of_pattern(pattern);
        if table.correction(s) != pattern {
            bail!("self-check failed: single error on qubit {q} is not decoded to itself");
        }
        single.push((q, s));
    }
    let completed: Vec<(SyndromeVector, ErrorPattern)> = SyndromeVector::all()
        .map(|s| (s, table.correction(s)))
        .filter(|(_, c)| c.weight() != 1)
        .collect();
    match format {
        Format::Json => {
            let rows: Vec<Value> = single
                .iter()
                .map(|&(q, s)| json!({ "error": [q], "syndrome": s.0, "correction": [q] }))
                .collect();
            let rest: Vec<Value> = completed
                .iter()
                .map(|&(s, c)| json!({ "syndrome": s.0, "correction": c.labels() }))
                .collect();
            pretty(&json!({ "version": VERSION, "single_errors": rows, "completed": rest }))
        }
        _ => {
            let mut out = format!("# {VERSION}\n");
            out.push_str("error  C12 C25 C36 C34  correction\n");
            let line = |label: String, s: SyndromeVector, c: ErrorPattern| {
                format!("{label:<6} {}  {c}\n", signs(s).join("  "))
            };
            for &(q, s) in &single {
                out.push_str(&line(q.to_string(), s, table.correction(s)));
            }
            for &(s, c) in &completed {
                out.push_str(&line("-".into(), s, c));
            }
            Ok(out)
        }
    }
}

fn sweep_json(config: &SweepConfig, rows: &[SweepRow]) -> Result<String> {
    pretty(&json!({
        "version": VERSION,
        "config": {
            "seed": config.seed,
            "trials": config.trials,
            "engine": config.engine,
            "frame": config.frame,
            "p_values": config.p_values,
        },
        "rows": rows,
    }))
}

fn witness_json(visibilities: &[f64]) -> Result<String> {
    let witness = build_witness()?;
    let deviation = witness.form_deviation()?;
    if deviation > 1e-10 {
        bail!("self-check failed: witness forms differ by {deviation}");
    }
    let reports = visibilities
        .iter()
        .map(|&v| witness_report(&witness, v))
        .collect::<tecsim_core::Result<Vec<_>>>()?;
    pretty(&json!({
        "version": VERSION,
        "form_deviation": deviation,
        "reports": reports,
    }))
}

fn parse_dims(text: &str) -> Result<(usize, usize, usize)> {
    let parts: Vec<&str> = text.trim().split('x').collect();
    if parts.len() != 3 {
        bail!("cuboid size must look like LxWxT, got `{text}`");
    }
    let n = |s: &str| s.parse::<usize>().with_context(|| format!("bad cuboid size `{text}`"));
    Ok((n(parts[0])?, n(parts[1])?, n(parts[2])?))
}

fn load_complex(name: &str) -> Result<CellComplex> {
    let name = name.trim();
    if let Some(dims) = name.strip_prefix("cuboid:").or_else(|| name.strip_prefix("cuboid ")) {
        let (l, w, t) = parse_dims(dims)?;
        return Ok(build_cuboid_complex(l, w, t)?);
    }
    match name {
        "elementary" => Ok(build_elementary_cell()),
        "g8" => Ok(build_g8_complex()),
        path => {
            let text = fs::read_to_string(path).with_context(|| format!("unknown complex or unreadable file `{path}`"))?;
            CellComplex::from_json(&text).with_context(|| format!("parsing {path}"))
        }
    }
}

/// Two-face closed surfaces are listed for complexes with at most this many faces.
const PAIR_LISTING_LIMIT: usize = 64;

fn complex_json(name: &str, cx: &CellComplex) -> Result<(String, bool)> {
    let counts = cx.counts();
    let ok = cx.boundary_squared_vanishes();
    let boundaries = cx.boundary_space(FACE)?;
    let cycle_rank = counts.faces - cx.boundary_rank(FACE);
    let mut surfaces = json!({
        "cycle_rank": cycle_rank,
        "boundary_rank": boundaries.rank(),
        "homology_rank": cx.betti(FACE),
    });
    if counts.faces <= PAIR_LISTING_LIMIT {
        let (mut trivial, mut nontrivial) = (Vec::new(), Vec::new());
        let faces = cx.names(FACE);
        for a in 0..faces.len() {
            for b in a + 1..faces.len() {
                let chain = cx.chain(FACE, &[faces[a].as_str(), faces[b].as_str()])?;
                if !cx.is_closed(&chain)? {
                    continue;
                }
                let pair = json!([faces[a], faces[b]]);
                if boundaries.witness(&chain)?.is_some() {
                    trivial.push(pair);
                } else {
                    nontrivial.push(pair);
                }
            }
        }
        surfaces["two_face_boundaries"] = json!(trivial);
        surfaces["two_face_nontrivial"] = json!(nontrivial);
    }
    if counts.faces + counts.edges <= 64 && counts.faces > 0 {
        let graph = interaction_graph(cx)?;
        let state = build_cluster(&graph, Engine::Tableau)?;
        for v in 0..counts.volumes {
            let vol = cx.chain(VOLUME, &[cx.names(VOLUME)[v].as_str()])?;
            let surface = cx.boundary(&vol)?;
            if surface_correlation(&state, &surface.cell_names(cx))? != 1 {
                bail!("self-check failed: boundary of `{}` has no unit correlation", cx.names(VOLUME)[v]);
            }
        }
    }
    let doc = json!({
        "version": VERSION,
        "complex": name,
        "counts": {
            "volumes": counts.volumes,
            "faces": counts.faces,
            "edges": counts.edges,
            "vertices": counts.vertices,
        },
        "boundary_squared_zero": ok,
        "betti": [cx.betti(0), cx.betti(1), cx.betti(2), cx.betti(3)],
        "closed_surfaces": surfaces,
    });
    Ok((pretty(&doc)?, ok))
}
