use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use ffsc::codes::{
    analyze, checkerboard_fixture, fiducial_bosonization, honeycomb_bosonization, local_commutant,
    CodeAnalysis, CompactHamiltonian, EdgeLabels, CHECKERBOARD_FIXTURE,
};
use ffsc::fermion::{band_structure, default_grid, dos, gap_scan, BandData};
use ffsc::formats::{self, GraphInput};
use ffsc::lattice::{
    abelian_cover, apply_orientation, builtin, elementary_orientation, enlarge_cell,
    OrientationConfig, BUILTIN_NAMES,
};
use ffsc::laurent::{CompactGraph, SignedCompact};
use ffsc::linegraph::{line_graph, recognize, Recognition};

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] ffsc::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Parser)]
#[command(
    name = "ffsc",
    version,
    about = "Free-fermion solvability of translation-invariant spin models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
#[group(required = true, multiple = false)]
struct Source {
    /// Compact graph JSON file.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Built-in lattice name (see `builtin-list`).
    #[arg(long)]
    builtin: Option<String>,
}

#[derive(Args, Clone)]
struct Output {
    /// Output file; standard output when absent.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Manifest path; defaults to `<output>.manifest.json`.
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a graph is a line graph and reconstruct its root (exit 2 if it is not).
    Recognize {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        out: Output,
    },
    /// Line graph of a root graph.
    Linegraph {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        out: Output,
    },
    /// Abelian cover of a base graph given as `{"vertices", "edges": [[u, v, "monomial"]…]}`.
    Cover {
        /// Base graph JSON file
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Enlarge the unit cell by integer factors per axis.
    Enlarge {
        #[command(flatten)]
        source: Source,
        /// Comma-separated factor per axis
        #[arg(long, value_delimiter = ',', required = true)]
        factors: Vec<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// Spin Hamiltonian realising a graph.
    Bosonize {
        #[command(subcommand)]
        kind: Bosonization,
    },
    /// Band energies on a uniform k-grid, as CSV.
    Bands {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        orient: Orientation,
        #[command(flatten)]
        out: Output,
    },
    /// Density-of-states histogram, as CSV.
    Dos {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        orient: Orientation,
        /// Histogram bins over [-e_max, e_max]
        #[arg(long, default_value_t = 401)]
        bins: usize,
        /// Histogram half-width; the largest band energy when absent.
        #[arg(long)]
        e_max: Option<f64>,
        #[command(flatten)]
        out: Output,
    },
    /// Search orientations on magnetic cells for the ground sector and the gap.
    Gapscan {
        #[command(flatten)]
        source: Source,
        /// Largest magnetic-cell factor per axis
        #[arg(long, default_value_t = ffsc::lattice::DEFAULT_MAX_MULTIPLIER)]
        max_multiplier: usize,
        /// Points per axis (one value for all axes, or one per axis).
        #[arg(long, value_delimiter = ',')]
        kgrid: Vec<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// Logical operators of a subsystem code on a torus.
    Logicals {
        /// Shipped term classes to analyse.
        #[arg(long, value_parser = ["checkerboard"])]
        fixture: Option<String>,
        /// Parts of the fixture to include.
        #[arg(long, value_delimiter = ',', default_value = "h0,h1,y_cycles")]
        parts: Vec<String>,
        /// Additional term classes as CompactHamiltonian JSON files.
        #[arg(long)]
        input: Vec<PathBuf>,
        /// Torus sides (one value for all axes, or one per axis).
        #[arg(long = "L", value_delimiter = ',', required = true)]
        sides: Vec<usize>,
        /// Rounds of promoting local commutant elements to term classes before the analysis.
        #[arg(long, default_value_t = 0)]
        rounds: usize,
        /// Block side, in cells, searched for local commutant elements.
        #[arg(long, default_value_t = 2)]
        window: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Names of the built-in lattices.
    BuiltinList {
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Subcommand)]
enum Bosonization {
    /// One qubit per edge class of the frustration graph.
    Fiducial {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        out: Output,
    },
    /// One qubit per root vertex (degree at most 3).
    Honeycomb {
        #[command(flatten)]
        source: Source,
        /// Edge-end labels `{"i-j@m": ["X", "Z"]}`; unlabelled ends are filled in.
        #[arg(long)]
        labels: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args, Clone)]
struct Orientation {
    /// `elementary` or an orientation JSON file; oriented inputs need neither.
    #[arg(long)]
    orientation: Option<String>,
    /// Points per axis (one value for all axes, or one per axis).
    #[arg(long, value_delimiter = ',')]
    kgrid: Vec<usize>,
}

/// Provenance written beside every output.
struct Run {
    command: &'static str,
    parameters: BTreeMap<String, Value>,
    inputs: Vec<Value>,
}

impl Run {
    fn new(command: &'static str) -> Self {
        Self {
            command,
            parameters: BTreeMap::new(),
            inputs: Vec::new(),
        }
    }

    fn param(&mut self, key: &str, v: impl Serialize) {
        self.parameters.insert(
            key.to_string(),
            serde_json::to_value(v).expect("plain data"),
        );
    }

    fn input(&mut self, name: &str, bytes: &[u8]) {
        self.inputs
            .push(json!({ "name": name, "sha256": sha256(bytes) }));
    }

    fn read(&mut self, path: &Path) -> Result<String> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        self.input(&path.display().to_string(), text.as_bytes());
        Ok(text)
    }

    fn graph(&mut self, s: &Source) -> Result<GraphInput> {
        match (&s.input, &s.builtin) {
            (Some(p), _) => {
                let text = self.read(p)?;
                Ok(formats::parse_graph(&text)?)
            }
            (None, Some(name)) => {
                let g = builtin(name)?;
                self.input(
                    &format!("builtin:{name}"),
                    formats::to_json(&formats::graph_file(&g))?.as_bytes(),
                );
                Ok(GraphInput::Unoriented(g))
            }
            (None, None) => Err(CliError::Usage(
                "one of --input or --builtin is required".into(),
            )),
        }
    }

    fn finish(self, out: &Output, body: &[u8]) -> Result<()> {
        match &out.output {
            Some(p) => write(p, body)?,
            None => std::io::stdout()
                .write_all(body)
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })?,
        }
        let manifest_path = out.manifest.clone().or_else(|| {
            out.output.as_ref().map(|p| {
                let mut s = p.clone().into_os_string();
                s.push(".manifest.json");
                PathBuf::from(s)
            })
        });
        if let Some(mp) = manifest_path {
            let output = out
                .output
                .as_ref()
                .map_or("<stdout>".to_string(), |p| p.display().to_string());
            let manifest = json!({
                "tool": "ffsc",
                "version": env!("CARGO_PKG_VERSION"),
                "library_version": ffsc::VERSION,
                "command": self.command,
                "parameters": self.parameters,
                "inputs": self.inputs,
                "outputs": [{ "name": output, "sha256": sha256(body) }],
            });
            write(&mp, formats::to_json(&manifest)?.as_bytes())?;
        }
        Ok(())
    }
}

fn sha256(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn write(path: &Path, body: &[u8]) -> Result<()> {
    fs::write(path, body).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn per_axis(values: &[usize], dim: usize, what: &str) -> Result<Vec<usize>> {
    match values.len() {
        _ if values.contains(&0) => Err(CliError::Usage(format!("{what} must be positive"))),
        1 => Ok(vec![values[0]; dim]),
        n if n == dim => Ok(values.to_vec()),
        n => Err(CliError::Usage(format!(
            "{n} {what} values for dimension {dim}"
        ))),
    }
}

fn kgrid(values: &[usize], dim: usize) -> Result<Vec<usize>> {
    if values.is_empty() {
        Ok(default_grid(dim))
    } else {
        per_axis(values, dim, "kgrid")
    }
}

fn oriented(run: &mut Run, g: GraphInput, choice: &Option<String>) -> Result<SignedCompact> {
    let m = g.unoriented();
    let cfg: OrientationConfig = match (choice.as_deref(), g) {
        (None, GraphInput::Oriented(s)) => {
            run.param("orientation", "input");
            return Ok(s);
        }
        (None, GraphInput::Unoriented(_)) => {
            return Err(CliError::Usage(
                "--orientation is required for an unoriented graph".into(),
            ));
        }
        (Some("elementary"), _) => {
            run.param("orientation", "elementary");
            elementary_orientation(&m)?
        }
        (Some(path), _) => {
            run.param("orientation", path);
            formats::from_json(&run.read(Path::new(path))?)?
        }
    };
    Ok(apply_orientation(&m, &cfg)?)
}

fn bands_for(run: &mut Run, source: &Source, orient: &Orientation) -> Result<BandData> {
    let g = run.graph(source)?;
    let s = oriented(run, g, &orient.orientation)?;
    let grid = kgrid(&orient.kgrid, s.dim())?;
    run.param("kgrid", &grid);
    Ok(band_structure(&s, &grid)?)
}

fn json_body<T: Serialize>(v: &T) -> Result<Vec<u8>> {
    Ok(formats::to_json(v)?.into_bytes())
}

#[derive(Serialize)]
struct LogicalsReport {
    parts: Vec<String>,
    rounds: usize,
    window: usize,
    promoted_classes: usize,
    #[serde(flatten)]
    analysis: CodeAnalysis,
}

/// Exit status and output of one command.
fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Recognize { source, out } => {
            let mut run = Run::new("recognize");
            let g = run.graph(&source)?.unoriented();
            let rec = recognize(&g)?;
            let code = match &rec {
                Recognition::LineGraph(_) => ExitCode::SUCCESS,
                Recognition::NotLineGraph { .. } => ExitCode::from(2),
                Recognition::AmbiguousAfterCoarsening { .. } => ExitCode::FAILURE,
            };
            // the root goes out in graph-file form so it can be fed back in
            let report = match &rec {
                Recognition::LineGraph(r) => json!({
                    "status": "line_graph",
                    "root": formats::graph_file(&r.root),
                    "phi": r.phi,
                    "decomposition": r.decomposition,
                    "coarsening": r.coarsening,
                }),
                other => {
                    serde_json::to_value(other).map_err(|e| ffsc::Error::Parse(e.to_string()))?
                }
            };
            run.finish(&out, &json_body(&report)?)?;
            Ok(code)
        }
        Command::Linegraph { source, out } => {
            let mut run = Run::new("linegraph");
            let g = run.graph(&source)?.unoriented();
            let body = json_body(&formats::graph_file(&line_graph(&g)?))?;
            run.finish(&out, &body)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Cover { input, out } => {
            let mut run = Run::new("cover");
            let base = formats::parse_base_graph(&run.read(&input)?)?;
            let body = json_body(&formats::graph_file(&abelian_cover(&base)?))?;
            run.finish(&out, &body)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Enlarge {
            source,
            factors,
            out,
        } => {
            let mut run = Run::new("enlarge");
            let body = match run.graph(&source)? {
                GraphInput::Unoriented(g) => {
                    let f = per_axis(&factors, g.dim(), "factors")?;
                    run.param("factors", &f);
                    json_body(&formats::graph_file(&enlarge_cell(&g, &f)?))?
                }
                GraphInput::Oriented(s) => {
                    let f = per_axis(&factors, s.dim(), "factors")?;
                    run.param("factors", &f);
                    json_body(&formats::oriented_file(&enlarge_cell(&s, &f)?))?
                }
            };
            run.finish(&out, &body)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Bosonize {
            kind: Bosonization::Fiducial { source, out },
        } => {
            let mut run = Run::new("bosonize-fiducial");
            let g = run.graph(&source)?.unoriented();
            run.finish(&out, &json_body(&fiducial_bosonization(&g)?)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Bosonize {
            kind:
                Bosonization::Honeycomb {
                    source,
                    labels,
                    out,
                },
        } => {
            let mut run = Run::new("bosonize-honeycomb");
            let g = run.graph(&source)?.unoriented();
            let labels: EdgeLabels = match labels {
                Some(p) => formats::from_json(&run.read(&p)?)?,
                None => EdgeLabels::new(),
            };
            run.finish(&out, &json_body(&honeycomb_bosonization(&g, &labels)?)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Bands {
            source,
            orient,
            out,
        } => {
            let mut run = Run::new("bands");
            let b = bands_for(&mut run, &source, &orient)?;
            run.finish(&out, b.to_csv().as_bytes())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Dos {
            source,
            orient,
            bins,
            e_max,
            out,
        } => {
            let mut run = Run::new("dos");
            let b = bands_for(&mut run, &source, &orient)?;
            let e_max = match e_max {
                Some(e) => e,
                None => b.values().map(f64::abs).fold(0.0, f64::max),
            };
            run.param("bins", bins);
            run.param("e_max", e_max);
            run.finish(&out, dos(&b, bins, e_max)?.to_csv().as_bytes())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Gapscan {
            source,
            max_multiplier,
            kgrid: k,
            out,
        } => {
            let mut run = Run::new("gapscan");
            let g = run.graph(&source)?.unoriented();
            let grid = kgrid(&k, g.dim())?;
            run.param("kgrid", &grid);
            run.param("max_multiplier", max_multiplier);
            run.finish(&out, &json_body(&gap_scan(&g, max_multiplier, &grid)?)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Logicals {
            fixture,
            parts,
            input,
            sides,
            rounds,
            window,
            out,
        } => {
            let mut run = Run::new("logicals");
            let mut hs: Vec<CompactHamiltonian> = Vec::new();
            let mut names = Vec::new();
            if let Some(name) = &fixture {
                run.input(&format!("fixture:{name}"), CHECKERBOARD_FIXTURE.as_bytes());
                let f = checkerboard_fixture()?;
                for p in &parts {
                    hs.push(match p.as_str() {
                        "h0" => f.h0.clone(),
                        "h1" => f.h1.clone(),
                        "y_cycles" => f.y_cycles.clone(),
                        "dimers" => f.dimers.clone(),
                        other => {
                            return Err(CliError::Usage(format!("unknown fixture part {other:?}")))
                        }
                    });
                    names.push(format!("{name}:{p}"));
                }
            }
            for p in &input {
                hs.push(formats::from_json(&run.read(p)?)?);
                names.push(p.display().to_string());
            }
            let Some(first) = hs.first() else {
                return Err(CliError::Usage(
                    "no term classes: give --fixture or --input".into(),
                ));
            };
            let l = per_axis(&sides, first.dim, "L")?;
            run.param("L", &l);
            run.param("rounds", rounds);
            run.param("window", window);
            run.param("parts", &names);
            let mut promoted_classes = 0;
            for _ in 0..rounds {
                let refs: Vec<&CompactHamiltonian> = hs.iter().collect();
                let extra = local_commutant(&refs, window)?;
                promoted_classes += extra.terms.len();
                hs.push(extra);
            }
            let refs: Vec<&CompactHamiltonian> = hs.iter().collect();
            let analysis = analyze(&refs, &l)?;
            let report = LogicalsReport {
                parts: names,
                rounds,
                window,
                promoted_classes,
                analysis,
            };
            run.finish(&out, &json_body(&report)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::BuiltinList { out } => {
            let run = Run::new("builtin-list");
            let mut body = String::new();
            for name in BUILTIN_NAMES {
                let g: CompactGraph = builtin(name)?;
                body.push_str(&format!(
                    "{name}\tdim={}\tcell_vertices={}\n",
                    g.dim(),
                    g.rows()
                ));
            }
            run.finish(&out, body.as_bytes())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

#[cfg(feature = "parallel")]
fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("FFSC_THREADS") {
        let n: usize = v.parse().ok().filter(|&n| n > 0).ok_or_else(|| {
            CliError::Usage(format!("FFSC_THREADS={v:?} is not a positive integer"))
        })?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    }
    Ok(())
}

#[cfg(not(feature = "parallel"))]
fn configure_threads() -> Result<()> {
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match configure_threads().and_then(|()| run(cli.command)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
