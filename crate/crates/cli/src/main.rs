mod parse;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hyperstretch::delaunay::{delaunay, empty_ball_certificate, PointSet2};
use hyperstretch::frechet::{barycenter_with_stats, WeightedPointSet};
use hyperstretch::hgeom::dist;
use hyperstretch::scenarios::{self, ScenarioConfig, ScenarioId, SCHEMA};
use hyperstretch::stretch::{one_point_extension, FiniteMapData};
use hyperstretch::words::{drift_scan_with, ratio_sup_with, to_csv, RelationMode, Representation, DRIFT_CAVEAT};
use hyperstretch::{Error, Result};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "hyperstretch", version, about = "Isometries of H² and H³, length ratios, drift scans and Lipschitz extensions")]
struct Cli {
    /// Emit JSON.
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Emit CSV (word tables of ratio-sup and drift).
    #[arg(long, global = true)]
    csv: bool,
    /// Seed recorded in reports.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Isometry class of a matrix.
    Classify(MatrixArg),
    /// Translation length λ.
    Length(MatrixArg),
    /// Cartan projection μ, the displacement of the basepoint.
    Mu(MatrixArg),
    /// Hyperbolic distance between two points.
    Dist {
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
    },
    /// Supremum of λ(ρ(γ))/λ(j(γ)) over words of length at most L.
    RatioSup(PairArgs),
    /// Drift μ_j − μ_ρ over the ball of radius L.
    Drift(PairArgs),
    /// Weighted Fréchet barycenter.
    Barycenter {
        /// JSON list of points.
        #[arg(long)]
        points: String,
        /// JSON list of weights (uniform when omitted).
        #[arg(long)]
        weights: Option<String>,
    },
    /// Delaunay triangulation of points of H².
    Delaunay {
        #[arg(long)]
        points: String,
        /// Print the mesh in OFF format.
        #[arg(long)]
        off: bool,
    },
    /// Extends a finite map to one more point with the least constant.
    Extend {
        /// JSON list of [source, image] pairs.
        #[arg(long)]
        pairs: String,
        #[arg(long)]
        point: String,
    },
    /// Runs a worked example and checks its values.
    Scenario(ScenarioArgs),
}

#[derive(Args)]
struct MatrixArg {
    /// `[[a, b], [c, d]]`; complex entries as `[re, im]`.
    #[arg(long)]
    matrix: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Free,
    Reflection,
}

#[derive(Args)]
struct PairArgs {
    /// JSON list of generator matrices for j.
    #[arg(long)]
    j: String,
    /// JSON list of generator matrices for ρ.
    #[arg(long)]
    rho: String,
    #[arg(long = "length", short = 'L')]
    length: usize,
    #[arg(long, value_enum, default_value = "free")]
    mode: Mode,
    /// Disable the parallel scan.
    #[arg(long)]
    sequential: bool,
}

#[derive(Args)]
struct ScenarioArgs {
    /// ex81, ex91, ex94, ex97 or ex98.
    id: String,
    #[arg(long)]
    kmax: Option<u32>,
    /// First index N of the generators (ex91).
    #[arg(long)]
    n: Option<u32>,
    /// Number of extra generators m (ex91).
    #[arg(long)]
    m: Option<u32>,
    /// Word length L.
    #[arg(long = "length", short = 'L')]
    length: Option<usize>,
    /// Number of sample points (ex94).
    #[arg(long)]
    grid: Option<usize>,
    /// Source radius t (ex81).
    #[arg(long)]
    t: Option<f64>,
    /// Target radius T (ex81).
    #[arg(long = "big-t")]
    big_t: Option<f64>,
}

enum Format {
    Text,
    Json,
    Csv,
}

struct Output {
    body: String,
    failed: bool,
}

impl Output {
    fn ok(body: String) -> Self {
        Output { body, failed: false }
    }
}

fn envelope(command: &str, result: Value) -> String {
    let v = json!({ "schema": SCHEMA, "command": command, "result": result });
    serde_json::to_string_pretty(&v).expect("json values serialize")
}

fn representation(s: &str, mode: Mode) -> Result<Representation> {
    let gens = parse::matrices(s)?;
    let mode = match mode {
        Mode::Free => RelationMode::Free,
        Mode::Reflection => RelationMode::Reflection,
    };
    Representation::new(gens, mode)
}

fn label<T: serde::Serialize>(x: &T) -> String {
    match serde_json::to_value(x) {
        Ok(Value::String(s)) => s,
        Ok(v) => v.to_string(),
        Err(_) => String::new(),
    }
}

fn run(cli: &Cli) -> Result<Output> {
    let format = if cli.json {
        Format::Json
    } else if cli.csv {
        Format::Csv
    } else {
        Format::Text
    };
    let scalar = |name: &str, value: f64, g: &hyperstretch::moebius::Isometry| match format {
        Format::Json => envelope(name, json!({ "matrix": parse::matrix_json(g), "value": value })),
        _ => format!("{value:?}"),
    };
    let out = match &cli.command {
        Command::Classify(m) => {
            let g = parse::matrix(&m.matrix)?;
            let class = g.classify();
            match format {
                Format::Json => envelope("classify", json!({ "matrix": parse::matrix_json(&g), "class": class })),
                _ => label(&class),
            }
        }
        Command::Length(m) => {
            let g = parse::matrix(&m.matrix)?;
            scalar("length", g.translation_length(), &g)
        }
        Command::Mu(m) => {
            let g = parse::matrix(&m.matrix)?;
            scalar("mu", g.cartan_mu(), &g)
        }
        Command::Dist { p, q } => {
            let d = dist(&parse::point(p)?, &parse::point(q)?)?;
            match format {
                Format::Json => envelope("dist", json!({ "distance": d })),
                _ => format!("{d:?}"),
            }
        }
        Command::RatioSup(a) => {
            let (j, rho) = (representation(&a.j, a.mode)?, representation(&a.rho, a.mode)?);
            let r = ratio_sup_with(&j, &rho, a.length, !a.sequential)?;
            match format {
                Format::Json => envelope("ratio-sup", serde_json::to_value(&r).map_err(internal)?),
                Format::Csv => to_csv(&r.top),
                Format::Text => {
                    let mut s = match r.value {
                        Some(v) => format!("C'_{} = {v:?} ({} classes scanned)\n", r.length, r.classes_scanned),
                        None => format!("C'_{}: no word is hyperbolic under j\n", r.length),
                    };
                    s.push_str(&to_csv(&r.top));
                    s
                }
            }
        }
        Command::Drift(a) => {
            let (j, rho) = (representation(&a.j, a.mode)?, representation(&a.rho, a.mode)?);
            let r = drift_scan_with(&j, &rho, a.length, !a.sequential)?;
            match format {
                Format::Json => envelope("drift", serde_json::to_value(&r).map_err(internal)?),
                Format::Csv => format!("# {DRIFT_CAVEAT}\n{}", to_csv(&r.worst)),
                Format::Text => {
                    let mut s = format!("verdict: {}\n", r.verdict.label());
                    if let Some(m) = r.min_drift {
                        s.push_str(&format!("min drift: {m:?}\n"));
                    }
                    for l in &r.per_length {
                        s.push_str(&format!(
                            "length {}: {} words, drift in [{:?}, {:?}]\n",
                            l.len, l.count, l.min_drift, l.max_drift
                        ));
                    }
                    if let Some(f) = r.fit {
                        s.push_str(&format!("fit: mu_rho <= {:?} mu_j + {:?}\n", f.c, f.d));
                    }
                    s.push_str(&format!("violations: {}\n", r.violations.count));
                    s.push_str(DRIFT_CAVEAT);
                    s.push('\n');
                    s
                }
            }
        }
        Command::Barycenter { points, weights } => {
            let pts = parse::points(points)?;
            let w = match weights {
                Some(w) => WeightedPointSet::new(pts, parse::numbers(w)?)?,
                None => WeightedPointSet::uniform(pts)?,
            };
            let (b, stats) = barycenter_with_stats(&w)?;
            match format {
                Format::Json => envelope("barycenter", json!({ "point": b, "stats": stats })),
                _ => serde_json::to_string(&b).map_err(internal)?,
            }
        }
        Command::Delaunay { points, off } => {
            let x = PointSet2::new(parse::points(points)?)?;
            let t = delaunay(&x)?;
            let cert = empty_ball_certificate(&t, x.points())?;
            if *off {
                t.to_off()
            } else {
                match format {
                    Format::Json => envelope(
                        "delaunay",
                        json!({
                            "vertices": t.vertices,
                            "triangles": t.triangles,
                            "boundary": t.boundary,
                            "certificates": cert,
                        }),
                    ),
                    _ => {
                        let mut s = String::new();
                        for (tri, c) in t.triangles.iter().zip(&cert.certificates) {
                            s.push_str(&format!("{} {} {} {} margin {:e}\n", tri[0], tri[1], tri[2], label(&c.region), c.margin));
                        }
                        s
                    }
                }
            }
        }
        Command::Extend { pairs, point } => {
            let data = FiniteMapData::new(parse::pairs(pairs)?)?;
            let e = one_point_extension(&data, &parse::point(point)?)?;
            match format {
                Format::Json => envelope("extend", json!({ "lipschitz": data.lipschitz(), "extension": e })),
                _ => format!("{} {:?}", serde_json::to_string(&e.point).map_err(internal)?, e.constant),
            }
        }
        Command::Scenario(a) => {
            let id: ScenarioId = a.id.parse()?;
            let cfg = ScenarioConfig {
                id,
                k_max: a.kmax,
                n: a.n,
                m: a.m,
                length: a.length,
                grid: a.grid,
                t: a.t,
                big_t: a.big_t,
                seed: cli.seed,
            };
            let report = scenarios::run(&cfg)?;
            let body = match format {
                Format::Json => report.to_json(),
                _ => {
                    let mut s = String::new();
                    for c in &report.checks {
                        s.push_str(&format!(
                            "{} {}: observed {} expected {} ({} tol {:e})\n",
                            if c.passed { "PASS" } else { "FAIL" },
                            c.name,
                            c.observed,
                            c.expected,
                            label(&c.relation),
                            c.tolerance
                        ));
                    }
                    s.push_str(if report.passed { "scenario passed\n" } else { "scenario FAILED\n" });
                    s
                }
            };
            return Ok(Output { body, failed: !report.passed });
        }
    };
    Ok(Output::ok(out))
}

fn internal(e: serde_json::Error) -> Error {
    Error::Precondition(format!("serialization failed: {e}"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = std::panic::catch_unwind(|| run(&cli));
    match result {
        Ok(Ok(out)) => {
            let mut body = out.body;
            if !body.ends_with('\n') {
                body.push('\n');
            }
            match &cli.out {
                Some(path) => {
                    if let Err(e) = fs::write(path, &body) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(1);
                    }
                }
                None => print!("{body}"),
            }
            if out.failed {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(_) => ExitCode::from(2),
    }
}
