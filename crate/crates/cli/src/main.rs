//! `fsph`: command-line front end for flat sphere computations.
//!
//! Exit status is 0 on success, 1 when a check fails and 2 on usage, parse
//! or I/O errors. A path of `-` means stdin or stdout.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use flatsphere::annulus::{self, AnnulusSpec, Boundary};
use flatsphere::bounds::compute_bounds;
use flatsphere::corpus;
use flatsphere::curvature::{cubic_case_check, CurvatureProfile};
use flatsphere::delaunay::delaunayize;
use flatsphere::emit::{saddle_rows, saddles_csv, trajectory_svg};
use flatsphere::geodesic::{count_self_intersections, enumerate_with, trace, Anchor, EnumerateOptions, Start};
use flatsphere::surface::{
    cone_data, generate_doubled_polygon, parse_surface, regular_polygon, validate_surface, ConeSurface, Corner,
    DEFAULT_TOL,
};
use flatsphere::verify::{verify_surface, Budget};

#[derive(Parser)]
#[command(name = "fsph", version, about = "Flat spheres with conical singularities")]
struct Cli {
    /// Relative tolerance for edge-length matching.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Seed for randomized generators.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Node budget for saddle connection searches.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    budget_nodes: u64,
    /// Wall-clock budget for saddle connection searches.
    #[arg(long, global = true)]
    budget_seconds: Option<f64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check every surface invariant and report per check.
    Validate { file: PathBuf },
    /// Cone angles, curvatures, gap and area.
    Info { file: PathBuf },
    /// Curvature gap of a surface or of a raw curvature list.
    Gap {
        #[arg(required_unless_present = "curvatures")]
        file: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "file")]
        curvatures: Option<Vec<f64>>,
    },
    /// Flip to a Delaunay triangulation.
    Delaunay {
        file: PathBuf,
        /// Where to write the flipped surface; stdout when neither this nor
        /// `--report` is given.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the flip report.
        #[arg(long)]
        report: bool,
    },
    /// Trace a geodesic from a point or a corner.
    Trace {
        file: PathBuf,
        #[arg(long)]
        triangle: usize,
        /// Weights `u,v` of corners 1 and 2; the start is `(1−u−v)·c0 + u·c1 + v·c2`.
        #[arg(long, value_delimiter = ',', num_args = 1, conflicts_with = "corner")]
        bary: Option<Vec<f64>>,
        /// Start at the vertex of this corner instead.
        #[arg(long)]
        corner: Option<usize>,
        /// Heading in radians in the triangle's chart.
        #[arg(long, allow_hyphen_values = true)]
        angle: f64,
        #[arg(long)]
        max_length: f64,
        /// Also write the developed trajectory as SVG.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// List saddle connections as CSV, shortest first.
    Saddles {
        file: PathBuf,
        #[arg(long)]
        max_length: f64,
        #[arg(long)]
        simple_only: bool,
        /// Worker threads; 1 runs the search sequentially.
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate every closed-form bound.
    Bounds {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 0)]
        k: u64,
    },
    /// Check every bound on a surface.
    Verify { file: PathBuf },
    /// Flat annulus quantities.
    Annulus {
        #[arg(long = "R")]
        r: f64,
        #[arg(long = "Rp")]
        rp: f64,
        #[arg(long)]
        theta: f64,
        /// Classify the trajectory with this angle to the radial direction.
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long, value_enum, default_value_t = Side::Outer)]
        start: Side,
    },
    /// Write a surface: random doubled polygon by default.
    Generate {
        /// A named corpus surface.
        #[arg(long, conflicts_with_all = ["regular", "vertices"])]
        name: Option<String>,
        /// Doubled regular polygon with this many vertices.
        #[arg(long, conflicts_with = "vertices")]
        regular: Option<usize>,
        /// Vertex count of the random polygon; random in 3..=12 when absent.
        #[arg(long)]
        vertices: Option<usize>,
        /// Resample random polygons until the curvature gap exceeds this.
        #[arg(long, default_value_t = 0.01)]
        min_gap: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    Inner,
    Outer,
}

enum Fail {
    /// Bad input, usage or I/O: exit 2.
    Usage(String),
    /// A check failed: exit 1.
    Check(String),
}

type Res = Result<ExitCode, Fail>;

fn usage(e: impl ToString) -> Fail {
    Fail::Usage(e.to_string())
}

fn check(e: impl ToString) -> Fail {
    Fail::Check(e.to_string())
}

fn read_input(path: &Path) -> Result<String, Fail> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| usage(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), Fail> {
    match path {
        Some(p) if p != Path::new("-") => fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display()))),
        _ => io::stdout().lock().write_all(text.as_bytes()).map_err(|e| usage(format!("stdout: {e}"))),
    }
}

fn load(path: &Path, tol: f64) -> Result<ConeSurface, Fail> {
    let raw = parse_surface(&read_input(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    raw.into_cone_surface(tol).map_err(check)
}

fn join(xs: impl IntoIterator<Item = f64>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn budget(cli: &Cli, parallel: bool) -> Budget {
    Budget { nodes: cli.budget_nodes, seconds: cli.budget_seconds, parallel }
}

fn run(cli: &Cli) -> Res {
    match &cli.cmd {
        Cmd::Validate { file } => {
            let raw = parse_surface(&read_input(file)?).map_err(|e| usage(format!("{}: {e}", file.display())))?;
            let report = validate_surface(&raw, cli.tol);
            println!("{report}");
            Ok(if report.pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Cmd::Info { file } => {
            let s = load(file, cli.tol)?;
            let cones = cone_data(&s);
            let angles: Vec<f64> = cones.iter().map(|c| c.angle).collect();
            let gap = CurvatureProfile::new(s.curvatures()).and_then(|p| p.gap()).map_err(check)?;
            println!("n={}", s.vertex_count());
            println!("triangles={}", s.triangle_count());
            println!("edges={}", s.edge_count());
            println!("area={}", s.area());
            println!("angles={}", join(angles.iter().copied()));
            println!("curvatures={}", join(cones.iter().map(|c| c.curvature)));
            println!("gap={gap}");
            println!("cubic_case={}", cubic_case_check(&angles));
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Gap { file, curvatures } => {
            let ks = match (file, curvatures) {
                (_, Some(ks)) => ks.clone(),
                (Some(f), None) => load(f, cli.tol)?.curvatures(),
                (None, None) => return Err(usage("give a surface file or --curvatures")),
            };
            let p = CurvatureProfile::new(ks).map_err(usage)?;
            let gap = p.gap().map_err(usage)?;
            println!("n={}", p.len());
            println!("gap={gap}");
            println!("cubic_case={}", cubic_case_check(&p.angles()));
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Delaunay { file, out, report } => {
            let s = load(file, cli.tol)?;
            let (d, r) = delaunayize(&s).map_err(check)?;
            if *report {
                println!("{r}");
            }
            if out.is_some() || !*report {
                write_output(out.as_deref(), &d.to_fsph())?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Trace { file, triangle, bary, corner, angle, max_length, svg } => {
            let s = load(file, cli.tol)?;
            if *triangle >= s.triangle_count() {
                return Err(usage(format!("triangle {triangle} out of range")));
            }
            let start = match (bary, corner) {
                (_, Some(c)) => Start::Vertex(Corner::new(*triangle, *c)),
                (Some(b), None) if b.len() == 2 => {
                    let [c0, c1, c2] = s.chart(*triangle);
                    let p = c0 + (c1 - c0) * b[0] + (c2 - c0) * b[1];
                    Start::Interior { triangle: *triangle, point: p }
                }
                _ => return Err(usage("give --bary u,v or --corner c")),
            };
            let t = trace(&s, start, *angle, *max_length).map_err(usage)?;
            let anchor = |a: &Anchor| match a {
                Anchor::Vertex(v) => format!("vertex:{v}"),
                Anchor::Point { triangle, point, direction } => {
                    format!("point:{triangle}:{}:{}:{direction}", point.x, point.y)
                }
            };
            let seq: Vec<String> = t.crossings.iter().map(|c| format!("{}.{}", c.triangle, c.edge)).collect();
            println!("status={}", t.status);
            println!("length={}", t.length);
            println!("start={}", anchor(&t.start));
            println!("end={}", anchor(&t.end));
            println!("crossings={}", t.crossings.len());
            println!("crossing_sequence={}", seq.join(";"));
            println!("self_intersections={}", count_self_intersections(&t));
            if let Some(path) = svg {
                write_output(Some(path), &trajectory_svg(&t, &s).map_err(check)?)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Saddles { file, max_length, simple_only, threads, out } => {
            let s = load(file, cli.tol)?;
            if let Some(n) = threads {
                rayon::ThreadPoolBuilder::new().num_threads(*n).build_global().map_err(usage)?;
            }
            let b = budget(cli, *threads != Some(1));
            let opts = EnumerateOptions {
                node_budget: b.nodes,
                deadline: b.seconds.map(|x| Instant::now() + Duration::from_secs_f64(x)),
                parallel: b.parallel,
            };
            let found = enumerate_with(&s, *max_length, &opts).map_err(usage)?;
            if found.truncated {
                eprintln!(
                    "warning: search budget reached after {} nodes; list is complete only below length {}",
                    found.nodes, found.complete_up_to
                );
            }
            let rows = saddle_rows(&s, &found.connections, *simple_only);
            write_output(out.as_deref(), &saddles_csv(&rows))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Bounds { n, delta, k } => {
            println!("{}", compute_bounds(*n, *delta, *k).map_err(usage)?);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify { file } => {
            let s = load(file, cli.tol)?;
            let r = verify_surface(&s, &budget(cli, true)).map_err(check)?;
            println!("{r}");
            if r.truncated {
                eprintln!(
                    "warning: search budget reached; connections checked only below length {}",
                    r.complete_up_to
                );
            }
            Ok(if r.pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Cmd::Annulus { r, rp, theta, alpha, start } => {
            let a = AnnulusSpec::new(*r, *rp, *theta).map_err(usage)?;
            match a.modulus() {
                Ok(m) => println!("modulus={m}"),
                Err(_) => println!("modulus=inf"),
            }
            println!("sc_lower_bound={}", annulus::annulus_sc_lower_bound(&a));
            if let Some(alpha) = alpha {
                let side = match start {
                    Side::Inner => Boundary::Inner,
                    Side::Outer => Boundary::Outer,
                };
                println!("{}", annulus::classify_trajectory(&a, side, *alpha).map_err(usage)?);
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Generate { name, regular, vertices, min_gap, out } => {
            let s = match (name, regular) {
                (Some(n), _) => corpus::named(n).ok_or_else(|| {
                    usage(format!("unknown surface '{n}'; known: {}", corpus::NAMES.join(", ")))
                })?,
                (None, Some(m)) => {
                    if *m < 3 {
                        return Err(usage("a polygon needs at least 3 vertices"));
                    }
                    generate_doubled_polygon(&regular_polygon(*m), cli.tol).map_err(usage)?
                }
                (None, None) => {
                    if vertices.is_some_and(|m| m < 3) {
                        return Err(usage("a polygon needs at least 3 vertices"));
                    }
                    if !(0.0..1.0 / 3.0).contains(min_gap) {
                        return Err(usage("--min-gap must lie in [0, 1/3)"));
                    }
                    corpus::random_doubled_polygon_with(cli.seed, *vertices, *min_gap)
                }
            };
            write_output(out.as_deref(), &s.to_fsph())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(Fail::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Fail::Check(m)) => {
            eprintln!("check failed: {m}");
            ExitCode::from(1)
        }
    }
}
