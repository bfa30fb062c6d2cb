//! `unitdist`: connectivity verdicts, unit-step paths, diameter bounds,
//! square component maps, random walks and grid-oracle reports.
//!
//! Exit codes: 0 on success, 1 when the query is infeasible or a result
//! fails validation, 2 on bad input.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use unitdist::{
    best_split, build_grid_graph, classify_point, emit_region_svg, find_path, histogram2d, hypercube_bound,
    hyperrectangle_bound, hyperrectangle_path_with_split, is_connected, oracle_report, rectangle_bound,
    run_ensemble, validate_path, ConvexBody, Error, Histogram2d, Point, Shape, StepPath, Tolerances,
    WalkConfig,
};

#[derive(Parser, Debug)]
#[command(name = "unitdist", version, about = "Unit-distance graphs on closed convex bodies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether the unit-distance graph of a body is connected.
    Connect {
        #[command(flatten)]
        body: BodyArg,
        #[command(flatten)]
        out: OutArg,
    },
    /// Construct and validate a unit-step path between two body points.
    Path {
        #[command(flatten)]
        body: BodyArg,
        /// Start point, comma separated.
        #[arg(long, value_parser = parse_point)]
        u: Point,
        /// End point, comma separated.
        #[arg(long, value_parser = parse_point)]
        v: Point,
        /// Axis indices of the first rectangle side group (boxes only).
        #[arg(long, value_delimiter = ',')]
        split: Option<Vec<usize>>,
        #[command(flatten)]
        tol: TolArg,
        #[command(flatten)]
        out: OutArg,
    },
    /// Diameter bound for a box with sides `--l`, or the cube of side
    /// 2/√d with `--dim d`.
    Bound {
        #[arg(long, value_delimiter = ',', conflicts_with = "dim", required_unless_present = "dim")]
        l: Option<Vec<f64>>,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        split: Option<Vec<usize>>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Component labels on a grid over the square [0, l]², and optionally
    /// the region map as SVG (l < √2).
    Components {
        #[arg(long)]
        l: f64,
        /// Label grid spacing.
        #[arg(long, default_value_t = 0.01)]
        grid_h: f64,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Run an ensemble of uniform unit-step random walks.
    Walk {
        #[command(flatten)]
        body: BodyArg,
        #[arg(long, value_parser = parse_point)]
        start: Point,
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = 1000)]
        runs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write every trajectory point to this CSV.
        #[arg(long)]
        trajectories: Option<PathBuf>,
        /// Write the binned final-position density to this CSV (planar bodies).
        #[arg(long)]
        hist: Option<PathBuf>,
        #[arg(long, default_value_t = 50)]
        bins: usize,
        /// Write the binned density as an SVG heatmap (planar bodies).
        #[arg(long)]
        svg: Option<PathBuf>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Grid-oracle report: components and BFS distances for point pairs.
    Oracle {
        #[command(flatten)]
        body: BodyArg,
        #[arg(long, default_value_t = 0.02)]
        grid_h: f64,
        /// Edge slack; defaults to twice the grid spacing.
        #[arg(long)]
        edge_delta: Option<f64>,
        /// Pairs as `x,y:x,y`, separated by `;`.
        #[arg(long, value_parser = parse_pairs)]
        pairs: Option<Pairs>,
        #[arg(long, value_parser = parse_point, requires = "v")]
        u: Option<Point>,
        #[arg(long, value_parser = parse_point, requires = "u")]
        v: Option<Point>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Check a path file against a body.
    Validate {
        #[command(flatten)]
        body: BodyArg,
        /// StepPath JSON as written by `path`.
        #[arg(long)]
        path: PathBuf,
        #[command(flatten)]
        tol: TolArg,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Args, Debug)]
struct BodyArg {
    /// Body descriptor: a JSON file, or inline JSON such as
    /// '{"type":"hyperrectangle","l":[1.6,1.2]}'.
    #[arg(long = "body")]
    source: String,
}

#[derive(Args, Debug)]
struct OutArg {
    /// Output file (written atomically); stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TolArg {
    /// Step-length and membership slack used by validation.
    #[arg(long, default_value_t = Tolerances::default().geom_eps)]
    tol: f64,
}

type Pairs = Vec<(Point, Point)>;

struct Failure {
    code: u8,
    err: anyhow::Error,
}

impl Failure {
    fn input(err: impl Into<anyhow::Error>) -> Self {
        Failure { code: 2, err: err.into() }
    }

    fn infeasible(err: impl Into<anyhow::Error>) -> Self {
        Failure { code: 1, err: err.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::DimensionMismatch { .. }
            | Error::EmptyPoint
            | Error::NonFinite
            | Error::EmptyInput
            | Error::DegenerateHalfSpace
            | Error::DegenerateSimplex
            | Error::InvalidParameter(_)
            | Error::OutsideBody
            | Error::GridTooLarge { .. } => 2,
            Error::NoCrossing
            | Error::Precondition(_)
            | Error::Disconnected(_)
            | Error::Numerical(_)
            | Error::Unsupported(_) => 1,
        };
        Failure { code, err: e.into() }
    }
}

type CliResult<T> = Result<T, Failure>;

fn parse_point(s: &str) -> Result<Point, String> {
    let coords = s
        .split(',')
        .map(|c| c.trim().parse::<f64>().map_err(|e| format!("bad coordinate {c:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    Point::new(coords).map_err(|e| e.to_string())
}

fn parse_pairs(s: &str) -> Result<Pairs, String> {
    s.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let (a, b) = p.split_once(':').ok_or_else(|| format!("pair {p:?} needs `u:v`"))?;
            Ok((parse_point(a)?, parse_point(b)?))
        })
        .collect()
}

fn load_body(arg: &BodyArg) -> CliResult<ConvexBody> {
    let text = if arg.source.trim_start().starts_with('{') {
        arg.source.clone()
    } else {
        fs::read_to_string(&arg.source)
            .with_context(|| format!("reading body file {}", arg.source))
            .map_err(Failure::input)?
    };
    Ok(ConvexBody::from_json(&text)?)
}

/// Writes through a sibling temporary file and a rename, so readers never
/// see a partial file.
fn write_atomic(path: &Path, contents: &str) -> anyhow::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let name = path
        .file_name()
        .ok_or_else(|| anyhow!("output path {} has no file name", path.display()))?;
    let tmp = dir.join(format!(".{}.tmp-{}", name.to_string_lossy(), std::process::id()));
    fs::write(&tmp, contents).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("renaming onto {}", path.display()))?;
    Ok(())
}

fn emit(out: &OutArg, contents: &str) -> CliResult<()> {
    match &out.out {
        Some(p) => write_atomic(p, contents).map_err(Failure::input),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(contents.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::input(anyhow!(e)))
        }
    }
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    write_atomic(path, contents).map_err(Failure::input)
}

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("outputs serialize");
    s.push('\n');
    s
}

fn connect(body: &BodyArg, out: &OutArg) -> CliResult<()> {
    let verdict = is_connected(&load_body(body)?)?;
    emit(out, &json(&verdict))
}

fn path_cmd(body: &BodyArg, u: &Point, v: &Point, split: Option<&[usize]>, tol: f64, out: &OutArg) -> CliResult<()> {
    let body = load_body(body)?;
    let path = match split {
        None => find_path(&body, u, v)?,
        Some(split) => match (body.shape(), body.placement()) {
            (Shape::Hyperrectangle(h), None) => hyperrectangle_path_with_split(h.sides(), split, u, v)?,
            _ => {
                return Err(Failure::input(anyhow!(
                    "--split applies to unplaced hyperrectangles only"
                )))
            }
        },
    };
    let report = validate_path(&body, &path, tol);
    if !report.valid {
        let first = report.violations.first().map(|v| v.to_string()).unwrap_or_default();
        return Err(Failure::infeasible(anyhow!(
            "constructed path failed validation ({} violations, first: {first})",
            report.violations.len()
        )));
    }
    emit(out, &json(&path))
}

fn bound(l: Option<&[f64]>, dim: Option<usize>, split: Option<&[usize]>, out: &OutArg) -> CliResult<()> {
    let b = match (l, dim) {
        (_, Some(d)) => hypercube_bound(d)?,
        (Some(l), None) if l.len() == 2 && split.is_none() => rectangle_bound(l[0], l[1])?,
        (Some(l), None) => {
            let split = split.map_or_else(|| best_split(l), <[usize]>::to_vec);
            hyperrectangle_bound(l, &split)?
        }
        (None, None) => return Err(Failure::input(anyhow!("give --l or --dim"))),
    };
    emit(out, &json(&b))
}

fn components(l: f64, h: f64, svg: Option<&Path>, out: &OutArg) -> CliResult<()> {
    if h <= 0.0 || !h.is_finite() {
        return Err(Failure::input(anyhow!("--grid-h must be positive")));
    }
    let n = (l / h + 1e-9).floor() as usize;
    let mut csv = String::from("x,y,regime,component\n");
    for j in 0..=n {
        for i in 0..=n {
            let (x, y) = (i as f64 * h, j as f64 * h);
            let label = classify_point(l, &Point::xy(x, y))?;
            let regime = serde_json::to_value(label.regime).expect("regime serializes");
            writeln!(
                csv,
                "{x},{y},{},{}",
                regime.as_str().unwrap_or_default(),
                label.component.name()
            )
            .expect("string write");
        }
    }
    if let Some(p) = svg {
        write_file(p, &emit_region_svg(l)?)?;
    }
    emit(out, &csv)
}

fn heatmap_svg(hist: &Histogram2d) -> String {
    let cell = 8.0;
    let size = cell * hist.bins as f64;
    let max = hist
        .freq
        .iter()
        .flatten()
        .copied()
        .fold(0.0_f64, f64::max)
        .max(f64::MIN_POSITIVE);
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">\n"
    );
    for (j, row) in hist.freq.iter().enumerate() {
        for (i, v) in row.iter().enumerate() {
            if *v == 0.0 {
                continue;
            }
            let shade = 255.0 * (1.0 - (v / max).sqrt());
            let y = size - cell * (j + 1) as f64;
            writeln!(
                s,
                "  <rect x=\"{}\" y=\"{y}\" width=\"{cell}\" height=\"{cell}\" fill=\"rgb({:.0},{:.0},255)\"/>",
                cell * i as f64,
                shade,
                shade
            )
            .expect("string write");
        }
    }
    s.push_str("</svg>\n");
    s
}

#[allow(clippy::too_many_arguments)]
fn walk(
    body: &BodyArg,
    start: &Point,
    steps: usize,
    runs: usize,
    seed: u64,
    trajectories: Option<&Path>,
    hist: Option<&Path>,
    bins: usize,
    svg: Option<&Path>,
    out: &OutArg,
) -> CliResult<()> {
    let body = load_body(body)?;
    let cfg = WalkConfig {
        body: body.clone(),
        start: start.clone(),
        steps,
        runs,
        seed,
        record_trajectories: trajectories.is_some(),
    };
    let ens = run_ensemble(&cfg)?;
    if let Some(p) = trajectories {
        write_file(p, &ens.trajectory_csv().expect("trajectories were recorded"))?;
    }
    if hist.is_some() || svg.is_some() {
        let h = histogram2d(&ens, &body, bins)?;
        if let Some(p) = hist {
            write_file(p, &h.to_csv())?;
        }
        if let Some(p) = svg {
            write_file(p, &heatmap_svg(&h))?;
        }
    }
    emit(out, &ens.final_csv())
}

fn oracle(body: &BodyArg, h: f64, delta: Option<f64>, pairs: Pairs, out: &OutArg) -> CliResult<()> {
    let body = load_body(body)?;
    let g = build_grid_graph(&body, h, delta.unwrap_or(2.0 * h))?;
    let report = oracle_report(&g, &body, &pairs, false)?;
    emit(out, &report.to_csv())
}

fn validate(body: &BodyArg, path: &Path, tol: f64, out: &OutArg) -> CliResult<()> {
    let body = load_body(body)?;
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading path file {}", path.display()))
        .map_err(Failure::input)?;
    let steps: StepPath = serde_json::from_str(&text)
        .context("parsing path JSON")
        .map_err(Failure::input)?;
    let report = validate_path(&body, &steps, tol);
    emit(out, &json(&report))?;
    if report.valid {
        Ok(())
    } else {
        Err(Failure::infeasible(anyhow!(
            "path has {} violations",
            report.violations.len()
        )))
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Connect { body, out } => connect(&body, &out),
        Command::Path { body, u, v, split, tol, out } => path_cmd(&body, &u, &v, split.as_deref(), tol.tol, &out),
        Command::Bound { l, dim, split, out } => bound(l.as_deref(), dim, split.as_deref(), &out),
        Command::Components { l, grid_h, svg, out } => components(l, grid_h, svg.as_deref(), &out),
        Command::Walk {
            body,
            start,
            steps,
            runs,
            seed,
            trajectories,
            hist,
            bins,
            svg,
            out,
        } => walk(
            &body,
            &start,
            steps,
            runs,
            seed,
            trajectories.as_deref(),
            hist.as_deref(),
            bins,
            svg.as_deref(),
            &out,
        ),
        Command::Oracle {
            body,
            grid_h,
            edge_delta,
            pairs,
            u,
            v,
            out,
        } => {
            let mut all = pairs.unwrap_or_default();
            if let (Some(u), Some(v)) = (u, v) {
                all.push((u, v));
            }
            oracle(&body, grid_h, edge_delta, all, &out)
        }
        Command::Validate { body, path, tol, out } => validate(&body, &path, tol.tol, &out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.err);
            ExitCode::from(f.code)
        }
    }
}
