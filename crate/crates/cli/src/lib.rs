//! Command-line front end: argument model, commands and exit codes.
//!
//! Exit codes: 0 success, 2 usage or parse error, 3 inconclusive window, 4 violated precondition.

pub mod report;
pub mod svg;

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use thiserror::Error;

use delone::classify::Classifier;
use delone::criteria::{
    certify_auto, check_crystal_criterion, check_regular_criterion, Criterion, GroupCheckMode, Verdict,
};
use delone::generators::{
    gen_coset_union, gen_crystal, gen_lattice, gen_shifted_rows, CrystalSpec, ShiftSequence, ShiftedRowSpec,
};
use delone::{
    antipodal_lattice_decomposition, points_equal, reconstruct_from_2r_cluster, BoundingBox, Isometry, Lattice, Matrix,
    Metric, NumericMode, Point, PointIndex, PointSet, PointSetFile, Radius, Rational, Scalar, SetKind, Tolerance,
};

use report::{write_atomic, InputDigest, Report};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Precondition(String),
    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] delone::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use delone::Error as E;
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 2,
            CliError::Precondition(_) => 4,
            CliError::Core(e) => match e {
                E::NoInteriorPoints { .. } | E::WindowTooSmall(_) | E::NearBoundary { .. } => 3,
                E::NotAntipodal { .. } | E::NotInSet(_) | E::CapExceeded { .. } | E::ChainNotFound { .. } => 4,
                E::Inconsistent(_) => 1,
                _ => 2,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Float,
}

#[derive(Debug, Parser)]
#[command(
    name = "delone",
    version,
    about = "Local cluster statistics and local-to-global certificates for Delone sets"
)]
pub struct Cli {
    /// Absolute tolerance for float mode (default 1e-9).
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    #[arg(long, global = true, value_enum, default_value = "exact")]
    pub numeric_mode: ModeArg,
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Bound on generated points for reconstruction and crystal orbits.
    #[arg(long, global = true, default_value_t = 200_000)]
    pub seed_cap: usize,
    /// Include wall time in the report.
    #[arg(long, global = true)]
    pub timing: bool,
    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a point-set file for one of the built-in families.
    Generate {
        #[command(subcommand)]
        family: Family,
    },
    /// r, R and the cluster counting function N(ρ) with group orders per class.
    Analyze(AnalyzeArgs),
    /// Check the local criterion for a regular system or a crystal.
    Certify(CertifyArgs),
    /// Coset decomposition of a locally antipodal set.
    Decompose(InputArg),
    /// Rebuild a locally antipodal set from one 2R-cluster.
    Reconstruct(ReconstructArgs),
    /// SVG plot of a planar set.
    Plot(PlotArgs),
}

#[derive(Debug, Args)]
pub struct OutArg {
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BasisArgs {
    /// Basis rows, e.g. "1,0;0,1".
    #[arg(long)]
    pub basis: String,
    /// Gram matrix of the coordinate frame (Euclidean when omitted).
    #[arg(long)]
    pub metric: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Family {
    /// A lattice with the given basis rows.
    Lattice {
        #[command(flatten)]
        basis: BasisArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// A union of half-vector translates of a lattice.
    CosetUnion {
        #[command(flatten)]
        basis: BasisArgs,
        /// Lattice vectors λ_i whose halves are the coset offsets, e.g. "0,0;1,0;0,1".
        #[arg(long)]
        half: String,
        #[command(flatten)]
        out: OutArg,
    },
    /// The orbit of seed points under a lattice and point-group generators.
    Crystal {
        #[command(flatten)]
        basis: BasisArgs,
        /// Seed points, e.g. "3/10,1/10".
        #[arg(long)]
        motif: String,
        /// Point-group generator "a,b;c,d" with optional "@s1,s2" translation part; repeatable.
        #[arg(long)]
        generator: Vec<String>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Row couples shifted left or right by c according to a word over {L, R}.
    ShiftedRows {
        #[arg(long, default_value = "1/5")]
        a: String,
        #[arg(long, default_value = "1")]
        b: String,
        #[arg(long, default_value = "1/20")]
        c: String,
        /// Letters over {L, R}, one per couple of rows after the first.
        #[arg(long)]
        seq: String,
        #[arg(long)]
        width: Option<String>,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Debug, Args)]
pub struct InputArg {
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    pub input: PathBuf,
    /// Radii such as "1", "sqrt(2)", "2R"; the spectrum breakpoints up to --cap when omitted.
    #[arg(long, value_delimiter = ',')]
    pub rho: Vec<String>,
    #[arg(long, default_value = "6R")]
    pub cap: String,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CriterionArg {
    Regular,
    Crystal,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum GroupCheckArg {
    Representatives,
    AllPoints,
    OrdersOnly,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub criterion: CriterionArg,
    /// A radius, or "auto" to scan 2R and the spectrum breakpoints up to --cap.
    #[arg(long, default_value = "auto")]
    pub rho0: String,
    #[arg(long, default_value = "6R")]
    pub cap: String,
    #[arg(long, value_enum, default_value = "representatives")]
    pub group_check: GroupCheckArg,
}

#[derive(Debug, Args)]
pub struct ReconstructArgs {
    pub input: PathBuf,
    #[arg(long)]
    pub center: String,
    #[arg(long)]
    pub rho_max: String,
    /// Compare the result with this set on the same ball.
    #[arg(long)]
    pub compare: Option<PathBuf>,
    /// Write the reconstructed points as a window file.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Highlight {
    Classes,
    Chains,
    Clusters,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    pub input: PathBuf,
    #[arg(long, short)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "classes")]
    pub highlight: Highlight,
    /// Cluster radius for classes and clusters (default 2R).
    #[arg(long)]
    pub rho: Option<String>,
    /// Chain endpoints.
    #[arg(long)]
    pub from: Option<String>,
    #[arg(long)]
    pub to: Option<String>,
    /// Cluster center.
    #[arg(long)]
    pub center: Option<String>,
    /// Radius of the plotted patch of a periodic set (default 6R).
    #[arg(long)]
    pub extent: Option<String>,
    #[arg(long, default_value_t = 600.0)]
    pub size: f64,
}

/// A finished command: the report to emit and the process exit code.
pub struct Outcome {
    pub report: Report,
    pub exit_code: i32,
}

/// What a command produced, before it is wrapped into a [`Report`].
pub struct CommandOutput {
    pub results: serde_json::Value,
    pub input: Option<InputDigest>,
    pub warnings: Vec<String>,
    pub exit_code: i32,
}

impl CommandOutput {
    fn ok(results: serde_json::Value, input: Option<InputDigest>) -> Self {
        CommandOutput { results, input, warnings: Vec::new(), exit_code: 0 }
    }
}

pub fn run(cli: &Cli, argv: &[String]) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let (mode, tol) = match cli.numeric_mode {
        ModeArg::Exact => (NumericMode::Exact, Tolerance::exact()),
        ModeArg::Float => {
            let eps = cli.tolerance.unwrap_or(1e-9);
            if !(eps.is_finite() && eps > 0.0) {
                return Err(CliError::Usage("--tolerance must be a positive number".into()));
            }
            (NumericMode::Float, Tolerance::float(eps))
        }
    };
    let partial = match mode {
        NumericMode::Exact => execute::<Rational>(cli, tol)?,
        NumericMode::Float => execute::<f64>(cli, tol)?,
    };
    let report = Report {
        command: argv.to_vec(),
        input: partial.input,
        numeric_mode: mode.to_string(),
        tolerance: tol.eps_abs,
        results: partial.results,
        warnings: partial.warnings,
        wall_time_ms: cli.timing.then(|| start.elapsed().as_secs_f64() * 1e3),
    };
    Ok(Outcome { report, exit_code: partial.exit_code })
}

fn execute<S: Scalar>(cli: &Cli, tol: Tolerance) -> Result<CommandOutput, CliError> {
    match &cli.command {
        Command::Generate { family } => cmd_generate::<S>(family, tol, cli.seed_cap),
        Command::Analyze(a) => cmd_analyze::<S>(a, tol),
        Command::Certify(a) => cmd_certify::<S>(a, tol),
        Command::Decompose(a) => cmd_decompose::<S>(&a.input, tol),
        Command::Reconstruct(a) => cmd_reconstruct::<S>(a, tol, cli.seed_cap),
        Command::Plot(a) => cmd_plot::<S>(a, tol),
    }
}

fn parse_vector<S: Scalar>(text: &str) -> Result<Vec<S>, CliError> {
    text.split(',').map(|t| S::parse_text(t).map_err(|e| CliError::Usage(format!("in {text:?}: {e}")))).collect()
}

fn parse_rows<S: Scalar>(text: &str) -> Result<Vec<Vec<S>>, CliError> {
    let rows: Vec<Vec<S>> = text.split(';').map(parse_vector).collect::<Result<_, _>>()?;
    if rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err(CliError::Usage(format!("rows of {text:?} have different lengths")));
    }
    Ok(rows)
}

fn parse_point<S: Scalar>(text: &str, dim: usize) -> Result<Point<S>, CliError> {
    let v = parse_vector(text)?;
    if v.len() != dim {
        return Err(CliError::Usage(format!("point {text:?} should have {dim} coordinates")));
    }
    Ok(Point::new(v))
}

fn parse_radius<S: Scalar>(text: &str, set: &PointSet<S>) -> Result<Radius<S>, CliError> {
    let p = set.params()?;
    Radius::parse(text, Some(&p.r), Some(&p.big_r)).map_err(|e| CliError::Usage(format!("radius {text:?}: {e}")))
}

fn parse_metric<S: Scalar>(text: Option<&str>, dim: usize) -> Result<Metric<S>, CliError> {
    match text {
        None => Ok(Metric::euclidean(dim)),
        Some(t) => {
            let rows = parse_rows::<S>(t)?;
            if rows.len() != dim || rows[0].len() != dim {
                return Err(CliError::Usage(format!("metric must be {dim}x{dim}")));
            }
            Ok(Metric::from_gram(Matrix::from_rows(&rows))?)
        }
    }
}

fn parse_basis<S: Scalar>(b: &BasisArgs) -> Result<(Vec<Vec<S>>, Metric<S>), CliError> {
    let basis = parse_rows::<S>(&b.basis)?;
    let d = basis.len();
    if basis[0].len() != d {
        return Err(CliError::Usage("basis must be square".into()));
    }
    Ok((basis, parse_metric(b.metric.as_deref(), d)?))
}

/// Reads and parses a point-set file; returns the set and the digest of its bytes.
pub fn load_set<S: Scalar>(path: &Path, tol: Tolerance) -> Result<(PointSet<S>, InputDigest), CliError> {
    let bytes = std::fs::read(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    let text = std::str::from_utf8(&bytes).map_err(|_| CliError::Usage(format!("{} is not UTF-8", path.display())))?;
    let set = PointSetFile::parse(text)?.to_set::<S>(tol)?;
    Ok((set, InputDigest::of(path, &bytes)))
}

fn write_set<S: Scalar>(set: &PointSet<S>, path: &Path) -> Result<(), CliError> {
    write_atomic(path, PointSetFile::from_set(set).to_toml()?.as_bytes())
}

fn json<T: serde::Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("serializable")
}

pub fn cmd_generate<S: Scalar>(family: &Family, tol: Tolerance, cap: usize) -> Result<CommandOutput, CliError> {
    let (set, out, name) = match family {
        Family::Lattice { basis, out } => {
            let (b, m) = parse_basis::<S>(basis)?;
            (gen_lattice(b, m, tol)?, &out.out, "lattice")
        }
        Family::CosetUnion { basis, half, out } => {
            let (b, m) = parse_basis::<S>(basis)?;
            let lattice = Lattice::new(b, m)?;
            (gen_coset_union(lattice, parse_rows(half)?, tol)?, &out.out, "coset-union")
        }
        Family::Crystal { basis, motif, generator, out } => {
            let (b, m) = parse_basis::<S>(basis)?;
            let d = b.len();
            let generators = generator
                .iter()
                .map(|g| {
                    let (lin, shift) = match g.split_once('@') {
                        Some((l, s)) => (l, parse_vector::<S>(s)?),
                        None => (g.as_str(), vec![S::zero(); d]),
                    };
                    let rows = parse_rows::<S>(lin)?;
                    if rows.len() != d || shift.len() != d {
                        return Err(CliError::Usage(format!("generator {g:?} has the wrong shape")));
                    }
                    Ok(Isometry::checked(Matrix::from_rows(&rows), shift, &m)?)
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            let motif = parse_rows::<S>(motif)?.into_iter().map(Point::new).collect();
            let spec = CrystalSpec { lattice: Lattice::new(b, m)?, generators, motif };
            (gen_crystal(&spec, cap, tol)?, &out.out, "crystal")
        }
        Family::ShiftedRows { a, b, c, seq, width, out } => {
            let sequence: ShiftSequence = seq.parse()?;
            let num = |t: &str| S::parse_text(t).map_err(CliError::from);
            let spec = ShiftedRowSpec {
                a: num(a)?,
                b: num(b)?,
                c: num(c)?,
                sequence,
                width: width.as_deref().map(num).transpose()?,
            };
            (gen_shifted_rows(&spec, tol)?, &out.out, "shifted-rows")
        }
    };
    write_set(&set, out)?;
    Ok(CommandOutput::ok(
        json!({
            "family": name,
            "out": out.display().to_string(),
            "dim": set.dim(),
            "periodic": set.is_periodic(),
            "base_points": set.base_points().len(),
        }),
        None,
    ))
}

fn table_entry<S: Scalar>(c: &Classifier<S>, rho: &Radius<S>) -> Result<serde_json::Value, CliError> {
    let (_, _, reps) = c.labels(rho);
    let centers = c.centers();
    let classes = reps
        .iter()
        .enumerate()
        .map(|(k, &i)| {
            Ok(json!({
                "class": k + 1,
                "representative": json(&centers[i]),
                "m": json(&c.group_order(i, rho)?),
            }))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(json!({ "rho": json(rho), "n": reps.len(), "classes": classes }))
}

pub fn cmd_analyze<S: Scalar>(a: &AnalyzeArgs, tol: Tolerance) -> Result<CommandOutput, CliError> {
    let (set, digest) = load_set::<S>(&a.input, tol)?;
    let params = set.params()?;
    let mut warnings = Vec::new();
    let mut table = Vec::new();
    let mut non_decreasing = None;
    if a.rho.is_empty() {
        let cap = parse_radius(&a.cap, &set)?;
        match Classifier::interior(&set, &cap) {
            Ok(c) => {
                let profile = c.profile(&cap);
                non_decreasing = Some(profile.is_non_decreasing());
                for bp in &profile.breakpoints {
                    table.push(table_entry(&c, bp)?);
                }
            }
            Err(delone::Error::NoInteriorPoints { .. }) => {
                warnings.push(format!("no point of the window is interior at radius {cap}; N(ρ) table omitted"));
            }
            Err(e) => return Err(e.into()),
        }
    } else {
        for text in &a.rho {
            let rho = parse_radius(text, &set)?;
            match Classifier::interior(&set, &rho) {
                Ok(c) => table.push(table_entry(&c, &rho)?),
                Err(delone::Error::NoInteriorPoints { .. }) => {
                    warnings.push(format!("no point of the window is interior at radius {rho}"));
                    table.push(json!({ "rho": json(&rho), "n": null }));
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
    let results = json!({
        "dim": set.dim(),
        "periodic": set.is_periodic(),
        "base_points": set.base_points().len(),
        "params": json(&params),
        "n_table": table,
        "n_non_decreasing": non_decreasing,
    });
    Ok(CommandOutput { results, input: Some(digest), warnings, exit_code: 0 })
}

pub fn cmd_certify<S: Scalar>(a: &CertifyArgs, tol: Tolerance) -> Result<CommandOutput, CliError> {
    let (set, digest) = load_set::<S>(&a.input, tol)?;
    let criterion = match a.criterion {
        CriterionArg::Regular => Criterion::Regular,
        CriterionArg::Crystal => Criterion::Crystal,
    };
    let mode = match a.group_check {
        GroupCheckArg::Representatives => GroupCheckMode::Representatives,
        GroupCheckArg::AllPoints => GroupCheckMode::AllPoints,
        GroupCheckArg::OrdersOnly => GroupCheckMode::OrdersOnly,
    };
    let (verdict, results) = if a.rho0 == "auto" {
        let cap = parse_radius(&a.cap, &set)?;
        let scan = certify_auto(&set, criterion, mode, Some(&cap))?;
        (scan.report.verdict, json(&scan))
    } else {
        let rho0 = parse_radius(&a.rho0, &set)?;
        let report = match criterion {
            Criterion::Regular => check_regular_criterion(&set, &rho0)?,
            Criterion::Crystal => check_crystal_criterion(&set, &rho0, mode)?,
        };
        (report.verdict, json(&report))
    };
    let mut warnings = Vec::new();
    if !set.is_periodic() {
        warnings.push("finite window: the verdict holds on the window only".to_string());
    }
    let exit_code = if verdict == Verdict::InconclusiveWindow { 3 } else { 0 };
    Ok(CommandOutput { results, input: Some(digest), warnings, exit_code })
}

pub fn cmd_decompose<S: Scalar>(input: &Path, tol: Tolerance) -> Result<CommandOutput, CliError> {
    let (set, digest) = load_set::<S>(input, tol)?;
    let dec = antipodal_lattice_decomposition(&set)?;
    Ok(CommandOutput::ok(json(&dec), Some(digest)))
}

fn sorted<S: Scalar>(mut v: Vec<Point<S>>) -> Vec<Point<S>> {
    v.sort_by(|a, b| a.lex_cmp(b));
    v
}

pub fn cmd_reconstruct<S: Scalar>(a: &ReconstructArgs, tol: Tolerance, cap: usize) -> Result<CommandOutput, CliError> {
    let (set, digest) = load_set::<S>(&a.input, tol)?;
    let center = parse_point::<S>(&a.center, set.dim())?;
    let rho_max = parse_radius(&a.rho_max, &set)?;
    let two_r = set.params()?.big_r.double();
    let seed = set.cluster(&center, &two_r)?;
    let rec = reconstruct_from_2r_cluster(&seed, &rho_max, set.metric(), &tol, cap)?;
    let mut warnings = Vec::new();
    let mut comparison = serde_json::Value::Null;
    if let Some(path) = &a.compare {
        let (other, other_digest) = load_set::<S>(path, tol)?;
        if !other.is_interior(&center, &rho_max) {
            warnings.push(format!("{} does not contain the full ball of radius {rho_max}", path.display()));
        }
        let expected = sorted(other.points_in_ball(&center, &rho_max));
        let missing: Vec<&Point<S>> =
            expected.iter().filter(|p| !rec.points.iter().any(|q| points_equal(p, q, &tol))).collect();
        let extra: Vec<&Point<S>> =
            rec.points.iter().filter(|p| !expected.iter().any(|q| points_equal(p, q, &tol))).collect();
        comparison = json!({
            "against": other_digest,
            "expected": expected.len(),
            "match": missing.is_empty() && extra.is_empty(),
            "missing": json(&missing),
            "extra": json(&extra),
        });
    }
    if let Some(out) = &a.out {
        let d = set.dim();
        let lo = (0..d)
            .map(|i| rec.points.iter().map(|p| p.coords()[i].clone()).min_by(|x, y| x.total_cmp(y)).unwrap())
            .collect();
        let hi = (0..d)
            .map(|i| rec.points.iter().map(|p| p.coords()[i].clone()).max_by(|x, y| x.total_cmp(y)).unwrap())
            .collect();
        let window = PointSet::build_window(
            rec.points.clone(),
            BoundingBox::new(lo, hi)?,
            S::zero(),
            set.metric().clone(),
            tol,
        )?;
        write_set(&window, out)?;
    }
    let results = json!({
        "center": json(&rec.center),
        "rho_max": json(&rec.rho_max),
        "seed_points": seed.len(),
        "points": rec.points.len(),
        "generated": rec.generated,
        "comparison": comparison,
    });
    Ok(CommandOutput { results, input: Some(digest), warnings, exit_code: 0 })
}

pub fn cmd_plot<S: Scalar>(a: &PlotArgs, tol: Tolerance) -> Result<CommandOutput, CliError> {
    let (set, digest) = load_set::<S>(&a.input, tol)?;
    if set.dim() != 2 {
        return Err(CliError::Usage(format!("plot needs a planar set, got dimension {}", set.dim())));
    }
    let params = set.params()?;
    let rho = match &a.rho {
        Some(t) => parse_radius(t, &set)?,
        None => params.big_r.double(),
    };
    let points = match set.kind() {
        SetKind::Periodic { motif, .. } => {
            let extent = match &a.extent {
                Some(t) => parse_radius(t, &set)?,
                None => params.big_r.scale(&S::from_i64(6)),
            };
            sorted(set.points_in_ball(&motif[0], &extent))
        }
        SetKind::Window { points, .. } => points.clone(),
    };
    let metric = set.metric();
    let mut warnings = Vec::new();
    let mut plot = svg::Plot { title: a.input.display().to_string(), ..Default::default() };
    let mut classes: Vec<Option<usize>> = vec![None; points.len()];
    let mut n_classes = None;
    match a.highlight {
        Highlight::Classes => match Classifier::interior(&set, &rho) {
            Ok(c) => {
                let (labels, _, reps) = c.labels(&rho);
                n_classes = Some(reps.len());
                let centers = c.centers();
                let index = PointIndex::from_vectors(centers.iter().map(Point::coords), tol);
                for (slot, p) in classes.iter_mut().zip(&points) {
                    let key = match set.lattice() {
                        Some(l) => l.reduce_vector(p.coords(), &tol),
                        None => p.coords().to_vec(),
                    };
                    *slot = index.find(&key).map(|i| labels[i]);
                }
            }
            Err(delone::Error::NoInteriorPoints { .. }) => {
                warnings.push(format!("no interior points at radius {rho}; classes not shown"));
            }
            Err(e) => return Err(e.into()),
        },
        Highlight::Chains => {
            let (Some(from), Some(to)) = (&a.from, &a.to) else {
                return Err(CliError::Usage("--highlight chains needs --from and --to".into()));
            };
            let chain = set.two_r_chain(&parse_point(from, 2)?, &parse_point(to, 2)?)?;
            let labels = chain.gaps_sq(metric).iter().map(|g| format!("{:.3}", g.to_f64().sqrt())).collect();
            let pts = chain.vertices.iter().map(|v| to_xy(metric, v)).collect();
            plot.lines.push(svg::Polyline { points: pts, labels });
        }
        Highlight::Clusters => {
            let Some(center) = &a.center else {
                return Err(CliError::Usage("--highlight clusters needs --center".into()));
            };
            let cluster = set.cluster(&parse_point(center, 2)?, &rho)?;
            for (slot, p) in classes.iter_mut().zip(&points) {
                if cluster.contains(p, &tol) {
                    *slot = Some(0);
                }
            }
            let (x, y) = to_xy(metric, &cluster.center);
            plot.circles.push(svg::Circle { x, y, r: rho.to_f64() });
        }
    }
    for (p, class) in points.iter().zip(classes) {
        let (x, y) = to_xy(metric, p);
        plot.dots.push(svg::Dot { x, y, class });
    }
    write_atomic(&a.out, plot.render(a.size).as_bytes())?;
    let results = json!({
        "out": a.out.display().to_string(),
        "points": points.len(),
        "rho": json(&rho),
        "classes": n_classes,
    });
    Ok(CommandOutput { results, input: Some(digest), warnings, exit_code: 0 })
}

fn to_xy<S: Scalar>(metric: &Metric<S>, p: &Point<S>) -> (f64, f64) {
    let c = metric.to_cartesian(p);
    (c[0], c[1])
}
