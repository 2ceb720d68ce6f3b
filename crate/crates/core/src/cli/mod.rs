//! Command-line driver: argument parsing, one reconstruction per run, and
//! the output files.
//!
//! ```text
//! solenoidal run --case square --backend fd --sor-omega 1.8 --sor-tol 1e-8 --out-dir out
//! ```
//!
//! Every run writes `diagnostics.csv`. Runs with immersed regions also
//! write `boundary_error.csv`, and `fields.vtk` holds the re-solved
//! velocity on the whole box together with its divergence, the divergence
//! of the embedded input, the vorticity (2D only) and the node tags.

pub mod report;
pub mod vtk;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::cases::{Case, CaseConfig};
use crate::diagnostics::{divergence_field, DivMethod, DivergenceReport};
use crate::diffops::Vorticity;
use crate::error::{Error, Result};
use crate::grid::{NodeTag, ScalarField};
use crate::pipeline::{construct_solenoidal, immersed_bc_error, Backend, SolveConfig, SolveStats};
use crate::sor::{SorConfig, Sweep};

pub use report::{write_report, BOUNDARY_ERROR_FILE, DIAGNOSTICS_FILE};
pub use vtk::write_fields;

pub const FIELDS_FILE: &str = "fields.vtk";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, ValueEnum)]
pub enum Format {
    Vtk,
    Csv,
}

/// A validated run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub case: CaseConfig,
    pub sor: SorConfig,
    pub out_dir: PathBuf,
    pub formats: Vec<Format>,
}

impl RunConfig {
    /// Default setup for `case`, written to `out_dir`.
    pub fn new(case: Case, backend: Backend, out_dir: impl Into<PathBuf>) -> Self {
        RunConfig {
            case: CaseConfig::new(case, backend),
            sor: SorConfig::default(),
            out_dir: out_dir.into(),
            formats: vec![Format::Vtk, Format::Csv],
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.case.validate()?;
        self.sor.validate()
    }

    pub fn writes(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }
}

#[derive(Parser)]
#[command(name = "solenoidal", version, about = "Re-solve a velocity field into a nearly solenoidal one")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reconstruct one case and write its output files.
    Run(RunArgs),
}

#[derive(clap::Args)]
struct RunArgs {
    /// cr, square, cube, taylor_green, gradient or shear.
    #[arg(long)]
    case: Case,
    /// spectral or fd.
    #[arg(long)]
    backend: Backend,
    /// Nodes per axis (default depends on the case).
    #[arg(long)]
    n: Option<usize>,
    /// Margin width as a fraction of the flow-domain extent.
    #[arg(long)]
    margin: Option<f64>,
    #[arg(long, default_value_t = 1.8)]
    sor_omega: f64,
    #[arg(long, default_value_t = 1e-8)]
    sor_tol: f64,
    /// Sweep cap (default 200 times the largest axis size).
    #[arg(long)]
    sor_max_iters: Option<usize>,
    /// Use the parallel red-black sweep instead of the lexicographic one.
    #[arg(long)]
    red_black: bool,
    /// Obstacle velocity, e.g. `1,0`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    u_solid: Option<Vec<f64>>,
    /// Eigenvalue parameter of the Chandrasekhar–Reid flow.
    #[arg(long, default_value_t = 2.64)]
    lambda: f64,
    /// Obstacle half-width.
    #[arg(long)]
    half_width: Option<f64>,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "vtk,csv")]
    formats: Vec<Format>,
}

/// Parses and validates a command line (including the program name).
pub fn parse_args<I, T>(argv: I) -> Result<RunConfig>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| {
        use clap::error::ErrorKind;
        match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Error::Help(e.to_string()),
            _ => Error::Usage(e.to_string()),
        }
    })?;
    let Command::Run(a) = cli.command;
    let mut case = CaseConfig::new(a.case, a.backend);
    if let Some(n) = a.n {
        case.n = n;
    }
    if let Some(m) = a.margin {
        case.margin = m;
    }
    if let Some(h) = a.half_width {
        case.half_width = h;
    }
    case.lambda = a.lambda;
    case.u_solid = a.u_solid;
    let mut formats = a.formats;
    formats.sort();
    formats.dedup();
    let config = RunConfig {
        case,
        sor: SorConfig {
            relaxation: a.sor_omega,
            tol: a.sor_tol,
            max_iters: a.sor_max_iters,
            sweep: if a.red_black { Sweep::RedBlack } else { Sweep::Lexicographic },
        },
        out_dir: a.out_dir,
        formats,
    };
    config.validate().map_err(|e| Error::Usage(e.to_string()))?;
    Ok(config)
}

/// What a run produced.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub reports: Vec<DivergenceReport>,
    pub stats: Vec<SolveStats>,
    pub written: Vec<PathBuf>,
}

impl RunSummary {
    /// Human-readable digest for the terminal.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for r in &self.reports {
            s += &format!(
                "{:<9} {:<8} linf {:.3e}  l2 {:.3e}  argmax {} ({})\n",
                r.stage.name(),
                r.method.name(),
                r.linf,
                r.l2,
                r.argmax,
                r.argmax_tag.label()
            );
        }
        for (c, st) in self.stats.iter().enumerate() {
            s += &format!("sor component {c}: {} sweeps, residual {:.3e}\n", st.iterations, st.residual);
        }
        for p in &self.written {
            s += &format!("wrote {}\n", p.display());
        }
        s
    }
}

fn tag_code(t: NodeTag) -> f64 {
    match t {
        NodeTag::Fluid => 0.0,
        NodeTag::Solid(_) => 1.0,
        NodeTag::Given(_) => 2.0,
        NodeTag::Margin => 3.0,
    }
}

/// Executes one run.
pub fn run(config: &RunConfig) -> Result<RunSummary> {
    config.validate()?;
    let setup = config.case.setup()?;
    let mut solve = SolveConfig::new(config.case.backend);
    solve.sor = config.sor;
    let out = construct_solenoidal(&setup.u_star, &setup.mask, &setup.prescribed, &solve)?;

    let dir: &Path = &config.out_dir;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();

    if config.writes(Format::Vtk) {
        let div = divergence_field(&out.extended, DivMethod::Fd)?;
        let div0 = divergence_field(&out.embedded, DivMethod::Fd)?;
        let grid = *setup.mask.grid();
        let tags = ScalarField::from_vec(grid, setup.mask.tags().iter().map(|&t| tag_code(t)).collect())?;
        let mut extras: Vec<(&str, &ScalarField)> =
            vec![("divergence", &div), ("divergence_initial", &div0)];
        if let Vorticity::Planar(w) = &out.vorticity {
            extras.push(("vorticity", w));
        }
        extras.push(("region", &tags));
        let path = dir.join(FIELDS_FILE);
        write_fields(&out.extended, &extras, &path)?;
        written.push(path);
    }

    // diagnostics.csv is written for every run; the csv format flag only
    // controls the boundary table.
    let bc = if config.writes(Format::Csv) {
        immersed_bc_error(&out.extended, &setup.mask, &setup.prescribed)?
    } else {
        Vec::new()
    };
    written.extend(write_report(&out.reports, &bc, dir)?);

    Ok(RunSummary {
        reports: out.reports,
        stats: out.stats,
        written,
    })
}
