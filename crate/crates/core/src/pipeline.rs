//! The reconstruction itself: embed the input into the regular box, take
//! its vorticity, re-solve `lap u = -curl omega` with the backend's
//! boundary conditions, and keep the flow-domain part.

use std::fmt;
use std::str::FromStr;

use crate::diagnostics::{divergence_field, report_from_divergence, DivMethod, DivergenceReport, Stage};
use crate::diffops::{self, Vorticity};
use crate::error::{Error, Result};
use crate::grid::{embed, extract, Prescribed, RegionId, RegionMask, VectorField};
use crate::sor::{solve_velocity_dirichlet, SorConfig};
use crate::spectral;

/// Poisson backend, which also fixes the conditions on the box faces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Backend {
    /// Fourier-spectral on a fully periodic box.
    Spectral,
    /// Second-order finite differences with zero Dirichlet values, solved by SOR.
    FiniteDifference,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Spectral => "spectral",
            Backend::FiniteDifference => "fd",
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Backend {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spectral" => Ok(Backend::Spectral),
            "fd" => Ok(Backend::FiniteDifference),
            other => Err(Error::Config(format!("unknown backend '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveConfig {
    pub backend: Backend,
    /// Used by the FD backend only.
    pub sor: SorConfig,
    pub record_diagnostics: bool,
}

impl SolveConfig {
    pub fn new(backend: Backend) -> Self {
        SolveConfig {
            backend,
            sor: SorConfig::default(),
            record_diagnostics: true,
        }
    }
}

/// Iteration count and final residual of one component solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveStats {
    pub iterations: usize,
    pub residual: f64,
}

/// Result of [`construct_solenoidal`].
#[derive(Debug, Clone)]
pub struct Reconstruction {
    /// The re-solved velocity restricted to the flow domain (zero elsewhere).
    pub velocity: VectorField,
    /// The re-solved velocity on the whole box.
    pub extended: VectorField,
    /// The input extended to the whole box.
    pub embedded: VectorField,
    /// Vorticity of `embedded`.
    pub vorticity: Vorticity,
    /// One entry per component for the FD backend, empty for spectral.
    pub stats: Vec<SolveStats>,
    /// FD reports for every stage, followed by spectral reports on periodic grids.
    pub reports: Vec<DivergenceReport>,
}

impl Reconstruction {
    pub fn report(&self, stage: Stage, method: DivMethod) -> Option<&DivergenceReport> {
        self.reports.iter().find(|r| r.stage == stage && r.method == method)
    }
}

pub fn construct_solenoidal(
    u_star: &VectorField,
    mask: &RegionMask,
    prescribed: &Prescribed,
    config: &SolveConfig,
) -> Result<Reconstruction> {
    let grid = *mask.grid();
    if *u_star.grid() != grid {
        return Err(Error::Shape("input field and mask live on different grids".into()));
    }
    match config.backend {
        Backend::Spectral if !grid.fully_periodic() => {
            return Err(Error::UnsupportedBackend("the spectral backend needs a fully periodic grid".into()));
        }
        Backend::FiniteDifference if !grid.fully_bounded() => {
            return Err(Error::UnsupportedBackend("the FD backend needs a grid bounded on every axis".into()));
        }
        _ => {}
    }

    let embedded = embed(u_star, mask, prescribed)?;

    let (extended, vorticity, stats) = match config.backend {
        Backend::Spectral => {
            let u_hat = spectral::forward_dft(&embedded)?;
            let w_hat = spectral::spectral_curl(&u_hat);
            let extended = spectral::solve_poisson_periodic(&w_hat).to_vector();
            let vorticity = if grid.dim() == 2 {
                Vorticity::Planar(w_hat.to_scalar())
            } else {
                Vorticity::Spatial(w_hat.to_vector())
            };
            (extended, vorticity, Vec::new())
        }
        Backend::FiniteDifference => {
            config.sor.validate()?;
            let vorticity = diffops::curl(&embedded);
            let mut rhs = diffops::curl_of_vorticity(&vorticity);
            for c in 0..rhs.dim() {
                rhs.component_mut(c).iter_mut().for_each(|v| *v = -*v);
            }
            let (extended, solutions) = solve_velocity_dirichlet(&rhs, &config.sor)?;
            let stats = solutions
                .iter()
                .map(|s| SolveStats {
                    iterations: s.iterations,
                    residual: s.residual,
                })
                .collect();
            (extended, vorticity, stats)
        }
    };

    let velocity = extract(&extended, mask)?;

    let mut reports = Vec::new();
    if config.record_diagnostics {
        let mut methods = vec![DivMethod::Fd];
        if grid.fully_periodic() {
            methods.push(DivMethod::Spectral);
        }
        for method in methods {
            let d_in = divergence_field(&embedded, method)?;
            let d_out = divergence_field(&extended, method)?;
            for stage in Stage::ALL {
                let d = match stage {
                    Stage::Initial | Stage::Embedded => &d_in,
                    Stage::Solved | Stage::Extracted => &d_out,
                };
                reports.push(report_from_divergence(d, mask, stage, method)?);
            }
        }
    }

    Ok(Reconstruction {
        velocity,
        extended,
        embedded,
        vorticity,
        stats,
        reports,
    })
}

/// Deviation of the reconstructed velocity from the prescribed velocity at
/// one boundary node of an immersed region.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryError {
    pub region: RegionId,
    /// `left`, `right`, `bottom`, `top` in 2D; `x-`, `x+`, `y-`, ... in 3D.
    pub edge: &'static str,
    /// Offsets from the region's lower corner along the face's tangential
    /// axes (only the first is meaningful in 2D).
    pub s: f64,
    pub t: f64,
    pub node: usize,
    /// `u_computed - u_prescribed`, one entry per component.
    pub error: Vec<f64>,
}

const EDGES_2D: [[&str; 2]; 2] = [["left", "right"], ["bottom", "top"]];
const FACES_3D: [[&str; 2]; 3] = [["x-", "x+"], ["y-", "y+"], ["z-", "z+"]];

/// Immersed boundary-condition error of `u` (a field on the whole box) on
/// every boundary node of every solid / given region.
///
/// Each boundary node appears once; nodes on several faces are assigned to
/// the first one in axis order (a 2D corner belongs to `left` or `right`).
pub fn immersed_bc_error(u: &VectorField, mask: &RegionMask, prescribed: &Prescribed) -> Result<Vec<BoundaryError>> {
    let grid = *mask.grid();
    if *u.grid() != grid {
        return Err(Error::Shape("velocity and mask live on different grids".into()));
    }
    let dim = grid.dim();
    let mut rows = Vec::new();
    for id in mask.regions() {
        let target = prescribed
            .get(&id)
            .ok_or_else(|| Error::Config(format!("no prescribed velocity for region {id}")))?;
        let region = mask.region_box(id);
        let tag = |p: usize| mask.tag(p).region() == Some(id);
        for p in mask.region_boundary(id) {
            let face = (0..dim)
                .flat_map(|a| [(a, false), (a, true)])
                .find(|&(a, fwd)| grid.neighbor(p, a, fwd).is_none_or(|q| !tag(q)))
                .expect("boundary node has an outside neighbour");
            let x = grid.position(p);
            let tangential: Vec<usize> = (0..dim).filter(|&a| a != face.0).collect();
            let offset = |a: usize| x[a] - region.lo[a];
            let edge = if dim == 2 {
                EDGES_2D[face.0][face.1 as usize]
            } else {
                FACES_3D[face.0][face.1 as usize]
            };
            rows.push(BoundaryError {
                region: id,
                edge,
                s: offset(tangential[0]),
                t: tangential.get(1).map_or(0.0, |&a| offset(a)),
                node: p,
                error: (0..dim).map(|c| u.component(c)[p] - target[c]).collect(),
            });
        }
    }
    Ok(rows)
}
