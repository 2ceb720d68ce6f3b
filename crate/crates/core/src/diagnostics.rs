//! Divergence norms and the checks built on them.

use std::fmt;

use crate::cases::{Case, CaseConfig};
use crate::diffops::{divergence, laplacian};
use crate::error::{Error, Result};
use crate::grid::{GridSpec, NodeTag, RegionMask, ScalarField, VectorField};
use crate::pipeline::{construct_solenoidal, Backend, SolveConfig};
use crate::sor::{solve_poisson_dirichlet, SorConfig};
use crate::spectral;

/// Where in the reconstruction a field was sampled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    /// The input, with obstacle velocities, on every non-margin node.
    Initial,
    /// The input extended to the whole box.
    Embedded,
    /// The re-solved velocity on the whole box.
    Solved,
    /// The re-solved velocity restricted to the flow domain.
    Extracted,
}

impl Stage {
    pub const ALL: [Stage; 4] = [Stage::Initial, Stage::Embedded, Stage::Solved, Stage::Extracted];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Initial => "initial",
            Stage::Embedded => "embedded",
            Stage::Solved => "solved",
            Stage::Extracted => "extracted",
        }
    }

    /// Nodes whose divergence enters `linf` and `l2`.
    fn counts(self, mask: &RegionMask, p: usize) -> bool {
        match self {
            Stage::Initial => mask.tag(p) != NodeTag::Margin,
            Stage::Embedded | Stage::Solved => true,
            Stage::Extracted => mask.is_fluid_interior(p),
        }
    }

    /// Every node the stage's field is defined on.
    fn defined(self, mask: &RegionMask, p: usize) -> bool {
        match self {
            Stage::Initial => mask.tag(p) != NodeTag::Margin,
            Stage::Embedded | Stage::Solved => true,
            Stage::Extracted => mask.tag(p) == NodeTag::Fluid,
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Discrete divergence operator used by a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DivMethod {
    Fd,
    Spectral,
}

impl DivMethod {
    pub fn name(self) -> &'static str {
        match self {
            DivMethod::Fd => "fd",
            DivMethod::Spectral => "spectral",
        }
    }
}

impl fmt::Display for DivMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceReport {
    pub stage: Stage,
    pub method: DivMethod,
    /// Max-norm over the stage's measured nodes. For the extracted stage
    /// these are flow-domain nodes whose stencil stays in the flow domain.
    pub linf: f64,
    /// Trapezoid-weighted L2 norm over the same nodes.
    pub l2: f64,
    /// Max-norm over every node the stage's field is defined on.
    pub linf_all: f64,
    /// Flat index of the node attaining `linf`.
    pub argmax: usize,
    pub argmax_tag: NodeTag,
    pub grid: GridSpec,
}

impl DivergenceReport {
    pub fn argmax_on_box_face(&self) -> bool {
        self.grid.on_bounded_edge(self.grid.unravel(self.argmax))
    }
}

pub fn divergence_field(u: &VectorField, method: DivMethod) -> Result<ScalarField> {
    match method {
        DivMethod::Fd => Ok(divergence(u)),
        DivMethod::Spectral => spectral::divergence_of(u).map_err(|_| {
            Error::UnsupportedBackend("spectral divergence needs a fully periodic grid".into())
        }),
    }
}

/// Norms of an already computed divergence.
pub fn report_from_divergence(
    div: &ScalarField,
    mask: &RegionMask,
    stage: Stage,
    method: DivMethod,
) -> Result<DivergenceReport> {
    let grid = *div.grid();
    if grid != *mask.grid() {
        return Err(Error::Shape("divergence and mask live on different grids".into()));
    }
    let mut linf = 0.0f64;
    let mut linf_all = 0.0f64;
    let mut argmax = None;
    let mut sum = 0.0;
    for p in 0..grid.len() {
        let v = div[p].abs();
        if stage.defined(mask, p) {
            linf_all = linf_all.max(v);
        }
        if stage.counts(mask, p) {
            if argmax.is_none() || v > linf {
                linf = v;
                argmax = Some(p);
            }
            sum += grid.weight(grid.unravel(p)) * v * v;
        }
    }
    let argmax = argmax.ok_or_else(|| Error::Geometry(format!("no nodes to measure at stage {stage}")))?;
    Ok(DivergenceReport {
        stage,
        method,
        linf,
        l2: sum.sqrt(),
        linf_all,
        argmax,
        argmax_tag: mask.tag(argmax),
        grid,
    })
}

/// Divergence of `u` with the requested operator, measured over the
/// stage's node set.
pub fn divergence_report(
    u: &VectorField,
    mask: &RegionMask,
    method: DivMethod,
    stage: Stage,
) -> Result<DivergenceReport> {
    report_from_divergence(&divergence_field(u, method)?, mask, stage, method)
}

/// `max |lap(div u)|` over nodes at least two nodes from any bounded face,
/// divided by `max(1, max |div u|)`.
pub fn harmonicity_check(u: &VectorField) -> f64 {
    let grid = *u.grid();
    let div = divergence(u);
    let lap = laplacian(&div);
    let worst = (0..grid.len())
        .filter(|&p| grid.edge_distance(grid.unravel(p)) >= 2)
        .map(|p| lap[p].abs())
        .fold(0.0, f64::max);
    worst / div.max_abs().max(1.0)
}

/// Subject of a grid-refinement study.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StudyCase {
    /// A full reconstruction; rows report the divergence of the solved
    /// field (spectral backend) or of the extracted field (FD backend).
    Pipeline(Case),
    /// `lap s = -2 pi^2 sin(pi x) sin(pi y)` on the unit square; rows
    /// report the error against `sin(pi x) sin(pi y)`.
    ManufacturedPoisson,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefinementRow {
    pub n: usize,
    pub linf: f64,
    pub l2: f64,
}

pub fn refinement_study(case: StudyCase, backend: Backend, sizes: &[usize]) -> Result<Vec<RefinementRow>> {
    if sizes.is_empty() {
        return Err(Error::Config("refinement study needs at least one size".into()));
    }
    sizes
        .iter()
        .map(|&n| match case {
            StudyCase::ManufacturedPoisson => {
                if backend != Backend::FiniteDifference {
                    return Err(Error::UnsupportedBackend(
                        "the manufactured Poisson study uses the FD solver".into(),
                    ));
                }
                manufactured_poisson_error(n, &SorConfig::default())
            }
            StudyCase::Pipeline(case) => {
                let setup = CaseConfig::new(case, backend).with_n(n).setup()?;
                let config = SolveConfig::new(backend);
                let out = construct_solenoidal(&setup.u_star, &setup.mask, &setup.prescribed, &config)?;
                let (stage, method) = match backend {
                    Backend::Spectral => (Stage::Solved, DivMethod::Spectral),
                    Backend::FiniteDifference => (Stage::Extracted, DivMethod::Fd),
                };
                let r = out
                    .report(stage, method)
                    .ok_or_else(|| Error::Config("diagnostics were not recorded".into()))?;
                Ok(RefinementRow { n, linf: r.linf, l2: r.l2 })
            }
        })
        .collect()
}

/// SOR error against the manufactured solution on an `n x n` unit square.
pub fn manufactured_poisson_error(n: usize, config: &SorConfig) -> Result<RefinementRow> {
    use std::f64::consts::PI;
    let g = GridSpec::bounded(2, n, 0.0, 1.0)?;
    let exact = |x: [f64; 3]| (PI * x[0]).sin() * (PI * x[1]).sin();
    let rhs = ScalarField::from_fn(g, |x| -2.0 * PI * PI * exact(x));
    let sol = solve_poisson_dirichlet(&rhs, config)?;
    let mut linf = 0.0f64;
    let mut sum = 0.0;
    for p in 0..g.len() {
        let e = (sol.field[p] - exact(g.position(p))).abs();
        linf = linf.max(e);
        sum += g.weight(g.unravel(p)) * e * e;
    }
    Ok(RefinementRow { n, linf, l2: sum.sqrt() })
}
