//! Point successive over-relaxation for the Poisson equation with
//! homogeneous Dirichlet values on every face of a bounded box.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{GridSpec, ScalarField, VectorField};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sweep {
    /// Natural node order; strictly sequential and bit-reproducible.
    Lexicographic,
    /// Two-colour ordering, data-parallel within each colour.
    RedBlack,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SorConfig {
    pub relaxation: f64,
    /// Stopping threshold on the interior max-norm residual, relative to
    /// `max(1, max|rhs|)`.
    pub tol: f64,
    /// Sweep cap; `None` means 200 sweeps per node along the longest axis.
    pub max_iters: Option<usize>,
    pub sweep: Sweep,
}

impl Default for SorConfig {
    fn default() -> Self {
        SorConfig {
            relaxation: 1.8,
            tol: 1e-8,
            max_iters: None,
            sweep: Sweep::Lexicographic,
        }
    }
}

impl SorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.relaxation > 0.0 && self.relaxation < 2.0) {
            return Err(Error::Config(format!(
                "SOR relaxation must lie in (0, 2), got {}",
                self.relaxation
            )));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::Config(format!("SOR tolerance must be positive, got {}", self.tol)));
        }
        if self.max_iters == Some(0) {
            return Err(Error::Config("SOR iteration cap must be at least 1".into()));
        }
        Ok(())
    }

    pub fn iteration_cap(&self, grid: &GridSpec) -> usize {
        self.max_iters
            .unwrap_or_else(|| 200 * (0..grid.dim()).map(|a| grid.n(a)).max().unwrap_or(1))
    }
}

/// Converged Dirichlet solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SorSolution {
    pub field: ScalarField,
    pub iterations: usize,
    /// Final interior max-norm residual (absolute).
    pub residual: f64,
    /// Residual after every sweep.
    pub history: Vec<f64>,
}

struct Stencil {
    grid: GridSpec,
    c: [f64; 3],
    diag: f64,
    strides: [usize; 3],
}

impl Stencil {
    fn new(grid: &GridSpec) -> Self {
        let mut c = [0.0; 3];
        for (a, c) in c.iter_mut().enumerate().take(grid.dim()) {
            *c = 1.0 / (grid.h(a) * grid.h(a));
        }
        Stencil {
            grid: *grid,
            c,
            diag: 2.0 * (c[0] + c[1] + c[2]),
            strides: [grid.stride(0), grid.stride(1), grid.stride(2)],
        }
    }

    /// Interior index ranges `(k, j, i)`.
    fn ranges(&self) -> [std::ops::Range<usize>; 3] {
        let [n0, n1, n2] = self.grid.shape();
        let k = if self.grid.dim() == 3 { 1..n2 - 1 } else { 0..1 };
        [k, 1..n1 - 1, 1..n0 - 1]
    }

    #[inline]
    fn neighbour_sum(&self, s: &[f64], p: usize) -> f64 {
        let [s0, s1, s2] = self.strides;
        let mut acc = self.c[0] * (s[p - s0] + s[p + s0]) + self.c[1] * (s[p - s1] + s[p + s1]);
        if self.grid.dim() == 3 {
            acc += self.c[2] * (s[p - s2] + s[p + s2]);
        }
        acc
    }

    fn residual(&self, s: &[f64], rhs: &[f64]) -> f64 {
        let [kr, jr, ir] = self.ranges();
        let mut r: f64 = 0.0;
        for k in kr {
            for j in jr.clone() {
                for i in ir.clone() {
                    let p = self.grid.index(i, j, k);
                    let lap = self.neighbour_sum(s, p) - self.diag * s[p];
                    r = r.max((lap - rhs[p]).abs());
                }
            }
        }
        r
    }

    fn sweep_lexicographic(&self, s: &mut [f64], rhs: &[f64], omega: f64) {
        let [kr, jr, ir] = self.ranges();
        for k in kr {
            for j in jr.clone() {
                for i in ir.clone() {
                    let p = self.grid.index(i, j, k);
                    let gs = (self.neighbour_sum(s, p) - rhs[p]) / self.diag;
                    s[p] += omega * (gs - s[p]);
                }
            }
        }
    }

    fn sweep_red_black(&self, s: &mut [f64], rhs: &[f64], omega: f64) {
        let [n0, n1, _] = self.grid.shape();
        let [_, s1, s2] = self.strides;
        let dim3 = self.grid.dim() == 3;
        let [kr, jr, _] = self.ranges();
        for colour in 0..2 {
            // Nodes of one colour only read the other colour, which this
            // phase leaves untouched, so a snapshot serves off-line reads.
            let snapshot = s.to_vec();
            s.par_chunks_mut(n0).enumerate().for_each(|(line, row)| {
                let (j, k) = (line % n1, line / n1);
                if !jr.contains(&j) || !kr.contains(&k) {
                    return;
                }
                let start = 1 + (1 + j + k + colour) % 2;
                for i in (start..n0 - 1).step_by(2) {
                    let p = line * n0 + i;
                    let mut acc = self.c[0] * (row[i - 1] + row[i + 1])
                        + self.c[1] * (snapshot[p - s1] + snapshot[p + s1]);
                    if dim3 {
                        acc += self.c[2] * (snapshot[p - s2] + snapshot[p + s2]);
                    }
                    let gs = (acc - rhs[p]) / self.diag;
                    row[i] += omega * (gs - row[i]);
                }
            });
        }
    }
}

/// Solves `lap s = rhs` with `s = 0` on every face of the box.
pub fn solve_poisson_dirichlet(rhs: &ScalarField, config: &SorConfig) -> Result<SorSolution> {
    config.validate()?;
    let grid = *rhs.grid();
    if !grid.fully_bounded() {
        return Err(Error::UnsupportedBackend(
            "Dirichlet SOR needs a grid that is bounded on every axis".into(),
        ));
    }
    if !rhs.is_finite() {
        return Err(Error::Config("Poisson right-hand side is not finite".into()));
    }
    let stencil = Stencil::new(&grid);
    let f = rhs.values();
    let scale = (0..grid.len())
        .filter(|&p| grid.edge_distance(grid.unravel(p)) >= 1)
        .fold(1.0f64, |m, p| m.max(f[p].abs()));
    let target = config.tol * scale;
    let cap = config.iteration_cap(&grid);

    let mut s = vec![0.0; grid.len()];
    let mut history = Vec::new();
    let mut residual = stencil.residual(&s, f);
    let mut iterations = 0;
    while residual > target {
        if iterations == cap {
            return Err(Error::NoConvergence {
                component: None,
                iterations,
                residual,
                target,
                history,
            });
        }
        match config.sweep {
            Sweep::Lexicographic => stencil.sweep_lexicographic(&mut s, f, config.relaxation),
            Sweep::RedBlack => stencil.sweep_red_black(&mut s, f, config.relaxation),
        }
        iterations += 1;
        residual = stencil.residual(&s, f);
        history.push(residual);
    }
    Ok(SorSolution {
        field: ScalarField::from_vec(grid, s).unwrap(),
        iterations,
        residual,
        history,
    })
}

/// Solves one uncoupled Dirichlet problem per component, concurrently.
pub fn solve_velocity_dirichlet(
    rhs: &VectorField,
    config: &SorConfig,
) -> Result<(VectorField, Vec<SorSolution>)> {
    let solutions: Vec<SorSolution> = (0..rhs.dim())
        .into_par_iter()
        .map(|c| {
            solve_poisson_dirichlet(&rhs.scalar(c), config).map_err(|e| match e {
                Error::NoConvergence {
                    iterations,
                    residual,
                    target,
                    history,
                    ..
                } => Error::NoConvergence {
                    component: Some(c),
                    iterations,
                    residual,
                    target,
                    history,
                },
                other => other,
            })
        })
        .collect::<Result<_>>()?;
    let field = VectorField::from_scalars(solutions.iter().map(|s| s.field.clone()).collect())?;
    Ok((field, solutions))
}
