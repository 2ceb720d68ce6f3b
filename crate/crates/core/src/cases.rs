//! Input fields for the shipped experiments: the modified
//! Chandrasekhar–Reid flow, impulsively moving boxes, and a few periodic
//! fixtures with known projections.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::grid::{build_mask, AxisBox, GridSpec, Prescribed, RegionId, RegionMask, ScalarField, VectorField};
use crate::pipeline::Backend;

/// Coefficients of `phi(x) = cos(lambda x) + A cosh(pi x / 2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChandrasekharReidParams {
    pub lambda: f64,
    /// `-cos(lambda) / cosh(pi/2)`, so that `phi(+-1) = 0`.
    pub a_lambda: f64,
    /// Normalisation `phi(0) phi'(1/2)`, giving unit peak speed.
    pub g: f64,
}

impl ChandrasekharReidParams {
    pub fn new(lambda: f64) -> Result<Self> {
        if !lambda.is_finite() {
            return Err(Error::Config("lambda must be finite".into()));
        }
        let a_lambda = -lambda.cos() / (PI / 2.0).cosh();
        let g = (1.0 + a_lambda) * (PI / 2.0 * a_lambda * (PI / 4.0).sinh() - lambda * (lambda / 2.0).sin());
        if g == 0.0 || !g.is_finite() {
            return Err(Error::Config(format!("lambda = {lambda} gives a degenerate normalisation")));
        }
        Ok(ChandrasekharReidParams { lambda, a_lambda, g })
    }

    pub fn phi(&self, x: f64) -> f64 {
        (self.lambda * x).cos() + self.a_lambda * (PI / 2.0 * x).cosh()
    }

    pub fn phi_prime(&self, x: f64) -> f64 {
        -self.lambda * (self.lambda * x).sin() + PI / 2.0 * self.a_lambda * (PI / 2.0 * x).sinh()
    }

    /// `(psi, u1, u2)` at a point of `[-1, 1]^2`.
    pub fn evaluate(&self, x: f64, y: f64) -> (f64, f64, f64) {
        let (px, py) = (self.phi(x), self.phi(y));
        let psi = px * py / self.g;
        let u1 = px * self.phi_prime(y) / self.g;
        let u2 = -py * self.phi_prime(x) / self.g;
        (psi, u1, u2)
    }
}

impl Default for ChandrasekharReidParams {
    fn default() -> Self {
        Self::new(2.64).unwrap()
    }
}

/// Samples the streamfunction and velocity analytically on every node with
/// `||x||_inf <= 1`; other nodes are zero.
pub fn chandrasekhar_reid_field(
    grid: &GridSpec,
    params: &ChandrasekharReidParams,
) -> Result<(VectorField, ScalarField)> {
    if grid.dim() != 2 {
        return Err(Error::Geometry("the Chandrasekhar-Reid flow is two-dimensional".into()));
    }
    for a in 0..2 {
        if grid.lo(a) > -1.0 || grid.hi(a) < 1.0 {
            return Err(Error::Geometry(format!("grid axis {a} does not cover [-1, 1]")));
        }
    }
    let unit = AxisBox::centered([0.0; 3], 1.0);
    let mut u = VectorField::zeros(*grid);
    let mut psi = ScalarField::zeros(*grid);
    for p in 0..grid.len() {
        let x = grid.position(p);
        if unit.contains(grid, x) {
            let (s, u1, u2) = params.evaluate(x[0].clamp(-1.0, 1.0), x[1].clamp(-1.0, 1.0));
            psi.values_mut()[p] = s;
            u.component_mut(0)[p] = u1;
            u.component_mut(1)[p] = u2;
        }
    }
    Ok((u, psi))
}

/// `u_s` inside `region`, zero elsewhere.
pub fn moving_box_field(grid: &GridSpec, region: &AxisBox, u_s: &[f64]) -> Result<VectorField> {
    if u_s.len() != grid.dim() {
        return Err(Error::Config(format!(
            "box velocity has {} components on a {}D grid",
            u_s.len(),
            grid.dim()
        )));
    }
    for a in 0..grid.dim() {
        if region.lo[a] <= grid.lo(a) || region.hi[a] >= grid.hi(a) || region.lo[a] > region.hi[a] {
            return Err(Error::Geometry(format!(
                "box [{}, {}] is not strictly inside the grid on axis {a}",
                region.lo[a], region.hi[a]
            )));
        }
    }
    let mut u = VectorField::zeros(*grid);
    for p in 0..grid.len() {
        if region.contains(grid, grid.position(p)) {
            for (c, &v) in u_s.iter().enumerate() {
                u.component_mut(c)[p] = v;
            }
        }
    }
    Ok(u)
}

/// Periodic fixtures on `[0, 2 pi)^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LibraryField {
    /// `(sin x cos y, -cos x sin y)`: solenoidal, zero mean.
    TaylorGreen,
    /// `grad(sin x sin y)`: irrotational.
    Gradient,
    /// `(sin y, 0)`: solenoidal.
    Shear,
}

impl FromStr for LibraryField {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "taylor_green" => Ok(LibraryField::TaylorGreen),
            "gradient" => Ok(LibraryField::Gradient),
            "shear" => Ok(LibraryField::Shear),
            other => Err(Error::Config(format!("unknown library field '{other}'"))),
        }
    }
}

pub fn library_field(field: LibraryField, grid: &GridSpec) -> Result<VectorField> {
    if !grid.fully_periodic() || grid.dim() != 2 {
        return Err(Error::Geometry("library fields need a 2D periodic grid".into()));
    }
    Ok(VectorField::from_fn(*grid, |x| match field {
        LibraryField::TaylorGreen => [x[0].sin() * x[1].cos(), -x[0].cos() * x[1].sin(), 0.0],
        LibraryField::Gradient => [x[0].cos() * x[1].sin(), x[0].sin() * x[1].cos(), 0.0],
        LibraryField::Shear => [x[1].sin(), 0.0, 0.0],
    }))
}

/// Named library field lookup.
pub fn library_fields(name: &str, grid: &GridSpec) -> Result<VectorField> {
    library_field(name.parse()?, grid)
}

/// The shipped experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Case {
    ChandrasekharReid,
    Square,
    Cube,
    TaylorGreen,
    Gradient,
    Shear,
}

impl Case {
    pub fn name(self) -> &'static str {
        match self {
            Case::ChandrasekharReid => "cr",
            Case::Square => "square",
            Case::Cube => "cube",
            Case::TaylorGreen => "taylor_green",
            Case::Gradient => "gradient",
            Case::Shear => "shear",
        }
    }

    pub fn dim(self) -> usize {
        if self == Case::Cube {
            3
        } else {
            2
        }
    }

    pub fn supports(self, backend: Backend) -> bool {
        match self {
            Case::ChandrasekharReid | Case::Square => true,
            Case::Cube | Case::TaylorGreen | Case::Gradient | Case::Shear => backend == Backend::Spectral,
        }
    }

    pub fn default_n(self) -> usize {
        match self {
            Case::Cube => 64,
            Case::ChandrasekharReid | Case::Square => 256,
            Case::TaylorGreen | Case::Gradient | Case::Shear => 64,
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Case {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cr" => Ok(Case::ChandrasekharReid),
            "square" => Ok(Case::Square),
            "cube" => Ok(Case::Cube),
            "taylor_green" => Ok(Case::TaylorGreen),
            "gradient" => Ok(Case::Gradient),
            "shear" => Ok(Case::Shear),
            other => Err(Error::Config(format!("unknown case '{other}'"))),
        }
    }
}

/// Physical parameters of a case.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseConfig {
    pub case: Case,
    pub backend: Backend,
    /// Nodes per axis.
    pub n: usize,
    /// Margin width as a fraction of the flow-domain extent. For the
    /// Chandrasekhar–Reid flow the box grows to make room for it; the other
    /// cases carve it out of their fixed `2 pi` box.
    pub margin: f64,
    pub lambda: f64,
    /// Obstacle half-width; the default is `10 pi / 128`.
    pub half_width: f64,
    /// Obstacle velocity; defaults to a unit velocity along the first axis.
    pub u_solid: Option<Vec<f64>>,
}

impl CaseConfig {
    pub fn new(case: Case, backend: Backend) -> Self {
        CaseConfig {
            case,
            backend,
            n: case.default_n(),
            margin: if case == Case::ChandrasekharReid { 0.125 } else { 0.0 },
            lambda: 2.64,
            half_width: 10.0 * PI / 128.0,
            u_solid: None,
        }
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = n;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.case.supports(self.backend) {
            return Err(Error::Config(format!(
                "case '{}' is not available with the {} backend",
                self.case, self.backend
            )));
        }
        if self.n < crate::grid::MIN_NODES {
            return Err(Error::Config(format!("n must be at least {}", crate::grid::MIN_NODES)));
        }
        if !(0.0..0.5).contains(&self.margin) {
            return Err(Error::Config(format!("margin fraction {} outside [0, 0.5)", self.margin)));
        }
        if !(self.half_width > 0.0 && self.half_width < PI) {
            return Err(Error::Config(format!("half-width {} outside (0, pi)", self.half_width)));
        }
        if let Some(u) = &self.u_solid {
            if u.len() != self.case.dim() {
                return Err(Error::Config(format!(
                    "obstacle velocity needs {} components",
                    self.case.dim()
                )));
            }
        }
        Ok(())
    }

    fn grid(&self, lo: f64, hi: f64) -> Result<GridSpec> {
        let dim = self.case.dim();
        match self.backend {
            Backend::Spectral => GridSpec::periodic(dim, self.n, lo, hi),
            Backend::FiniteDifference => GridSpec::bounded(dim, self.n, lo, hi),
        }
    }

    /// Builds the grid, input field, mask and prescribed velocities.
    pub fn setup(&self) -> Result<CaseSetup> {
        self.validate()?;
        let dim = self.case.dim();
        let two_pi = 2.0 * PI;
        match self.case {
            Case::ChandrasekharReid => {
                let width = 2.0 * self.margin;
                let grid = self.grid(-1.0 - width, 1.0 + width)?;
                let params = ChandrasekharReidParams::new(self.lambda)?;
                let (u_star, _) = chandrasekhar_reid_field(&grid, &params)?;
                let mask = build_mask(&grid, &[], &[], width)?;
                Ok(CaseSetup {
                    u_star,
                    mask,
                    prescribed: Prescribed::new(),
                })
            }
            Case::Square | Case::Cube => {
                let grid = self.grid(0.0, two_pi)?;
                let obstacle = AxisBox::centered([PI; 3], self.half_width);
                let u_s = self.u_solid.clone().unwrap_or_else(|| {
                    let mut v = vec![0.0; dim];
                    v[0] = 1.0;
                    v
                });
                let u_star = moving_box_field(&grid, &obstacle, &u_s)?;
                let mask = build_mask(&grid, &[obstacle], &[], self.margin * two_pi)?;
                Ok(CaseSetup {
                    u_star,
                    mask,
                    prescribed: Prescribed::from([(RegionId::Solid(0), u_s)]),
                })
            }
            Case::TaylorGreen | Case::Gradient | Case::Shear => {
                let grid = self.grid(0.0, two_pi)?;
                let which = match self.case {
                    Case::TaylorGreen => LibraryField::TaylorGreen,
                    Case::Gradient => LibraryField::Gradient,
                    _ => LibraryField::Shear,
                };
                let u_star = library_field(which, &grid)?;
                let mask = build_mask(&grid, &[], &[], self.margin * two_pi)?;
                Ok(CaseSetup {
                    u_star,
                    mask,
                    prescribed: Prescribed::new(),
                })
            }
        }
    }
}

/// Everything the reconstruction needs for one case.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseSetup {
    pub u_star: VectorField,
    pub mask: RegionMask,
    pub prescribed: Prescribed,
}
