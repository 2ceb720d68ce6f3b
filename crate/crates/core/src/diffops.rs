//! Second-order finite-difference curl, divergence and Laplacian on
//! collocated grids.
//!
//! Interior nodes use centred differences; periodic axes wrap around;
//! nodes on a bounded face use second-order one-sided differences.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{GridSpec, ScalarField, VectorField};

/// Stencil family. Only second-order centred differences are provided.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StencilSpec {
    order: usize,
}

impl StencilSpec {
    pub fn new(order: usize) -> Result<Self> {
        if order != 2 {
            return Err(Error::Config(format!(
                "stencil order {order} not available (only 2)"
            )));
        }
        Ok(StencilSpec { order })
    }

    pub fn order(&self) -> usize {
        self.order
    }
}

impl Default for StencilSpec {
    fn default() -> Self {
        StencilSpec { order: 2 }
    }
}

/// Vorticity: the out-of-plane scalar in 2D, a full vector in 3D.
#[derive(Debug, Clone, PartialEq)]
pub enum Vorticity {
    Planar(ScalarField),
    Spatial(VectorField),
}

impl Vorticity {
    pub fn grid(&self) -> &GridSpec {
        match self {
            Vorticity::Planar(s) => s.grid(),
            Vorticity::Spatial(v) => v.grid(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        match self {
            Vorticity::Planar(s) => s.max_abs(),
            Vorticity::Spatial(v) => v.max_abs(),
        }
    }
}

/// First derivative of nodal values along `axis`.
pub fn partial(values: &[f64], grid: &GridSpec, axis: usize) -> Vec<f64> {
    if axis >= grid.dim() {
        return vec![0.0; grid.len()];
    }
    let n = grid.n(axis);
    let s = grid.stride(axis);
    let inv2h = 0.5 / grid.h(axis);
    let periodic = grid.is_periodic(axis);
    (0..grid.len())
        .into_par_iter()
        .map(|p| {
            let i = grid.unravel(p)[axis];
            let f = |k: isize| values[(p as isize + k * s as isize) as usize];
            if periodic {
                let fwd = if i + 1 == n { p + s - n * s } else { p + s };
                let bwd = if i == 0 { p + (n - 1) * s } else { p - s };
                (values[fwd] - values[bwd]) * inv2h
            } else if i == 0 {
                (-3.0 * f(0) + 4.0 * f(1) - f(2)) * inv2h
            } else if i + 1 == n {
                (3.0 * f(0) - 4.0 * f(-1) + f(-2)) * inv2h
            } else {
                (f(1) - f(-1)) * inv2h
            }
        })
        .collect()
}

/// Second derivative of nodal values along `axis`.
pub fn partial2(values: &[f64], grid: &GridSpec, axis: usize) -> Vec<f64> {
    if axis >= grid.dim() {
        return vec![0.0; grid.len()];
    }
    let n = grid.n(axis);
    let s = grid.stride(axis);
    let h = grid.h(axis);
    let inv_h2 = 1.0 / (h * h);
    let periodic = grid.is_periodic(axis);
    (0..grid.len())
        .into_par_iter()
        .map(|p| {
            let i = grid.unravel(p)[axis];
            let f = |k: isize| values[(p as isize + k * s as isize) as usize];
            if periodic {
                let fwd = if i + 1 == n { p + s - n * s } else { p + s };
                let bwd = if i == 0 { p + (n - 1) * s } else { p - s };
                (values[fwd] - 2.0 * values[p] + values[bwd]) * inv_h2
            } else if i == 0 {
                (2.0 * f(0) - 5.0 * f(1) + 4.0 * f(2) - f(3)) * inv_h2
            } else if i + 1 == n {
                (2.0 * f(0) - 5.0 * f(-1) + 4.0 * f(-2) - f(-3)) * inv_h2
            } else {
                (f(1) - 2.0 * f(0) + f(-1)) * inv_h2
            }
        })
        .collect()
}

fn sub(a: Vec<f64>, b: &[f64]) -> Vec<f64> {
    a.into_iter().zip(b).map(|(a, b)| a - b).collect()
}

/// Vorticity of a velocity field.
pub fn curl(u: &VectorField) -> Vorticity {
    let g = u.grid();
    let d = |c: usize, a: usize| partial(u.component(c), g, a);
    if g.dim() == 2 {
        let w = sub(d(1, 0), &d(0, 1));
        Vorticity::Planar(ScalarField::from_vec(*g, w).unwrap())
    } else {
        let comps = vec![
            sub(d(2, 1), &d(1, 2)),
            sub(d(0, 2), &d(2, 0)),
            sub(d(1, 0), &d(0, 1)),
        ];
        Vorticity::Spatial(VectorField::from_components(*g, comps).unwrap())
    }
}

/// `curl(omega)`, with a planar vorticity read as the out-of-plane component:
/// `(d omega/dx2, -d omega/dx1)`.
pub fn curl_of_vorticity(omega: &Vorticity) -> VectorField {
    match omega {
        Vorticity::Planar(w) => {
            let g = w.grid();
            let c0 = partial(w.values(), g, 1);
            let c1 = partial(w.values(), g, 0).into_iter().map(|v| -v).collect();
            VectorField::from_components(*g, vec![c0, c1]).unwrap()
        }
        Vorticity::Spatial(w) => match curl(w) {
            Vorticity::Spatial(v) => v,
            Vorticity::Planar(_) => unreachable!("3D curl is a vector"),
        },
    }
}

pub fn divergence(u: &VectorField) -> ScalarField {
    let g = u.grid();
    let mut acc = vec![0.0; g.len()];
    for a in 0..u.dim() {
        for (acc, d) in acc.iter_mut().zip(partial(u.component(a), g, a)) {
            *acc += d;
        }
    }
    ScalarField::from_vec(*g, acc).unwrap()
}

pub fn gradient(s: &ScalarField) -> VectorField {
    let g = s.grid();
    let comps = (0..g.dim()).map(|a| partial(s.values(), g, a)).collect();
    VectorField::from_components(*g, comps).unwrap()
}

/// `2 dim + 1`-point Laplacian; one-sided second differences on bounded faces.
pub fn laplacian(s: &ScalarField) -> ScalarField {
    let g = s.grid();
    let mut acc = vec![0.0; g.len()];
    for a in 0..g.dim() {
        for (acc, d) in acc.iter_mut().zip(partial2(s.values(), g, a)) {
            *acc += d;
        }
    }
    ScalarField::from_vec(*g, acc).unwrap()
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    fn interior_max(f: &ScalarField, margin: usize, expect: impl Fn([f64; 3]) -> f64) -> f64 {
        let g = f.grid();
        (0..g.len())
            .filter(|&p| g.edge_distance(g.unravel(p)) >= margin)
            .map(|p| (f[p] - expect(g.position(p))).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn stencil_spec_only_second_order() {
        assert!(StencilSpec::new(4).is_err());
        assert_eq!(StencilSpec::default().order(), 2);
    }

    #[test]
    fn rotation_has_uniform_vorticity() {
        let g = GridSpec::bounded(2, 17, -1.0, 1.0).unwrap();
        let u = VectorField::from_fn(g, |x| [-x[1], x[0], 0.0]);
        let Vorticity::Planar(w) = curl(&u) else { panic!() };
        // linear field: one-sided stencils are exact too
        assert!(interior_max(&w, 0, |_| 2.0) < 1e-13);
        let Vorticity::Planar(z) = curl(&VectorField::zeros(g)) else { panic!() };
        assert_eq!(z.max_abs(), 0.0);
    }

    #[test]
    fn spatial_curl_of_bilinear_field() {
        let g = GridSpec::bounded(3, 9, -1.0, 1.0).unwrap();
        let u = VectorField::from_fn(g, |x| [0.0, 0.0, x[0] * x[1]]);
        let Vorticity::Spatial(w) = curl(&u) else { panic!() };
        assert!(interior_max(&w.scalar(0), 1, |x| x[0]) < 1e-13);
        assert!(interior_max(&w.scalar(1), 1, |x| -x[1]) < 1e-13);
        assert!(interior_max(&w.scalar(2), 0, |_| 0.0) < 1e-13);
    }

    #[test]
    fn curl_of_vorticity_examples() {
        let g = GridSpec::bounded(2, 17, 0.0, 1.0).unwrap();
        let c = curl_of_vorticity(&Vorticity::Planar(ScalarField::from_fn(g, |_| 2.0)));
        assert_eq!(c.max_abs(), 0.0);
        let c = curl_of_vorticity(&Vorticity::Planar(ScalarField::from_fn(g, |x| x[0])));
        assert!(interior_max(&c.scalar(0), 0, |_| 0.0) < 1e-13);
        assert!(interior_max(&c.scalar(1), 0, |_| -1.0) < 1e-13);
    }

    #[test]
    fn curl_of_vorticity_second_order_on_periodic_grid() {
        let err = |n: usize| {
            let g = GridSpec::periodic(2, n, 0.0, 2.0 * PI).unwrap();
            let w = ScalarField::from_fn(g, |x| x[0].sin() * x[1].sin());
            let c = curl_of_vorticity(&Vorticity::Planar(w));
            interior_max(&c.scalar(0), 0, |x| x[0].sin() * x[1].cos())
                .max(interior_max(&c.scalar(1), 0, |x| -x[0].cos() * x[1].sin()))
        };
        let (e1, e2) = (err(32), err(64));
        let ratio = e1 / e2;
        assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
        // |error| <= h^2/6 max|f'''|
        assert!(e1 <= (2.0 * PI / 32.0f64).powi(2) / 6.0 * 1.0001);
    }

    #[test]
    fn divergence_examples() {
        let g = GridSpec::bounded(2, 13, -1.0, 2.0).unwrap();
        let d = divergence(&VectorField::from_fn(g, |x| [x[0], x[1], 0.0]));
        assert!(interior_max(&d, 0, |_| 2.0) < 1e-13);
        let d = divergence(&VectorField::from_fn(g, |x| [x[1], x[0], 0.0]));
        assert!(d.max_abs() < 1e-13);
    }

    #[test]
    fn laplacian_examples() {
        let g = GridSpec::bounded(2, 13, -1.0, 2.0).unwrap();
        let l = laplacian(&ScalarField::from_fn(g, |x| x[0] * x[0]));
        assert!(interior_max(&l, 0, |_| 2.0) < 1e-11);
        let l = laplacian(&ScalarField::from_fn(g, |x| x[0] + x[1]));
        assert!(l.max_abs() < 1e-11);
    }

    #[test]
    fn laplacian_second_order() {
        let err = |n: usize| {
            let g = GridSpec::bounded(2, n, 0.0, 1.0).unwrap();
            let s = ScalarField::from_fn(g, |x| (PI * x[0]).sin() * (PI * x[1]).sin());
            interior_max(&laplacian(&s), 1, |x| {
                -2.0 * PI * PI * (PI * x[0]).sin() * (PI * x[1]).sin()
            })
        };
        let ratio = err(33) / err(65);
        assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn divergence_of_curl_vanishes_in_interior() {
        let g = GridSpec::bounded(2, 24, 0.0, 1.0).unwrap();
        let w = ScalarField::from_fn(g, |x| (7.0 * x[0]).sin() * (3.0 * x[1] * x[1]).cos() + x[0] * x[1]);
        let d = divergence(&curl_of_vorticity(&Vorticity::Planar(w)));
        assert!(interior_max(&d, 2, |_| 0.0) < 1e-13);
    }

    #[test]
    fn second_order_convergence_of_curl_and_divergence() {
        let err = |n: usize| {
            let g = GridSpec::bounded(2, n, 0.0, 1.0).unwrap();
            let u = VectorField::from_fn(g, |x| [(2.0 * x[1]).sin() * x[0], (3.0 * x[0] + x[1]).cos(), 0.0]);
            let Vorticity::Planar(w) = curl(&u) else { panic!() };
            let d = divergence(&u);
            let ew = interior_max(&w, 1, |x| -3.0 * (3.0 * x[0] + x[1]).sin() - 2.0 * x[0] * (2.0 * x[1]).cos());
            let ed = interior_max(&d, 1, |x| (2.0 * x[1]).sin() - (3.0 * x[0] + x[1]).sin());
            (ew, ed)
        };
        let (a, b) = (err(33), err(65));
        for ratio in [a.0 / b.0, a.1 / b.1] {
            assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
        }
    }
}
