//! Fourier-spectral velocity reconstruction on fully periodic boxes.
//!
//! Transforms are unnormalised in the forward direction and scaled by
//! `1/N` on the way back. Wavenumbers are `2 pi m / L` with `m` in
//! `[-n/2, n/2)`. The Nyquist wavenumber of an even axis is treated as
//! zero whenever a derivative is taken, so that derivatives of real fields
//! stay real and conjugate-symmetric.

use std::sync::Arc;

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::error::{Error, Result};
use crate::grid::{GridSpec, ScalarField, VectorField};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Fourier coefficients of one or more real fields on the same periodic grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: GridSpec,
    coeffs: Vec<Vec<Complex64>>,
}

impl SpectralField {
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn components(&self) -> &[Vec<Complex64>] {
        &self.coeffs
    }

    pub fn component(&self, c: usize) -> &[Complex64] {
        &self.coeffs[c]
    }

    pub fn num_components(&self) -> usize {
        self.coeffs.len()
    }

    /// Differentiation wavenumbers along `axis`, one per index (Nyquist = 0).
    pub fn wavenumbers(&self, axis: usize) -> Vec<f64> {
        derivative_wavenumbers(&self.grid, axis)
    }

    /// Derivative wavenumber vector of flat index `p` (unused axes are 0).
    pub fn k_at(&self, p: usize) -> [f64; 3] {
        let tables = wavenumber_tables(&self.grid);
        k_vector(&self.grid, &tables, p)
    }
}

fn require_periodic(grid: &GridSpec) -> Result<()> {
    if grid.fully_periodic() {
        Ok(())
    } else {
        Err(Error::UnsupportedBackend(
            "spectral operations need a fully periodic grid".into(),
        ))
    }
}

/// Signed integer mode number of index `m` on an axis of `n` points.
pub fn mode_number(m: usize, n: usize) -> i64 {
    if m < n.div_ceil(2) {
        m as i64
    } else {
        m as i64 - n as i64
    }
}

pub fn derivative_wavenumbers(grid: &GridSpec, axis: usize) -> Vec<f64> {
    if axis >= grid.dim() {
        return vec![0.0];
    }
    let n = grid.n(axis);
    let scale = 2.0 * std::f64::consts::PI / grid.extent(axis);
    (0..n)
        .map(|m| {
            if n.is_multiple_of(2) && m == n / 2 {
                0.0
            } else {
                scale * mode_number(m, n) as f64
            }
        })
        .collect()
}

fn wavenumber_tables(grid: &GridSpec) -> [Vec<f64>; 3] {
    [0, 1, 2].map(|a| derivative_wavenumbers(grid, a))
}

#[inline]
fn k_vector(grid: &GridSpec, tables: &[Vec<f64>; 3], p: usize) -> [f64; 3] {
    let idx = grid.unravel(p);
    [tables[0][idx[0]], tables[1][idx[1]], tables[2][idx[2]]]
}

struct Plans {
    axes: Vec<Arc<dyn Fft<f64>>>,
}

impl Plans {
    fn new(grid: &GridSpec, direction: FftDirection) -> Self {
        let mut planner = FftPlanner::new();
        let axes = (0..grid.dim())
            .map(|a| planner.plan_fft(grid.n(a), direction))
            .collect();
        Plans { axes }
    }

    fn run(&self, grid: &GridSpec, data: &mut [Complex64]) {
        let [n0, n1, n2] = grid.shape();
        data.par_chunks_mut(n0).for_each(|line| self.axes[0].process(line));

        data.par_chunks_mut(n0 * n1).for_each(|slab| {
            let mut line = vec![Complex64::default(); n1];
            for i in 0..n0 {
                for (j, v) in line.iter_mut().enumerate() {
                    *v = slab[i + n0 * j];
                }
                self.axes[1].process(&mut line);
                for (j, v) in line.iter().enumerate() {
                    slab[i + n0 * j] = *v;
                }
            }
        });

        if grid.dim() == 3 {
            let plane = n0 * n1;
            let mut line = vec![Complex64::default(); n2];
            for q in 0..plane {
                for (k, v) in line.iter_mut().enumerate() {
                    *v = data[q + plane * k];
                }
                self.axes[2].process(&mut line);
                for (k, v) in line.iter().enumerate() {
                    data[q + plane * k] = *v;
                }
            }
        }
    }
}

fn forward_components(grid: &GridSpec, comps: &[&[f64]]) -> Result<SpectralField> {
    require_periodic(grid)?;
    let plans = Plans::new(grid, FftDirection::Forward);
    let coeffs = comps
        .iter()
        .map(|c| {
            let mut buf: Vec<Complex64> = c.iter().map(|&v| Complex64::new(v, 0.0)).collect();
            plans.run(grid, &mut buf);
            buf
        })
        .collect();
    Ok(SpectralField {
        grid: *grid,
        coeffs,
    })
}

/// Forward transform of every component of a vector field.
pub fn forward_dft(u: &VectorField) -> Result<SpectralField> {
    let comps: Vec<&[f64]> = u.components().iter().map(Vec::as_slice).collect();
    forward_components(u.grid(), &comps)
}

/// Forward transform of a scalar field (one component).
pub fn forward_dft_scalar(s: &ScalarField) -> Result<SpectralField> {
    forward_components(s.grid(), &[s.values()])
}

/// Inverse transform, returning the real part of every component.
pub fn inverse_dft(f: &SpectralField) -> Vec<Vec<f64>> {
    let grid = f.grid;
    let plans = Plans::new(&grid, FftDirection::Inverse);
    let scale = 1.0 / grid.len() as f64;
    f.coeffs
        .iter()
        .map(|c| {
            let mut buf = c.clone();
            plans.run(&grid, &mut buf);
            buf.into_iter().map(|v| v.re * scale).collect()
        })
        .collect()
}

impl SpectralField {
    pub fn to_vector(&self) -> VectorField {
        VectorField::from_components(self.grid, inverse_dft(self)).expect("component count matches grid")
    }

    pub fn to_scalar(&self) -> ScalarField {
        let mut comps = inverse_dft(self);
        ScalarField::from_vec(self.grid, comps.swap_remove(0)).unwrap()
    }
}

/// `i k x u_hat`: one (out-of-plane) component in 2D, three in 3D.
pub fn spectral_curl(u_hat: &SpectralField) -> SpectralField {
    let grid = u_hat.grid;
    let t = wavenumber_tables(&grid);
    let u = &u_hat.coeffs;
    let coeffs = if grid.dim() == 2 {
        vec![(0..grid.len())
            .map(|p| {
                let k = k_vector(&grid, &t, p);
                I * (k[0] * u[1][p] - k[1] * u[0][p])
            })
            .collect()]
    } else {
        let mut out = vec![vec![Complex64::default(); grid.len()]; 3];
        for p in 0..grid.len() {
            let k = k_vector(&grid, &t, p);
            let c = cross(k, [u[0][p], u[1][p], u[2][p]]);
            for a in 0..3 {
                out[a][p] = I * c[a];
            }
        }
        out
    };
    SpectralField { grid, coeffs }
}

#[inline]
fn cross(k: [f64; 3], v: [Complex64; 3]) -> [Complex64; 3] {
    [
        k[1] * v[2] - k[2] * v[1],
        k[2] * v[0] - k[0] * v[2],
        k[0] * v[1] - k[1] * v[0],
    ]
}

/// Velocity spectrum solving `lap u = -curl omega` on the periodic box.
///
/// Each mode is `u_hat = i k x omega_hat / |k|^2`; modes with vanishing
/// derivative wavenumber (the mean and pure Nyquist modes) are set to zero.
/// When `omega_hat` is the spectral curl of some `u_star_hat`, this equals
/// `u_star_hat - k (k . u_star_hat) / |k|^2`, the solenoidal projection.
pub fn solve_poisson_periodic(omega_hat: &SpectralField) -> SpectralField {
    let grid = omega_hat.grid;
    let t = wavenumber_tables(&grid);
    let w = &omega_hat.coeffs;
    let mut out = vec![vec![Complex64::default(); grid.len()]; grid.dim()];
    for p in 0..grid.len() {
        let k = k_vector(&grid, &t, p);
        let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        if k2 == 0.0 {
            continue;
        }
        let inv = I / k2;
        if grid.dim() == 2 {
            out[0][p] = inv * k[1] * w[0][p];
            out[1][p] = -inv * k[0] * w[0][p];
        } else {
            let c = cross(k, [w[0][p], w[1][p], w[2][p]]);
            for a in 0..3 {
                out[a][p] = inv * c[a];
            }
        }
    }
    SpectralField { grid, coeffs: out }
}

/// `i k . u_hat`, transformed back to physical space.
pub fn spectral_divergence(u_hat: &SpectralField) -> ScalarField {
    let grid = u_hat.grid;
    let t = wavenumber_tables(&grid);
    let div: Vec<Complex64> = (0..grid.len())
        .map(|p| {
            let k = k_vector(&grid, &t, p);
            I * (0..grid.dim()).map(|a| k[a] * u_hat.coeffs[a][p]).sum::<Complex64>()
        })
        .collect();
    SpectralField {
        grid,
        coeffs: vec![div],
    }
    .to_scalar()
}

/// Spectral divergence of a physical-space field.
pub fn divergence_of(u: &VectorField) -> Result<ScalarField> {
    Ok(spectral_divergence(&forward_dft(u)?))
}

/// The full periodic reconstruction: curl, invert, transform back.
pub fn reconstruct(u_star: &VectorField) -> Result<VectorField> {
    let u_hat = forward_dft(u_star)?;
    Ok(solve_poisson_periodic(&spectral_curl(&u_hat)).to_vector())
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    fn grid(n: usize) -> GridSpec {
        GridSpec::periodic(2, n, 0.0, 2.0 * PI).unwrap()
    }

    /// Direct O(N^2) summation of the unnormalised forward transform.
    fn brute_dft(g: &GridSpec, f: &[f64]) -> Vec<Complex64> {
        let [n0, n1, n2] = g.shape();
        (0..g.len())
            .map(|q| {
                let [m0, m1, m2] = g.unravel(q);
                (0..g.len())
                    .map(|p| {
                        let [j0, j1, j2] = g.unravel(p);
                        let phase = -2.0
                            * PI
                            * ((m0 * j0) as f64 / n0 as f64
                                + (m1 * j1) as f64 / n1 as f64
                                + (m2 * j2) as f64 / n2 as f64);
                        f[p] * Complex64::from_polar(1.0, phase)
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn cosine_has_two_modes() {
        let g = grid(16);
        let f = ScalarField::from_fn(g, |x| x[0].cos());
        let fh = forward_dft_scalar(&f).unwrap();
        let oracle = brute_dft(&g, f.values());
        for (p, o) in oracle.iter().enumerate() {
            assert!((fh.component(0)[p] - o).norm() < 1e-11);
            let [m0, m1, _] = g.unravel(p);
            let expect = if m1 == 0 && (m0 == 1 || m0 == 15) { 128.0 } else { 0.0 };
            assert!((fh.component(0)[p].norm() - expect).abs() < 1e-11, "mode {m0},{m1}");
        }
    }

    #[test]
    fn brute_force_agrees_in_3d() {
        let g = GridSpec::new(&[8, 10, 9], &[0.0; 3], &[1.0, 2.0, 3.0], &[true; 3]).unwrap();
        let f = ScalarField::from_fn(g, |x| (x[0] * 3.1).sin() + x[1] * x[2] - (x[2] * x[0]).cos());
        let fh = forward_dft_scalar(&f).unwrap();
        let oracle = brute_dft(&g, f.values());
        let err = fh.component(0).iter().zip(&oracle).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-11, "{err}");
    }

    #[test]
    fn constant_only_mean_mode() {
        let g = grid(12);
        let fh = forward_dft_scalar(&ScalarField::from_fn(g, |_| 2.5)).unwrap();
        assert!((fh.component(0)[0].re - 2.5 * 144.0).abs() < 1e-12);
        assert!(fh.component(0)[1..].iter().all(|c| c.norm() < 1e-12));
    }

    #[test]
    fn round_trip() {
        let g = grid(24);
        let f = ScalarField::from_fn(g, |x| (x[0] * 1.7).sin().exp() + x[1]);
        let back = forward_dft_scalar(&f).unwrap().to_scalar();
        let err = f.values().iter().zip(back.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err <= 1e-13 * f.max_abs());
    }

    #[test]
    fn bounded_grid_rejected() {
        let g = GridSpec::bounded(2, 16, 0.0, 1.0).unwrap();
        assert!(matches!(
            forward_dft(&VectorField::zeros(g)),
            Err(Error::UnsupportedBackend(_))
        ));
    }

    #[test]
    fn curl_of_shear() {
        let g = grid(32);
        let u = VectorField::from_fn(g, |x| [x[1].sin(), 0.0, 0.0]);
        let w = spectral_curl(&forward_dft(&u).unwrap()).to_scalar();
        for p in 0..g.len() {
            assert!((w[p] + g.position(p)[1].cos()).abs() < 1e-13);
        }
    }

    #[test]
    fn curl_of_gradient_and_constant_vanish() {
        let g = grid(32);
        let u = VectorField::from_fn(g, |x| [x[0].cos() * x[1].sin(), x[0].sin() * x[1].cos(), 0.0]);
        let w = spectral_curl(&forward_dft(&u).unwrap());
        assert!(w.component(0).iter().all(|c| c.norm() < 1e-12));
        let c = VectorField::from_fn(g, |_| [1.0, -2.0, 0.0]);
        let w = spectral_curl(&forward_dft(&c).unwrap()).to_scalar();
        assert!(w.max_abs() < 1e-14);
    }

    #[test]
    fn zero_vorticity_gives_zero_velocity() {
        let g = grid(16);
        let w = forward_dft_scalar(&ScalarField::zeros(g)).unwrap();
        assert_eq!(solve_poisson_periodic(&w).to_vector().max_abs(), 0.0);
    }

    #[test]
    fn divergence_of_gradient_is_laplacian() {
        let g = grid(32);
        let u = VectorField::from_fn(g, |x| [x[0].cos() * x[1].sin(), x[0].sin() * x[1].cos(), 0.0]);
        let d = divergence_of(&u).unwrap();
        for p in 0..g.len() {
            let x = g.position(p);
            assert!((d[p] + 2.0 * x[0].sin() * x[1].sin()).abs() < 1e-12);
        }
        let c = VectorField::from_fn(g, |_| [3.0, 1.0, 0.0]);
        assert!(divergence_of(&c).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn nyquist_derivative_is_zero() {
        let g = grid(8);
        let k = derivative_wavenumbers(&g, 0);
        assert_eq!(k, vec![0.0, 1.0, 2.0, 3.0, 0.0, -3.0, -2.0, -1.0]);
        let odd = GridSpec::periodic(2, 9, 0.0, 2.0 * PI).unwrap();
        assert_eq!(derivative_wavenumbers(&odd, 1)[4], 4.0);
        assert_eq!(derivative_wavenumbers(&odd, 1)[5], -4.0);
    }

    #[test]
    fn taylor_green_reproduced() {
        let g = grid(32);
        let u = VectorField::from_fn(g, |x| {
            [x[0].sin() * x[1].cos(), -x[0].cos() * x[1].sin(), 0.0]
        });
        let r = reconstruct(&u).unwrap();
        assert!(r.max_abs_diff(&u) < 1e-13);
    }

    #[test]
    fn solved_modes_are_orthogonal_to_k() {
        let g = GridSpec::periodic(3, 8, 0.0, 2.0 * PI).unwrap();
        let u = VectorField::from_fn(g, |x| {
            [(x[0] + 2.0 * x[2]).sin(), x[1].cos() * x[0].sin(), (x[2] - x[1]).cos() + x[0]]
        });
        let uh = solve_poisson_periodic(&spectral_curl(&forward_dft(&u).unwrap()));
        for p in 0..g.len() {
            let k = uh.k_at(p);
            let dot: Complex64 = (0..3).map(|a| k[a] * uh.component(a)[p]).sum();
            let mag = (0..3).map(|a| uh.component(a)[p].norm_sqr()).sum::<f64>().sqrt();
            assert!(dot.norm() <= 1e-13 * mag.max(1e-300) + 1e-300, "mode {p}");
        }
    }
}
