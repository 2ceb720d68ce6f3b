//! The spectral reconstruction acts as an orthogonal projection onto
//! divergence-free, mean-free fields: it keeps solenoidal fields, removes
//! gradients, and applying it twice changes nothing.

use std::f64::consts::PI;

use solenoidal::cases::{library_field, LibraryField};
use solenoidal::grid::{Prescribed, RegionMask};
use solenoidal::{construct_solenoidal, Backend, GridSpec, SolveConfig, VectorField};

fn project(u: &VectorField) -> solenoidal::Result<VectorField> {
    let mask = RegionMask::all_fluid(*u.grid());
    Ok(construct_solenoidal(u, &mask, &Prescribed::new(), &SolveConfig::new(Backend::Spectral))?.velocity)
}

fn main() -> solenoidal::Result<()> {
    let g = GridSpec::periodic(2, 64, 0.0, 2.0 * PI)?;
    let tg = library_field(LibraryField::TaylorGreen, &g)?;
    let grad = library_field(LibraryField::Gradient, &g)?;
    let shear = library_field(LibraryField::Shear, &g)?;

    println!("|P(tg) - tg|         {:.2e}", project(&tg)?.max_abs_diff(&tg));
    println!("|P(grad)|            {:.2e}", project(&grad)?.max_abs());
    println!("|P(shear) - shear|   {:.2e}", project(&shear)?.max_abs_diff(&shear));

    let mixed = VectorField::from_fn(g, |x| [(x[0] + 2.0 * x[1]).sin() + 0.3, x[0].cos() * x[1].sin(), 0.0]);
    let once = project(&mixed)?;
    println!("|P(P(u)) - P(u)|     {:.2e}", project(&once)?.max_abs_diff(&once));
    Ok(())
}
