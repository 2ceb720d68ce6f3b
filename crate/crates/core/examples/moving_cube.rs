//! A cube moving through fluid at rest in a periodic box, spectral backend.
//!
//! ```text
//! cargo run --release --example moving_cube -- 64
//! ```

use std::time::Instant;

use solenoidal::cases::{Case, CaseConfig};
use solenoidal::diagnostics::{DivMethod, Stage};
use solenoidal::{construct_solenoidal, Backend, SolveConfig};

fn main() -> solenoidal::Result<()> {
    let n: usize = std::env::args().nth(1).map_or(64, |s| s.parse().expect("n must be an integer"));
    let setup = CaseConfig::new(Case::Cube, Backend::Spectral).with_n(n).setup()?;
    let start = Instant::now();
    let out = construct_solenoidal(&setup.u_star, &setup.mask, &setup.prescribed, &SolveConfig::new(Backend::Spectral))?;
    println!("{n}^3 in {:.2?}", start.elapsed());
    let scale = out.extended.max_abs();
    let solved = out.report(Stage::Solved, DivMethod::Spectral).unwrap();
    println!("max |u^D| {scale:.4}");
    println!("spectral max |div u^D| {:.3e} ({:.3e} relative)", solved.linf, solved.linf / scale);
    println!("fd max |div u| on fluid interior {:.3e}", out.report(Stage::Extracted, DivMethod::Fd).unwrap().linf);
    Ok(())
}
