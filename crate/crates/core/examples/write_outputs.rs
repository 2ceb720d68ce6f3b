//! Runs the command-line pipeline from code and reads its files back.
//!
//! ```text
//! cargo run --release --example write_outputs -- out
//! ```

use std::path::PathBuf;

use solenoidal::cases::Case;
use solenoidal::cli::report::{read_boundary_errors, read_diagnostics};
use solenoidal::cli::vtk::read_fields;
use solenoidal::cli::{run, RunConfig, BOUNDARY_ERROR_FILE, DIAGNOSTICS_FILE, FIELDS_FILE};
use solenoidal::diffops::divergence;
use solenoidal::Backend;

fn main() -> solenoidal::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "solenoidal-out".into()));
    let mut config = RunConfig::new(Case::Square, Backend::Spectral, &dir);
    config.case.n = 128;
    print!("{}", run(&config)?.render());

    for row in read_diagnostics(&dir.join(DIAGNOSTICS_FILE))? {
        println!("{:<9} {:<8} {:.3e}", row.stage, row.method, row.linf);
    }
    let bc = read_boundary_errors(&dir.join(BOUNDARY_ERROR_FILE))?;
    println!("{} boundary nodes", bc.len());

    let file = read_fields(&dir.join(FIELDS_FILE))?;
    let names: Vec<&str> = file.scalars.iter().map(|(n, _)| n.as_str()).collect();
    println!("arrays: velocity {names:?}");
    println!("fd max |div u^D| from the file: {:.3e}", divergence(&file.velocity).max_abs());
    Ok(())
}
