//! A square moving with unit speed through fluid at rest, reconstructed
//! with either backend.
//!
//! ```text
//! cargo run --release --example moving_square -- fd 256
//! ```

use std::time::Instant;

use solenoidal::cases::{Case, CaseConfig};
use solenoidal::diagnostics::{DivMethod, Stage};
use solenoidal::{construct_solenoidal, immersed_bc_error, Backend, SolveConfig};

fn main() -> solenoidal::Result<()> {
    let mut args = std::env::args().skip(1);
    let backend: Backend = args.next().as_deref().unwrap_or("spectral").parse()?;
    let n: usize = args.next().map_or(256, |s| s.parse().expect("n must be an integer"));

    let setup = CaseConfig::new(Case::Square, backend).with_n(n).setup()?;
    let start = Instant::now();
    let out = construct_solenoidal(&setup.u_star, &setup.mask, &setup.prescribed, &SolveConfig::new(backend))?;
    println!("{backend} {n}x{n}: {:.2?}", start.elapsed());
    for st in &out.stats {
        println!("  sor: {} sweeps, residual {:.2e}", st.iterations, st.residual);
    }

    for r in &out.reports {
        println!(
            "  {:<9} {:<8} linf {:.3e}  l2 {:.3e}  argmax in {}",
            r.stage.name(),
            r.method.name(),
            r.linf,
            r.l2,
            r.argmax_tag.label()
        );
    }
    let initial = out.report(Stage::Initial, DivMethod::Fd).unwrap().linf;
    let extracted = out.report(Stage::Extracted, DivMethod::Fd).unwrap().linf;
    println!("  reduction factor (fd): {:.3e}", extracted / initial);

    let bc = immersed_bc_error(&out.extended, &setup.mask, &setup.prescribed)?;
    for edge in ["left", "right", "bottom", "top"] {
        let worst = bc
            .iter()
            .filter(|r| r.edge == edge)
            .fold([0.0f64; 2], |m, r| [m[0].max(r.error[0].abs()), m[1].max(r.error[1].abs())]);
        println!("  {edge:<6} max |du1| {:.3e}  max |du2| {:.3e}", worst[0], worst[1]);
    }
    Ok(())
}
