//! Chandrasekhar–Reid flow in the square `[-1, 1]^2`, placed in a larger box
//! behind a zero-velocity margin and reconstructed with both backends.
//!
//! ```text
//! cargo run --release --example chandrasekhar_reid -- 256
//! ```

use solenoidal::cases::{chandrasekhar_reid_field, Case, CaseConfig, ChandrasekharReidParams};
use solenoidal::diagnostics::{DivMethod, Stage};
use solenoidal::{construct_solenoidal, Backend, GridSpec, SolveConfig};

fn main() -> solenoidal::Result<()> {
    let n: usize = std::env::args().nth(1).map_or(256, |s| s.parse().expect("n must be an integer"));

    let params = ChandrasekharReidParams::default();
    println!("lambda {}  A {:.15}  G {:.15}", params.lambda, params.a_lambda, params.g);
    println!("phi(1) = {:.3e}, phi'(1) = {:.3e}", params.phi(1.0), params.phi_prime(1.0));

    let g = GridSpec::bounded(2, n, -1.0, 1.0)?;
    let (u, _) = chandrasekhar_reid_field(&g, &params)?;
    println!("max speed on the {n}x{n} flow grid: {:.6}", u.max_norm());

    for backend in [Backend::Spectral, Backend::FiniteDifference] {
        let setup = CaseConfig::new(Case::ChandrasekharReid, backend).with_n(n).setup()?;
        let out = construct_solenoidal(&setup.u_star, &setup.mask, &setup.prescribed, &SolveConfig::new(backend))?;
        println!("{backend}:");
        for method in [DivMethod::Fd, DivMethod::Spectral] {
            for stage in Stage::ALL {
                if let Some(r) = out.report(stage, method) {
                    println!("  {:<9} {:<8} linf {:.3e}  l2 {:.3e}", stage.name(), method.name(), r.linf, r.l2);
                }
            }
        }
    }
    Ok(())
}
