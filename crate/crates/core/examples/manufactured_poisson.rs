//! Second-order convergence of the SOR Poisson solver against
//! `sin(pi x) sin(pi y)` on the unit square.

use solenoidal::diagnostics::{refinement_study, StudyCase};
use solenoidal::Backend;

fn main() -> solenoidal::Result<()> {
    let rows = refinement_study(StudyCase::ManufacturedPoisson, Backend::FiniteDifference, &[17, 33, 65, 129])?;
    println!("{:>5} {:>12} {:>12} {:>7}", "n", "linf", "l2", "ratio");
    for (i, r) in rows.iter().enumerate() {
        let ratio = if i > 0 { rows[i - 1].linf / r.linf } else { f64::NAN };
        println!("{:>5} {:>12.4e} {:>12.4e} {:>7.3}", r.n, r.linf, r.l2, ratio);
    }
    Ok(())
}
