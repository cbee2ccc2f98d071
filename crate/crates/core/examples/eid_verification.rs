//! Checks that h_v is trace-free, divergence-free and in the kernel of
//! Delta + 2 Rm for every basis direction v and both invariant extensions.

use num_rational::BigRational;
use sun_rigidity::geometry::{ricci_check, EidVerifier, GeometryContext};
use sun_rigidity::lie::{build_basis, Basis};

fn main() -> sun_rigidity::Result<()> {
    println!("{:>2} {:>10} {:>11} {:>11} {:>11}", "n", "directions", "trace", "divergence", "lichnerow.");
    for n in 3..=6 {
        let ctx = GeometryContext::new(build_basis(n)?);
        let ric = ricci_check(&ctx)?;
        let s = EidVerifier::new(&ctx).sweep(1e-8)?;
        println!(
            "{n:>2} {:>10} {:>11.2e} {:>11.2e} {:>11.2e}   Ric = {ric}",
            s.directions, s.max_trace, s.max_div, s.max_lichnerowicz
        );
    }

    let exact = GeometryContext::new(Basis::<BigRational>::integral(3)?);
    let s = EidVerifier::new(&exact).sweep(1e-8)?;
    println!("exact n = 3: {} directions, every residual zero: {}", s.directions, s.max_trace == 0.0 && s.max_div == 0.0 && s.max_lichnerowicz == 0.0);
    Ok(())
}
