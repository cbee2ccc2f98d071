//! Zeros of Psi(X, Y) = (psi(X), psi(Y)) on su(n) + su(n).

use sun_rigidity::weyl::zero_set_classify;

fn main() -> sun_rigidity::Result<()> {
    for n in 2..=9 {
        let z = zero_set_classify(n)?;
        match z.psi_residual {
            None => println!("n = {n}: only the origin ({} sign patterns, none traceless)", z.sign_patterns_checked),
            Some(r) => println!("n = {n}: {} ; |Psi(Lambda,0)| = {r:.1e}", z.description),
        }
    }
    Ok(())
}
