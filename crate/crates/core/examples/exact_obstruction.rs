//! The obstruction in exact rational arithmetic on the integral basis.

use sun_rigidity::obstruction::{koiso_i_eta_exact, ContractionPath};

fn main() -> sun_rigidity::Result<()> {
    for n in 3..=8 {
        let r = koiso_i_eta_exact(n, ContractionPath::Diagonal)?;
        println!(
            "n = {n}: tr h^3 = {}, hess_a = {}, hess_b = {}, I = {} (closed form {})",
            r.term_cubic, r.term_hess_a, r.term_hess_b, r.i_total, r.closed.total
        );
    }
    let r = koiso_i_eta_exact(3, ContractionPath::Full)?;
    println!("n = 3 over all index quadruples: I = {}", r.i_total);
    Ok(())
}
