//! Third variation of the nu-entropy along h_eta.

use sun_rigidity::obstruction::{nu_third_variation, obstructed_directions_report};

fn main() -> sun_rigidity::Result<()> {
    for n in 3..=8 {
        let r = nu_third_variation(n)?;
        println!(
            "n = {n}: coefficient {:.6e} x I {:>7.0} = {:.6e}",
            r.coefficient, r.i_per_vol, r.product
        );
    }
    for n in [3, 4] {
        println!("{}", obstructed_directions_report(n)?.summary);
    }
    Ok(())
}
