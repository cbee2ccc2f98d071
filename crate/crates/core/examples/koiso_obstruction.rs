//! Koiso's obstruction on h_eta for n = 3..8 against the closed forms.

use sun_rigidity::obstruction::{koiso_i_eta, ContractionPath};

fn main() -> sun_rigidity::Result<()> {
    println!("{:>2} {:>12} {:>12} {:>12} {:>12} {:>8}", "n", "tr h^3", "hess_a", "hess_b", "I", "closed");
    for n in 3..=8 {
        let r = koiso_i_eta(n, ContractionPath::Diagonal)?;
        println!(
            "{n:>2} {:>12.4} {:>12.4} {:>12.4} {:>12.4} {:>8}",
            r.term_cubic, r.term_hess_a, r.term_hess_b, r.i_total, r.closed.total
        );
    }

    // The literal quadruple sum, no diagonal shortcut.
    let full = koiso_i_eta(4, ContractionPath::Full)?;
    println!("n = 4, full contraction: I = {:.6}, all terms match: {}", full.i_total, full.all_match());
    Ok(())
}
