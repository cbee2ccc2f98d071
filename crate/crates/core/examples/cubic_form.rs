//! The invariant cubic form and the diagonal of h_eta.

use sun_rigidity::cubic::{contract_h, h_eta_diagonal_closed_form, metric_trace, sigma};
use sun_rigidity::lie::{build_basis, eta, BasisIndex};

fn main() -> sun_rigidity::Result<()> {
    let n = 4;
    let basis = build_basis(n)?;
    let e = eta::<f64>(n)?;
    let t = basis.get(BasisIndex::Torus(n - 1)).expect("torus element");
    println!("sigma(eta, T_{0}, T_{0}) = {1}", n - 1, sigma(&e, t, t)?);

    let h = contract_h(&e, &basis)?;
    println!("h_eta on su({n}): trace {:.1e}, off-diagonal {:.1e}", metric_trace(&h), h.max_off_diagonal());
    println!("{:<12} {:>10} {:>10}", "direction", "computed", "closed");
    for (a, idx) in basis.indices().iter().enumerate() {
        println!("{:<12} {:>10.6} {:>10}", idx.to_string(), h.get(a, a), h_eta_diagonal_closed_form(n, *idx));
    }
    Ok(())
}
