//! The orthonormal basis of su(n), its structure constants and the Casimir.
//!
//! ```sh
//! cargo run --example basis_and_brackets -- 4
//! ```

use sun_rigidity::lie::{bracket, build_basis, casimir_ad, eta, inner, structure_table, BasisIndex};

fn main() -> sun_rigidity::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let basis = build_basis(n)?;
    println!("su({n}): {} basis elements", basis.len());
    for idx in basis.indices().iter().take(6) {
        println!("  {idx}");
    }

    let table = structure_table(&basis);
    println!(
        "structure constants: {} nonzero, antisymmetry defect {:.1e}",
        table.nnz(),
        table.antisymmetry_defect()
    );

    let e = eta::<f64>(n)?;
    let x = basis.get(BasisIndex::RealOff(1, n)).expect("index exists");
    let c = bracket(x, &e)?;
    println!("[E^r(1,{n}), eta] has norm^2 {:.6}", inner(&c, &c)?);

    let cas = casimir_ad(&basis, &e)?;
    println!("sum_i [E_i,[E_i,eta]] = {:.6} * eta", inner(&cas, &e)? / inner(&e, &e)?);
    Ok(())
}
