//! Equivariant quadratic maps counted with symmetric-group characters.

use sun_rigidity::weyl::{decompose_s2v, hom_dim, hom_dim_brute_force, partitions, HomGroup};

fn main() -> sun_rigidity::Result<()> {
    let classes: Vec<String> = partitions(5)?.iter().map(ToString::to_string).collect();
    println!("conjugacy classes of S_5: {}", classes.join(" "));

    println!("{:>2} {:>8} {:>7} {:>9}", "n", "product", "single", "summands");
    for n in 2..=8 {
        let p = hom_dim(n, HomGroup::Product)?.dimension;
        let s = hom_dim(n, HomGroup::Single)?.dimension;
        let d = decompose_s2v(n)?;
        println!("{n:>2} {p:>8} {s:>7} {:>9}", d.product_summand_count());
    }

    let brute = hom_dim_brute_force(4, HomGroup::Product)?;
    println!("n = 4 by enumerating S_4 x S_4: {}", brute.dimension);

    let d = decompose_s2v(5)?;
    println!(
        "s^2 V over S_5: trivial {}, sign {}, standard {}, (3,2) {}",
        d.trivial, d.alternating, d.standard, d.two_row
    );
    Ok(())
}
