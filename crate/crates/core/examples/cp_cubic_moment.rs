//! The cubic moment of a first eigenfunction on CP^m, exact and by Monte
//! Carlo, and the resulting rigidity verdicts.

use sun_rigidity::soliton::{cubic_moment_exact, cubic_moment_mc, isd_report, rigidity_verdict, EigenProbe, Space};

fn main() -> sun_rigidity::Result<()> {
    let probe = EigenProbe::diagonal(&[1.0, 1.0, -2.0])?;
    println!("exact E[(z*Az)^3] = {}", cubic_moment_exact(&probe));
    for samples in [10_000, 100_000, 1_000_000] {
        let e = cubic_moment_mc(&probe, samples, 7)?;
        println!("  {samples:>8} samples: {:.5} +- {:.1e} ({:.2} sigma)", e.mc_mean, e.mc_stderr, e.z_score());
    }

    for s in ["cp2", "cp4", "gr2,5", "gr1,4", "su3"] {
        let space: Space = s.parse()?;
        let isd = isd_report(space)?;
        let verdict = rigidity_verdict(space).map(|v| v.verdict).unwrap_or_else(|_| "n/a".into());
        let v = isd.v_minus_2lambda_dim.map_or("-".to_string(), |d| d.to_string());
        println!("{:<10} EID {:>3}  V_-2lambda {:>3}  {verdict}", isd.space, isd.eid_dim, v);
    }
    Ok(())
}
