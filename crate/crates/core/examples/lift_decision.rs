//! Decide whether a module lifts to `Z/p^2Z` and check the witness.
//!
//! `cargo run --example lift_decision -- 5 V4 full`

use modlift::lift::{lift_to_precision, witness_validate, LiftConfig, LiftPath};
use modlift::sl2::RepresentationSpec;

fn main() -> modlift::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let q = args.first().map_or(Ok(5), |a| a.parse()).expect("q");
    let label = args.get(1).map_or("V4", String::as_str);
    let path: LiftPath = args.get(2).map_or(Ok(LiftPath::Both), |a| a.parse())?;

    let spec = RepresentationSpec::parse(q, label)?;
    let report = lift_to_precision(&spec, &LiftConfig::default().with_target(2).with_path(path))?;
    println!("{spec}: {}", report.decision);
    for outcome in &report.outcomes {
        let stats = &outcome.levels[0].stats;
        println!(
            "  {} path: |G| = {}, {} unknowns instead of {}, rank {}, {}",
            outcome.path,
            outcome.group_order,
            stats.unknowns,
            stats.nominal_unknowns,
            stats.rank,
            outcome.decision()
        );
    }
    if let Some(w) = &report.witness {
        println!("witness over Z/{}Z valid: {}", w.ring().modulus(), witness_validate(w));
        for (i, m) in w.generator_images().iter().enumerate() {
            println!("  generator {i}: {:?}", m.to_rows());
        }
    }
    Ok(())
}
