//! The linear conditions on `alpha + pX` over F_p, and which of them clash.

use modlift::lift::coset::{build_coset_system, coset_cross_check};
use modlift::sl2::RepresentationSpec;

fn main() -> modlift::Result<()> {
    for (p, r, n) in [(5, 1, 1), (5, 1, 2), (3, 1, 1), (3, 1, 3), (2, 2, 1)] {
        let sys = build_coset_system(p, r, n)?;
        let solution = sys.solve();
        print!("(p, r, n) = ({p}, {r}, {n}): {} unknowns, rank {}, ", sys.num_unknowns(), solution.rank());
        if solution.is_consistent() {
            println!("consistent");
        } else {
            let rows: Vec<String> = sys.contradiction_rows().iter().map(ToString::to_string).collect();
            println!("inconsistent; contradictions at {}", if rows.is_empty() { "no single row".into() } else { rows.join(" ") });
        }
    }
    // a consistent system is necessary for a lift, not sufficient
    for (q, label) in [(5, "V2"), (5, "V3"), (7, "V4"), (9, "V1")] {
        let spec = RepresentationSpec::parse(q, label)?;
        let check = coset_cross_check(&spec)?;
        println!("{spec}: lifts {}, coset system consistent {}", check.liftable, check.coset_consistent);
    }
    Ok(())
}
