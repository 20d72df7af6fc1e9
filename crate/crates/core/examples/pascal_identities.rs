//! Entry identities for powers of `P - I`, `P` the lower-triangular Pascal matrix.
//!
//! `cargo run --example pascal_identities -- 8`

use modlift::pascal::{pascal_lemma_check, pascal_nilpotent};

fn main() -> modlift::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(6);
    println!("a0 = P - I, n = {n}:");
    for row in pascal_nilpotent(n) {
        println!("  {}", row.iter().map(|v| format!("{v:>4}")).collect::<String>());
    }
    for ell in 1..=n.saturating_sub(2) {
        let report = pascal_lemma_check(n, ell)?;
        for check in report.headline() {
            println!("l = {ell}: {check}");
        }
        assert!(report.all_passed());
    }
    Ok(())
}
