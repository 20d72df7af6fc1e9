//! Keep lifting past `p^2` and watch the precision each module reaches.

use modlift::lift::{lift_to_precision, witness_validate, LiftConfig};
use modlift::sl2::RepresentationSpec;

fn main() -> modlift::Result<()> {
    for (q, label) in [(2, "V1"), (3, "V2"), (5, "V3"), (5, "V4"), (4, "V2"), (7, "V1")] {
        let spec = RepresentationSpec::parse(q, label)?;
        let report = lift_to_precision(&spec, &LiftConfig::default().with_target(4))?;
        let levels: Vec<String> = report
            .authoritative()
            .levels
            .iter()
            .map(|l| format!("{}->{}:{}", l.level, l.level + 1, if l.consistent { "ok" } else { "stuck" }))
            .collect();
        let witness = match &report.witness {
            Some(w) => format!("witness valid: {}", witness_validate(w)),
            None => "no witness".into(),
        };
        println!("{spec:<8} reached p^{} of p^{}  [{}]  {witness}", report.achieved_precision, report.target, levels.join(" "));
    }
    Ok(())
}
