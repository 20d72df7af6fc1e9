//! Image groups cached on disk: a second run reads the tables instead of closing again.

use modlift::io::GroupCache;
use modlift::lift::{lift_to_precision_with, LiftConfig, LiftPath};
use modlift::sl2::RepresentationSpec;

fn main() -> modlift::Result<()> {
    let dir = tempfile::tempdir()?;
    let cache = GroupCache::new(dir.path())?;
    let config = LiftConfig::default().with_path(LiftPath::Both).with_target(2);
    for round in 1..=2 {
        for (q, label) in [(4, "V1"), (5, "V3"), (8, "V1")] {
            let spec = RepresentationSpec::parse(q, label)?;
            let report = lift_to_precision_with(&spec, &config, &cache)?;
            println!("round {round}: {spec} {}", report.decision);
        }
        println!("  hits {}, builds {}", cache.hits(), cache.builds());
    }
    for entry in std::fs::read_dir(cache.dir())? {
        let entry = entry?;
        println!("{} ({} bytes)", entry.file_name().to_string_lossy(), entry.metadata()?.len());
    }
    Ok(())
}
