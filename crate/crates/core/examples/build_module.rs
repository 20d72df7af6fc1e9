//! Generator images of `V_n(q)`, its twists and duals, over F_p, and their exchange files.

use modlift::io::MatrixFile;
use modlift::sl2::RepresentationSpec;

fn main() -> modlift::Result<()> {
    for label in ["V2", "V2^1", "V1*", "Lambda"] {
        let spec = RepresentationSpec::parse(9, label)?;
        let images = spec.generator_images()?;
        println!("{spec}: dimension {} over F_{}", images.dimension(), spec.p);
        for (name, m) in images.named() {
            println!("  {name}:");
            for row in m.to_rows() {
                println!("    {row:?}");
            }
        }
    }
    let gamma = RepresentationSpec::parse(4, "V1")?.generator_images()?.gamma;
    print!("{}", MatrixFile::from_matrix(&gamma, Some(2), Some("V1(4) gamma".into())).to_json());
    Ok(())
}
