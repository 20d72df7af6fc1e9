//! Arithmetic in F_4 and F_9, the regular representation, and Frobenius.

use modlift::field::GaloisField;

fn main() -> modlift::Result<()> {
    for (p, r) in [(2, 2), (3, 2)] {
        let field = GaloisField::new(p, r)?;
        let t = field.generator();
        println!("F_{}: t is a root of {:?} (coefficients low to high)", field.order(), field.modulus());
        println!("  t has order {}", field.element_order(&t)?);
        for k in 0..field.order() - 1 {
            let x = field.pow(&t, k);
            let rr = field.regular_representation(&x);
            println!("  t^{k} = {:<8} frob = {:<8} RR = {:?}", field.display(&x), field.display(&field.frobenius(&x)), rr.to_rows());
        }
    }
    Ok(())
}
