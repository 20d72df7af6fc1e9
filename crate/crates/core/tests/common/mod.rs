#![allow(dead_code)]

use std::sync::Arc;

use modlift::field::{prime_power, GaloisField, ResidueRing};
use modlift::group::close_group;
use modlift::lift::coset::closed_form_power;
use modlift::lift::{build_obstruction, lift_to_precision, CocycleCheck, Decision, LiftConfig, LiftPath};
use modlift::matrix::ResidueMatrix;
use modlift::rep::ModularRep;
use modlift::sl2::{ModuleKind, RepresentationSpec};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// The reference decisions for `Z/p^2Z`, cell by cell.
pub const REFERENCE_CELLS: &[(u64, &str, bool)] = &[
    (2, "V1", true),
    (2, "V2", true),
    (2, "Lambda", true),
    (3, "V1", true),
    (3, "V2", true),
    (3, "V3", false),
    (3, "Lambda", false),
    (4, "V1", false),
    (4, "V2", false),
    (4, "Lambda", false),
    (5, "V1", false),
    (5, "V2", false),
    (5, "V3", true),
    (5, "V4", true),
    (5, "V5", false),
    (5, "Lambda", false),
    (7, "V1", false),
    (7, "V2", false),
    (7, "V3", false),
    (7, "V4", false),
    (7, "V5", true),
    (7, "V6", true),
    (7, "V7", false),
    (7, "Lambda", false),
    (8, "V1", false),
    (9, "V1", false),
    (9, "V2", false),
    (9, "Lambda", false),
];

pub fn spec(q: u64, label: &str) -> RepresentationSpec {
    RepresentationSpec::parse(q, label).unwrap()
}

pub fn decide(spec: &RepresentationSpec, path: LiftPath) -> Decision {
    lift_to_precision(spec, &LiftConfig::default().with_target(2).with_path(path)).unwrap().decision
}

/// `(p, r, n)` for every `V_n` cell of the reference table, plus `n = p` for `Lambda`.
pub fn table_configs() -> Vec<(u64, usize, usize)> {
    let mut out: Vec<(u64, usize, usize)> = REFERENCE_CELLS
        .iter()
        .map(|&(q, label, _)| {
            let s = spec(q, label);
            (s.p, s.r, s.kind.normalize(s.p).0)
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Cocycle identity over every triple, for every Borel image group of the reference table.
pub fn cocycle_identity_suite() -> Result<String, String> {
    let mut largest = 0;
    for &(q, label, _) in REFERENCE_CELLS {
        let s = spec(q, label);
        let group = Arc::new(close_group(&s.generator_images().unwrap().borel()).unwrap());
        if group.order() > 72 {
            continue;
        }
        largest = largest.max(group.order());
        let rep = ModularRep::tautological(group.clone());
        let f = build_obstruction(&rep, CocycleCheck::Off).unwrap();
        if let Some(triple) = f.check_identity(&group, CocycleCheck::Exhaustive) {
            return Err(format!("{s}: identity fails at {triple:?}"));
        }
        for g in 0..group.order() {
            if !f.matrix(0, g).is_zero() || !f.matrix(g, 0).is_zero() {
                return Err(format!("{s}: f(1, g) or f(g, 1) nonzero"));
            }
        }
    }
    Ok(format!("{} groups, largest of order {largest}", REFERENCE_CELLS.len()))
}

/// `RR(x + y) = RR(x) + RR(y)` and `RR(xy) = RR(x) RR(y)` over all pairs, `q <= 9`.
pub fn regular_representation_suite() -> Result<String, String> {
    let mut pairs = 0;
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        let (p, r) = prime_power(q).unwrap();
        let field = GaloisField::new(p, r as usize).unwrap();
        let elems: Vec<_> = field.elements().collect();
        let rr: Vec<ResidueMatrix> = elems.iter().map(|x| field.regular_representation(x)).collect();
        for (i, x) in elems.iter().enumerate() {
            for (j, y) in elems.iter().enumerate() {
                let sum = field.regular_representation(&field.add(x, y));
                let prod = field.regular_representation(&field.mul(x, y));
                if sum != &rr[i] + &rr[j] || prod != &rr[i] * &rr[j] {
                    return Err(format!("q = {q}: fails at {} and {}", field.display(x), field.display(y)));
                }
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} pairs"))
}

/// `(a+q)^p` by repeated squaring against the closed form, 100 random `q` in `pM` per configuration.
pub fn closed_form_suite() -> Result<String, String> {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let configs = table_configs();
    for &(p, r, n) in &configs {
        let level2 = ResidueRing::new(p, 2).unwrap();
        let a = RepresentationSpec::new(p, r, ModuleKind::Vn(n))
            .unwrap()
            .generator_images()
            .unwrap()
            .alpha
            .reinterpret(level2);
        let m = a.rows();
        for _ in 0..100 {
            let entries = (0..m * m).map(|_| p * rng.gen_range(0..p)).collect();
            let q = ResidueMatrix::from_entries(level2, m, m, entries).unwrap();
            let direct = a.try_add(&q).unwrap().pow(p).unwrap();
            if direct != closed_form_power(&a, &q).unwrap() {
                return Err(format!("({p},{r},{n}): closed form differs"));
            }
        }
    }
    Ok(format!("{} configurations x 100", configs.len()))
}

/// Duals of `V_n` (`n < p`) and all Frobenius twists decide like the module itself.
pub fn duality_twist_suite() -> Result<String, String> {
    let mut compared = 0;
    for &(q, label, _) in REFERENCE_CELLS {
        let base = spec(q, label);
        let decision = decide(&base, LiftPath::Borel);
        let (n, _, _) = base.kind.normalize(base.p);
        let mut variants = Vec::new();
        if (n as u64) < base.p {
            variants.push(ModuleKind::Dual(Box::new(base.kind.clone())));
        }
        for k in 1..base.r {
            let twisted = RepresentationSpec::new(base.p, base.r, ModuleKind::Twist(Box::new(base.kind.clone()), k)).unwrap();
            if twisted.generator_images().unwrap() == base.generator_images().unwrap() {
                return Err(format!("{twisted} has the same images as {base}"));
            }
            variants.push(twisted.kind);
        }
        for kind in variants {
            let other = RepresentationSpec::new(base.p, base.r, kind).unwrap();
            if decide(&other, LiftPath::Borel) != decision {
                return Err(format!("{other} decides differently from {base}"));
            }
            compared += 1;
        }
    }
    Ok(format!("{compared} variants"))
}
