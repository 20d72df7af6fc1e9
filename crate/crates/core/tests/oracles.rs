//! Checks of the lift engine against constructions that do not use it.

mod common;

use std::collections::{HashSet, VecDeque};
use std::sync::Arc;

use common::spec;
use modlift::field::ResidueRing;
use modlift::group::close_group;
use modlift::lift::{
    build_obstruction, coboundary_system_all_pairs, lift_to_precision, solve_coboundary, solve_coboundary_with_classes,
    witness_validate, CocycleCheck, Decision, LiftConfig, LiftPath,
};
use modlift::linsys::LinearSystemFp;
use modlift::matrix::ResidueMatrix;
use modlift::rep::ModularRep;
use modlift::sl2::{ModuleKind, RepresentationSpec};

fn closure_order(generators: &[ResidueMatrix]) -> usize {
    let id = ResidueMatrix::identity(generators[0].ring(), generators[0].rows());
    let mut seen = HashSet::from([id.entries().to_vec()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in generators {
            let y = &x * g;
            if seen.insert(y.entries().to_vec()) {
                queue.push_back(y);
            }
        }
    }
    seen.len()
}

fn full_witness(q: u64, label: &str, target: u32) -> ModularRep {
    let report = lift_to_precision(&spec(q, label), &LiftConfig::default().with_target(target).with_path(LiftPath::Full))
        .unwrap();
    report.witness.expect("liftable")
}

fn poly_mul(ring: ResidueRing, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = ring.add(out[i + j], ring.mul(x, y));
        }
    }
    out
}

/// Degree-`n` symmetric power of a `2 x 2` matrix: row `k` is `(row0)^(n-k) (row1)^k` as a form.
fn symmetric_power(m: &ResidueMatrix, n: usize) -> ResidueMatrix {
    let ring = m.ring();
    let x = [m.get(0, 0), m.get(0, 1)];
    let y = [m.get(1, 0), m.get(1, 1)];
    let rows: Vec<Vec<u64>> = (0..=n)
        .map(|k| {
            let mut row = vec![1];
            for _ in 0..n - k {
                row = poly_mul(ring, &row, &x);
            }
            for _ in 0..k {
                row = poly_mul(ring, &row, &y);
            }
            row
        })
        .collect();
    ResidueMatrix::from_rows(ring, &rows).unwrap()
}

#[test]
fn tree_solve_agrees_with_all_pairs_system() {
    let cases = [(2, "V1"), (3, "V1"), (3, "V3"), (4, "V1"), (4, "V2"), (5, "V1"), (5, "V2"), (5, "V4"), (5, "Lambda")];
    for (q, label) in cases {
        let s = spec(q, label);
        let images = s.generator_images().unwrap();
        for gens in [images.borel(), images.full()] {
            let group = Arc::new(close_group(&gens).unwrap());
            if group.order() * s.dimension().pow(2) > 1500 {
                continue;
            }
            let rep = ModularRep::tautological(group.clone());
            let f = build_obstruction(&rep, CocycleCheck::Off).unwrap();
            let tree = solve_coboundary(&rep, &f).unwrap();
            let all_pairs = coboundary_system_all_pairs(&rep, &f).unwrap();
            assert_eq!(tree.correction.is_some(), all_pairs.solve().is_consistent(), "{s}, |G| = {}", group.order());
            if let Some(t) = tree.correction {
                let values: Vec<u64> = t.iter().flat_map(|m| m.entries().to_vec()).collect();
                assert!(all_pairs.satisfied_by(&values), "{s}: tree solution violates an all-pairs equation");
            }
        }
    }
}

#[test]
fn symmetric_cube_of_a_natural_lift_lifts_v3_over_f3() {
    // a lift of the natural module, cubed, reduces to V3(3) without touching its cocycle
    let natural = full_witness(3, "V1", 2);
    let cubes: Vec<ResidueMatrix> = natural.generator_images().iter().map(|m| symmetric_power(m, 3)).collect();
    let target = spec(3, "V3").generator_images().unwrap().full();
    let f3 = ResidueRing::prime_field(3).unwrap();
    for (cube, image) in cubes.iter().zip(&target) {
        assert_eq!(&cube.reinterpret(f3), image);
    }
    assert_eq!(closure_order(&cubes), 24);
    assert_eq!(closure_order(&target), 24);
}

#[test]
fn witnesses_close_to_a_copy_of_the_group() {
    // the lifted generators generate a group mapping isomorphically onto the image group
    for (q, label, order) in [(2, "V1", 6), (3, "V3", 24), (3, "Lambda", 24), (4, "V2", 60), (4, "Lambda", 60), (5, "V4", 60), (5, "V5", 120)] {
        let w = full_witness(q, label, 2);
        assert_eq!(w.group().order(), order);
        assert!(witness_validate(&w));
        assert_eq!(closure_order(&w.generator_images()), order, "{label}({q})");
    }
}

#[test]
fn natural_module_over_f2_has_an_involution_above_alpha() {
    let w = full_witness(2, "V1", 2);
    let alpha = &w.generator_images()[0];
    assert!(!alpha.is_identity());
    assert!(alpha.pow(2).unwrap().is_identity());
}

#[test]
fn trivial_module_lifts_with_identity_witness() {
    let s = RepresentationSpec::new(5, 1, ModuleKind::Vn(0)).unwrap();
    let report = lift_to_precision(&s, &LiftConfig::default().with_target(3)).unwrap();
    assert_eq!(report.decision, Decision::Liftable);
    let w = report.witness.unwrap();
    assert!(w.images().iter().all(ResidueMatrix::is_identity));
}

#[test]
fn no_lift_cells_have_no_lift_on_either_path() {
    for (q, label) in [(5, "V1"), (5, "V2"), (4, "V1"), (7, "V3")] {
        let s = spec(q, label);
        for path in [LiftPath::Borel, LiftPath::Full] {
            assert_eq!(common::decide(&s, path), Decision::NotLiftable, "{s} {path}");
        }
    }
}

/// Dimension of the matrices commuting with every generator, by direct solve.
fn centraliser_dim(rep: &ModularRep) -> usize {
    let m = rep.dim();
    let p = rep.group().p();
    let mut sys = LinearSystemFp::new(p, m * m).unwrap();
    for g in rep.generator_images() {
        // (X g - g X)_{ij} = sum_k X_ik g_kj - g_ik X_kj
        for i in 0..m {
            for j in 0..m {
                let mut terms = Vec::new();
                for k in 0..m {
                    terms.push((i * m + k, g.get(k, j)));
                    terms.push((k * m + j, p - g.get(i, k)));
                }
                sys.push_row(terms, 0).unwrap();
            }
        }
    }
    sys.kernel_basis().len()
}

#[test]
fn class_representatives_span_first_cohomology() {
    for (q, label) in [(4, "V2"), (3, "V2"), (2, "V1"), (5, "V3")] {
        let s = spec(q, label);
        let group = Arc::new(close_group(&s.generator_images().unwrap().borel()).unwrap());
        let rep = ModularRep::tautological(group.clone());
        let f = build_obstruction(&rep, CocycleCheck::Off).unwrap();
        let outcome = solve_coboundary_with_classes(&rep, &f).unwrap();

        for z in &outcome.classes {
            for g in 0..group.order() {
                let rg = rep.image(g);
                let rg_inv = rg.inverse().unwrap();
                for h in 0..group.order() {
                    let conj = &(rg * &z[h]) * &rg_inv;
                    let dz = z[group.mul(g, h)].try_sub(&z[g]).unwrap().try_sub(&conj).unwrap();
                    assert!(dz.is_zero(), "{s}: class is not a cocycle at ({g}, {h})");
                }
            }
        }

        // Z^1 from the homogeneous all-pairs system, B^1 from the centraliser
        let z1 = coboundary_system_all_pairs(&rep, &f).unwrap().kernel_basis().len();
        let m = rep.dim();
        let b1 = m * m - centraliser_dim(&rep);
        assert_eq!(outcome.classes.len(), z1 - b1, "{s}");
    }
}
