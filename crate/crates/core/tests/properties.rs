mod common;

use modlift::field::{GaloisField, ResidueRing};
use modlift::matrix::ResidueMatrix;
use num_bigint::BigInt;
use proptest::prelude::*;

fn ring_strategy() -> impl Strategy<Value = ResidueRing> {
    (prop::sample::select(vec![2u64, 3, 5, 7]), 1u32..=6).prop_map(|(p, s)| ResidueRing::new(p, s).unwrap())
}

fn field_strategy() -> impl Strategy<Value = GaloisField> {
    prop::sample::select(vec![(2u64, 2usize), (2, 3), (3, 2), (5, 2), (2, 4)]).prop_map(|(p, r)| GaloisField::new(p, r).unwrap())
}

fn big_mod(v: BigInt, m: u64) -> u64 {
    let m = BigInt::from(m);
    let r = ((v % &m) + &m) % &m;
    u64::try_from(r).unwrap()
}

proptest! {
    #[test]
    fn residue_ops_match_big_integers(ring in ring_strategy(), a in any::<u64>(), b in any::<u64>()) {
        let m = ring.modulus();
        let (x, y) = (ring.reduce(a), ring.reduce(b));
        let (bx, by) = (BigInt::from(x), BigInt::from(y));
        prop_assert_eq!(ring.add(x, y), big_mod(&bx + &by, m));
        prop_assert_eq!(ring.sub(x, y), big_mod(&bx - &by, m));
        prop_assert_eq!(ring.mul(x, y), big_mod(&bx * &by, m));
        prop_assert_eq!(ring.pow(x, 13), big_mod(bx.pow(13), m));
        if ring.is_unit(x) {
            prop_assert_eq!(ring.mul(x, ring.inv(x).unwrap()), 1 % m);
        } else {
            prop_assert!(ring.inv(x).is_err());
        }
    }

    #[test]
    fn frobenius_is_a_ring_automorphism(field in field_strategy(), i in any::<u64>(), j in any::<u64>()) {
        let x = field.from_index(i % field.order());
        let y = field.from_index(j % field.order());
        prop_assert_eq!(field.frobenius(&field.add(&x, &y)), field.add(&field.frobenius(&x), &field.frobenius(&y)));
        prop_assert_eq!(field.frobenius(&field.mul(&x, &y)), field.mul(&field.frobenius(&x), &field.frobenius(&y)));
        prop_assert_eq!(field.frobenius_power(&x, field.degree()), x.clone());
        prop_assert_eq!(field.pow(&x, field.order()), x);
    }

    #[test]
    fn unit_determinant_matrices_invert(ring in ring_strategy(), seed in prop::collection::vec(any::<u64>(), 9)) {
        let m = ResidueMatrix::from_entries(ring, 3, 3, seed.iter().map(|&v| ring.reduce(v)).collect()).unwrap();
        let det = m.determinant().unwrap();
        match m.inverse() {
            Ok(inv) => {
                prop_assert!(ring.is_unit(det));
                prop_assert!((&m * &inv).is_identity());
                prop_assert!((&inv * &m).is_identity());
            }
            Err(_) => prop_assert!(!ring.is_unit(det)),
        }
    }
}

fn run(suite: fn() -> Result<String, String>) {
    if let Err(e) = suite() {
        panic!("{e}");
    }
}

#[test]
fn cocycle_identity_holds_on_table_groups() {
    run(common::cocycle_identity_suite);
}

#[test]
fn regular_representation_is_a_ring_map() {
    run(common::regular_representation_suite);
}

#[test]
fn closed_form_matches_repeated_squaring() {
    run(common::closed_form_suite);
}

#[test]
fn duals_and_twists_decide_alike() {
    run(common::duality_twist_suite);
}
