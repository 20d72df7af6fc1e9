//! Arithmetic in `Z/p^sZ` and in the finite field `F_{p^r}`.
//!
//! `F_{p^r}` is realised as `F_p[t]/(f)` for a primitive polynomial `f`, with
//! elements stored as coordinate vectors in the basis `1, t, ..., t^{r-1}`.
//! The residue class of `t` is always a multiplicative generator.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::matrix::ResidueMatrix;

/// Deterministic trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime divisors of `n`, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Splits a prime power `q = p^r` into `(p, r)`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    let factors = prime_factors(q);
    if factors.len() != 1 {
        return None;
    }
    let p = factors[0];
    let mut r = 0;
    let mut rest = q;
    while rest > 1 {
        rest /= p;
        r += 1;
    }
    Some((p, r))
}

/// The ring `Z/p^sZ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ResidueRing {
    p: u64,
    s: u32,
    modulus: u64,
}

impl ResidueRing {
    pub fn new(p: u64, s: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if s == 0 {
            return Err(Error::InvalidParameter("exponent s must be at least 1".into()));
        }
        let modulus = p
            .checked_pow(s)
            .filter(|m| *m <= u32::MAX as u64)
            .ok_or_else(|| Error::InvalidParameter(format!("{p}^{s} does not fit in 32 bits")))?;
        Ok(ResidueRing { p, s, modulus })
    }

    /// The prime field `F_p`.
    pub fn prime_field(p: u64) -> Result<Self> {
        Self::new(p, 1)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Same prime, different exponent.
    pub fn with_exponent(&self, s: u32) -> Result<Self> {
        Self::new(self.p, s)
    }

    pub fn reduce(&self, v: u64) -> u64 {
        v % self.modulus
    }

    pub fn reduce_signed(&self, v: i64) -> u64 {
        v.rem_euclid(self.modulus as i64) as u64
    }

    pub fn element(&self, v: u64) -> ResidueElement {
        ResidueElement { value: self.reduce(v), ring: *self }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        (a * b) % self.modulus
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.modulus;
        base %= self.modulus;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn is_unit(&self, a: u64) -> bool {
        a % self.p != 0
    }

    /// Inverse of a unit. Units of `Z/p^sZ` form a group of order `p^(s-1)(p-1)`.
    pub fn inv(&self, a: u64) -> Result<u64> {
        if !self.is_unit(a) {
            return Err(Error::Domain("inverse of a non-unit"));
        }
        let phi = self.modulus / self.p * (self.p - 1);
        Ok(self.pow(a, phi - 1))
    }
}

impl fmt::Display for ResidueRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.s == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "Z/{}^{}Z", self.p, self.s)
        }
    }
}

/// A canonical representative in `[0, p^s)` together with its ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ResidueElement {
    value: u64,
    ring: ResidueRing,
}

impl ResidueElement {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn ring(&self) -> ResidueRing {
        self.ring
    }

    pub fn is_unit(&self) -> bool {
        self.ring.is_unit(self.value)
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(ResidueElement { value: self.ring.inv(self.value)?, ring: self.ring })
    }

    pub fn pow(&self, exp: u64) -> Self {
        ResidueElement { value: self.ring.pow(self.value, exp), ring: self.ring }
    }
}

macro_rules! residue_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for ResidueElement {
            type Output = ResidueElement;

            fn $method(self, rhs: ResidueElement) -> ResidueElement {
                assert_eq!(self.ring, rhs.ring, "operands live in different rings");
                ResidueElement { value: self.ring.$method(self.value, rhs.value), ring: self.ring }
            }
        }
    };
}

residue_binop!(Add, add);
residue_binop!(Sub, sub);
residue_binop!(Mul, mul);

impl Neg for ResidueElement {
    type Output = ResidueElement;

    fn neg(self) -> ResidueElement {
        ResidueElement { value: self.ring.neg(self.value), ring: self.ring }
    }
}

impl fmt::Display for ResidueElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

// --- polynomials over F_p, coefficient vectors with the constant term first ---

fn poly_trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

/// Remainder of `a` modulo the monic polynomial `m`.
fn poly_rem_monic(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let deg = m.len() - 1;
    let mut a = a.to_vec();
    while a.len() > deg {
        let lead = a.pop().unwrap();
        if lead != 0 {
            let shift = a.len() - deg;
            for (i, &c) in m[..deg].iter().enumerate() {
                a[shift + i] = (a[shift + i] + p - (lead * c) % p) % p;
            }
        }
    }
    poly_trim(a)
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    poly_trim(out)
}

/// Monic polynomial of degree `deg` whose lower coefficients are the base-`p` digits of `index`.
fn monic_from_index(p: u64, deg: usize, mut index: u64) -> Vec<u64> {
    let mut out = vec![0u64; deg + 1];
    for c in out.iter_mut().take(deg) {
        *c = index % p;
        index /= p;
    }
    out[deg] = 1;
    out
}

/// Irreducibility by trial division against every monic polynomial of degree `<= deg/2`.
pub fn is_irreducible(poly: &[u64], p: u64) -> bool {
    let deg = poly.len() - 1;
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        for idx in 0..p.pow(d as u32) {
            let divisor = monic_from_index(p, d, idx);
            if poly_rem_monic(poly, &divisor, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Multiplicative order of `t` in `F_p[t]/(poly)`, or `None` if `t` is not a unit.
fn order_of_t(poly: &[u64], p: u64) -> Option<u64> {
    if poly[0] % p == 0 {
        return None;
    }
    let deg = poly.len() - 1;
    let group = p.pow(deg as u32) - 1;
    let pow_t = |e: u64| -> Vec<u64> {
        let mut acc = vec![1u64];
        let mut base = poly_rem_monic(&[0, 1], poly, p);
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = poly_rem_monic(&poly_mul(&acc, &base, p), poly, p);
            }
            base = poly_rem_monic(&poly_mul(&base, &base, p), poly, p);
            e >>= 1;
        }
        acc
    };
    // order divides `group` only if the quotient is a field; callers check irreducibility first
    if pow_t(group) != vec![1] {
        return None;
    }
    let mut order = group;
    for l in prime_factors(group) {
        while order % l == 0 && pow_t(order / l) == vec![1] {
            order /= l;
        }
    }
    Some(order)
}

/// Least primitive root modulo the prime `p`.
pub fn least_primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let ring = ResidueRing { p, s: 1, modulus: p };
    let factors = prime_factors(p - 1);
    (1..p)
        .find(|&g| factors.iter().all(|&l| ring.pow(g, (p - 1) / l) != 1))
        .expect("a primitive root exists modulo every prime")
}

/// First monic primitive polynomial of degree `r` over `F_p`.
///
/// Candidates are ordered by `sum c_i p^i` over the non-leading coefficients. For
/// `r = 1` the result is `t - g` with `g` the least primitive root mod `p`.
/// Coefficients are returned constant term first, leading 1 last.
pub fn find_primitive_polynomial(p: u64, r: usize) -> Result<Vec<u64>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if r == 0 {
        return Err(Error::InvalidParameter("extension degree must be at least 1".into()));
    }
    if r == 1 {
        let g = least_primitive_root(p);
        return Ok(vec![(p - g) % p, 1]);
    }
    let target = p.pow(r as u32) - 1;
    (0..p.pow(r as u32))
        .map(|idx| monic_from_index(p, r, idx))
        .find(|f| is_irreducible(f, p) && order_of_t(f, p) == Some(target))
        .ok_or_else(|| Error::Invariant(format!("no primitive polynomial of degree {r} over F_{p}")))
}

/// An element of `F_{p^r}` in the power basis `1, t, ..., t^{r-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    coeffs: Vec<u64>,
}

impl FieldElement {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

/// The field `F_{p^r} = F_p[t]/(f)` with `f` primitive.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaloisField {
    p: u64,
    r: usize,
    modulus: Vec<u64>,
}

impl GaloisField {
    /// Field of order `p^r` with the canonical primitive modulus.
    pub fn new(p: u64, r: usize) -> Result<Self> {
        let modulus = find_primitive_polynomial(p, r)?;
        Ok(GaloisField { p, r, modulus })
    }

    /// Field defined by an explicit monic modulus, which must be primitive.
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidParameter("modulus must be monic of degree >= 1".into()));
        }
        let r = modulus.len() - 1;
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidParameter("modulus coefficients must be reduced mod p".into()));
        }
        if !is_irreducible(&modulus, p) {
            return Err(Error::InvalidParameter("modulus is reducible".into()));
        }
        if order_of_t(&modulus, p) != Some(p.pow(r as u32) - 1) {
            return Err(Error::InvalidParameter("modulus is not primitive".into()));
        }
        Ok(GaloisField { p, r, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.r
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.r as u32)
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn prime_ring(&self) -> ResidueRing {
        ResidueRing { p: self.p, s: 1, modulus: self.p }
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { coeffs: vec![0; self.r] }
    }

    pub fn one(&self) -> FieldElement {
        self.from_prime(1)
    }

    pub fn from_prime(&self, v: u64) -> FieldElement {
        let mut coeffs = vec![0; self.r];
        coeffs[0] = v % self.p;
        FieldElement { coeffs }
    }

    /// The residue class of `t`, a primitive element.
    pub fn generator(&self) -> FieldElement {
        self.from_poly(&[0, 1])
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElement> {
        if coeffs.len() != self.r {
            return Err(Error::DimensionMismatch(format!(
                "expected {} coordinates, got {}",
                self.r,
                coeffs.len()
            )));
        }
        Ok(FieldElement { coeffs: coeffs.iter().map(|c| c % self.p).collect() })
    }

    fn from_poly(&self, poly: &[u64]) -> FieldElement {
        let reduced = poly_rem_monic(&poly.iter().map(|c| c % self.p).collect::<Vec<_>>(), &self.modulus, self.p);
        let mut coeffs = vec![0; self.r];
        coeffs[..reduced.len()].copy_from_slice(&reduced);
        FieldElement { coeffs }
    }

    /// Element with base-`p` digit expansion `index` (constant coordinate least significant).
    pub fn from_index(&self, mut index: u64) -> FieldElement {
        let mut coeffs = vec![0; self.r];
        for c in coeffs.iter_mut() {
            *c = index % self.p;
            index /= self.p;
        }
        FieldElement { coeffs }
    }

    pub fn index_of(&self, x: &FieldElement) -> u64 {
        x.coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    /// All `p^r` elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order()).map(move |i| self.from_index(i))
    }

    pub fn add(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        FieldElement {
            coeffs: x.coeffs.iter().zip(&y.coeffs).map(|(a, b)| (a + b) % self.p).collect(),
        }
    }

    pub fn sub(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        FieldElement {
            coeffs: x.coeffs.iter().zip(&y.coeffs).map(|(a, b)| (a + self.p - b) % self.p).collect(),
        }
    }

    pub fn neg(&self, x: &FieldElement) -> FieldElement {
        self.sub(&self.zero(), x)
    }

    pub fn mul(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        self.from_poly(&poly_mul(&x.coeffs, &y.coeffs, self.p))
    }

    pub fn pow(&self, x: &FieldElement, mut exp: u64) -> FieldElement {
        let mut acc = self.one();
        let mut base = x.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, x: &FieldElement) -> Result<FieldElement> {
        if x.is_zero() {
            return Err(Error::Domain("inverse of zero in a finite field"));
        }
        Ok(self.pow(x, self.order() - 2))
    }

    /// `x -> x^p`.
    pub fn frobenius(&self, x: &FieldElement) -> FieldElement {
        self.pow(x, self.p)
    }

    /// `x -> x^(p^k)`.
    pub fn frobenius_power(&self, x: &FieldElement, k: usize) -> FieldElement {
        (0..k % self.r).fold(x.clone(), |acc, _| self.frobenius(&acc))
    }

    pub fn element_order(&self, x: &FieldElement) -> Result<u64> {
        if x.is_zero() {
            return Err(Error::Domain("zero has no multiplicative order"));
        }
        let mut order = self.order() - 1;
        for l in prime_factors(order) {
            while order % l == 0 && self.pow(x, order / l) == self.one() {
                order /= l;
            }
        }
        Ok(order)
    }

    /// Matrix of multiplication by `x`; column `j` holds the coordinates of `x * t^j`.
    pub fn regular_representation(&self, x: &FieldElement) -> ResidueMatrix {
        let mut m = ResidueMatrix::zeros(self.prime_ring(), self.r, self.r);
        let mut basis = self.one();
        let t = self.generator();
        for j in 0..self.r {
            let image = self.mul(x, &basis);
            for (i, &c) in image.coeffs.iter().enumerate() {
                m.set(i, j, c);
            }
            basis = self.mul(&basis, &t);
        }
        m
    }

    pub fn display(&self, x: &FieldElement) -> String {
        let terms: Vec<String> = x
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "t".to_string(),
                (1, c) => format!("{c}t"),
                (i, 1) => format!("t^{i}"),
                (i, c) => format!("{c}t^{i}"),
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_polynomials() {
        assert_eq!(find_primitive_polynomial(2, 2).unwrap(), vec![1, 1, 1]);
        assert_eq!(find_primitive_polynomial(3, 2).unwrap(), vec![2, 1, 1]);
        // t - 2 over F_5
        assert_eq!(find_primitive_polynomial(5, 1).unwrap(), vec![3, 1]);
        assert_eq!(find_primitive_polynomial(2, 1).unwrap(), vec![1, 1]);
    }

    #[test]
    fn rejected_candidates_for_f9() {
        // t^2 + 1: irreducible, root of order 4
        assert!(is_irreducible(&[1, 0, 1], 3));
        assert_eq!(order_of_t(&[1, 0, 1], 3), Some(4));
        assert!(!is_irreducible(&[2, 0, 1], 3));
        assert!(!is_irreducible(&[1, 1, 1], 3));
    }

    #[test]
    fn f4_and_f9_arithmetic() {
        let f4 = GaloisField::new(2, 2).unwrap();
        let t = f4.generator();
        assert_eq!(f4.mul(&t, &t), f4.from_coeffs(&[1, 1]).unwrap());
        assert_eq!(f4.frobenius(&f4.frobenius(&t)), t);

        let f9 = GaloisField::new(3, 2).unwrap();
        let t = f9.generator();
        assert_eq!(f9.pow(&t, 4), f9.from_prime(2));
        // t^3 = 2t + 2 modulo t^2 + t + 2
        assert_eq!(f9.frobenius(&t), f9.from_coeffs(&[2, 2]).unwrap());
        assert_eq!(f9.element_order(&t).unwrap(), 8);
        assert_eq!(f9.frobenius(&f9.one()), f9.one());
    }

    #[test]
    fn orders_and_errors() {
        let f5 = GaloisField::new(5, 1).unwrap();
        assert_eq!(f5.element_order(&f5.from_prime(2)).unwrap(), 4);
        assert_eq!(f5.element_order(&f5.one()).unwrap(), 1);
        assert!(f5.element_order(&f5.zero()).is_err());
        assert!(matches!(f5.inv(&f5.zero()), Err(Error::Domain(_))));
        assert_eq!(f5.generator(), f5.from_prime(2));
    }

    #[test]
    fn inverses_exhaustive() {
        for (p, r) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (7, 1)] {
            let f = GaloisField::new(p, r).unwrap();
            for x in f.elements().filter(|x| !x.is_zero()) {
                assert_eq!(f.mul(&x, &f.inv(&x).unwrap()), f.one());
            }
        }
    }

    #[test]
    fn regular_representation_of_t_in_f4() {
        let f4 = GaloisField::new(2, 2).unwrap();
        let c = f4.regular_representation(&f4.generator());
        assert_eq!(c.to_rows(), vec![vec![0, 1], vec![1, 1]]);
        assert!(f4.regular_representation(&f4.one()).is_identity());
    }

    #[test]
    fn residue_ring_basics() {
        let z9 = ResidueRing::new(3, 2).unwrap();
        assert_eq!(z9.modulus(), 9);
        assert_eq!(z9.inv(2).unwrap(), 5);
        assert!(z9.inv(3).is_err());
        assert_eq!(ResidueRing::new(4, 1), Err(Error::NotPrime(4)));
        let a = z9.element(7);
        let b = z9.element(5);
        assert_eq!((a * b).value(), 8);
        assert_eq!((a + b).value(), 3);
        assert_eq!((b - a).value(), 7);
        assert_eq!((-a).value(), 2);
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
    }
}
