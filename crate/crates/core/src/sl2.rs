//! `SL_2(p^r)`, its action on homogeneous polynomials, and the `F_p`-representations
//! built from it.
//!
//! Monomials of degree `n` are ordered `x^n, x^(n-1) y, ..., y^n`, and matrices act on
//! row vectors, so the unipotent generator acts by the Pascal matrix.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::field::{FieldElement, GaloisField, ResidueRing};
use crate::matrix::ResidueMatrix;

/// Dense matrix over `F_{p^r}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<FieldElement>,
}

impl FieldMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<FieldElement>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!("{} entries for {rows}x{cols}", entries.len())));
        }
        Ok(FieldMatrix { rows, cols, entries })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldElement {
        &self.entries[i * self.cols + j]
    }

    pub fn map(&self, f: impl Fn(&FieldElement) -> FieldElement) -> Self {
        FieldMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(f).collect() }
    }

    pub fn mul(&self, other: &Self, field: &GaloisField) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = field.zero();
                for k in 0..self.cols {
                    acc = field.add(&acc, &field.mul(self.get(i, k), other.get(k, j)));
                }
                entries.push(acc);
            }
        }
        Ok(FieldMatrix { rows: self.rows, cols: other.cols, entries })
    }

    pub fn diagonal(field: &GaloisField, diag: Vec<FieldElement>) -> Self {
        let n = diag.len();
        let mut entries = vec![field.zero(); n * n];
        for (i, d) in diag.into_iter().enumerate() {
            entries[i * n + i] = d;
        }
        FieldMatrix { rows: n, cols: n, entries }
    }
}

/// An element `[[a, b], [c, d]]` of `SL_2(p^r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sl2Element {
    pub a: FieldElement,
    pub b: FieldElement,
    pub c: FieldElement,
    pub d: FieldElement,
}

impl Sl2Element {
    pub fn new(field: &GaloisField, a: FieldElement, b: FieldElement, c: FieldElement, d: FieldElement) -> Result<Self> {
        let det = field.sub(&field.mul(&a, &d), &field.mul(&b, &c));
        if det != field.one() {
            return Err(Error::InvalidParameter("determinant is not 1".into()));
        }
        Ok(Sl2Element { a, b, c, d })
    }

    pub fn identity(field: &GaloisField) -> Self {
        Sl2Element { a: field.one(), b: field.zero(), c: field.zero(), d: field.one() }
    }

    pub fn mul(&self, other: &Self, field: &GaloisField) -> Self {
        let dot = |x: &FieldElement, y: &FieldElement, z: &FieldElement, w: &FieldElement| {
            field.add(&field.mul(x, y), &field.mul(z, w))
        };
        Sl2Element {
            a: dot(&self.a, &other.a, &self.b, &other.c),
            b: dot(&self.a, &other.b, &self.b, &other.d),
            c: dot(&self.c, &other.a, &self.d, &other.c),
            d: dot(&self.c, &other.b, &self.d, &other.d),
        }
    }

    pub fn as_matrix(&self) -> FieldMatrix {
        FieldMatrix { rows: 2, cols: 2, entries: vec![self.a.clone(), self.b.clone(), self.c.clone(), self.d.clone()] }
    }
}

/// The unipotent generators and the torus generator.
#[derive(Clone, Debug)]
pub struct Sl2Generators {
    /// `[[1, 0], [1, 1]]`
    pub alpha: Sl2Element,
    /// `[[1, 1], [0, 1]]`
    pub beta: Sl2Element,
    /// `diag(t, t^-1)` with `t` primitive
    pub gamma: Sl2Element,
}

pub fn sl2_generators(field: &GaloisField) -> Sl2Generators {
    let (zero, one) = (field.zero(), field.one());
    let lambda = field.generator();
    let lambda_inv = field.inv(&lambda).expect("primitive element is nonzero");
    Sl2Generators {
        alpha: Sl2Element { a: one.clone(), b: zero.clone(), c: one.clone(), d: one.clone() },
        beta: Sl2Element { a: one.clone(), b: one.clone(), c: zero.clone(), d: one.clone() },
        gamma: Sl2Element { a: lambda, b: zero.clone(), c: zero, d: lambda_inv },
    }
}

/// Coefficients (by power of `y`) of the product of two homogeneous polynomials.
fn poly_mul(field: &GaloisField, f: &[FieldElement], g: &[FieldElement]) -> Vec<FieldElement> {
    let mut out = vec![field.zero(); f.len() + g.len() - 1];
    for (i, a) in f.iter().enumerate() {
        for (j, b) in g.iter().enumerate() {
            out[i + j] = field.add(&out[i + j], &field.mul(a, b));
        }
    }
    out
}

/// Matrix of `g` on degree-`n` forms: row `k` holds the coordinates of `(x^(n-k) y^k) . g`,
/// where `x . g = a x + b y` and `y . g = c x + d y`.
pub fn action_matrix(field: &GaloisField, g: &Sl2Element, n: usize) -> FieldMatrix {
    let x_image = vec![g.a.clone(), g.b.clone()];
    let y_image = vec![g.c.clone(), g.d.clone()];
    let mut entries = Vec::with_capacity((n + 1) * (n + 1));
    for k in 0..=n {
        let mut row = vec![field.one()];
        for _ in 0..n - k {
            row = poly_mul(field, &row, &x_image);
        }
        for _ in 0..k {
            row = poly_mul(field, &row, &y_image);
        }
        entries.extend(row);
    }
    FieldMatrix { rows: n + 1, cols: n + 1, entries }
}

/// Replaces every entry by its `r x r` regular representation over `F_p`.
pub fn restrict_scalars(field: &GaloisField, m: &FieldMatrix) -> ResidueMatrix {
    let r = field.degree();
    let mut out = ResidueMatrix::zeros(field.prime_ring(), m.rows * r, m.cols * r);
    for i in 0..m.rows {
        for j in 0..m.cols {
            let block = field.regular_representation(m.get(i, j));
            out.set_block(i + 1, j + 1, &block).expect("block fits by construction");
        }
    }
    out
}

/// Applies `x -> x^(p^k)` to every entry.
pub fn frobenius_twist_rep(field: &GaloisField, images: &[FieldMatrix], k: usize) -> Vec<FieldMatrix> {
    images.iter().map(|m| m.map(|x| field.frobenius_power(x, k))).collect()
}

/// `g -> (M(g)^-1)^T`.
pub fn dual_rep(images: &[ResidueMatrix]) -> Result<Vec<ResidueMatrix>> {
    images.iter().map(|m| Ok(m.inverse()?.transpose())).collect()
}

/// Which module of `SL_2(p^r)` a representation realises.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ModuleKind {
    /// Degree-`n` homogeneous polynomials.
    Vn(usize),
    /// Dual of `V_p`.
    Lambda,
    Dual(Box<ModuleKind>),
    Twist(Box<ModuleKind>, usize),
}

impl ModuleKind {
    /// `(n, total twist, dual)` such that the module is `V_n`, twisted, and dualised when
    /// the flag is set.
    pub fn normalize(&self, p: u64) -> (usize, usize, bool) {
        match self {
            ModuleKind::Vn(n) => (*n, 0, false),
            ModuleKind::Lambda => (p as usize, 0, true),
            ModuleKind::Dual(inner) => {
                let (n, k, d) = inner.normalize(p);
                (n, k, !d)
            }
            ModuleKind::Twist(inner, j) => {
                let (n, k, d) = inner.normalize(p);
                (n, k + j, d)
            }
        }
    }
}

impl fmt::Display for ModuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleKind::Vn(n) => write!(f, "V{n}"),
            ModuleKind::Lambda => write!(f, "Lambda"),
            ModuleKind::Dual(inner) => write!(f, "{inner}*"),
            ModuleKind::Twist(inner, k) => write!(f, "{inner}^{k}"),
        }
    }
}

impl FromStr for ModuleKind {
    type Err = Error;

    /// Labels: `V3`, `Lambda`, a trailing `*` for the dual, `^k` for a Frobenius twist.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(inner) = s.strip_suffix('*') {
            return Ok(ModuleKind::Dual(Box::new(inner.parse()?)));
        }
        if let Some((inner, k)) = s.rsplit_once('^') {
            let k = k.parse().map_err(|_| Error::InvalidParameter(format!("bad twist exponent in {s:?}")))?;
            return Ok(ModuleKind::Twist(Box::new(inner.parse()?), k));
        }
        if s.eq_ignore_ascii_case("lambda") {
            return Ok(ModuleKind::Lambda);
        }
        match s.strip_prefix('V').or_else(|| s.strip_prefix('v')).map(str::parse::<usize>) {
            Some(Ok(n)) => Ok(ModuleKind::Vn(n)),
            _ => Err(Error::InvalidParameter(format!("unknown module label {s:?}"))),
        }
    }
}

/// A module of `SL_2(p^r)` viewed over `F_p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RepresentationSpec {
    pub p: u64,
    pub r: usize,
    pub kind: ModuleKind,
}

impl RepresentationSpec {
    pub fn new(p: u64, r: usize, kind: ModuleKind) -> Result<Self> {
        if !crate::field::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if r == 0 {
            return Err(Error::InvalidParameter("r must be at least 1".into()));
        }
        let spec = RepresentationSpec { p, r, kind };
        spec.validate(&spec.kind)?;
        Ok(spec)
    }

    /// Parses a label against `q = p^r`.
    pub fn parse(q: u64, label: &str) -> Result<Self> {
        let (p, r) =
            crate::field::prime_power(q).ok_or_else(|| Error::InvalidParameter(format!("{q} is not a prime power")))?;
        Self::new(p, r as usize, label.parse()?)
    }

    fn validate(&self, kind: &ModuleKind) -> Result<()> {
        match kind {
            ModuleKind::Vn(n) if *n as u64 > self.p => {
                Err(Error::InvalidParameter(format!("V{n} needs n <= p = {}", self.p)))
            }
            ModuleKind::Vn(_) | ModuleKind::Lambda => Ok(()),
            ModuleKind::Dual(inner) => self.validate(inner),
            ModuleKind::Twist(inner, k) => {
                if *k >= self.r {
                    return Err(Error::InvalidParameter(format!("twist exponent {k} must be below r = {}", self.r)));
                }
                self.validate(inner)
            }
        }
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.r as u32)
    }

    /// Dimension over `F_p`.
    pub fn dimension(&self) -> usize {
        (self.kind.normalize(self.p).0 + 1) * self.r
    }

    pub fn label(&self) -> String {
        self.kind.to_string()
    }

    pub fn field(&self) -> Result<GaloisField> {
        GaloisField::new(self.p, self.r)
    }

    /// Images of `alpha`, `beta`, `gamma` over `F_p`.
    pub fn generator_images(&self) -> Result<GeneratorImages> {
        let field = self.field()?;
        let gens = sl2_generators(&field);
        let (n, twist, dual) = self.kind.normalize(self.p);
        let over_field: Vec<FieldMatrix> =
            [&gens.alpha, &gens.beta, &gens.gamma].iter().map(|g| action_matrix(&field, g, n)).collect();
        let twisted = frobenius_twist_rep(&field, &over_field, twist % self.r);
        let mut images: Vec<ResidueMatrix> = twisted.iter().map(|m| restrict_scalars(&field, m)).collect();
        if dual {
            images = dual_rep(&images)?;
        }
        let mut it = images.into_iter();
        Ok(GeneratorImages {
            ring: field.prime_ring(),
            block_size: self.r,
            alpha: it.next().unwrap(),
            beta: it.next().unwrap(),
            gamma: it.next().unwrap(),
        })
    }
}

impl fmt::Display for RepresentationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.kind, self.q())
    }
}

/// Generator images of a representation over `F_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorImages {
    pub ring: ResidueRing,
    pub block_size: usize,
    pub alpha: ResidueMatrix,
    pub beta: ResidueMatrix,
    pub gamma: ResidueMatrix,
}

impl GeneratorImages {
    pub fn dimension(&self) -> usize {
        self.alpha.rows()
    }

    pub fn named(&self) -> [(&'static str, &ResidueMatrix); 3] {
        [("alpha", &self.alpha), ("beta", &self.beta), ("gamma", &self.gamma)]
    }

    /// `alpha, gamma`: generators of the Borel subgroup.
    pub fn borel(&self) -> Vec<ResidueMatrix> {
        vec![self.alpha.clone(), self.gamma.clone()]
    }

    /// `alpha, beta, gamma`: generators of the whole group.
    pub fn full(&self) -> Vec<ResidueMatrix> {
        vec![self.alpha.clone(), self.beta.clone(), self.gamma.clone()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::pascal_matrix;

    fn field(p: u64, r: usize) -> GaloisField {
        GaloisField::new(p, r).unwrap()
    }

    #[test]
    fn generators() {
        let f2 = field(2, 1);
        let g = sl2_generators(&f2);
        assert_eq!(g.gamma, Sl2Element::identity(&f2));
        let f5 = field(5, 1);
        let g = sl2_generators(&f5);
        assert_eq!((g.gamma.a.clone(), g.gamma.d.clone()), (f5.from_prime(2), f5.from_prime(3)));
        for (p, r) in [(2, 1), (2, 2), (3, 1), (3, 2), (5, 1), (7, 1)] {
            let f = field(p, r);
            let g = sl2_generators(&f);
            for x in [&g.alpha, &g.beta, &g.gamma] {
                Sl2Element::new(&f, x.a.clone(), x.b.clone(), x.c.clone(), x.d.clone()).unwrap();
            }
            let mut power = Sl2Element::identity(&f);
            for _ in 0..p {
                power = power.mul(&g.alpha, &f);
            }
            assert_eq!(power, Sl2Element::identity(&f));
        }
    }

    #[test]
    fn action_of_alpha_is_pascal() {
        let f = field(7, 1);
        let g = sl2_generators(&f);
        for n in 0..=7 {
            let am = restrict_scalars(&f, &action_matrix(&f, &g.alpha, n));
            assert_eq!(am, pascal_matrix(n + 1, f.prime_ring()));
        }
    }

    #[test]
    fn action_of_gamma_is_diagonal() {
        let f = field(5, 1);
        let g = sl2_generators(&f);
        let am = action_matrix(&f, &g.gamma, 2);
        let lambda = f.generator();
        let expected = FieldMatrix::diagonal(&f, vec![f.pow(&lambda, 2), f.one(), f.inv(&f.pow(&lambda, 2)).unwrap()]);
        assert_eq!(am, expected);
        assert_eq!(
            restrict_scalars(&f, &action_matrix(&f, &Sl2Element::identity(&f), 3)),
            ResidueMatrix::identity(f.prime_ring(), 4)
        );
    }

    #[test]
    fn action_is_multiplicative() {
        for (p, r) in [(2, 2), (3, 1), (3, 2), (5, 1)] {
            let f = field(p, r);
            let g = sl2_generators(&f);
            let words = [&g.alpha, &g.beta, &g.gamma];
            for n in 1..=p as usize {
                for x in words {
                    for y in words {
                        let lhs = action_matrix(&f, x, n).mul(&action_matrix(&f, y, n), &f).unwrap();
                        assert_eq!(lhs, action_matrix(&f, &x.mul(y, &f), n));
                        let rs = restrict_scalars(&f, &action_matrix(&f, x, n));
                        let rs2 = restrict_scalars(&f, &action_matrix(&f, y, n));
                        assert_eq!(&rs * &rs2, restrict_scalars(&f, &lhs));
                    }
                }
            }
        }
    }

    #[test]
    fn restricted_gamma_blocks() {
        let f4 = field(2, 2);
        let c = restrict_scalars(&f4, &FieldMatrix::diagonal(&f4, vec![f4.generator()]));
        assert_eq!(c.pow(3).unwrap(), ResidueMatrix::identity(f4.prime_ring(), 2));
        assert!(!c.is_identity());

        let f9 = field(3, 2);
        let g = sl2_generators(&f9);
        let c = f9.regular_representation(&f9.generator());
        let c_inv = c.inverse().unwrap();
        for n in 1..=3usize {
            let rs = restrict_scalars(&f9, &action_matrix(&f9, &g.gamma, n));
            for k in 0..=n {
                let e = n as i64 - 2 * k as i64;
                let expected = if e >= 0 { c.pow(e as u64).unwrap() } else { c_inv.pow((-e) as u64).unwrap() };
                assert_eq!(rs.block(k + 1, k + 1, 2).unwrap(), expected);
            }
        }
    }

    #[test]
    fn alpha_blocks_are_binomial() {
        let f9 = field(3, 2);
        let g = sl2_generators(&f9);
        let rs = restrict_scalars(&f9, &action_matrix(&f9, &g.alpha, 3));
        let binom = [[1, 0, 0, 0], [1, 1, 0, 0], [1, 2, 1, 0], [1, 0, 0, 1]];
        for k in 0..4 {
            for j in 0..4 {
                let block = rs.block(k + 1, j + 1, 2).unwrap();
                assert_eq!(block, ResidueMatrix::identity(f9.prime_ring(), 2).scale(binom[k][j]));
            }
        }
    }

    #[test]
    fn frobenius_twist() {
        let f4 = field(2, 2);
        let m = FieldMatrix::diagonal(&f4, vec![f4.generator()]);
        let twisted = frobenius_twist_rep(&f4, std::slice::from_ref(&m), 1);
        assert_eq!(twisted[0].get(0, 0), &f4.from_coeffs(&[1, 1]).unwrap());
        assert_eq!(frobenius_twist_rep(&f4, std::slice::from_ref(&m), 0)[0], m);
        assert_eq!(frobenius_twist_rep(&f4, std::slice::from_ref(&m), 2)[0], m);
    }

    #[test]
    fn dual_is_an_involution() {
        let spec = RepresentationSpec::parse(5, "V3").unwrap();
        let images = spec.generator_images().unwrap().full();
        assert_eq!(dual_rep(&dual_rep(&images).unwrap()).unwrap(), images);
        let id = vec![ResidueMatrix::identity(images[0].ring(), 4)];
        assert_eq!(dual_rep(&id).unwrap(), id);
    }

    #[test]
    fn labels_round_trip() {
        for label in ["V1", "V5", "Lambda", "V3*", "V2^1", "Lambda^1*"] {
            let kind: ModuleKind = label.parse().unwrap();
            assert_eq!(kind.to_string(), label);
        }
        assert!("W2".parse::<ModuleKind>().is_err());
        assert!(RepresentationSpec::parse(3, "V4").is_err());
        assert!(RepresentationSpec::parse(9, "V2^2").is_err());
        assert!(RepresentationSpec::parse(6, "V1").is_err());
        assert_eq!(RepresentationSpec::parse(9, "V2").unwrap().dimension(), 6);
        assert_eq!(RepresentationSpec::parse(4, "Lambda").unwrap().dimension(), 6);
    }
}
