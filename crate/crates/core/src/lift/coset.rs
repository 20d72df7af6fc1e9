//! Necessary conditions on a lift of the unipotent generator, as an affine system over `F_p`.
//!
//! Write a candidate lift of the Pascal block matrix as `a + q` with `q = pX` and `X` unknown
//! over `F_p`. Working in `Z/p^2Z`, every product with two factors of `q` vanishes, so
//!
//! * `(a+q)^p = a^p + sum_i a^i q a^(p-1-i)`, and `(a+q)^p = I` becomes
//!   `(a^p - I)/p + sum_i a^i X a^(p-1-i) = 0`;
//! * `(a+q)` commutes with its conjugate by the lift `c` of the diagonal generator, which becomes
//!   `(a a^c - a^c a)/p + X a^c + a X^c - a^c X - X^c a = 0` with `x^c = c^-1 x c`.
//!
//! Both conditions hold for any lift, so an inconsistent system rules one out. A consistent
//! system proves nothing.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::ResidueRing;
use crate::lift::{lift_to_precision, LiftConfig, LiftPath};
use crate::linsys::{LinearSystemFp, Solution};
use crate::matrix::ResidueMatrix;
use crate::sl2::{ModuleKind, RepresentationSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CosetCondition {
    /// `(a+q)^p = I`.
    OrderP,
    /// `(a+q)` commutes with `(a+q)^c`.
    Commuting,
}

/// Which equation a row encodes: entry `(u, v)` (0-based) of one condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CosetRow {
    pub condition: CosetCondition,
    pub u: usize,
    pub v: usize,
}

impl CosetRow {
    /// 1-based block coordinates for block size `r`.
    pub fn block(&self, r: usize) -> (usize, usize) {
        (self.u / r + 1, self.v / r + 1)
    }
}

impl fmt::Display for CosetRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.condition {
            CosetCondition::OrderP => "order-p",
            CosetCondition::Commuting => "commuting",
        };
        write!(f, "{name}[{},{}]", self.u + 1, self.v + 1)
    }
}

#[derive(Clone, Debug)]
pub struct CosetConstraintSystem {
    pub p: u64,
    pub r: usize,
    pub n: usize,
    /// Lift of the Pascal block matrix to `Z/p^2Z`.
    pub a: ResidueMatrix,
    /// Lift of the diagonal generator to `Z/p^2Z`, replaced by its power of order prime to `p`.
    pub c: ResidueMatrix,
    /// `a - I`.
    pub a0: ResidueMatrix,
    /// Unknown `X[i][j]` has index `i * dim + j`.
    pub system: LinearSystemFp,
    /// One label per row of `system`.
    pub labels: Vec<CosetRow>,
}

impl CosetConstraintSystem {
    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    pub fn num_unknowns(&self) -> usize {
        self.system.num_unknowns()
    }

    pub fn solve(&self) -> Solution {
        self.system.solve()
    }

    pub fn is_consistent(&self) -> bool {
        self.solve().is_consistent()
    }

    /// Order-`p` rows on the diagonal of block `(2,1)` that read `c = 0` with `c != 0`:
    /// the `p I_r = 0` contradiction.
    pub fn contradiction_rows(&self) -> Vec<CosetRow> {
        let r = self.r;
        self.labels
            .iter()
            .zip(self.system.rows())
            .filter(|(label, row)| {
                label.condition == CosetCondition::OrderP
                    && label.block(r) == (2, 1)
                    && label.u % r == label.v % r
                    && row.is_trivially_inconsistent()
            })
            .map(|(label, _)| *label)
            .collect()
    }

    /// The candidate `a + pX` at level `p^2`.
    pub fn candidate(&self, x: &[u64]) -> Result<ResidueMatrix> {
        let dim = self.dim();
        if x.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!("expected {} values", dim * dim)));
        }
        let ring = self.a.ring();
        let q = ResidueMatrix::from_entries(ring, dim, dim, x.to_vec())?.scale(self.p);
        self.a.try_add(&q)
    }
}

fn exact_div_p(m: &ResidueMatrix, p: u64) -> Result<Vec<u64>> {
    m.entries()
        .iter()
        .map(|&v| {
            if v % p == 0 {
                Ok(v / p % p)
            } else {
                Err(Error::Invariant("expected a matrix divisible by p".into()))
            }
        })
        .collect()
}

fn unit_matrix(ring: ResidueRing, dim: usize, i: usize, j: usize) -> ResidueMatrix {
    let mut e = ResidueMatrix::zeros(ring, dim, dim);
    e.set(i, j, 1);
    e
}

/// The power of `c` of order prime to `p` that agrees with `c` mod `p`.
fn prime_to_p_part(c: &ResidueMatrix, p: u64) -> Result<ResidueMatrix> {
    let fp = ResidueRing::prime_field(p)?;
    let o = c.reinterpret(fp).order(1 << 20)?.ok_or_else(|| Error::Invariant("singular diagonal generator".into()))?;
    if o == 1 {
        return c.pow(p);
    }
    // N = 1 mod o and N = 0 mod p
    let p_inv = (1..o).find(|k| k * p % o == 1).ok_or_else(|| Error::Invariant("order divisible by p".into()))?;
    c.pow(p * p_inv)
}

/// Builds the order-`p` and commuting conditions for `V_n(p^r)`.
pub fn build_coset_system(p: u64, r: usize, n: usize) -> Result<CosetConstraintSystem> {
    if n == 0 || n as u64 > p {
        return Err(Error::InvalidParameter(format!("need 1 <= n <= p, got n = {n}")));
    }
    let spec = RepresentationSpec::new(p, r, ModuleKind::Vn(n))?;
    let images = spec.generator_images()?;
    let level2 = ResidueRing::new(p, 2)?;
    let fp = images.ring;
    let dim = images.dimension();

    let a = images.alpha.reinterpret(level2);
    let c = prime_to_p_part(&images.gamma.reinterpret(level2), p)?;
    let a0 = a.try_sub(&ResidueMatrix::identity(level2, dim))?;
    let c_inv = c.inverse()?;
    let a_c = c_inv.try_mul(&a)?.try_mul(&c)?;

    let order_const = exact_div_p(&a.pow(p)?.try_sub(&ResidueMatrix::identity(level2, dim))?, p)?;
    let comm_const = exact_div_p(&a.try_mul(&a_c)?.try_sub(&a_c.try_mul(&a)?)?, p)?;

    let a_bar = a.reinterpret(fp);
    let c_bar = c.reinterpret(fp);
    let c_bar_inv = c_bar.inverse()?;
    let a_c_bar = a_c.reinterpret(fp);
    let a_powers: Vec<ResidueMatrix> = (0..p).map(|k| a_bar.pow(k)).collect::<Result<_>>()?;

    let unknowns = dim * dim;
    // images of each unit matrix under the two linear maps
    let mut order_cols = Vec::with_capacity(unknowns);
    let mut comm_cols = Vec::with_capacity(unknowns);
    for i in 0..dim {
        for j in 0..dim {
            let e = unit_matrix(fp, dim, i, j);
            let mut sum = ResidueMatrix::zeros(fp, dim, dim);
            for k in 0..p as usize {
                let term = a_powers[k].try_mul(&e)?.try_mul(&a_powers[p as usize - 1 - k])?;
                sum = sum.try_add(&term)?;
            }
            order_cols.push(sum);
            let e_c = c_bar_inv.try_mul(&e)?.try_mul(&c_bar)?;
            let comm = e
                .try_mul(&a_c_bar)?
                .try_add(&a_bar.try_mul(&e_c)?)?
                .try_sub(&a_c_bar.try_mul(&e)?)?
                .try_sub(&e_c.try_mul(&a_bar)?)?;
            comm_cols.push(comm);
        }
    }

    let mut system = LinearSystemFp::new(p, unknowns)?;
    let mut labels = Vec::with_capacity(2 * unknowns);
    for (condition, cols, constants) in
        [(CosetCondition::OrderP, &order_cols, &order_const), (CosetCondition::Commuting, &comm_cols, &comm_const)]
    {
        for u in 0..dim {
            for v in 0..dim {
                let terms = cols.iter().enumerate().map(|(x, m)| (x, m.get(u, v)));
                system.push_row(terms, (p - constants[u * dim + v]) % p)?;
                labels.push(CosetRow { condition, u, v });
            }
        }
    }
    Ok(CosetConstraintSystem { p, r, n, a, c, a0, system, labels })
}

/// `a^p + sum_{i<p} a^i q a^(p-1-i)`, the `p`-th power of `a + q` when `q` is divisible by `p`
/// at level `p^2`.
pub fn closed_form_power(a: &ResidueMatrix, q: &ResidueMatrix) -> Result<ResidueMatrix> {
    let p = a.ring().p();
    let mut out = a.pow(p)?;
    for i in 0..p {
        out = out.try_add(&a.pow(i)?.try_mul(q)?.try_mul(&a.pow(p - 1 - i)?)?)?;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossCheck {
    pub liftable: bool,
    pub coset_consistent: bool,
}

impl CrossCheck {
    /// Liftable implies consistent.
    pub fn passed(&self) -> bool {
        !self.liftable || self.coset_consistent
    }

    /// Consistent coset system but no lift: allowed, since the conditions are only necessary.
    pub fn necessary_not_sufficient(&self) -> bool {
        self.coset_consistent && !self.liftable
    }
}

/// Compares the Borel decision at `Z/p^2Z` with the coset system of the underlying `V_n`.
/// Duals and twists lift exactly when `V_n` does, so they share its system.
pub fn coset_cross_check(spec: &RepresentationSpec) -> Result<CrossCheck> {
    let report = lift_to_precision(spec, &LiftConfig::default().with_target(2).with_path(LiftPath::Borel))?;
    let (n, _, _) = spec.kind.normalize(spec.p);
    let coset_consistent = build_coset_system(spec.p, spec.r, n)?.is_consistent();
    Ok(CrossCheck { liftable: report.decision.is_liftable(), coset_consistent })
}
