//! The obstruction to lifting a representation one level, and its coboundary equations.
//!
//! Given `rho` at level `p^k`, let `s(g)` be its images re-read at `p^(k+1)`. Then
//! `s(g) s(h) s(gh)^-1 = I + p^k f(g, h)` with `f(g, h) in M_m(F_p)`. A lift to level
//! `p^(k+1)` exists iff there is `t: G -> M_m(F_p)`, `t(1) = 0`, with
//!
//! ```text
//! f(g, h) = t(gh) - t(g) - rho(g) t(h) rho(g)^-1,
//! ```
//!
//! and then `s'(g) = (I + p^k t(g)) s(g)` is a homomorphism.

use rand::{rngs::StdRng, Rng, SeedableRng};

use crate::error::{Error, Result};
use crate::group::MatrixGroup;
use crate::linsys::{Echelon, LinearSystemFp, Solution};
use crate::matrix::ResidueMatrix;
use crate::rep::ModularRep;

/// Images of a level-`p^k` representation re-read at `p^(k+1)`.
#[derive(Clone, Debug)]
pub struct EntrywiseLift {
    pub source_level: u32,
    pub lifted: Vec<ResidueMatrix>,
}

impl EntrywiseLift {
    pub fn new(rep: &ModularRep) -> Result<Self> {
        let ring = rep.ring().with_exponent(rep.level() + 1)?;
        let lifted = rep.images().iter().map(|m| m.reinterpret(ring)).collect();
        Ok(EntrywiseLift { source_level: rep.level(), lifted })
    }
}

/// `f(g, h)` for all pairs, entries in `F_p`.
#[derive(Clone, Debug)]
pub struct ObstructionCocycle {
    p: u64,
    dim: usize,
    order: usize,
    level: u32,
    values: Vec<u8>,
}

/// How thoroughly the cocycle identity is verified when a cocycle is built.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CocycleCheck {
    Off,
    Exhaustive,
    Sampled(usize),
    /// Exhaustive up to the given group order, sampled (10 000 triples) beyond it.
    Auto(usize),
}

impl Default for CocycleCheck {
    fn default() -> Self {
        CocycleCheck::Auto(100)
    }
}

impl ObstructionCocycle {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn group_order(&self) -> usize {
        self.order
    }

    /// The level `k` the obstruction was computed from.
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn value(&self, g: usize, h: usize) -> &[u8] {
        let m2 = self.dim * self.dim;
        let at = (g * self.order + h) * m2;
        &self.values[at..at + m2]
    }

    pub fn matrix(&self, g: usize, h: usize) -> ResidueMatrix {
        let ring = crate::field::ResidueRing::prime_field(self.p).expect("prime");
        ResidueMatrix::from_entries(ring, self.dim, self.dim, self.value(g, h).iter().map(|&v| u64::from(v)).collect())
            .expect("stored with the right length")
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// `f(g,h) + f(gh,k) = rho(g) f(h,k) rho(g)^-1 + f(g,hk)`.
    pub fn identity_holds(&self, group: &MatrixGroup, conj: &Conjugator, g: usize, h: usize, k: usize) -> bool {
        let p = self.p as u32;
        let lhs: Vec<u32> = self
            .value(g, h)
            .iter()
            .zip(self.value(group.mul(g, h), k))
            .map(|(&a, &b)| (u32::from(a) + u32::from(b)) % p)
            .collect();
        let twisted = conj.apply(g, self.value(h, k));
        let rhs: Vec<u32> =
            twisted.iter().zip(self.value(g, group.mul(h, k))).map(|(&a, &b)| (a + u32::from(b)) % p).collect();
        lhs == rhs
    }

    /// Returns the first failing triple, if any.
    pub fn check_identity(&self, group: &MatrixGroup, mode: CocycleCheck) -> Option<(usize, usize, usize)> {
        let n = self.order;
        let conj = Conjugator::new(group);
        let exhaustive = match mode {
            CocycleCheck::Off => return None,
            CocycleCheck::Exhaustive => true,
            CocycleCheck::Sampled(_) => false,
            CocycleCheck::Auto(limit) => n <= limit,
        };
        if exhaustive {
            for g in 0..n {
                for h in 0..n {
                    for k in 0..n {
                        if !self.identity_holds(group, &conj, g, h, k) {
                            return Some((g, h, k));
                        }
                    }
                }
            }
            None
        } else {
            let samples = match mode {
                CocycleCheck::Sampled(s) => s,
                _ => 10_000,
            };
            let mut rng = StdRng::seed_from_u64(0x5eed ^ n as u64);
            (0..samples)
                .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)))
                .find(|&(g, h, k)| !self.identity_holds(group, &conj, g, h, k))
        }
    }
}

/// `X -> rho(g) X rho(g)^-1` on `M_m(F_p)`, with `rho` the tautological representation.
pub struct Conjugator {
    p: u32,
    dim: usize,
    left: Vec<Vec<u32>>,
    right: Vec<Vec<u32>>,
}

impl Conjugator {
    pub fn new(group: &MatrixGroup) -> Self {
        let bytes = |i: usize| group.encoding(i).iter().map(|&v| u32::from(v)).collect::<Vec<u32>>();
        Conjugator {
            p: group.p() as u32,
            dim: group.dim(),
            left: (0..group.order()).map(bytes).collect(),
            right: (0..group.order()).map(|g| bytes(group.inverse(g))).collect(),
        }
    }

    pub fn apply(&self, g: usize, x: &[u8]) -> Vec<u32> {
        let m = self.dim;
        let (a, b) = (&self.left[g], &self.right[g]);
        let mut tmp = vec![0u32; m * m];
        for i in 0..m {
            for l in 0..m {
                let mut acc = 0;
                for k in 0..m {
                    acc += a[i * m + k] * u32::from(x[k * m + l]);
                }
                tmp[i * m + l] = acc % self.p;
            }
        }
        let mut out = vec![0u32; m * m];
        for i in 0..m {
            for j in 0..m {
                let mut acc = 0;
                for l in 0..m {
                    acc += tmp[i * m + l] * b[l * m + j];
                }
                out[i * m + j] = acc % self.p;
            }
        }
        out
    }
}

/// Computes `f` on all pairs and verifies the cocycle identity according to `check`.
pub fn build_obstruction(rep: &ModularRep, check: CocycleCheck) -> Result<ObstructionCocycle> {
    let group = rep.group();
    let lift = EntrywiseLift::new(rep)?;
    let ring = lift.lifted[0].ring();
    let pk = rep.ring().modulus();
    let p = ring.p();
    let n = group.order();
    let m = rep.dim();
    let inverses = lift.lifted.iter().map(ResidueMatrix::inverse).collect::<Result<Vec<_>>>()?;
    let mut values = vec![0u8; n * n * m * m];
    for g in 0..n {
        for h in 0..n {
            let prod = &(&lift.lifted[g] * &lift.lifted[h]) * &inverses[group.mul(g, h)];
            let out = &mut values[(g * n + h) * m * m..(g * n + h + 1) * m * m];
            for i in 0..m {
                for j in 0..m {
                    let v = ring.sub(prod.get(i, j), u64::from(i == j));
                    if v % pk != 0 {
                        return Err(Error::Invariant(format!(
                            "representation is not a homomorphism at level {}",
                            rep.level()
                        )));
                    }
                    out[i * m + j] = ((v / pk) % p) as u8;
                }
            }
        }
    }
    let cocycle = ObstructionCocycle { p, dim: m, order: n, level: rep.level(), values };
    if let Some((g, h, k)) = cocycle.check_identity(group, check) {
        return Err(Error::Invariant(format!("cocycle identity fails at ({g}, {h}, {k})")));
    }
    Ok(cocycle)
}

/// Size and outcome of one coboundary solve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoboundaryStats {
    /// Unknowns left after eliminating tree edges: one matrix per distinct non-identity generator.
    pub unknowns: usize,
    pub equations: usize,
    pub rank: usize,
    pub nullity: Option<usize>,
    /// `|G| m^2`, the unknown count before tree elimination.
    pub nominal_unknowns: usize,
}

#[derive(Clone, Debug)]
pub struct CoboundaryOutcome {
    /// `t(g)` over `F_p` for every element, when the system is consistent.
    pub correction: Option<Vec<ResidueMatrix>>,
    pub stats: CoboundaryStats,
    /// Cocycles `z: G -> M_m(F_p)` whose classes form a basis of `H^1(G, M_m(F_p))` under
    /// conjugation. Filled in only by [`solve_coboundary_with_classes`].
    pub classes: Vec<Vec<ResidueMatrix>>,
}

/// Affine forms `t(g)_{ij} = sum_u c_u x_u + c_0` in the generator unknowns.
struct AffineForms {
    width: usize,
    data: Vec<u32>,
}

impl AffineForms {
    fn entry(&self, e: usize) -> &[u32] {
        &self.data[e * self.width..(e + 1) * self.width]
    }
}

/// Solves `f = dt` using the BFS tree of the Cayley graph.
///
/// Tree edges `(x, s) -> xs` express each `t(g)` through `t` on the generators. The
/// remaining edges `(x, s)` give the equations. A map `t` satisfying `dt = f` on every
/// `(x, s)` with `s` a generator satisfies it on all pairs, so the solution sets agree.
pub fn solve_coboundary(rep: &ModularRep, cocycle: &ObstructionCocycle) -> Result<CoboundaryOutcome> {
    solve(rep, cocycle, false)
}

/// As [`solve_coboundary`], and also returns cohomology class representatives: every
/// correction is `t + sum c_i z_i` up to a coboundary `X - rho(g) X rho(g)^-1`, and those
/// give conjugate lifts.
pub fn solve_coboundary_with_classes(rep: &ModularRep, cocycle: &ObstructionCocycle) -> Result<CoboundaryOutcome> {
    solve(rep, cocycle, true)
}

fn solve(rep: &ModularRep, cocycle: &ObstructionCocycle, with_classes: bool) -> Result<CoboundaryOutcome> {
    let group = rep.group();
    let n = group.order();
    let m = rep.dim();
    let m2 = m * m;
    let p = cocycle.p() as u32;
    let conj = Conjugator::new(group);

    let identity = group.identity();
    let mut slots: Vec<usize> = Vec::new();
    for &g in group.generators() {
        if g != identity && !slots.contains(&g) {
            slots.push(g);
        }
    }
    let slot_of = |g: usize| slots.iter().position(|&s| s == g);
    let unknowns = slots.len() * m2;
    let width = unknowns + 1;

    // coefficient of t(s)_{kl} in (rho(x) t(s) rho(x)^-1)_{ij} is A_{ik} B_{lj}
    let conj_coeffs = |x: usize, i: usize, j: usize, out: &mut [u32], slot: usize, sign_neg: bool| {
        let a = &conj.left[x];
        let b = &conj.right[x];
        for k in 0..m {
            let aik = a[i * m + k];
            if aik == 0 {
                continue;
            }
            for l in 0..m {
                let c = aik * b[l * m + j] % p;
                let at = slot * m2 + k * m + l;
                out[at] = if sign_neg { (out[at] + p - c) % p } else { (out[at] + c) % p };
            }
        }
    };

    let mut forms: Vec<Option<AffineForms>> = (0..n).map(|_| None).collect();
    forms[identity] = Some(AffineForms { width, data: vec![0; m2 * width] });
    for (slot, &g) in slots.iter().enumerate() {
        let mut data = vec![0; m2 * width];
        for e in 0..m2 {
            data[e * width + slot * m2 + e] = 1;
        }
        forms[g] = Some(AffineForms { width, data });
    }
    // BFS order guarantees parents come first
    for y in 0..n {
        if forms[y].is_some() {
            continue;
        }
        let (x, k) = group.tree_edge(y).expect("non-identity elements have a tree edge");
        let s = group.generators()[k];
        let parent = forms[x].as_ref().expect("parent precedes child");
        let mut data = parent.data.clone();
        let f = cocycle.value(x, s);
        if let Some(slot) = slot_of(s) {
            for i in 0..m {
                for j in 0..m {
                    let e = i * m + j;
                    let row = &mut data[e * width..(e + 1) * width];
                    conj_coeffs(x, i, j, row, slot, false);
                    row[unknowns] = (row[unknowns] + u32::from(f[e])) % p;
                }
            }
        }
        forms[y] = Some(AffineForms { width, data });
    }
    let forms: Vec<AffineForms> = forms.into_iter().map(|f| f.expect("every element reached")).collect();

    let mut system = LinearSystemFp::new(u64::from(p), unknowns)?;
    let mut row = vec![0u32; width];
    for x in 0..n {
        if x == identity {
            continue;
        }
        for (k, &s) in group.generators().iter().enumerate() {
            let y = group.mul(x, s);
            if group.tree_edge(y) == Some((x, k)) {
                continue;
            }
            let Some(slot) = slot_of(s) else {
                continue; // s = 1 gives 0 = f(x, 1) = 0
            };
            let f = cocycle.value(x, s);
            for i in 0..m {
                for j in 0..m {
                    let e = i * m + j;
                    // t(y) - t(x) - conj - f = 0
                    for (u, slot_val) in row.iter_mut().enumerate() {
                        *slot_val = (forms[y].entry(e)[u] + p - forms[x].entry(e)[u]) % p;
                    }
                    conj_coeffs(x, i, j, &mut row, slot, true);
                    let constant = (row[unknowns] + p - u32::from(f[e])) % p;
                    let rhs = (p - constant) % p;
                    system.push_row(
                        row[..unknowns].iter().enumerate().filter(|(_, &c)| c != 0).map(|(u, &c)| (u, u64::from(c))),
                        u64::from(rhs),
                    )?;
                }
            }
        }
    }

    let solution = system.solve();
    let mut stats = CoboundaryStats {
        unknowns,
        equations: system.rows().len(),
        rank: solution.rank(),
        nullity: None,
        nominal_unknowns: n * m2,
    };
    let Solution::Consistent { values, nullity, .. } = solution else {
        return Ok(CoboundaryOutcome { correction: None, stats, classes: Vec::new() });
    };
    stats.nullity = Some(nullity);
    let fp = group.ring();
    let evaluate = |point: &[u64], constant: bool| {
        forms
            .iter()
            .map(|form| {
                let entries = (0..m2)
                    .map(|e| {
                        let coeffs = form.entry(e);
                        let start = if constant { u64::from(coeffs[unknowns]) } else { 0 };
                        point.iter().zip(coeffs).fold(start, |acc, (&x, &c)| (acc + x * u64::from(c)) % u64::from(p))
                    })
                    .collect();
                ResidueMatrix::from_entries(fp, m, m, entries)
            })
            .collect::<Result<Vec<_>>>()
    };
    let correction = evaluate(&values, true)?;
    let mut classes = Vec::new();
    if with_classes {
        let mut span = Echelon::new(u64::from(p));
        for e in 0..m2 {
            let mut x = vec![0u8; m2];
            x[e] = 1;
            let mut v = vec![0u64; unknowns];
            for (slot, &g) in slots.iter().enumerate() {
                for (k, c) in conj.apply(g, &x).into_iter().enumerate() {
                    v[slot * m2 + k] = (u64::from(x[k]) + u64::from(p - c)) % u64::from(p);
                }
            }
            span.insert(&v);
        }
        for z in system.kernel_basis() {
            if span.insert(&z) {
                classes.push(evaluate(&z, false)?);
            }
        }
    }
    Ok(CoboundaryOutcome { correction: Some(correction), stats, classes })
}

/// `s'(g) = (I + p^k t(g)) s(g)` at level `p^(k+1)`.
pub fn apply_correction(rep: &ModularRep, correction: &[ResidueMatrix]) -> Result<ModularRep> {
    let lift = EntrywiseLift::new(rep)?;
    let ring = lift.lifted[0].ring();
    let pk = rep.ring().modulus();
    let m = rep.dim();
    let id = ResidueMatrix::identity(ring, m);
    let images = lift
        .lifted
        .iter()
        .zip(correction)
        .map(|(s, t)| {
            let factor = &id + &t.reinterpret(ring).scale(pk);
            &factor * s
        })
        .collect();
    ModularRep::new(rep.group().clone(), ring, images)
}

/// The coboundary equations on every pair `(g, h)`, with unknowns `t(g)` for all `g`.
///
/// Unknown `g * m^2 + i * m + j` is `t(g)_{ij}`. This system is much larger than the
/// one [`solve_coboundary`] builds and serves as an independent check on small groups.
pub fn coboundary_system_all_pairs(rep: &ModularRep, cocycle: &ObstructionCocycle) -> Result<LinearSystemFp> {
    let group = rep.group();
    let n = group.order();
    let m = rep.dim();
    let m2 = m * m;
    let p = cocycle.p() as u32;
    let conj = Conjugator::new(group);
    let mut system = LinearSystemFp::new(u64::from(p), n * m2)?;
    // t(1) = 0
    for e in 0..m2 {
        system.push_row([(group.identity() * m2 + e, 1)], 0)?;
    }
    for g in 0..n {
        for h in 0..n {
            let gh = group.mul(g, h);
            let f = cocycle.value(g, h);
            for i in 0..m {
                for j in 0..m {
                    let e = i * m + j;
                    let mut terms = vec![(gh * m2 + e, 1u64), (g * m2 + e, u64::from(p - 1))];
                    for k in 0..m {
                        for l in 0..m {
                            let c = conj.left[g][i * m + k] * conj.right[g][l * m + j] % p;
                            if c != 0 {
                                terms.push((h * m2 + k * m + l, u64::from(p - c)));
                            }
                        }
                    }
                    system.push_row(terms, u64::from(f[e]))?;
                }
            }
        }
    }
    Ok(system)
}
