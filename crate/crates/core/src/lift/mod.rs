//! Deciding whether a representation over `F_p` lifts to `Z/p^sZ`.
//!
//! The decision procedure iterates obstruction + coboundary solves one level at a time,
//! on the Borel subgroup (default) or on the whole group. [`coset`] holds a second,
//! independent engine that encodes the order-`p` and commuting conditions on the coset
//! of the unipotent generator.

pub mod coset;
pub mod obstruction;

use std::fmt;
use std::sync::Arc;

use log::debug;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{MatrixGroup, DEFAULT_CLOSURE_CAP};
use crate::matrix::ResidueMatrix;
use crate::rep::ModularRep;
use crate::sl2::RepresentationSpec;

pub use obstruction::{
    apply_correction, build_obstruction, coboundary_system_all_pairs, solve_coboundary, solve_coboundary_with_classes, CoboundaryOutcome,
    CoboundaryStats, CocycleCheck, EntrywiseLift, ObstructionCocycle,
};

pub const DEFAULT_UNKNOWN_CAP: usize = 30_000;
pub const DEFAULT_SEARCH_CAP: usize = 4096;
pub const DEFAULT_PRECISION: u32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LiftPath {
    Borel,
    Full,
    Both,
}

impl fmt::Display for LiftPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            LiftPath::Borel => "borel",
            LiftPath::Full => "full",
            LiftPath::Both => "both",
        })
    }
}

impl std::str::FromStr for LiftPath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "borel" => Ok(LiftPath::Borel),
            "full" => Ok(LiftPath::Full),
            "both" => Ok(LiftPath::Both),
            other => Err(Error::InvalidParameter(format!("unknown path {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Decision {
    #[serde(rename = "lift")]
    Liftable,
    #[serde(rename = "no-lift")]
    NotLiftable,
}

impl Decision {
    pub fn is_liftable(self) -> bool {
        self == Decision::Liftable
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Decision::Liftable => "lift",
            Decision::NotLiftable => "no-lift",
        })
    }
}

/// Source of group tables; lets callers put a cache in front of closure.
pub trait GroupProvider: Sync {
    fn group(&self, spec: &RepresentationSpec, path: LiftPath, generators: &[ResidueMatrix]) -> Result<Arc<MatrixGroup>>;
}

/// Closes the generators every time.
pub struct DirectClosure {
    pub cap: usize,
}

impl Default for DirectClosure {
    fn default() -> Self {
        DirectClosure { cap: DEFAULT_CLOSURE_CAP }
    }
}

impl GroupProvider for DirectClosure {
    fn group(&self, _spec: &RepresentationSpec, _path: LiftPath, generators: &[ResidueMatrix]) -> Result<Arc<MatrixGroup>> {
        MatrixGroup::close(generators, self.cap).map(Arc::new)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct LiftConfig {
    /// Target exponent `s` of `Z/p^sZ`.
    pub target: u32,
    pub path: LiftPath,
    /// Cap on `|G| m^2` for the full-group path.
    pub unknown_cap: usize,
    pub cocycle_check: CocycleCheck,
    /// Cap on the partial lifts visited when searching past `p^2`.
    pub search_cap: usize,
}

impl Default for LiftConfig {
    fn default() -> Self {
        LiftConfig {
            target: DEFAULT_PRECISION,
            path: LiftPath::Borel,
            unknown_cap: DEFAULT_UNKNOWN_CAP,
            cocycle_check: CocycleCheck::default(),
            search_cap: DEFAULT_SEARCH_CAP,
        }
    }
}

impl LiftConfig {
    pub fn with_target(mut self, target: u32) -> Self {
        self.target = target;
        self
    }

    pub fn with_path(mut self, path: LiftPath) -> Self {
        self.path = path;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelDiagnostics {
    /// Lifting from `p^level` to `p^(level+1)`.
    pub level: u32,
    pub consistent: bool,
    pub stats: CoboundaryStats,
}

/// The result of running one path.
#[derive(Clone, Debug)]
pub struct PathOutcome {
    pub path: LiftPath,
    pub group_order: usize,
    pub achieved_precision: u32,
    pub levels: Vec<LevelDiagnostics>,
    /// The representation at `achieved_precision`.
    pub rep: ModularRep,
}

impl PathOutcome {
    pub fn decision(&self) -> Decision {
        if self.achieved_precision >= 2 {
            Decision::Liftable
        } else {
            Decision::NotLiftable
        }
    }
}

#[derive(Clone, Debug)]
pub struct LiftReport {
    pub spec: RepresentationSpec,
    /// Whether a lift to `Z/p^2Z` exists.
    pub decision: Decision,
    pub achieved_precision: u32,
    pub target: u32,
    /// Images of every element of the authoritative path's group at `achieved_precision`,
    /// present when that is at least 2.
    pub witness: Option<ModularRep>,
    /// One entry per path that was run; the first is authoritative.
    pub outcomes: Vec<PathOutcome>,
}

impl LiftReport {
    pub fn authoritative(&self) -> &PathOutcome {
        &self.outcomes[0]
    }
}

/// Lifts the tautological representation of `group` level by level.
///
/// Reaching `p^2` needs one solve. Past that the lift chosen at each level matters, so the
/// search backtracks over every cohomology class of corrections; lifts differing by a
/// coboundary are conjugate and need not be tried twice. A `NotLiftable` outcome therefore
/// means no lift exists, not just that one choice got stuck.
pub fn lift_rep(group: Arc<MatrixGroup>, path: LiftPath, config: &LiftConfig) -> Result<PathOutcome> {
    let group_order = group.order();
    let mut search = Search { config, visited: 0 };
    let (rep, levels) = search.descend(ModularRep::tautological(group))?;
    Ok(PathOutcome { path, group_order, achieved_precision: rep.level(), levels, rep })
}

struct Search<'a> {
    config: &'a LiftConfig,
    visited: usize,
}

impl Search<'_> {
    /// The deepest lift found below `rep`, with the diagnostics along its branch.
    fn descend(&mut self, rep: ModularRep) -> Result<(ModularRep, Vec<LevelDiagnostics>)> {
        if rep.level() >= self.config.target {
            return Ok((rep, Vec::new()));
        }
        self.visited += 1;
        if self.visited > self.config.search_cap {
            return Err(Error::SearchCapExceeded { cap: self.config.search_cap });
        }
        let cocycle = build_obstruction(&rep, self.config.cocycle_check)?;
        let branching = rep.level() + 1 < self.config.target;
        let outcome =
            if branching { solve_coboundary_with_classes(&rep, &cocycle)? } else { solve_coboundary(&rep, &cocycle)? };
        debug!(
            "level {} -> {}: {} unknowns, {} equations, rank {}, {} classes",
            rep.level(),
            rep.level() + 1,
            outcome.stats.unknowns,
            outcome.stats.equations,
            outcome.stats.rank,
            outcome.classes.len()
        );
        let here = LevelDiagnostics { level: rep.level(), consistent: outcome.correction.is_some(), stats: outcome.stats };
        let Some(base) = outcome.correction else {
            return Ok((rep, vec![here]));
        };
        let p = rep.group().p();
        let choices = (p as usize).checked_pow(outcome.classes.len() as u32).unwrap_or(usize::MAX);
        let mut best: Option<(ModularRep, Vec<LevelDiagnostics>)> = None;
        for index in 0..choices {
            let correction = shifted(&base, &outcome.classes, index, p)?;
            let next = apply_correction(&rep, &correction)?;
            if !next.is_homomorphism() {
                return Err(Error::Invariant(format!("corrected images fail the Cayley table at level {}", next.level())));
            }
            let (deepest, mut below) = self.descend(next)?;
            if best.as_ref().map_or(true, |(b, _)| deepest.level() > b.level()) {
                below.insert(0, here.clone());
                let done = deepest.level() >= self.config.target;
                best = Some((deepest, below));
                if done {
                    break;
                }
            }
        }
        Ok(best.expect("at least one choice"))
    }
}

/// `base + sum c_i classes[i]` with the digits `c_i` of `index` in base `p`.
fn shifted(base: &[ResidueMatrix], classes: &[Vec<ResidueMatrix>], mut index: usize, p: u64) -> Result<Vec<ResidueMatrix>> {
    let mut out = base.to_vec();
    for class in classes {
        let c = (index % p as usize) as u64;
        index /= p as usize;
        if c != 0 {
            for (t, z) in out.iter_mut().zip(class) {
                *t = t.try_add(&z.scale(c))?;
            }
        }
    }
    Ok(out)
}

fn run_path(
    spec: &RepresentationSpec,
    path: LiftPath,
    config: &LiftConfig,
    provider: &dyn GroupProvider,
) -> Result<PathOutcome> {
    let images = spec.generator_images()?;
    let generators = match path {
        LiftPath::Borel => images.borel(),
        LiftPath::Full => images.full(),
        LiftPath::Both => unreachable!("split by the caller"),
    };
    let group = provider.group(spec, path, &generators)?;
    if path == LiftPath::Full {
        let needed = group.order() * group.dim() * group.dim();
        if needed > config.unknown_cap {
            return Err(Error::UnknownCapExceeded { needed, cap: config.unknown_cap });
        }
    }
    lift_rep(group, path, config)
}

/// Decides liftability of `spec` up to `Z/p^{config.target}Z`.
pub fn lift_to_precision(spec: &RepresentationSpec, config: &LiftConfig) -> Result<LiftReport> {
    lift_to_precision_with(spec, config, &DirectClosure::default())
}

pub fn lift_to_precision_with(
    spec: &RepresentationSpec,
    config: &LiftConfig,
    provider: &dyn GroupProvider,
) -> Result<LiftReport> {
    if config.target < 2 {
        return Err(Error::InvalidParameter("target precision must be at least 2".into()));
    }
    let outcomes = match config.path {
        LiftPath::Both => {
            let borel = run_path(spec, LiftPath::Borel, config, provider)?;
            let full = run_path(spec, LiftPath::Full, config, provider)?;
            if borel.decision() != full.decision() {
                return Err(Error::PathDisagreement(spec.to_string()));
            }
            vec![borel, full]
        }
        path => vec![run_path(spec, path, config, provider)?],
    };
    let main = &outcomes[0];
    let decision = main.decision();
    let witness = decision.is_liftable().then(|| main.rep.clone());
    Ok(LiftReport {
        spec: spec.clone(),
        decision,
        achieved_precision: main.achieved_precision,
        target: config.target,
        witness,
        outcomes,
    })
}

/// Checks a witness: every Cayley-table product holds exactly, every image reduces mod `p`
/// to the source element, and each generator image has the order of its reduction.
pub fn witness_validate(witness: &ModularRep) -> bool {
    if !witness.is_homomorphism() || !witness.reduces_to_group() {
        return false;
    }
    let group = witness.group();
    group.generators().iter().all(|&g| {
        let order = group.element_order(g) as u64;
        witness.image(g).order(order).ok().flatten() == Some(order)
    })
}

/// Validates the witness carried by a report, if any.
pub fn report_witness_valid(report: &LiftReport) -> bool {
    match &report.witness {
        Some(w) => w.level() == report.achieved_precision && witness_validate(w),
        None => !report.decision.is_liftable(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn decide(q: u64, label: &str, path: LiftPath) -> LiftReport {
        let spec = RepresentationSpec::parse(q, label).unwrap();
        lift_to_precision(&spec, &LiftConfig::default().with_target(2).with_path(path)).unwrap()
    }

    #[test]
    fn obstruction_normalisation() {
        let spec = RepresentationSpec::parse(3, "V1").unwrap();
        let group = Arc::new(MatrixGroup::close(&spec.generator_images().unwrap().borel(), 1000).unwrap());
        let rep = ModularRep::tautological(group.clone());
        let f = build_obstruction(&rep, CocycleCheck::Exhaustive).unwrap();
        for g in 0..group.order() {
            assert!(f.matrix(0, g).is_zero());
            assert!(f.matrix(g, 0).is_zero());
        }
    }

    #[test]
    fn zero_cocycle_gives_zero_correction() {
        let ring = crate::field::ResidueRing::prime_field(3).unwrap();
        let group = Arc::new(MatrixGroup::close(&[ResidueMatrix::identity(ring, 2)], 10).unwrap());
        let rep = ModularRep::tautological(group);
        let f = build_obstruction(&rep, CocycleCheck::Exhaustive).unwrap();
        assert!(f.is_zero());
        let out = solve_coboundary(&rep, &f).unwrap();
        assert!(out.correction.unwrap().iter().all(ResidueMatrix::is_zero));
    }

    #[test]
    fn small_decisions() {
        assert_eq!(decide(2, "V1", LiftPath::Both).decision, Decision::Liftable);
        assert_eq!(decide(3, "V1", LiftPath::Both).decision, Decision::Liftable);
        assert_eq!(decide(5, "V1", LiftPath::Borel).decision, Decision::NotLiftable);
        assert_eq!(decide(5, "V4", LiftPath::Borel).decision, Decision::Liftable);
        assert_eq!(decide(4, "V1", LiftPath::Borel).decision, Decision::NotLiftable);
        assert_eq!(decide(9, "V2", LiftPath::Borel).decision, Decision::NotLiftable);
        assert_eq!(decide(2, "Lambda", LiftPath::Borel).decision, Decision::Liftable);
    }

    #[test]
    fn witness_detects_corruption() {
        let report = decide(3, "V2", LiftPath::Borel);
        let witness = report.witness.clone().unwrap();
        assert!(witness_validate(&witness));
        assert!(report_witness_valid(&report));
        let mut images = witness.images().to_vec();
        let g = witness.group().generators()[0];
        let mut bad = images[g].clone();
        let v = bad.get(1, 0);
        bad.set(1, 0, v + 3);
        images[g] = bad;
        let corrupted = ModularRep::new(witness.group().clone(), witness.ring(), images).unwrap();
        assert!(!witness_validate(&corrupted));
    }

    #[test]
    fn full_path_cap() {
        let spec = RepresentationSpec::parse(5, "V5").unwrap();
        let config = LiftConfig { target: 2, path: LiftPath::Full, unknown_cap: 100, ..Default::default() };
        assert!(matches!(lift_to_precision(&spec, &config), Err(Error::UnknownCapExceeded { .. })));
        assert!(lift_to_precision(&spec, &config.with_target(1)).is_err());
    }

    #[test]
    fn search_backtracks_past_a_stuck_choice() {
        // the first level-2 lift of V2(4) does not lift further; another class does
        let spec = RepresentationSpec::parse(4, "V2").unwrap();
        let greedy = LiftConfig { search_cap: 2, ..LiftConfig::default().with_target(3) };
        assert_eq!(lift_to_precision(&spec, &greedy).unwrap_err(), Error::SearchCapExceeded { cap: 2 });
        let report = lift_to_precision(&spec, &LiftConfig::default().with_target(3)).unwrap();
        assert_eq!(report.achieved_precision, 3);
        assert!(report_witness_valid(&report));
    }
}
