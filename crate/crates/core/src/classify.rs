//! The classification table: one lift decision per `(q, module)`.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::prime_power;
use crate::lift::{lift_to_precision_with, Decision, GroupProvider, LiftConfig, LiftPath, DEFAULT_UNKNOWN_CAP};
use crate::sl2::{ModuleKind, RepresentationSpec};

/// Field sizes handled without `allow_large`.
pub const SUPPORTED_Q: [u64; 7] = [2, 3, 4, 5, 7, 8, 9];

/// The reference classification for `Z/p^2Z`: `V_n(p^r)` (`1 <= n <= p`) lifts iff `r = 1` and
/// either `p = 2, n in {1, 2}` or `p` odd and `n in {p-2, p-1}`; `Lambda(p^r)` lifts iff `p^r = 2`.
///
/// Duals of `V_n` with `n < p` are isomorphic to `V_n`, the dual of `V_p` is `Lambda`, and twists
/// do not change the answer. The trivial module always lifts.
pub fn reference_decision(p: u64, r: usize, kind: &ModuleKind) -> Decision {
    let (n, _, _) = kind.normalize(p);
    let q = p.pow(r as u32);
    let lifts = if n == 0 {
        true
    } else if n as u64 == p {
        q == 2
    } else {
        let n = n as u64;
        r == 1 && if p == 2 { n == 1 } else { n + 2 == p || n + 1 == p }
    };
    if lifts {
        Decision::Liftable
    } else {
        Decision::NotLiftable
    }
}

/// `V_1, ..., V_p, Lambda`.
pub fn modules_for(p: u64) -> Vec<ModuleKind> {
    let mut kinds: Vec<ModuleKind> = (1..=p as usize).map(ModuleKind::Vn).collect();
    kinds.push(ModuleKind::Lambda);
    kinds
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationRow {
    pub q: u64,
    pub module: String,
    pub decision: Decision,
    pub path: LiftPath,
    pub precision: u32,
    /// Only filled in when timings were requested, so that tables compare byte for byte.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

#[derive(Clone, Copy, Debug)]
pub struct TableOptions {
    pub max_q: u64,
    pub target: u32,
    pub path: LiftPath,
    pub allow_large: bool,
    pub unknown_cap: usize,
    pub timings: bool,
}

impl Default for TableOptions {
    fn default() -> Self {
        TableOptions {
            max_q: 9,
            target: 2,
            path: LiftPath::Borel,
            allow_large: false,
            unknown_cap: DEFAULT_UNKNOWN_CAP,
            timings: false,
        }
    }
}

/// Field sizes covered by a table up to `max_q`.
pub fn table_field_sizes(max_q: u64, allow_large: bool) -> Vec<u64> {
    (2..=max_q).filter(|&q| prime_power(q).is_some() && (allow_large || SUPPORTED_Q.contains(&q))).collect()
}

/// Decides every cell, in parallel; rows come back sorted by `q`, then `V_1..V_p, Lambda`.
pub fn classification_table(options: &TableOptions, provider: &dyn GroupProvider) -> Result<Vec<ClassificationRow>> {
    let mut cells = Vec::new();
    for q in table_field_sizes(options.max_q, options.allow_large) {
        let (p, r) = prime_power(q).expect("filtered above");
        for kind in modules_for(p) {
            cells.push(RepresentationSpec::new(p, r as usize, kind)?);
        }
    }
    let config = LiftConfig {
        target: options.target,
        path: options.path,
        unknown_cap: options.unknown_cap,
        ..LiftConfig::default()
    };
    cells
        .par_iter()
        .map(|spec| {
            let start = Instant::now();
            let report = lift_to_precision_with(spec, &config, provider)?;
            Ok(ClassificationRow {
                q: spec.q(),
                module: spec.label(),
                decision: report.decision,
                path: options.path,
                precision: report.achieved_precision,
                wall_ms: options.timings.then(|| start.elapsed().as_millis() as u64),
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub q: u64,
    pub module: String,
    pub expected: Decision,
    pub actual: Decision,
}

/// Rows whose decision differs from [`reference_decision`].
pub fn mismatches(rows: &[ClassificationRow]) -> Result<Vec<Mismatch>> {
    let mut out = Vec::new();
    for row in rows {
        let spec = RepresentationSpec::parse(row.q, &row.module)?;
        let expected = reference_decision(spec.p, spec.r, &spec.kind);
        if expected != row.decision {
            out.push(Mismatch { q: row.q, module: row.module.clone(), expected, actual: row.decision });
        }
    }
    Ok(out)
}

pub fn render_text(rows: &[ClassificationRow]) -> String {
    let mut out = String::from("q  module  decision  precision  path\n");
    for row in rows {
        let _ = write!(out, "{:<2} {:<7} {:<9} {:<10} {}", row.q, row.module, row.decision, row.precision, row.path);
        if let Some(ms) = row.wall_ms {
            let _ = write!(out, "  {ms} ms");
        }
        out.push('\n');
    }
    out
}

pub fn render_json(rows: &[ClassificationRow]) -> Result<String> {
    serde_json::to_string_pretty(rows).map(|s| s + "\n").map_err(Error::from)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lift::DirectClosure;

    fn decision(q: u64, label: &str) -> Decision {
        let spec = RepresentationSpec::parse(q, label).unwrap();
        reference_decision(spec.p, spec.r, &spec.kind)
    }

    #[test]
    fn reference_table_cells() {
        use Decision::*;
        let cells = [
            (2, "V1", Liftable),
            (2, "V2", Liftable),
            (2, "Lambda", Liftable),
            (3, "V1", Liftable),
            (3, "V2", Liftable),
            (3, "V3", NotLiftable),
            (4, "V1", NotLiftable),
            (4, "V2", NotLiftable),
            (5, "V2", NotLiftable),
            (5, "V3", Liftable),
            (5, "V4", Liftable),
            (5, "Lambda", NotLiftable),
            (7, "V4", NotLiftable),
            (7, "V5", Liftable),
            (9, "V2", NotLiftable),
            (5, "V3*", Liftable),
            (5, "V5*", NotLiftable),
            (9, "V1^1", NotLiftable),
        ];
        for (q, label, expected) in cells {
            assert_eq!(decision(q, label), expected, "{label}({q})");
        }
    }

    #[test]
    fn field_sizes() {
        assert_eq!(table_field_sizes(9, false), vec![2, 3, 4, 5, 7, 8, 9]);
        assert_eq!(table_field_sizes(16, false), vec![2, 3, 4, 5, 7, 8, 9]);
        assert_eq!(table_field_sizes(16, true), vec![2, 3, 4, 5, 7, 8, 9, 11, 13, 16]);
    }

    #[test]
    fn small_table_is_sorted_and_stable() {
        let options = TableOptions { max_q: 5, ..Default::default() };
        let rows = classification_table(&options, &DirectClosure::default()).unwrap();
        let labels: Vec<(u64, &str)> = rows.iter().map(|r| (r.q, r.module.as_str())).collect();
        assert_eq!(&labels[..4], &[(2, "V1"), (2, "V2"), (2, "Lambda"), (3, "V1")]);
        assert_eq!(rows.len(), 3 + 4 + 3 + 6);
        let again = classification_table(&options, &DirectClosure::default()).unwrap();
        assert_eq!(render_json(&rows).unwrap(), render_json(&again).unwrap());
        assert!(render_text(&rows).lines().count() == rows.len() + 1);
    }
}
