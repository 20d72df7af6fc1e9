//! Sparse affine systems over `F_p` and a deterministic Gauss-Jordan solver.

use crate::error::{Error, Result};
use crate::field::is_prime;

/// One equation `sum coeff_i * x_i = constant`, stored sparsely.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SparseRow {
    /// `(unknown index, coefficient)` pairs, coefficients nonzero and reduced mod p.
    pub terms: Vec<(usize, u64)>,
    pub constant: u64,
}

impl SparseRow {
    pub fn is_trivially_inconsistent(&self) -> bool {
        self.terms.is_empty() && self.constant != 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystemFp {
    p: u64,
    num_unknowns: usize,
    rows: Vec<SparseRow>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Inconsistent {
        rank: usize,
    },
    /// Free variables are set to zero in `values`.
    Consistent {
        values: Vec<u64>,
        rank: usize,
        nullity: usize,
    },
}

impl Solution {
    pub fn is_consistent(&self) -> bool {
        matches!(self, Solution::Consistent { .. })
    }

    pub fn rank(&self) -> usize {
        match self {
            Solution::Inconsistent { rank } | Solution::Consistent { rank, .. } => *rank,
        }
    }
}

impl LinearSystemFp {
    pub fn new(p: u64, num_unknowns: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(LinearSystemFp { p, num_unknowns, rows: Vec::new() })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn num_unknowns(&self) -> usize {
        self.num_unknowns
    }

    pub fn rows(&self) -> &[SparseRow] {
        &self.rows
    }

    /// Adds a row from `(index, coefficient)` pairs. Repeated indices are summed and
    /// zero coefficients dropped.
    pub fn push_row(&mut self, terms: impl IntoIterator<Item = (usize, u64)>, constant: u64) -> Result<()> {
        let mut merged: Vec<(usize, u64)> = Vec::new();
        let mut raw: Vec<(usize, u64)> = terms.into_iter().collect();
        raw.sort_by_key(|&(i, _)| i);
        for (i, c) in raw {
            if i >= self.num_unknowns {
                return Err(Error::IndexOutOfRange(format!("unknown {i} of {}", self.num_unknowns)));
            }
            match merged.last_mut() {
                Some((j, acc)) if *j == i => *acc = (*acc + c) % self.p,
                _ => merged.push((i, c % self.p)),
            }
        }
        merged.retain(|&(_, c)| c != 0);
        self.rows.push(SparseRow { terms: merged, constant: constant % self.p });
        Ok(())
    }

    /// Adds a row given as a dense coefficient slice.
    pub fn push_dense_row(&mut self, coeffs: &[u64], constant: u64) -> Result<()> {
        if coeffs.len() != self.num_unknowns {
            return Err(Error::DimensionMismatch(format!(
                "dense row of length {} for {} unknowns",
                coeffs.len(),
                self.num_unknowns
            )));
        }
        let p = self.p;
        let terms: Vec<(usize, u64)> = coeffs.iter().enumerate().filter(|(_, &c)| c % p != 0).map(|(i, &c)| (i, c)).collect();
        self.push_row(terms, constant)
    }

    /// Checks a candidate assignment against every row.
    pub fn satisfied_by(&self, values: &[u64]) -> bool {
        values.len() == self.num_unknowns
            && self.rows.iter().all(|row| {
                let lhs = row.terms.iter().fold(0, |acc, &(i, c)| (acc + c * (values[i] % self.p)) % self.p);
                lhs == row.constant
            })
    }

    /// Gauss-Jordan elimination. Columns are processed left to right; within a column the
    /// pivot is the lowest-indexed remaining row with a nonzero entry.
    pub fn solve(&self) -> Solution {
        let n = self.num_unknowns;
        let width = n + 1;
        let (m, pivot_cols) = self.reduce();
        let rank = pivot_cols.len();
        if (rank..self.rows.len()).any(|r| m[r * width + n] != 0) {
            return Solution::Inconsistent { rank };
        }
        let mut values = vec![0u64; n];
        for (r, &col) in pivot_cols.iter().enumerate() {
            values[col] = m[r * width + n];
        }
        Solution::Consistent { values, rank, nullity: n - rank }
    }

    /// A basis of the solutions of the homogeneous system, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<u64>> {
        let p = self.p;
        let n = self.num_unknowns;
        let width = n + 1;
        let (m, pivot_cols) = self.reduce();
        let mut is_pivot = vec![false; n];
        for &c in &pivot_cols {
            is_pivot[c] = true;
        }
        (0..n)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![0u64; n];
                v[f] = 1;
                for (r, &col) in pivot_cols.iter().enumerate() {
                    v[col] = (p - m[r * width + f]) % p;
                }
                v
            })
            .collect()
    }

    /// Reduced row echelon form of the augmented matrix, and its pivot columns.
    fn reduce(&self) -> (Vec<u64>, Vec<usize>) {
        let p = self.p;
        let n = self.num_unknowns;
        let width = n + 1;
        let mut m: Vec<u64> = vec![0; self.rows.len() * width];
        for (r, row) in self.rows.iter().enumerate() {
            for &(i, c) in &row.terms {
                m[r * width + i] = c;
            }
            m[r * width + n] = row.constant;
        }
        let nrows = self.rows.len();
        let inverses: Vec<u64> = (0..p).map(|v| if v == 0 { 0 } else { pow_mod(v, p - 2, p) }).collect();
        let mut pivot_cols = Vec::new();
        let mut next = 0usize;
        for col in 0..n {
            if next == nrows {
                break;
            }
            let Some(pivot) = (next..nrows).find(|&r| m[r * width + col] != 0) else {
                continue;
            };
            if pivot != next {
                for k in 0..width {
                    m.swap(pivot * width + k, next * width + k);
                }
            }
            let inv = inverses[m[next * width + col] as usize];
            for k in col..width {
                m[next * width + k] = m[next * width + k] * inv % p;
            }
            let (head, tail) = m.split_at_mut(next * width);
            let (pivot_row, rest) = tail.split_at_mut(width);
            for other in head.chunks_mut(width).chain(rest.chunks_mut(width)) {
                let factor = other[col];
                if factor == 0 {
                    continue;
                }
                let neg = p - factor;
                for k in col..width {
                    if pivot_row[k] != 0 {
                        other[k] = (other[k] + neg * pivot_row[k]) % p;
                    }
                }
            }
            pivot_cols.push(col);
            next += 1;
        }
        (m, pivot_cols)
    }
}

/// Vectors over `F_p` kept in echelon form, for testing independence one vector at a time.
#[derive(Clone, Debug)]
pub struct Echelon {
    p: u64,
    rows: Vec<(usize, Vec<u64>)>,
}

impl Echelon {
    pub fn new(p: u64) -> Self {
        Echelon { p, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds `v` if it is outside the current span; returns whether it was added.
    pub fn insert(&mut self, v: &[u64]) -> bool {
        let p = self.p;
        let mut v: Vec<u64> = v.iter().map(|x| x % p).collect();
        for (pivot, row) in &self.rows {
            let c = v[*pivot];
            if c != 0 {
                for (x, &y) in v.iter_mut().zip(row) {
                    *x = (*x + (p - c) * y) % p;
                }
            }
        }
        let Some(pivot) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = pow_mod(v[pivot], p - 2, p);
        for x in &mut v {
            *x = *x * inv % p;
        }
        self.rows.push((pivot, v));
        true
    }
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{rngs::StdRng, Rng, SeedableRng};

    #[test]
    fn empty_system() {
        let sys = LinearSystemFp::new(5, 7).unwrap();
        assert_eq!(sys.solve(), Solution::Consistent { values: vec![0; 7], rank: 0, nullity: 7 });
    }

    #[test]
    fn zero_row_with_constant() {
        let mut sys = LinearSystemFp::new(3, 2).unwrap();
        sys.push_row([], 2).unwrap();
        assert!(sys.rows()[0].is_trivially_inconsistent());
        assert_eq!(sys.solve(), Solution::Inconsistent { rank: 0 });
    }

    #[test]
    fn merges_and_validates_terms() {
        let mut sys = LinearSystemFp::new(3, 2).unwrap();
        sys.push_row([(1, 2), (0, 1), (1, 1)], 4).unwrap();
        assert_eq!(sys.rows()[0], SparseRow { terms: vec![(0, 1)], constant: 1 });
        assert!(sys.push_row([(2, 1)], 0).is_err());
    }

    #[test]
    fn construct_then_solve() {
        let mut rng = StdRng::seed_from_u64(42);
        for &p in &[2u64, 3, 5, 7, 13] {
            for _ in 0..30 {
                let n = rng.gen_range(1..12);
                let rows = rng.gen_range(0..15);
                let x0: Vec<u64> = (0..n).map(|_| rng.gen_range(0..p)).collect();
                let mut sys = LinearSystemFp::new(p, n).unwrap();
                for _ in 0..rows {
                    let coeffs: Vec<u64> =
                        (0..n).map(|_| if rng.gen_bool(0.4) { rng.gen_range(0..p) } else { 0 }).collect();
                    let c = coeffs.iter().zip(&x0).fold(0, |acc, (a, b)| (acc + a * b) % p);
                    sys.push_dense_row(&coeffs, c).unwrap();
                }
                match sys.solve() {
                    Solution::Consistent { values, rank, nullity } => {
                        assert!(sys.satisfied_by(&values));
                        assert_eq!(rank + nullity, n);
                        let kernel = sys.kernel_basis();
                        assert_eq!(kernel.len(), nullity);
                        let mut span = Echelon::new(p);
                        for z in &kernel {
                            let shifted: Vec<u64> = values.iter().zip(z).map(|(a, b)| (a + b) % p).collect();
                            assert!(sys.satisfied_by(&shifted));
                            assert!(span.insert(z));
                        }
                    }
                    Solution::Inconsistent { .. } => panic!("system built from a solution must be consistent"),
                }
            }
        }
    }

    #[test]
    fn detects_inconsistency() {
        // x + y = 1, 2x + 2y = 0 over F_5
        let mut sys = LinearSystemFp::new(5, 2).unwrap();
        sys.push_row([(0, 1), (1, 1)], 1).unwrap();
        sys.push_row([(0, 2), (1, 2)], 0).unwrap();
        assert_eq!(sys.solve(), Solution::Inconsistent { rank: 1 });
    }

    #[test]
    fn deterministic_output() {
        let mut sys = LinearSystemFp::new(7, 4).unwrap();
        sys.push_row([(0, 3), (2, 5)], 1).unwrap();
        sys.push_row([(1, 1), (3, 6)], 2).unwrap();
        let a = format!("{:?}", sys.solve());
        let b = format!("{:?}", sys.clone().solve());
        assert_eq!(a, b);
    }

    #[test]
    fn echelon_rejects_dependent_vectors() {
        let mut span = Echelon::new(3);
        assert!(span.insert(&[1, 2, 0]));
        assert!(span.insert(&[0, 1, 1]));
        assert!(!span.insert(&[1, 0, 1]));
        assert!(!span.insert(&[0, 0, 0]));
        assert!(span.insert(&[0, 0, 2]));
        assert_eq!(span.rank(), 3);
    }
}
