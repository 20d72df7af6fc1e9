//! Entry identities for powers of `a0 = P - I`, `P` the lower-triangular Pascal matrix.
//!
//! Everything here is computed over the integers so factorials are compared exactly.

use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};

type IntMatrix = Vec<Vec<BigInt>>;

fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    (0..k).fold(BigInt::from(1), |acc, i| acc * (n - i) / (i + 1))
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, i| acc * i)
}

/// `P - I` for the `n x n` Pascal matrix, over `Z`.
pub fn pascal_nilpotent(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if j < i { binomial(i as u64, j as u64) } else { BigInt::from(0) })
                .collect()
        })
        .collect()
}

fn int_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).sum()).collect())
        .collect()
}

fn int_pow(a: &IntMatrix, exp: usize) -> IntMatrix {
    let n = a.len();
    let mut acc: IntMatrix = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from(u8::from(i == j))).collect())
        .collect();
    for _ in 0..exp {
        acc = int_mul(&acc, a);
    }
    acc
}

/// One checked identity: a 1-based matrix entry of `a0^power` against its claimed value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntryCheck {
    pub identity: &'static str,
    pub power: usize,
    pub row: usize,
    pub col: usize,
    pub expected: BigInt,
    pub actual: BigInt,
}

impl EntryCheck {
    pub fn passed(&self) -> bool {
        self.expected == self.actual
    }
}

impl fmt::Display for EntryCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: (a0^{})[{},{}] = {} (expected {})",
            if self.passed() { "PASS" } else { "FAIL" },
            self.identity,
            self.power,
            self.row,
            self.col,
            self.actual,
            self.expected
        )
    }
}

#[derive(Clone, Debug)]
pub struct PascalReport {
    pub n: usize,
    pub ell: usize,
    pub checks: Vec<EntryCheck>,
}

impl PascalReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(EntryCheck::passed)
    }

    /// The three headline identities (vanishing checks excluded).
    pub fn headline(&self) -> impl Iterator<Item = &EntryCheck> {
        self.checks.iter().filter(|c| !c.identity.ends_with("-zero"))
    }
}

/// Checks, for `a0 = P - I` of size `n` and `1 <= ell <= n - 2`:
///
/// * `(a0^ell)[ell+1, 1] = ell!`, and `(a0^ell)[j, 1] = 0` for `j <= ell`;
/// * `(a0^ell)[ell+2, 2] = (ell+1)!`, and `(a0^ell)[j, 2] = 0` for `j <= ell + 1`;
/// * `(a0^ell)[ell+2, 1] = binom(ell+1, ell-1) * ell!`, and `(a0^(ell-1))[j, 2] = 0` for `j < ell + 1`.
pub fn pascal_lemma_check(n: usize, ell: usize) -> Result<PascalReport> {
    if ell == 0 || ell + 2 > n {
        return Err(Error::IndexOutOfRange(format!("need 1 <= ell <= n - 2, got n = {n}, ell = {ell}")));
    }
    let a0 = pascal_nilpotent(n);
    let prev = int_pow(&a0, ell - 1);
    let pow = int_mul(&prev, &a0);
    let l = ell as u64;
    let mut checks = Vec::new();
    let mut check = |identity, power: usize, m: &IntMatrix, row: usize, col: usize, expected: BigInt| {
        checks.push(EntryCheck { identity, power, row, col, expected, actual: m[row - 1][col - 1].clone() });
    };

    check("part1", ell, &pow, ell + 1, 1, factorial(l));
    for j in 1..=ell {
        check("part1-zero", ell, &pow, j, 1, BigInt::from(0));
    }
    check("part2", ell, &pow, ell + 2, 2, factorial(l + 1));
    for j in 1..=ell + 1 {
        check("part2-zero", ell, &pow, j, 2, BigInt::from(0));
    }
    check("part3", ell, &pow, ell + 2, 1, binomial(l + 1, l - 1) * factorial(l));
    for j in 1..ell + 1 {
        check("part3-zero", ell - 1, &prev, j, 2, BigInt::from(0));
    }
    Ok(PascalReport { n, ell, checks })
}
