//! Dense matrices over `Z/p^sZ`.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};
use crate::field::ResidueRing;

/// Row-major dense matrix with entries reduced into `[0, p^s)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ResidueMatrix {
    ring: ResidueRing,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl ResidueMatrix {
    pub fn zeros(ring: ResidueRing, rows: usize, cols: usize) -> Self {
        ResidueMatrix { ring, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(ring: ResidueRing, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % ring.modulus();
        }
        m
    }

    /// Builds a matrix from row-major entries, reducing each into the ring.
    pub fn from_entries(ring: ResidueRing, rows: usize, cols: usize, entries: Vec<u64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        let data = entries.into_iter().map(|v| ring.reduce(v)).collect();
        Ok(ResidueMatrix { ring, rows, cols, data })
    }

    pub fn from_signed(ring: ResidueRing, rows: usize, cols: usize, entries: &[i64]) -> Result<Self> {
        Self::from_entries(ring, rows, cols, entries.iter().map(|&v| ring.reduce_signed(v)).collect())
    }

    pub fn from_rows(ring: ResidueRing, rows: &[Vec<u64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::from_entries(ring, r, c, rows.concat())
    }

    pub fn ring(&self) -> ResidueRing {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[u64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = self.ring.reduce(v);
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        self.data.chunks(self.cols.max(1)).map(<[u64]>::to_vec).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == u64::from(i == j) % self.ring.modulus()))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    fn check_same_ring(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch { left: self.ring.modulus(), right: other.ring.modulus() });
        }
        Ok(())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same_ring(other)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let m = self.ring.modulus();
        let mut out = vec![0u64; self.rows * other.cols];
        for i in 0..self.rows {
            let row = &mut out[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0 {
                    continue;
                }
                let rhs = &other.data[k * other.cols..(k + 1) * other.cols];
                for (acc, &b) in row.iter_mut().zip(rhs) {
                    *acc = (*acc + a * b) % m;
                }
            }
        }
        Ok(ResidueMatrix { ring: self.ring, rows: self.rows, cols: other.cols, data: out })
    }

    fn zip_with(&self, other: &Self, f: impl Fn(u64, u64) -> u64) -> Result<Self> {
        self.check_same_ring(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(ResidueMatrix { ring: self.ring, rows: self.rows, cols: self.cols, data })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let ring = self.ring;
        self.zip_with(other, |a, b| ring.add(a, b))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        let ring = self.ring;
        self.zip_with(other, |a, b| ring.sub(a, b))
    }

    pub fn scale(&self, c: u64) -> Self {
        let c = self.ring.reduce(c);
        ResidueMatrix {
            ring: self.ring,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| self.ring.mul(v, c)).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.get(i, j);
            }
        }
        out
    }

    /// Binary powering.
    pub fn pow(&self, mut exp: u64) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("power of a non-square matrix".into()));
        }
        let mut acc = Self::identity(self.ring, self.rows);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.try_mul(&base)?;
            }
            exp >>= 1;
            if exp > 0 {
                base = base.try_mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Re-reads the canonical integer entries in another ring of the same characteristic.
    ///
    /// Moving to a smaller exponent is reduction; moving to a larger one is the
    /// entry-wise lift.
    pub fn reinterpret(&self, ring: ResidueRing) -> Self {
        ResidueMatrix {
            ring,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| ring.reduce(v)).collect(),
        }
    }

    /// Inverse by Gauss-Jordan elimination; the pivot is the first row whose entry is a unit.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let ring = self.ring;
        let width = 2 * n;
        let mut work = vec![0u64; n * width];
        for i in 0..n {
            work[i * width..i * width + n].copy_from_slice(&self.data[i * n..(i + 1) * n]);
            work[i * width + n + i] = 1 % ring.modulus();
        }
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| ring.is_unit(work[r * width + col]))
                .ok_or(Error::Singular { modulus: ring.modulus() })?;
            if pivot != col {
                for k in 0..width {
                    work.swap(pivot * width + k, col * width + k);
                }
            }
            let inv = ring.inv(work[col * width + col])?;
            for k in 0..width {
                work[col * width + k] = ring.mul(work[col * width + k], inv);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = work[r * width + col];
                if factor == 0 {
                    continue;
                }
                for k in 0..width {
                    let sub = ring.mul(factor, work[col * width + k]);
                    work[r * width + k] = ring.sub(work[r * width + k], sub);
                }
            }
        }
        let data = (0..n).flat_map(|i| work[i * width + n..(i + 1) * width].to_vec()).collect();
        Ok(ResidueMatrix { ring, rows: n, cols: n, data })
    }

    /// Exact determinant over `Z/p^sZ`.
    ///
    /// Elimination pivots on the entry of least `p`-adic valuation in each column.
    /// That entry divides every other entry of the column, so each row operation
    /// is an exact determinant-preserving transvection.
    pub fn determinant(&self) -> Result<u64> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let ring = self.ring;
        let p = ring.p();
        let valuation = |mut v: u64| -> u32 {
            if v == 0 {
                return ring.s();
            }
            let mut k = 0;
            while v % p == 0 {
                v /= p;
                k += 1;
            }
            k
        };
        let mut a = self.data.clone();
        let mut det = 1 % ring.modulus();
        for col in 0..n {
            let pivot = (col..n).min_by_key(|&r| (valuation(a[r * n + col]), r)).unwrap();
            let v = valuation(a[pivot * n + col]);
            if v >= ring.s() {
                return Ok(0);
            }
            if pivot != col {
                for k in 0..n {
                    a.swap(pivot * n + k, col * n + k);
                }
                det = ring.neg(det);
            }
            let pv = a[col * n + col];
            let unit_inv = ring.inv(pv / p.pow(v))?;
            for r in col + 1..n {
                let e = a[r * n + col];
                if e == 0 {
                    continue;
                }
                let factor = ring.mul(e / p.pow(v), unit_inv);
                for k in col..n {
                    let sub = ring.mul(factor, a[col * n + k]);
                    a[r * n + k] = ring.sub(a[r * n + k], sub);
                }
            }
            det = ring.mul(det, pv);
        }
        Ok(det)
    }

    /// Least `k <= cap` with `self^k = I`; `None` when the order exceeds `cap`.
    pub fn order(&self, cap: u64) -> Result<Option<u64>> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("order of a non-square matrix".into()));
        }
        if !self.ring.is_unit(self.determinant()?) {
            return Err(Error::Singular { modulus: self.ring.modulus() });
        }
        let mut power = self.clone();
        for k in 1..=cap {
            if power.is_identity() {
                return Ok(Some(k));
            }
            power = power.try_mul(self)?;
        }
        Ok(None)
    }

    fn check_block(&self, i: usize, j: usize, r: usize) -> Result<()> {
        if r == 0 || self.rows % r != 0 || self.cols % r != 0 {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} is not divisible into {r}x{r} blocks",
                self.rows, self.cols
            )));
        }
        if i == 0 || j == 0 || i > self.rows / r || j > self.cols / r {
            return Err(Error::IndexOutOfRange(format!("block ({i},{j}) of size {r}")));
        }
        Ok(())
    }

    /// The 1-based `(i, j)` block of size `r`.
    pub fn block(&self, i: usize, j: usize, r: usize) -> Result<Self> {
        self.block_view(i, j, r).map(|v| v.to_matrix())
    }

    pub fn block_view(&self, i: usize, j: usize, r: usize) -> Result<BlockView<'_>> {
        self.check_block(i, j, r)?;
        Ok(BlockView { parent: self, block_size: r, i, j })
    }

    pub fn set_block(&mut self, i: usize, j: usize, block: &ResidueMatrix) -> Result<()> {
        let r = block.rows;
        if block.cols != r {
            return Err(Error::DimensionMismatch("blocks must be square".into()));
        }
        self.check_same_ring(block)?;
        self.check_block(i, j, r)?;
        for a in 0..r {
            for b in 0..r {
                self.data[((i - 1) * r + a) * self.cols + (j - 1) * r + b] = block.get(a, b);
            }
        }
        Ok(())
    }

    pub fn is_strictly_lower_triangular(&self) -> bool {
        (0..self.rows).all(|i| (i..self.cols).all(|j| self.get(i, j) == 0))
    }
}

/// Read-only view of one `r x r` block, 1-based indices.
#[derive(Clone, Copy, Debug)]
pub struct BlockView<'a> {
    parent: &'a ResidueMatrix,
    block_size: usize,
    i: usize,
    j: usize,
}

impl BlockView<'_> {
    pub fn get(&self, a: usize, b: usize) -> u64 {
        let r = self.block_size;
        self.parent.get((self.i - 1) * r + a, (self.j - 1) * r + b)
    }

    pub fn to_matrix(&self) -> ResidueMatrix {
        let r = self.block_size;
        let data = (0..r).flat_map(|a| (0..r).map(move |b| (a, b))).map(|(a, b)| self.get(a, b)).collect();
        ResidueMatrix { ring: self.parent.ring, rows: r, cols: r, data }
    }
}

/// Lower-triangular `n x n` matrix with `(i, j)` entry `binom(i, j)` (0-based), reduced into the ring.
pub fn pascal_matrix(n: usize, ring: ResidueRing) -> ResidueMatrix {
    let mut m = ResidueMatrix::zeros(ring, n, n);
    for i in 0..n {
        m.data[i * n] = 1 % ring.modulus();
        for j in 1..=i {
            let above = m.data[(i - 1) * n + j - 1];
            let above_right = if j < i { m.data[(i - 1) * n + j] } else { 0 };
            m.data[i * n + j] = ring.add(above, above_right);
        }
    }
    m
}

impl Mul for &ResidueMatrix {
    type Output = ResidueMatrix;

    fn mul(self, rhs: &ResidueMatrix) -> ResidueMatrix {
        self.try_mul(rhs).expect("matrix product")
    }
}

impl Add for &ResidueMatrix {
    type Output = ResidueMatrix;

    fn add(self, rhs: &ResidueMatrix) -> ResidueMatrix {
        self.try_add(rhs).expect("matrix sum")
    }
}

impl Sub for &ResidueMatrix {
    type Output = ResidueMatrix;

    fn sub(self, rhs: &ResidueMatrix) -> ResidueMatrix {
        self.try_sub(rhs).expect("matrix difference")
    }
}

impl fmt::Display for ResidueMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = (self.ring.modulus() - 1).to_string().len();
        for row in self.to_rows() {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:>width$}")).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}
