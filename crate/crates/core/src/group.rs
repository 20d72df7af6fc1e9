//! Finite matrix groups over `F_p`, enumerated by breadth-first closure.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::ResidueRing;
use crate::matrix::ResidueMatrix;

pub const DEFAULT_CLOSURE_CAP: usize = 10_000;

/// A subgroup of `GL_m(p)` with its elements in BFS order (identity first) and a full
/// Cayley table.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixGroup {
    p: u64,
    dim: usize,
    /// Row-major entries, one byte per entry.
    elements: Vec<Vec<u8>>,
    /// Positions of the generators in `elements`, in the order supplied.
    generators: Vec<usize>,
    /// `cayley[i * order + j] = index(e_i * e_j)`.
    cayley: Vec<u32>,
    inverses: Vec<usize>,
    /// BFS tree: `tree[y] = (x, k)` with `y = x * generator_k`; `None` at the identity.
    tree: Vec<Option<(usize, usize)>>,
    #[serde(skip)]
    index: HashMap<Vec<u8>, usize>,
}

fn encode(m: &ResidueMatrix) -> Vec<u8> {
    m.entries().iter().map(|&v| v as u8).collect()
}

fn mul_bytes(a: &[u8], b: &[u8], dim: usize, p: u32) -> Vec<u8> {
    let mut out = vec![0u8; dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            let mut acc = 0u32;
            for k in 0..dim {
                acc += u32::from(a[i * dim + k]) * u32::from(b[k * dim + j]);
            }
            out[i * dim + j] = (acc % p) as u8;
        }
    }
    out
}

impl MatrixGroup {
    /// Closes `generators` under multiplication. Identity is element 0.
    pub fn close(generators: &[ResidueMatrix], cap: usize) -> Result<Self> {
        let first = generators.first().ok_or_else(|| Error::InvalidParameter("no generators".into()))?;
        let ring = first.ring();
        if ring.s() != 1 || ring.p() > u64::from(u8::MAX) {
            return Err(Error::InvalidParameter("group closure works over F_p with p < 256".into()));
        }
        let dim = first.rows();
        for g in generators {
            if g.ring() != ring || g.rows() != dim || g.cols() != dim {
                return Err(Error::DimensionMismatch("generators must share ring and size".into()));
            }
            if !ring.is_unit(g.determinant()?) {
                return Err(Error::Singular { modulus: ring.modulus() });
            }
        }
        let p = ring.p() as u32;
        let gens: Vec<Vec<u8>> = generators.iter().map(encode).collect();
        let identity = encode(&ResidueMatrix::identity(ring, dim));

        let mut elements = vec![identity.clone()];
        let mut index = HashMap::from([(identity, 0usize)]);
        let mut tree = vec![None];
        let mut head = 0;
        while head < elements.len() {
            for (k, g) in gens.iter().enumerate() {
                let y = mul_bytes(&elements[head], g, dim, p);
                if !index.contains_key(&y) {
                    if elements.len() >= cap {
                        return Err(Error::ClosureCapExceeded { cap });
                    }
                    index.insert(y.clone(), elements.len());
                    elements.push(y);
                    tree.push(Some((head, k)));
                }
            }
            head += 1;
        }

        let order = elements.len();
        let mut cayley = vec![0u32; order * order];
        for i in 0..order {
            for j in 0..order {
                let prod = mul_bytes(&elements[i], &elements[j], dim, p);
                cayley[i * order + j] = index[&prod] as u32;
            }
        }
        let inverses = (0..order)
            .map(|i| (0..order).find(|&j| cayley[i * order + j] == 0).expect("finite group"))
            .collect();
        let generators = gens.iter().map(|g| index[g]).collect();
        Ok(MatrixGroup { p: ring.p(), dim, elements, generators, cayley, inverses, tree, index })
    }

    /// Restores the lookup index after deserialisation and checks the stored table.
    pub fn rehydrate(mut self) -> Result<Self> {
        self.index = self.elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let n = self.elements.len();
        if self.index.len() != n || self.cayley.len() != n * n || self.inverses.len() != n || self.tree.len() != n {
            return Err(Error::Invariant("inconsistent group table".into()));
        }
        Ok(self)
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ring(&self) -> ResidueRing {
        ResidueRing::prime_field(self.p).expect("validated at construction")
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn encoding(&self, i: usize) -> &[u8] {
        &self.elements[i]
    }

    pub fn element(&self, i: usize) -> ResidueMatrix {
        ResidueMatrix::from_entries(
            self.ring(),
            self.dim,
            self.dim,
            self.elements[i].iter().map(|&v| u64::from(v)).collect(),
        )
        .expect("stored with the right length")
    }

    pub fn index_of(&self, m: &ResidueMatrix) -> Option<usize> {
        self.index.get(&encode(m)).copied()
    }

    #[inline]
    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.cayley[i * self.order() + j] as usize
    }

    pub fn inverse(&self, i: usize) -> usize {
        self.inverses[i]
    }

    pub fn tree_edge(&self, i: usize) -> Option<(usize, usize)> {
        self.tree[i]
    }

    /// Multiplicative order of element `i`.
    pub fn element_order(&self, i: usize) -> usize {
        let mut k = 1;
        let mut x = i;
        while x != 0 {
            x = self.mul(x, i);
            k += 1;
        }
        k
    }

    /// Checks closure, identity, inverses and associativity on the stored table.
    pub fn verify_table(&self) -> bool {
        let n = self.order();
        let identity_ok = (0..n).all(|i| self.mul(i, 0) == i && self.mul(0, i) == i);
        let inverse_ok = (0..n).all(|i| self.mul(i, self.inverse(i)) == 0 && self.mul(self.inverse(i), i) == 0);
        let closure_ok = self.cayley.iter().all(|&c| (c as usize) < n);
        let gens_ok = self.generators.iter().all(|&g| g < n);
        identity_ok && inverse_ok && closure_ok && gens_ok
    }
}

/// Closure of `generators` with the default cap.
pub fn close_group(generators: &[ResidueMatrix]) -> Result<MatrixGroup> {
    MatrixGroup::close(generators, DEFAULT_CLOSURE_CAP)
}
