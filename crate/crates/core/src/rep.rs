//! Representations of a stored matrix group over `Z/p^kZ`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::ResidueRing;
use crate::group::MatrixGroup;
use crate::linsys::LinearSystemFp;
use crate::matrix::ResidueMatrix;

/// A group together with one image matrix per element, at level `p^k`.
#[derive(Clone, Debug)]
pub struct ModularRep {
    group: Arc<MatrixGroup>,
    ring: ResidueRing,
    images: Vec<ResidueMatrix>,
}

impl ModularRep {
    /// The tautological representation of a group of `F_p`-matrices.
    pub fn tautological(group: Arc<MatrixGroup>) -> Self {
        let images = (0..group.order()).map(|i| group.element(i)).collect();
        ModularRep { ring: group.ring(), group, images }
    }

    pub fn new(group: Arc<MatrixGroup>, ring: ResidueRing, images: Vec<ResidueMatrix>) -> Result<Self> {
        if images.len() != group.order() {
            return Err(Error::DimensionMismatch(format!(
                "{} images for a group of order {}",
                images.len(),
                group.order()
            )));
        }
        if ring.p() != group.p() {
            return Err(Error::RingMismatch { left: ring.modulus(), right: group.p() });
        }
        if images.iter().any(|m| m.ring() != ring || m.rows() != group.dim() || m.cols() != group.dim()) {
            return Err(Error::DimensionMismatch("image of the wrong shape or ring".into()));
        }
        Ok(ModularRep { group, ring, images })
    }

    pub fn group(&self) -> &Arc<MatrixGroup> {
        &self.group
    }

    pub fn ring(&self) -> ResidueRing {
        self.ring
    }

    /// The exponent `k` of the coefficient ring `Z/p^kZ`.
    pub fn level(&self) -> u32 {
        self.ring.s()
    }

    pub fn dim(&self) -> usize {
        self.group.dim()
    }

    pub fn images(&self) -> &[ResidueMatrix] {
        &self.images
    }

    pub fn image(&self, g: usize) -> &ResidueMatrix {
        &self.images[g]
    }

    pub fn generator_images(&self) -> Vec<ResidueMatrix> {
        self.group.generators().iter().map(|&g| self.images[g].clone()).collect()
    }

    /// `images[g] * images[h] == images[gh]` for every pair, and the identity maps to `I`.
    pub fn is_homomorphism(&self) -> bool {
        let n = self.group.order();
        self.images[self.group.identity()].is_identity()
            && (0..n).all(|g| (0..n).all(|h| &self.images[g] * &self.images[h] == self.images[self.group.mul(g, h)]))
    }

    /// Every image reduces mod `p` to the stored group element.
    pub fn reduces_to_group(&self) -> bool {
        let fp = self.group.ring();
        self.images.iter().enumerate().all(|(g, m)| m.reinterpret(fp) == self.group.element(g))
    }

    /// `g -> (M(g)^-1)^T` at the same level, over the same group.
    pub fn dual(&self) -> Result<Self> {
        let images = self.images.iter().map(|m| Ok(m.inverse()?.transpose())).collect::<Result<Vec<_>>>()?;
        Ok(ModularRep { group: Arc::clone(&self.group), ring: self.ring, images })
    }
}

/// Is the row space of `basis` stable under every generator image (row-vector action)?
pub fn invariant_subspace_check(generators: &[ResidueMatrix], basis: &[Vec<u64>]) -> Result<bool> {
    let Some(first) = generators.first() else {
        return Ok(true);
    };
    let ring = first.ring();
    if ring.s() != 1 {
        return Err(Error::InvalidParameter("subspace checks work over F_p".into()));
    }
    let dim = first.rows();
    if basis.iter().any(|v| v.len() != dim) {
        return Err(Error::DimensionMismatch(format!("vectors must have length {dim}")));
    }
    let rank = |vectors: &[Vec<u64>]| -> Result<usize> {
        let mut sys = LinearSystemFp::new(ring.p(), dim)?;
        for v in vectors {
            sys.push_dense_row(v, 0)?;
        }
        Ok(sys.solve().rank())
    };
    let base_rank = rank(basis)?;
    for g in generators {
        for v in basis {
            let row = ResidueMatrix::from_entries(ring, 1, dim, v.clone())?;
            let image = row.try_mul(g)?.entries().to_vec();
            let mut extended = basis.to_vec();
            extended.push(image);
            if rank(&extended)? != base_rank {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
