use std::ops::Range;

use num_bigint::BigInt;

use super::diagram::Diagram;
use super::lambda::{complement_generator, lambda_model};
use crate::error::{Error, Result};
use crate::glattice::{induced_action, GLattice};
use crate::group::BlockIndex;
use crate::linalg::{FpMatrix, Subspace};
use crate::IntMatrix;

/// Lattice built from a diagram, with the data needed to inspect it inside
/// the free module `F = ⊕ F_(i)`.
#[derive(Clone, Debug)]
pub struct LatticeBuild {
    pub lattice: GLattice,
    /// Columns: basis of `U` in the coordinates of `F`.
    pub basis: IntMatrix,
    /// Action of `G` on `F`.
    pub ambient: GLattice,
    /// Coordinate range of `F_(i)` inside `F`, in canonical index order.
    pub blocks: Vec<(BlockIndex, Range<usize>)>,
    /// The map `F -> V` reduced mod p.
    pub f: FpMatrix,
}

/// `Rad(V_(i))`: zero for the trivial block, `(x - 1) V_(H)` otherwise.
pub fn radical(d: &Diagram, i: &BlockIndex) -> Subspace {
    let s = d.subspace(i);
    match i {
        BlockIndex::Zero => Subspace::zero(d.p(), d.dim()),
        BlockIndex::Sub(h) => {
            let x = d.module().element_matrix(&complement_generator(d.group(), h));
            s.image(&x.minus_identity())
        }
    }
}

/// Vectors of the reduced basis of `V_(i)` that lift a basis of its head,
/// chosen greedily.
pub fn head_lifts(d: &Diagram, i: &BlockIndex) -> Vec<Vec<u64>> {
    let mut acc = radical(d, i);
    let mut out = Vec::new();
    for v in d.subspace(i).vectors() {
        if !acc.contains_vec(&v) {
            acc = acc.sum(&Subspace::from_vectors(d.p(), d.dim(), &[v.clone()])).expect("same ambient");
            out.push(v);
        }
    }
    out
}

/// The reduced lattice of a diagram: the kernel of `F -> V`.
pub fn lattice_of(d: &Diagram) -> Result<LatticeBuild> {
    d.validate()?;
    let g = d.group().clone();
    let p = d.p();
    let dim = d.dim();
    let mut fcols: Vec<Vec<u64>> = Vec::new();
    let mut blocks = Vec::new();
    let mut models: Vec<GLattice> = Vec::new();
    for i in d.indices() {
        let start = fcols.len();
        let model = lambda_model(&g, &i)?;
        let x = match &i {
            BlockIndex::Zero => FpMatrix::identity(p, dim),
            BlockIndex::Sub(h) => d.module().element_matrix(&complement_generator(&g, h)),
        };
        for w in head_lifts(d, &i) {
            // 1, t, ..., t^(r-1) map to w, x w, ..., x^(r-1) w
            let mut v = w;
            for _ in 0..model.rank() {
                fcols.push(v.clone());
                v = x.mul_vec(&v);
            }
            models.push(model.lattice.clone());
        }
        blocks.push((i, start..fcols.len()));
    }
    let r = fcols.len();
    let f = FpMatrix::from_fn(p, dim, r, |a, b| fcols[b][a]);
    let ambient = GLattice::direct_sum_all(&g, models.iter())?;

    // kernel of F -> V: lifts of the mod-p kernel plus p at each pivot
    let (rr, pivots) = f.rref();
    if pivots.len() != dim {
        return Err(Error::Invariant(format!("F -> V has rank {} but dim V = {dim}", pivots.len())));
    }
    let pb = BigInt::from(p);
    let mut basis = IntMatrix::zeros(r, r);
    let mut col = 0;
    for j in (0..r).filter(|j| !pivots.contains(j)) {
        basis[(j, col)] = BigInt::from(1);
        for (row, &pc) in pivots.iter().enumerate() {
            basis[(pc, col)] = -BigInt::from(rr.get(row, j));
        }
        col += 1;
    }
    for &pc in &pivots {
        basis[(pc, col)] = pb.clone();
        col += 1;
    }
    let lattice = induced_action(&ambient, &basis).map_err(|e| match e {
        Error::NotStable(m) => Error::Invariant(format!("kernel of F -> V is not G-stable: {m}")),
        e => e,
    })?;
    Ok(LatticeBuild { lattice, basis, ambient, blocks, f })
}
