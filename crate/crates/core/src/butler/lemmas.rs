//! Statements about `U` inside `F = ⊕ F_(i)` that link the lattice of a
//! diagram to the diagram, checked in the coordinates produced by
//! [`lattice_of`](super::build::lattice_of).

use super::build::LatticeBuild;
use super::diagram::Diagram;
use crate::error::Result;
use crate::glattice::{aug_image, fixed_points};
use crate::group::{BlockIndex, Subgroup};
use crate::linalg::{int_kernel, same_span, span_contains, FpMatrix, Subspace};
use crate::IntMatrix;

/// An inclusion of lattices and whether it is an equality.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Inclusion {
    pub holds: bool,
    pub equal: bool,
}

fn inclusion(small: &IntMatrix, big: &IntMatrix) -> Inclusion {
    let holds = span_contains(big, small);
    Inclusion { holds, equal: holds && span_contains(small, big) }
}

fn coords(b: &LatticeBuild, keep: impl Fn(&BlockIndex) -> bool) -> Vec<usize> {
    b.blocks.iter().filter(|(i, _)| keep(i)).flat_map(|(_, r)| r.clone()).collect()
}

/// `U ∩ ⊕_{i kept} F_(i)` as columns in the coordinates of `F`.
pub fn meet_blocks(b: &LatticeBuild, keep: impl Fn(&BlockIndex) -> bool) -> IntMatrix {
    let kept = coords(b, keep);
    let others: Vec<usize> = (0..b.basis.rows()).filter(|r| !kept.contains(r)).collect();
    if others.is_empty() {
        return b.basis.clone();
    }
    let k = int_kernel(&b.basis.select_rows(&others));
    &b.basis * &k
}

/// `U^N = U ∩ (F_(0) ⊕ F_(N))`.
pub fn invariants_in_blocks(b: &LatticeBuild, n: &BlockIndex) -> Result<bool> {
    let g = b.lattice.group();
    let ns = n.subgroup(g).unwrap_or_else(|| Subgroup::trivial(g));
    let fixed = &b.basis * &fixed_points(&b.lattice, &ns)?.basis;
    Ok(same_span(&fixed, &meet_blocks(b, |i| *i == BlockIndex::Zero || i == n)))
}

/// `I_N U ⊆ U ∩ ⊕_{H≠N} F_(H)`.
pub fn coinvariants_upstairs(b: &LatticeBuild, n: &BlockIndex) -> Result<Inclusion> {
    let g = b.lattice.group();
    let ns = n.subgroup(g).unwrap_or_else(|| Subgroup::trivial(g));
    let img = &b.basis * &aug_image(&b.lattice, &ns)?.basis;
    Ok(inclusion(&img, &meet_blocks(b, |i| *i != BlockIndex::Zero && i != n)))
}

/// `I_G U ⊆ U ∩ ⊕_H F_(H)`.
pub fn perm_upstairs(b: &LatticeBuild) -> Result<Inclusion> {
    let g = b.lattice.group();
    let img = &b.basis * &aug_image(&b.lattice, &g.whole())?.basis;
    Ok(inclusion(&img, &meet_blocks(b, |i| *i != BlockIndex::Zero)))
}

/// Image of `U ∩ ⊕_{i∈B∪{a}} F_(i)` under `Σ x_i ↦ f(x_a)`, and the target
/// `V_(a) ∩ Σ_{i∈B} V_(i)`.
pub fn component_image(b: &LatticeBuild, d: &Diagram, a: &BlockIndex, set: &[BlockIndex]) -> (Subspace, Subspace) {
    let p = d.p();
    let m = meet_blocks(b, |i| i == a || set.contains(i));
    let ac = coords(b, |i| i == a);
    let mm = FpMatrix::from_int(p, &m);
    let xa = FpMatrix::from_fn(p, mm.rows(), mm.cols(), |r, c| if ac.contains(&r) { mm.get(r, c) } else { 0 });
    let image = Subspace::col_span(&b.f.mul(&xa));
    let sum = Subspace::sum_all(p, d.dim(), set.iter().map(|i| d.subspace(i)));
    let target = d.subspace(a).intersect(&sum).expect("subspaces of V");
    (image, target)
}
