use super::diagram::Diagram;
use crate::error::{Error, Result};
use crate::fp_modules::{find_invertible, IsoOutcome};
use crate::linalg::FpMatrix;

/// Equivariant isomorphism `a -> b` carrying each `V_(i)` onto `V'_(i)`.
pub fn diagram_iso(a: &Diagram, b: &Diagram) -> Result<IsoOutcome> {
    if a.group() != b.group() {
        return Err(Error::GroupMismatch(format!("{} vs {}", a.group(), b.group())));
    }
    let none = Ok(IsoOutcome { map: None, randomized: false });
    if a.dimension_vector() != b.dimension_vector() || a.module().invariant_vector() != b.module().invariant_vector() {
        return none;
    }
    let p = a.p();
    if a.dim() == 0 {
        return Ok(IsoOutcome { map: Some(FpMatrix::zeros(p, 0, 0)), randomized: false });
    }
    let hom = a.module().hom_basis(b.module())?;
    if hom.is_empty() {
        return none;
    }
    // phi = sum t_k hom_k must satisfy q'_i phi w_i = 0 where the rows of q'_i
    // annihilate V'_(i) and the columns of w_i span V_(i)
    let mut eq_rows: Vec<Vec<u64>> = Vec::new();
    for (s, t) in a.subspaces().iter().zip(b.subspaces()) {
        if s.is_zero() {
            continue;
        }
        let ann = t.basis().kernel();
        if ann.rows() == 0 {
            continue;
        }
        let w = s.basis().transpose();
        let parts: Vec<FpMatrix> = hom.iter().map(|h| ann.mul(h).mul(&w)).collect();
        for r in 0..ann.rows() {
            for c in 0..w.cols() {
                eq_rows.push(parts.iter().map(|m| m.get(r, c)).collect());
            }
        }
    }
    let basis: Vec<FpMatrix> = if eq_rows.is_empty() {
        hom
    } else {
        let eqs = FpMatrix::from_row_vecs(p, &eq_rows, hom.len());
        let ker = eqs.kernel();
        (0..ker.rows())
            .map(|k| {
                hom.iter().enumerate().fold(FpMatrix::zeros(p, b.dim(), a.dim()), |acc, (j, h)| acc.add(&h.scale(ker.get(k, j))))
            })
            .collect()
    };
    let seed = a.module().content_seed() ^ b.module().content_seed().rotate_left(7);
    let out = find_invertible(p, &basis, seed);
    if let Some(m) = &out.map {
        debug_assert!(a.subspaces().iter().zip(b.subspaces()).all(|(s, t)| s.image(m) == *t));
    }
    Ok(out)
}

/// Checks that `m` is an isomorphism of diagrams `a -> b`.
pub fn is_diagram_iso(a: &Diagram, b: &Diagram, m: &FpMatrix) -> bool {
    m.rows() == b.dim()
        && m.cols() == a.dim()
        && m.is_invertible()
        && a.module().actions().iter().zip(b.module().actions()).all(|(x, y)| m.mul(x) == y.mul(m))
        && a.subspaces().iter().zip(b.subspaces()).all(|(s, t)| s.image(m) == *t)
}

