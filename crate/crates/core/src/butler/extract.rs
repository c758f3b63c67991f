use num_bigint::BigInt;
use num_integer::Integer;

use super::build::lattice_of;
use super::diagram::Diagram;
use crate::algebra::{act, scaled_idempotents};
use crate::error::{Error, Result};
use crate::fp_modules::FpModule;
use crate::glattice::GLattice;
use crate::group::BlockIndex;
use crate::linalg::{column_basis, int_solve, FpMatrix, Subspace};
use crate::IntMatrix;

/// A lattice together with its idempotent components and diagram.
///
/// Coordinates are scaled by `p^2`: `U` is `p^2 Z^n`, so every component
/// `e_i U` is integral.
#[derive(Clone, Debug)]
pub struct DiagramExtraction {
    pub lattice: GLattice,
    /// Basis of `p^2 e_i U` for each index in canonical order.
    pub components: Vec<(BlockIndex, IntMatrix)>,
    /// Basis of `p^2 U_*`.
    pub star: IntMatrix,
    pub diagram: Diagram,
    /// Map from `U_*`-coordinates to `V`.
    pub projection: FpMatrix,
}

fn require_rank_two(lat: &GLattice) -> Result<()> {
    if lat.group().rank() != 2 {
        return Err(Error::Unsupported(format!("diagrams are defined for C_p x C_p, got {}", lat.group())));
    }
    Ok(())
}

/// Computes `V = U_*/U` and `V_(i) = (U_(i) + U)/U`.
///
/// Fails with `NotReduced` when `U_*/U` is not elementary abelian, and with
/// `strict` also when `U = U_*` or `U = p U_*`.
pub fn diagram_of(lat: &GLattice, strict: bool) -> Result<DiagramExtraction> {
    require_rank_two(lat)?;
    lat.validate()?;
    let g = lat.group().clone();
    let p = g.p();
    let n = lat.rank();
    let pb = BigInt::from(p);
    let mut components = Vec::new();
    let mut total_rank = 0;
    for (i, e) in scaled_idempotents(&g)? {
        let m = act(&e, lat)?;
        let b = column_basis(&m);
        total_rank += b.cols();
        components.push((i, b));
    }
    if total_rank != n {
        return Err(Error::DirectnessViolation);
    }
    let refs: Vec<&IntMatrix> = components.iter().map(|(_, b)| b).collect();
    let star = column_basis(&IntMatrix::hstack(&refs, n));
    if star.data().iter().any(|x| !x.is_multiple_of(&pb)) {
        return Err(Error::NotReduced(
            "U_*/U is not elementary abelian (free-summand symptom)".into(),
        ));
    }
    let p2 = IntMatrix::identity(n).scale(&BigInt::from(p * p));
    let coords = int_solve(&star, &p2).map_err(|_| Error::Invariant("U is not contained in U_*".into()))?;
    // rows: reduced basis of the annihilator of U in U_* / p U_*
    let (proj, pivots) = Subspace::row_span(&FpMatrix::from_int(p, &coords).transpose().kernel()).basis().rref();
    let d = proj.rows();
    if strict && d == 0 {
        return Err(Error::NotReduced("U = U_* (sum of its idempotent components)".into()));
    }
    if strict && d == n {
        return Err(Error::NotReduced("U = p U_*".into()));
    }
    let section = FpMatrix::from_fn(p, n, d, |i, j| u64::from(i == pivots[j]));
    // proj is in reduced form with identity at the pivots, so proj * section = I
    debug_assert!(proj.mul(&section).is_identity());
    let mut actions = Vec::new();
    for a in lat.actions() {
        let a_star = int_solve(&star, &(a * &star))
            .map_err(|_| Error::Invariant("U_* is not G-stable".into()))?;
        actions.push(proj.mul(&FpMatrix::from_int(p, &a_star)).mul(&section));
    }
    let module = FpModule::new(g.clone(), d, actions)?;
    let mut subspaces = Vec::new();
    for (_, b) in &components {
        let c = int_solve(&star, b).map_err(|_| Error::Invariant("component outside U_*".into()))?;
        subspaces.push(Subspace::col_span(&proj.mul(&FpMatrix::from_int(p, &c))));
    }
    let diagram = Diagram::new(module, subspaces)?;
    Ok(DiagramExtraction { lattice: lat.clone(), components, star, diagram, projection: proj })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedReport {
    pub reduced: bool,
    pub reason: Option<String>,
}

/// Reduced means: `U_*/U` elementary abelian, the extracted tuple a valid
/// diagram, and its lattice of the same rank as `U`.
pub fn is_reduced(lat: &GLattice) -> Result<ReducedReport> {
    require_rank_two(lat)?;
    let no = |r: String| Ok(ReducedReport { reduced: false, reason: Some(r) });
    if lat.rank() == 0 {
        return Ok(ReducedReport { reduced: true, reason: None });
    }
    let ex = match diagram_of(lat, false) {
        Ok(ex) => ex,
        Err(Error::NotReduced(r)) => return no(r),
        Err(e) => return Err(e),
    };
    let v = ex.diagram.violations();
    if !v.is_empty() {
        return no(format!("extracted tuple is not a diagram ({}); Λ-summand symptom", v.join("; ")));
    }
    let rank = lattice_of(&ex.diagram)?.lattice.rank();
    if rank != lat.rank() {
        return no(format!("rank drops from {} to {rank} on reconstruction (Λ-summand symptom)", lat.rank()));
    }
    if ex.diagram.dim() == 0 || ex.diagram.dim() == lat.rank() {
        return no("inclusions p U_* ⊆ U ⊆ U_* are not both strict".into());
    }
    Ok(ReducedReport { reduced: true, reason: None })
}
