//! The same permutation questions answered on the diagram and on the lattice.

use serde::Serialize;

use super::build::lattice_of;
use super::diagram::Diagram;
use super::extract::diagram_of;
use super::iso::{diagram_iso, is_diagram_iso};
use super::predicates::{pred_coinvariants_lattice, pred_coinvariants_perm, pred_invariants_perm, pred_perm};
use crate::error::{Error, Result};
use crate::glattice::{coinvariants, fixed_points, is_perm_cyclic, is_perm_recursive, GLattice, Verdict};
use crate::group::BlockIndex;

/// One question with its answer on each side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RouteComparison {
    pub question: &'static str,
    pub diagram: Option<bool>,
    pub lattice: Verdict,
    pub diagram_tag: &'static str,
    pub lattice_tag: &'static str,
}

impl RouteComparison {
    /// Disagreement only counts when both routes answered.
    pub fn agrees(&self) -> bool {
        match (self.diagram, self.lattice) {
            (Some(d), Verdict::Yes) => d,
            (Some(d), Verdict::No) => !d,
            _ => true,
        }
    }
}

pub const Q_INVARIANTS: &str = "U^N permutation";
pub const Q_COINV_LATTICE: &str = "U_N lattice";
pub const Q_COINV_PERM: &str = "U_N permutation";
pub const Q_PERM: &str = "U permutation";

/// Matrix-level answers for a lattice of `C_p x C_p` and `N`, in the order
/// invariants, coinvariants lattice, coinvariants permutation, whole lattice.
pub fn lattice_route(lat: &GLattice, n: &BlockIndex) -> Result<[Verdict; 4]> {
    let g = lat.group();
    let ns = n.subgroup(g).ok_or_else(|| Error::Precondition("N must be a subgroup of order p".into()))?;
    let fixed = fixed_points(lat, &ns)?;
    let (_, inv_q) = fixed.induced.restrict_to_quotient(&ns)?;
    let inv = is_perm_cyclic(&inv_q)?.verdict;
    let co = coinvariants(lat, &ns)?;
    let co_lat = Verdict::from_bool(co.is_lattice());
    let co_perm = match &co.lattice {
        Some(l) => is_perm_cyclic(&l.restrict_to_quotient(&ns)?.1)?.verdict,
        None => Verdict::No,
    };
    let whole = is_perm_recursive(lat, &ns)?.verdict;
    Ok([inv, co_lat, co_perm, whole])
}

/// Compares each diagram predicate with its lattice counterpart on
/// `lattice_of(d)`.
pub fn compare_routes(d: &Diagram, lat: &GLattice, n: &BlockIndex) -> Result<Vec<RouteComparison>> {
    let m = lattice_route(lat, n)?;
    let inv = pred_invariants_perm(d, n)?;
    let cl = pred_coinvariants_lattice(d, n)?;
    let cp = if cl.holds { Some(pred_coinvariants_perm(d, n)?) } else { None };
    let pp = pred_perm(d);
    let row = |question, diagram, lattice, diagram_tag, lattice_tag| RouteComparison {
        question,
        diagram,
        lattice,
        diagram_tag,
        lattice_tag,
    };
    use crate::glattice::{TAG_CYCLIC, TAG_RECURSIVE};
    Ok(vec![
        row(Q_INVARIANTS, Some(inv.holds), m[0], inv.tag, TAG_CYCLIC),
        row(Q_COINV_LATTICE, Some(cl.holds), m[1], cl.tag, "coinvariant-torsion"),
        row(Q_COINV_PERM, cp.as_ref().map(|o| o.holds), m[2], super::predicates::TAG_COINV_PERM, TAG_CYCLIC),
        row(Q_PERM, Some(pp.holds), m[3], pp.tag, TAG_RECURSIVE),
    ])
}

#[derive(Clone, Debug)]
pub struct RoundTrip {
    /// `diagram_of(lattice_of(d))` is isomorphic to `d`.
    pub diagram_iso: bool,
    pub lattice_rank: usize,
    /// Rank of `lattice_of(diagram_of(lattice_of(d)))`.
    pub rebuilt_rank: usize,
}

impl RoundTrip {
    pub fn ok(&self) -> bool {
        self.diagram_iso && self.lattice_rank == self.rebuilt_rank
    }
}

pub fn round_trip(d: &Diagram) -> Result<RoundTrip> {
    let b = lattice_of(d)?;
    let ex = diagram_of(&b.lattice, true)?;
    let found = diagram_iso(d, &ex.diagram)?;
    let iso = found.map.as_ref().is_some_and(|m| is_diagram_iso(d, &ex.diagram, m));
    let rebuilt = lattice_of(&ex.diagram)?;
    Ok(RoundTrip { diagram_iso: iso, lattice_rank: b.lattice.rank(), rebuilt_rank: rebuilt.lattice.rank() })
}
