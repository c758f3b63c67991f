//! Permutation properties of the lattice of a diagram, read off the diagram.

use serde::Serialize;

use super::diagram::Diagram;
use crate::error::{Error, Result};
use crate::group::BlockIndex;
use crate::linalg::Subspace;

pub const TAG_PERM: &str = "perm-char";
pub const TAG_INVARIANTS: &str = "invariants-char";
pub const TAG_COINV_LATTICE: &str = "coinvariants-lattice-char";
pub const TAG_COINV_PERM: &str = "coinvariants-perm-char";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PredicateOutcome {
    pub holds: bool,
    pub tag: &'static str,
    /// Which condition failed, or a summary when all hold.
    pub detail: String,
}

fn outcome(tag: &'static str, failure: Option<String>, ok: &str) -> PredicateOutcome {
    match failure {
        Some(f) => PredicateOutcome { holds: false, tag, detail: f },
        None => PredicateOutcome { holds: true, tag, detail: ok.into() },
    }
}

fn require_subgroup(i: &BlockIndex) -> Result<()> {
    if *i == BlockIndex::Zero {
        return Err(Error::Precondition("N must be a subgroup of order p, not the trivial block".into()));
    }
    Ok(())
}

fn sum_except(d: &Diagram, skip: &[&BlockIndex], subgroups_only: bool) -> Subspace {
    let parts: Vec<&Subspace> = d
        .indices()
        .iter()
        .zip(d.subspaces())
        .filter(|(i, _)| !skip.contains(i) && !(subgroups_only && **i == BlockIndex::Zero))
        .map(|(_, s)| s)
        .collect();
    Subspace::sum_all(d.p(), d.dim(), parts)
}

fn meet(a: &Subspace, b: &Subspace) -> Subspace {
    a.intersect(b).expect("subspaces of V")
}

/// `G` acts trivially on `V`, `V_(0) = V`, and `V` is the direct sum of the `V_(H)`.
pub fn pred_perm(d: &Diagram) -> PredicateOutcome {
    let g = d.group();
    let fail = if let Some(name) = d
        .module()
        .actions()
        .iter()
        .zip(g.names())
        .find(|(a, _)| !a.is_identity())
        .map(|(_, n)| n)
    {
        Some(format!("{name} does not act trivially on V"))
    } else if d.subspace(&BlockIndex::Zero).dim() != d.dim() {
        Some("V_(0) is not all of V".into())
    } else {
        let subs: Vec<&Subspace> = d.indices().iter().zip(d.subspaces()).filter(|(i, _)| **i != BlockIndex::Zero).map(|(_, s)| s).collect();
        let total: usize = subs.iter().map(|s| s.dim()).sum();
        let span = Subspace::sum_all(d.p(), d.dim(), subs.iter().copied()).dim();
        if span != d.dim() || total != d.dim() {
            Some(format!("the V_(H) do not form a direct sum decomposition of V (dims sum to {total}, span {span})"))
        } else {
            None
        }
    };
    outcome(TAG_PERM, fail, "G acts trivially and V = V_(0) = ⊕ V_(H)")
}

/// `V_(N)^G ⊆ V_(0)`.
pub fn pred_invariants_perm(d: &Diagram, n: &BlockIndex) -> Result<PredicateOutcome> {
    require_subgroup(n)?;
    let g = d.group();
    let fixed = d.module().fixed_space(&g.whole());
    let vn_fixed = meet(d.subspace(n), &fixed);
    let ok = d.subspace(&BlockIndex::Zero).contains(&vn_fixed);
    let label = n.label(g);
    Ok(outcome(
        TAG_INVARIANTS,
        (!ok).then(|| format!("V_({label})^G (dim {}) is not contained in V_(0)", vn_fixed.dim())),
        &format!("V_({label})^G has dim {} and lies in V_(0)", vn_fixed.dim()),
    ))
}

fn aug(d: &Diagram, s: &Subspace, elems: &[Vec<u64>]) -> Subspace {
    let parts: Vec<Subspace> =
        elems.iter().map(|e| s.image(&d.module().element_matrix(e).minus_identity())).collect();
    Subspace::sum_all(d.p(), d.dim(), parts.iter())
}

/// For every `H ≠ N`, `V_(H) ∩ Σ_{K≠N,H} V_(K) ⊆ I_N V_(H)`, and `V^N ⊆ V_(0) + V_(N)`.
pub fn pred_coinvariants_lattice(d: &Diagram, n: &BlockIndex) -> Result<PredicateOutcome> {
    require_subgroup(n)?;
    let g = d.group();
    let s = n.id().unwrap().generator().to_vec();
    let label = n.label(g);
    for h in d.indices().iter().filter(|i| **i != BlockIndex::Zero && *i != n) {
        let vh = d.subspace(h);
        let lhs = meet(vh, &sum_except(d, &[n, h], true));
        if !aug(d, vh, &[s.clone()]).contains(&lhs) {
            return Ok(outcome(
                TAG_COINV_LATTICE,
                Some(format!(
                    "V_({hl}) ∩ Σ_{{K≠{label},{hl}}} V_(K) is not inside I_{label} V_({hl})",
                    hl = h.label(g)
                )),
                "",
            ));
        }
    }
    let vn_fixed = Subspace::kernel_of(&d.module().element_matrix(&s).minus_identity());
    let target = d.subspace(&BlockIndex::Zero).sum(d.subspace(n)).expect("subspaces of V");
    if !target.contains(&vn_fixed) {
        return Ok(outcome(
            TAG_COINV_LATTICE,
            Some(format!("V^{label} is not contained in V_(0) + V_({label})")),
            "",
        ));
    }
    Ok(outcome(TAG_COINV_LATTICE, None, "both conditions hold"))
}

/// Given that `U_N` is a lattice: `V_(H) ∩ Σ_{K≠H} V_(K) ⊆ I_G V_(H)` for every `H`.
pub fn pred_coinvariants_perm(d: &Diagram, n: &BlockIndex) -> Result<PredicateOutcome> {
    if !pred_coinvariants_lattice(d, n)?.holds {
        return Err(Error::Precondition(format!(
            "U_{} is not a lattice, so the permutation criterion does not apply",
            n.label(d.group())
        )));
    }
    let g = d.group();
    let gens: Vec<Vec<u64>> = (0..g.rank()).map(|i| g.generator(i)).collect();
    for h in d.indices().iter().filter(|i| **i != BlockIndex::Zero) {
        let vh = d.subspace(h);
        let lhs = meet(vh, &sum_except(d, &[h], true));
        if !aug(d, vh, &gens).contains(&lhs) {
            return Ok(outcome(
                TAG_COINV_PERM,
                Some(format!("V_({hl}) ∩ Σ_{{K≠{hl}}} V_(K) is not inside I_G V_({hl})", hl = h.label(g))),
                "",
            ));
        }
    }
    Ok(outcome(TAG_COINV_PERM, None, "containment holds for every subgroup of order p"))
}

/// `I_G V_(H)` with `I_G` generated by `n - 1` and `c - 1`.
pub fn aug_whole(d: &Diagram, s: &Subspace) -> Subspace {
    let g = d.group();
    let gens: Vec<Vec<u64>> = (0..g.rank()).map(|i| g.generator(i)).collect();
    aug(d, s, &gens)
}
