use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::{coinvariants, fixed_points, quotient_lattice, GLattice};
use crate::error::{Error, Result};
use crate::fp_modules::{fp_is_permutation, FpModule};
use crate::group::{GroupSpec, Subgroup};
use crate::linalg::FpMatrix;

/// Largest rank for which orbit-type multisets are enumerated.
pub const RANK_CAP: usize = 64;

pub const TAG_CYCLIC: &str = "cyclic-coinvariant-criterion";
pub const TAG_RECURSIVE: &str = "recursive-perm-criterion";
pub const TAG_RANKS: &str = "fixed-rank-orbit-count";

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
    Inconclusive,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// `multiplicity` copies of the permutation module on `G/stabilizer`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct OrbitType {
    pub stabilizer: String,
    pub multiplicity: usize,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct PermReport {
    pub verdict: Verdict,
    /// Claimed orbit types when the verdict is yes (or a candidate when the
    /// check is one-sided).
    pub decomposition: Option<Vec<OrbitType>>,
    /// Violated criterion when the verdict is no.
    pub failed: Option<String>,
    pub trail: Vec<String>,
    /// Set when some search ran out of its random-trial budget.
    pub randomized: bool,
}

impl PermReport {
    pub fn yes(decomposition: Vec<OrbitType>, trail: Vec<String>) -> Self {
        PermReport { verdict: Verdict::Yes, decomposition: Some(decomposition), failed: None, trail, randomized: false }
    }

    pub fn no(failed: impl Into<String>, trail: Vec<String>) -> Self {
        PermReport { verdict: Verdict::No, decomposition: None, failed: Some(failed.into()), trail, randomized: false }
    }

    pub fn is_yes(&self) -> bool {
        self.verdict == Verdict::Yes
    }
}

/// Multiplicities of the trivial, free and augmentation-ideal summands of a
/// `Z C_p`-lattice.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize)]
pub struct HellerReinerType {
    pub a: usize,
    pub b: usize,
    pub c: usize,
}

impl std::ops::Add for HellerReinerType {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        HellerReinerType { a: self.a + o.a, b: self.b + o.b, c: self.c + o.c }
    }
}

fn require_cyclic(lat: &GLattice) -> Result<()> {
    if lat.group().rank() != 1 {
        return Err(Error::Unsupported(format!("expected a cyclic group, got {}", lat.group())));
    }
    Ok(())
}

pub fn cyclic_type(lat: &GLattice) -> Result<HellerReinerType> {
    require_cyclic(lat)?;
    let g = lat.group();
    let p = g.p() as usize;
    let co = coinvariants(lat, &g.whole())?;
    let pb = BigInt::from(p);
    if co.structure.torsion.iter().any(|d| d != &pb) {
        return Err(Error::Invariant(format!("coinvariant torsion {:?} is not elementary p", co.structure.torsion)));
    }
    let c = co.structure.torsion.len();
    let f = fixed_points(lat, &g.whole())?.rank();
    let n = lat.rank();
    // a + b = f and a + p b + (p-1) c = n
    let rest = n as i64 - ((p - 1) * c) as i64 - f as i64;
    if rest < 0 || rest % (p as i64 - 1) != 0 {
        return Err(Error::Invariant(format!("no summand type fits rank {n}, fixed rank {f}, torsion count {c}")));
    }
    let b = (rest / (p as i64 - 1)) as usize;
    if b > f {
        return Err(Error::Invariant(format!("negative trivial multiplicity (rank {n}, fixed rank {f})")));
    }
    let t = HellerReinerType { a: f - b, b, c };
    if co.structure.free_rank != t.a + t.b {
        return Err(Error::Invariant(format!("coinvariant rank {} disagrees with type {t:?}", co.structure.free_rank)));
    }
    Ok(t)
}

/// A `Z C_p`-lattice is a permutation lattice iff its coinvariants are torsion-free.
pub fn is_perm_cyclic(lat: &GLattice) -> Result<PermReport> {
    require_cyclic(lat)?;
    let g = lat.group();
    let co = coinvariants(lat, &g.whole())?;
    if !co.is_lattice() {
        let msg = format!("{TAG_CYCLIC}: coinvariants have torsion {:?}", to_u64s(&co.structure.torsion));
        return Ok(PermReport::no(msg.clone(), vec![msg]));
    }
    let t = cyclic_type(lat)?;
    let mut dec = Vec::new();
    if t.a > 0 {
        dec.push(OrbitType { stabilizer: "G".into(), multiplicity: t.a });
    }
    if t.b > 0 {
        dec.push(OrbitType { stabilizer: "1".into(), multiplicity: t.b });
    }
    Ok(PermReport::yes(dec, vec![format!("{TAG_CYCLIC}: coinvariants torsion-free, type ({}, {}, 0)", t.a, t.b)]))
}

fn to_u64s(v: &[BigInt]) -> Vec<u64> {
    v.iter().map(|d| d.to_u64().unwrap_or(u64::MAX)).collect()
}

/// Dispatches on the group: the coinvariant test for cyclic groups and the
/// recursive test through the first generator otherwise.
pub fn is_perm(lat: &GLattice) -> Result<PermReport> {
    let g = lat.group();
    match g.rank() {
        0 => Ok(PermReport::yes(vec![OrbitType { stabilizer: "G".into(), multiplicity: lat.rank() }], vec![])),
        1 => is_perm_cyclic(lat),
        _ => is_perm_recursive(lat, &Subgroup::from_generators(g, &[g.generator(0)])),
    }
}

/// Decides whether `lat` is a permutation lattice by recursing through the
/// order-p subgroup `n`: `U` is a permutation lattice iff `U^N` and `U_N`
/// are permutation `G/N`-lattices and `(U/U^N)_N` is a permutation
/// `F_p[G/N]`-module.
pub fn is_perm_recursive(lat: &GLattice, n: &Subgroup) -> Result<PermReport> {
    let g = lat.group().clone();
    if n.dim() != 1 {
        return Err(Error::Precondition(format!("subgroup {} does not have order p", n.describe(&g))));
    }
    if !n.is_subgroup_of(&g.whole()) || n.generators()[0].len() != g.rank() {
        return Err(Error::GroupMismatch(format!("subgroup does not live in {g}")));
    }
    if g.rank() == 1 {
        return is_perm_cyclic(lat);
    }
    let nname = n.describe(&g);
    let mut trail = Vec::new();
    let mut failures = Vec::new();
    let mut randomized = false;

    let fix = fixed_points(lat, n)?;
    let (_, fix_q) = fix.induced.restrict_to_quotient(n)?;
    let r1 = is_perm(&fix_q)?;
    randomized |= r1.randomized;
    trail.push(format!("U^N (N = {nname}, rank {}): {}", fix.rank(), r1.verdict.as_str()));
    trail.extend(r1.trail.iter().map(|t| format!("  {t}")));
    if r1.verdict == Verdict::No {
        failures.push(format!("U^N is not a permutation lattice ({})", r1.failed.clone().unwrap_or_default()));
    }

    let co = coinvariants(lat, n)?;
    let r2 = match &co.lattice {
        None => PermReport::no(
            format!("U_N has torsion {:?}", to_u64s(&co.structure.torsion)),
            vec![],
        ),
        Some(l) => is_perm(&l.restrict_to_quotient(n)?.1)?,
    };
    randomized |= r2.randomized;
    trail.push(format!("U_N (rank {}): {}", co.structure.free_rank, r2.verdict.as_str()));
    trail.extend(r2.trail.iter().map(|t| format!("  {t}")));
    if r2.verdict == Verdict::No {
        failures.push(format!("U_N is not a permutation lattice ({})", r2.failed.clone().unwrap_or_default()));
    }

    let w = quotient_lattice(lat, &fix.basis)?;
    let module = torsion_module(&w, n)?;
    let r3 = fp_is_permutation(&module)?;
    randomized |= r3.randomized;
    trail.push(format!("(U/U^N)_N (dim {}): {}", module.dim(), r3.verdict.as_str()));
    trail.extend(r3.trail.iter().map(|t| format!("  {t}")));
    if r3.verdict == Verdict::No {
        failures.push(format!(
            "(U/U^N)_N is not a permutation module ({})",
            r3.failed.clone().unwrap_or_default()
        ));
    }

    if !failures.is_empty() {
        let mut r = PermReport::no(format!("{TAG_RECURSIVE}: {}", failures.join("; ")), trail);
        r.randomized = randomized;
        return Ok(r);
    }
    if [&r1, &r2, &r3].iter().any(|r| r.verdict == Verdict::Inconclusive) {
        return Ok(PermReport { verdict: Verdict::Inconclusive, decomposition: None, failed: None, trail, randomized });
    }
    let decomposition = if lat.rank() <= RANK_CAP {
        let sol = orbit_type_solution(lat)?.ok_or_else(|| {
            Error::Invariant("criterion holds but fixed-point ranks fit no orbit-type multiset".into())
        })?;
        Some(sol)
    } else {
        trail.push(format!("orbit types not enumerated above rank {RANK_CAP}"));
        None
    };
    Ok(PermReport { verdict: Verdict::Yes, decomposition, failed: None, trail, randomized })
}

/// `(W)_N` for a lattice `W` whose `N`-coinvariants are killed by `p`, as
/// an `F_p[G/N]`-module.
fn torsion_module(w: &GLattice, n: &Subgroup) -> Result<FpModule> {
    let g = w.group();
    let co = coinvariants(w, n)?;
    let pb = BigInt::from(g.p());
    if co.structure.free_rank != 0 || co.structure.torsion.iter().any(|d| d != &pb) {
        return Err(Error::Invariant(format!(
            "(U/U^N)_N should be elementary p-torsion, found free rank {} and torsion {:?}",
            co.structure.free_rank,
            to_u64s(&co.structure.torsion)
        )));
    }
    let (tp, ts) = (co.structure.torsion_projection(), co.structure.torsion_section());
    let q = g.quotient(n);
    let actions: Vec<FpMatrix> = q
        .lifts
        .iter()
        .map(|l| FpMatrix::from_int(g.p(), &(&(&tp * &w.element_matrix(l)) * &ts)))
        .collect();
    FpModule::new(q.group.clone(), co.structure.torsion.len(), actions)
}

/// Orbit counts: `Z[G/H]` has `|G| / |HK|` orbits of `K`.
fn orbit_table(g: &GroupSpec, subs: &[Subgroup]) -> Vec<Vec<usize>> {
    subs.iter()
        .map(|h| subs.iter().map(|k| g.p().pow((g.rank() - h.join(k).dim()) as u32) as usize).collect())
        .collect()
}

/// First multiset of permutation modules `Z[G/H]` whose fixed-point ranks
/// match those of `lat` for every subgroup, if any.
pub fn orbit_type_solution(lat: &GLattice) -> Result<Option<Vec<OrbitType>>> {
    let g = lat.group();
    if lat.rank() > RANK_CAP {
        return Err(Error::Unsupported(format!("orbit-type enumeration is capped at rank {RANK_CAP}")));
    }
    let subs = g.all_subgroups();
    let targets: Vec<usize> = subs.iter().map(|k| fixed_points(lat, k).map(|f| f.rank())).collect::<Result<_>>()?;
    let table = orbit_table(g, &subs);
    let mut mult = vec![0usize; subs.len()];
    let found = search(&table, 0, &mut targets.clone(), &mut mult);
    Ok(found.then(|| {
        subs.iter()
            .zip(&mult)
            .filter(|(_, &m)| m > 0)
            .map(|(h, &m)| OrbitType { stabilizer: h.describe(g), multiplicity: m })
            .collect()
    }))
}

fn search(table: &[Vec<usize>], idx: usize, remaining: &mut Vec<usize>, mult: &mut Vec<usize>) -> bool {
    if idx == table.len() {
        return remaining.iter().all(|&r| r == 0);
    }
    let row = &table[idx];
    let cap = row.iter().zip(remaining.iter()).map(|(&c, &r)| r / c).min().unwrap_or(0);
    for m in (0..=cap).rev() {
        for (r, &c) in remaining.iter_mut().zip(row) {
            *r -= m * c;
        }
        mult[idx] = m;
        if search(table, idx + 1, remaining, mult) {
            return true;
        }
        for (r, &c) in remaining.iter_mut().zip(row) {
            *r += m * c;
        }
    }
    mult[idx] = 0;
    false
}

/// One-sided test: no when the fixed-point ranks of `lat` match no
/// permutation lattice, inconclusive otherwise.
pub fn perm_rank_obstruction(lat: &GLattice) -> Result<PermReport> {
    match orbit_type_solution(lat)? {
        None => {
            let msg = format!("{TAG_RANKS}: fixed-point ranks fit no multiset of orbit types");
            Ok(PermReport::no(msg.clone(), vec![msg]))
        }
        Some(sol) => Ok(PermReport {
            verdict: Verdict::Inconclusive,
            decomposition: Some(sol),
            failed: None,
            trail: vec![format!("{TAG_RANKS}: fixed-point ranks are consistent with a permutation lattice")],
            randomized: false,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::super::{cyclic_model, HellerReinerKind};
    use super::*;
    use crate::linalg::unimodular_inverse;
    use crate::IntMatrix;

    fn model(p: u64, k: HellerReinerKind) -> GLattice {
        cyclic_model(&GroupSpec::cyclic(p, "n").unwrap(), k).unwrap()
    }

    #[test]
    fn cyclic_types_of_models() {
        for p in [2u64, 3, 5] {
            let t = cyclic_type(&GLattice::trivial(&GroupSpec::cyclic(p, "n").unwrap(), 3)).unwrap();
            assert_eq!(t, HellerReinerType { a: 3, b: 0, c: 0 });
            assert_eq!(cyclic_type(&model(p, HellerReinerKind::Free)).unwrap(), HellerReinerType { a: 0, b: 1, c: 0 });
            assert_eq!(
                cyclic_type(&model(p, HellerReinerKind::Augmentation)).unwrap(),
                HellerReinerType { a: 0, b: 0, c: 1 }
            );
        }
    }

    #[test]
    fn cyclic_perm_verdicts() {
        assert!(is_perm_cyclic(&model(3, HellerReinerKind::Free)).unwrap().is_yes());
        let s = is_perm_cyclic(&model(3, HellerReinerKind::Augmentation)).unwrap();
        assert_eq!(s.verdict, Verdict::No);
        assert!(s.failed.unwrap().contains("[3]"));
        let sum = model(3, HellerReinerKind::Trivial).direct_sum(&model(3, HellerReinerKind::Free)).unwrap();
        let r = is_perm_cyclic(&sum).unwrap();
        assert!(r.is_yes());
        assert_eq!(cyclic_type(&sum).unwrap(), HellerReinerType { a: 1, b: 1, c: 0 });
    }

    #[test]
    fn regular_rank_two_is_perm() {
        for p in [2u64, 3] {
            let g = GroupSpec::standard(p, 2).unwrap();
            let r = is_perm(&GLattice::regular(&g)).unwrap();
            assert!(r.is_yes(), "{r:?}");
            assert_eq!(r.decomposition.unwrap(), vec![OrbitType { stabilizer: "1".into(), multiplicity: 1 }]);
        }
    }

    #[test]
    fn rank_obstruction_examples() {
        let g = GroupSpec::standard(2, 2).unwrap();
        let r = perm_rank_obstruction(&GLattice::trivial(&g, 2)).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert_eq!(r.decomposition.unwrap(), vec![OrbitType { stabilizer: "G".into(), multiplicity: 2 }]);
        for p in [2u64, 3, 5] {
            let r = perm_rank_obstruction(&model(p, HellerReinerKind::Augmentation)).unwrap();
            assert_eq!(r.verdict, Verdict::No);
        }
    }

    /// Oracle for the obstruction: brute force over all multisets of
    /// subgroups with total index equal to the rank.
    fn brute_feasible(lat: &GLattice) -> bool {
        let g = lat.group();
        let subs = g.all_subgroups();
        let idx: Vec<usize> = subs.iter().map(|h| (g.order() / h.order()) as usize).collect();
        let targets: Vec<usize> = subs.iter().map(|k| fixed_points(lat, k).unwrap().rank()).collect();
        fn go(i: usize, left: usize, acc: &mut Vec<usize>, idx: &[usize], check: &dyn Fn(&[usize]) -> bool) -> bool {
            if i == idx.len() {
                return left == 0 && check(acc);
            }
            for m in 0..=left / idx[i] {
                acc.push(m);
                if go(i + 1, left - m * idx[i], acc, idx, check) {
                    return true;
                }
                acc.pop();
            }
            false
        }
        let table = orbit_table(g, &subs);
        let check = |ms: &[usize]| {
            (0..subs.len()).all(|k| (0..subs.len()).map(|h| ms[h] * table[h][k]).sum::<usize>() == targets[k])
        };
        go(0, lat.rank(), &mut Vec::new(), &idx, &check)
    }

    #[test]
    fn rank_obstruction_matches_brute_force() {
        let g = GroupSpec::standard(2, 2).unwrap();
        let gc = GroupSpec::cyclic(2, "n").unwrap();
        let mut cases = vec![GLattice::trivial(&g, 3), GLattice::regular(&g)];
        for id in g.subgroups_order_p() {
            cases.push(GLattice::perm_lattice(&g, &id.subgroup(&g)));
        }
        // sign representation of C_2 x C_2 with n acting by -1
        let mut neg = GLattice::trivial(&g, 1).actions().to_vec();
        neg[0] = neg[0].scale(&BigInt::from(-1));
        cases.push(GLattice::new(g.clone(), 1, neg).unwrap());
        for lat in &cases {
            assert_eq!(orbit_type_solution(lat).unwrap().is_some(), brute_feasible(lat));
        }
        let s = model(3, HellerReinerKind::Augmentation);
        assert!(!brute_feasible(&s));
        assert!(brute_feasible(&GLattice::regular(&gc)));
    }

    #[test]
    fn conjugation_invariance() {
        let g = GroupSpec::cyclic(3, "n").unwrap();
        let sum = GLattice::direct_sum_all(
            &g,
            [&model(3, HellerReinerKind::Free), &model(3, HellerReinerKind::Augmentation)],
        )
        .unwrap();
        let mut q = IntMatrix::identity(5);
        q.add_row_multiple(0, 4, &BigInt::from(7));
        q.add_row_multiple(3, 1, &BigInt::from(-2));
        assert!(unimodular_inverse(&q).is_ok());
        assert_eq!(cyclic_type(&sum.conjugate(&q).unwrap()).unwrap(), cyclic_type(&sum).unwrap());
    }
}
