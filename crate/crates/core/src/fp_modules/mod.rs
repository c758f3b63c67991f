//! Finite-dimensional modules over `F_p G` for elementary abelian `G`.

mod decompose;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::glattice::{GLattice, OrbitType, PermReport};
use crate::group::{GroupSpec, Subgroup};
use crate::linalg::{FpMatrix, Subspace};

pub use decompose::{fp_decompose, fp_decompose_seeded, fp_iso, find_invertible, Decomposition, IsoOutcome, Summand, EXHAUSTIVE_LIMIT};

/// Largest module dimension accepted by the decomposition and isomorphism searches.
pub const DIM_CAP: usize = 64;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FpModule {
    group: GroupSpec,
    dim: usize,
    actions: Vec<FpMatrix>,
}

impl FpModule {
    /// Checks shapes only; see [`FpModule::validate`].
    pub fn new(group: GroupSpec, dim: usize, actions: Vec<FpMatrix>) -> Result<Self> {
        if actions.len() != group.rank() {
            return Err(Error::Dimension(format!("{} actions for {} generators", actions.len(), group.rank())));
        }
        for (a, name) in actions.iter().zip(group.names()) {
            if a.rows() != dim || a.cols() != dim || a.p() != group.p() {
                return Err(Error::Dimension(format!(
                    "action of {name} is {}x{} over F_{}, expected {dim}x{dim} over F_{}",
                    a.rows(),
                    a.cols(),
                    a.p(),
                    group.p()
                )));
            }
        }
        Ok(FpModule { group, dim, actions })
    }

    pub fn validated(group: GroupSpec, dim: usize, actions: Vec<FpMatrix>) -> Result<Self> {
        let m = Self::new(group, dim, actions)?;
        let v = m.violations();
        if v.is_empty() {
            Ok(m)
        } else {
            Err(Error::InvalidModule(v))
        }
    }

    pub fn violations(&self) -> Vec<String> {
        let names = self.group.names();
        let mut out = Vec::new();
        for (a, name) in self.actions.iter().zip(names) {
            if !a.pow(self.p()).is_identity() {
                out.push(format!("{name}: order does not divide {}", self.p()));
            }
        }
        for i in 0..self.actions.len() {
            for j in i + 1..self.actions.len() {
                let (a, b) = (&self.actions[i], &self.actions[j]);
                if a.mul(b) != b.mul(a) {
                    out.push(format!("{} and {} do not commute", names[i], names[j]));
                }
            }
        }
        out
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn p(&self) -> u64 {
        self.group.p()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn actions(&self) -> &[FpMatrix] {
        &self.actions
    }

    pub fn element_matrix(&self, e: &[u64]) -> FpMatrix {
        let mut m = FpMatrix::identity(self.p(), self.dim);
        for (a, &x) in self.actions.iter().zip(e) {
            if x % self.p() != 0 {
                m = m.mul(&a.pow(x % self.p()));
            }
        }
        m
    }

    pub fn trivial(group: &GroupSpec, dim: usize) -> Self {
        let actions = vec![FpMatrix::identity(group.p(), dim); group.rank()];
        FpModule { group: group.clone(), dim, actions }
    }

    /// Reduction mod p of a lattice.
    pub fn from_lattice(lat: &GLattice) -> Self {
        let p = lat.group().p();
        let actions = lat.actions().iter().map(|a| FpMatrix::from_int(p, a)).collect();
        FpModule { group: lat.group().clone(), dim: lat.rank(), actions }
    }

    /// `F_p[G/H]`.
    pub fn perm_module(group: &GroupSpec, h: &Subgroup) -> Self {
        Self::from_lattice(&GLattice::perm_lattice(group, h))
    }

    pub fn regular(group: &GroupSpec) -> Self {
        Self::perm_module(group, &Subgroup::trivial(group))
    }

    pub fn direct_sum(&self, other: &FpModule) -> Result<Self> {
        if self.group != other.group {
            return Err(Error::GroupMismatch(format!("{} vs {}", self.group, other.group)));
        }
        let p = self.p();
        let actions = self.actions.iter().zip(&other.actions).map(|(a, b)| FpMatrix::block_diag(p, &[a, b])).collect();
        Ok(FpModule { group: self.group.clone(), dim: self.dim + other.dim, actions })
    }

    pub fn direct_sum_all<'a>(group: &GroupSpec, parts: impl IntoIterator<Item = &'a FpModule>) -> Result<Self> {
        parts.into_iter().try_fold(Self::trivial(group, 0), |acc, x| acc.direct_sum(x))
    }

    /// Actions become `q a q^-1`.
    pub fn conjugate(&self, q: &FpMatrix) -> Result<Self> {
        let qi = q.inverse().ok_or_else(|| Error::Precondition("basis change is singular".into()))?;
        let actions = self.actions.iter().map(|a| q.mul(a).mul(&qi)).collect();
        Ok(FpModule { group: self.group.clone(), dim: self.dim, actions })
    }

    /// Submodule spanned by the (independent) columns of `basis`, in those coordinates.
    pub fn submodule(&self, basis: &FpMatrix) -> Result<Self> {
        let mut actions = Vec::new();
        for (a, name) in self.actions.iter().zip(self.group.names()) {
            let x = basis
                .solve(&a.mul(basis))
                .ok_or_else(|| Error::NotStable(format!("{name} moves the subspace")))?;
            actions.push(x);
        }
        Ok(FpModule { group: self.group.clone(), dim: basis.cols(), actions })
    }

    /// `M^h`.
    pub fn fixed_space(&self, h: &Subgroup) -> Subspace {
        let ms: Vec<FpMatrix> = h.generators().iter().map(|s| self.element_matrix(s)).collect();
        let refs: Vec<&FpMatrix> = ms.iter().collect();
        Subspace::fixed_space(self.p(), self.dim, &refs)
    }

    /// `rad(W) = I_G W` for a subspace `W`.
    pub fn radical_of(&self, w: &Subspace) -> Subspace {
        let parts: Vec<Subspace> = self.actions.iter().map(|a| w.image(&a.minus_identity())).collect();
        Subspace::sum_all(self.p(), self.dim, parts.iter())
    }

    /// Dimensions of `M ⊋ rad M ⊋ rad^2 M ⊋ ... ⊋ 0`.
    pub fn radical_series(&self) -> Vec<usize> {
        let mut w = Subspace::full(self.p(), self.dim);
        let mut out = vec![w.dim()];
        while !w.is_zero() {
            w = self.radical_of(&w);
            out.push(w.dim());
        }
        out
    }

    /// Dimension, fixed-space dimension for every subgroup and radical
    /// series: a necessary condition for isomorphism.
    pub fn invariant_vector(&self) -> Vec<usize> {
        let mut v = vec![self.dim];
        v.extend(self.group.all_subgroups().iter().map(|h| self.fixed_space(h).dim()));
        v.extend(self.radical_series());
        v
    }

    /// `G`-equivariant maps `self -> other` as a basis of matrices.
    pub fn hom_basis(&self, other: &FpModule) -> Result<Vec<FpMatrix>> {
        if self.group != other.group {
            return Err(Error::GroupMismatch(format!("{} vs {}", self.group, other.group)));
        }
        let p = self.p();
        let (m, n) = (self.dim, other.dim);
        // unknown x (n x m) stored row-major; equations b x - x a = 0
        let vars = n * m;
        let mut eqs = FpMatrix::zeros(p, self.actions.len() * vars, vars);
        for (t, (a, b)) in self.actions.iter().zip(&other.actions).enumerate() {
            for r in 0..n {
                for c in 0..m {
                    let row = t * vars + r * m + c;
                    for k in 0..n {
                        let v = b.get(r, k);
                        if v != 0 {
                            let idx = k * m + c;
                            eqs.set(row, idx, (eqs.get(row, idx) + v) % p);
                        }
                    }
                    for k in 0..m {
                        let v = a.get(k, c);
                        if v != 0 {
                            let idx = r * m + k;
                            eqs.set(row, idx, (eqs.get(row, idx) + p - v) % p);
                        }
                    }
                }
            }
        }
        let ker = eqs.kernel();
        Ok((0..ker.rows())
            .map(|i| FpMatrix::from_fn(p, n, m, |r, c| ker.get(i, r * m + c)))
            .collect())
    }

    pub fn end_basis(&self) -> Vec<FpMatrix> {
        self.hom_basis(self).expect("same group")
    }

    /// Seed derived from the module's content.
    pub fn content_seed(&self) -> u64 {
        let mut h = Sha256::new();
        h.update(self.p().to_le_bytes());
        h.update((self.dim as u64).to_le_bytes());
        for a in &self.actions {
            for r in a.to_rows() {
                for x in r {
                    h.update(x.to_le_bytes());
                }
            }
        }
        let d = h.finalize();
        u64::from_le_bytes(d[..8].try_into().unwrap())
    }
}

/// Sizes of the Jordan blocks of a unipotent matrix, largest first.
pub fn jordan_type(a: &FpMatrix) -> Vec<usize> {
    let n = a.rows();
    let x = a.minus_identity();
    // ranks[s] = rank (a - 1)^s
    let mut ranks = vec![n];
    let mut pw = FpMatrix::identity(a.p(), n);
    while *ranks.last().unwrap() > 0 {
        pw = pw.mul(&x);
        let r = pw.rank();
        if r == *ranks.last().unwrap() {
            break;
        }
        ranks.push(r);
    }
    let mut at_least: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
    at_least.push(0);
    let mut sizes = Vec::new();
    for s in (1..at_least.len()).rev() {
        let exact = at_least[s - 1] - at_least[s];
        sizes.extend(std::iter::repeat(s).take(exact));
    }
    sizes
}

/// The permutation modules of the Klein four group: `F_2`, `F_2[G/H]` for
/// the three subgroups of order 2, and `F_2 G`.
pub fn klein_four_permutation_modules(g: &GroupSpec) -> Vec<(String, FpModule)> {
    let mut out = vec![("G".to_string(), FpModule::trivial(g, 1))];
    for id in g.subgroups_order_p() {
        let h = id.subgroup(g);
        out.push((h.describe(g), FpModule::perm_module(g, &h)));
    }
    out.push(("1".into(), FpModule::regular(g)));
    out
}

/// Decides whether `m` is a permutation module, for cyclic `G` (Jordan
/// blocks of size 1 or p) and for the Klein four group (every indecomposable
/// summand is one of five permutation modules).
pub fn fp_is_permutation(m: &FpModule) -> Result<PermReport> {
    fp_is_permutation_seeded(m, None)
}

/// [`fp_is_permutation`] with an optional seed replacing the content-derived
/// one.
pub fn fp_is_permutation_seeded(m: &FpModule, seed: Option<u64>) -> Result<PermReport> {
    let g = m.group();
    if g.rank() == 1 {
        let sizes = jordan_type(&m.actions[0]);
        let p = g.p() as usize;
        let ones = sizes.iter().filter(|&&s| s == 1).count();
        let frees = sizes.iter().filter(|&&s| s == p).count();
        let trail = vec![format!("Jordan type {sizes:?}")];
        if ones + frees < sizes.len() {
            return Ok(PermReport::no(format!("Jordan type {sizes:?} has a block of size other than 1 or {p}"), trail));
        }
        let mut dec = Vec::new();
        if ones > 0 {
            dec.push(OrbitType { stabilizer: "G".into(), multiplicity: ones });
        }
        if frees > 0 {
            dec.push(OrbitType { stabilizer: "1".into(), multiplicity: frees });
        }
        return Ok(PermReport::yes(dec, trail));
    }
    if g.rank() == 0 {
        return Ok(PermReport::yes(vec![OrbitType { stabilizer: "G".into(), multiplicity: m.dim() }], vec![]));
    }
    if g.rank() != 2 || g.p() != 2 {
        return Err(Error::Unsupported(format!("permutation test for modules over {g}")));
    }
    let dec = fp_decompose_seeded(m, seed.unwrap_or_else(|| m.content_seed()))?;
    let candidates = klein_four_permutation_modules(g);
    let mut randomized = dec.randomized;
    let mut counts: Vec<usize> = vec![0; candidates.len()];
    let mut trail = vec![format!("summand dimensions {:?}", dec.summands.iter().map(|s| s.module.dim()).collect::<Vec<_>>())];
    for s in &dec.summands {
        let mut hit = None;
        for (i, (_, c)) in candidates.iter().enumerate() {
            if c.dim() != s.module.dim() {
                continue;
            }
            let iso = fp_iso(&s.module, c)?;
            randomized |= iso.randomized;
            if iso.map.is_some() {
                hit = Some(i);
                break;
            }
        }
        match hit {
            Some(i) => counts[i] += 1,
            None => {
                trail.push(format!("summand of dimension {} matches no permutation module", s.module.dim()));
                let mut r = PermReport::no(
                    format!("indecomposable summand of dimension {} is not a permutation module", s.module.dim()),
                    trail,
                );
                r.randomized = randomized;
                return Ok(r);
            }
        }
    }
    let decomposition = candidates
        .iter()
        .zip(&counts)
        .filter(|(_, &k)| k > 0)
        .map(|((name, _), &k)| OrbitType { stabilizer: name.clone(), multiplicity: k })
        .collect();
    let mut r = PermReport::yes(decomposition, trail);
    r.randomized = randomized;
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::glattice::Verdict;

    fn klein() -> GroupSpec {
        GroupSpec::standard(2, 2).unwrap()
    }

    #[test]
    fn jordan_types() {
        let g = GroupSpec::cyclic(3, "n").unwrap();
        let reg = FpModule::regular(&g);
        assert_eq!(jordan_type(&reg.actions()[0]), vec![3]);
        let j2 = FpMatrix::from_i64_rows(3, &[vec![1, 1], vec![0, 1]], 2).unwrap();
        assert_eq!(jordan_type(&j2), vec![2]);
        let m = FpModule::new(g.clone(), 2, vec![j2]).unwrap();
        assert_eq!(fp_is_permutation(&m).unwrap().verdict, Verdict::No);
        let t = FpModule::trivial(&g, 2).direct_sum(&reg).unwrap();
        assert_eq!(jordan_type(&t.actions()[0]), vec![3, 1, 1]);
        assert!(fp_is_permutation(&t).unwrap().is_yes());
    }

    #[test]
    fn every_c2_module_is_permutation() {
        let g = GroupSpec::cyclic(2, "n").unwrap();
        let a = FpMatrix::from_i64_rows(2, &[vec![1, 1, 0], vec![0, 1, 0], vec![0, 0, 1]], 3).unwrap();
        let m = FpModule::validated(g, 3, vec![a]).unwrap();
        assert!(fp_is_permutation(&m).unwrap().is_yes());
    }

    #[test]
    fn hom_between_permutation_modules() {
        let g = klein();
        let triv = FpModule::trivial(&g, 1);
        let reg = FpModule::regular(&g);
        // Hom(F_2, F_2 G) = (F_2 G)^G is one-dimensional
        assert_eq!(triv.hom_basis(&reg).unwrap().len(), 1);
        assert_eq!(reg.end_basis().len(), 4);
        for x in reg.hom_basis(&reg).unwrap() {
            for a in reg.actions() {
                assert_eq!(a.mul(&x), x.mul(a));
            }
        }
    }

    #[test]
    fn klein_permutation_list() {
        let g = klein();
        let list = klein_four_permutation_modules(&g);
        assert_eq!(list.iter().map(|(_, m)| m.dim()).collect::<Vec<_>>(), vec![1, 2, 2, 2, 4]);
        for (_, m) in &list {
            assert!(m.violations().is_empty());
            assert!(fp_is_permutation(m).unwrap().is_yes());
        }
    }

    #[test]
    fn radical_series_of_regular() {
        let reg = FpModule::regular(&klein());
        assert_eq!(reg.radical_series(), vec![4, 3, 1, 0]);
    }
}
