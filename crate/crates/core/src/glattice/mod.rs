//! Integer representations of elementary abelian p-groups and the
//! matrix-level module theory built on them.

mod perm;
mod sub;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::group::{GroupSpec, QuotientGroup, Subgroup};
use crate::linalg::{determinant, unimodular_inverse};
use crate::IntMatrix;

pub use perm::{
    cyclic_type, is_perm, is_perm_cyclic, is_perm_recursive, orbit_type_solution, perm_rank_obstruction,
    HellerReinerType, OrbitType, PermReport, Verdict, RANK_CAP, TAG_CYCLIC, TAG_RANKS, TAG_RECURSIVE,
};
pub use sub::{aug_image, coinvariants, fixed_points, induced_action, quotient_lattice, Coinvariants, Sublattice};

/// A `Z G`-lattice: one invertible integer matrix per generator of `G`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GLattice {
    group: GroupSpec,
    rank: usize,
    actions: Vec<IntMatrix>,
}

impl GLattice {
    /// Checks shapes only; see [`GLattice::validate`] for the group relations.
    pub fn new(group: GroupSpec, rank: usize, actions: Vec<IntMatrix>) -> Result<Self> {
        if actions.len() != group.rank() {
            return Err(Error::Dimension(format!(
                "{} action matrices for {} generators",
                actions.len(),
                group.rank()
            )));
        }
        for (a, name) in actions.iter().zip(group.names()) {
            if a.rows() != rank || a.cols() != rank {
                return Err(Error::Dimension(format!(
                    "action of {name} is {}x{}, expected {rank}x{rank}",
                    a.rows(),
                    a.cols()
                )));
            }
        }
        Ok(GLattice { group, rank, actions })
    }

    /// [`GLattice::new`] followed by [`GLattice::validate`].
    pub fn validated(group: GroupSpec, rank: usize, actions: Vec<IntMatrix>) -> Result<Self> {
        let lat = Self::new(group, rank, actions)?;
        lat.validate()?;
        Ok(lat)
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn actions(&self) -> &[IntMatrix] {
        &self.actions
    }

    pub fn action(&self, i: usize) -> &IntMatrix {
        &self.actions[i]
    }

    /// Every violated relation: unimodularity, order dividing p, commutation.
    pub fn violations(&self) -> Vec<String> {
        let names = self.group.names();
        let mut out = Vec::new();
        for (a, name) in self.actions.iter().zip(names) {
            let d = determinant(a);
            if !d.abs().is_one() {
                out.push(format!("{name}: determinant {d} is not a unit"));
            }
            if !a.pow(self.group.p()).is_identity() {
                out.push(format!("{name}: order does not divide {}", self.group.p()));
            }
        }
        for i in 0..self.actions.len() {
            for j in i + 1..self.actions.len() {
                let (a, b) = (&self.actions[i], &self.actions[j]);
                if &(a * b) != &(b * a) {
                    out.push(format!("{} and {} do not commute", names[i], names[j]));
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidLattice(v))
        }
    }

    /// Matrix of the group element with exponent vector `e`.
    pub fn element_matrix(&self, e: &[u64]) -> IntMatrix {
        let mut m = IntMatrix::identity(self.rank);
        for (a, &x) in self.actions.iter().zip(e) {
            if x % self.group.p() != 0 {
                m = &m * &a.pow(x % self.group.p());
            }
        }
        m
    }

    pub fn trivial(group: &GroupSpec, rank: usize) -> Self {
        let actions = vec![IntMatrix::identity(rank); group.rank()];
        GLattice { group: group.clone(), rank, actions }
    }

    /// The permutation lattice `Z[G/H]` on the cosets of `h`, ordered by
    /// their canonical representatives.
    pub fn perm_lattice(group: &GroupSpec, h: &Subgroup) -> Self {
        let mut reps: Vec<Vec<u64>> = group.elements().iter().map(|e| h.reduce(e)).collect();
        reps.sort();
        reps.dedup();
        let n = reps.len();
        let actions = (0..group.rank())
            .map(|i| {
                let gen = group.generator(i);
                let mut m = IntMatrix::zeros(n, n);
                for (j, r) in reps.iter().enumerate() {
                    let img = h.reduce(&group.mul(r, &gen));
                    let k = reps.binary_search(&img).expect("coset representative");
                    m[(k, j)] = BigInt::one();
                }
                m
            })
            .collect();
        GLattice { group: group.clone(), rank: n, actions }
    }

    pub fn regular(group: &GroupSpec) -> Self {
        Self::perm_lattice(group, &Subgroup::trivial(group))
    }

    pub fn direct_sum(&self, other: &GLattice) -> Result<Self> {
        if self.group != other.group {
            return Err(Error::GroupMismatch(format!("{} vs {}", self.group, other.group)));
        }
        let actions = self
            .actions
            .iter()
            .zip(&other.actions)
            .map(|(a, b)| IntMatrix::block_diag(&[a, b]))
            .collect();
        Ok(GLattice { group: self.group.clone(), rank: self.rank + other.rank, actions })
    }

    pub fn direct_sum_all<'a>(group: &GroupSpec, parts: impl IntoIterator<Item = &'a GLattice>) -> Result<Self> {
        parts.into_iter().try_fold(Self::trivial(group, 0), |acc, x| acc.direct_sum(x))
    }

    /// Change of basis: actions become `q a q^-1` for unimodular `q`.
    pub fn conjugate(&self, q: &IntMatrix) -> Result<Self> {
        let qi = unimodular_inverse(q)?;
        if q.rows() != self.rank {
            return Err(Error::Dimension(format!("basis change of size {} on rank {}", q.rows(), self.rank)));
        }
        let actions = self.actions.iter().map(|a| &(q * a) * &qi).collect();
        Ok(GLattice { group: self.group.clone(), rank: self.rank, actions })
    }

    /// View a lattice on which `h` acts trivially as a `G/h`-lattice.
    pub fn restrict_to_quotient(&self, h: &Subgroup) -> Result<(QuotientGroup, GLattice)> {
        for s in h.generators() {
            if !self.element_matrix(s).is_identity() {
                return Err(Error::Precondition(format!(
                    "{} does not act trivially",
                    self.group.format_word(s)
                )));
            }
        }
        let q = self.group.quotient(h);
        let actions = q.lifts.iter().map(|l| self.element_matrix(l)).collect();
        let lat = GLattice { group: q.group.clone(), rank: self.rank, actions };
        Ok((q, lat))
    }

    /// The same matrices regarded as a representation of another group with
    /// as many generators (used to rename generators).
    pub fn with_group(&self, group: GroupSpec) -> Result<Self> {
        if group.rank() != self.group.rank() || group.p() != self.group.p() {
            return Err(Error::GroupMismatch(format!("{} vs {}", self.group, group)));
        }
        Ok(GLattice { group, rank: self.rank, actions: self.actions.clone() })
    }
}

/// Companion matrix of `1 + t + ... + t^(p-1)` on the basis `1, t, ..., t^(p-2)`.
pub fn cyclotomic_companion(p: u64) -> IntMatrix {
    let n = (p - 1) as usize;
    let mut m = IntMatrix::zeros(n, n);
    for j in 0..n {
        if j + 1 < n {
            m[(j + 1, j)] = BigInt::one();
        } else {
            for i in 0..n {
                m[(i, j)] = -BigInt::one();
            }
        }
    }
    m
}

/// The three indecomposable `Z C_p`-lattices: trivial, regular and the
/// augmentation ideal `S`.
pub fn cyclic_model(group: &GroupSpec, kind: HellerReinerKind) -> Result<GLattice> {
    if group.rank() != 1 {
        return Err(Error::Unsupported(format!("cyclic models need a cyclic group, got {group}")));
    }
    Ok(match kind {
        HellerReinerKind::Trivial => GLattice::trivial(group, 1),
        HellerReinerKind::Free => GLattice::regular(group),
        HellerReinerKind::Augmentation => {
            let p = group.p();
            GLattice { group: group.clone(), rank: (p - 1) as usize, actions: vec![cyclotomic_companion(p)] }
        }
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum HellerReinerKind {
    Trivial,
    Free,
    Augmentation,
}
