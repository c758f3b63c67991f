use num_bigint::BigInt;

use super::GLattice;
use crate::error::{Error, Result};
use crate::group::Subgroup;
use crate::linalg::{column_basis, int_kernel, int_solve, is_saturated, quotient, QuotientStructure};
use crate::IntMatrix;

/// Sublattice given by a column basis in the coordinates of its parent.
#[derive(Clone, Debug)]
pub struct Sublattice {
    pub basis: IntMatrix,
    /// Action of `G` in the coordinates of `basis`.
    pub induced: GLattice,
}

impl Sublattice {
    pub fn rank(&self) -> usize {
        self.basis.cols()
    }
}

/// Expresses each generator's image of `basis` in `basis`; fails with
/// `NotStable` when the span is not `G`-stable.
pub fn induced_action(lat: &GLattice, basis: &IntMatrix) -> Result<GLattice> {
    let mut actions = Vec::with_capacity(lat.actions().len());
    for (a, name) in lat.actions().iter().zip(lat.group().names()) {
        let x = int_solve(basis, &(a * basis)).map_err(|e| match e {
            Error::NoSolution => Error::NotStable(format!("{name} moves the span")),
            e => e,
        })?;
        actions.push(x);
    }
    GLattice::new(lat.group().clone(), basis.cols(), actions)
}

fn minus_identity_blocks(lat: &GLattice, h: &Subgroup) -> Vec<IntMatrix> {
    h.generators().iter().map(|s| lat.element_matrix(s).minus_identity()).collect()
}

/// `U^h`: the common integer kernel of `a_s - 1` over generators `s` of `h`.
pub fn fixed_points(lat: &GLattice, h: &Subgroup) -> Result<Sublattice> {
    let n = lat.rank();
    let blocks = minus_identity_blocks(lat, h);
    let basis = if blocks.is_empty() {
        IntMatrix::identity(n)
    } else {
        let refs: Vec<&IntMatrix> = blocks.iter().collect();
        int_kernel(&IntMatrix::vstack(&refs, n))
    };
    let induced = induced_action(lat, &basis)?;
    Ok(Sublattice { basis, induced })
}

/// `I_h U`: the span of the images of `a_s - 1`.
pub fn aug_image(lat: &GLattice, h: &Subgroup) -> Result<Sublattice> {
    let n = lat.rank();
    let blocks = minus_identity_blocks(lat, h);
    let refs: Vec<&IntMatrix> = blocks.iter().collect();
    let basis = column_basis(&IntMatrix::hstack(&refs, n));
    let induced = induced_action(lat, &basis)?;
    Ok(Sublattice { basis, induced })
}

/// `U_h = U / I_h U`.
#[derive(Clone, Debug)]
pub struct Coinvariants {
    pub structure: QuotientStructure<BigInt>,
    /// `G`-action on the quotient when it is torsion-free.
    pub lattice: Option<GLattice>,
}

impl Coinvariants {
    pub fn is_lattice(&self) -> bool {
        self.structure.is_torsion_free()
    }
}

pub fn coinvariants(lat: &GLattice, h: &Subgroup) -> Result<Coinvariants> {
    let img = aug_image(lat, h)?;
    let structure = quotient(lat.rank(), &img.basis);
    let lattice = if structure.is_torsion_free() {
        let actions = lat.actions().iter().map(|a| structure.induced_free(a)).collect();
        Some(GLattice::new(lat.group().clone(), structure.free_rank, actions)?)
    } else {
        None
    };
    Ok(Coinvariants { structure, lattice })
}

/// `U / sub` for a `G`-stable pure sublattice.
pub fn quotient_lattice(lat: &GLattice, sub: &IntMatrix) -> Result<GLattice> {
    if sub.rows() != lat.rank() {
        return Err(Error::Dimension(format!("sublattice in Z^{} of a rank {} lattice", sub.rows(), lat.rank())));
    }
    if !is_saturated(sub) {
        return Err(Error::NotSaturated);
    }
    induced_action(lat, sub)?;
    let q = quotient(lat.rank(), sub);
    let actions = lat.actions().iter().map(|a| q.induced_free(a)).collect();
    GLattice::new(lat.group().clone(), q.free_rank, actions)
}

#[cfg(test)]
mod tests {
    use super::super::{cyclic_model, HellerReinerKind};
    use super::*;
    use crate::group::GroupSpec;
    use crate::linalg::snf;
    use num_traits::One;

    #[test]
    fn trivial_action_is_all_fixed() {
        let g = GroupSpec::standard(3, 2).unwrap();
        let t = GLattice::trivial(&g, 3);
        assert_eq!(fixed_points(&t, &g.whole()).unwrap().rank(), 3);
        assert_eq!(aug_image(&t, &g.whole()).unwrap().rank(), 0);
    }

    #[test]
    fn regular_cyclic_fixed_line_is_orbit_sum() {
        for p in [2u64, 3, 5] {
            let g = GroupSpec::cyclic(p, "n").unwrap();
            let reg = GLattice::regular(&g);
            let f = fixed_points(&reg, &g.whole()).unwrap();
            assert_eq!(f.rank(), 1);
            let v = f.basis.col(0);
            assert!(v.iter().all(|x| x == &v[0]) && (v[0] == BigInt::one() || v[0] == -BigInt::one()));
            let co = coinvariants(&reg, &g.whole()).unwrap();
            assert!(co.is_lattice());
            assert_eq!(co.structure.free_rank, 1);
        }
    }

    #[test]
    fn augmentation_model_coinvariants_have_torsion_p() {
        for p in [2u64, 3, 5] {
            let g = GroupSpec::cyclic(p, "n").unwrap();
            let s = cyclic_model(&g, HellerReinerKind::Augmentation).unwrap();
            let co = coinvariants(&s, &g.whole()).unwrap();
            assert_eq!(co.structure.torsion, vec![BigInt::from(p)]);
            assert_eq!(co.structure.free_rank, 0);
            // oracle: divisors of a - 1 directly
            let d = snf(&s.action(0).minus_identity()).divisors;
            assert_eq!(d.last().unwrap(), &BigInt::from(p));
        }
    }

    #[test]
    fn quotient_of_regular_by_fixed_line() {
        let g = GroupSpec::cyclic(3, "n").unwrap();
        let reg = GLattice::regular(&g);
        let f = fixed_points(&reg, &g.whole()).unwrap();
        let q = quotient_lattice(&reg, &f.basis).unwrap();
        assert_eq!(q.rank(), 2);
        assert!(q.validate().is_ok());
        assert_eq!(quotient_lattice(&reg, &IntMatrix::zeros(3, 0)).unwrap(), reg);
    }

    #[test]
    fn quotient_rejects_bad_sublattices() {
        let g = GroupSpec::cyclic(3, "n").unwrap();
        let reg = GLattice::regular(&g);
        let two = IntMatrix::from_rows(vec![vec![2.into()], vec![2.into()], vec![2.into()]], 1).unwrap();
        assert_eq!(quotient_lattice(&reg, &two), Err(Error::NotSaturated));
        let e0 = IntMatrix::from_rows(vec![vec![1.into()], vec![0.into()], vec![0.into()]], 1).unwrap();
        assert!(matches!(quotient_lattice(&reg, &e0), Err(Error::NotStable(_))));
    }
}
