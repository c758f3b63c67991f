//! Exact group-algebra elements of `C_p^k`: hat elements, the primitive
//! idempotents of `Q[C_p x C_p]`, augmentation generators and their action
//! on lattices.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::glattice::GLattice;
use crate::group::{block_indices, BlockIndex, Element, GroupSpec, Subgroup};
use crate::linalg::{Matrix, Scalar};

/// Finite formal sum of group elements.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AlgebraElement<T> {
    group: GroupSpec,
    terms: BTreeMap<Element, T>,
}

impl<T: Scalar> AlgebraElement<T> {
    pub fn zero(group: &GroupSpec) -> Self {
        AlgebraElement { group: group.clone(), terms: BTreeMap::new() }
    }

    pub fn one(group: &GroupSpec) -> Self {
        Self::basis(group, &group.identity())
    }

    /// The group element `g` itself.
    pub fn basis(group: &GroupSpec, g: &[u64]) -> Self {
        Self::from_terms(group, [(g.to_vec(), T::one())])
    }

    pub fn from_terms(group: &GroupSpec, terms: impl IntoIterator<Item = (Element, T)>) -> Self {
        let mut out = Self::zero(group);
        for (g, c) in terms {
            out.add_term(g, c);
        }
        out
    }

    fn add_term(&mut self, g: Element, c: T) {
        let g: Element = g.iter().map(|x| x % self.group.p()).collect();
        let sum = match self.terms.remove(&g) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(g, sum);
        }
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn coefficient(&self, g: &[u64]) -> T {
        self.terms.get(g).cloned().unwrap_or_else(T::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Element, &T)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, k: &T) -> Self {
        Self::from_terms(&self.group, self.terms.iter().map(|(g, c)| (g.clone(), c.clone() * k.clone())))
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        self.same_group(rhs)?;
        let mut out = Self::zero(&self.group);
        for (g, a) in &self.terms {
            for (h, b) in &rhs.terms {
                out.add_term(self.group.mul(g, h), a.clone() * b.clone());
            }
        }
        Ok(out)
    }

    fn same_group(&self, rhs: &Self) -> Result<()> {
        if self.group != rhs.group {
            return Err(Error::GroupMismatch(format!("{} vs {}", self.group, rhs.group)));
        }
        Ok(())
    }

    /// Coefficientwise conversion, e.g. integer to rational.
    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> AlgebraElement<U> {
        AlgebraElement::from_terms(&self.group, self.terms.iter().map(|(g, c)| (g.clone(), f(c))))
    }
}

impl<T: Scalar> Add for &AlgebraElement<T> {
    type Output = AlgebraElement<T>;
    fn add(self, rhs: Self) -> AlgebraElement<T> {
        self.same_group(rhs).expect("adding elements of different group algebras");
        let mut out = self.clone();
        for (g, c) in &rhs.terms {
            out.add_term(g.clone(), c.clone());
        }
        out
    }
}

impl<T: Scalar> Sub for &AlgebraElement<T> {
    type Output = AlgebraElement<T>;
    fn sub(self, rhs: Self) -> AlgebraElement<T> {
        self + &rhs.scale(&-T::one())
    }
}

impl<T: Scalar> Mul for &AlgebraElement<T> {
    type Output = AlgebraElement<T>;
    fn mul(self, rhs: Self) -> AlgebraElement<T> {
        self.checked_mul(rhs).expect("multiplying elements of different group algebras")
    }
}

/// Sum of all elements of `h`.
pub fn hat<T: Scalar>(g: &GroupSpec, h: &Subgroup) -> AlgebraElement<T> {
    AlgebraElement::from_terms(g, h.elements().into_iter().map(|e| (e, T::one())))
}

/// The `p + 2` primitive idempotents of `Q[C_p x C_p]` in canonical index
/// order: `e_0 = G^/p^2` and `e_H = (p H^ - G^)/p^2`.
pub fn idempotents(g: &GroupSpec) -> Result<Vec<(BlockIndex, AlgebraElement<BigRational>)>> {
    Ok(scaled_idempotents(g)?
        .into_iter()
        .map(|(i, x)| {
            let d = BigRational::from_integer(BigInt::from(g.order()));
            (i, x.map(|c| BigRational::from_integer(c.clone()) / d.clone()))
        })
        .collect())
}

/// `p^2 e_i` as integral elements, in canonical index order.
pub fn scaled_idempotents(g: &GroupSpec) -> Result<Vec<(BlockIndex, AlgebraElement<BigInt>)>> {
    let whole: AlgebraElement<BigInt> = hat(g, &g.whole());
    let p = BigInt::from(g.p());
    Ok(block_indices(g)?
        .into_iter()
        .map(|i| {
            let x = match i.subgroup(g) {
                None => whole.clone(),
                Some(h) => &hat::<BigInt>(g, &h).scale(&p) - &whole,
            };
            (i, x)
        })
        .collect())
}

/// `1 - s` for the reduced generators `s` of `h`; these generate `I_h` as a
/// left ideal.
pub fn aug_generators<T: Scalar>(g: &GroupSpec, h: &Subgroup) -> Vec<AlgebraElement<T>> {
    h.generators()
        .iter()
        .map(|s| &AlgebraElement::one(g) - &AlgebraElement::basis(g, s))
        .collect()
}

/// Matrix of `x` acting on `lat`.
pub fn act<T: Scalar + From<BigInt>>(x: &AlgebraElement<T>, lat: &GLattice) -> Result<Matrix<T>> {
    if x.group() != lat.group() {
        return Err(Error::GroupMismatch(format!("{} acting on a {}-lattice", x.group(), lat.group())));
    }
    let n = lat.rank();
    let mut out = Matrix::zeros(n, n);
    for (g, c) in x.terms() {
        let m = lat.element_matrix(g).map(|v| T::from(v.clone()));
        out = &out + &m.scale(c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn hat_of_trivial_is_identity() {
        let g = GroupSpec::standard(3, 2).unwrap();
        assert_eq!(hat::<BigInt>(&g, &Subgroup::trivial(&g)), AlgebraElement::one(&g));
    }

    /// `H^ K^ = |H n K| (HK)^` for all pairs of subgroups, including the
    /// order-p pairs of `C_p x C_p`.
    #[test]
    fn hat_products() {
        for p in [2u64, 3, 5] {
            let g = GroupSpec::standard(p, 2).unwrap();
            let subs = g.all_subgroups();
            for h in &subs {
                for k in &subs {
                    let lhs = &hat::<BigInt>(&g, h) * &hat::<BigInt>(&g, k);
                    let meet = h.elements().iter().filter(|e| k.contains(e)).count();
                    let rhs = hat::<BigInt>(&g, &h.join(k)).scale(&BigInt::from(meet));
                    assert_eq!(lhs, rhs, "p={p}");
                }
            }
        }
    }

    #[test]
    fn idempotent_identities() {
        for p in [2u64, 3, 5] {
            let g = GroupSpec::standard(p, 2).unwrap();
            let es = idempotents(&g).unwrap();
            assert_eq!(es.len() as u64, p + 2);
            let mut total = AlgebraElement::zero(&g);
            for (i, (_, a)) in es.iter().enumerate() {
                total = &total + a;
                for (j, (_, b)) in es.iter().enumerate() {
                    let prod = a * b;
                    if i == j {
                        assert_eq!(&prod, a);
                    } else {
                        assert!(prod.is_zero());
                    }
                }
            }
            assert_eq!(total, AlgebraElement::one(&g));
        }
    }

    #[test]
    fn e0_on_regular_is_rank_one_projector() {
        let g = GroupSpec::standard(3, 2).unwrap();
        let reg = GLattice::regular(&g);
        let (_, e0) = &idempotents(&g).unwrap()[0];
        let m = act(e0, &reg).unwrap();
        // every entry is 1/9 (the averaging projector onto the orbit sum)
        assert!(m.data().iter().all(|x| *x == rat(1, 9)));
        assert_eq!(&m * &m, m);
    }

    #[test]
    fn act_identity_and_rejects_other_group() {
        let g = GroupSpec::standard(2, 2).unwrap();
        let reg = GLattice::regular(&g);
        let one = AlgebraElement::<BigRational>::one(&g);
        assert!(act(&one, &reg).unwrap().is_identity());
        let h = GroupSpec::standard(3, 2).unwrap();
        assert!(act(&AlgebraElement::<BigRational>::one(&h), &reg).is_err());
    }

    #[test]
    fn aug_generators_of_whole_group() {
        let g = GroupSpec::standard(3, 2).unwrap();
        let gens = aug_generators::<BigInt>(&g, &g.whole());
        assert_eq!(gens.len(), 2);
        assert_eq!(gens[0].coefficient(&[1, 0]), BigInt::from(-1));
        assert!(gens[0].coefficient(&[0, 0]).is_one());
        assert!(gens[1].coefficient(&[0, 1]) == BigInt::from(-1));
        assert!(gens[1].coefficient(&[1, 0]).is_zero());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn element(g: GroupSpec) -> impl Strategy<Value = AlgebraElement<BigRational>> {
            let n = g.order() as usize;
            prop::collection::vec(-3i64..4, n).prop_map(move |cs| {
                AlgebraElement::from_terms(
                    &g,
                    g.elements().into_iter().zip(cs).map(|(e, c)| (e, BigRational::from_integer(c.into()))),
                )
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(32))]
            #[test]
            fn act_is_multiplicative(
                x in element(GroupSpec::standard(3, 2).unwrap()),
                y in element(GroupSpec::standard(3, 2).unwrap()),
            ) {
                let g = GroupSpec::standard(3, 2).unwrap();
                let lat = GLattice::regular(&g);
                let lhs = act(&(&x * &y), &lat).unwrap();
                let rhs = &act(&x, &lat).unwrap() * &act(&y, &lat).unwrap();
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
