use crate::error::{Error, Result};
use crate::fp_modules::FpModule;
use crate::group::{block_indices, BlockIndex, GroupSpec};
use crate::linalg::{FpMatrix, Subspace};

use super::lambda::complement_generator;

/// A module `V` over `F_p[C_p x C_p]` with one subspace per block index,
/// stored in canonical index order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Diagram {
    module: FpModule,
    subspaces: Vec<Subspace>,
}

impl Diagram {
    /// Checks shapes only; see [`Diagram::violations`].
    pub fn new(module: FpModule, subspaces: Vec<Subspace>) -> Result<Self> {
        let g = module.group();
        let idx = block_indices(g)?;
        if subspaces.len() != idx.len() {
            return Err(Error::Dimension(format!("{} subspaces for {} block indices", subspaces.len(), idx.len())));
        }
        for (s, i) in subspaces.iter().zip(&idx) {
            if s.ambient() != module.dim() || s.p() != g.p() {
                return Err(Error::Dimension(format!(
                    "subspace {} lives in F_{}^{}, expected F_{}^{}",
                    i.label(g),
                    s.p(),
                    s.ambient(),
                    g.p(),
                    module.dim()
                )));
            }
        }
        Ok(Diagram { module, subspaces })
    }

    pub fn validated(module: FpModule, subspaces: Vec<Subspace>) -> Result<Self> {
        let d = Self::new(module, subspaces)?;
        let v = d.violations();
        if v.is_empty() {
            Ok(d)
        } else {
            Err(Error::InvalidDiagram(v))
        }
    }

    /// The diagram with `V = 0`.
    pub fn zero(g: &GroupSpec) -> Result<Self> {
        let n = block_indices(g)?.len();
        Self::new(FpModule::trivial(g, 0), vec![Subspace::zero(g.p(), 0); n])
    }

    pub fn group(&self) -> &GroupSpec {
        self.module.group()
    }

    pub fn p(&self) -> u64 {
        self.module.p()
    }

    pub fn dim(&self) -> usize {
        self.module.dim()
    }

    pub fn module(&self) -> &FpModule {
        &self.module
    }

    pub fn indices(&self) -> Vec<BlockIndex> {
        block_indices(self.group()).expect("rank two")
    }

    pub fn subspaces(&self) -> &[Subspace] {
        &self.subspaces
    }

    pub fn subspace(&self, i: &BlockIndex) -> &Subspace {
        let k = self.indices().iter().position(|j| j == i).expect("block index of this group");
        &self.subspaces[k]
    }

    /// `dim V` followed by the dimensions of the subspaces.
    pub fn dimension_vector(&self) -> Vec<usize> {
        std::iter::once(self.dim()).chain(self.subspaces.iter().map(|s| s.dim())).collect()
    }

    /// Every violated diagram axiom.
    pub fn violations(&self) -> Vec<String> {
        let g = self.group().clone();
        let p = self.p();
        let n = self.dim();
        let idx = self.indices();
        let mut out = self.module.violations();
        for (s, i) in self.subspaces.iter().zip(&idx) {
            let label = i.label(&g);
            for (a, name) in self.module.actions().iter().zip(g.names()) {
                if !s.is_stable_under(a) {
                    out.push(format!("V_({label}) is not stable under {name}"));
                }
            }
            match i {
                BlockIndex::Zero => {
                    for (a, name) in self.module.actions().iter().zip(g.names()) {
                        if !s.image(&a.minus_identity()).is_zero() {
                            out.push(format!("{name} does not act trivially on V_(0)"));
                        }
                    }
                }
                BlockIndex::Sub(h) => {
                    let hm = self.module.element_matrix(h.generator());
                    if !s.image(&hm.minus_identity()).is_zero() {
                        out.push(format!("{label} does not act trivially on V_({label})"));
                    }
                    let x = self.module.element_matrix(&complement_generator(&g, h));
                    let mut hat = FpMatrix::zeros(p, n, n);
                    let mut pw = FpMatrix::identity(p, n);
                    for _ in 0..p {
                        hat = hat.add(&pw);
                        pw = pw.mul(&x);
                    }
                    if !s.image(&hat).is_zero() {
                        out.push(format!("V_({label}) is not killed by the sum over a complement of {label}"));
                    }
                }
            }
        }
        for (j, i) in idx.iter().enumerate() {
            let others = self.subspaces.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, s)| s);
            if Subspace::sum_all(p, n, others).dim() != n {
                out.push(format!("the subspaces other than V_({}) do not span V", i.label(&g)));
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidDiagram(v))
        }
    }

    pub fn direct_sum(&self, other: &Diagram) -> Result<Self> {
        let module = self.module.direct_sum(&other.module)?;
        let (a, b) = (self.dim(), other.dim());
        let p = self.p();
        let subspaces = self
            .subspaces
            .iter()
            .zip(&other.subspaces)
            .map(|(s, t)| {
                let mut rows: Vec<Vec<u64>> = s.vectors().into_iter().map(|mut v| {
                    v.extend(std::iter::repeat(0).take(b));
                    v
                }).collect();
                rows.extend(t.vectors().into_iter().map(|v| {
                    let mut w = vec![0; a];
                    w.extend(v);
                    w
                }));
                Subspace::from_vectors(p, a + b, &rows)
            })
            .collect();
        Diagram::new(module, subspaces)
    }

    /// Same diagram in new coordinates `v -> q v`.
    pub fn change_basis(&self, q: &FpMatrix) -> Result<Self> {
        let module = self.module.conjugate(q)?;
        let subspaces = self.subspaces.iter().map(|s| s.image(q)).collect();
        Diagram::new(module, subspaces)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Diagram of `Z[G/H]`: `F_p` with `V_(0) = V_(H) = V`.
    fn perm_diagram(g: &GroupSpec, h: &str) -> Diagram {
        let hi = BlockIndex::parse(g, h).unwrap();
        let subs = block_indices(g)
            .unwrap()
            .iter()
            .map(|i| {
                if *i == BlockIndex::Zero || *i == hi {
                    Subspace::full(g.p(), 1)
                } else {
                    Subspace::zero(g.p(), 1)
                }
            })
            .collect();
        Diagram::new(FpModule::trivial(g, 1), subs).unwrap()
    }

    #[test]
    fn permutation_diagrams_validate() {
        for p in [2u64, 3, 5] {
            let g = GroupSpec::standard(p, 2).unwrap();
            for i in block_indices(&g).unwrap().iter().skip(1) {
                let d = perm_diagram(&g, &i.label(&g));
                assert!(d.violations().is_empty(), "{:?}", d.violations());
            }
        }
    }

    #[test]
    fn dropping_a_subspace_is_reported() {
        let g = GroupSpec::standard(3, 2).unwrap();
        let d = perm_diagram(&g, "N");
        let mut subs = d.subspaces().to_vec();
        subs[0] = Subspace::zero(3, 1);
        let bad = Diagram::new(d.module().clone(), subs).unwrap();
        let v = bad.violations();
        assert!(v.iter().any(|s| s.contains("other than V_(N)")), "{v:?}");
    }

    #[test]
    fn zero_diagram_is_valid() {
        let g = GroupSpec::standard(3, 2).unwrap();
        assert!(Diagram::zero(&g).unwrap().violations().is_empty());
    }
}
