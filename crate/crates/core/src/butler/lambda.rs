use crate::error::{Error, Result};
use crate::glattice::{cyclotomic_companion, GLattice};
use crate::group::{BlockIndex, Element, GroupSpec, SubgroupId};
use crate::IntMatrix;

/// Integral model of the block `e_i Z G` of `C_p x C_p`.
#[derive(Clone, Debug)]
pub struct LambdaModel {
    pub index: BlockIndex,
    pub lattice: GLattice,
}

/// Generator used as `x` for the block of `h`: `c` unless `h = <c>`, then `n`.
pub fn complement_generator(g: &GroupSpec, h: &SubgroupId) -> Element {
    if h.generator() == g.generator(1).as_slice() {
        g.generator(0)
    } else {
        g.generator(1)
    }
}

fn require_rank_two(g: &GroupSpec) -> Result<()> {
    if g.rank() != 2 {
        return Err(Error::Unsupported(format!("the block decomposition is implemented for C_p x C_p, got {g}")));
    }
    Ok(())
}

/// Exponents `(en, ec)` such that `n` and `c` act as `x^en`, `x^ec` on the
/// block of `h`, where `x` is the complement generator.
pub(crate) fn block_exponents(g: &GroupSpec, h: &SubgroupId) -> (u64, u64) {
    let p = g.p();
    let e = h.generator();
    match (e[0], e[1]) {
        (1, 0) => (0, 1),
        (0, 1) => (1, 0),
        // n c^a trivial, c = x, so n = x^(-a)
        (1, a) => ((p - a) % p, 1),
        _ => unreachable!("normalized subgroup id"),
    }
}

pub fn lambda_model(g: &GroupSpec, i: &BlockIndex) -> Result<LambdaModel> {
    require_rank_two(g)?;
    let lattice = match i {
        BlockIndex::Zero => GLattice::trivial(g, 1),
        BlockIndex::Sub(h) => {
            let t = cyclotomic_companion(g.p());
            let (en, ec) = block_exponents(g, h);
            GLattice::new(g.clone(), t.rows(), vec![t.pow(en), t.pow(ec)])?
        }
    };
    Ok(LambdaModel { index: i.clone(), lattice })
}

impl LambdaModel {
    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    /// Matrix of the complement generator (identity for the trivial block).
    pub fn x_matrix(&self) -> IntMatrix {
        match &self.index {
            BlockIndex::Zero => IntMatrix::identity(1),
            BlockIndex::Sub(h) => self.lattice.element_matrix(&complement_generator(self.lattice.group(), h)),
        }
    }
}
