//! Random valid diagrams, built as quotients of sums of small blocks.
//!
//! Each block is a cyclic module sitting inside one `V_(i)`: the trivial
//! module for index 0, a Jordan block of the complement generator for a
//! subgroup index. Blocks are glued by relations between blocks of distinct
//! indices, which makes every block lie in the sum of the others.

use rand::seq::SliceRandom;
use rand::Rng;

use super::diagram::Diagram;
use super::lambda::block_exponents;
use crate::error::Result;
use crate::fp_modules::FpModule;
use crate::group::{block_indices, BlockIndex, GroupSpec};
use crate::linalg::{FpMatrix, Subspace};

#[derive(Clone, Copy, Debug)]
pub struct RandomDiagramConfig {
    /// Largest allowed `dim V`.
    pub max_dim: usize,
    /// Mostly one-dimensional blocks glued in pairs `{0, H}`, so that many
    /// outputs are permutation diagrams.
    pub perm_heavy: bool,
    /// Conjugate the result by a random invertible matrix.
    pub base_change: bool,
}

impl Default for RandomDiagramConfig {
    fn default() -> Self {
        RandomDiagramConfig { max_dim: 8, perm_heavy: false, base_change: true }
    }
}

struct Block {
    index: usize,
    start: usize,
    size: usize,
}

fn jordan(p: u64, s: usize) -> FpMatrix {
    FpMatrix::from_fn(p, s, s, |i, j| u64::from(i == j || i + 1 == j))
}

fn g_closure(p: u64, n: usize, gens: &[Vec<u64>], actions: &[FpMatrix]) -> Subspace {
    let mut s = Subspace::from_vectors(p, n, gens);
    loop {
        let mut t = s.clone();
        for a in actions {
            t = t.sum(&s.image(a)).expect("same ambient");
        }
        if t.dim() == s.dim() {
            return s;
        }
        s = t;
    }
}

fn random_invertible<R: Rng>(p: u64, n: usize, rng: &mut R) -> FpMatrix {
    loop {
        let m = FpMatrix::from_fn(p, n, n, |_, _| rng.gen_range(0..p));
        if m.is_invertible() {
            return m;
        }
    }
}

fn plan_blocks<R: Rng>(g: &GroupSpec, cfg: &RandomDiagramConfig, rng: &mut R) -> (Vec<(usize, usize)>, Vec<Vec<usize>>) {
    let p = g.p() as usize;
    let nidx = p + 2;
    let budget = cfg.max_dim + cfg.max_dim / 2;
    let mut blocks: Vec<(usize, usize)> = Vec::new();
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut used = 0;
    let n_clusters = rng.gen_range(1..=3);
    for _ in 0..n_clusters {
        let members: Vec<usize> = if cfg.perm_heavy && rng.gen_bool(0.7) {
            vec![0, rng.gen_range(1..nidx)]
        } else {
            let k = rng.gen_range(2..=nidx.min(4));
            let all: Vec<usize> = (0..nidx).collect();
            all.choose_multiple(rng, k).copied().collect()
        };
        let mut cl = Vec::new();
        for idx in members {
            let size = if idx == 0 || cfg.perm_heavy || p == 2 { 1 } else { rng.gen_range(1..p) };
            if used + size > budget {
                break;
            }
            used += size;
            cl.push(blocks.len());
            blocks.push((idx, size));
        }
        if cl.len() < 2 {
            // an unglued block would break spanning
            blocks.truncate(blocks.len() - cl.len());
            break;
        }
        clusters.push(cl);
    }
    (blocks, clusters)
}

/// One random valid diagram for `C_p x C_p`, or `None` when the sampled
/// quotient is zero or too large.
fn try_random<R: Rng>(g: &GroupSpec, cfg: &RandomDiagramConfig, rng: &mut R) -> Result<Option<Diagram>> {
    let p = g.p();
    let idx = block_indices(g)?;
    let (plan, clusters) = plan_blocks(g, cfg, rng);
    if plan.is_empty() {
        return Ok(None);
    }
    let mut blocks = Vec::new();
    let mut m = 0;
    for &(index, size) in &plan {
        blocks.push(Block { index, start: m, size });
        m += size;
    }
    // action of n and c on W
    let mut actions = vec![FpMatrix::zeros(p, m, m), FpMatrix::zeros(p, m, m)];
    for b in &blocks {
        let (en, ec) = match &idx[b.index] {
            BlockIndex::Zero => (0, 0),
            BlockIndex::Sub(h) => block_exponents(g, h),
        };
        let j = jordan(p, b.size);
        for (a, e) in actions.iter_mut().zip([en, ec]) {
            let je = j.pow(e);
            for r in 0..b.size {
                for c in 0..b.size {
                    a.set(b.start + r, b.start + c, je.get(r, c));
                }
            }
        }
    }
    // the generator of a Jordan block is its last basis vector
    let gen_of = |b: &Block| b.start + b.size - 1;
    let mut rels: Vec<Vec<u64>> = Vec::new();
    for cl in &clusters {
        let mut v = vec![0; m];
        for &t in cl {
            v[gen_of(&blocks[t])] = rng.gen_range(1..p);
            // occasionally perturb by lower terms of the same block
            let b = &blocks[t];
            for k in b.start..gen_of(b) {
                if rng.gen_bool(0.3) {
                    v[k] = rng.gen_range(0..p);
                }
            }
        }
        rels.push(v);
    }
    if !cfg.perm_heavy || rng.gen_bool(0.3) {
        for _ in 0..rng.gen_range(0..=1) {
            rels.push((0..m).map(|_| rng.gen_range(0..p)).collect());
        }
    }
    let q = g_closure(p, m, &rels, &actions);
    let d = m - q.dim();
    if d == 0 || d > cfg.max_dim {
        return Ok(None);
    }
    let proj = q.basis().kernel();
    let (proj, _) = Subspace::row_span(&proj).basis().rref();
    let section = proj.solve(&FpMatrix::identity(p, d)).expect("projection is onto");
    let vacts: Vec<FpMatrix> = actions.iter().map(|a| proj.mul(a).mul(&section)).collect();
    let module = FpModule::new(g.clone(), d, vacts)?;
    let subspaces = (0..idx.len())
        .map(|i| {
            let cols: Vec<Vec<u64>> =
                blocks.iter().filter(|b| b.index == i).flat_map(|b| (b.start..b.start + b.size).map(|k| proj.col(k))).collect();
            Subspace::from_vectors(p, d, &cols)
        })
        .collect();
    let mut dgm = Diagram::new(module, subspaces)?;
    if cfg.base_change {
        dgm = dgm.change_basis(&random_invertible(p, d, rng))?;
    }
    Ok(Some(dgm))
}

/// A random valid diagram with `1 <= dim V <= cfg.max_dim`.
pub fn random_diagram<R: Rng>(g: &GroupSpec, cfg: &RandomDiagramConfig, rng: &mut R) -> Result<Diagram> {
    loop {
        if let Some(d) = try_random(g, cfg, rng)? {
            debug_assert!(d.violations().is_empty(), "{:?}", d.violations());
            return Ok(d);
        }
    }
}
