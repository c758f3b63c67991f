use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{FpModule, DIM_CAP};
use crate::error::{Error, Result};
use crate::linalg::{FpMatrix, Subspace};

/// Spaces with at most this many elements are searched exhaustively.
pub const EXHAUSTIVE_LIMIT: u64 = 1 << 20;
const RANDOM_TRIALS: usize = 4096;

#[derive(Clone, Debug)]
pub struct Summand {
    pub module: FpModule,
    /// Columns span the summand in the coordinates of the decomposed module.
    pub basis: FpMatrix,
    /// False when indecomposability rests on an exhausted random search.
    pub certified: bool,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub summands: Vec<Summand>,
    pub randomized: bool,
}

#[derive(Clone, Debug)]
pub struct IsoOutcome {
    /// An equivariant isomorphism when one was found.
    pub map: Option<FpMatrix>,
    /// True when "none found" comes from a bounded random search.
    pub randomized: bool,
}

enum Step {
    Split(FpMatrix, FpMatrix),
    Indecomposable { certified: bool },
}

fn combination(p: u64, basis: &[FpMatrix], coeffs: &[u64]) -> FpMatrix {
    let (r, c) = (basis[0].rows(), basis[0].cols());
    let mut x = FpMatrix::zeros(p, r, c);
    for (b, &k) in basis.iter().zip(coeffs) {
        if k != 0 {
            x = x.add(&b.scale(k));
        }
    }
    x
}

fn random_coeffs(p: u64, n: usize, rng: &mut ChaCha8Rng) -> Vec<u64> {
    (0..n).map(|_| rng.gen_range(0..p)).collect()
}

/// Enumerates every coefficient vector in `F_p^n`.
fn all_coeffs(p: u64, n: usize) -> impl Iterator<Item = Vec<u64>> {
    let total = p.pow(n as u32);
    (1..total).map(move |mut code| {
        (0..n)
            .map(|_| {
                let d = code % p;
                code /= p;
                d
            })
            .collect()
    })
}

fn space_size(p: u64, n: usize) -> Option<u64> {
    p.checked_pow(n as u32)
}

/// Stable kernel and image of `x^dim`, when both are proper.
fn fitting(x: &FpMatrix) -> Option<(FpMatrix, FpMatrix)> {
    let n = x.rows();
    let y = x.pow(n as u64);
    let r = y.rank();
    if r == 0 || r == n {
        return None;
    }
    let im = Subspace::col_span(&y).basis().transpose();
    let ker = y.kernel().transpose();
    Some((ker, im))
}

fn flatten(p: u64, ms: &[FpMatrix]) -> Subspace {
    let n = ms.first().map_or(0, |m| m.rows() * m.cols());
    let rows: Vec<Vec<u64>> = ms.iter().map(|m| m.to_rows().concat()).collect();
    Subspace::from_vectors(p, n, &rows)
}

fn unflatten(p: u64, v: &[u64], n: usize) -> FpMatrix {
    FpMatrix::from_fn(p, n, n, |i, j| v[i * n + j])
}

/// Coordinates (in the endomorphism basis) of the endomorphisms with image
/// in `rad M` or killing `soc M`. Both are ideals; their sum is returned
/// only when it is nilpotent, in which case it lies in the radical of `End M`.
fn nilpotent_ideal(m: &FpModule, end: &[FpMatrix]) -> Subspace {
    let p = m.p();
    let n = m.dim();
    let e = end.len();
    let rad = m.radical_of(&Subspace::full(p, n));
    let soc = m.fixed_space(&m.group().whole());
    // image in rad: annihilator rows q with q x = 0
    let ann = rad.basis().kernel();
    let lin = |f: &dyn Fn(&FpMatrix) -> FpMatrix| -> Subspace {
        let cols: Vec<Vec<u64>> = end.iter().map(|x| f(x).to_rows().concat()).collect();
        let len = cols.first().map_or(0, |c| c.len());
        if len == 0 {
            return Subspace::full(p, e);
        }
        let a = FpMatrix::from_fn(p, len, e, |i, j| cols[j][i]);
        Subspace::kernel_of(&a)
    };
    let k1 = lin(&|x| ann.mul(x));
    let k2 = lin(&|x| x.mul(&soc.basis().transpose()));
    let ideal = k1.sum(&k2).expect("same ambient");
    if ideal.is_zero() {
        return ideal;
    }
    let mats: Vec<FpMatrix> = ideal.vectors().iter().map(|c| combination(p, end, c)).collect();
    let mut power = flatten(p, &mats);
    for _ in 0..=n {
        if power.is_zero() {
            return ideal;
        }
        let cur: Vec<FpMatrix> = power.vectors().iter().map(|v| unflatten(p, v, n)).collect();
        let prods: Vec<FpMatrix> = cur.iter().flat_map(|x| mats.iter().map(move |y| x.mul(y))).collect();
        let next = flatten(p, &prods);
        if next == power {
            break;
        }
        power = next;
    }
    Subspace::zero(p, e)
}

fn split_once(m: &FpModule, rng: &mut ChaCha8Rng) -> Step {
    let p = m.p();
    let n = m.dim();
    if n <= 1 {
        return Step::Indecomposable { certified: true };
    }
    // simple socle or simple head forces indecomposability
    let whole = m.group().whole();
    if m.fixed_space(&whole).dim() == 1 || m.radical_of(&Subspace::full(p, n)).dim() + 1 == n {
        return Step::Indecomposable { certified: true };
    }
    let end = m.end_basis();
    if end.len() == 1 {
        return Step::Indecomposable { certified: true };
    }
    for x in &end {
        if let Some((a, b)) = fitting(x) {
            return Step::Split(a, b);
        }
    }
    for _ in 0..64 {
        let x = combination(p, &end, &random_coeffs(p, end.len(), rng));
        if let Some((a, b)) = fitting(&x) {
            return Step::Split(a, b);
        }
    }
    // End M is local iff every element outside a nilpotent ideal is
    // nilpotent or invertible; search a complement of the ideal.
    let ideal = nilpotent_ideal(m, &end);
    let (_, pivots) = ideal.basis().rref();
    let comp: Vec<FpMatrix> =
        (0..end.len()).filter(|i| !pivots.contains(i)).map(|i| end[i].clone()).collect();
    let check = |x: &FpMatrix| -> Option<Step> { fitting(x).map(|(a, b)| Step::Split(a, b)) };
    match space_size(p, comp.len()) {
        Some(sz) if sz <= EXHAUSTIVE_LIMIT => {
            for c in all_coeffs(p, comp.len()) {
                if let Some(s) = check(&combination(p, &comp, &c)) {
                    return s;
                }
            }
            Step::Indecomposable { certified: true }
        }
        _ => {
            for _ in 0..RANDOM_TRIALS {
                let c = random_coeffs(p, comp.len(), rng);
                if let Some(s) = check(&combination(p, &comp, &c)) {
                    return s;
                }
            }
            Step::Indecomposable { certified: false }
        }
    }
}

/// Splits `m` into indecomposable summands by Fitting's lemma.
pub fn fp_decompose(m: &FpModule) -> Result<Decomposition> {
    fp_decompose_seeded(m, m.content_seed())
}

/// [`fp_decompose`] with an explicit seed for the random searches.
pub fn fp_decompose_seeded(m: &FpModule, seed: u64) -> Result<Decomposition> {
    if m.dim() > DIM_CAP {
        return Err(Error::Unsupported(format!("decomposition is capped at dimension {DIM_CAP}")));
    }
    let p = m.p();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stack = vec![(m.clone(), FpMatrix::identity(p, m.dim()))];
    let mut summands = Vec::new();
    while let Some((cur, basis)) = stack.pop() {
        match split_once(&cur, &mut rng) {
            Step::Split(a, b) => {
                // push b first so the kernel part is processed first
                for part in [b, a] {
                    let sub = cur.submodule(&part)?;
                    stack.push((sub, basis.mul(&part)));
                }
            }
            Step::Indecomposable { certified } => {
                if cur.dim() > 0 {
                    summands.push(Summand { module: cur, basis, certified });
                }
            }
        }
    }
    let randomized = summands.iter().any(|s| !s.certified);
    Ok(Decomposition { summands, randomized })
}

/// Searches the span of `basis` for an invertible matrix: exhaustively when
/// the span is small, otherwise by seeded random trials.
pub fn find_invertible(p: u64, basis: &[FpMatrix], seed: u64) -> IsoOutcome {
    if basis.is_empty() {
        return IsoOutcome { map: None, randomized: false };
    }
    if let Some(x) = basis.iter().find(|x| x.is_invertible()) {
        return IsoOutcome { map: Some(x.clone()), randomized: false };
    }
    match space_size(p, basis.len()) {
        Some(sz) if sz <= EXHAUSTIVE_LIMIT => {
            let map = all_coeffs(p, basis.len()).map(|c| combination(p, basis, &c)).find(|x| x.is_invertible());
            IsoOutcome { map, randomized: false }
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..RANDOM_TRIALS {
                let x = combination(p, basis, &random_coeffs(p, basis.len(), &mut rng));
                if x.is_invertible() {
                    return IsoOutcome { map: Some(x), randomized: false };
                }
            }
            IsoOutcome { map: None, randomized: true }
        }
    }
}

/// Equivariant isomorphism `a -> b`, if one exists.
pub fn fp_iso(a: &FpModule, b: &FpModule) -> Result<IsoOutcome> {
    if a.group() != b.group() {
        return Err(Error::GroupMismatch(format!("{} vs {}", a.group(), b.group())));
    }
    if a.dim() > DIM_CAP || b.dim() > DIM_CAP {
        return Err(Error::Unsupported(format!("isomorphism search is capped at dimension {DIM_CAP}")));
    }
    if a.dim() != b.dim() || a.invariant_vector() != b.invariant_vector() {
        return Ok(IsoOutcome { map: None, randomized: false });
    }
    if a.dim() == 0 {
        return Ok(IsoOutcome { map: Some(FpMatrix::zeros(a.p(), 0, 0)), randomized: false });
    }
    let hom = a.hom_basis(b)?;
    Ok(find_invertible(a.p(), &hom, a.content_seed() ^ b.content_seed().rotate_left(1)))
}
