use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::Matrix;
use crate::error::{Error, Result};

/// Dense matrix over the prime field `F_p`, entries kept in `[0, p)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    p: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

/// Inverse of a nonzero residue modulo the prime `p`.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

impl FpMatrix {
    pub fn zeros(p: u64, rows: usize, cols: usize) -> Self {
        FpMatrix { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % p;
        }
        m
    }

    /// Reduces signed entries into `[0, p)`.
    pub fn from_i64_rows(p: u64, rows: &[Vec<i64>], cols: usize) -> Result<Self> {
        let mut m = Self::zeros(p, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::Dimension(format!("row {} has {} entries, expected {}", i, r.len(), cols)));
            }
            for (j, &x) in r.iter().enumerate() {
                m.data[i * cols + j] = x.rem_euclid(p as i64) as u64;
            }
        }
        Ok(m)
    }

    pub fn from_fn(p: u64, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u64) -> Self {
        let mut m = Self::zeros(p, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j) % p;
            }
        }
        m
    }

    pub fn from_int(p: u64, m: &Matrix<BigInt>) -> Self {
        let pb = BigInt::from(p);
        Self::from_fn(p, m.rows(), m.cols(), |i, j| m[(i, j)].mod_floor(&pb).to_u64().unwrap())
    }

    /// Lift to integers with representatives in `[0, p)`.
    pub fn to_int(&self) -> Matrix<BigInt> {
        Matrix::from_fn(self.rows, self.cols, |i, j| BigInt::from(self.get(i, j)))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.p;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn from_row_vecs(p: u64, rows: &[Vec<u64>], cols: usize) -> Self {
        Self::from_fn(p, rows.len(), cols, |i, j| rows[i][j])
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == u64::from(i == j)))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.p, self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.p, rhs.p, "prime mismatch");
        assert_eq!(self.cols, rhs.rows, "F_p product dimension mismatch");
        let p = self.p;
        let mut out = Self::zeros(p, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let o = &mut out.data[i * rhs.cols + j];
                    *o = (*o + a * rhs.data[k * rhs.cols + j]) % p;
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let p = self.p;
        FpMatrix {
            p,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| (a + b) % p).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let p = self.p;
        FpMatrix {
            p,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| (a + p - b) % p).collect(),
        }
    }

    pub fn scale(&self, k: u64) -> Self {
        let p = self.p;
        let k = k % p;
        FpMatrix { p, rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * k % p).collect() }
    }

    pub fn minus_identity(&self) -> Self {
        self.sub(&Self::identity(self.p, self.rows))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.p, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(0, |acc, (a, b)| (acc + a * b) % self.p))
            .collect()
    }

    pub fn vstack(p: u64, blocks: &[&FpMatrix], cols: usize) -> Self {
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            assert_eq!(b.cols, cols, "vstack column mismatch");
            data.extend_from_slice(&b.data);
            rows += b.rows;
        }
        FpMatrix { p, rows, cols, data }
    }

    pub fn hstack(p: u64, blocks: &[&FpMatrix], rows: usize) -> Self {
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(p, rows, cols);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.rows, rows, "hstack row mismatch");
            for i in 0..rows {
                for j in 0..b.cols {
                    m.data[i * cols + off + j] = b.get(i, j);
                }
            }
            off += b.cols;
        }
        m
    }

    pub fn block_diag(p: u64, blocks: &[&FpMatrix]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(p, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.set(r0 + i, c0 + j, b.get(i, j));
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Self::from_fn(self.p, idx.len(), self.cols, |i, j| self.get(idx[i], j))
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        Self::from_fn(self.p, self.rows, idx.len(), |i, j| self.get(i, idx[j]))
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (FpMatrix, Vec<usize>) {
        let p = self.p;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(s) = (r..m.rows).find(|&i| m.get(i, c) != 0) else { continue };
            if s != r {
                for j in 0..m.cols {
                    m.data.swap(s * m.cols + j, r * m.cols + j);
                }
            }
            let inv = inv_mod(m.get(r, c), p);
            for j in 0..m.cols {
                m.data[r * m.cols + j] = m.data[r * m.cols + j] * inv % p;
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c);
                if f == 0 {
                    continue;
                }
                for j in 0..m.cols {
                    let v = m.data[r * m.cols + j];
                    let d = &mut m.data[i * m.cols + j];
                    *d = (*d + p - f * v % p) % p;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Rows form a basis of `{x : self * x = 0}`.
    pub fn kernel(&self) -> FpMatrix {
        let p = self.p;
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = FpMatrix::zeros(p, free.len(), self.cols);
        for (t, &f) in free.iter().enumerate() {
            k.set(t, f, 1);
            for (i, &pc) in pivots.iter().enumerate() {
                k.set(t, pc, (p - r.get(i, f)) % p);
            }
        }
        k
    }

    pub fn inverse(&self) -> Option<FpMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let aug = FpMatrix::hstack(self.p, &[self, &FpMatrix::identity(self.p, n)], n);
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(FpMatrix::from_fn(self.p, n, n, |i, j| r.get(i, n + j)))
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Solves `self * x = b` for a single right-hand side.
    pub fn solve_vec(&self, b: &[u64]) -> Option<Vec<u64>> {
        let col = FpMatrix::from_fn(self.p, self.rows, 1, |i, _| b[i]);
        let aug = FpMatrix::hstack(self.p, &[self, &col], self.rows);
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0; self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(i, self.cols);
        }
        Some(x)
    }

    /// Solves `self * x = b` for every column of `b` at once.
    pub fn solve(&self, b: &FpMatrix) -> Option<FpMatrix> {
        assert_eq!(b.rows, self.rows, "solve: row mismatch");
        let aug = FpMatrix::hstack(self.p, &[self, b], self.rows);
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&c| c >= self.cols) {
            return None;
        }
        let mut x = FpMatrix::zeros(self.p, self.cols, b.cols);
        for (i, &pc) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(pc, j, r.get(i, self.cols + j));
            }
        }
        Some(x)
    }

    pub fn is_nilpotent(&self) -> bool {
        self.rows == self.cols && self.pow(self.rows as u64).is_zero()
    }
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FpMatrix(p={}) {}x{} [", self.p, self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Subspace of `F_p^n` held as a reduced row echelon basis, so equality of
/// subspaces is equality of values.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace {
    basis: FpMatrix,
}

impl Subspace {
    pub fn zero(p: u64, n: usize) -> Self {
        Subspace { basis: FpMatrix::zeros(p, 0, n) }
    }

    pub fn full(p: u64, n: usize) -> Self {
        Subspace { basis: FpMatrix::identity(p, n) }
    }

    /// Span of the rows of `m`.
    pub fn row_span(m: &FpMatrix) -> Self {
        let (r, piv) = m.rref();
        let idx: Vec<usize> = (0..piv.len()).collect();
        Subspace { basis: r.select_rows(&idx) }
    }

    /// Span of the columns of `m`.
    pub fn col_span(m: &FpMatrix) -> Self {
        Self::row_span(&m.transpose())
    }

    pub fn from_vectors(p: u64, n: usize, vs: &[Vec<u64>]) -> Self {
        Self::row_span(&FpMatrix::from_row_vecs(p, vs, n))
    }

    pub fn p(&self) -> u64 {
        self.basis.p
    }

    pub fn ambient(&self) -> usize {
        self.basis.cols
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// Rows are the reduced basis.
    pub fn basis(&self) -> &FpMatrix {
        &self.basis
    }

    pub fn vectors(&self) -> Vec<Vec<u64>> {
        self.basis.to_rows()
    }

    fn check(&self, other: &Subspace) -> Result<()> {
        if self.ambient() != other.ambient() || self.p() != other.p() {
            return Err(Error::Dimension(format!(
                "subspaces of F_{}^{} and F_{}^{}",
                self.p(),
                self.ambient(),
                other.p(),
                other.ambient()
            )));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        Ok(Self::row_span(&FpMatrix::vstack(self.p(), &[&self.basis, &other.basis], self.ambient())))
    }

    pub fn sum_all<'a>(p: u64, n: usize, parts: impl IntoIterator<Item = &'a Subspace>) -> Subspace {
        let mut rows: Vec<Vec<u64>> = Vec::new();
        for s in parts {
            assert_eq!(s.ambient(), n, "subspace ambient mismatch");
            rows.extend(s.vectors());
        }
        Self::from_vectors(p, n, &rows)
    }

    /// Intersection via the left kernel of the stacked bases.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        let p = self.p();
        let (a, b) = (self.dim(), other.dim());
        if a == 0 || b == 0 {
            return Ok(Subspace::zero(p, self.ambient()));
        }
        let stacked = FpMatrix::vstack(p, &[&self.basis, &other.basis], self.ambient());
        let coeffs = stacked.transpose().kernel();
        let lambda = coeffs.select_cols(&(0..a).collect::<Vec<_>>());
        Ok(Self::row_span(&lambda.mul(&self.basis)))
    }

    pub fn contains_vec(&self, v: &[u64]) -> bool {
        let m = FpMatrix::from_row_vecs(self.p(), &[v.to_vec()], self.ambient());
        let s = Self::row_span(&FpMatrix::vstack(self.p(), &[&self.basis, &m], self.ambient()));
        s.dim() == self.dim()
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        self.sum(other).map(|s| s.dim() == self.dim()).unwrap_or(false)
    }

    /// Image under the linear map `x -> a x`.
    pub fn image(&self, a: &FpMatrix) -> Subspace {
        assert_eq!(a.cols(), self.ambient());
        Self::row_span(&self.basis.mul(&a.transpose()))
    }

    /// Common fixed vectors `{x : a x = x for all a}` (all of `F_p^n` for an empty list).
    pub fn fixed_space(p: u64, n: usize, actions: &[&FpMatrix]) -> Subspace {
        if actions.is_empty() {
            return Subspace::full(p, n);
        }
        let diffs: Vec<FpMatrix> = actions.iter().map(|a| a.minus_identity()).collect();
        let refs: Vec<&FpMatrix> = diffs.iter().collect();
        Self::row_span(&FpMatrix::vstack(p, &refs, n).kernel())
    }

    pub fn kernel_of(a: &FpMatrix) -> Subspace {
        Self::row_span(&a.kernel())
    }

    pub fn is_stable_under(&self, a: &FpMatrix) -> bool {
        self.contains(&self.image(a))
    }

    /// Coordinates of `v` in the reduced basis; `None` if `v` is outside.
    pub fn coordinates(&self, v: &[u64]) -> Option<Vec<u64>> {
        self.basis.transpose().solve_vec(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(p: u64, n: usize, vs: &[&[u64]]) -> Subspace {
        Subspace::from_vectors(p, n, &vs.iter().map(|v| v.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn sum_of_axes_is_full() {
        let a = sp(3, 2, &[&[1, 0]]);
        let b = sp(3, 2, &[&[0, 1]]);
        assert_eq!(a.sum(&b).unwrap(), Subspace::full(3, 2));
    }

    #[test]
    fn transverse_lines_meet_in_zero() {
        let a = sp(3, 2, &[&[1, 0]]);
        let b = sp(3, 2, &[&[1, 1]]);
        assert!(a.intersect(&b).unwrap().is_zero());
    }

    #[test]
    fn intersection_of_planes() {
        let a = sp(5, 3, &[&[1, 0, 0], &[0, 1, 0]]);
        let b = sp(5, 3, &[&[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(a.intersect(&b).unwrap(), sp(5, 3, &[&[0, 1, 0]]));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = Subspace::full(3, 2);
        let b = Subspace::full(3, 3);
        assert!(matches!(a.sum(&b), Err(Error::Dimension(_))));
    }

    #[test]
    fn kernel_and_inverse() {
        let m = FpMatrix::from_i64_rows(3, &[vec![1, 1], vec![2, 2]], 2).unwrap();
        let k = m.kernel();
        assert_eq!(k.rows(), 1);
        assert!(m.mul(&k.transpose()).is_zero());
        assert!(m.inverse().is_none());
        let a = FpMatrix::from_i64_rows(5, &[vec![2, 1], vec![1, 1]], 2).unwrap();
        assert!(a.mul(&a.inverse().unwrap()).is_identity());
    }

    #[test]
    fn dimension_formula_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let p = [2u64, 3, 5][rng.gen_range(0..3)];
            let n = rng.gen_range(1..6);
            let mk = |rng: &mut rand_chacha::ChaCha8Rng| {
                let k = rng.gen_range(0..=n);
                let vs: Vec<Vec<u64>> = (0..k).map(|_| (0..n).map(|_| rng.gen_range(0..p)).collect()).collect();
                Subspace::from_vectors(p, n, &vs)
            };
            let a = mk(&mut rng);
            let b = mk(&mut rng);
            let s = a.sum(&b).unwrap();
            let i = a.intersect(&b).unwrap();
            assert_eq!(a.dim() + b.dim(), s.dim() + i.dim());
            assert!(a.contains(&i) && b.contains(&i));
        }
    }
}
