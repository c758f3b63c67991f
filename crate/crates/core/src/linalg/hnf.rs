use super::{IntScalar, Matrix};
use crate::error::{Error, Result};

/// Column-style Hermite normal form `h = m * u` with `u` unimodular.
///
/// `h` is lower echelon: pivot `j` sits at `(pivots[j], j)`, is positive, and
/// every entry left of it in the same row lies in `[0, pivot)`. Columns
/// `rank..` of `h` are zero, so the matching columns of `u` span the kernel.
#[derive(Clone, Debug)]
pub struct Hnf<T> {
    pub h: Matrix<T>,
    pub u: Matrix<T>,
    /// Row index of each pivot; pivot `j` is in column `j`.
    pub pivots: Vec<usize>,
}

impl<T: IntScalar> Hnf<T> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Nonzero columns of `h`: the canonical basis of the column lattice.
    pub fn basis(&self) -> Matrix<T> {
        self.h.col_range(0, self.rank())
    }
}

fn sub_col_multiple<T: IntScalar>(h: &mut Matrix<T>, u: &mut Matrix<T>, dst: usize, src: usize, q: &T) {
    let neg = -q.clone();
    h.add_col_multiple(dst, src, &neg);
    u.add_col_multiple(dst, src, &neg);
}

pub fn hnf<T: IntScalar>(m: &Matrix<T>) -> Hnf<T> {
    let (n, k) = (m.rows(), m.cols());
    let mut h = m.clone();
    let mut u = Matrix::identity(k);
    let mut pivots = Vec::new();
    let mut pc = 0;
    for r in 0..n {
        if pc == k {
            break;
        }
        let mut found = false;
        loop {
            // smallest nonzero entry in the active part of the row
            let mut best: Option<usize> = None;
            for j in pc..k {
                let x = &h[(r, j)];
                if x.is_zero() {
                    continue;
                }
                match best {
                    Some(b) if h[(r, b)].abs() <= x.abs() => {}
                    _ => best = Some(j),
                }
            }
            let Some(b) = best else { break };
            found = true;
            h.swap_cols(pc, b);
            u.swap_cols(pc, b);
            let mut clean = true;
            for j in pc + 1..k {
                if h[(r, j)].is_zero() {
                    continue;
                }
                let q = h[(r, j)].div_floor(&h[(r, pc)]);
                sub_col_multiple(&mut h, &mut u, j, pc, &q);
                if !h[(r, j)].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if !found {
            continue;
        }
        if h[(r, pc)].is_negative() {
            h.negate_col(pc);
            u.negate_col(pc);
        }
        for j in 0..pc {
            let q = h[(r, j)].div_floor(&h[(r, pc)]);
            sub_col_multiple(&mut h, &mut u, j, pc, &q);
        }
        pivots.push(r);
        pc += 1;
    }
    Hnf { h, u, pivots }
}

/// Canonical basis (HNF columns) of the lattice spanned by the columns of `m`.
pub fn column_basis<T: IntScalar>(m: &Matrix<T>) -> Matrix<T> {
    hnf(m).basis()
}

/// Basis of the integer kernel `{x : m x = 0}` as columns. Always saturated.
pub fn int_kernel<T: IntScalar>(m: &Matrix<T>) -> Matrix<T> {
    let f = hnf(m);
    let r = f.rank();
    f.u.col_range(r, m.cols())
}

/// Rows spanning `{w : w m = 0}` over the integers.
pub fn left_kernel<T: IntScalar>(m: &Matrix<T>) -> Matrix<T> {
    int_kernel(&m.transpose()).transpose()
}

/// Solves `m x = b` over the integers, column by column.
pub fn int_solve<T: IntScalar>(m: &Matrix<T>, b: &Matrix<T>) -> Result<Matrix<T>> {
    if m.rows() != b.rows() {
        return Err(Error::Dimension(format!(
            "system has {} rows but right-hand side has {}",
            m.rows(),
            b.rows()
        )));
    }
    let f = hnf(m);
    solve_with(&f, m.cols(), b)
}

fn solve_with<T: IntScalar>(f: &Hnf<T>, ncols: usize, b: &Matrix<T>) -> Result<Matrix<T>> {
    let r = f.rank();
    let mut y: Matrix<T> = Matrix::zeros(r, b.cols());
    for c in 0..b.cols() {
        for (j, &row) in f.pivots.iter().enumerate() {
            let mut acc = b[(row, c)].clone();
            for l in 0..j {
                acc = acc - f.h[(row, l)].clone() * y[(l, c)].clone();
            }
            let (q, rem) = acc.div_rem(&f.h[(row, j)]);
            if !rem.is_zero() {
                return Err(Error::NoSolution);
            }
            y[(j, c)] = q;
        }
    }
    // rows without a pivot must be satisfied automatically
    let hy = &f.h.col_range(0, r) * &y;
    if &hy != b {
        return Err(Error::NoSolution);
    }
    let x = &f.u.col_range(0, r) * &y;
    debug_assert_eq!(x.rows(), ncols);
    Ok(x)
}

/// True when every column of `b` lies in the integer column span of `a`.
pub fn span_contains<T: IntScalar>(a: &Matrix<T>, b: &Matrix<T>) -> bool {
    if b.cols() == 0 {
        return true;
    }
    match int_solve(a, b) {
        Ok(_) => true,
        Err(Error::NoSolution) => false,
        Err(e) => panic!("span_contains: {e}"),
    }
}

pub fn same_span<T: IntScalar>(a: &Matrix<T>, b: &Matrix<T>) -> bool {
    a.rows() == b.rows() && column_basis(a) == column_basis(b)
}

/// Basis of the pure closure `(span ⊗ Q) ∩ Z^n` of the column span of `m`.
pub fn saturate<T: IntScalar>(m: &Matrix<T>) -> Matrix<T> {
    let n = m.rows();
    if m.cols() == 0 {
        return Matrix::zeros(n, 0);
    }
    let w = left_kernel(m);
    let k = if w.rows() == 0 { Matrix::identity(n) } else { int_kernel(&w) };
    column_basis(&k)
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant<T: IntScalar>(m: &Matrix<T>) -> T {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.rows();
    if n == 0 {
        return T::one();
    }
    let mut a = m.clone();
    let mut sign = T::one();
    let mut prev = T::one();
    for k in 0..n {
        if a[(k, k)].is_zero() {
            let Some(s) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                return T::zero();
            };
            a.swap_rows(k, s);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[(i, j)].clone() * a[(k, k)].clone() - a[(i, k)].clone() * a[(k, j)].clone();
                a[(i, j)] = v / prev.clone();
            }
        }
        prev = a[(k, k)].clone();
    }
    sign * a[(n - 1, n - 1)].clone()
}

/// Inverse of a unimodular matrix.
pub fn unimodular_inverse<T: IntScalar>(m: &Matrix<T>) -> Result<Matrix<T>> {
    if !m.is_square() {
        return Err(Error::Dimension("inverse of a non-square matrix".into()));
    }
    int_solve(m, &Matrix::identity(m.rows())).map_err(|_| {
        Error::Invariant("matrix is not invertible over the integers".into())
    })
}
