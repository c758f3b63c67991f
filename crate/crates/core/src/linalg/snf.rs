use super::{IntScalar, Matrix};

/// Smith normal form `left * m * right = diag(divisors, 0, ..)`.
///
/// `left_inv` is tracked alongside `left` so quotient maps come with an
/// integral section for free.
#[derive(Clone, Debug)]
pub struct Snf<T> {
    /// Nonzero invariant factors, positive, each dividing the next.
    pub divisors: Vec<T>,
    pub left: Matrix<T>,
    pub left_inv: Matrix<T>,
    pub right: Matrix<T>,
}

struct Work<T> {
    a: Matrix<T>,
    left: Matrix<T>,
    left_inv: Matrix<T>,
    right: Matrix<T>,
}

impl<T: IntScalar> Work<T> {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.left.swap_rows(i, j);
        self.left_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.right.swap_cols(i, j);
    }

    /// row[dst] += k row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &T) {
        self.a.add_row_multiple(dst, src, k);
        self.left.add_row_multiple(dst, src, k);
        self.left_inv.add_col_multiple(src, dst, &-k.clone());
    }

    fn add_col(&mut self, dst: usize, src: usize, k: &T) {
        self.a.add_col_multiple(dst, src, k);
        self.right.add_col_multiple(dst, src, k);
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        self.left.negate_row(i);
        self.left_inv.negate_col(i);
    }
}

pub fn snf<T: IntScalar>(m: &Matrix<T>) -> Snf<T> {
    let (n, k) = (m.rows(), m.cols());
    let mut w = Work {
        a: m.clone(),
        left: Matrix::identity(n),
        left_inv: Matrix::identity(n),
        right: Matrix::identity(k),
    };
    let mut divisors = Vec::new();
    for t in 0..n.min(k) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..k {
                    let x = &w.a[(i, j)];
                    if x.is_zero() {
                        continue;
                    }
                    match best {
                        Some((bi, bj)) if w.a[(bi, bj)].abs() <= x.abs() => {}
                        _ => best = Some((i, j)),
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return Snf { divisors, left: w.left, left_inv: w.left_inv, right: w.right };
            };
            w.swap_rows(t, bi);
            w.swap_cols(t, bj);
            let mut clean = true;
            for i in t + 1..n {
                if w.a[(i, t)].is_zero() {
                    continue;
                }
                let q = w.a[(i, t)].div_floor(&w.a[(t, t)]);
                w.add_row(i, t, &-q);
                clean &= w.a[(i, t)].is_zero();
            }
            for j in t + 1..k {
                if w.a[(t, j)].is_zero() {
                    continue;
                }
                let q = w.a[(t, j)].div_floor(&w.a[(t, t)]);
                w.add_col(j, t, &-q);
                clean &= w.a[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into the pivot row and retry
            let piv = w.a[(t, t)].clone();
            let bad = (t + 1..n).find(|&i| (t + 1..k).any(|j| !w.a[(i, j)].is_multiple_of(&piv)));
            match bad {
                Some(i) => w.add_row(t, i, &T::one()),
                None => break,
            }
        }
        if w.a[(t, t)].is_negative() {
            w.negate_row(t);
        }
        divisors.push(w.a[(t, t)].clone());
    }
    Snf { divisors, left: w.left, left_inv: w.left_inv, right: w.right }
}

/// Structure of `Z^n / span(sub)`.
///
/// Quotient coordinates of `x` are `projection * x`; the first
/// `torsion.len()` coordinates are read modulo the matching divisor, the
/// remaining `free_rank` are free. `section` lifts quotient coordinates
/// back: `projection * section = I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientStructure<T> {
    pub ambient_rank: usize,
    pub free_rank: usize,
    pub torsion: Vec<T>,
    pub projection: Matrix<T>,
    pub section: Matrix<T>,
}

impl<T: IntScalar> QuotientStructure<T> {
    pub fn is_torsion_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> T {
        self.torsion.iter().fold(T::one(), |a, d| a * d.clone())
    }

    pub fn free_projection(&self) -> Matrix<T> {
        let t = self.torsion.len();
        self.projection.row_range(t, t + self.free_rank)
    }

    pub fn free_section(&self) -> Matrix<T> {
        let t = self.torsion.len();
        self.section.col_range(t, t + self.free_rank)
    }

    pub fn torsion_projection(&self) -> Matrix<T> {
        self.projection.row_range(0, self.torsion.len())
    }

    pub fn torsion_section(&self) -> Matrix<T> {
        self.section.col_range(0, self.torsion.len())
    }

    /// Matrix of an endomorphism of the ambient lattice on the free part of
    /// the quotient. Only meaningful when `sub` is stable under `action`.
    pub fn induced_free(&self, action: &Matrix<T>) -> Matrix<T> {
        &(&self.free_projection() * action) * &self.free_section()
    }
}

/// Quotient of `Z^ambient_rank` by the column span of `sub`.
pub fn quotient<T: IntScalar>(ambient_rank: usize, sub: &Matrix<T>) -> QuotientStructure<T> {
    assert_eq!(sub.rows(), ambient_rank, "sublattice lives in a different ambient space");
    let s = snf(sub);
    let r = s.divisors.len();
    let mut idx: Vec<usize> = (0..r).filter(|&i| !s.divisors[i].is_one()).collect();
    let torsion: Vec<T> = idx.iter().map(|&i| s.divisors[i].clone()).collect();
    idx.extend(r..ambient_rank);
    QuotientStructure {
        ambient_rank,
        free_rank: ambient_rank - r,
        torsion,
        projection: s.left.select_rows(&idx),
        section: s.left_inv.select_cols(&idx),
    }
}

/// True when the column span of `m` is a pure sublattice (all invariant factors 1).
pub fn is_saturated<T: IntScalar>(m: &Matrix<T>) -> bool {
    snf(m).divisors.iter().all(|d| d.is_one())
}

#[cfg(test)]
mod tests {
    use super::super::hnf::determinant;
    use super::*;
    use proptest::prelude::*;

    fn mat(rows: &[&[i64]]) -> Matrix<i64> {
        let c = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(rows.iter().map(|r| r.to_vec()).collect(), c).unwrap()
    }

    fn is_diag_form(d: &Matrix<i64>, divs: &[i64]) -> bool {
        (0..d.rows()).all(|i| {
            (0..d.cols()).all(|j| {
                let want = if i == j && i < divs.len() { divs[i] } else { 0 };
                d[(i, j)] == want
            })
        })
    }

    /// Order of `Z^2 / span(m)` by enumerating residues in a box that
    /// contains a fundamental domain, for nonsingular 2x2 `m`.
    fn quotient_order_2x2(m: &Matrix<i64>) -> usize {
        let det = determinant(m).abs();
        let mut reps: Vec<(i64, i64)> = Vec::new();
        for x in 0..det {
            for y in 0..det {
                let known = reps.iter().any(|&(a, b)| {
                    let v = mat(&[&[x - a], &[y - b]]);
                    super::super::hnf::span_contains(m, &v)
                });
                if !known {
                    reps.push((x, y));
                }
            }
        }
        reps.len()
    }

    #[test]
    fn identity_divisors() {
        assert_eq!(snf(&Matrix::<i64>::identity(2)).divisors, vec![1, 1]);
    }

    #[test]
    fn coprime_diagonal_merges() {
        let m = mat(&[&[2, 0], &[0, 3]]);
        let s = snf(&m);
        assert_eq!(s.divisors, vec![1, 6]);
        assert_eq!(quotient_order_2x2(&m), 6);
        // cyclic: some element has order 6
        let q = quotient(2, &m);
        assert_eq!(q.torsion, vec![6]);
        assert_eq!(q.free_rank, 0);
    }

    #[test]
    fn scalar_divisors() {
        assert_eq!(snf(&mat(&[&[3, 0], &[0, 3]])).divisors, vec![3, 3]);
    }

    #[test]
    fn quotient_examples() {
        let q = quotient(2, &Matrix::<i64>::identity(2));
        assert_eq!((q.free_rank, q.torsion.len()), (0, 0));
        let q = quotient(2, &mat(&[&[2, 0], &[0, 2]]));
        assert_eq!(q.torsion, vec![2, 2]);
        let q = quotient(3, &Matrix::<i64>::zeros(3, 0));
        assert_eq!(q.free_rank, 3);
        assert!(q.is_torsion_free());
    }

    #[test]
    fn saturated_quotient_section() {
        let sub = mat(&[&[1], &[1], &[0]]);
        let q = quotient(3, &sub);
        assert!(q.is_torsion_free());
        assert_eq!(q.free_rank, 2);
        assert!((&q.projection * &q.section).is_identity());
        assert!((&q.projection * &sub).is_zero());
    }

    fn small_matrix() -> impl Strategy<Value = Matrix<i64>> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            prop::collection::vec(-9i64..10, r * c)
                .prop_map(move |d| Matrix::from_vec(r, c, d).unwrap())
        })
    }

    fn unimodular(n: usize, ops: Vec<(usize, usize, i64)>) -> Matrix<i64> {
        let mut u = Matrix::identity(n);
        for (a, b, k) in ops {
            let (a, b) = (a % n, b % n);
            if a != b {
                u.add_row_multiple(a, b, &k);
            } else {
                u.negate_row(a);
            }
        }
        u
    }

    proptest! {
        #[test]
        fn snf_is_diagonal_chain(m in small_matrix()) {
            let s = snf(&m);
            let d = &(&s.left * &m) * &s.right;
            prop_assert!(is_diag_form(&d, &s.divisors));
            for w in s.divisors.windows(2) {
                prop_assert_eq!(w[1] % w[0], 0);
            }
            prop_assert!((&s.left * &s.left_inv).is_identity());
            prop_assert_eq!(determinant(&s.right).abs(), 1);
        }

        #[test]
        fn divisors_invariant_under_unimodular_change(
            m in small_matrix(),
            ops_l in prop::collection::vec((0usize..5, 0usize..5, -3i64..4), 0..6),
            ops_r in prop::collection::vec((0usize..5, 0usize..5, -3i64..4), 0..6),
        ) {
            let l = unimodular(m.rows(), ops_l);
            let r = unimodular(m.cols(), ops_r);
            let m2 = &(&l * &m) * &r;
            prop_assert_eq!(snf(&m).divisors, snf(&m2).divisors);
        }

        #[test]
        fn torsion_order_is_determinant(d in prop::collection::vec(-6i64..7, 9)) {
            let m = Matrix::from_vec(3, 3, d).unwrap();
            let det = determinant(&m).abs();
            prop_assume!(det != 0);
            prop_assert_eq!(quotient(3, &m).torsion_order(), det);
        }
    }
}
