//! Dense matrices over a commutative ring, with a division-free determinant.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::ring::CommRing;
use crate::error::{Error, Result};

/// All `k`-subsets of `0..n` as sorted index lists, in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < n - k + i {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: CommRing> Matrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if nrows == 0 || ncols == 0 {
            return Err(Error::Dimension("empty matrix".into()));
        }
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Matrix {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// `n x n` identity built from a sample element of the ring.
    pub fn identity(n: usize, sample: &T) -> Self {
        let (zero, one) = (sample.zero_like(), sample.one_like());
        Matrix::from_fn(n, n, |i, j| if i == j { one.clone() } else { zero.clone() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn map<U: CommRing>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<U: CommRing>(&self, f: impl FnMut(&T) -> Result<U>) -> Result<Matrix<U>> {
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect::<Result<_>>()?,
        })
    }

    pub fn transpose(&self) -> Matrix<T> {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix<T> {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    pub fn mul(&self, other: &Matrix<T>) -> Result<Matrix<T>> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let zero = self.data[0].zero_like();
        Ok(Matrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(zero.clone(), |acc, k| {
                acc.plus(&self.get(i, k).times(other.get(k, j)))
            })
        }))
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// Determinant by Berkowitz's algorithm: only ring additions and
    /// multiplications, so it is exact over rings with zero divisors.
    pub fn det(&self) -> Result<T> {
        if self.rows != self.cols {
            return Err(Error::Dimension(format!(
                "determinant of a non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let zero = self.data[0].zero_like();
        let one = self.data[0].one_like();
        // p holds the characteristic polynomial of the leading k x k block,
        // highest coefficient first.
        let mut p = vec![one.clone()];
        for k in 0..n {
            // column of the Toeplitz factor: 1, -a_kk, -R C, -R A C, ...
            let mut col = Vec::with_capacity(k + 2);
            col.push(one.clone());
            col.push(self.get(k, k).negated());
            let mut v: Vec<T> = (0..k).map(|i| self.get(i, k).clone()).collect();
            for _ in 0..k {
                let rv = (0..k).fold(zero.clone(), |acc, j| acc.plus(&self.get(k, j).times(&v[j])));
                col.push(rv.negated());
                v = (0..k)
                    .map(|i| (0..k).fold(zero.clone(), |acc, j| acc.plus(&self.get(i, j).times(&v[j]))))
                    .collect();
            }
            let mut next = vec![zero.clone(); k + 2];
            for (i, slot) in next.iter_mut().enumerate() {
                for (j, pj) in p.iter().enumerate().take(i + 1) {
                    let c = &col[i - j];
                    if !c.is_zero() && !pj.is_zero() {
                        *slot = slot.plus(&c.times(pj));
                    }
                }
            }
            p = next;
        }
        let last = p.pop().unwrap_or(one);
        Ok(if n % 2 == 1 { last.negated() } else { last })
    }

    /// Every `ell x ell` minor, row subsets outermost, both in lexicographic order.
    pub fn minors(&self, ell: usize) -> Result<Vec<T>> {
        let top = self.rows.min(self.cols);
        if ell == 0 || ell > top {
            return Err(Error::OutOfRange {
                what: "minor size",
                value: ell,
                range: format!("1..={top}"),
            });
        }
        let row_sets = k_subsets(self.rows, ell);
        let col_sets = k_subsets(self.cols, ell);
        let mut out = Vec::with_capacity(row_sets.len() * col_sets.len());
        for rs in &row_sets {
            for cs in &col_sets {
                out.push(self.submatrix(rs, cs).det()?);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::{Field, FieldElem};
    use crate::algebra::parse::parse_poly;
    use crate::algebra::poly::vars;
    use crate::algebra::series::TruncSeries;
    use proptest::prelude::*;

    fn fq(q: u32, rows: &[&[i64]]) -> Matrix<FieldElem> {
        let f = Field::Prime(q);
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| f.from_i64(x)).collect()).collect())
            .unwrap()
    }

    /// Permutation expansion, the textbook definition.
    fn leibniz(m: &Matrix<FieldElem>) -> FieldElem {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for pos in 0..n {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    out.push(q);
                }
            }
            out
        }
        let n = m.rows();
        let f = m.get(0, 0).field();
        let mut acc = f.zero();
        for p in perms(n) {
            let inversions = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| p[i] > p[j])
                .count();
            let mut t = f.one();
            for (i, &pi) in p.iter().enumerate() {
                t = &t * m.get(i, pi);
            }
            acc = if inversions % 2 == 0 { &acc + &t } else { &acc - &t };
        }
        acc
    }

    #[test]
    fn subsets_are_lexicographic() {
        assert_eq!(k_subsets(4, 2).len(), 6);
        assert_eq!(k_subsets(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(k_subsets(2, 0), vec![Vec::<usize>::new()]);
        assert!(k_subsets(2, 3).is_empty());
    }

    #[test]
    fn small_determinants() {
        assert_eq!(fq(3, &[&[1, 0], &[0, 1]]).det().unwrap(), Field::Prime(3).one());
        let f = Field::Prime(7);
        let t = |k| TruncSeries::monomial(f.one(), k, 4);
        let z = TruncSeries::zero(f, 4);
        let d = Matrix::from_rows(vec![vec![t(1), z.clone()], vec![z, t(2)]]).unwrap();
        assert_eq!(d.det().unwrap(), t(3));

        let v = vars(&["x1", "x2", "x3", "x4"]);
        let x = |s: &str| parse_poly(s, &v).unwrap();
        let a = Matrix::from_rows(vec![vec![x("x1"), x("x2")], vec![x("x3"), x("x4")]]).unwrap();
        assert_eq!(a.det().unwrap(), x("x1*x4 - x2*x3"));
        assert!(Matrix::from_rows(vec![vec![x("x1"), x("x2")]]).unwrap().det().is_err());
    }

    #[test]
    fn minor_lists() {
        let v = vars(&["x1", "x2", "x3", "x4", "x5", "x6"]);
        let x = |s: &str| parse_poly(s, &v).unwrap();
        let a = Matrix::from_rows(vec![vec![x("x1"), x("x2")], vec![x("x3"), x("x4")]]).unwrap();
        assert_eq!(a.minors(1).unwrap(), vec![x("x1"), x("x2"), x("x3"), x("x4")]);
        assert_eq!(a.minors(2).unwrap(), vec![x("x1*x4 - x2*x3")]);
        assert!(a.minors(3).is_err());
        let b = Matrix::from_rows(vec![
            vec![x("x1"), x("x2")],
            vec![x("x3"), x("x4")],
            vec![x("x5"), x("x6")],
        ])
        .unwrap();
        let m2 = b.minors(2).unwrap();
        assert_eq!(m2.len(), 3);
        assert_eq!(m2[1], x("x1*x6 - x2*x5"));
    }

    fn square(q: u32, n: usize) -> impl Strategy<Value = Matrix<FieldElem>> {
        proptest::collection::vec(0..i64::from(q), n * n).prop_map(move |v| {
            let f = Field::Prime(q);
            Matrix::from_fn(n, n, |i, j| f.from_i64(v[i * n + j]))
        })
    }

    proptest! {
        #[test]
        fn berkowitz_matches_leibniz(m in (1usize..=5).prop_flat_map(|n| square(11, n))) {
            prop_assert_eq!(m.det().unwrap(), leibniz(&m));
        }

        #[test]
        fn det_is_multiplicative(
            (a, b) in (2usize..=3).prop_flat_map(|n| (square(7, n), square(7, n)))
        ) {
            let ab = a.mul(&b).unwrap();
            prop_assert_eq!(ab.det().unwrap(), &a.det().unwrap() * &b.det().unwrap());
        }
    }
}
