//! Smith normal form over ℤ.
//!
//! Pivoting takes the nonzero entry of least absolute value in the remaining
//! block, ties broken in row-major order.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::Matrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, x) in row.iter().enumerate() {
                m[(i, j)] = x.clone().into();
            }
        }
        m
    }

    /// Integer view of a matrix whose entries are all integral.
    pub fn from_matrix(m: &Matrix) -> Result<Self> {
        let mut out = Self::zeros(m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out[(i, j)] = m
                    .get(i, j)
                    .to_bigint()
                    .ok_or_else(|| Error::Internal(format!("non-integral entry {} at ({i},{j})", m.get(i, j))))?;
            }
        }
        Ok(out)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if m[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m[(i, k)].is_zero()) else {
                    return BigInt::zero();
                };
                m.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                    m[(i, j)] = v;
                }
            }
            prev = m[(k, k)].clone();
        }
        sign * prev
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let v = &self[(src, j)] * k;
            if !v.is_zero() {
                self[(dst, j)] += v;
            }
        }
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let v = &self[(i, src)] * k;
            if !v.is_zero() {
                self[(i, dst)] += v;
            }
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -&self[(r, j)];
            self[(r, j)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// `u · m · v = d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries, each dividing the next.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.d.diagonal().into_iter().filter(|x| !x.is_zero()).collect()
    }
}

struct Reducer {
    m: IntMatrix,
    u: Option<IntMatrix>,
    v: Option<IntMatrix>,
}

impl Reducer {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.m.swap_rows(a, b);
        if let Some(u) = &mut self.u {
            u.swap_rows(a, b);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.m.swap_cols(a, b);
        if let Some(v) = &mut self.v {
            v.swap_cols(a, b);
        }
    }

    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.m.add_row(dst, src, k);
        if let Some(u) = &mut self.u {
            u.add_row(dst, src, k);
        }
    }

    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.m.add_col(dst, src, k);
        if let Some(v) = &mut self.v {
            v.add_col(dst, src, k);
        }
    }

    fn negate_row(&mut self, r: usize) {
        self.m.negate_row(r);
        if let Some(u) = &mut self.u {
            u.negate_row(r);
        }
    }

    fn pivot(&self, t: usize) -> Option<(usize, usize)> {
        let m = &self.m;
        let mut best: Option<(usize, usize)> = None;
        for i in t..m.rows {
            for j in t..m.cols {
                let x = &m[(i, j)];
                if x.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| x.abs() < m[(bi, bj)].abs()) {
                    best = Some((i, j));
                    if x.abs().is_one() {
                        return best;
                    }
                }
            }
        }
        best
    }

    fn run(&mut self) {
        let (r, c) = (self.m.rows, self.m.cols);
        for t in 0..r.min(c) {
            loop {
                let Some((pi, pj)) = self.pivot(t) else { return };
                self.swap_rows(t, pi);
                self.swap_cols(t, pj);
                let p = self.m[(t, t)].clone();
                let mut clean = true;
                for i in t + 1..r {
                    if self.m[(i, t)].is_zero() {
                        continue;
                    }
                    let q = &self.m[(i, t)] / &p;
                    if !q.is_zero() {
                        self.add_row(i, t, &-q);
                    }
                    clean &= self.m[(i, t)].is_zero();
                }
                for j in t + 1..c {
                    if self.m[(t, j)].is_zero() {
                        continue;
                    }
                    let q = &self.m[(t, j)] / &p;
                    if !q.is_zero() {
                        self.add_col(j, t, &-q);
                    }
                    clean &= self.m[(t, j)].is_zero();
                }
                if !clean {
                    continue;
                }
                let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !self.m[(i, j)].is_multiple_of(&p)));
                match bad {
                    Some(i) => self.add_row(t, i, &BigInt::one()),
                    None => break,
                }
            }
            if self.m[(t, t)].is_negative() {
                self.negate_row(t);
            }
        }
    }
}

/// Smith normal form with unimodular transforms; the identity
/// `u · m · v = d` and the divisibility chain are checked before returning.
pub fn smith_normal_form(m: &IntMatrix) -> Result<SmithForm> {
    let mut red = Reducer { m: m.clone(), u: Some(IntMatrix::identity(m.rows)), v: Some(IntMatrix::identity(m.cols)) };
    red.run();
    let form = SmithForm { u: red.u.unwrap(), d: red.m, v: red.v.unwrap() };
    if form.u.mul(m).mul(&form.v) != form.d {
        return Err(Error::Internal("Smith form check failed: U·M·V != D".into()));
    }
    check_chain(&form.d)?;
    Ok(form)
}

/// Invariant factors only (no transforms).
pub fn invariant_factors(m: &IntMatrix) -> Result<Vec<BigInt>> {
    let mut red = Reducer { m: m.clone(), u: None, v: None };
    red.run();
    check_chain(&red.m)?;
    Ok(red.m.diagonal().into_iter().filter(|x| !x.is_zero()).collect())
}

fn check_chain(d: &IntMatrix) -> Result<()> {
    if !d.is_diagonal() {
        return Err(Error::Internal("Smith form is not diagonal".into()));
    }
    let diag = d.diagonal();
    for w in diag.windows(2) {
        let ok = if w[0].is_zero() { w[1].is_zero() } else { w[1].is_multiple_of(&w[0]) };
        if !ok || w[0].is_negative() {
            return Err(Error::Internal(format!("divisibility chain broken at {} | {}", w[0], w[1])));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn im(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn diag_2_3() {
        let f = smith_normal_form(&im(&[&[2, 0], &[0, 3]])).unwrap();
        assert_eq!(f.d, im(&[&[1, 0], &[0, 6]]));
        assert!(f.u.determinant().abs().is_one());
        assert!(f.v.determinant().abs().is_one());
    }

    #[test]
    fn identity_and_zero() {
        let f = smith_normal_form(&IntMatrix::identity(3)).unwrap();
        assert_eq!(f.d, IntMatrix::identity(3));
        let z = IntMatrix::zeros(2, 3);
        assert_eq!(smith_normal_form(&z).unwrap().d, z);
        assert_eq!(smith_normal_form(&IntMatrix::zeros(0, 2)).unwrap().d, IntMatrix::zeros(0, 2));
    }

    #[test]
    fn torsion_example() {
        // Z^2 / <(2,4),(6,8)>: invariant factors 2, 4
        let f = invariant_factors(&im(&[&[2, 6], &[4, 8]])).unwrap();
        assert_eq!(f, vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn determinant() {
        assert_eq!(im(&[&[2, 1], &[7, 4]]).determinant(), BigInt::from(1));
        assert_eq!(im(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 5]]).determinant(), BigInt::from(-5));
        assert_eq!(im(&[&[1, 2], &[2, 4]]).determinant(), BigInt::zero());
    }
}
