use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::Rational;

pub type QVector = Vec<Rational>;

/// Dense row-major matrix over ℚ.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn diagonal(diag: &[Rational]) -> Self {
        let mut m = QMatrix::zeros(diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = d.clone();
        }
        m
    }

    /// Builds a matrix from rows; every row must have `cols` entries.
    pub fn from_rows(rows: Vec<Vec<Rational>>, cols: usize) -> Option<Self> {
        if rows.iter().any(|r| r.len() != cols) {
            return None;
        }
        let n = rows.len();
        Some(QMatrix {
            rows: n,
            cols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| Rational::from_int(x)).collect())
            .collect();
        QMatrix::from_rows(rows, cols).expect("ragged integer rows")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> QVector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == QMatrix::identity(self.rows)
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = QMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    /// Matrix product; `None` on a shape mismatch.
    pub fn mul(&self, other: &QMatrix) -> Option<QMatrix> {
        if self.cols != other.rows {
            return None;
        }
        let mut out = QMatrix::zeros(self.rows, other.cols);
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
        Some(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Option<QVector> {
        if v.len() != self.cols {
            return None;
        }
        Some(
            (0..self.rows)
                .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rational) -> QMatrix {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| x * c).collect(),
        }
    }

    pub fn sub(&self, other: &QMatrix) -> Option<QMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return None;
        }
        Some(QMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn pow(&self, exp: u32) -> QMatrix {
        assert!(self.is_square());
        let mut acc = QMatrix::identity(self.rows);
        for _ in 0..exp {
            acc = acc.mul(self).expect("square");
        }
        acc
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Reduced row-echelon form using the first nonzero entry of each column
    /// as pivot. Returns the reduced matrix and its pivot columns.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    if m[(r, j)].is_zero() {
                        continue;
                    }
                    let v = &m[(i, j)] - &(&f * &m[(r, j)]);
                    m[(i, j)] = v;
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

    /// Basis of `{v : m·v = 0}`, itself in reduced row-echelon form with
    /// unit pivots, so the result is canonical.
    pub fn nullspace(&self) -> Vec<QVector> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let raw: Vec<QVector> = free
            .iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -&r[(row, f)];
                }
                v
            })
            .collect();
        if raw.is_empty() {
            return raw;
        }
        let basis = QMatrix::from_rows(raw, self.cols).expect("uniform rows");
        let (red, piv) = basis.rref();
        (0..piv.len()).map(|i| red.row(i).to_vec()).collect()
    }

    /// One solution of `m·x = b`, with free variables set to zero.
    pub fn solve(&self, b: &[Rational]) -> Option<QVector> {
        if b.len() != self.rows {
            return None;
        }
        let mut aug = QMatrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r[(row, self.cols)].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<QMatrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = QMatrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Rational::one();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots.iter().take(n).enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        let mut inv = QMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Some(inv)
    }

    pub fn determinant(&self) -> Option<Rational> {
        if !self.is_square() {
            return None;
        }
        let mut m = self.clone();
        let n = m.rows;
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Some(Rational::zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            det = &det * &m[(c, c)];
            let inv = m[(c, c)].recip();
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] * &inv;
                for j in c..n {
                    let v = &m[(i, j)] - &(&f * &m[(c, j)]);
                    m[(i, j)] = v;
                }
            }
        }
        Some(det)
    }

    /// Characteristic polynomial `det(x·I − m)`, coefficients from the
    /// constant term up, via the Faddeev–LeVerrier recursion.
    pub fn charpoly(&self) -> Option<Vec<Rational>> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut coeffs = vec![Rational::zero(); n + 1];
        coeffs[n] = Rational::one();
        let mut acc = QMatrix::zeros(n, n);
        for k in 1..=n {
            // acc ← m·acc + c_{n-k+1}·I, then c_{n-k} = −tr(m·acc)/k
            let mut next = self.mul(&acc).expect("square");
            for i in 0..n {
                next[(i, i)] += &coeffs[n - k + 1];
            }
            let prod = self.mul(&next).expect("square");
            let trace: Rational = (0..n).map(|i| prod[(i, i)].clone()).sum();
            coeffs[n - k] = -(trace / Rational::from_int(k as i64));
            acc = next;
        }
        Some(coeffs)
    }

    /// Distinct rational eigenvalues, in increasing order. `None` when the
    /// rational-root search would exceed `max_divisor_search`.
    pub fn rational_eigenvalues(&self, max_divisor_search: u64) -> Option<Vec<Rational>> {
        rational_roots(&self.charpoly()?, max_divisor_search)
    }
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Distinct rational roots of `Σ coeffs[i]·x^i` (rational root theorem).
pub fn rational_roots(coeffs: &[Rational], max_divisor_search: u64) -> Option<Vec<Rational>> {
    let mut c: Vec<Rational> = coeffs.to_vec();
    while c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
    if c.len() <= 1 {
        return Some(Vec::new());
    }
    let mut roots = Vec::new();
    if c[0].is_zero() {
        roots.push(Rational::zero());
        while c.first().is_some_and(|x| x.is_zero()) {
            c.remove(0);
        }
    }
    if c.len() > 1 {
        let lcm = c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> = c.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
        let lead = ints.last().unwrap().abs();
        let constant = ints[0].abs();
        let ps = divisors(&constant, max_divisor_search)?;
        let qs = divisors(&lead, max_divisor_search)?;
        let mut seen = std::collections::BTreeSet::new();
        for p in &ps {
            for q in &qs {
                for sign in [1i64, -1] {
                    let cand = Rational::from_bigints(p * BigInt::from(sign), BigInt::from(*q));
                    if seen.insert(cand.clone()) && eval_poly(&c, &cand).is_zero() {
                        roots.push(cand);
                    }
                }
            }
        }
    }
    roots.sort();
    roots.dedup();
    Some(roots)
}

fn divisors(n: &BigInt, bound: u64) -> Option<Vec<u64>> {
    let n = n.to_u64().filter(|&v| v <= bound)?;
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            if d != n / d {
                out.push(n / d);
            }
        }
        d += 1;
    }
    Some(out)
}

pub fn eval_poly(coeffs: &[Rational], x: &Rational) -> Rational {
    coeffs.iter().rev().fold(Rational::zero(), |acc, c| &(&acc * x) + c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn empty_matrix_is_invertible() {
        let m = QMatrix::zeros(0, 0);
        assert_eq!(m.inverse(), Some(QMatrix::zeros(0, 0)));
        assert_eq!(m.determinant(), Some(q(1)));
    }

    #[test]
    fn nullspace_examples() {
        let zero = QMatrix::from_int_rows(&[&[0]]);
        assert_eq!(zero.nullspace(), vec![vec![q(1)]]);

        let ones = QMatrix::from_int_rows(&[&[1, 1]]);
        assert_eq!(ones.nullspace(), vec![vec![q(1), q(-1)]]);

        assert!(QMatrix::identity(3).nullspace().is_empty());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(QMatrix::zeros(2, 2).rank(), 0);
        assert_eq!(QMatrix::from_int_rows(&[&[1, 2], &[2, 4]]).rank(), 1);
        assert_eq!(QMatrix::identity(5).rank(), 5);
    }

    #[test]
    fn inverse_and_solve() {
        let m = QMatrix::from_int_rows(&[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).unwrap().is_identity());
        assert_eq!(m.solve(&[q(3), q(2)]).unwrap(), vec![q(1), q(1)]);
        assert!(QMatrix::from_int_rows(&[&[1, 2], &[2, 4]]).inverse().is_none());
        assert!(QMatrix::from_int_rows(&[&[1, 2], &[2, 4]])
            .solve(&[q(1), q(1)])
            .is_none());
    }

    #[test]
    fn charpoly_and_eigenvalues() {
        // diag(2, -1, -1/2)
        let m = QMatrix::diagonal(&[q(2), q(-1), Rational::new(-1, 2)]);
        let eig = m.rational_eigenvalues(1_000_000).unwrap();
        assert_eq!(eig, vec![q(-1), Rational::new(-1, 2), q(2)]);
        // rotation by 90 degrees: x^2 + 1, no rational roots
        let rot = QMatrix::from_int_rows(&[&[0, -1], &[1, 0]]);
        assert_eq!(rot.charpoly().unwrap(), vec![q(1), q(0), q(1)]);
        assert!(rot.rational_eigenvalues(1_000_000).unwrap().is_empty());
        let nil = QMatrix::from_int_rows(&[&[0, 1], &[0, 0]]);
        assert_eq!(nil.rational_eigenvalues(10).unwrap(), vec![q(0)]);
    }

    #[test]
    fn determinant_matches_charpoly_constant() {
        let m = QMatrix::from_int_rows(&[&[1, 2, 0], &[3, -1, 4], &[0, 2, 5]]);
        let det = m.determinant().unwrap();
        let cp = m.charpoly().unwrap();
        // det(xI - m) at x = 0 is det(-m) = -det(m) for odd n
        assert_eq!(cp[0], -det);
    }
}
