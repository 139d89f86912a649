//! Dense matrices over F and Gaussian elimination.

use std::fmt;

use super::{Qf, QfError};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QfMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Qf>,
}

pub fn dot(u: &[Qf], v: &[Qf]) -> Qf {
    debug_assert_eq!(u.len(), v.len());
    u.iter().zip(v).map(|(x, y)| x * y).sum()
}

pub fn vec_add(u: &[Qf], v: &[Qf]) -> Vec<Qf> {
    u.iter().zip(v).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(u: &[Qf], v: &[Qf]) -> Vec<Qf> {
    u.iter().zip(v).map(|(x, y)| x - y).collect()
}

pub fn vec_neg(u: &[Qf]) -> Vec<Qf> {
    u.iter().map(|x| -x).collect()
}

pub fn vec_scale(k: &Qf, u: &[Qf]) -> Vec<Qf> {
    u.iter().map(|x| k * x).collect()
}

/// Reduced row echelon form with the list of pivot columns.
struct Rref {
    m: QfMatrix,
    pivots: Vec<usize>,
}

impl QfMatrix {
    pub fn zeros(rows: usize, cols: usize) -> QfMatrix {
        QfMatrix {
            rows,
            cols,
            data: vec![Qf::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> QfMatrix {
        let mut m = QfMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Qf::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Qf>>) -> Result<QfMatrix, QfError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(QfError::Dimension("ragged rows".into()));
        }
        let data: Vec<Qf> = rows.into_iter().flatten().collect();
        check_field(&data)?;
        Ok(QfMatrix {
            rows: r,
            cols: c,
            data,
        })
    }

    /// Matrix with `cols` columns and no rows.
    pub fn empty(cols: usize) -> QfMatrix {
        QfMatrix {
            rows: 0,
            cols,
            data: Vec::new(),
        }
    }

    pub fn from_cols(cols: &[Vec<Qf>], rows: usize) -> Result<QfMatrix, QfError> {
        let mut m = QfMatrix::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            if col.len() != rows {
                return Err(QfError::Dimension("ragged columns".into()));
            }
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        check_field(&m.data)?;
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Qf] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Qf> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<Qf>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> QfMatrix {
        let mut t = QfMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &QfMatrix) -> Result<QfMatrix, QfError> {
        if self.cols != other.rows {
            return Err(QfError::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut p = QfMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Qf::zero();
                for k in 0..self.cols {
                    if !self[(i, k)].is_zero() && !other[(k, j)].is_zero() {
                        acc += &(&self[(i, k)] * &other[(k, j)]);
                    }
                }
                p[(i, j)] = acc;
            }
        }
        Ok(p)
    }

    pub fn mul_vec(&self, v: &[Qf]) -> Result<Vec<Qf>, QfError> {
        if v.len() != self.cols {
            return Err(QfError::Dimension(format!(
                "{}x{} times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), v)).collect())
    }

    /// Row vector times matrix: `v·M`.
    pub fn vec_mul(&self, v: &[Qf]) -> Result<Vec<Qf>, QfError> {
        self.transpose().mul_vec(v)
    }

    fn rref(&self) -> Rref {
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
            let inv = m[(r, c)].inverse().expect("nonzero pivot");
            for j in c..m.cols {
                m[(r, j)] = &m[(r, j)] * &inv;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        if !m[(r, j)].is_zero() {
                            m[(i, j)] = &m[(i, j)] - &(&f * &m[(r, j)]);
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of the right kernel `{v : M·v = 0}`, one vector per free column,
    /// read off the reduced echelon form.
    pub fn kernel_basis(&self) -> Vec<Vec<Qf>> {
        let Rref { m, pivots } = self.rref();
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![Qf::zero(); self.cols];
            v[free] = Qf::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -&m[(r, free)];
            }
            out.push(v);
        }
        out
    }

    /// One solution of `M·x = b`; free variables are set to zero.
    pub fn solve(&self, b: &[Qf]) -> Result<Vec<Qf>, QfError> {
        if b.len() != self.rows {
            return Err(QfError::Dimension("right-hand side length".into()));
        }
        let mut aug = QfMatrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let Rref { m, pivots } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Err(QfError::NoSolution);
        }
        let mut x = vec![Qf::zero(); self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = m[(r, self.cols)].clone();
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<QfMatrix, QfError> {
        if self.rows != self.cols {
            return Err(QfError::Dimension("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = QfMatrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Qf::one();
        }
        let Rref { m, pivots } = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(QfError::Singular);
        }
        let mut inv = QfMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = m[(i, n + j)].clone();
            }
        }
        Ok(inv)
    }

    /// Basis of the row space, as the nonzero rows of the reduced form.
    pub fn row_space_basis(&self) -> Vec<Vec<Qf>> {
        let Rref { m, pivots } = self.rref();
        (0..pivots.len()).map(|i| m.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }
}

fn check_field(data: &[Qf]) -> Result<(), QfError> {
    let mut d = 0;
    for x in data {
        let e = x.radicand();
        if e != 0 {
            if d != 0 && d != e {
                return Err(QfError::MixedFields(d, e));
            }
            d = e;
        }
    }
    Ok(())
}

impl std::ops::Index<(usize, usize)> for QfMatrix {
    type Output = Qf;
    fn index(&self, (i, j): (usize, usize)) -> &Qf {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QfMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Qf {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for QfMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Qf {
        s.parse().unwrap()
    }

    fn mat(rows: &[&[&str]]) -> QfMatrix {
        QfMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|s| q(s)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn identity_rank() {
        for n in 0..5 {
            assert_eq!(QfMatrix::identity(n).rank(), n);
        }
    }

    #[test]
    fn kernel_of_one_by_two() {
        let m = mat(&[&["1", "√2"]]);
        assert_eq!(m.kernel_basis(), vec![vec![q("-√2"), q("1")]]);
    }

    #[test]
    fn solve_and_inverse() {
        let m = mat(&[&["1", "√2"], &["√2", "3"]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), QfMatrix::identity(2));
        let x = m.solve(&[q("1"), q("0")]).unwrap();
        assert_eq!(m.mul_vec(&x).unwrap(), vec![q("1"), q("0")]);
    }

    #[test]
    fn singular_and_inconsistent() {
        let m = mat(&[&["1", "√2"], &["√2", "2"]]);
        assert_eq!(m.inverse(), Err(QfError::Singular));
        assert_eq!(m.solve(&[q("1"), q("1")]), Err(QfError::NoSolution));
        assert!(m.solve(&[q("1"), q("√2")]).is_ok());
    }

    #[test]
    fn mixed_fields_rejected_at_construction() {
        let r = QfMatrix::from_rows(vec![vec![q("√2"), q("√3")]]);
        assert_eq!(r, Err(QfError::MixedFields(2, 3)));
    }
}
