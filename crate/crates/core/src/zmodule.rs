//! Integer lattices: column Hermite normal form, integer kernels and
//! solutions, and the membership questions they decide once F-linear
//! conditions are split into their rational and irrational parts.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::qfield::{dot, Qf, QfMatrix};

/// Dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Panics on ragged input.
    pub fn from_rows(cols: usize, rows: Vec<Vec<BigInt>>) -> IntMatrix {
        assert!(
            rows.iter().all(|r| r.len() == cols),
            "ragged integer matrix"
        );
        IntMatrix {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> IntMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        IntMatrix::from_rows(
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "integer matrix shape mismatch");
        let mut p = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = a * &other[(k, j)];
                    p[(i, j)] += t;
                }
            }
        }
        p
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "integer matrix shape mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Determinant by fraction-free elimination (Bareiss).
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m[(i, k)].is_zero()) else {
                    return BigInt::zero();
                };
                for j in 0..n {
                    m.data.swap(k * n + j, p * n + j);
                }
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
        sign * &m[(n - 1, n - 1)]
    }

    fn col_combine(&mut self, k: usize, j: usize, a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt) {
        // (col_k, col_j) <- (a col_k + b col_j, c col_k + d col_j)
        for i in 0..self.rows {
            let x = self[(i, k)].clone();
            let y = self[(i, j)].clone();
            self[(i, k)] = a * &x + b * &y;
            self[(i, j)] = c * &x + d * &y;
        }
    }

    fn col_axpy(&mut self, dst: usize, q: &BigInt, src: usize) {
        // col_dst <- col_dst - q col_src
        for i in 0..self.rows {
            let t = q * &self[(i, src)];
            self[(i, dst)] -= t;
        }
    }

    fn col_negate(&mut self, k: usize) {
        for i in 0..self.rows {
            let t = -&self[(i, k)];
            self[(i, k)] = t;
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

/// Column Hermite normal form `H = M·U`.
///
/// `H` is a column staircase: column `k < rank` has its first nonzero entry
/// (the pivot, positive) in row `pivot_rows[k]`, strictly increasing in `k`;
/// entries left of a pivot lie in `[0, pivot)`; columns `rank..` are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hnf {
    pub h: IntMatrix,
    pub u: IntMatrix,
    pub pivot_rows: Vec<usize>,
}

impl Hnf {
    pub fn rank(&self) -> usize {
        self.pivot_rows.len()
    }

    /// Basis of `{m ∈ ℤ^cols : M·m = 0}`.
    pub fn kernel(&self) -> Vec<Vec<BigInt>> {
        (self.rank()..self.u.cols())
            .map(|j| self.u.col(j))
            .collect()
    }

    /// An integer `m` with `M·m = b`, if one exists.
    pub fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(b.len(), self.h.rows(), "right-hand side length");
        let mut y = vec![BigInt::zero(); self.h.cols()];
        for (k, &r) in self.pivot_rows.iter().enumerate() {
            let mut rest = b[r].clone();
            for (j, yj) in y.iter().enumerate().take(k) {
                rest -= &self.h[(r, j)] * yj;
            }
            let (q, rem) = rest.div_rem(&self.h[(r, k)]);
            if !rem.is_zero() {
                return None;
            }
            y[k] = q;
        }
        if self.h.mul_vec(&y) != b {
            return None;
        }
        Some(self.u.mul_vec(&y))
    }
}

pub fn hnf(m: &IntMatrix) -> Hnf {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.cols());
    let mut pivot_rows = Vec::new();
    let mut k = 0;
    for i in 0..h.rows() {
        if k == h.cols() {
            break;
        }
        for j in k + 1..h.cols() {
            if h[(i, j)].is_zero() {
                continue;
            }
            let a = h[(i, k)].clone();
            let b = h[(i, j)].clone();
            let e = a.extended_gcd(&b);
            let (x, y, g) = (e.x, e.y, e.gcd);
            let (c, d) = (-(&b / &g), &a / &g);
            h.col_combine(k, j, &x, &y, &c, &d);
            u.col_combine(k, j, &x, &y, &c, &d);
        }
        if h[(i, k)].is_zero() {
            continue;
        }
        if h[(i, k)].is_negative() {
            h.col_negate(k);
            u.col_negate(k);
        }
        let p = h[(i, k)].clone();
        for j in 0..k {
            let q = h[(i, j)].div_floor(&p);
            if !q.is_zero() {
                h.col_axpy(j, &q, k);
                u.col_axpy(j, &q, k);
            }
        }
        pivot_rows.push(i);
        k += 1;
    }
    Hnf { h, u, pivot_rows }
}

/// Rational matrix, row-major, as produced by [`split_to_rational`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatSystem {
    pub cols: usize,
    pub rows: Vec<Vec<BigRational>>,
    pub rhs: Vec<BigRational>,
}

/// Splits `A·m = b` (entries in F, unknowns rational) into rational
/// equations: each row yields its rational-part equation and, when any entry
/// of the row is irrational, its √D-part equation.
pub fn split_to_rational(a: &QfMatrix, b: &[Qf]) -> RatSystem {
    assert_eq!(a.rows(), b.len(), "right-hand side length");
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for i in 0..a.rows() {
        let row = a.row(i);
        rows.push(row.iter().map(|x| x.rational_part().clone()).collect());
        rhs.push(b[i].rational_part().clone());
        if row.iter().chain([&b[i]]).any(|x| !x.is_rational()) {
            rows.push(row.iter().map(|x| x.irrational_part().clone()).collect());
            rhs.push(b[i].irrational_part().clone());
        }
    }
    RatSystem {
        cols: a.cols(),
        rows,
        rhs,
    }
}

impl RatSystem {
    /// Multiplies each equation by the lcm of its denominators.
    pub fn to_integer(&self) -> (IntMatrix, Vec<BigInt>) {
        let mut out = Vec::new();
        let mut rhs = Vec::new();
        for (row, r) in self.rows.iter().zip(&self.rhs) {
            let l = row
                .iter()
                .chain([r])
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let scale = |x: &BigRational| (x * BigRational::from_integer(l.clone())).to_integer();
            out.push(row.iter().map(scale).collect());
            rhs.push(scale(r));
        }
        (IntMatrix::from_rows(self.cols, out), rhs)
    }

    /// Basis of integer solutions of the homogeneous system.
    pub fn integer_kernel(&self) -> Vec<Vec<BigInt>> {
        hnf(&self.to_integer().0).kernel()
    }

    /// An integer solution of the system, if any.
    pub fn integer_solve(&self) -> Option<Vec<BigInt>> {
        let (m, b) = self.to_integer();
        hnf(&m).solve(&b)
    }
}

/// Integer kernel of an F-matrix: `{m ∈ ℤ^cols : A·m = 0}`.
pub fn integer_kernel(a: &QfMatrix) -> Vec<Vec<BigInt>> {
    let zero = vec![Qf::zero(); a.rows()];
    split_to_rational(a, &zero).integer_kernel()
}

/// Integer solution of `A·m = b` over F, if any.
pub fn integer_solve(a: &QfMatrix, b: &[Qf]) -> Option<Vec<BigInt>> {
    split_to_rational(a, b).integer_solve()
}

/// A finitely generated subgroup of F^k given by generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZModule {
    dim: usize,
    gens: Vec<Vec<Qf>>,
}

impl ZModule {
    pub fn new(dim: usize, gens: Vec<Vec<Qf>>) -> ZModule {
        assert!(gens.iter().all(|g| g.len() == dim), "generator dimension");
        ZModule { dim, gens }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Vec<Qf>] {
        &self.gens
    }

    /// `dim × gens` matrix with the generators as columns.
    pub fn matrix(&self) -> QfMatrix {
        QfMatrix::from_cols(&self.gens, self.dim).expect("generators share one field")
    }

    pub fn combine(&self, m: &[BigInt]) -> Vec<Qf> {
        let mut v = vec![Qf::zero(); self.dim];
        for (g, c) in self.gens.iter().zip(m) {
            if c.is_zero() {
                continue;
            }
            for (vi, gi) in v.iter_mut().zip(g) {
                *vi += &gi.mul_int(c);
            }
        }
        v
    }

    /// Integer coefficients expressing `v`, if `v` lies in the module.
    pub fn membership(&self, v: &[Qf]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.dim, "vector dimension");
        if self.gens.is_empty() {
            return v.iter().all(Qf::is_zero).then(Vec::new);
        }
        integer_solve(&self.matrix(), v)
    }

    pub fn contains(&self, v: &[Qf]) -> bool {
        self.membership(v).is_some()
    }

    /// Whether `v − γ ∈ S` for some `γ` in the module; `S` is given by a
    /// spanning list. Returns the coefficients of such a `γ`.
    pub fn coset_meets_subspace(&self, v: &[Qf], s: &[Vec<Qf>]) -> Option<Vec<BigInt>> {
        let ann = annihilator(self.dim, s);
        if ann.is_empty() {
            return Some(vec![BigInt::zero(); self.gens.len()]);
        }
        let b = QfMatrix::from_rows(ann).expect("annihilator shares one field");
        let rhs = b.mul_vec(v).expect("dimension");
        if self.gens.is_empty() {
            return rhs.iter().all(Qf::is_zero).then(Vec::new);
        }
        let a = b.mul(&self.matrix()).expect("dimension");
        integer_solve(&a, &rhs)
    }

    /// The module with star images mapped through a linear form list.
    pub fn image(&self, forms: &QfMatrix) -> ZModule {
        ZModule::new(
            forms.rows(),
            self.gens
                .iter()
                .map(|g| forms.mul_vec(g).expect("dimension"))
                .collect(),
        )
    }
}

/// Basis of `{y : y·s = 0 for every s in the list}` inside F^dim.
pub fn annihilator(dim: usize, s: &[Vec<Qf>]) -> Vec<Vec<Qf>> {
    if s.is_empty() {
        return (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| if i == j { Qf::one() } else { Qf::zero() })
                    .collect()
            })
            .collect();
    }
    QfMatrix::from_rows(s.to_vec())
        .expect("subspace shares one field")
        .kernel_basis()
}

/// Whether `v` lies in the F-span of the list.
pub fn in_span(v: &[Qf], s: &[Vec<Qf>]) -> bool {
    annihilator(v.len(), s).iter().all(|y| dot(y, v).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(s: &str) -> Qf {
        s.parse().unwrap()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn is_hermite(r: &Hnf) -> bool {
        let h = &r.h;
        for (k, &pr) in r.pivot_rows.iter().enumerate() {
            if !h[(pr, k)].is_positive() {
                return false;
            }
            if (0..pr).any(|i| !h[(i, k)].is_zero()) {
                return false;
            }
            if (0..k).any(|j| h[(pr, j)].is_negative() || h[(pr, j)] >= h[(pr, k)]) {
                return false;
            }
            if k > 0 && r.pivot_rows[k - 1] >= pr {
                return false;
            }
        }
        (r.rank()..h.cols()).all(|j| h.col(j).iter().all(Zero::is_zero))
    }

    #[test]
    fn hnf_identity() {
        let r = hnf(&IntMatrix::identity(3));
        assert_eq!(r.h, IntMatrix::identity(3));
        assert_eq!(r.u, IntMatrix::identity(3));
    }

    #[test]
    fn hnf_coprime_row() {
        let m = IntMatrix::from_i64(&[&[2, 3]]);
        let r = hnf(&m);
        assert_eq!(r.h, IntMatrix::from_i64(&[&[1, 0]]));
        assert_eq!(
            BigInt::from(2) * &r.u[(0, 0)] + BigInt::from(3) * &r.u[(1, 0)],
            BigInt::one()
        );
        assert_eq!(m.mul(&r.u), r.h);
    }

    #[test]
    fn hnf_diagonal_already_reduced() {
        let m = IntMatrix::from_i64(&[&[2, 0], &[0, 3]]);
        assert_eq!(hnf(&m).h, m);
    }

    #[test]
    fn split_examples() {
        // m1 − √2 m2 = 0
        let a = QfMatrix::from_rows(vec![vec![q("1"), q("-√2")]]).unwrap();
        assert!(integer_kernel(&a).is_empty());
        // m2 + m4 − √2 m3 = 0
        let a = QfMatrix::from_rows(vec![vec![q("0"), q("1"), q("-√2"), q("1")]]).unwrap();
        let sys = split_to_rational(&a, &[Qf::zero()]);
        assert_eq!(sys.rows.len(), 2);
        let ker = integer_kernel(&a);
        assert_eq!(ker.len(), 2);
        for k in &ker {
            assert!(k[2].is_zero());
            assert_eq!(&k[1] + &k[3], BigInt::zero());
        }
        // rational-only passes through as a single equation
        let a = QfMatrix::from_rows(vec![vec![q("1"), q("2")]]).unwrap();
        assert_eq!(split_to_rational(&a, &[Qf::zero()]).rows.len(), 1);
    }

    #[test]
    fn membership_examples() {
        let l = ZModule::new(1, vec![vec![q("1")], vec![q("√2")]]);
        assert_eq!(l.membership(&[Qf::zero()]), Some(big(&[0, 0])));
        assert_eq!(l.membership(&[q("1/2")]), None);
        assert_eq!(l.membership(&[q("1-√2")]), Some(big(&[1, -1])));
    }

    #[test]
    fn coset_examples() {
        let h = q("1/2√2");
        let gamma_star = ZModule::new(
            2,
            vec![
                vec![q("1"), q("0")],
                vec![-&h, h.clone()],
                vec![q("0"), q("-1")],
                vec![h.clone(), h.clone()],
            ],
        );
        let v = vec![q("1/2"), q("0")];
        assert!(gamma_star
            .coset_meets_subspace(&[q("0"), q("0")], &[])
            .is_some());
        assert!(gamma_star
            .coset_meets_subspace(&v, &[vec![q("1"), q("0")]])
            .is_some());
        assert!(gamma_star.coset_meets_subspace(&v, &[]).is_none());
        assert!(!gamma_star.contains(&v));
    }

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..4, 1usize..5)
            .prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-9i64..10, c), r))
    }

    proptest! {
        #[test]
        fn hnf_is_hermite_and_unimodular(rows in small_matrix()) {
            let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
            let m = IntMatrix::from_i64(&refs);
            let r = hnf(&m);
            prop_assert_eq!(m.mul(&r.u), r.h.clone());
            prop_assert!(r.u.det().abs().is_one());
            prop_assert!(is_hermite(&r));
        }

        #[test]
        fn membership_witness_reconstructs(a in -20i64..20, b in -20i64..20, c in -3i64..4) {
            let l = ZModule::new(1, vec![vec![q("1")], vec![q("√2")], vec![q("2+√2")]]);
            let v = vec![&Qf::int(a) + &Qf::sqrt(2).unwrap().mul_int(&BigInt::from(b))];
            let v = vec![&v[0] + &Qf::frac(c, 2)];
            match l.membership(&v) {
                Some(w) => prop_assert_eq!(l.combine(&w), v),
                None => prop_assert!(c % 2 != 0),
            }
        }

        #[test]
        fn coset_test_is_unimodular_invariant(x in -6i64..7, y in -6i64..7, k in -3i64..4) {
            let h = q("1/2√2");
            let gens = vec![
                vec![q("1"), q("0")],
                vec![-&h, h.clone()],
                vec![q("0"), q("-1")],
                vec![h.clone(), h.clone()],
            ];
            let l1 = ZModule::new(2, gens.clone());
            // recombine: g0 <- g0 + k g1, swap g2 and g3
            let g0: Vec<Qf> = gens[0].iter().zip(&gens[1]).map(|(a, b)| a + &b.mul_int(&BigInt::from(k))).collect();
            let l2 = ZModule::new(2, vec![g0, gens[1].clone(), gens[3].clone(), gens[2].clone()]);
            let v = vec![Qf::frac(x, 3), &Qf::frac(y, 2) * &Qf::sqrt(2).unwrap()];
            let s = vec![vec![q("1"), q("1")]];
            prop_assert_eq!(
                l1.coset_meets_subspace(&v, &s).is_some(),
                l2.coset_meets_subspace(&v, &s).is_some()
            );
            prop_assert_eq!(l1.contains(&v), l2.contains(&v));
        }
    }
}
