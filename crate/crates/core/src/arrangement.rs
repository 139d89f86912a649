//! The stratification of internal space by a central hyperplane family and
//! its face semigroup.

use std::fmt;
use std::str::FromStr;

use crate::cps::Hyperplane;
use crate::error::{Error, Result};
use crate::lp::System;
use crate::qfield::{dot, vec_add, vec_scale, Qf, QfMatrix, Sign};

/// A sign vector on the hyperplane family.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConeType(pub Vec<Sign>);

impl ConeType {
    /// The all-zero type `𝔬` of the cone `{0}`.
    pub fn origin(k: usize) -> ConeType {
        ConeType(vec![Sign::Zero; k])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_origin(&self) -> bool {
        self.0.iter().all(|&s| s == Sign::Zero)
    }

    pub fn is_chamber(&self) -> bool {
        self.0.iter().all(|&s| s != Sign::Zero)
    }

    /// `(t·t')(H) = t'(H)` if `t(H) = 0`, else `t(H)`.
    pub fn product(&self, other: &ConeType) -> ConeType {
        ConeType(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| if a == Sign::Zero { b } else { a })
                .collect(),
        )
    }

    /// `t ≤ t'` iff `t = t'·t`.
    pub fn leq(&self, other: &ConeType) -> bool {
        *self == other.product(self)
    }

    pub fn zero_set(&self) -> Vec<usize> {
        (0..self.0.len())
            .filter(|&i| self.0[i] == Sign::Zero)
            .collect()
    }
}

impl fmt::Display for ConeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{}", s.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for ConeType {
    type Err = Error;

    fn from_str(s: &str) -> Result<ConeType> {
        s.chars()
            .map(|c| match c {
                '-' => Ok(Sign::Neg),
                '0' => Ok(Sign::Zero),
                '+' => Ok(Sign::Pos),
                _ => Err(Error::InvalidInput(format!("bad cone type `{s}`"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(ConeType)
    }
}

/// A central arrangement in `F^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrangement {
    n: usize,
    hyperplanes: Vec<Hyperplane>,
}

impl Arrangement {
    pub fn new(n: usize, hyperplanes: Vec<Hyperplane>) -> Arrangement {
        assert!(
            hyperplanes.iter().all(|h| h.normal.len() == n),
            "normal dimension"
        );
        Arrangement { n, hyperplanes }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    pub fn len(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }

    /// The sign vector of a point.
    pub fn sign_vector(&self, x: &[Qf]) -> ConeType {
        ConeType(self.hyperplanes.iter().map(|h| h.side(x)).collect())
    }

    /// A point with the prescribed signs on the constrained hyperplanes
    /// (`None` leaves a hyperplane free), or `None` if there is none.
    pub fn feasible_partial(&self, signs: &[Option<Sign>]) -> Option<Vec<Qf>> {
        let mut sys = System::new(self.n);
        for (h, s) in self.hyperplanes.iter().zip(signs) {
            match s {
                None => {}
                Some(Sign::Zero) => sys.equal(h.normal.clone(), Qf::zero()),
                Some(s) => sys.at_least(signed(&h.normal, *s), Qf::one()),
            }
        }
        sys.solve()
    }

    /// An interior witness of the cone of `t`, if the cone is non-empty.
    pub fn feasible(&self, t: &ConeType) -> Option<Vec<Qf>> {
        let signs: Vec<Option<Sign>> = t.0.iter().map(|&s| Some(s)).collect();
        self.feasible_partial(&signs)
    }

    /// `n − rank{a_H : t(H) = 0}`.
    pub fn dimension(&self, t: &ConeType) -> usize {
        let rows: Vec<Vec<Qf>> = t
            .zero_set()
            .iter()
            .map(|&i| self.hyperplanes[i].normal.clone())
            .collect();
        if rows.is_empty() {
            return self.n;
        }
        self.n - QfMatrix::from_rows(rows).expect("one field").rank()
    }

    /// Basis of `⋂_{t(H)=0} H`.
    pub fn span_basis(&self, t: &ConeType) -> Vec<Vec<Qf>> {
        let rows: Vec<Vec<Qf>> = t
            .zero_set()
            .iter()
            .map(|&i| self.hyperplanes[i].normal.clone())
            .collect();
        if rows.is_empty() {
            return identity_rows(self.n);
        }
        QfMatrix::from_rows(rows).expect("one field").kernel_basis()
    }

    /// All feasible sign vectors in lexicographic order (`− < 0 < +`).
    pub fn enumerate(&self) -> FaceSemigroup {
        let mut cones = Vec::new();
        let mut prefix = Vec::new();
        self.extend(&mut prefix, &mut cones);
        FaceSemigroup::build(self.clone(), cones)
            .expect("the face semigroup is closed under its product")
    }

    fn extend(&self, prefix: &mut Vec<Sign>, out: &mut Vec<Cone>) {
        let k = self.hyperplanes.len();
        if prefix.len() == k {
            let t = ConeType(prefix.clone());
            let witness = self.feasible(&t).expect("pruned prefixes are feasible");
            let dim = self.dimension(&t);
            out.push(Cone { t, witness, dim });
            return;
        }
        for s in [Sign::Neg, Sign::Zero, Sign::Pos] {
            prefix.push(s);
            let mut signs: Vec<Option<Sign>> = prefix.iter().map(|&s| Some(s)).collect();
            signs.resize(k, None);
            if self.feasible_partial(&signs).is_some() {
                self.extend(prefix, out);
            }
            prefix.pop();
        }
    }

    /// Sign vector of `u + δu'` for `δ` small, where `u`, `u'` are interior
    /// witnesses of the two cones: the cone reached by moving off the first
    /// cone towards the second.
    pub fn geometric_product(&self, t: &ConeType, t2: &ConeType) -> Option<ConeType> {
        let u = if t.is_origin() {
            vec![Qf::zero(); self.n]
        } else {
            self.feasible(t)?
        };
        let u2 = self.feasible(t2)?;
        let a: Vec<Qf> = self
            .hyperplanes
            .iter()
            .map(|h| dot(&h.normal, &u))
            .collect();
        let b: Vec<Qf> = self
            .hyperplanes
            .iter()
            .map(|h| dot(&h.normal, &u2))
            .collect();
        let mut delta = Qf::one();
        let mut prev: Option<ConeType> = None;
        loop {
            let x = vec_add(&u, &vec_scale(&delta, &u2));
            let cur = self.sign_vector(&x);
            // δ|a_H·u'| < |a_H·u| wherever a_H·u ≠ 0 certifies the sign vector
            let certified = a
                .iter()
                .zip(&b)
                .all(|(ai, bi)| ai.is_zero() || (&delta * &bi.abs()) < ai.abs());
            if certified && prev.as_ref() == Some(&cur) {
                return Some(cur);
            }
            prev = Some(cur);
            delta = &delta * &Qf::frac(1, 2);
        }
    }
}

fn signed(v: &[Qf], s: Sign) -> Vec<Qf> {
    if s == Sign::Neg {
        v.iter().map(|x| -x).collect()
    } else {
        v.to_vec()
    }
}

pub(crate) fn identity_rows(n: usize) -> Vec<Vec<Qf>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Qf::one() } else { Qf::zero() })
                .collect()
        })
        .collect()
}

/// One cone of the stratification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone {
    pub t: ConeType,
    pub witness: Vec<Qf>,
    pub dim: usize,
}

/// The face semigroup: all cone types with their product table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceSemigroup {
    arrangement: Arrangement,
    cones: Vec<Cone>,
    table: Vec<Vec<usize>>,
}

impl FaceSemigroup {
    fn build(arrangement: Arrangement, cones: Vec<Cone>) -> Result<FaceSemigroup> {
        let index = |t: &ConeType| cones.binary_search_by(|c| c.t.cmp(t)).ok();
        let mut table = Vec::with_capacity(cones.len());
        for a in &cones {
            let mut row = Vec::with_capacity(cones.len());
            for b in &cones {
                let p = a.t.product(&b.t);
                let i = index(&p).ok_or_else(|| {
                    Error::InvariantViolation(format!(
                        "product {}·{} = {} is not a cone",
                        a.t, b.t, p
                    ))
                })?;
                row.push(i);
            }
            table.push(row);
        }
        Ok(FaceSemigroup {
            arrangement,
            cones,
            table,
        })
    }

    pub fn arrangement(&self) -> &Arrangement {
        &self.arrangement
    }

    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn len(&self) -> usize {
        self.cones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cones.is_empty()
    }

    pub fn index_of(&self, t: &ConeType) -> Option<usize> {
        self.cones.binary_search_by(|c| c.t.cmp(t)).ok()
    }

    pub fn product(&self, i: usize, j: usize) -> usize {
        self.table[i][j]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.table[j][i] == i
    }

    pub fn identity(&self) -> usize {
        self.index_of(&ConeType::origin(self.arrangement.len()))
            .expect("origin cone")
    }

    pub fn chambers(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.cones[i].t.is_chamber())
            .collect()
    }

    /// Whether `set·within ⊆ set`.
    pub fn is_right_ideal(&self, set: &[usize], within: &[usize]) -> bool {
        set.iter()
            .all(|&a| within.iter().all(|&b| set.contains(&self.table[a][b])))
    }

    /// Whether `within·set ⊆ set`.
    pub fn is_left_ideal(&self, set: &[usize], within: &[usize]) -> bool {
        set.iter()
            .all(|&a| within.iter().all(|&b| set.contains(&self.table[b][a])))
    }

    /// `a·S`, the right ideal generated by `a` in the subsemigroup `within`
    /// (which contains the identity).
    pub fn right_ideal_generated(&self, a: usize, within: &[usize]) -> Vec<usize> {
        let mut v: Vec<usize> = within.iter().map(|&b| self.table[a][b]).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// `S·a·S` within the subsemigroup.
    pub fn two_sided_ideal_generated(&self, a: usize, within: &[usize]) -> Vec<usize> {
        let mut v: Vec<usize> = within
            .iter()
            .flat_map(|&x| within.iter().map(move |&y| (x, y)))
            .map(|(x, y)| self.table[self.table[x][a]][y])
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// The minimal two-sided ideal of the subsemigroup, as the intersection
    /// of all its principal ideals.
    pub fn minimal_ideal(&self, within: &[usize]) -> Vec<usize> {
        let mut k: Vec<usize> = within.to_vec();
        k.sort_unstable();
        for &a in within {
            let i = self.two_sided_ideal_generated(a, within);
            k.retain(|x| i.contains(x));
        }
        k
    }

    pub fn all(&self) -> Vec<usize> {
        (0..self.len()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cps::FaceData;
    use crate::presets;

    fn q(s: &str) -> Qf {
        s.parse().unwrap()
    }

    fn hp(a: &str, b: &str) -> Hyperplane {
        Hyperplane {
            normal: vec![q(a), q(b)],
        }
    }

    fn octagon() -> FaceSemigroup {
        let p = presets::octagon();
        Arrangement::new(2, FaceData::new(&p.window).hyperplanes).enumerate()
    }

    #[test]
    fn origin_is_feasible_with_zero_witness() {
        let a = Arrangement::new(2, vec![hp("0", "1"), hp("1", "0")]);
        assert_eq!(
            a.feasible(&"00".parse().unwrap()),
            Some(vec![Qf::zero(), Qf::zero()])
        );
        assert!(a.feasible(&"++".parse().unwrap()).is_some());
    }

    #[test]
    fn small_counts() {
        let a = Arrangement::new(
            1,
            vec![Hyperplane {
                normal: vec![q("1")],
            }],
        );
        let s = a.enumerate();
        let types: Vec<String> = s.cones().iter().map(|c| c.t.to_string()).collect();
        assert_eq!(types, ["-", "0", "+"]);
        let a = Arrangement::new(2, vec![hp("0", "1"), hp("1", "0")]);
        assert_eq!(a.enumerate().len(), 9);
    }

    #[test]
    fn octagon_stratification() {
        let s = octagon();
        assert_eq!(s.len(), 17);
        let dims: Vec<usize> = (0..=2)
            .map(|d| s.cones().iter().filter(|c| c.dim == d).count())
            .collect();
        assert_eq!(dims, [1, 8, 8]);
        // infeasible sign vectors exist: x-axis and diagonal both zero forces the rest zero
        let a = s.arrangement();
        assert!(a.feasible(&"00+0".parse().unwrap()).is_none());
        assert!(a.feasible(&"0+0+".parse().unwrap()).is_none());
    }

    #[test]
    fn product_examples() {
        let s = octagon();
        let id = s.identity();
        let chambers = s.chambers();
        for i in s.all() {
            assert_eq!(s.product(id, i), i);
            assert_eq!(s.product(i, i), i);
            assert!(s.leq(i, i));
            assert!(s.leq(i, id));
        }
        for &c in &chambers {
            for j in s.all() {
                assert_eq!(s.product(c, j), c);
                assert!(!s.leq(j, c) || j == c);
            }
        }
    }

    #[test]
    fn order_matches_closure_incidence() {
        // t ≤ t' iff the cone of t' lies in the closure of the cone of t,
        // i.e. moving off a witness of t' towards t lands in t
        let s = octagon();
        let a = s.arrangement();
        for x in s.cones() {
            for y in s.cones() {
                let in_closure = a.geometric_product(&y.t, &x.t).unwrap() == x.t;
                let (i, j) = (s.index_of(&x.t).unwrap(), s.index_of(&y.t).unwrap());
                assert_eq!(s.leq(i, j), in_closure, "{} vs {}", x.t, y.t);
            }
        }
    }

    #[test]
    fn ideals() {
        let s = octagon();
        let all = s.all();
        let ch = s.chambers();
        assert_eq!(ch.len(), 8);
        assert!(s.is_right_ideal(&ch, &all));
        assert!(s.is_left_ideal(&ch, &all));
        assert!(s.is_right_ideal(&all, &all));
        assert_eq!(s.minimal_ideal(&all), ch);
        for &c in &ch {
            assert_eq!(s.right_ideal_generated(c, &all), vec![c]);
        }
        for t in all.iter() {
            let i = s.two_sided_ideal_generated(*t, &all);
            assert!(ch.iter().all(|c| i.contains(c)));
        }
    }

    #[test]
    fn geometric_product_agrees() {
        let s = octagon();
        let a = s.arrangement();
        for x in s.cones() {
            for y in s.cones() {
                assert_eq!(a.geometric_product(&x.t, &y.t).unwrap(), x.t.product(&y.t));
            }
        }
    }

    #[test]
    fn line_arrangements_count_cones() {
        let lines = [hp("1", "0"), hp("0", "1"), hp("1", "1"), hp("1", "-1")];
        for k in 1..=4 {
            let a = Arrangement::new(2, lines[..k].to_vec());
            let s = a.enumerate();
            // a single line has no separate origin cone
            assert_eq!(s.len(), if k == 1 { 3 } else { 4 * k + 1 });
            // brute force: every sign vector, feasibility by witness search on a grid
            let mut found = std::collections::BTreeSet::new();
            for x in -12i64..=12 {
                for y in -12i64..=12 {
                    found.insert(a.sign_vector(&[Qf::frac(x, 3), Qf::frac(y, 7)]));
                }
            }
            let enumerated: std::collections::BTreeSet<ConeType> =
                s.cones().iter().map(|c| c.t.clone()).collect();
            assert_eq!(found, enumerated);
        }
    }

    #[test]
    fn cone_type_text() {
        let t: ConeType = "+0-+".parse().unwrap();
        assert_eq!(t.to_string(), "+0-+");
        assert!("+x".parse::<ConeType>().is_err());
    }
}
