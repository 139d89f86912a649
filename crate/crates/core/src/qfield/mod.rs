//! Exact arithmetic in a real quadratic field `Q(√D)`.
//!
//! Every coordinate handled by the crate is a [`Qf`]: a pair of rationals
//! `(a, b)` standing for `a + b√D`. Signs, comparisons and floors are decided
//! with integer arithmetic only; floating point shows up solely in
//! [`Qf::to_f64`], which is used for rendering and for conservative pruning.

mod matrix;
mod text;

pub use matrix::{dot, vec_add, vec_neg, vec_scale, vec_sub, QfMatrix};

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QfError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("mixed quadratic fields: √{0} and √{1}")]
    MixedFields(u64, u64),
    #[error("radicand {0} is not a squarefree integer >= 2")]
    BadRadicand(u64),
    #[error("cannot parse `{0}` as a quadratic-field scalar")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("linear system has no solution")]
    NoSolution,
    #[error("matrix is singular")]
    Singular,
}

/// Sign of a real number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl Sign {
    pub fn of_ordering(o: Ordering) -> Sign {
        match o {
            Ordering::Less => Sign::Neg,
            Ordering::Equal => Sign::Zero,
            Ordering::Greater => Sign::Pos,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Neg => Sign::Pos,
            Sign::Zero => Sign::Zero,
            Sign::Pos => Sign::Neg,
        }
    }

    pub fn times(self, other: Sign) -> Sign {
        match (self, other) {
            (Sign::Zero, _) | (_, Sign::Zero) => Sign::Zero,
            (a, b) if a == b => Sign::Pos,
            _ => Sign::Neg,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Neg => '-',
            Sign::Zero => '0',
            Sign::Pos => '+',
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Arithmetic operation selector for [`Qf::arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

/// An element `a + b√D` of a real quadratic field.
///
/// The radicand is stored with the value. A value whose irrational part is
/// zero carries radicand `0`, so rationals mix freely with any field while two
/// genuinely irrational values over different radicands cannot be combined.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Qf {
    a: BigRational,
    b: BigRational,
    d: u64,
}

pub fn is_squarefree(d: u64) -> bool {
    if d < 2 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= d {
        if d % (k * k) == 0 {
            return false;
        }
        k += 1;
    }
    true
}

fn join_radicands(x: u64, y: u64) -> u64 {
    match (x, y) {
        (0, y) => y,
        (x, 0) => x,
        (x, y) if x == y => x,
        (x, y) => panic!("{}", QfError::MixedFields(x, y)),
    }
}

impl Qf {
    pub fn new(a: BigRational, b: BigRational, d: u64) -> Result<Qf, QfError> {
        if b.is_zero() {
            return Ok(Qf::rational(a));
        }
        if !is_squarefree(d) {
            return Err(QfError::BadRadicand(d));
        }
        Ok(Qf { a, b, d })
    }

    /// Builds without checking `d`; callers guarantee it is squarefree.
    pub(crate) fn from_parts(a: BigRational, b: BigRational, d: u64) -> Qf {
        if b.is_zero() {
            Qf::rational(a)
        } else {
            Qf { a, b, d }
        }
    }

    pub fn rational(a: BigRational) -> Qf {
        Qf {
            a,
            b: BigRational::zero(),
            d: 0,
        }
    }

    pub fn int(k: i64) -> Qf {
        Qf::rational(BigRational::from_integer(BigInt::from(k)))
    }

    pub fn big_int(k: BigInt) -> Qf {
        Qf::rational(BigRational::from_integer(k))
    }

    pub fn frac(p: i64, q: i64) -> Qf {
        Qf::rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    /// `√d` itself.
    pub fn sqrt(d: u64) -> Result<Qf, QfError> {
        Qf::new(BigRational::zero(), BigRational::one(), d)
    }

    pub fn zero() -> Qf {
        Qf::int(0)
    }

    pub fn one() -> Qf {
        Qf::int(1)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn irrational_part(&self) -> &BigRational {
        &self.b
    }

    /// Radicand, or `0` for a rational value.
    pub fn radicand(&self) -> u64 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.b.is_zero() && self.a.is_integer()
    }

    pub fn conjugate(&self) -> Qf {
        Qf::from_parts(self.a.clone(), -self.b.clone(), self.d)
    }

    /// Field norm `a² − D·b²`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * BigRational::from_integer(BigInt::from(self.d))
    }

    pub fn sign(&self) -> Sign {
        let sa = rat_sign(&self.a);
        let sb = rat_sign(&self.b);
        match (sa, sb) {
            (s, Sign::Zero) => s,
            (Sign::Zero, s) => s,
            (x, y) if x == y => x,
            (sa, _) => {
                // opposite signs: compare a² with D·b²
                let a2 = &self.a * &self.a;
                let db2 = &self.b * &self.b * BigRational::from_integer(BigInt::from(self.d));
                match a2.cmp(&db2) {
                    Ordering::Greater => sa,
                    Ordering::Less => sa.flip(),
                    Ordering::Equal => Sign::Zero,
                }
            }
        }
    }

    pub fn abs(&self) -> Qf {
        if self.sign() == Sign::Neg {
            -self
        } else {
            self.clone()
        }
    }

    /// Greatest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        // initial guess from integer square roots, then exact correction
        let mut k = self.a.floor().to_integer();
        if !self.b.is_zero() {
            let p = self.b.numer();
            let q = self.b.denom();
            let root = (p * p * BigInt::from(self.d)).sqrt();
            let part = if p.is_negative() {
                -(root.div_ceil(q))
            } else {
                root.div_floor(q)
            };
            k += part;
        }
        loop {
            let diff = self - &Qf::big_int(k.clone());
            if diff.sign() == Sign::Neg {
                k -= 1;
                continue;
            }
            let next = &diff - &Qf::one();
            if next.sign() != Sign::Neg {
                k += 1;
                continue;
            }
            return k;
        }
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    pub fn inverse(&self) -> Result<Qf, QfError> {
        if self.is_zero() {
            return Err(QfError::DivisionByZero);
        }
        let n = self.norm();
        Ok(Qf::from_parts(&self.a / &n, -(&self.b / &n), self.d))
    }

    pub fn checked_div(&self, other: &Qf) -> Result<Qf, QfError> {
        Ok(self * &other.inverse()?)
    }

    pub fn arith(&self, other: &Qf, op: Op) -> Result<Qf, QfError> {
        if self.d != 0 && other.d != 0 && self.d != other.d {
            return Err(QfError::MixedFields(self.d, other.d));
        }
        Ok(match op {
            Op::Add => self + other,
            Op::Sub => self - other,
            Op::Mul => self * other,
            Op::Div => self.checked_div(other)?,
        })
    }

    pub fn mul_int(&self, k: &BigInt) -> Qf {
        if k.is_zero() {
            return Qf::zero();
        }
        let k = BigRational::from_integer(k.clone());
        Qf::from_parts(&self.a * &k, &self.b * &k, self.d)
    }

    pub fn mul_rational(&self, k: &BigRational) -> Qf {
        Qf::from_parts(&self.a * k, &self.b * k, self.d)
    }

    pub fn square(&self) -> Qf {
        self * self
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        if self.b.is_zero() {
            return a;
        }
        a + self.b.to_f64().unwrap_or(f64::NAN) * (self.d as f64).sqrt()
    }

    /// Decimal rendering with `digits` digits after the point, truncated
    /// toward zero. Used at the rendering boundary only.
    pub fn to_decimal(&self, digits: u32) -> String {
        let scale = BigInt::from(10u32).pow(digits);
        let scaled = self.mul_int(&scale);
        let neg = scaled.sign() == Sign::Neg;
        let mag = if neg {
            (-&scaled).floor()
        } else {
            scaled.floor()
        };
        let (int_part, frac_part) = mag.div_rem(&scale);
        let mut s = String::new();
        if neg && !mag.is_zero() {
            s.push('-');
        }
        s.push_str(&int_part.to_string());
        if digits > 0 {
            s.push('.');
            let f = frac_part.to_string();
            for _ in f.len()..digits as usize {
                s.push('0');
            }
            s.push_str(&f);
        }
        s
    }
}

fn rat_sign(r: &BigRational) -> Sign {
    if r.is_zero() {
        Sign::Zero
    } else if r.is_negative() {
        Sign::Neg
    } else {
        Sign::Pos
    }
}

impl fmt::Debug for Qf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Qf({self})")
    }
}

impl Ord for Qf {
    fn cmp(&self, other: &Qf) -> Ordering {
        match (self - other).sign() {
            Sign::Neg => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Pos => Ordering::Greater,
        }
    }
}

impl PartialOrd for Qf {
    fn partial_cmp(&self, other: &Qf) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a Qf> for &'a Qf {
    type Output = Qf;
    fn add(self, rhs: &Qf) -> Qf {
        let d = join_radicands(self.d, rhs.d);
        Qf::from_parts(&self.a + &rhs.a, &self.b + &rhs.b, d)
    }
}

impl<'a> Sub<&'a Qf> for &'a Qf {
    type Output = Qf;
    fn sub(self, rhs: &Qf) -> Qf {
        let d = join_radicands(self.d, rhs.d);
        Qf::from_parts(&self.a - &rhs.a, &self.b - &rhs.b, d)
    }
}

impl<'a> Mul<&'a Qf> for &'a Qf {
    type Output = Qf;
    fn mul(self, rhs: &Qf) -> Qf {
        let d = join_radicands(self.d, rhs.d);
        let bd = if self.b.is_zero() || rhs.b.is_zero() {
            BigRational::zero()
        } else {
            &self.b * &rhs.b * BigRational::from_integer(BigInt::from(d))
        };
        Qf::from_parts(
            &self.a * &rhs.a + bd,
            &self.a * &rhs.b + &self.b * &rhs.a,
            d,
        )
    }
}

impl<'a> Div<&'a Qf> for &'a Qf {
    type Output = Qf;
    fn div(self, rhs: &Qf) -> Qf {
        match self.checked_div(rhs) {
            Ok(q) => q,
            Err(e) => panic!("{e}"),
        }
    }
}

impl Neg for &Qf {
    type Output = Qf;
    fn neg(self) -> Qf {
        Qf::from_parts(-self.a.clone(), -self.b.clone(), self.d)
    }
}

impl Neg for Qf {
    type Output = Qf;
    fn neg(self) -> Qf {
        -&self
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Qf> for Qf {
            type Output = Qf;
            fn $m(self, rhs: Qf) -> Qf { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a Qf> for Qf {
            type Output = Qf;
            fn $m(self, rhs: &Qf) -> Qf { (&self).$m(rhs) }
        }
        impl<'a> $tr<Qf> for &'a Qf {
            type Output = Qf;
            fn $m(self, rhs: Qf) -> Qf { self.$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl AddAssign<&Qf> for Qf {
    fn add_assign(&mut self, rhs: &Qf) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Qf> for Qf {
    fn sub_assign(&mut self, rhs: &Qf) {
        *self = &*self - rhs;
    }
}

impl From<i64> for Qf {
    fn from(k: i64) -> Qf {
        Qf::int(k)
    }
}

impl From<BigRational> for Qf {
    fn from(r: BigRational) -> Qf {
        Qf::rational(r)
    }
}

impl std::iter::Sum for Qf {
    fn sum<I: Iterator<Item = Qf>>(iter: I) -> Qf {
        iter.fold(Qf::zero(), |acc, x| acc + x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Qf {
        s.parse().unwrap()
    }

    #[test]
    fn norm_identity() {
        assert_eq!(q("1+√2") * q("1-√2"), Qf::int(-1));
    }

    #[test]
    fn additive_identity() {
        let x = q("3/7-5/2√2");
        assert_eq!(&x + &Qf::zero(), x);
    }

    #[test]
    fn division_rationalizes() {
        let r = q("3+√2") / q("1+√2");
        assert_eq!(r, q("-1+2√2"));
        assert_eq!(r * q("1+√2"), q("3+√2"));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(
            q("1").checked_div(&Qf::zero()),
            Err(QfError::DivisionByZero)
        );
        assert_eq!(
            q("1").arith(&Qf::zero(), Op::Div),
            Err(QfError::DivisionByZero)
        );
    }

    #[test]
    fn mixed_fields_are_rejected() {
        assert_eq!(
            q("√2").arith(&q("√5"), Op::Add),
            Err(QfError::MixedFields(2, 5))
        );
        // rationals mix with anything
        assert_eq!(q("1/2").arith(&q("√5"), Op::Mul).unwrap(), q("1/2√5"));
    }

    #[test]
    fn signs() {
        assert_eq!(Qf::zero().sign(), Sign::Zero);
        assert_eq!(q("3-2√2").sign(), Sign::Pos);
        assert_eq!(q("1-√2").sign(), Sign::Neg);
        assert_eq!(q("-3+2√2").sign(), Sign::Neg);
        assert_eq!(q("-1+√2").sign(), Sign::Pos);
    }

    #[test]
    fn floors() {
        assert_eq!(q("√2").floor(), BigInt::from(1));
        assert_eq!(q("-√2").floor(), BigInt::from(-2));
        assert_eq!(q("5/2").floor(), BigInt::from(2));
        assert_eq!(q("-5/2").floor(), BigInt::from(-3));
        assert_eq!(q("7").floor(), BigInt::from(7));
        assert_eq!(q("1/2-1/2√5").floor(), BigInt::from(-1));
        assert_eq!(q("1000001/3+77/5√2").ceil(), BigInt::from(333356));
    }

    #[test]
    fn squarefree_check() {
        assert!(Qf::sqrt(2).is_ok());
        assert_eq!(Qf::sqrt(8), Err(QfError::BadRadicand(8)));
        assert_eq!(Qf::sqrt(1), Err(QfError::BadRadicand(1)));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(q("√2").to_decimal(15), "1.414213562373095");
        assert_eq!(q("-1/2√2").to_decimal(5), "-0.70710");
        assert_eq!(q("0").to_decimal(2), "0.00");
    }
}
