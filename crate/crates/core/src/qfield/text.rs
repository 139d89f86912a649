//! Textual form `p/q+r/s√D`.
//!
//! The printer emits the canonical form: rational part first, then the
//! irrational part with its coefficient written before the radical, unit
//! coefficients omitted. The parser also accepts `r√D/s`, `√D/s`, a leading
//! `+`, the ASCII spelling `sqrt` for the radical, and surrounding spaces.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Qf, QfError};

fn write_rational(f: &mut fmt::Formatter<'_>, r: &BigRational) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Qf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = self.rational_part();
        let b = self.irrational_part();
        if b.is_zero() {
            return write_rational(f, a);
        }
        if !a.is_zero() {
            write_rational(f, a)?;
            if b.is_positive() {
                write!(f, "+")?;
            }
        }
        if b.is_negative() {
            write!(f, "-")?;
        }
        let mag = b.abs();
        if !mag.is_one() {
            write_rational(f, &mag)?;
        }
        write!(f, "√{}", self.radicand())
    }
}

impl FromStr for Qf {
    type Err = QfError;

    fn from_str(s: &str) -> Result<Qf, QfError> {
        let err = || QfError::Parse(s.to_string());
        let text: String = s
            .replace("sqrt", "√")
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect();
        if text.is_empty() {
            return Err(err());
        }
        // split into signed terms at + or - that do not start the string
        let mut terms: Vec<&str> = Vec::new();
        let mut start = 0;
        for (i, c) in text.char_indices() {
            if i > 0 && (c == '+' || c == '-') {
                terms.push(&text[start..i]);
                start = i;
            }
        }
        terms.push(&text[start..]);
        if terms.len() > 2 {
            return Err(err());
        }
        let mut a = BigRational::zero();
        let mut b = BigRational::zero();
        let mut d: Option<u64> = None;
        let mut seen_rational = false;
        let mut seen_radical = false;
        for term in terms {
            let (neg, body) = match term.as_bytes().first() {
                Some(b'-') => (true, &term[1..]),
                Some(b'+') => (false, &term[1..]),
                _ => (false, term),
            };
            if body.is_empty() {
                return Err(err());
            }
            if let Some(pos) = body.find('√') {
                if seen_radical {
                    return Err(err());
                }
                seen_radical = true;
                let (coef, rest) = (&body[..pos], &body[pos + '√'.len_utf8()..]);
                let (rad, denom) = match rest.find('/') {
                    Some(k) => (&rest[..k], Some(&rest[k + 1..])),
                    None => (rest, None),
                };
                let rad: u64 = parse_digits(rad).ok_or_else(err)?;
                let mut c = if coef.is_empty() {
                    BigRational::one()
                } else {
                    parse_rational(coef).ok_or_else(err)?
                };
                if let Some(q) = denom {
                    if coef.contains('/') {
                        return Err(err());
                    }
                    let q: BigInt = q.parse().map_err(|_| err())?;
                    if q.is_zero() || q.is_negative() {
                        return Err(err());
                    }
                    c /= BigRational::from_integer(q);
                }
                if neg {
                    c = -c;
                }
                b = c;
                d = Some(rad);
            } else {
                if seen_rational {
                    return Err(err());
                }
                seen_rational = true;
                let r = parse_rational(body).ok_or_else(err)?;
                a = if neg { -r } else { r };
            }
        }
        match d {
            None => Ok(Qf::rational(a)),
            Some(d) => Qf::new(a, b, d),
        }
    }
}

fn parse_digits(s: &str) -> Option<u64> {
    if s.is_empty() || !s.bytes().all(|c| c.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let ok = |t: &str| !t.is_empty() && t.bytes().all(|c| c.is_ascii_digit());
    match s.find('/') {
        Some(k) => {
            let (p, q) = (&s[..k], &s[k + 1..]);
            if !ok(p) || !ok(q) {
                return None;
            }
            let q: BigInt = q.parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(BigRational::new(p.parse().ok()?, q))
        }
        None => {
            if !ok(s) {
                return None;
            }
            Some(BigRational::from_integer(s.parse().ok()?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_strings_round_trip() {
        for s in [
            "0",
            "1",
            "-1/2√2",
            "3+2√2",
            "√5",
            "-√2",
            "1/2-1/2√5",
            "-7/3+5/4√2",
            "12",
        ] {
            let x: Qf = s.parse().unwrap();
            assert_eq!(x.to_string(), s);
        }
    }

    #[test]
    fn alternative_spellings() {
        let x: Qf = "-1-√2/2".parse().unwrap();
        assert_eq!(x.to_string(), "-1-1/2√2");
        let y: Qf = " 1 + 3 sqrt2 / 4 ".parse().unwrap();
        assert_eq!(y.to_string(), "1+3/4√2");
        let z: Qf = "+2/4".parse().unwrap();
        assert_eq!(z.to_string(), "1/2");
        let w: Qf = "√2+1".parse().unwrap();
        assert_eq!(w.to_string(), "1+√2");
    }

    #[test]
    fn zero_irrational_part_collapses() {
        let x: Qf = "3+0√2".parse().unwrap();
        assert!(x.is_rational());
        assert_eq!(x.to_string(), "3");
    }

    #[test]
    fn rejects_malformed() {
        for s in [
            "",
            "1+",
            "√",
            "1/0",
            "√4",
            "1+2+√2",
            "√2+√2",
            "a",
            "1/2/3",
            "--1",
            "1/2√2/3",
        ] {
            assert!(s.parse::<Qf>().is_err(), "accepted {s:?}");
        }
    }
}
