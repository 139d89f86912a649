//! Lattice point enumeration and model-set patterns.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::qfield::{dot, vec_sub, Qf, Sign};

use super::{FaceData, Scheme, Window};

/// Ball `B(center, radius)` in physical space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    pub center: Vec<Qf>,
    pub radius: BigRational,
}

impl Region {
    pub fn ball(center: Vec<Qf>, radius: BigRational) -> Region {
        Region { center, radius }
    }

    pub fn centered(d: usize, radius: i64) -> Region {
        Region {
            center: vec![Qf::zero(); d],
            radius: BigRational::from_integer(radius.into()),
        }
    }

    pub fn contains(&self, x: &[Qf]) -> bool {
        let diff = vec_sub(x, &self.center);
        let r2 = Qf::rational(&self.radius * &self.radius);
        dot(&diff, &diff) <= r2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Open,
    Closed,
}

/// A point of a pattern: its lattice label `m` and physical position.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub m: Vec<i64>,
    pub pos: Vec<Qf>,
}

/// Points sorted lexicographically by label.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PointPattern {
    pub points: Vec<Point>,
}

impl PointPattern {
    pub fn from_points(mut points: Vec<Point>) -> PointPattern {
        points.sort();
        points.dedup();
        PointPattern { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Positions, sorted.
    pub fn positions(&self) -> Vec<Vec<Qf>> {
        let mut v: Vec<Vec<Qf>> = self.points.iter().map(|p| p.pos.clone()).collect();
        v.sort();
        v
    }

    pub fn is_subset_of(&self, other: &PointPattern) -> bool {
        let theirs = other.positions();
        self.points
            .iter()
            .all(|p| theirs.binary_search(&p.pos).is_ok())
    }

    /// The pattern moved by `−shift`; labels move by `−label_shift`.
    pub fn translate_back(&self, label_shift: &[i64], shift: &[Qf]) -> PointPattern {
        PointPattern::from_points(
            self.points
                .iter()
                .map(|p| Point {
                    m: p.m.iter().zip(label_shift).map(|(a, b)| a - b).collect(),
                    pos: vec_sub(&p.pos, shift),
                })
                .collect(),
        )
    }

    /// Points whose position lies in the region.
    pub fn restrict(&self, region: &Region) -> PointPattern {
        PointPattern {
            points: self
                .points
                .iter()
                .filter(|p| region.contains(&p.pos))
                .cloned()
                .collect(),
        }
    }
}

/// An F-linear form in the integer coordinates `m`, with a floating shadow
/// used to decide signs quickly when the value is far from zero.
#[derive(Debug, Clone)]
pub struct LinForm {
    coef: Vec<Qf>,
    coef_f64: Vec<f64>,
}

impl LinForm {
    pub fn new(coef: Vec<Qf>) -> LinForm {
        let coef_f64 = coef.iter().map(Qf::to_f64).collect();
        LinForm { coef, coef_f64 }
    }

    pub fn eval(&self, m: &[i64]) -> Qf {
        let mut acc = Qf::zero();
        for (c, &k) in self.coef.iter().zip(m) {
            if k != 0 && !c.is_zero() {
                acc += &c.mul_int(&BigInt::from(k));
            }
        }
        acc
    }

    /// `sign(form(m) − offset)`, exact.
    pub fn sign_minus(&self, m: &[i64], offset: &Qf, offset_f64: f64) -> Sign {
        let mut v = -offset_f64;
        let mut scale = offset_f64.abs();
        for (c, &k) in self.coef_f64.iter().zip(m) {
            let t = c * k as f64;
            v += t;
            scale += t.abs();
        }
        let tol = 1e-9 * (1.0 + scale);
        if v > tol {
            Sign::Pos
        } else if v < -tol {
            Sign::Neg
        } else {
            (&self.eval(m) - offset).sign()
        }
    }
}

/// Calls `visit` with the label of every lattice point whose physical
/// position lies in `region` and whose star image lies in the box
/// `[lo, hi]`; some points just outside the box may be visited too.
pub(crate) fn enumerate_lattice(
    scheme: &Scheme,
    lo: &[Qf],
    hi: &[Qf],
    region: &Region,
    mut visit: impl FnMut(&[i64]),
) {
    let n = scheme.n();
    let d = scheme.d();
    let r = scheme.rank();
    let rad = Qf::rational(region.radius.clone());
    let mut box_lo: Vec<Qf> = lo.to_vec();
    let mut box_hi: Vec<Qf> = hi.to_vec();
    for c in &region.center {
        box_lo.push(c - &rad);
        box_hi.push(c + &rad);
    }
    // m = T⁻ᵀ p for p in the box gives exact integer bounds on each m_i
    let s = scheme.lattice_matrix_inverse();
    let mut m_lo = Vec::with_capacity(r);
    let mut m_hi = Vec::with_capacity(r);
    for i in 0..r {
        let mut a = Qf::zero();
        let mut b = Qf::zero();
        for k in 0..r {
            let c = &s[(k, i)];
            let (x, y) = (c * &box_lo[k], c * &box_hi[k]);
            let (x, y) = if x <= y { (x, y) } else { (y, x) };
            a += &x;
            b += &y;
        }
        m_lo.push(a.ceil().to_i64().expect("enumeration box fits in i64"));
        m_hi.push(b.floor().to_i64().expect("enumeration box fits in i64"));
    }
    if m_lo.iter().zip(&m_hi).any(|(a, b)| a > b) {
        return;
    }
    let rows: Vec<Vec<f64>> = (0..r)
        .map(|i| {
            scheme.star_f64()[i]
                .iter()
                .chain(&scheme.phys_f64()[i])
                .copied()
                .collect()
        })
        .collect();
    let lo_f: Vec<f64> = box_lo.iter().map(Qf::to_f64).collect();
    let hi_f: Vec<f64> = box_hi.iter().map(Qf::to_f64).collect();
    let margin: Vec<f64> = (0..r)
        .map(|k| 1e-9 * (1.0 + lo_f[k].abs().max(hi_f[k].abs())))
        .collect();
    // suffix[j][k]: range of Σ_{i ≥ j} m_i T_ik
    let mut suffix = vec![vec![(0.0f64, 0.0f64); r]; r + 1];
    for j in (0..r).rev() {
        for k in 0..r {
            let (a, b) = (rows[j][k] * m_lo[j] as f64, rows[j][k] * m_hi[j] as f64);
            suffix[j][k] = (suffix[j + 1][k].0 + a.min(b), suffix[j + 1][k].1 + a.max(b));
        }
    }
    let center_f: Vec<f64> = region.center.iter().map(Qf::to_f64).collect();
    let r2 = rad.to_f64().powi(2);
    let r2q = &rad * &rad;
    let ctx = Ctx {
        rows: &rows,
        lo: &lo_f,
        hi: &hi_f,
        margin: &margin,
        suffix: &suffix,
        m_lo: &m_lo,
        m_hi: &m_hi,
    };
    let mut m = vec![0i64; r];
    let partial = vec![0.0f64; r];
    let mut accept = |m: &[i64], p: &[f64]| {
        let dist2: f64 = (0..d).map(|k| (p[n + k] - center_f[k]).powi(2)).sum();
        let tol = 1e-9 * (1.0 + r2);
        if dist2 > r2 + tol {
            return;
        }
        if dist2 >= r2 - tol {
            let pos = scheme.phys_i64(m);
            let diff = vec_sub(&pos, &region.center);
            if dot(&diff, &diff) > r2q {
                return;
            }
        }
        visit(m);
    };
    descend(&ctx, 0, &mut m, &partial, &mut accept);
}

struct Ctx<'a> {
    rows: &'a [Vec<f64>],
    lo: &'a [f64],
    hi: &'a [f64],
    margin: &'a [f64],
    suffix: &'a [Vec<(f64, f64)>],
    m_lo: &'a [i64],
    m_hi: &'a [i64],
}

fn descend(
    ctx: &Ctx,
    j: usize,
    m: &mut [i64],
    partial: &[f64],
    accept: &mut impl FnMut(&[i64], &[f64]),
) {
    let r = m.len();
    let mut next = vec![0.0f64; r];
    // range of m_j compatible with the box given the already fixed prefix
    let mut a = ctx.m_lo[j] as f64;
    let mut b = ctx.m_hi[j] as f64;
    for k in 0..r {
        let t = ctx.rows[j][k];
        if t == 0.0 {
            if partial[k] + ctx.suffix[j + 1][k].0 > ctx.hi[k] + ctx.margin[k]
                || partial[k] + ctx.suffix[j + 1][k].1 < ctx.lo[k] - ctx.margin[k]
            {
                return;
            }
            continue;
        }
        // lo ≤ partial + t m_j + rest ≤ hi
        let lo = ctx.lo[k] - ctx.margin[k] - partial[k] - ctx.suffix[j + 1][k].1;
        let hi = ctx.hi[k] + ctx.margin[k] - partial[k] - ctx.suffix[j + 1][k].0;
        let (x, y) = if t > 0.0 {
            (lo / t, hi / t)
        } else {
            (hi / t, lo / t)
        };
        a = a.max(x);
        b = b.min(y);
    }
    if a > b {
        return;
    }
    let (a, b) = ((a - 1e-9).ceil() as i64, (b + 1e-9).floor() as i64);
    for v in a.max(ctx.m_lo[j])..=b.min(ctx.m_hi[j]) {
        m[j] = v;
        for k in 0..r {
            next[k] = partial[k] + ctx.rows[j][k] * v as f64;
        }
        if j + 1 == r {
            accept(m, &next);
        } else {
            descend(ctx, j + 1, m, &next, accept);
        }
    }
    m[j] = 0;
}

/// Membership of `γ* − w` in a polytope, with the face forms precomputed.
pub(crate) struct FaceForms {
    forms: Vec<(LinForm, Qf, f64, Sign)>,
}

impl FaceForms {
    /// Faces of `W + w` as forms in `m`: `a·γ* − (c + a·w)`.
    pub(crate) fn window(scheme: &Scheme, window: &Window, w: &[Qf]) -> FaceForms {
        FaceForms {
            forms: window
                .faces()
                .iter()
                .map(|f| {
                    let coef = scheme
                        .generators()
                        .iter()
                        .map(|g| dot(&f.normal, &g.star))
                        .collect();
                    let off = &f.offset + &dot(&f.normal, w);
                    let off_f = off.to_f64();
                    (LinForm::new(coef), off, off_f, f.side)
                })
                .collect(),
        }
    }

    /// Per-face signs of `γ*` relative to the faces of `W + w`.
    pub(crate) fn signs<'a>(&'a self, m: &'a [i64]) -> impl Iterator<Item = (Sign, Sign)> + 'a {
        self.forms
            .iter()
            .map(move |(f, off, off_f, side)| (f.sign_minus(m, off, *off_f), *side))
    }
}

/// `𝔓(w + W)` (or with the open window) within `region`.
pub fn generate_pattern(
    scheme: &Scheme,
    window: &Window,
    w: &[Qf],
    region: &Region,
    boundary: Boundary,
) -> PointPattern {
    let forms = FaceForms::window(scheme, window, w);
    let (lo, hi) = window.bounding_box();
    let lo: Vec<Qf> = lo.iter().zip(w).map(|(a, b)| a + b).collect();
    let hi: Vec<Qf> = hi.iter().zip(w).map(|(a, b)| a + b).collect();
    let mut points = Vec::new();
    enumerate_lattice(scheme, &lo, &hi, region, |m| {
        let ok = forms
            .signs(m)
            .all(|(s, side)| s == side || (boundary == Boundary::Closed && s == Sign::Zero));
        if ok {
            points.push(Point {
                m: m.to_vec(),
                pos: scheme.phys_i64(m),
            });
        }
    });
    PointPattern::from_points(points)
}

/// Faces of `M` relative to `w`, shared by the hull selector.
pub(crate) fn reversed_forms(
    scheme: &Scheme,
    faces: &FaceData,
    w: &[Qf],
) -> Vec<(LinForm, Qf, f64)> {
    // a·(w − γ*) − c = −(a·γ* − (a·w − c))
    faces
        .faces
        .iter()
        .map(|f| {
            let coef = scheme
                .generators()
                .iter()
                .map(|g| dot(&f.normal, &g.star))
                .collect();
            let off = &dot(&f.normal, w) - &f.offset;
            let off_f = off.to_f64();
            (LinForm::new(coef), off, off_f)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cps::to_big;
    use crate::presets;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(s: &str) -> Qf {
        s.parse().unwrap()
    }

    /// Independent enumeration: every label in a wide cube, filtered exactly.
    fn brute_force(
        scheme: &Scheme,
        window: &Window,
        w: &[Qf],
        region: &Region,
        boundary: Boundary,
        k: i64,
    ) -> PointPattern {
        let r = scheme.rank();
        let mut points = Vec::new();
        let mut m = vec![-k; r];
        loop {
            let star = scheme.star(&to_big(&m));
            let x = vec_sub(&star, w);
            let pos = scheme.phys(&to_big(&m));
            if window.contains(&x, boundary == Boundary::Closed) && region.contains(&pos) {
                points.push(Point { m: m.clone(), pos });
            }
            let mut i = 0;
            while i < r {
                m[i] += 1;
                if m[i] <= k {
                    break;
                }
                m[i] = -k;
                i += 1;
            }
            if i == r {
                break;
            }
        }
        PointPattern::from_points(points)
    }

    #[test]
    fn far_region_is_empty() {
        let p = presets::fibonacci();
        // the Fibonacci points are dense enough that a tiny ball between two
        // of them is empty
        let region = Region::ball(vec![q("1/2")], BigRational::new(1.into(), 100.into()));
        let pat = generate_pattern(&p.scheme, &p.window, &[q("0")], &region, Boundary::Closed);
        assert!(pat.is_empty());
    }

    #[test]
    fn no_misses_against_brute_force() {
        let p = presets::octagon();
        let region = Region::centered(2, 2);
        for w in [
            p.shift.clone(),
            vec![q("0"), q("0")],
            vec![q("1/3"), q("-1/7+1/5√2")],
        ] {
            for b in [Boundary::Open, Boundary::Closed] {
                let fast = generate_pattern(&p.scheme, &p.window, &w, &region, b);
                let slow = brute_force(&p.scheme, &p.window, &w, &region, b, 4);
                assert_eq!(fast, slow);
                assert!(!fast.is_empty());
            }
        }
        let f = presets::fibonacci();
        let region = Region::centered(1, 6);
        for w in [vec![q("0")], vec![q("1/2")], vec![q("-1/3+1/7√5")]] {
            let fast = generate_pattern(&f.scheme, &f.window, &w, &region, Boundary::Closed);
            let slow = brute_force(&f.scheme, &f.window, &w, &region, Boundary::Closed, 12);
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn open_is_inside_closed_and_singular_differs() {
        let p = presets::octagon();
        let region = Region::centered(2, 5);
        let zero = vec![Qf::zero(), Qf::zero()];
        let open = generate_pattern(&p.scheme, &p.window, &zero, &region, Boundary::Open);
        let closed = generate_pattern(&p.scheme, &p.window, &zero, &region, Boundary::Closed);
        assert!(open.is_subset_of(&closed));
        assert!(open.len() < closed.len());
        let open = generate_pattern(&p.scheme, &p.window, &p.shift, &region, Boundary::Open);
        let closed = generate_pattern(&p.scheme, &p.window, &p.shift, &region, Boundary::Closed);
        assert_eq!(open, closed);
    }

    #[test]
    fn minimal_distance_is_constant_for_generic_shifts() {
        let p = presets::octagon();
        let region = Region::centered(2, 6);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut seen = Vec::new();
        for _ in 0..10 {
            let w: Vec<Qf> = (0..2)
                .map(|_| {
                    &Qf::frac(rng.gen_range(-500..500), 997)
                        + &(&Qf::sqrt(2).unwrap() * &Qf::frac(rng.gen_range(-50..50), 1009))
                })
                .collect();
            let pat = generate_pattern(&p.scheme, &p.window, &w, &region, Boundary::Closed);
            let pos = pat.positions();
            let mut best: Option<Qf> = None;
            for i in 0..pos.len() {
                for j in i + 1..pos.len() {
                    let diff = vec_sub(&pos[i], &pos[j]);
                    let d2 = dot(&diff, &diff);
                    if best.as_ref().map_or(true, |b| d2 < *b) {
                        best = Some(d2);
                    }
                }
            }
            let best = best.expect("at least two points");
            assert!(best.sign() == Sign::Pos);
            seen.push(best);
        }
        seen.dedup();
        assert_eq!(seen.len(), 1, "minimal distances {seen:?}");
        // the Ammann-Beenker short diagonal has squared length 2 − √2
        assert_eq!(seen[0], q("2-√2"));
    }

    #[test]
    fn lin_form_sign_is_exact_near_zero() {
        let f = LinForm::new(vec![q("1"), q("-√2")]);
        // 99 − 70√2 ≈ 0.0051, 239 − 169√2 ≈ −0.0021
        assert_eq!(f.sign_minus(&[99, 70], &Qf::zero(), 0.0), Sign::Pos);
        assert_eq!(f.sign_minus(&[239, 169], &Qf::zero(), 0.0), Sign::Neg);
        assert_eq!(f.sign_minus(&[0, 0], &Qf::zero(), 0.0), Sign::Zero);
        assert!(f.eval(&[0, 0]).is_zero());
    }
}
