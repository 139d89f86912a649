//! Hull points `(z, c)`, fibers of the parametrization map, the selector
//! turning a hull point into a point pattern, and the Ellis action.
//!
//! A hull point over `z = [w, s]_Σ` is the pattern
//! `lim_{u → 0, u ∈ C_c} 𝔓(W + w + u) − s`: boundary points of `w + W` are
//! kept exactly when moving into the chamber `c` keeps them inside.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::arrangement::{Arrangement, ConeType};
use crate::cps::{
    enumerate_lattice, points_in_ellipsoid, reversed_forms, Point, PointPattern, Region,
};
use crate::ellis::{Ellis, HullElement, TorusPoint};
use crate::error::{Error, Result};
use crate::qfield::{dot, vec_add, vec_sub, Qf, QfMatrix, Sign};
use crate::zmodule::{annihilator, integer_kernel};

/// A cone type on the cut type of a point, `None` (printed `∞`) off it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtConeType(pub Vec<Option<Sign>>);

impl ExtConeType {
    pub fn domain(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i].is_some()).collect()
    }

    /// `c.t`: `t(H)` where it is nonzero, `c(H)` elsewhere.
    pub fn acted(&self, t: &ConeType) -> Vec<Option<Sign>> {
        self.0
            .iter()
            .zip(&t.0)
            .map(|(c, &s)| if s == Sign::Zero { *c } else { Some(s) })
            .collect()
    }
}

impl fmt::Display for ExtConeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            match s {
                Some(s) => write!(f, "{s}")?,
                None => write!(f, "∞")?,
            }
        }
        Ok(())
    }
}

impl FromStr for ExtConeType {
    type Err = Error;

    fn from_str(s: &str) -> Result<ExtConeType> {
        s.chars()
            .map(|c| match c {
                '+' => Ok(Some(Sign::Pos)),
                '-' => Ok(Some(Sign::Neg)),
                '∞' | '*' => Ok(None),
                _ => Err(Error::InvalidInput(format!("bad extended cone type `{s}`"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(ExtConeType)
    }
}

/// A point of the hull.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HullPoint {
    pub z: TorusPoint,
    pub c: ExtConeType,
}

impl fmt::Display for HullPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z={}  c={}", self.z, self.c)
    }
}

/// Result of the limit computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitPatch {
    pub positions: Vec<Vec<Qf>>,
    /// Index into the schedule at which the patch was accepted.
    pub stabilized_at: usize,
    /// Lattice label of the last approximating `γ`.
    pub gamma: Vec<i64>,
}

/// Number of consecutive equal patches that counts as stabilized. Two
/// can agree by accident while `δ` is still coarse.
pub const STABLE_RUN: usize = 3;

/// The schedule `δ_k = 2^{-k}` for `k` in `from..=to`.
pub fn halving_schedule(from: u32, to: u32) -> Vec<BigRational> {
    (from..=to)
        .map(|k| BigRational::new(1.into(), BigInt::from(2).pow(k)))
        .collect()
}

impl Ellis {
    /// Indices of the hyperplanes with a singular translate through `w`.
    pub fn cut_type(&self, w: &[Qf]) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .faces()
            .faces
            .iter()
            .zip(self.face_modules())
            .filter(|(f, module)| module.contains(&[&dot(&f.normal, w) - &f.offset]))
            .map(|(f, _)| f.hyperplane)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    fn sub_arrangement(&self, cut: &[usize]) -> Arrangement {
        let hs = self.arrangement().hyperplanes();
        Arrangement::new(
            self.scheme().n(),
            cut.iter().map(|&i| hs[i].clone()).collect(),
        )
    }

    /// All hull points over `z`, one per chamber of the arrangement of the
    /// cut type, in lexicographic order of `c`.
    pub fn fiber(&self, z: &TorusPoint) -> Vec<HullPoint> {
        let cut = self.cut_type(z.internal());
        let k = self.arrangement().len();
        if cut.is_empty() {
            return vec![HullPoint {
                z: z.clone(),
                c: ExtConeType(vec![None; k]),
            }];
        }
        let sub = self.sub_arrangement(&cut).enumerate();
        let mut out: Vec<HullPoint> = sub
            .cones()
            .iter()
            .filter(|c| c.t.is_chamber())
            .map(|c| {
                let mut ext = vec![None; k];
                for (&i, &s) in cut.iter().zip(&c.t.0) {
                    ext[i] = Some(s);
                }
                HullPoint {
                    z: z.clone(),
                    c: ExtConeType(ext),
                }
            })
            .collect();
        out.sort();
        out
    }

    /// Checks `dom(c) = 𝕳_z` and that `c` is a chamber of `𝕳_z`.
    pub fn validate_point(&self, p: &HullPoint) -> Result<()> {
        if p.c.0.len() != self.arrangement().len() {
            return Err(Error::InvalidInput(
                "cone type length differs from the hyperplane count".into(),
            ));
        }
        let cut = self.cut_type(p.z.internal());
        if p.c.domain() != cut {
            return Err(Error::InvalidInput(format!(
                "domain of {} is not the cut type of z",
                p.c
            )));
        }
        if self.arrangement().feasible_partial(&p.c.0).is_none() {
            return Err(Error::InvalidInput(format!(
                "{} is not a chamber of the cut type",
                p.c
            )));
        }
        Ok(())
    }

    pub fn hull_point(&self, z: TorusPoint, c: ExtConeType) -> Result<HullPoint> {
        let p = HullPoint { z, c };
        self.validate_point(&p)?;
        Ok(p)
    }

    /// The pattern of `p` within `region`, positions exact; labels are those
    /// of the lattice points before the physical shift.
    pub fn selector(&self, p: &HullPoint, region: &Region) -> PointPattern {
        let scheme = self.scheme();
        let (w, s) = (p.z.internal(), p.z.physical());
        let faces = &self.faces().faces;
        let forms = reversed_forms(scheme, self.faces(), w);
        // γ* ∈ w + W
        let (lo, hi) = self.window().bounding_box();
        let lo = vec_add(&lo, w);
        let hi = vec_add(&hi, w);
        let shifted = Region::ball(vec_add(&region.center, s), region.radius.clone());
        let mut points = Vec::new();
        enumerate_lattice(scheme, &lo, &hi, &shifted, |m| {
            let keep = faces.iter().zip(&forms).all(|(f, (form, off, off_f))| {
                // sign of a·(w − γ*) − c
                let v = form.sign_minus(m, off, *off_f).flip();
                v == f.side || (v == Sign::Zero && p.c.0[f.hyperplane] == Some(f.side))
            });
            if keep {
                points.push(Point {
                    m: m.to_vec(),
                    pos: vec_sub(&scheme.phys_i64(m), s),
                });
            }
        });
        PointPattern::from_points(points)
    }

    /// `(z, c)·(z', t) = (z + z', c')` with `c' = c.t` on `𝕳_{z+z'}`.
    pub fn act(&self, p: &HullPoint, g: &HullElement) -> Result<HullPoint> {
        let z = p.z.add(&g.z, self.scheme());
        let cut = self.cut_type(z.internal());
        let acted = p.c.acted(&g.t);
        let mut c = vec![None; self.arrangement().len()];
        for &i in &cut {
            c[i] = Some(acted[i].ok_or_else(|| {
                Error::InvariantViolation(format!(
                    "c.t undefined on hyperplane {} of the new cut type",
                    i + 1
                ))
            })?);
        }
        let q = HullPoint {
            z,
            c: ExtConeType(c),
        };
        self.validate_point(&q).map_err(|e| {
            Error::InvariantViolation(format!("action result is not a hull point: {e}"))
        })?;
        Ok(q)
    }

    /// Lattice labels `m` with `γ* − w ∈ 𝖢_t ∩ B(0, δ)`: the hits with
    /// `|γ| ≤ ρ` for the first `ρ = 1, 2, 4, …` that has any.
    pub fn approximants(
        &self,
        w: &[Qf],
        t: &ConeType,
        delta: &BigRational,
        max_radius: i64,
    ) -> Result<Vec<Vec<i64>>> {
        let a = self.analysis(t)?;
        let scheme = self.scheme();
        let star = scheme.star_module();
        let to_i64 = |m: Vec<BigInt>| -> Vec<i64> {
            m.iter()
                .map(|x| x.to_i64().expect("label fits in i64"))
                .collect()
        };
        if t.is_origin() {
            return Ok(star.membership(w).map(to_i64).into_iter().collect());
        }
        // γ = γ₀ + λ with w − γ₀* ∈ V and λ* ∈ V
        let m0 = to_i64(
            star.coset_meets_subspace(w, &a.v)
                .ok_or_else(|| Error::InvalidInput(format!("w is not in V_{t} + Γ*")))?,
        );
        let u0 = vec_sub(w, &scheme.star_i64(&m0));
        let ann = annihilator(scheme.n(), &a.v);
        let labels: Vec<Vec<i64>> = if ann.is_empty() {
            (0..scheme.rank())
                .map(|i| (0..scheme.rank()).map(|j| (i == j) as i64).collect())
                .collect()
        } else {
            let rows: Vec<Vec<Qf>> = ann
                .iter()
                .map(|x| {
                    scheme
                        .generators()
                        .iter()
                        .map(|g| dot(x, &g.star))
                        .collect()
                })
                .collect();
            integer_kernel(&QfMatrix::from_rows(rows).expect("one field"))
                .into_iter()
                .map(to_i64)
                .collect()
        };
        let d2 = Qf::rational(delta * delta);
        let df = delta.to_f64().expect("finite");
        let u0f: Vec<f64> = u0.iter().map(Qf::to_f64).collect();
        let p0f: Vec<f64> = scheme.phys_i64(&m0).iter().map(Qf::to_f64).collect();
        let mut radius = 1i64;
        loop {
            let rf = radius as f64;
            let cols: Vec<Vec<f64>> = labels
                .iter()
                .map(|l| {
                    let st = scheme.star_i64(l);
                    let ph = scheme.phys_i64(l);
                    st.iter()
                        .map(|x| x.to_f64() / df)
                        .chain(ph.iter().map(|x| x.to_f64() / rf))
                        .collect()
                })
                .collect();
            let y: Vec<f64> = u0f
                .iter()
                .map(|x| x / df)
                .chain(p0f.iter().map(|x| -x / rf))
                .collect();
            let mut hits: Vec<Vec<i64>> = points_in_ellipsoid(&cols, &y, 2.0, 4096)
                .into_iter()
                .map(|c| {
                    let mut m = m0.clone();
                    for (cj, l) in c.iter().zip(&labels) {
                        for (x, y) in m.iter_mut().zip(l) {
                            *x += cj * y;
                        }
                    }
                    m
                })
                .filter(|m| {
                    let u = vec_sub(&scheme.star_i64(m), w);
                    dot(&u, &u) < d2 && self.arrangement().sign_vector(&u) == *t
                })
                .collect();
            if !hits.is_empty() {
                hits.sort();
                return Ok(hits);
            }
            if radius >= max_radius {
                return Err(Error::NoStabilization(format!(
                    "no lattice point with star image in the {t}-cone head of radius {delta} within |γ| ≤ {max_radius}"
                )));
            }
            radius *= 2;
        }
    }

    /// Approximates `p·g` by `p` translated by `s_g − γ` with
    /// `γ* → w_g` inside the cone of `g`, and returns the patch on
    /// `B(0, radius)` once [`STABLE_RUN`] consecutive steps of the schedule
    /// agree.
    pub fn net_limit_oracle(
        &self,
        p: &HullPoint,
        g: &HullElement,
        radius: &BigRational,
        schedule: &[BigRational],
    ) -> Result<LimitPatch> {
        let scheme = self.scheme();
        let (wg, sg) = (g.z.internal(), g.z.physical());
        let mut prev: Option<Vec<Vec<Qf>>> = None;
        let mut run = 0;
        for (k, delta) in schedule.iter().enumerate() {
            let hits = self.approximants(wg, &g.t, delta, 1 << 24)?;
            // deterministic choice: shortest physical vector, then label
            let gamma = hits
                .into_iter()
                .min_by_key(|m| {
                    let x = scheme.phys_i64(m);
                    (dot(&x, &x), m.clone())
                })
                .expect("nonempty");
            let t_vec = vec_sub(sg, &scheme.phys_i64(&gamma));
            let region = Region::ball(t_vec.clone(), radius.clone());
            let patch: Vec<Vec<Qf>> = {
                let mut v: Vec<Vec<Qf>> = self
                    .selector(p, &region)
                    .points
                    .iter()
                    .map(|x| vec_sub(&x.pos, &t_vec))
                    .collect();
                v.sort();
                v
            };
            run = if prev.as_ref() == Some(&patch) {
                run + 1
            } else {
                1
            };
            if run >= STABLE_RUN {
                return Ok(LimitPatch {
                    positions: patch,
                    stabilized_at: k,
                    gamma,
                });
            }
            prev = Some(patch);
        }
        Err(Error::NoStabilization(format!(
            "patch did not stabilize over {} steps",
            schedule.len()
        )))
    }

    /// Hull points over `z` reached from the fiber by an element.
    pub fn fiber_range(&self, z: &TorusPoint, g: &HullElement) -> Result<Vec<HullPoint>> {
        let mut out = self
            .fiber(z)
            .iter()
            .map(|p| self.act(p, g))
            .collect::<Result<Vec<_>>>()?;
        out.sort();
        out.dedup();
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cps::{generate_pattern, Boundary};
    use crate::presets;

    fn q(s: &str) -> Qf {
        s.parse().unwrap()
    }

    fn octagon() -> Ellis {
        let p = presets::octagon();
        Ellis::new(p.scheme, p.window).unwrap()
    }

    fn fibonacci() -> Ellis {
        let p = presets::fibonacci();
        Ellis::new(p.scheme, p.window).unwrap()
    }

    fn ball(r: i64) -> Region {
        Region::centered(2, r)
    }

    #[test]
    fn cut_types() {
        let e = octagon();
        assert_eq!(e.cut_type(&[q("0"), q("0")]), vec![0, 1, 2, 3]);
        let shift = presets::octagon().shift;
        assert!(e.cut_type(&shift).is_empty());
        let g = e.scheme().star_i64(&[2, -1, 3, 1]);
        assert_eq!(e.cut_type(&vec_add(&shift, &g)), e.cut_type(&shift));
        // a point on the x-axis only: a Γ*-translate of (1/3, 0) is not on the
        // other three families
        assert_eq!(e.cut_type(&[q("1/3√2"), q("0")]), vec![0]);
    }

    #[test]
    fn fiber_sizes() {
        let e = octagon();
        let zero = TorusPoint::zero(e.scheme());
        assert_eq!(e.fiber(&zero).len(), 8);
        let p = presets::octagon();
        let z = e.torus(&p.shift, &[q("0"), q("0")]);
        assert_eq!(e.fiber(&z).len(), 1);
        let z = e.torus(&[q("1/3√2"), q("0")], &[q("0"), q("0")]);
        assert_eq!(e.fiber(&z).len(), 2);
        let f = fibonacci();
        assert_eq!(f.fiber(&TorusPoint::zero(f.scheme())).len(), 2);
        for p in e.fiber(&zero) {
            e.validate_point(&p).unwrap();
        }
    }

    #[test]
    fn sandwich_and_distinctness_on_the_zero_fiber() {
        let e = octagon();
        let zero = TorusPoint::zero(e.scheme());
        let w = vec![Qf::zero(), Qf::zero()];
        let open = generate_pattern(e.scheme(), e.window(), &w, &ball(5), Boundary::Open);
        let closed = generate_pattern(e.scheme(), e.window(), &w, &ball(5), Boundary::Closed);
        assert!(open.len() < closed.len());
        let mut seen = Vec::new();
        for p in e.fiber(&zero) {
            let s = e.selector(&p, &ball(5));
            assert!(open.is_subset_of(&s) && s.is_subset_of(&closed));
            seen.push(s.positions());
        }
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 8);
    }

    #[test]
    fn nonsingular_selector_is_the_model_set() {
        let e = octagon();
        let p = presets::octagon();
        let z = e.torus(&p.shift, &[q("0"), q("0")]);
        let h = &e.fiber(&z)[0];
        let s = e.selector(h, &ball(6));
        let m = generate_pattern(e.scheme(), e.window(), &p.shift, &ball(6), Boundary::Closed);
        assert_eq!(s.positions(), m.positions());
    }

    #[test]
    fn zero_fiber_action() {
        let e = octagon();
        let zero = TorusPoint::zero(e.scheme());
        for g in e.idempotents_over_zero() {
            let range = e.fiber_range(&zero, &g).unwrap();
            let expected = if g.t.is_origin() {
                8
            } else if g.t.is_chamber() {
                1
            } else {
                2
            };
            assert_eq!(range.len(), expected, "{}", g.t);
        }
    }

    #[test]
    fn action_is_compatible_with_composition() {
        let e = octagon();
        let zero = TorusPoint::zero(e.scheme());
        let idem = e.idempotents_over_zero();
        for p in e.fiber(&zero) {
            for g in &idem {
                for h in &idem {
                    let gh = e.compose(g, h).unwrap();
                    assert_eq!(
                        e.act(&p, &gh).unwrap(),
                        e.act(&e.act(&p, h).unwrap(), g).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn translation_equivariance() {
        let e = octagon();
        let zero = TorusPoint::zero(e.scheme());
        let m = [1, 0, -1, 2];
        let g = e.translation(&m);
        let gamma = e.scheme().phys_i64(&m);
        for p in e.fiber(&zero).iter().take(3) {
            let moved = e.act(p, &g).unwrap();
            assert_eq!(moved.z.add(&g.z.neg(e.scheme()), e.scheme()), p.z);
            let a = e.selector(&moved, &ball(4)).positions();
            let region = Region::ball(gamma.clone(), BigRational::from_integer(4.into()));
            let b: Vec<Vec<Qf>> = {
                let mut v: Vec<Vec<Qf>> = e
                    .selector(p, &region)
                    .positions()
                    .iter()
                    .map(|x| vec_sub(x, &gamma))
                    .collect();
                v.sort();
                v
            };
            assert_eq!(a, b);
        }
    }

    #[test]
    fn oracle_matches_action_on_a_few_pairs() {
        let e = octagon();
        let zero = TorusPoint::zero(e.scheme());
        let fiber = e.fiber(&zero);
        let idem = e.idempotents_over_zero();
        let r = BigRational::from_integer(4.into());
        let schedule = halving_schedule(4, 24);
        for (p, g) in [
            (&fiber[0], &idem[3]),
            (&fiber[5], &idem[8]),
            (&fiber[2], &idem[16]),
        ] {
            let lim = e.net_limit_oracle(p, g, &r, &schedule).unwrap();
            let direct = e.selector(
                &e.act(p, g).unwrap(),
                &Region::ball(vec![Qf::zero(); 2], r.clone()),
            );
            assert_eq!(lim.positions, direct.positions(), "{} · {}", p.c, g.t);
        }
    }

    #[test]
    fn fibonacci_half_lines_swap_fiber_points() {
        let e = fibonacci();
        let zero = TorusPoint::zero(e.scheme());
        let fiber = e.fiber(&zero);
        assert_eq!(fiber.len(), 2);
        let r = BigRational::from_integer(10.into());
        let region = Region::centered(1, 10);
        let pats: Vec<_> = fiber
            .iter()
            .map(|p| e.selector(p, &region).positions())
            .collect();
        assert_ne!(pats[0], pats[1]);
        for g in e
            .idempotents_over_zero()
            .iter()
            .filter(|g| g.t.is_chamber())
        {
            let target = e.act(&fiber[0], g).unwrap();
            for p in &fiber {
                assert_eq!(e.act(p, g).unwrap(), target);
                let lim = e
                    .net_limit_oracle(p, g, &r, &halving_schedule(4, 24))
                    .unwrap();
                assert_eq!(lim.positions, e.selector(&target, &region).positions());
            }
        }
    }

    #[test]
    fn ext_cone_type_text() {
        let c: ExtConeType = "+∞-+".parse().unwrap();
        assert_eq!(c.to_string(), "+∞-+");
        assert_eq!(c.domain(), vec![0, 2, 3]);
        assert!("+0".parse::<ExtConeType>().is_err());
    }
}
