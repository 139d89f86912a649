//! Convex polytopal windows in internal dimension 1 or 2.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::qfield::{dot, vec_add, vec_neg, vec_sub, Qf, Sign};

use super::{normalize, Scheme};

/// The half-space description of one face: the window lies on side `side`
/// of `{x : normal·x = offset}`, with `normal` normalized.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Face {
    pub normal: Vec<Qf>,
    pub offset: Qf,
    pub side: Sign,
}

impl Face {
    /// Normalizes an arbitrary normal, adjusting offset and side.
    pub fn new(normal: Vec<Qf>, offset: Qf, side: Sign) -> Result<Face> {
        if normal.iter().all(Qf::is_zero) {
            return Err(Error::InvalidWindow("zero face normal".into()));
        }
        if side == Sign::Zero {
            return Err(Error::InvalidWindow("face side must be + or -".into()));
        }
        let lead = normal
            .iter()
            .find(|x| !x.is_zero())
            .expect("nonzero")
            .clone();
        let (normal, s) = normalize(&normal);
        let offset = offset.checked_div(&lead)?;
        Ok(Face {
            normal,
            offset,
            side: side.times(s),
        })
    }

    fn value(&self, x: &[Qf]) -> Sign {
        (&dot(&self.normal, x) - &self.offset).sign()
    }
}

/// A compact convex full-dimensional polytope, stored both as its vertices
/// (counterclockwise from the lexicographic minimum when `n = 2`, ascending
/// when `n = 1`) and as its faces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window {
    n: usize,
    vertices: Vec<Vec<Qf>>,
    faces: Vec<Face>,
}

fn cross(u: &[Qf], v: &[Qf]) -> Qf {
    &(&u[0] * &v[1]) - &(&u[1] * &v[0])
}

fn lex_cmp(u: &[Qf], v: &[Qf]) -> Ordering {
    u.cmp(v)
}

impl Window {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> &[Vec<Qf>] {
        &self.vertices
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    /// Projection of the unit cube of the lattice basis: the zonotope
    /// `Σ_i [0, e_i*]`.
    pub fn canonical(scheme: &Scheme) -> Result<Window> {
        let gens: Vec<Vec<Qf>> = scheme.generators().iter().map(|g| g.star.clone()).collect();
        Window::zonotope(scheme.n(), &gens)
    }

    /// Minkowski sum of the segments `[0, g]`.
    pub fn zonotope(n: usize, gens: &[Vec<Qf>]) -> Result<Window> {
        if gens.iter().any(|g| g.iter().all(Qf::is_zero)) {
            return Err(Error::DegenerateWindow("some e_i* is zero".into()));
        }
        match n {
            1 => {
                let lo: Qf = gens.iter().map(|g| g[0].clone().min(Qf::zero())).sum();
                let hi: Qf = gens.iter().map(|g| g[0].clone().max(Qf::zero())).sum();
                Window::from_vertices(1, vec![vec![lo], vec![hi]])
            }
            2 => {
                // orient every generator into the half-plane x > 0 or (x = 0, y > 0)
                let start: Vec<Qf> = gens.iter().fold(vec![Qf::zero(), Qf::zero()], |acc, g| {
                    if lex_cmp(g, &[Qf::zero(), Qf::zero()]) == Ordering::Less {
                        vec_add(&acc, g)
                    } else {
                        acc
                    }
                });
                let mut edges: Vec<Vec<Qf>> = gens
                    .iter()
                    .map(|g| {
                        if lex_cmp(g, &[Qf::zero(), Qf::zero()]) == Ordering::Less {
                            vec_neg(g)
                        } else {
                            g.clone()
                        }
                    })
                    .collect();
                edges.sort_by(|u, v| match cross(u, v).sign() {
                    Sign::Pos => Ordering::Less,
                    Sign::Neg => Ordering::Greater,
                    Sign::Zero => Ordering::Equal,
                });
                let mut merged: Vec<Vec<Qf>> = Vec::new();
                for e in edges {
                    match merged.last_mut() {
                        Some(last) if cross(last, &e).is_zero() => *last = vec_add(last, &e),
                        _ => merged.push(e),
                    }
                }
                if merged.len() < 2 {
                    return Err(Error::DegenerateWindow("all e_i* are parallel".into()));
                }
                let mut vertices = vec![start];
                for e in merged
                    .iter()
                    .chain(merged.iter().map(|e| vec_neg(e)).collect::<Vec<_>>().iter())
                {
                    let next = vec_add(vertices.last().expect("nonempty"), e);
                    vertices.push(next);
                }
                let closing = vertices.pop().expect("closed loop");
                debug_assert_eq!(closing, vertices[0]);
                Window::from_vertices(2, vertices)
            }
            n => Err(Error::InvalidWindow(format!(
                "unsupported internal dimension {n}"
            ))),
        }
    }

    /// Builds the window from its vertices in any order.
    pub fn from_vertices(n: usize, points: Vec<Vec<Qf>>) -> Result<Window> {
        if points.iter().any(|p| p.len() != n) {
            return Err(Error::InvalidWindow("vertex dimension mismatch".into()));
        }
        let w = match n {
            1 => {
                if points.len() != 2 {
                    return Err(Error::InvalidWindow(
                        "an interval needs exactly 2 endpoints".into(),
                    ));
                }
                let (a, b) = (points[0][0].clone(), points[1][0].clone());
                let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                if lo == hi {
                    return Err(Error::DegenerateWindow("interval has zero length".into()));
                }
                let faces = vec![
                    Face {
                        normal: vec![Qf::one()],
                        offset: lo.clone(),
                        side: Sign::Pos,
                    },
                    Face {
                        normal: vec![Qf::one()],
                        offset: hi.clone(),
                        side: Sign::Neg,
                    },
                ];
                Window {
                    n,
                    vertices: vec![vec![lo], vec![hi]],
                    faces,
                }
            }
            2 => {
                let hull = convex_hull(&points);
                if hull.len() < 3 {
                    return Err(Error::DegenerateWindow(
                        "polygon is not full-dimensional".into(),
                    ));
                }
                if hull.len() != points.len() {
                    return Err(Error::InvalidWindow(
                        "vertices are repeated or not in strictly convex position".into(),
                    ));
                }
                let k = hull.len();
                let faces = (0..k)
                    .map(|i| {
                        let e = vec_sub(&hull[(i + 1) % k], &hull[i]);
                        // outward normal of a counterclockwise edge
                        let out = vec![e[1].clone(), -&e[0]];
                        let off = dot(&out, &hull[i]);
                        Face::new(out, off, Sign::Neg)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Window {
                    n,
                    vertices: hull,
                    faces,
                }
            }
            n => {
                return Err(Error::InvalidWindow(format!(
                    "unsupported internal dimension {n}"
                )))
            }
        };
        w.check()?;
        Ok(w)
    }

    /// Builds the window from an irredundant list of faces.
    pub fn from_halfspaces(n: usize, faces: Vec<Face>) -> Result<Window> {
        let faces = faces
            .into_iter()
            .map(|f| {
                if f.normal.len() != n {
                    return Err(Error::InvalidWindow("face dimension mismatch".into()));
                }
                Face::new(f.normal, f.offset, f.side)
            })
            .collect::<Result<Vec<_>>>()?;
        let inside = |x: &[Qf]| {
            faces
                .iter()
                .all(|f| matches!(f.value(x), s if s == f.side || s == Sign::Zero))
        };
        let mut points: Vec<Vec<Qf>> = Vec::new();
        match n {
            1 => {
                for f in &faces {
                    let p = vec![f.offset.clone()];
                    if inside(&p) && !points.contains(&p) {
                        points.push(p);
                    }
                }
            }
            2 => {
                for i in 0..faces.len() {
                    for j in i + 1..faces.len() {
                        let det = cross(&faces[i].normal, &faces[j].normal);
                        if det.is_zero() {
                            continue;
                        }
                        let (a, b) = (&faces[i], &faces[j]);
                        let x = &(&(&a.offset * &b.normal[1]) - &(&b.offset * &a.normal[1])) / &det;
                        let y = &(&(&a.normal[0] * &b.offset) - &(&b.normal[0] * &a.offset)) / &det;
                        let p = vec![x, y];
                        if inside(&p) && !points.contains(&p) {
                            points.push(p);
                        }
                    }
                }
            }
            n => {
                return Err(Error::InvalidWindow(format!(
                    "unsupported internal dimension {n}"
                )))
            }
        }
        let w = Window::from_vertices(n, points).map_err(|e| {
            Error::InvalidWindow(format!("half-spaces do not bound a polytope ({e})"))
        })?;
        let mut given = faces.clone();
        let mut derived = w.faces.clone();
        let key = |f: &Face| (f.normal.clone(), f.offset.clone(), f.side);
        given.sort_by_key(key);
        derived.sort_by_key(key);
        if given != derived {
            return Err(Error::InvalidWindow(
                "half-spaces are redundant or do not describe a compact polytope".into(),
            ));
        }
        Ok(w)
    }

    /// Cross-validates the two descriptions.
    fn check(&self) -> Result<()> {
        let k = Qf::int(self.vertices.len() as i64);
        let centroid: Vec<Qf> = (0..self.n)
            .map(|i| &self.vertices.iter().map(|v| v[i].clone()).sum::<Qf>() / &k)
            .collect();
        for f in &self.faces {
            if f.value(&centroid) != f.side {
                return Err(Error::DegenerateWindow("centroid is not interior".into()));
            }
            let on = self
                .vertices
                .iter()
                .filter(|v| f.value(v) == Sign::Zero)
                .count();
            if on != self.n {
                return Err(Error::InvalidWindow(
                    "face and vertex lists disagree".into(),
                ));
            }
            if self
                .vertices
                .iter()
                .any(|v| ![f.side, Sign::Zero].contains(&f.value(v)))
            {
                return Err(Error::InvalidWindow("vertex outside a face".into()));
            }
        }
        Ok(())
    }

    /// Whether `x` lies in the window (closed) or its interior (open).
    pub fn contains(&self, x: &[Qf], closed: bool) -> bool {
        self.faces.iter().all(|f| {
            let s = f.value(x);
            s == f.side || (closed && s == Sign::Zero)
        })
    }

    /// Coordinatewise bounding box.
    pub fn bounding_box(&self) -> (Vec<Qf>, Vec<Qf>) {
        let lo = (0..self.n)
            .map(|i| {
                self.vertices
                    .iter()
                    .map(|v| v[i].clone())
                    .min()
                    .expect("vertices")
            })
            .collect();
        let hi = (0..self.n)
            .map(|i| {
                self.vertices
                    .iter()
                    .map(|v| v[i].clone())
                    .max()
                    .expect("vertices")
            })
            .collect();
        (lo, hi)
    }

    /// `−W`.
    pub fn reversed(&self) -> Window {
        let mut vertices: Vec<Vec<Qf>> = self.vertices.iter().map(|v| vec_neg(v)).collect();
        if self.n == 2 {
            vertices = convex_hull(&vertices);
        } else {
            vertices.reverse();
        }
        let faces = self
            .faces
            .iter()
            .map(|f| Face {
                normal: f.normal.clone(),
                offset: -&f.offset,
                side: f.side.flip(),
            })
            .collect();
        Window {
            n: self.n,
            vertices,
            faces,
        }
    }
}

/// Strictly convex hull, counterclockwise from the lexicographic minimum;
/// collinear boundary points are dropped.
fn convex_hull(points: &[Vec<Qf>]) -> Vec<Vec<Qf>> {
    let mut pts: Vec<Vec<Qf>> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let turn = |o: &Vec<Qf>, a: &Vec<Qf>, b: &Vec<Qf>| cross(&vec_sub(a, o), &vec_sub(b, o)).sign();
    let mut lower: Vec<Vec<Qf>> = Vec::new();
    for p in &pts {
        while lower.len() >= 2
            && turn(&lower[lower.len() - 2], &lower[lower.len() - 1], p) != Sign::Pos
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Vec<Qf>> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2
            && turn(&upper[upper.len() - 2], &upper[upper.len() - 1], p) != Sign::Pos
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cps::Generator;
    use crate::presets;

    fn q(s: &str) -> Qf {
        s.parse().unwrap()
    }

    fn v(x: &str, y: &str) -> Vec<Qf> {
        vec![q(x), q(y)]
    }

    #[test]
    fn zonotope_vertex_counts() {
        let g = |p: [&str; 2], s: [&str; 2]| Generator {
            phys: p.iter().map(|x| q(x)).collect(),
            star: s.iter().map(|x| q(x)).collect(),
        };
        let s = Scheme::new(
            2,
            2,
            2,
            vec![
                g(["1", "0"], ["1", "0"]),
                g(["0", "1"], ["0", "1"]),
                g(["√2", "0"], ["1", "√2"]),
                g(["0", "√2"], ["√2", "1"]),
            ],
        )
        .unwrap();
        let w = Window::canonical(&s).unwrap();
        // four pairwise non-parallel segments give an octagon
        assert_eq!(w.vertices().len(), 8);
        let sq = Window::from_vertices(2, vec![v("1", "1"), v("0", "0"), v("1", "0"), v("0", "1")])
            .unwrap();
        assert_eq!(
            sq.vertices(),
            &[v("0", "0"), v("1", "0"), v("1", "1"), v("0", "1")]
        );
    }

    #[test]
    fn unit_square() {
        let w = Window::zonotope(2, &[v("0", "1"), v("1", "0")]).unwrap();
        assert_eq!(
            w.vertices(),
            &[v("0", "0"), v("1", "0"), v("1", "1"), v("0", "1")]
        );
        assert!(Window::zonotope(2, &[v("1", "1"), v("-2", "-2")]).is_err());
        assert!(Window::zonotope(2, &[v("1", "1"), v("0", "0"), v("0", "1")]).is_err());
    }

    fn subset_sums_hull(gens: &[Vec<Qf>]) -> Vec<Vec<Qf>> {
        let mut pts = Vec::new();
        for mask in 0u32..(1 << gens.len()) {
            let mut p = v("0", "0");
            for (i, g) in gens.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    p = vec_add(&p, g);
                }
            }
            pts.push(p);
        }
        convex_hull(&pts)
    }

    proptest::proptest! {
        #[test]
        fn zonotope_matches_brute_force(raw in proptest::collection::vec((-4i64..5, -4i64..5, -3i64..4), 1..6)) {
            let gens: Vec<Vec<Qf>> = raw
                .iter()
                .map(|&(a, b, c)| vec![Qf::int(a), &Qf::int(b) + &Qf::sqrt(2).unwrap().mul_int(&c.into())])
                .filter(|g| !g.iter().all(Qf::is_zero))
                .collect();
            let hull = subset_sums_hull(&gens);
            match Window::zonotope(2, &gens) {
                Ok(w) => {
                    proptest::prop_assert_eq!(w.vertices(), hull.as_slice());
                    let mut dirs: Vec<Vec<Qf>> = Vec::new();
                    for g in &gens {
                        if !dirs.iter().any(|d| cross(d, g).is_zero()) {
                            dirs.push(g.clone());
                        }
                    }
                    proptest::prop_assert_eq!(w.vertices().len(), 2 * dirs.len());
                }
                Err(_) => proptest::prop_assert!(hull.len() < 3),
            }
        }
    }

    #[test]
    fn octagon_window() {
        let p = presets::octagon();
        let w = &p.window;
        assert_eq!(w.vertices().len(), 8);
        assert_eq!(w.vertices()[0], v("-1/2√2", "-1+1/2√2"));
        // regular: all edges have length 1 and are symmetric about the centre
        let k = w.vertices().len();
        for i in 0..k {
            let e = vec_sub(&w.vertices()[(i + 1) % k], &w.vertices()[i]);
            assert_eq!(dot(&e, &e), Qf::one());
        }
    }

    #[test]
    fn fibonacci_window() {
        let p = presets::fibonacci();
        assert_eq!(p.window.vertices(), &[vec![q("1/2-1/2√5")], vec![q("1")]]);
    }

    #[test]
    fn halfspaces_round_trip() {
        let p = presets::octagon();
        let w2 = Window::from_halfspaces(2, p.window.faces().to_vec()).unwrap();
        assert_eq!(w2, p.window);
        let mut faces = p.window.faces().to_vec();
        // a redundant face is rejected
        faces.push(Face::new(v("0", "1"), q("100"), Sign::Neg).unwrap());
        assert!(Window::from_halfspaces(2, faces).is_err());
        // an open polygon is rejected
        let faces = p.window.faces()[..4].to_vec();
        assert!(Window::from_halfspaces(2, faces).is_err());
    }

    #[test]
    fn scaled_normals_are_normalized() {
        let f = Face::new(v("-2", "4"), q("6"), Sign::Pos).unwrap();
        assert_eq!(f.normal, v("1", "-2"));
        assert_eq!(f.offset, q("-3"));
        assert_eq!(f.side, Sign::Neg);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(Window::from_vertices(2, vec![v("0", "0"), v("1", "1"), v("2", "2")]).is_err());
        assert!(
            Window::from_vertices(2, vec![v("0", "0"), v("2", "0"), v("1", "0"), v("1", "1")])
                .is_err()
        );
        assert!(Window::from_vertices(1, vec![vec![q("1")], vec![q("1")]]).is_err());
    }

    #[test]
    fn reversed_window() {
        let p = presets::octagon();
        let m = p.window.reversed();
        for x in [v("0", "0"), v("1/3", "-1/5"), v("1", "1"), v("2", "0")] {
            assert_eq!(m.contains(&x, true), p.window.contains(&vec_neg(&x), true));
        }
    }
}
