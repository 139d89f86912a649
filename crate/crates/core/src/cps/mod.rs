//! Cut-and-project schemes, polytopal windows, the star map and model sets.

mod pattern;
mod search;
mod window;

pub(crate) use pattern::{enumerate_lattice, reversed_forms};
pub use pattern::{generate_pattern, Boundary, LinForm, Point, PointPattern, Region};
pub(crate) use search::points_in_ellipsoid;
pub use window::{Face, Window};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::qfield::{dot, is_squarefree, Qf, QfMatrix, Sign};
use crate::subgroup::FGSubgroup;
use crate::zmodule::{integer_kernel, ZModule};

/// One lattice generator `(e_i, e_i*)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub phys: Vec<Qf>,
    pub star: Vec<Qf>,
}

/// A cut-and-project scheme with lattice `Σ` generated by `(e_i, e_i*)`.
#[derive(Debug, Clone)]
pub struct Scheme {
    d: usize,
    n: usize,
    radicand: u64,
    gens: Vec<Generator>,
    t: QfMatrix,
    t_inv: QfMatrix,
    phys_f64: Vec<Vec<f64>>,
    star_f64: Vec<Vec<f64>>,
}

impl Scheme {
    /// `radicand` is `D`; a purely rational scheme may still name any
    /// squarefree `D`.
    pub fn new(radicand: u64, d: usize, n: usize, gens: Vec<Generator>) -> Result<Scheme> {
        if !is_squarefree(radicand) {
            return Err(Error::InvalidScheme(format!(
                "D = {radicand} is not squarefree >= 2"
            )));
        }
        if d == 0 || n == 0 {
            return Err(Error::InvalidScheme("dimensions must be positive".into()));
        }
        if gens.len() != n + d {
            return Err(Error::InvalidScheme(format!(
                "expected n + d = {} generators, got {}",
                n + d,
                gens.len()
            )));
        }
        for (i, g) in gens.iter().enumerate() {
            if g.phys.len() != d || g.star.len() != n {
                return Err(Error::InvalidScheme(format!(
                    "generator {} has the wrong shape",
                    i + 1
                )));
            }
            for x in g.phys.iter().chain(&g.star) {
                if x.radicand() != 0 && x.radicand() != radicand {
                    return Err(Error::InvalidScheme(format!(
                        "generator {} uses √{} in a scheme over √{}",
                        i + 1,
                        x.radicand(),
                        radicand
                    )));
                }
            }
        }
        let t = QfMatrix::from_rows(
            gens.iter()
                .map(|g| g.star.iter().chain(&g.phys).cloned().collect())
                .collect(),
        )?;
        let t_inv = t.inverse().map_err(|_| {
            Error::InvalidScheme("the vectors (e_i*, e_i) are linearly dependent".into())
        })?;
        let phys =
            QfMatrix::from_cols(&gens.iter().map(|g| g.phys.clone()).collect::<Vec<_>>(), d)?;
        if !integer_kernel(&phys).is_empty() {
            return Err(Error::InvalidScheme(
                "projection to physical space is not injective on the lattice".into(),
            ));
        }
        let phys_f64 = gens
            .iter()
            .map(|g| g.phys.iter().map(Qf::to_f64).collect())
            .collect();
        let star_f64 = gens
            .iter()
            .map(|g| g.star.iter().map(Qf::to_f64).collect())
            .collect();
        Ok(Scheme {
            d,
            n,
            radicand,
            gens,
            t,
            t_inv,
            phys_f64,
            star_f64,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `n + d`.
    pub fn rank(&self) -> usize {
        self.n + self.d
    }

    pub fn radicand(&self) -> u64 {
        self.radicand
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    /// Rows `(e_i*, e_i)`.
    pub fn lattice_matrix(&self) -> &QfMatrix {
        &self.t
    }

    pub fn lattice_matrix_inverse(&self) -> &QfMatrix {
        &self.t_inv
    }

    pub(crate) fn phys_f64(&self) -> &[Vec<f64>] {
        &self.phys_f64
    }

    pub(crate) fn star_f64(&self) -> &[Vec<f64>] {
        &self.star_f64
    }

    pub fn star(&self, m: &[BigInt]) -> Vec<Qf> {
        combine(self.gens.iter().map(|g| &g.star), m, self.n)
    }

    pub fn phys(&self, m: &[BigInt]) -> Vec<Qf> {
        combine(self.gens.iter().map(|g| &g.phys), m, self.d)
    }

    pub fn star_i64(&self, m: &[i64]) -> Vec<Qf> {
        self.star(&to_big(m))
    }

    pub fn phys_i64(&self, m: &[i64]) -> Vec<Qf> {
        self.phys(&to_big(m))
    }

    /// `Γ*` as a module in internal space.
    pub fn star_module(&self) -> ZModule {
        ZModule::new(self.n, self.gens.iter().map(|g| g.star.clone()).collect())
    }

    /// `Γ` as a module in physical space.
    pub fn phys_module(&self) -> ZModule {
        ZModule::new(self.d, self.gens.iter().map(|g| g.phys.clone()).collect())
    }

    /// Integer coordinates of the lattice points whose star image lies in
    /// the hyperplane with the given normal.
    pub fn stabilizer(&self, normal: &[Qf]) -> Vec<Vec<BigInt>> {
        let row: Vec<Qf> = self.gens.iter().map(|g| dot(normal, &g.star)).collect();
        integer_kernel(&QfMatrix::from_rows(vec![row]).expect("one field"))
    }

    /// Σ-coordinates of a point of `ℝ^{n+d}` written as `(internal, physical)`.
    pub fn lattice_coords(&self, v: &[Qf]) -> Vec<Qf> {
        self.t_inv.vec_mul(v).expect("dimension")
    }

    /// The point `Σ x_i (e_i*, e_i)` for real coordinates `x`.
    pub fn from_lattice_coords(&self, x: &[Qf]) -> Vec<Qf> {
        self.t.vec_mul(x).expect("dimension")
    }
}

fn combine<'a>(vs: impl Iterator<Item = &'a Vec<Qf>>, m: &[BigInt], dim: usize) -> Vec<Qf> {
    let mut out = vec![Qf::zero(); dim];
    for (v, c) in vs.zip(m) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v) {
            *o += &x.mul_int(c);
        }
    }
    out
}

pub fn to_big(m: &[i64]) -> Vec<BigInt> {
    m.iter().map(|&x| BigInt::from(x)).collect()
}

/// A linear hyperplane through the origin, given by its normal scaled so
/// the first nonzero coordinate is `1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hyperplane {
    pub normal: Vec<Qf>,
}

impl Hyperplane {
    pub fn side(&self, x: &[Qf]) -> Sign {
        dot(&self.normal, x).sign()
    }

    /// A spanning vector of the hyperplane, for planar internal space.
    pub fn direction(&self) -> Option<Vec<Qf>> {
        match self.normal.as_slice() {
            [a, b] => Some(vec![-b, a.clone()]),
            _ => None,
        }
    }

    /// F-basis of the hyperplane.
    pub fn basis(&self) -> Vec<Vec<Qf>> {
        QfMatrix::from_rows(vec![self.normal.clone()])
            .expect("one field")
            .kernel_basis()
    }
}

/// Scales `a` so its first nonzero coordinate is `1`; returns the sign of
/// the scale factor.
pub fn normalize(a: &[Qf]) -> (Vec<Qf>, Sign) {
    let lead = a.iter().find(|x| !x.is_zero()).expect("nonzero normal");
    let inv = lead.inverse().expect("nonzero");
    (a.iter().map(|x| x * &inv).collect(), lead.sign())
}

/// A face of the reversed window `M = −W`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReversedFace {
    pub normal: Vec<Qf>,
    pub offset: Qf,
    /// Interior side: `sign(normal·x − offset)` inside `M`.
    pub side: Sign,
    /// Index into [`FaceData::hyperplanes`].
    pub hyperplane: usize,
}

/// Faces of `M = −W` and the family of linear hyperplanes parallel to them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceData {
    pub faces: Vec<ReversedFace>,
    pub hyperplanes: Vec<Hyperplane>,
}

impl FaceData {
    pub fn new(window: &Window) -> FaceData {
        let mut hyperplanes: Vec<Hyperplane> = window
            .faces()
            .iter()
            .map(|f| Hyperplane {
                normal: f.normal.clone(),
            })
            .collect();
        hyperplanes.sort();
        hyperplanes.dedup();
        let faces = window
            .faces()
            .iter()
            .map(|f| ReversedFace {
                normal: f.normal.clone(),
                offset: -&f.offset,
                side: f.side.flip(),
                hyperplane: hyperplanes
                    .iter()
                    .position(|h| h.normal == f.normal)
                    .expect("hyperplane present"),
            })
            .collect();
        FaceData { faces, hyperplanes }
    }

    /// Whether `x` lies in `M` (closed) or its interior (open).
    pub fn contains(&self, x: &[Qf], boundary: Boundary) -> bool {
        self.faces.iter().all(|f| {
            let s = (&dot(&f.normal, x) - &f.offset).sign();
            s == f.side || (boundary == Boundary::Closed && s == Sign::Zero)
        })
    }
}

/// Outcome of the almost-canonical check for one hyperplane.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerReport {
    pub hyperplane: Hyperplane,
    pub stabilizer_rank: usize,
    pub dense: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlmostCanonicalReport {
    pub hyperplanes: Vec<StabilizerReport>,
}

impl AlmostCanonicalReport {
    /// The sufficient condition (every stabilizer has dense star image in its
    /// hyperplane) holds.
    pub fn pass(&self) -> bool {
        self.hyperplanes.iter().all(|h| h.dense)
    }
}

pub fn validate_almost_canonical(scheme: &Scheme, faces: &FaceData) -> AlmostCanonicalReport {
    let hyperplanes = faces
        .hyperplanes
        .iter()
        .map(|h| {
            let stab = scheme.stabilizer(&h.normal);
            let basis = h.basis();
            let images: Vec<Vec<Qf>> = stab.iter().map(|m| scheme.star(m)).collect();
            let g = FGSubgroup::in_subspace(basis, &images);
            StabilizerReport {
                hyperplane: h.clone(),
                stabilizer_rank: stab.len(),
                dense: g.is_dense(),
            }
        })
        .collect();
    AlmostCanonicalReport { hyperplanes }
}
