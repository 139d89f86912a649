//! The Ellis semigroup of the hull as data.
//!
//! Elements are pairs `(z, t)` of a point of the torus `[ℝ^{n+d}]_Σ` and a
//! non-trivial cone type, with `z` constrained to `[V_t × ℝ^d]_Σ`.

use std::fmt;

use num_rational::BigRational;
use num_traits::Signed;

use crate::arrangement::{Arrangement, ConeType, FaceSemigroup};
use crate::cps::{FaceData, Scheme, Window};
use crate::error::{Error, Result};
use crate::qfield::{dot, vec_sub, Qf, QfMatrix, Sign};
use crate::subgroup::ConeAnalysis;
use crate::zmodule::{in_span, ZModule};

/// A point of `[ℝ^{n+d}]_Σ`, stored as the representative whose
/// Σ-coordinates lie in `[0, 1)`. Coordinates are `(internal, physical)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusPoint {
    n: usize,
    v: Vec<Qf>,
}

impl TorusPoint {
    pub fn canonical(scheme: &Scheme, v: &[Qf]) -> TorusPoint {
        let x: Vec<Qf> = scheme
            .lattice_coords(v)
            .iter()
            .map(|c| c - &Qf::big_int(c.floor()))
            .collect();
        TorusPoint {
            n: scheme.n(),
            v: scheme.from_lattice_coords(&x),
        }
    }

    pub fn from_parts(scheme: &Scheme, w: &[Qf], s: &[Qf]) -> TorusPoint {
        let v: Vec<Qf> = w.iter().chain(s).cloned().collect();
        TorusPoint::canonical(scheme, &v)
    }

    pub fn zero(scheme: &Scheme) -> TorusPoint {
        TorusPoint {
            n: scheme.n(),
            v: vec![Qf::zero(); scheme.rank()],
        }
    }

    pub fn add(&self, other: &TorusPoint, scheme: &Scheme) -> TorusPoint {
        let v: Vec<Qf> = self.v.iter().zip(&other.v).map(|(a, b)| a + b).collect();
        TorusPoint::canonical(scheme, &v)
    }

    pub fn neg(&self, scheme: &Scheme) -> TorusPoint {
        let v: Vec<Qf> = self.v.iter().map(|a| -a).collect();
        TorusPoint::canonical(scheme, &v)
    }

    pub fn is_zero(&self) -> bool {
        self.v.iter().all(Qf::is_zero)
    }

    pub fn coords(&self) -> &[Qf] {
        &self.v
    }

    /// Internal part `w` of the canonical representative.
    pub fn internal(&self) -> &[Qf] {
        &self.v[..self.n]
    }

    /// Physical part `s` of the canonical representative.
    pub fn physical(&self) -> &[Qf] {
        &self.v[self.n..]
    }
}

impl fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.v.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]_Σ")
    }
}

/// `(w, t)` with `w ∈ V_t + Γ*`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InternalElement {
    pub w: Vec<Qf>,
    pub t: ConeType,
}

/// `(z, t)` with `z ∈ [V_t × ℝ^d]_Σ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HullElement {
    pub z: TorusPoint,
    pub t: ConeType,
}

impl fmt::Display for HullElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z={}  t={}", self.z, self.t)
    }
}

/// One group of components sharing the subspace `V_t = ⟨𝖢_t⟩`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentGroup {
    pub dim: usize,
    /// Basis of `V_t` in reduced echelon form.
    pub span: Vec<Vec<Qf>>,
    pub types: Vec<ConeType>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Summary {
    pub n: usize,
    pub d: usize,
    pub groups: Vec<ComponentGroup>,
}

impl Summary {
    /// Number of components `[V_t × ℝ^d]_Σ × {t}` with `V_t` of the given
    /// dimension.
    pub fn components_of_dim(&self, dim: usize) -> usize {
        self.groups
            .iter()
            .filter(|g| g.dim == dim)
            .map(|g| g.types.len())
            .sum()
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.groups {
            let span: Vec<String> = g
                .span
                .iter()
                .map(|v| {
                    format!(
                        "({})",
                        v.iter()
                            .map(|x| x.to_string())
                            .collect::<Vec<_>>()
                            .join(",")
                    )
                })
                .collect();
            let types: Vec<String> = g.types.iter().map(|t| t.to_string()).collect();
            writeln!(
                f,
                "[V x R^{}]_S  dim V={}  V=span{{{}}}  types={{{}}}  count={}",
                self.d,
                g.dim,
                span.join(","),
                types.join(","),
                g.types.len()
            )?;
        }
        Ok(())
    }
}

/// The scheme, its stratification and the per-cone closure data.
#[derive(Debug, Clone)]
pub struct Ellis {
    scheme: Scheme,
    window: Window,
    faces: FaceData,
    semigroup: FaceSemigroup,
    analyses: Vec<ConeAnalysis>,
    nontrivial: Vec<usize>,
    /// `a_f·Γ*` for each face of `M`.
    face_modules: Vec<ZModule>,
}

impl Ellis {
    pub fn new(scheme: Scheme, window: Window) -> Result<Ellis> {
        if window.n() != scheme.n() {
            return Err(Error::InvalidWindow(
                "window dimension differs from internal dimension".into(),
            ));
        }
        let faces = FaceData::new(&window);
        let arrangement = Arrangement::new(scheme.n(), faces.hyperplanes.clone());
        let semigroup = arrangement.enumerate();
        let analyses: Vec<ConeAnalysis> = semigroup
            .cones()
            .iter()
            .map(|c| ConeAnalysis::new(&scheme, &arrangement, &c.t))
            .collect();
        let nontrivial: Vec<usize> = (0..analyses.len())
            .filter(|&i| analyses[i].nontrivial)
            .collect();
        for &a in &nontrivial {
            for &b in &nontrivial {
                let p = semigroup.product(a, b);
                if !analyses[p].nontrivial {
                    return Err(Error::InvariantViolation(format!(
                        "non-trivial types not closed: {}·{} = {}",
                        analyses[a].t, analyses[b].t, analyses[p].t
                    )));
                }
            }
        }
        let face_modules = faces
            .faces
            .iter()
            .map(|f| {
                ZModule::new(
                    1,
                    scheme
                        .generators()
                        .iter()
                        .map(|g| vec![dot(&f.normal, &g.star)])
                        .collect(),
                )
            })
            .collect();
        Ok(Ellis {
            scheme,
            window,
            faces,
            semigroup,
            analyses,
            nontrivial,
            face_modules,
        })
    }

    pub fn scheme(&self) -> &Scheme {
        &self.scheme
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn faces(&self) -> &FaceData {
        &self.faces
    }

    pub fn semigroup(&self) -> &FaceSemigroup {
        &self.semigroup
    }

    pub fn arrangement(&self) -> &Arrangement {
        self.semigroup.arrangement()
    }

    pub fn analyses(&self) -> &[ConeAnalysis] {
        &self.analyses
    }

    /// Indices of the non-trivial cone types.
    pub fn nontrivial(&self) -> &[usize] {
        &self.nontrivial
    }

    pub fn nontrivial_types(&self) -> Vec<ConeType> {
        self.nontrivial
            .iter()
            .map(|&i| self.analyses[i].t.clone())
            .collect()
    }

    pub(crate) fn face_modules(&self) -> &[ZModule] {
        &self.face_modules
    }

    pub fn analysis(&self, t: &ConeType) -> Result<&ConeAnalysis> {
        let i = self.semigroup.index_of(t).ok_or_else(|| {
            Error::InvalidInput(format!("`{t}` is not a cone type of the window"))
        })?;
        let a = &self.analyses[i];
        if !a.nontrivial {
            return Err(Error::InvalidInput(format!("cone type `{t}` is trivial")));
        }
        Ok(a)
    }

    pub fn torus(&self, w: &[Qf], s: &[Qf]) -> TorusPoint {
        TorusPoint::from_parts(&self.scheme, w, s)
    }

    pub fn is_member(&self, z: &TorusPoint, t: &ConeType) -> bool {
        self.analysis(t)
            .map_or(false, |a| a.allowed(&self.scheme, z.internal()))
    }

    pub fn element(&self, z: TorusPoint, t: ConeType) -> Result<HullElement> {
        if !self.is_member(&z, &t) {
            return Err(Error::InvalidInput(format!(
                "({z}, {t}) is not an Ellis element"
            )));
        }
        Ok(HullElement { z, t })
    }

    pub fn identity(&self) -> HullElement {
        HullElement {
            z: TorusPoint::zero(&self.scheme),
            t: ConeType::origin(self.arrangement().len()),
        }
    }

    /// The translation by a lattice vector `γ = Σ m_i e_i`, as `[0, γ]_Σ`.
    pub fn translation(&self, m: &[i64]) -> HullElement {
        let s = self.scheme.phys_i64(m);
        HullElement {
            z: self.torus(&vec![Qf::zero(); self.scheme.n()], &s),
            t: ConeType::origin(self.arrangement().len()),
        }
    }

    /// `g ∘ h`: apply `h` first.
    pub fn compose(&self, g: &HullElement, h: &HullElement) -> Result<HullElement> {
        let z = g.z.add(&h.z, &self.scheme);
        let t = g.t.product(&h.t);
        if !self.is_member(&z, &t) {
            return Err(Error::InvariantViolation(format!(
                "composite ({z}, {t}) is not an Ellis element"
            )));
        }
        Ok(HullElement { z, t })
    }

    /// Only pure physical translations `([0, s]_Σ, 𝔬)` are invertible.
    pub fn is_invertible(&self, g: &HullElement) -> bool {
        g.t.is_origin() && self.scheme.star_module().contains(g.z.internal())
    }

    /// Inclusion of ranges, decided by the face order.
    pub fn range_leq(&self, g: &HullElement, h: &HullElement) -> bool {
        g.t.leq(&h.t)
    }

    pub fn is_idempotent(&self, g: &HullElement) -> bool {
        self.compose(g, g).map_or(false, |gg| gg == *g)
    }

    /// `(0, t)` for every non-trivial `t`.
    pub fn idempotents_over_zero(&self) -> Vec<HullElement> {
        self.nontrivial
            .iter()
            .map(|&i| HullElement {
                z: TorusPoint::zero(&self.scheme),
                t: self.analyses[i].t.clone(),
            })
            .collect()
    }

    /// Cone types of the minimal ideal: every `(z, t)` with `t` in the list
    /// belongs to it.
    pub fn minimal_ideal_types(&self) -> Vec<ConeType> {
        self.semigroup
            .minimal_ideal(&self.nontrivial)
            .into_iter()
            .map(|i| self.analyses[i].t.clone())
            .collect()
    }

    pub fn pistar(&self, g: &HullElement) -> TorusPoint {
        g.z.clone()
    }

    pub fn internal_element(&self, w: Vec<Qf>, t: ConeType) -> Result<InternalElement> {
        if w.len() != self.scheme.n() {
            return Err(Error::InvalidInput(
                "internal vector of the wrong dimension".into(),
            ));
        }
        if !self.analysis(&t)?.allowed(&self.scheme, &w) {
            return Err(Error::InvalidInput("w is not in V_t + Γ*".into()));
        }
        Ok(InternalElement { w, t })
    }

    /// Whether `𝖢_{t'}(w', δ) ⊆ 𝖢_t(w, ε)` for some `δ > 0`, where
    /// `𝖢_t(w, ε) = w + (𝖢_t ∩ B(0, ε))`.
    pub fn in_basic_neighborhood(
        &self,
        cand: &InternalElement,
        target: &InternalElement,
        eps: &BigRational,
    ) -> bool {
        let (Ok(ca), Ok(ta)) = (self.analysis(&cand.t), self.analysis(&target.t)) else {
            return false;
        };
        if !eps.is_positive() {
            return false;
        }
        if !ca.v.iter().all(|x| in_span(x, &ta.v)) {
            return false;
        }
        let diff = vec_sub(&cand.w, &target.w);
        if !in_span(&diff, &ta.v) {
            return false;
        }
        if dot(&diff, &diff) >= Qf::rational(eps * eps) {
            return false;
        }
        self.arrangement()
            .hyperplanes()
            .iter()
            .enumerate()
            .all(|(i, h)| {
                let s = target.t.0[i];
                if s == Sign::Zero {
                    return true;
                }
                let side = h.side(&diff);
                side == s || (side == Sign::Zero && cand.t.0[i] == s)
            })
    }

    /// A rational `δ` witnessing the predicate above.
    pub fn certified_delta(
        &self,
        cand: &InternalElement,
        target: &InternalElement,
        eps: &BigRational,
    ) -> Option<BigRational> {
        if !self.in_basic_neighborhood(cand, target, eps) {
            return None;
        }
        let diff = vec_sub(&cand.w, &target.w);
        let d2 = dot(&diff, &diff);
        let strict: Vec<(Qf, Qf)> = self
            .arrangement()
            .hyperplanes()
            .iter()
            .enumerate()
            .filter(|(i, _)| target.t.0[*i] != Sign::Zero)
            .map(|(_, h)| (dot(&h.normal, &diff).square(), dot(&h.normal, &h.normal)))
            .filter(|(v, _)| !v.is_zero())
            .collect();
        let mut delta = eps.clone();
        loop {
            let rest = Qf::rational(eps - &delta);
            // |u| < δ ≤ ε − |w' − w| keeps the ball condition
            let ok = rest.sign() != Sign::Neg
                && d2 <= rest.square()
                && strict
                    .iter()
                    .all(|(v, a2)| &(a2 * &Qf::rational(&delta * &delta)) < v);
            if ok {
                return Some(delta);
            }
            delta /= BigRational::from_integer(2.into());
        }
    }

    pub fn summary(&self) -> Summary {
        let mut groups: Vec<ComponentGroup> = Vec::new();
        for &i in &self.nontrivial {
            let a = &self.analyses[i];
            let span = if a.v.is_empty() {
                vec![]
            } else {
                QfMatrix::from_rows(a.v.clone())
                    .expect("one field")
                    .row_space_basis()
            };
            match groups.iter_mut().find(|g| g.span == span) {
                Some(g) => g.types.push(a.t.clone()),
                None => groups.push(ComponentGroup {
                    dim: span.len(),
                    span,
                    types: vec![a.t.clone()],
                }),
            }
        }
        groups.sort_by(|a, b| b.dim.cmp(&a.dim).then_with(|| a.span.cmp(&b.span)));
        Summary {
            n: self.scheme.n(),
            d: self.scheme.d(),
            groups,
        }
    }

    /// Whether `g` lies in the minimal ideal, which absorbs on both sides.
    pub fn in_minimal_ideal(&self, g: &HullElement) -> bool {
        self.minimal_ideal_types().contains(&g.t)
    }
}
