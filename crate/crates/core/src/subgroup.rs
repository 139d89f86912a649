//! Closures of finitely generated subgroups of F-vector spaces.
//!
//! A subgroup `G` of a real vector space `L` splits as `L = V ⊕ D` with
//! `G ∩ V` dense in `V` and `G ∩ D` a lattice in `D`. Everything is decided
//! through the dual group `Y = {y : y·g ∈ ℤ for every generator g}`, whose
//! span annihilates exactly `V`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arrangement::{identity_rows, Arrangement, ConeType};
use crate::cps::Scheme;
use crate::lp::System;
use crate::qfield::{dot, Qf, QfMatrix, Sign};
use crate::zmodule::{annihilator, hnf, integer_kernel, IntMatrix, RatSystem};

/// A subgroup of a subspace `L ⊆ F^n`, with generators given by their
/// coordinates in a fixed basis of `L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FGSubgroup {
    /// Basis of `L` in ambient coordinates.
    pub basis: Vec<Vec<Qf>>,
    /// Generator coordinates, each of length `basis.len()`.
    pub gens: Vec<Vec<Qf>>,
}

/// `L = V ⊕ D`, all vectors in `L`-coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureDecomposition {
    pub v: Vec<Vec<Qf>>,
    pub d: Vec<Vec<Qf>>,
    /// Basis of the span of the dual group `Y`.
    pub dual_y: Vec<Vec<Qf>>,
    /// Basis of the lattice `G ∩ D`.
    pub lattice_dv: Vec<Vec<Qf>>,
}

impl FGSubgroup {
    /// Generators given in coordinates of the standard basis of `F^dim`.
    pub fn new(dim: usize, gens: Vec<Vec<Qf>>) -> FGSubgroup {
        FGSubgroup {
            basis: identity_rows(dim),
            gens,
        }
    }

    /// Generators given as ambient vectors lying in the span of `basis`.
    pub fn in_subspace(basis: Vec<Vec<Qf>>, ambient: &[Vec<Qf>]) -> FGSubgroup {
        let l = basis.len();
        let gens = if l == 0 {
            ambient.iter().map(|_| Vec::new()).collect()
        } else {
            let b = QfMatrix::from_cols(&basis, basis[0].len()).expect("one field");
            ambient
                .iter()
                .map(|g| b.solve(g).expect("generator lies in the subspace"))
                .collect()
        };
        FGSubgroup { basis, gens }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn to_ambient(&self, coords: &[Qf]) -> Vec<Qf> {
        let n = self.basis.first().map_or(0, |b| b.len());
        let mut out = vec![Qf::zero(); n];
        for (c, b) in coords.iter().zip(&self.basis) {
            for (o, x) in out.iter_mut().zip(b) {
                *o += &(c * x);
            }
        }
        out
    }

    pub fn decompose(&self) -> ClosureDecomposition {
        let l = self.dim();
        let k = self.gens.len();
        if l == 0 {
            return ClosureDecomposition {
                v: vec![],
                d: vec![],
                dual_y: vec![],
                lattice_dv: vec![],
            };
        }
        if k == 0 {
            let all = identity_rows(l);
            return ClosureDecomposition {
                v: vec![],
                d: all.clone(),
                dual_y: all,
                lattice_dv: vec![],
            };
        }
        // M: l × k with the generators as columns
        let m = QfMatrix::from_cols(&self.gens, l).expect("one field");
        let mt = m.transpose();
        // rational points of the row space: annihilated by the rational and
        // irrational parts of every right-kernel vector
        let kernel = m.kernel_basis();
        let mut rows = Vec::new();
        for kv in &kernel {
            rows.push(
                kv.iter()
                    .map(|x| x.rational_part().clone())
                    .collect::<Vec<_>>(),
            );
            rows.push(
                kv.iter()
                    .map(|x| x.irrational_part().clone())
                    .collect::<Vec<_>>(),
            );
        }
        let rhs = vec![BigRational::zero(); rows.len()];
        let lambda = RatSystem { cols: k, rows, rhs }.integer_kernel();
        // particular solutions of y·M = q, plus the left kernel
        let particular: Vec<Vec<Qf>> = lambda
            .iter()
            .map(|q| {
                let qv: Vec<Qf> = q.iter().map(|x| Qf::big_int(x.clone())).collect();
                mt.solve(&qv)
                    .expect("rational row-space vector is attained")
            })
            .collect();
        let left = mt.kernel_basis();
        let span_rows: Vec<Vec<Qf>> = particular.iter().chain(&left).cloned().collect();
        let dual_y = if span_rows.is_empty() {
            vec![]
        } else {
            QfMatrix::from_rows(span_rows)
                .expect("one field")
                .row_space_basis()
        };
        let v = annihilator(l, &dual_y);
        // lattice part: φ(m) = (q_j·m) is integral on G and vanishes on V
        let mut lattice_dv = Vec::new();
        if !lambda.is_empty() {
            let q = IntMatrix::from_rows(k, lambda.clone());
            let h = hnf(&q);
            for j in 0..h.rank() {
                let coeffs: Vec<Qf> = h.u.col(j).into_iter().map(Qf::big_int).collect();
                lattice_dv.push(m.mul_vec(&coeffs).expect("dimension"));
            }
        }
        let mut d = lattice_dv.clone();
        if v.len() + d.len() < l {
            let spanned: Vec<Vec<Qf>> = v.iter().chain(&d).cloned().collect();
            d.extend(annihilator(l, &spanned));
        }
        debug_assert_eq!(v.len() + d.len(), l);
        ClosureDecomposition {
            v,
            d,
            dual_y,
            lattice_dv,
        }
    }

    pub fn is_dense(&self) -> bool {
        self.decompose().v.len() == self.dim()
    }
}

/// Gram matrix of the ambient inner product in the given basis.
fn gram(basis: &[Vec<Qf>]) -> QfMatrix {
    QfMatrix::from_rows(
        basis
            .iter()
            .map(|a| basis.iter().map(|b| dot(a, b)).collect())
            .collect(),
    )
    .expect("one field")
}

fn bilinear(g: &QfMatrix, x: &[Qf], y: &[Qf]) -> Qf {
    dot(x, &g.mul_vec(y).expect("dimension"))
}

impl ClosureDecomposition {
    /// Squared length of the shortest nonzero vector of the lattice
    /// `G ∩ D` projected orthogonally (for the ambient inner product of the
    /// subgroup's basis) onto the complement of `V`. `None` when `D ∩ G = 0`.
    pub fn min_projected_norm2(&self, group: &FGSubgroup) -> Option<Qf> {
        if self.lattice_dv.is_empty() {
            return None;
        }
        let g = gram(&group.basis);
        let proj: Vec<Vec<Qf>> = if self.v.is_empty() {
            self.lattice_dv.clone()
        } else {
            // x − V (VᵀGV)⁻¹ VᵀG x
            let vv = QfMatrix::from_rows(
                self.v
                    .iter()
                    .map(|a| self.v.iter().map(|b| bilinear(&g, a, b)).collect())
                    .collect(),
            )
            .expect("one field")
            .inverse()
            .expect("V basis is independent");
            self.lattice_dv
                .iter()
                .map(|x| {
                    let c: Vec<Qf> = self.v.iter().map(|a| bilinear(&g, a, x)).collect();
                    let coef = vv.mul_vec(&c).expect("dimension");
                    let mut out = x.clone();
                    for (cj, vj) in coef.iter().zip(&self.v) {
                        for (o, y) in out.iter_mut().zip(vj) {
                            *o -= &(cj * y);
                        }
                    }
                    out
                })
                .collect()
        };
        let a = QfMatrix::from_rows(
            proj.iter()
                .map(|x| proj.iter().map(|y| bilinear(&g, x, y)).collect())
                .collect(),
        )
        .expect("one field");
        Some(shortest_vector_norm2(&a))
    }
}

/// Minimum of `cᵀAc` over nonzero integer `c`, for a positive definite `A`,
/// by exhaustive search inside the box `c_i² ≤ μ (A⁻¹)_ii` where `μ` is the
/// smallest diagonal entry.
pub fn shortest_vector_norm2(a: &QfMatrix) -> Qf {
    let r = a.rows();
    let inv = a.inverse().expect("positive definite");
    let mu = (0..r).map(|i| a[(i, i)].clone()).min().expect("nonempty");
    let bounds: Vec<i64> = (0..r)
        .map(|i| {
            let b = (&mu * &inv[(i, i)]).to_f64().max(0.0).sqrt();
            (b * (1.0 + 1e-9)).floor() as i64 + 1
        })
        .collect();
    let af: Vec<Vec<f64>> = (0..r)
        .map(|i| (0..r).map(|j| a[(i, j)].to_f64()).collect())
        .collect();
    let muf = mu.to_f64();
    let mut best = mu.clone();
    let mut c = bounds.iter().map(|b| -b).collect::<Vec<i64>>();
    loop {
        if c.iter().any(|&x| x != 0) {
            let mut v = 0.0;
            for i in 0..r {
                for j in 0..r {
                    v += af[i][j] * (c[i] * c[j]) as f64;
                }
            }
            if v <= muf * (1.0 + 1e-9) + 1e-12 {
                let cq: Vec<Qf> = c.iter().map(|&x| Qf::int(x)).collect();
                let exact = bilinear(a, &cq, &cq);
                if exact < best {
                    best = exact;
                }
            }
        }
        let mut i = 0;
        while i < r {
            c[i] += 1;
            if c[i] <= bounds[i] {
                break;
            }
            c[i] = -bounds[i];
            i += 1;
        }
        if i == r {
            return best;
        }
    }
}

/// A rational strictly between `0` and `√x` for a positive `x`.
pub fn rational_below_sqrt(x: &Qf) -> BigRational {
    let k = BigInt::from(1000);
    let k2 = Qf::big_int(&k * &k);
    let s = (x * &k2).floor().max(BigInt::one()).sqrt();
    let mut r = BigRational::new(s, k.clone());
    while Qf::rational(&r * &r) >= *x {
        r -= BigRational::new(BigInt::one(), k.clone());
        if !r.is_positive() {
            // fall back to halving for tiny inputs
            let mut h = BigRational::new(BigInt::one(), k.clone());
            while Qf::rational(&h * &h) >= *x {
                h /= BigRational::from_integer(BigInt::from(2));
            }
            return h;
        }
    }
    r
}

/// Everything known about one cone type of the stratification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeAnalysis {
    pub t: ConeType,
    /// Basis of `⟨C⟩ = ⋂_{t(H)=0} H`, ambient coordinates.
    pub span: Vec<Vec<Qf>>,
    pub group: FGSubgroup,
    pub decomposition: ClosureDecomposition,
    /// Basis of `V`, ambient coordinates.
    pub v: Vec<Vec<Qf>>,
    pub nontrivial: bool,
    /// Interior witness of the plain cone `C ∩ V`.
    pub plain_witness: Option<Vec<Qf>>,
    /// Radius below which points of `Γ*` in a cone head lie in `V`.
    pub epsilon: BigRational,
}

impl ConeAnalysis {
    pub fn new(scheme: &Scheme, arrangement: &Arrangement, t: &ConeType) -> ConeAnalysis {
        let span = arrangement.span_basis(t);
        // G = Γ* ∩ ⟨C⟩
        let zero_rows: Vec<Vec<Qf>> = t
            .zero_set()
            .iter()
            .map(|&i| {
                let a = &arrangement.hyperplanes()[i].normal;
                scheme
                    .generators()
                    .iter()
                    .map(|g| dot(a, &g.star))
                    .collect()
            })
            .collect();
        let labels: Vec<Vec<BigInt>> = if zero_rows.is_empty() {
            (0..scheme.rank())
                .map(|i| {
                    (0..scheme.rank())
                        .map(|j| BigInt::from((i == j) as i64))
                        .collect()
                })
                .collect()
        } else {
            integer_kernel(&QfMatrix::from_rows(zero_rows).expect("one field"))
        };
        let images: Vec<Vec<Qf>> = labels.iter().map(|m| scheme.star(m)).collect();
        let group = FGSubgroup::in_subspace(span.clone(), &images);
        let decomposition = group.decompose();
        let v: Vec<Vec<Qf>> = decomposition
            .v
            .iter()
            .map(|c| group.to_ambient(c))
            .collect();
        let plain_witness = if t.is_origin() {
            Some(vec![Qf::zero(); arrangement.n()])
        } else if v.is_empty() {
            None
        } else {
            // x = Σ α_j v_j with the strict signs of t
            let mut sys = System::new(v.len());
            for (h, &s) in arrangement.hyperplanes().iter().zip(&t.0) {
                if s == Sign::Zero {
                    continue;
                }
                let row: Vec<Qf> = v.iter().map(|vj| dot(&h.normal, vj)).collect();
                let row = if s == Sign::Neg {
                    row.iter().map(|x| -x).collect()
                } else {
                    row
                };
                sys.at_least(row, Qf::one());
            }
            sys.solve().map(|alpha| {
                let mut x = vec![Qf::zero(); arrangement.n()];
                for (a, vj) in alpha.iter().zip(&v) {
                    for (o, y) in x.iter_mut().zip(vj) {
                        *o += &(a * y);
                    }
                }
                x
            })
        };
        let nontrivial = plain_witness.is_some();
        let epsilon = match decomposition.min_projected_norm2(&group) {
            None => BigRational::one(),
            Some(m2) => rational_below_sqrt(&m2),
        };
        ConeAnalysis {
            t: t.clone(),
            span,
            group,
            decomposition,
            v,
            nontrivial,
            plain_witness,
            epsilon,
        }
    }

    pub fn span_dim(&self) -> usize {
        self.span.len()
    }

    /// `dim ⟨𝖢⟩ = dim V` for a non-trivial cone.
    pub fn plain_dim(&self) -> usize {
        self.v.len()
    }

    pub fn is_dense(&self) -> bool {
        self.decomposition.v.len() == self.group.dim()
    }

    /// `w ∈ V + Γ*`.
    pub fn allowed(&self, scheme: &Scheme, w: &[Qf]) -> bool {
        scheme
            .star_module()
            .coset_meets_subspace(w, &self.v)
            .is_some()
    }

    /// Whether `x` lies in the plain cone `C ∩ V` (relative interior).
    pub fn in_plain_cone(&self, arrangement: &Arrangement, x: &[Qf]) -> bool {
        arrangement.sign_vector(x) == self.t && crate::zmodule::in_span(x, &self.v)
    }
}
