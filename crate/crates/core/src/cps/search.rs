//! Integer points of thin ellipsoids `‖Bc − y‖² ≤ bound`, by LLL reduction
//! followed by Fincke–Pohst enumeration. Floating point only: callers
//! recheck every candidate exactly, and a point within rounding error of the
//! boundary may be missed.

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

struct GramSchmidt {
    star: Vec<Vec<f64>>,
    norm2: Vec<f64>,
    mu: Vec<Vec<f64>>,
}

fn gram_schmidt(b: &[Vec<f64>]) -> GramSchmidt {
    let k = b.len();
    let mut star: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut norm2 = Vec::with_capacity(k);
    let mut mu = vec![vec![0.0; k]; k];
    for i in 0..k {
        let mut v = b[i].clone();
        for j in 0..i {
            mu[i][j] = if norm2[j] > 0.0 {
                dot(&b[i], &star[j]) / norm2[j]
            } else {
                0.0
            };
            for (x, s) in v.iter_mut().zip(&star[j]) {
                *x -= mu[i][j] * s;
            }
        }
        norm2.push(dot(&v, &v));
        star.push(v);
    }
    GramSchmidt { star, norm2, mu }
}

/// LLL with parameter 3/4; returns the reduced basis and the unimodular
/// matrix `u` with `reduced[j] = Σ_i u[j][i] cols[i]`.
fn lll(cols: &[Vec<f64>]) -> (Vec<Vec<f64>>, Vec<Vec<i64>>) {
    let k = cols.len();
    let mut b = cols.to_vec();
    let mut u: Vec<Vec<i64>> = (0..k)
        .map(|i| (0..k).map(|j| (i == j) as i64).collect())
        .collect();
    let mut i = 1;
    let mut guard = 0;
    while i < k && guard < 10_000 {
        guard += 1;
        for j in (0..i).rev() {
            let gs = gram_schmidt(&b);
            let r = gs.mu[i][j].round();
            if r != 0.0 {
                let bj = b[j].clone();
                for (x, y) in b[i].iter_mut().zip(&bj) {
                    *x -= r * y;
                }
                let uj = u[j].clone();
                for (x, y) in u[i].iter_mut().zip(&uj) {
                    *x -= r as i64 * y;
                }
            }
        }
        let gs = gram_schmidt(&b);
        if gs.norm2[i] >= (0.75 - gs.mu[i][i - 1].powi(2)) * gs.norm2[i - 1] {
            i += 1;
        } else {
            b.swap(i, i - 1);
            u.swap(i, i - 1);
            i = (i - 1).max(1);
        }
    }
    (b, u)
}

/// Integer vectors `c` (coefficients of `cols`) with `‖Σ c_i cols_i − y‖² ≤ bound`.
pub(crate) fn points_in_ellipsoid(
    cols: &[Vec<f64>],
    y: &[f64],
    bound: f64,
    limit: usize,
) -> Vec<Vec<i64>> {
    let k = cols.len();
    if k == 0 {
        return if dot(y, y) <= bound {
            vec![vec![]]
        } else {
            vec![]
        };
    }
    let (b, u) = lll(cols);
    let gs = gram_schmidt(&b);
    if gs.norm2.iter().any(|&x| x <= 0.0) {
        return vec![];
    }
    // y = Σ t_i b*_i + r with r orthogonal to the span
    let t: Vec<f64> = (0..k).map(|i| dot(y, &gs.star[i]) / gs.norm2[i]).collect();
    let mut r = y.to_vec();
    for i in 0..k {
        for (x, s) in r.iter_mut().zip(&gs.star[i]) {
            *x -= t[i] * s;
        }
    }
    let budget = bound * (1.0 + 1e-9) + 1e-12 - dot(&r, &r);
    let mut out = Vec::new();
    if budget < 0.0 {
        return out;
    }
    let mut x = vec![0i64; k];
    enumerate(&gs, &t, k, budget, &mut x, &mut out, limit);
    out.iter()
        .map(|x| {
            (0..k)
                .map(|i| (0..k).map(|j| x[j] * u[j][i]).sum())
                .collect()
        })
        .collect()
}

fn enumerate(
    gs: &GramSchmidt,
    t: &[f64],
    level: usize,
    budget: f64,
    x: &mut Vec<i64>,
    out: &mut Vec<Vec<i64>>,
    limit: usize,
) {
    if level == 0 {
        out.push(x.clone());
        return;
    }
    let i = level - 1;
    let k = x.len();
    let center = t[i] - (i + 1..k).map(|j| gs.mu[j][i] * x[j] as f64).sum::<f64>();
    let half = (budget / gs.norm2[i]).max(0.0).sqrt();
    let lo = (center - half - 1e-9).ceil() as i64;
    let hi = (center + half + 1e-9).floor() as i64;
    for v in lo..=hi {
        if out.len() >= limit {
            return;
        }
        let d = v as f64 - center;
        let rest = budget - gs.norm2[i] * d * d;
        if rest < -1e-9 * (1.0 + budget) {
            continue;
        }
        x[i] = v;
        enumerate(gs, t, i, rest.max(0.0), x, out, limit);
    }
    x[i] = 0;
}
