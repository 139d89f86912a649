//! Exact feasibility of linear systems over F by Phase-I simplex.
//!
//! Bland's rule guarantees termination; all pivots are exact.

use crate::qfield::{dot, Qf, Sign};

/// A system of constraints `a·x = b` and `a·x ≥ b` in free variables.
#[derive(Debug, Clone, Default)]
pub struct System {
    pub dim: usize,
    pub eq: Vec<(Vec<Qf>, Qf)>,
    pub ge: Vec<(Vec<Qf>, Qf)>,
}

impl System {
    pub fn new(dim: usize) -> System {
        System {
            dim,
            eq: Vec::new(),
            ge: Vec::new(),
        }
    }

    pub fn equal(&mut self, a: Vec<Qf>, b: Qf) {
        debug_assert_eq!(a.len(), self.dim);
        self.eq.push((a, b));
    }

    pub fn at_least(&mut self, a: Vec<Qf>, b: Qf) {
        debug_assert_eq!(a.len(), self.dim);
        self.ge.push((a, b));
    }

    /// Whether `x` satisfies every constraint exactly.
    pub fn satisfied_by(&self, x: &[Qf]) -> bool {
        self.eq.iter().all(|(a, b)| dot(a, x) == *b) && self.ge.iter().all(|(a, b)| dot(a, x) >= *b)
    }

    /// A feasible point, or `None` when the system is infeasible.
    pub fn solve(&self) -> Option<Vec<Qf>> {
        let n = self.dim;
        let rows: Vec<(&Vec<Qf>, &Qf, bool)> = self
            .eq
            .iter()
            .map(|(a, b)| (a, b, false))
            .chain(self.ge.iter().map(|(a, b)| (a, b, true)))
            .collect();
        if rows.is_empty() {
            return Some(vec![Qf::zero(); n]);
        }
        let m = rows.len();
        let n_slack = self.ge.len();
        // columns: x+ (n), x- (n), slacks, artificials (m), then rhs
        let n_cols = 2 * n + n_slack + m;
        let mut t: Vec<Vec<Qf>> = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut slack = 0;
        for (i, (a, b, is_ge)) in rows.iter().enumerate() {
            let mut row = vec![Qf::zero(); n_cols + 1];
            for j in 0..n {
                row[j] = a[j].clone();
                row[n + j] = -&a[j];
            }
            if *is_ge {
                row[2 * n + slack] = Qf::int(-1);
                slack += 1;
            }
            row[n_cols] = (*b).clone();
            if row[n_cols].sign() == Sign::Neg {
                for x in row.iter_mut() {
                    *x = -&*x;
                }
            }
            row[2 * n + n_slack + i] = Qf::one();
            t.push(row);
            basis.push(2 * n + n_slack + i);
        }
        // objective: minimise the sum of artificials, kept as reduced costs
        let first_art = 2 * n + n_slack;
        let mut cost = vec![Qf::zero(); n_cols + 1];
        for row in &t {
            for j in 0..first_art {
                cost[j] -= &row[j];
            }
            cost[n_cols] -= &row[n_cols];
        }
        loop {
            let Some(enter) = (0..n_cols).find(|&j| cost[j].sign() == Sign::Neg) else {
                break;
            };
            let mut leave: Option<(usize, Qf)> = None;
            for i in 0..m {
                if t[i][enter].sign() != Sign::Pos {
                    continue;
                }
                let ratio = &t[i][n_cols] / &t[i][enter];
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((li, lr)) => {
                        if ratio < lr || (ratio == lr && basis[i] < basis[li]) {
                            Some((i, ratio))
                        } else {
                            Some((li, lr))
                        }
                    }
                };
            }
            let (r, _) = leave.expect("phase-one objective is bounded below");
            pivot(&mut t, &mut cost, r, enter);
            basis[r] = enter;
        }
        if !cost[n_cols].is_zero() {
            return None;
        }
        let mut x = vec![Qf::zero(); n];
        for (i, &bv) in basis.iter().enumerate() {
            if bv < n {
                x[bv] += &t[i][n_cols];
            } else if bv < 2 * n {
                x[bv - n] -= &t[i][n_cols];
            }
        }
        debug_assert!(self.satisfied_by(&x));
        Some(x)
    }
}

fn pivot(t: &mut [Vec<Qf>], cost: &mut [Qf], r: usize, c: usize) {
    let inv = t[r][c].inverse().expect("pivot is positive");
    for x in t[r].iter_mut() {
        if !x.is_zero() {
            *x = &*x * &inv;
        }
    }
    let prow = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i != r && !row[c].is_zero() {
            eliminate(row, &prow, c);
        }
    }
    if !cost[c].is_zero() {
        eliminate(cost, &prow, c);
    }
}

fn eliminate(row: &mut [Qf], prow: &[Qf], c: usize) {
    let f = row[c].clone();
    for (x, p) in row.iter_mut().zip(prow) {
        if !p.is_zero() {
            *x = &*x - &(&f * p);
        }
    }
}
