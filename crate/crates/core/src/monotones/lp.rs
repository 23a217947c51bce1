//! Dense two-phase simplex for `min cᵀx  s.t.  Ax = b, x ≥ 0`.
//!
//! Pricing is Dantzig's most-negative reduced cost with a fall back to
//! Bland's rule after a run of degenerate pivots. Phase two runs on a
//! slightly perturbed right-hand side to break the heavy degeneracy of
//! stabilizer decompositions; the unperturbed solution is then read off the
//! final basis, repaired with dual simplex pivots if needed.

use crate::error::{Error, Result};

const PIVOT_EPS: f64 = 1e-8;
const COST_EPS: f64 = 1e-9;
const FEAS_EPS: f64 = 1e-8;
const DEGENERATE_RUN: usize = 50;
const PERTURBATION: f64 = 1e-7;
const RESIDUAL_TOL: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    IterationLimit,
}

#[derive(Clone, Debug)]
pub struct SimplexSolution {
    pub status: LpStatus,
    pub x: Vec<f64>,
    pub objective: f64,
    /// Dual values y with Aᵀy ≤ c at optimum, one per original row. `None`
    /// unless optimal.
    pub dual: Option<Vec<f64>>,
    pub pivots: usize,
}

// Layout: n structural columns, m artificial columns, the true right-hand
// side, then the working right-hand side used by the ratio tests. The last
// row is the objective.
struct Tableau {
    rows: usize,
    width: usize,
    t: Vec<f64>,
    basis: Vec<usize>,
}

impl Tableau {
    fn at(&self, r: usize, c: usize) -> f64 {
        self.t[r * self.width + c]
    }

    fn rhs(&self) -> usize {
        self.width - 1
    }

    fn true_rhs(&self) -> usize {
        self.width - 2
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let w = self.width;
        let pv = self.at(pr, pc);
        for c in 0..w {
            self.t[pr * w + c] /= pv;
        }
        let pivot_row: Vec<f64> = self.t[pr * w..(pr + 1) * w].to_vec();
        for r in 0..=self.rows {
            if r == pr {
                continue;
            }
            let f = self.t[r * w + pc];
            if f != 0.0 {
                let row = &mut self.t[r * w..(r + 1) * w];
                for (dst, &src) in row.iter_mut().zip(&pivot_row) {
                    *dst -= f * src;
                }
            }
        }
        self.basis[pr] = pc;
    }

    /// Primal simplex on the working right-hand side. Returns false if the
    /// iteration budget ran out.
    fn optimize(&mut self, allowed: usize, pivots: &mut usize, max_pivots: usize) -> Result<bool> {
        let rhs = self.rhs();
        let obj = self.rows;
        let mut degenerate = 0usize;
        loop {
            let enter = if degenerate >= DEGENERATE_RUN {
                (0..allowed).find(|&j| self.at(obj, j) < -COST_EPS)
            } else {
                let mut best: Option<(usize, f64)> = None;
                for j in 0..allowed {
                    let r = self.at(obj, j);
                    if r < -COST_EPS && best.is_none_or(|(_, b)| r < b) {
                        best = Some((j, r));
                    }
                }
                best.map(|(j, _)| j)
            };
            let Some(enter) = enter else {
                return Ok(true);
            };
            // ties go to the larger pivot element, then the lower basis index
            let mut leave: Option<(usize, f64, f64)> = None;
            for r in 0..self.rows {
                let a = self.at(r, enter);
                if a > PIVOT_EPS {
                    let ratio = self.at(r, rhs).max(0.0) / a;
                    let better = match leave {
                        None => true,
                        Some((lr, lratio, la)) => {
                            ratio < lratio - 1e-12
                                || (ratio <= lratio + 1e-12
                                    && (a > la + 1e-9 || (a >= la - 1e-9 && self.basis[r] < self.basis[lr])))
                        }
                    };
                    if better {
                        leave = Some((r, ratio, a));
                    }
                }
            }
            let Some((pr, ratio, _)) = leave else {
                return Err(Error::Lp("objective is unbounded below".into()));
            };
            if *pivots >= max_pivots {
                return Ok(false);
            }
            if ratio <= 1e-12 {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            self.pivot(pr, enter);
            *pivots += 1;
        }
    }

    /// Dual simplex on the working right-hand side, assuming the objective
    /// row is dual feasible. Returns false if the budget ran out.
    fn dual_repair(&mut self, allowed: usize, pivots: &mut usize, max_pivots: usize) -> Result<bool> {
        let rhs = self.rhs();
        let obj = self.rows;
        loop {
            let mut worst: Option<(usize, f64)> = None;
            for r in 0..self.rows {
                let v = self.at(r, rhs);
                if v < -FEAS_EPS && worst.is_none_or(|(_, w)| v < w) {
                    worst = Some((r, v));
                }
            }
            let Some((pr, _)) = worst else {
                return Ok(true);
            };
            let mut enter: Option<(usize, f64)> = None;
            for j in 0..allowed {
                let a = self.at(pr, j);
                if a < -PIVOT_EPS {
                    let ratio = self.at(obj, j).max(0.0) / -a;
                    if enter.is_none_or(|(_, best)| ratio < best) {
                        enter = Some((j, ratio));
                    }
                }
            }
            let Some((pc, _)) = enter else {
                return Err(Error::Lp("dual repair found an infeasible row".into()));
            };
            if *pivots >= max_pivots {
                return Ok(false);
            }
            self.pivot(pr, pc);
            *pivots += 1;
        }
    }

    fn restore_true_rhs(&mut self) {
        let (w, tr, rhs) = (self.width, self.true_rhs(), self.rhs());
        for r in 0..=self.rows {
            self.t[r * w + rhs] = self.t[r * w + tr];
        }
    }
}

// Deterministic per-row perturbation in [1, 2)·PERTURBATION.
fn perturbation(r: usize) -> f64 {
    let mut z = (r as u64).wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    PERTURBATION * (1.0 + (z >> 11) as f64 / (1u64 << 53) as f64)
}

/// Solves the standard-form program. `a` is given row by row.
pub fn solve_standard_form(c: &[f64], a: &[Vec<f64>], b: &[f64], max_pivots: usize) -> Result<SimplexSolution> {
    let m = a.len();
    let n = c.len();
    if b.len() != m || a.iter().any(|row| row.len() != n) {
        return Err(Error::Lp("inconsistent problem dimensions".into()));
    }
    let width = n + m + 2;
    let mut t = vec![0.0; (m + 1) * width];
    let mut sign = vec![1.0; m];
    for i in 0..m {
        if b[i] < 0.0 {
            sign[i] = -1.0;
        }
        for j in 0..n {
            t[i * width + j] = sign[i] * a[i][j];
        }
        t[i * width + n + i] = 1.0;
        t[i * width + n + m] = sign[i] * b[i];
        t[i * width + n + m + 1] = sign[i] * b[i];
    }
    // phase-one reduced costs: minimize the sum of artificials
    for j in 0..n {
        t[m * width + j] = -(0..m).map(|i| t[i * width + j]).sum::<f64>();
    }
    for col in [n + m, n + m + 1] {
        t[m * width + col] = -(0..m).map(|i| t[i * width + col]).sum::<f64>();
    }
    let mut tab = Tableau {
        rows: m,
        width,
        t,
        basis: (n..n + m).collect(),
    };
    let mut pivots = 0;

    let finished = tab.optimize(n, &mut pivots, max_pivots)?;
    let infeasibility = -tab.at(m, tab.rhs());
    if !finished {
        return Ok(extract(&tab, c, n, m, &sign, LpStatus::IterationLimit, pivots));
    }
    if infeasibility > FEAS_EPS {
        return Ok(extract(&tab, c, n, m, &sign, LpStatus::Infeasible, pivots));
    }

    // move zero-level artificials out of the basis where possible
    for r in 0..m {
        if tab.basis[r] >= n {
            if let Some(j) = (0..n).find(|&j| tab.at(r, j).abs() > 1e-7) {
                tab.pivot(r, j);
                pivots += 1;
            }
        }
    }

    // phase-two objective row over all columns (artificials carry zero cost)
    for j in 0..width {
        let cj = if j < n { c[j] } else { 0.0 };
        let cb: f64 = (0..m)
            .map(|r| {
                let bj = tab.basis[r];
                let cost = if bj < n { c[bj] } else { 0.0 };
                cost * tab.at(r, j)
            })
            .sum();
        tab.t[m * width + j] = if j >= n + m { -cb } else { cj - cb };
    }
    // perturb the working values of structural basics; artificials left in
    // the basis belong to redundant rows and stay at zero
    let rhs = tab.rhs();
    for r in 0..m {
        if tab.basis[r] < n {
            let d = perturbation(r);
            tab.t[r * width + rhs] += d;
            tab.t[m * width + rhs] -= c[tab.basis[r]] * d;
        }
    }
    let mut finished = tab.optimize(n, &mut pivots, max_pivots)?;
    if finished {
        tab.restore_true_rhs();
        finished = tab.dual_repair(n, &mut pivots, max_pivots)? && tab.optimize(n, &mut pivots, max_pivots)?;
    }
    let status = if finished {
        LpStatus::Optimal
    } else {
        LpStatus::IterationLimit
    };
    let sol = extract(&tab, c, n, m, &sign, status, pivots);
    if status == LpStatus::Optimal {
        let residual = a
            .iter()
            .zip(b)
            .map(|(row, bi)| (row.iter().zip(&sol.x).map(|(aij, xj)| aij * xj).sum::<f64>() - bi).abs())
            .fold(0.0, f64::max);
        if residual > RESIDUAL_TOL {
            return Err(Error::Lp(format!("equality residual {residual:e} after optimization")));
        }
    }
    Ok(sol)
}

fn extract(
    tab: &Tableau,
    c: &[f64],
    n: usize,
    m: usize,
    sign: &[f64],
    status: LpStatus,
    pivots: usize,
) -> SimplexSolution {
    let mut x = vec![0.0; n];
    let col = if status == LpStatus::Optimal {
        tab.rhs()
    } else {
        tab.true_rhs()
    };
    for r in 0..m {
        if tab.basis[r] < n {
            x[tab.basis[r]] = tab.at(r, col).max(0.0);
        }
    }
    let objective = x.iter().zip(c).map(|(xi, ci)| xi * ci).sum();
    // reduced cost of artificial i is −(sign-adjusted) dual value
    let dual = (status == LpStatus::Optimal).then(|| (0..m).map(|i| -sign[i] * tab.at(m, n + i)).collect());
    SimplexSolution {
        status,
        x,
        objective,
        dual,
        pivots,
    }
}
