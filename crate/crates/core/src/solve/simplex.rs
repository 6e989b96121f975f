//! Dense bounded-variable simplex, the reference LP solver.
//!
//! Two phases over an artificial starting basis, Dantzig pricing with a
//! Bland fallback against cycling, explicit dense basis inverse with eta
//! updates and periodic refactorization. Scaled for the test-sized problems
//! the reference path serves; the production path plugs a sparse
//! interior-point solver into the same session contract.

use alloc::vec;
use alloc::vec::Vec;

use crate::math;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    /// Iteration cap or numerical stall.
    Stalled,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub status: LpStatus,
    pub x: Vec<f64>,
    pub obj: f64,
}

/// LP in computational form: `min c·x  s.t.  rows: a·x = b,  l ≤ x ≤ u`.
/// Columns are sparse; every row must be an equality (add slack columns for
/// inequalities before building).
#[derive(Clone, Debug, Default)]
pub struct DenseLp {
    pub num_rows: usize,
    pub cols: Vec<Vec<(usize, f64)>>,
    pub cost: Vec<f64>,
    pub lb: Vec<f64>,
    pub ub: Vec<f64>,
    pub rhs: Vec<f64>,
}

impl DenseLp {
    pub fn num_cols(&self) -> usize {
        self.cols.len()
    }

    pub fn add_col(&mut self, col: Vec<(usize, f64)>, cost: f64, lb: f64, ub: f64) -> usize {
        self.cols.push(col);
        self.cost.push(cost);
        self.lb.push(lb);
        self.ub.push(ub);
        self.cols.len() - 1
    }
}

const PIVOT_TOL: f64 = 1e-9;
const COST_TOL: f64 = 1e-9;
const PHASE1_TOL: f64 = 1e-7;
const REFACTOR_EVERY: usize = 64;
const DEGENERATE_LIMIT: usize = 256;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum VarState {
    Basic(usize),
    AtLower,
    AtUpper,
    /// Free variable resting at zero.
    FreeZero,
}

pub struct Simplex {
    lp: DenseLp,
    /// Artificial columns appended after the structural ones.
    art_start: usize,
    state: Vec<VarState>,
    basis: Vec<usize>,
    binv: Vec<f64>,
    x_basic: Vec<f64>,
    iterations: usize,
}

impl Simplex {
    pub fn new(mut lp: DenseLp) -> Self {
        let m = lp.num_rows;
        let art_start = lp.num_cols();
        let mut state: Vec<VarState> = (0..art_start)
            .map(|j| initial_state(lp.lb[j], lp.ub[j]))
            .collect();

        // residuals of the nonbasic start decide artificial signs
        let mut r = lp.rhs.clone();
        for j in 0..art_start {
            let v = nonbasic_value(&lp, j, state[j]);
            if v != 0.0 {
                for &(i, a) in &lp.cols[j] {
                    r[i] -= a * v;
                }
            }
        }
        let mut basis = Vec::with_capacity(m);
        for (i, &ri) in r.iter().enumerate() {
            let sign = if ri >= 0.0 { 1.0 } else { -1.0 };
            let col = vec![(i, sign)];
            let j = lp.add_col(col, 0.0, 0.0, f64::INFINITY);
            state.push(VarState::Basic(i));
            basis.push(j);
        }

        let mut s = Simplex {
            lp,
            art_start,
            state,
            basis,
            binv: Vec::new(),
            x_basic: Vec::new(),
            iterations: 0,
        };
        s.refactor();
        s
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// Runs both phases and reports the final primal point.
    pub fn solve(&mut self) -> LpSolution {
        // phase 1: drive artificial mass to zero
        let phase1_cost: Vec<f64> = (0..self.lp.num_cols())
            .map(|j| if j >= self.art_start { 1.0 } else { 0.0 })
            .collect();
        match self.optimize(&phase1_cost) {
            LpStatus::Optimal | LpStatus::Unbounded => {}
            other => return self.finish(other),
        }
        let infeas: f64 = (0..self.lp.num_cols())
            .filter(|&j| j >= self.art_start)
            .map(|j| self.value_of(j))
            .sum();
        if infeas > PHASE1_TOL {
            return self.finish(LpStatus::Infeasible);
        }
        // pin artificials so they cannot re-enter
        for j in self.art_start..self.lp.num_cols() {
            self.lp.ub[j] = 0.0;
            self.lp.lb[j] = 0.0;
            if self.state[j] == VarState::AtUpper || self.state[j] == VarState::FreeZero {
                self.state[j] = VarState::AtLower;
            }
        }

        let phase2_cost = {
            let mut c = self.lp.cost.clone();
            c.truncate(self.art_start);
            c.resize(self.lp.num_cols(), 0.0);
            c
        };
        let status = self.optimize(&phase2_cost);
        self.finish(status)
    }

    fn finish(&self, status: LpStatus) -> LpSolution {
        let mut x = vec![0.0; self.art_start];
        for (j, item) in x.iter_mut().enumerate() {
            *item = self.value_of(j);
        }
        let obj = x
            .iter()
            .zip(&self.lp.cost)
            .map(|(xi, ci)| xi * ci)
            .sum::<f64>();
        LpSolution { status, x, obj }
    }

    fn value_of(&self, j: usize) -> f64 {
        match self.state[j] {
            VarState::Basic(slot) => self.x_basic[slot],
            other => nonbasic_value(&self.lp, j, other),
        }
    }

    fn refactor(&mut self) {
        let m = self.lp.num_rows;
        // invert the basis matrix by Gauss-Jordan with partial pivoting
        let mut aug = vec![0.0; m * 2 * m];
        for (slot, &j) in self.basis.iter().enumerate() {
            for &(i, a) in &self.lp.cols[j] {
                aug[i * 2 * m + slot] = a;
            }
        }
        for i in 0..m {
            aug[i * 2 * m + m + i] = 1.0;
        }
        for col in 0..m {
            let mut piv = col;
            let mut best = math::abs(aug[col * 2 * m + col]);
            for r in (col + 1)..m {
                let v = math::abs(aug[r * 2 * m + col]);
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if best < 1e-12 {
                // singular basis; leave a tiny pivot and let tolerance
                // checks catch the fallout
                aug[piv * 2 * m + col] += 1e-12;
            }
            if piv != col {
                for k in 0..2 * m {
                    aug.swap(col * 2 * m + k, piv * 2 * m + k);
                }
            }
            let d = aug[col * 2 * m + col];
            for k in 0..2 * m {
                aug[col * 2 * m + k] /= d;
            }
            for r in 0..m {
                if r != col {
                    let f = aug[r * 2 * m + col];
                    if f != 0.0 {
                        for k in 0..2 * m {
                            aug[r * 2 * m + k] -= f * aug[col * 2 * m + k];
                        }
                    }
                }
            }
        }
        self.binv = vec![0.0; m * m];
        for i in 0..m {
            for k in 0..m {
                self.binv[i * m + k] = aug[i * 2 * m + m + k];
            }
        }
        self.recompute_basics();
    }

    fn recompute_basics(&mut self) {
        let m = self.lp.num_rows;
        let mut r = self.lp.rhs.clone();
        for j in 0..self.lp.num_cols() {
            if let VarState::Basic(_) = self.state[j] {
                continue;
            }
            let v = nonbasic_value(&self.lp, j, self.state[j]);
            if v != 0.0 {
                for &(i, a) in &self.lp.cols[j] {
                    r[i] -= a * v;
                }
            }
        }
        self.x_basic = vec![0.0; m];
        for i in 0..m {
            let mut s = 0.0;
            for k in 0..m {
                s += self.binv[i * m + k] * r[k];
            }
            self.x_basic[i] = s;
        }
    }

    /// FTRAN: w = B⁻¹ a_j for a sparse column.
    fn ftran(&self, j: usize) -> Vec<f64> {
        let m = self.lp.num_rows;
        let mut w = vec![0.0; m];
        for &(k, a) in &self.lp.cols[j] {
            if a != 0.0 {
                for i in 0..m {
                    w[i] += self.binv[i * m + k] * a;
                }
            }
        }
        w
    }

    fn optimize(&mut self, cost: &[f64]) -> LpStatus {
        let m = self.lp.num_rows;
        let n = self.lp.num_cols();
        let max_iters = 200 * (m + n) + 2000;
        let mut degenerate_run = 0usize;
        let mut since_refactor = 0usize;

        loop {
            self.iterations += 1;
            if self.iterations > max_iters {
                return LpStatus::Stalled;
            }
            if since_refactor >= REFACTOR_EVERY {
                self.refactor();
                since_refactor = 0;
            }

            // duals y = c_B B⁻¹
            let mut y = vec![0.0; m];
            for (slot, &j) in self.basis.iter().enumerate() {
                let cb = cost[j];
                if cb != 0.0 {
                    for k in 0..m {
                        y[k] += cb * self.binv[slot * m + k];
                    }
                }
            }

            // pricing
            let bland = degenerate_run > DEGENERATE_LIMIT;
            let mut enter: Option<(usize, f64, bool)> = None; // (col, |d|, increase)
            for j in 0..n {
                let (eligible_up, eligible_down) = match self.state[j] {
                    VarState::Basic(_) => (false, false),
                    VarState::AtLower => (true, false),
                    VarState::AtUpper => (false, true),
                    VarState::FreeZero => (true, true),
                };
                if !eligible_up && !eligible_down {
                    continue;
                }
                let mut d = cost[j];
                for &(i, a) in &self.lp.cols[j] {
                    d -= y[i] * a;
                }
                let (score, increase) = if eligible_up && d < -COST_TOL {
                    (-d, true)
                } else if eligible_down && d > COST_TOL {
                    (d, false)
                } else {
                    continue;
                };
                if bland {
                    enter = Some((j, score, increase));
                    break;
                }
                match enter {
                    Some((_, best, _)) if best >= score => {}
                    _ => enter = Some((j, score, increase)),
                }
            }
            let Some((j_in, _, increase)) = enter else {
                return LpStatus::Optimal;
            };

            let w = self.ftran(j_in);
            let sigma = if increase { 1.0 } else { -1.0 };

            // ratio test: smallest step, tie-broken by largest pivot
            let own_range = self.lp.ub[j_in] - self.lp.lb[j_in];
            let mut best_t = if own_range.is_finite() {
                own_range
            } else {
                f64::INFINITY
            };
            let mut leave: Option<(usize, bool)> = None; // (slot, to_upper)
            for (slot, &jb) in self.basis.iter().enumerate() {
                let delta = sigma * w[slot];
                if delta > PIVOT_TOL {
                    let room = self.x_basic[slot] - self.lp.lb[jb];
                    let t = (room / delta).max(0.0);
                    if t < best_t - 1e-12
                        || (t < best_t + 1e-12
                            && leave
                                .map(|(s, _)| math::abs(w[slot]) > math::abs(w[s]))
                                .unwrap_or(false))
                    {
                        best_t = t;
                        leave = Some((slot, false));
                    }
                } else if delta < -PIVOT_TOL {
                    let ubb = self.lp.ub[jb];
                    if ubb.is_finite() {
                        let room = ubb - self.x_basic[slot];
                        let t = (room / -delta).max(0.0);
                        if t < best_t - 1e-12
                            || (t < best_t + 1e-12
                                && leave
                                    .map(|(s, _)| math::abs(w[slot]) > math::abs(w[s]))
                                    .unwrap_or(false))
                        {
                            best_t = t;
                            leave = Some((slot, true));
                        }
                    }
                }
            }

            if best_t.is_infinite() {
                return LpStatus::Unbounded;
            }
            if best_t < 1e-11 {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }

            // apply the step
            for slot in 0..m {
                self.x_basic[slot] -= best_t * sigma * w[slot];
            }

            match leave {
                None => {
                    // bound flip: the entering variable crosses its box
                    self.state[j_in] = if increase {
                        VarState::AtUpper
                    } else {
                        VarState::AtLower
                    };
                }
                Some((slot, to_upper)) => {
                    let j_out = self.basis[slot];
                    self.state[j_out] = if to_upper {
                        VarState::AtUpper
                    } else if self.lp.lb[j_out].is_finite() {
                        VarState::AtLower
                    } else {
                        VarState::FreeZero
                    };
                    // entering variable's new value
                    let entering_value = match self.state[j_in] {
                        VarState::AtLower => self.lp.lb[j_in] + best_t,
                        VarState::AtUpper => self.lp.ub[j_in] - best_t,
                        VarState::FreeZero => sigma * best_t,
                        VarState::Basic(_) => unreachable!("entering var is nonbasic"),
                    };
                    self.basis[slot] = j_in;
                    self.state[j_in] = VarState::Basic(slot);

                    // eta update of B⁻¹
                    let piv = w[slot];
                    if math::abs(piv) < PIVOT_TOL {
                        self.refactor();
                        since_refactor = 0;
                        continue;
                    }
                    let mut pivot_row = vec![0.0; m];
                    for k in 0..m {
                        pivot_row[k] = self.binv[slot * m + k] / piv;
                    }
                    for i in 0..m {
                        if i == slot {
                            continue;
                        }
                        let f = w[i];
                        if f != 0.0 {
                            for k in 0..m {
                                self.binv[i * m + k] -= f * pivot_row[k];
                            }
                        }
                    }
                    self.binv[slot * m..(slot + 1) * m].copy_from_slice(&pivot_row);
                    self.x_basic[slot] = entering_value;
                    since_refactor += 1;
                }
            }
        }
    }
}

fn initial_state(lb: f64, ub: f64) -> VarState {
    if lb.is_finite() {
        if lb == ub {
            VarState::AtLower
        } else if ub.is_finite() && math::abs(ub) < math::abs(lb) {
            VarState::AtUpper
        } else {
            VarState::AtLower
        }
    } else if ub.is_finite() {
        VarState::AtUpper
    } else {
        VarState::FreeZero
    }
}

fn nonbasic_value(lp: &DenseLp, j: usize, state: VarState) -> f64 {
    match state {
        VarState::AtLower => lp.lb[j],
        VarState::AtUpper => lp.ub[j],
        VarState::FreeZero => 0.0,
        VarState::Basic(_) => unreachable!("asked for a nonbasic value of a basic var"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_bound_problem() {
        // min x s.t. x >= 3  ->  x = 3
        let mut lp = DenseLp {
            num_rows: 1,
            ..Default::default()
        };
        lp.rhs = vec![3.0];
        lp.add_col(vec![(0, 1.0)], 1.0, 0.0, 10.0); // x
        lp.add_col(vec![(0, -1.0)], 0.0, 0.0, f64::INFINITY); // surplus
        let sol = Simplex::new(lp).solve();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.x[0] - 3.0).abs() < 1e-8);
    }

    #[test]
    fn infeasible_detected() {
        // x <= 1 and x >= 2
        let mut lp = DenseLp {
            num_rows: 2,
            ..Default::default()
        };
        lp.rhs = vec![1.0, 2.0];
        lp.add_col(vec![(0, 1.0), (1, 1.0)], 0.0, 0.0, 10.0);
        lp.add_col(vec![(0, 1.0)], 0.0, 0.0, f64::INFINITY); // slack: x + s = 1
        lp.add_col(vec![(1, -1.0)], 0.0, 0.0, f64::INFINITY); // surplus: x - s = 2
        let sol = Simplex::new(lp).solve();
        assert_eq!(sol.status, LpStatus::Infeasible);
    }

    #[test]
    fn unbounded_detected() {
        // min -x, x free upward with one slack row x - s = 0
        let mut lp = DenseLp {
            num_rows: 1,
            ..Default::default()
        };
        lp.rhs = vec![0.0];
        lp.add_col(vec![(0, 1.0)], -1.0, 0.0, f64::INFINITY);
        lp.add_col(vec![(0, -1.0)], 0.0, 0.0, f64::INFINITY);
        let sol = Simplex::new(lp).solve();
        assert_eq!(sol.status, LpStatus::Unbounded);
    }

    #[test]
    fn bounded_blend() {
        // min -x - 2y s.t. x + y <= 4, x <= 3, y <= 3  -> (1,3), obj -7
        let mut lp = DenseLp {
            num_rows: 1,
            ..Default::default()
        };
        lp.rhs = vec![4.0];
        lp.add_col(vec![(0, 1.0)], -1.0, 0.0, 3.0);
        lp.add_col(vec![(0, 1.0)], -2.0, 0.0, 3.0);
        lp.add_col(vec![(0, 1.0)], 0.0, 0.0, f64::INFINITY);
        let sol = Simplex::new(lp).solve();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.obj - (-7.0)).abs() < 1e-8, "obj {}", sol.obj);
        assert!((sol.x[0] - 1.0).abs() < 1e-8);
        assert!((sol.x[1] - 3.0).abs() < 1e-8);
    }

    #[test]
    fn negative_bounds_handled() {
        // min x, x in [-5, -1], one row x + s = 0, s in [-10, 10]
        let mut lp = DenseLp {
            num_rows: 1,
            ..Default::default()
        };
        lp.rhs = vec![0.0];
        lp.add_col(vec![(0, 1.0)], 1.0, -5.0, -1.0);
        lp.add_col(vec![(0, 1.0)], 0.0, -10.0, 10.0);
        let sol = Simplex::new(lp).solve();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.x[0] + 5.0).abs() < 1e-8);
    }
}
