//! Reference subsolver: the dense simplex plus an outer-approximation loop
//! for second-order cone rows.
//!
//! Cone rows `s ∈ SOC` are dropped from the LP start; after each LP solve
//! the violated cones contribute supporting-hyperplane cuts
//! `ĝ·s ≥ 0` with `ĝ = (1, −ŝ/‖ŝ‖)` at the violating point. Cuts are valid
//! globally, so a session keeps them across bound updates. The loop stops
//! when every cone holds within [`SOC_TOL`].

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::math;
use crate::solve::conic::{
    ConeSpec, ConicProblem, ConicSession, ConicSolution, ConicSolver, ConicStatus,
};
use crate::solve::simplex::{DenseLp, LpStatus, Simplex};

const SOC_TOL: f64 = 1e-9;
const MAX_CUT_ROUNDS: usize = 400;

/// Built-in solver; single-threaded and deterministic.
pub struct ReferenceSolver;

impl ConicSolver for ReferenceSolver {
    fn name(&self) -> &'static str {
        "reference-simplex-oa"
    }

    fn session(&self, prob: &ConicProblem) -> Box<dyn ConicSession + '_> {
        Box::new(ReferenceSession::new(prob.clone()))
    }
}

struct SocBlock {
    /// Row range of the cone inside the standard-form rows.
    start: usize,
    dim: usize,
}

struct ReferenceSession {
    prob: ConicProblem,
    socs: Vec<SocBlock>,
    /// Accumulated outer-approximation cuts, each a dense gradient over the
    /// cone's rows: Σ g_k · s_k ≥ 0.
    cuts: Vec<(usize, Vec<f64>)>,
}

impl ReferenceSession {
    fn new(prob: ConicProblem) -> Self {
        let mut socs = Vec::new();
        let mut row = 0usize;
        for cone in &prob.cones {
            if let ConeSpec::Soc(d) = cone {
                socs.push(SocBlock {
                    start: row,
                    dim: *d,
                });
            }
            row += cone.dim();
        }
        ReferenceSession {
            prob,
            socs,
            cuts: Vec::new(),
        }
    }

    /// Dense row representation `s_i = b_i − A_i x` needs A by rows.
    fn row_of(&self, row: usize, x: &[f64]) -> f64 {
        // b - A x for a single row: iterate columns (CSC) lazily
        let mut v = self.prob.b[row];
        for col in 0..self.prob.num_vars {
            let lo = self.prob.a_colptr[col];
            let hi = self.prob.a_colptr[col + 1];
            // rows within a column are sorted
            if let Ok(k) = self.prob.a_rowidx[lo..hi].binary_search(&row) {
                v -= self.prob.a_values[lo + k] * x[col];
            }
        }
        v
    }

    fn build_lp(&self) -> DenseLp {
        let m_base = self.prob.num_rows();
        let m = m_base + self.cuts.len();
        let n = self.prob.num_vars;
        let mut lp = DenseLp {
            num_rows: m,
            ..Default::default()
        };
        lp.rhs = self.prob.b.clone();

        // structural columns; cone membership decides slack bounds per row
        let mut row_kind = Vec::with_capacity(m_base);
        for cone in &self.prob.cones {
            for k in 0..cone.dim() {
                row_kind.push(match cone {
                    ConeSpec::Zero(_) => 0u8,
                    ConeSpec::NonNeg(_) => 1,
                    // cone rows are free links: s unconstrained, handled by cuts
                    ConeSpec::Soc(d) => {
                        // leading entry of the cone must be nonnegative
                        if k == 0 && *d > 0 {
                            2
                        } else {
                            3
                        }
                    }
                });
            }
        }

        for col in 0..n {
            let lo = self.prob.a_colptr[col];
            let hi = self.prob.a_colptr[col + 1];
            let mut entries: Vec<(usize, f64)> = (lo..hi)
                .map(|k| (self.prob.a_rowidx[k], self.prob.a_values[k]))
                .collect();
            // cut rows: Σ g_k (b_k − A_k x) ≥ 0  →  (Σ g_k A_k) x ≤ Σ g_k b_k
            for (ci, (cone_idx, grad)) in self.cuts.iter().enumerate() {
                let block = &self.socs[*cone_idx];
                let mut coef = 0.0;
                for (k, g) in grad.iter().enumerate() {
                    let row = block.start + k;
                    if let Ok(p) = self.prob.a_rowidx[lo..hi].binary_search(&row) {
                        let _ = p;
                    }
                    // direct lookup
                    if let Ok(p) = self.prob.a_rowidx[lo..hi].binary_search(&row) {
                        coef += g * self.prob.a_values[lo + p];
                    }
                }
                if coef != 0.0 {
                    entries.push((m_base + ci, coef));
                }
            }
            lp.add_col(entries, self.prob.obj[col], f64::NEG_INFINITY, f64::INFINITY);
        }
        for (cone_idx, grad) in &self.cuts {
            let block = &self.socs[*cone_idx];
            let rhs: f64 = grad
                .iter()
                .enumerate()
                .map(|(k, g)| g * self.prob.b[block.start + k])
                .sum();
            lp.rhs.push(rhs);
        }

        // slack columns per base row
        for (row, kind) in row_kind.iter().enumerate() {
            let (lb, ub) = match kind {
                0 => (0.0, 0.0),
                1 => (0.0, f64::INFINITY),
                2 => (0.0, f64::INFINITY),
                _ => (f64::NEG_INFINITY, f64::INFINITY),
            };
            lp.add_col(alloc::vec![(row, 1.0)], 0.0, lb, ub);
        }
        // slack per cut row: Σ a x + s = rhs, s ≥ 0
        for ci in 0..self.cuts.len() {
            lp.add_col(alloc::vec![(m_base + ci, 1.0)], 0.0, 0.0, f64::INFINITY);
        }
        lp
    }
}

impl ConicSession for ReferenceSession {
    fn set_var_bounds(&mut self, var: usize, lb: f64, ub: f64) {
        let (ub_row, lb_row) = self.prob.bound_rows[var];
        if let Some(r) = ub_row {
            self.prob.b[r] = ub;
        }
        if let Some(r) = lb_row {
            self.prob.b[r] = -lb;
        }
    }

    fn solve(&mut self) -> ConicSolution {
        for _round in 0..MAX_CUT_ROUNDS {
            let lp = self.build_lp();
            let sol = Simplex::new(lp).solve();
            match sol.status {
                LpStatus::Optimal => {}
                LpStatus::Infeasible => return ConicSolution::failed(ConicStatus::Infeasible),
                LpStatus::Unbounded => return ConicSolution::failed(ConicStatus::Unbounded),
                LpStatus::Stalled => return ConicSolution::failed(ConicStatus::Numerical),
            }
            let x = &sol.x[..self.prob.num_vars];

            // check cones at the LP point
            let mut worst = 0.0f64;
            let mut new_cuts = Vec::new();
            for (idx, block) in self.socs.iter().enumerate() {
                let s: Vec<f64> = (0..block.dim)
                    .map(|k| self.row_of(block.start + k, x))
                    .collect();
                let head = s[0];
                let tail_norm = math::sqrt(s[1..].iter().map(|v| v * v).sum::<f64>());
                let viol = tail_norm - head;
                if viol > worst {
                    worst = viol;
                }
                if viol > SOC_TOL {
                    // supporting hyperplane at ŝ: s₀ ≥ (ŝ_tail/‖ŝ_tail‖)·s_tail
                    let mut grad = alloc::vec![0.0; block.dim];
                    grad[0] = 1.0;
                    if tail_norm > 1e-300 {
                        for k in 1..block.dim {
                            grad[k] = -s[k] / tail_norm;
                        }
                    } else {
                        // degenerate point: cut just enforces s₀ ≥ 0 which is
                        // already a slack bound; nudge along the first axis
                        grad[1] = -1.0;
                    }
                    new_cuts.push((idx, grad));
                }
            }
            if new_cuts.is_empty() {
                let obj = sol.obj + self.prob.obj_constant;
                return ConicSolution {
                    status: ConicStatus::Optimal,
                    x: x.to_vec(),
                    obj,
                };
            }
            self.cuts.extend(new_cuts);
        }
        ConicSolution::failed(ConicStatus::Numerical)
    }
}
