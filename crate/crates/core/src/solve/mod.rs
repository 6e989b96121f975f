//! Mixed-integer conic search: a deterministic branch-and-bound over the
//! compiled problem with a pluggable convex subsolver.

use alloc::vec::Vec;
use core::fmt;

mod bnb;
mod conic;
mod reference;
mod simplex;
mod verify;

pub use bnb::{branch_and_bound, solve_relaxation, solve_with_refinement};
pub use conic::{
    lower, ConeSpec, ConicProblem, ConicSession, ConicSolution, ConicSolver, ConicStatus,
};
pub use reference::ReferenceSolver;
pub use simplex::{DenseLp, LpSolution, LpStatus, Simplex};
pub use verify::{verify_feasibility, RowViolation, ViolationReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    /// Proven within the configured relative gap.
    Optimal,
    Infeasible,
    Unbounded,
    /// Stopped once the incumbent matched the open bound within tolerance,
    /// with open nodes remaining.
    GapLimit,
    NodeLimit,
    TimeLimit,
    /// Subsolver failure, propagated rather than silently absorbed.
    Numerical,
}

impl SolveStatus {
    pub fn has_solution(self) -> bool {
        matches!(
            self,
            SolveStatus::Optimal | SolveStatus::GapLimit | SolveStatus::NodeLimit
        )
    }
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::Unbounded => "unbounded",
            SolveStatus::GapLimit => "gap-limit",
            SolveStatus::NodeLimit => "node-limit",
            SolveStatus::TimeLimit => "time-limit",
            SolveStatus::Numerical => "numerical-failure",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub status: SolveStatus,
    /// Incumbent objective (NaN when no incumbent exists).
    pub objective: f64,
    pub best_bound: f64,
    pub rel_gap: f64,
    pub assignment: Option<Vec<f64>>,
    pub nodes: usize,
    pub wall_time_secs: f64,
}

#[derive(Clone, Debug)]
pub struct SolverOptions {
    /// Relative optimality gap for termination.
    pub rel_gap: f64,
    /// Feasibility tolerance for verification and incumbent acceptance.
    pub feas_tol: f64,
    /// Integrality tolerance on binaries.
    pub int_tol: f64,
    pub node_limit: Option<usize>,
    /// Wall-clock limit; only enforced with the `std` feature.
    pub time_limit_secs: Option<f64>,
    /// Warm-start assignment; its rounded binaries seed the incumbent.
    pub warm_start: Option<Vec<f64>>,
    /// Enables the envelope-refinement loop of [`solve_with_refinement`].
    pub mccormick_refine: bool,
    /// Relative envelope-violation target of the refinement loop.
    pub spatial_tol: f64,
    pub max_refine_rounds: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            rel_gap: 1e-4,
            feas_tol: 1e-6,
            int_tol: 1e-6,
            node_limit: None,
            time_limit_secs: None,
            warm_start: None,
            mccormick_refine: false,
            spatial_tol: 1e-3,
            max_refine_rounds: 10,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<(), SolverOptionError> {
        if !(self.rel_gap > 0.0) || !(self.feas_tol > 0.0) || !(self.int_tol > 0.0) {
            return Err(SolverOptionError::NonPositiveTolerance);
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolverOptionError {
    NonPositiveTolerance,
}

impl fmt::Display for SolverOptionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("solver tolerances must be positive")
    }
}

#[cfg(feature = "std")]
impl std::error::Error for SolverOptionError {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::{ProblemIR, Rel, Tag, VarKind};

    fn knapsack() -> ProblemIR {
        // max 5a + 4b + 3c s.t. 2a + 3b + c <= 3, binaries  -> a=c=1, obj -8
        let mut ir = ProblemIR::new();
        let a = ir.add_binary("a");
        let b = ir.add_binary("b");
        let c = ir.add_binary("c");
        ir.add_con(
            alloc::vec![(a, 2.0), (b, 3.0), (c, 1.0)],
            Rel::Le,
            3.0,
            Tag::Free,
        );
        ir.add_objective(a, -5.0);
        ir.add_objective(b, -4.0);
        ir.add_objective(c, -3.0);
        ir
    }

    #[test]
    fn knapsack_solved_to_optimality() {
        let ir = knapsack();
        let result = branch_and_bound(&ir, &SolverOptions::default(), &ReferenceSolver);
        assert!(result.status.has_solution(), "status {:?}", result.status);
        assert!((result.objective + 8.0).abs() < 1e-6, "{}", result.objective);
        let x = result.assignment.unwrap();
        assert!((x[0] - 1.0).abs() < 1e-6);
        assert!(x[1].abs() < 1e-6);
        assert!((x[2] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn fixed_binaries_reduce_to_relaxation() {
        let mut ir = knapsack();
        // pin all binaries; search equals the continuous solve
        for i in 0..3 {
            ir.set_bounds(crate::ir::VarId(i), 1.0, 1.0);
        }
        ir.cons[0].rhs = 10.0;
        let bb = branch_and_bound(&ir, &SolverOptions::default(), &ReferenceSolver);
        let relax = solve_relaxation(&ir, &ReferenceSolver);
        assert!((bb.objective - relax.objective).abs() < 1e-8);
    }

    #[test]
    fn infeasible_root_reported() {
        let mut ir = ProblemIR::new();
        let x = ir.add_var("x", 0.0, 1.0, VarKind::Continuous);
        ir.add_con(alloc::vec![(x, 1.0)], Rel::Ge, 2.0, Tag::Free);
        let result = branch_and_bound(&ir, &SolverOptions::default(), &ReferenceSolver);
        assert_eq!(result.status, SolveStatus::Infeasible);
    }

    #[test]
    fn node_limit_respected() {
        // fractional LP vertex whose rounding is infeasible, so no incumbent
        // exists when the node budget runs out
        let mut ir = ProblemIR::new();
        let a = ir.add_binary("a");
        let b = ir.add_binary("b");
        ir.add_con(alloc::vec![(a, 2.0), (b, 3.0)], Rel::Le, 4.0, Tag::Free);
        ir.add_con(alloc::vec![(a, 1.0), (b, 1.0)], Rel::Ge, 1.4, Tag::Free);
        ir.add_objective(a, -5.0);
        ir.add_objective(b, -4.0);
        let options = SolverOptions {
            node_limit: Some(0),
            ..Default::default()
        };
        let result = branch_and_bound(&ir, &options, &ReferenceSolver);
        assert_eq!(result.nodes, 0);
        assert_eq!(result.status, SolveStatus::NodeLimit);
    }

    #[test]
    fn enumeration_oracle_small_instances() {
        // deterministic pseudo-random MILPs with <= 7 binaries; compare
        // against brute-force enumeration with the same subsolver
        let mut seed = 0x1234_5678_9abc_def0u64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed >> 11) as f64 / (1u64 << 53) as f64
        };
        for case in 0..12 {
            let nb = 3 + (case % 5);
            let mut ir = ProblemIR::new();
            let bins: Vec<_> = (0..nb)
                .map(|i| ir.add_binary(alloc::format!("b{i}")))
                .collect();
            let y = ir.add_var("y", 0.0, 10.0, VarKind::Continuous);
            // two knapsack-style rows plus a continuous coupling
            for _ in 0..2 {
                let mut terms: Vec<_> =
                    bins.iter().map(|&b| (b, 1.0 + 3.0 * next())).collect();
                terms.push((y, 0.5 + next()));
                let rhs = 2.0 + 4.0 * next();
                ir.add_con(terms, Rel::Le, rhs, Tag::Free);
            }
            for &b in &bins {
                ir.add_objective(b, -1.0 - next());
            }
            ir.add_objective(y, -0.1 - 0.2 * next());

            let result = branch_and_bound(&ir, &SolverOptions::default(), &ReferenceSolver);

            // oracle: enumerate all binary assignments, solve continuous
            let mut best = f64::INFINITY;
            for mask in 0u32..(1 << nb) {
                let mut fixed = ir.clone();
                for (k, &b) in bins.iter().enumerate() {
                    let v = ((mask >> k) & 1) as f64;
                    fixed.set_bounds(b, v, v);
                }
                let sol = solve_relaxation(&fixed, &ReferenceSolver);
                if sol.status == SolveStatus::Optimal {
                    best = best.min(sol.objective);
                }
            }
            assert!(
                (result.objective - best).abs() <= 1e-6,
                "case {case}: bnb {} vs oracle {best}",
                result.objective
            );
        }
    }

    #[test]
    fn bound_tightening_never_improves_minimum() {
        // tightening a variable's box can only increase a minimization's
        // optimal value
        let mut ir = ProblemIR::new();
        let x = ir.add_var("x", 0.0, 8.0, VarKind::Continuous);
        let b = ir.add_binary("b");
        ir.add_con(alloc::vec![(x, 1.0), (b, 4.0)], Rel::Ge, 6.0, Tag::Free);
        ir.add_objective(x, 1.0);
        ir.add_objective(b, 1.5);
        let base = branch_and_bound(&ir, &SolverOptions::default(), &ReferenceSolver);
        for ub in [6.0, 4.0, 2.5] {
            let mut tight = ir.clone();
            tight.set_bounds(x, 0.5, ub);
            let t = branch_and_bound(&tight, &SolverOptions::default(), &ReferenceSolver);
            if t.status.has_solution() {
                assert!(t.objective >= base.objective - 1e-9);
            }
        }
    }

    #[test]
    fn warm_start_seeds_incumbent() {
        let ir = knapsack();
        let options = SolverOptions {
            node_limit: Some(0),
            warm_start: Some(alloc::vec![1.0, 0.0, 1.0]),
            ..Default::default()
        };
        let result = branch_and_bound(&ir, &options, &ReferenceSolver);
        assert!((result.objective + 8.0).abs() < 1e-6);
    }
}
