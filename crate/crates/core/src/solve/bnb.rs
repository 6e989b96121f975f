//! Deterministic branch-and-bound over the compiled problem's binaries.
//!
//! Depth-first diving with best-bound restarts, most-fractional branching
//! (ties to the lowest variable id), incumbent polishing by fixing the
//! integer assignment and re-solving the continuous relaxation, and an
//! optional envelope-refinement loop that re-solves with extra piecewise
//! segments on the bilinear atom carrying the largest violation.

use alloc::vec::Vec;

use crate::ir::{ProblemIR, VarKind};
use crate::math;
use crate::solve::conic::{lower, ConicSession, ConicSolver, ConicStatus};
use crate::solve::{SolveResult, SolveStatus, SolverOptions};

struct Node {
    id: usize,
    depth: usize,
    /// Relaxation bound inherited from the parent.
    bound: f64,
    /// Bound changes along the path from the root.
    changes: Vec<(usize, f64, f64)>,
}

/// Continuous relaxation of a compiled IR.
pub fn solve_relaxation(ir: &ProblemIR, solver: &dyn ConicSolver) -> SolveResult {
    let t0 = now();
    let prob = lower(ir);
    let sol = solver.solve_once(&prob);
    let wall = elapsed(t0);
    match sol.status {
        ConicStatus::Optimal => SolveResult {
            status: SolveStatus::Optimal,
            objective: sol.obj,
            best_bound: sol.obj,
            rel_gap: 0.0,
            assignment: Some(sol.x),
            nodes: 0,
            wall_time_secs: wall,
        },
        other => SolveResult {
            status: match other {
                ConicStatus::Infeasible => SolveStatus::Infeasible,
                ConicStatus::Unbounded => SolveStatus::Unbounded,
                _ => SolveStatus::Numerical,
            },
            objective: f64::NAN,
            best_bound: f64::NEG_INFINITY,
            rel_gap: f64::INFINITY,
            assignment: None,
            nodes: 0,
            wall_time_secs: wall,
        },
    }
}

pub fn branch_and_bound(
    ir: &ProblemIR,
    options: &SolverOptions,
    solver: &dyn ConicSolver,
) -> SolveResult {
    let t0 = now();
    let prob = lower(ir);
    let mut session = solver.session(&prob);
    let binaries: Vec<usize> = ir
        .vars
        .iter()
        .enumerate()
        .filter(|(_, v)| v.kind == VarKind::Binary)
        .map(|(i, _)| i)
        .collect();

    let root_bounds: Vec<(f64, f64)> = ir.vars.iter().map(|v| (v.lb, v.ub)).collect();
    let apply = |session: &mut dyn ConicSession, changes: &[(usize, f64, f64)]| {
        for (i, &(lb, ub)) in root_bounds.iter().enumerate() {
            session.set_var_bounds(i, lb, ub);
        }
        for &(i, lb, ub) in changes {
            session.set_var_bounds(i, lb, ub);
        }
    };

    let mut nodes_explored = 0usize;
    let mut incumbent: Option<(f64, Vec<f64>)> = None;
    let mut next_id = 0usize;

    // warm start: fix its rounded binaries and polish
    if let Some(start) = &options.warm_start {
        if start.len() == ir.num_vars() {
            let changes: Vec<(usize, f64, f64)> = binaries
                .iter()
                .map(|&i| {
                    let v = math::round(start[i]).clamp(0.0, 1.0);
                    (i, v, v)
                })
                .collect();
            apply(session.as_mut(), &changes);
            let sol = session.solve();
            if sol.status == ConicStatus::Optimal {
                incumbent = Some((sol.obj, sol.x));
            }
        }
    }

    // root relaxation
    apply(session.as_mut(), &[]);
    let root = session.solve();
    match root.status {
        ConicStatus::Infeasible => {
            return finish(
                SolveStatus::Infeasible,
                incumbent,
                f64::INFINITY,
                nodes_explored,
                t0,
            )
        }
        ConicStatus::Optimal => {}
        ConicStatus::Unbounded => {
            return finish(
                SolveStatus::Unbounded,
                None,
                f64::NEG_INFINITY,
                nodes_explored,
                t0,
            )
        }
        ConicStatus::Numerical => {
            return finish(
                SolveStatus::Numerical,
                incumbent,
                f64::NEG_INFINITY,
                nodes_explored,
                t0,
            )
        }
    }

    // rounding heuristic on the root point
    if !binaries.is_empty() {
        let changes: Vec<(usize, f64, f64)> = binaries
            .iter()
            .map(|&i| {
                let v = math::round(root.x[i]).clamp(0.0, 1.0);
                (i, v, v)
            })
            .collect();
        apply(session.as_mut(), &changes);
        let sol = session.solve();
        if sol.status == ConicStatus::Optimal
            && incumbent.as_ref().map(|(u, _)| sol.obj < *u).unwrap_or(true)
        {
            incumbent = Some((sol.obj, sol.x));
        }
    }

    let mut open: Vec<Node> = Vec::new();
    open.push(Node {
        id: next_id,
        depth: 0,
        bound: root.obj,
        changes: Vec::new(),
    });
    next_id += 1;

    let gap_of = |u: f64, l: f64| (u - l) / math::abs(u).max(1.0);
    let mut dive = true;

    loop {
        // global bound over the open set
        let best_open = open
            .iter()
            .map(|n| n.bound)
            .fold(f64::INFINITY, f64::min);
        if let Some((u, _)) = &incumbent {
            if !open.is_empty() && gap_of(*u, best_open) <= options.rel_gap {
                return finish(SolveStatus::GapLimit, incumbent, best_open, nodes_explored, t0);
            }
        }
        if open.is_empty() {
            let status = if incumbent.is_some() {
                SolveStatus::Optimal
            } else {
                SolveStatus::Infeasible
            };
            let bound = incumbent.as_ref().map(|(u, _)| *u).unwrap_or(f64::INFINITY);
            return finish(status, incumbent, bound, nodes_explored, t0);
        }
        if let Some(limit) = options.node_limit {
            if nodes_explored >= limit {
                return finish(SolveStatus::NodeLimit, incumbent, best_open, nodes_explored, t0);
            }
        }
        #[cfg(feature = "std")]
        if let Some(limit) = options.time_limit_secs {
            if elapsed(t0) > limit {
                return finish(SolveStatus::TimeLimit, incumbent, best_open, nodes_explored, t0);
            }
        }

        // node selection: dive LIFO, restart on the best bound otherwise
        let node = if dive {
            open.pop().expect("nonempty")
        } else {
            let mut best = 0;
            for (k, n) in open.iter().enumerate() {
                if n.bound < open[best].bound
                    || (n.bound == open[best].bound && n.id < open[best].id)
                {
                    best = k;
                }
            }
            open.remove(best)
        };
        nodes_explored += 1;

        // parent-bound prune
        if let Some((u, _)) = &incumbent {
            if gap_of(*u, node.bound) <= options.rel_gap {
                dive = false;
                continue;
            }
        }

        apply(session.as_mut(), &node.changes);
        let sol = session.solve();
        match sol.status {
            ConicStatus::Infeasible => {
                dive = false;
                continue;
            }
            ConicStatus::Unbounded => {
                return finish(
                    SolveStatus::Unbounded,
                    None,
                    f64::NEG_INFINITY,
                    nodes_explored,
                    t0,
                )
            }
            ConicStatus::Numerical => {
                return finish(
                    SolveStatus::Numerical,
                    incumbent,
                    best_open,
                    nodes_explored,
                    t0,
                )
            }
            ConicStatus::Optimal => {}
        }
        if let Some((u, _)) = &incumbent {
            if gap_of(*u, sol.obj) <= options.rel_gap {
                dive = false;
                continue;
            }
        }

        // most fractional binary, ties to the lowest id
        let mut branch_var: Option<(usize, f64)> = None;
        for &i in &binaries {
            let frac = sol.x[i] - math::floor(sol.x[i]);
            let dist = frac.min(1.0 - frac);
            if dist > options.int_tol {
                let better = match branch_var {
                    Some((_, best)) => dist > best + 1e-12,
                    None => true,
                };
                if better {
                    branch_var = Some((i, dist));
                }
            }
        }

        match branch_var {
            None => {
                // integral: polish by fixing the rounded binaries
                let mut changes = node.changes.clone();
                for &i in &binaries {
                    let v = math::round(sol.x[i]).clamp(0.0, 1.0);
                    changes.push((i, v, v));
                }
                apply(session.as_mut(), &changes);
                let polished = session.solve();
                let candidate = if polished.status == ConicStatus::Optimal {
                    Some((polished.obj, polished.x))
                } else {
                    Some((sol.obj, sol.x))
                };
                if let Some((obj, x)) = candidate {
                    if incumbent.as_ref().map(|(u, _)| obj < *u).unwrap_or(true) {
                        incumbent = Some((obj, x));
                    }
                }
                dive = false;
            }
            Some((var, _)) => {
                let frac = sol.x[var];
                let mut down = node.changes.clone();
                down.push((var, 0.0, 0.0));
                let mut up = node.changes.clone();
                up.push((var, 1.0, 1.0));
                let (first, second) = if frac >= 0.5 { (down, up) } else { (up, down) };
                // push the far side first so the dive explores the near side
                open.push(Node {
                    id: next_id,
                    depth: node.depth + 1,
                    bound: sol.obj,
                    changes: first,
                });
                next_id += 1;
                open.push(Node {
                    id: next_id,
                    depth: node.depth + 1,
                    bound: sol.obj,
                    changes: second,
                });
                next_id += 1;
                dive = true;
            }
        }
    }
}

/// Envelope refinement: re-solve, then add finer piecewise segments on the
/// bilinear atom with the largest relative violation until the worst
/// violation drops below `options.spatial_tol` or the round budget runs out.
pub fn solve_with_refinement(
    ir: &ProblemIR,
    options: &SolverOptions,
    solver: &dyn ConicSolver,
) -> SolveResult {
    let mut work = ir.clone();
    let mut rounds = 0usize;
    loop {
        let result = branch_and_bound(&work, options, solver);
        if !options.mccormick_refine || rounds >= options.max_refine_rounds {
            return result;
        }
        let Some(x) = &result.assignment else {
            return result;
        };
        // largest relative envelope violation among retained bilinear terms
        let mut worst: Option<(usize, f64)> = None;
        for (k, atom) in work.spatial.iter().enumerate() {
            let scale = math::abs(x[atom.out.index()]).max(1.0);
            let viol =
                math::abs(x[atom.out.index()] - x[atom.x.index()] * x[atom.y.index()]) / scale;
            if viol > options.spatial_tol && worst.map(|(_, w)| viol > w).unwrap_or(true) {
                worst = Some((k, viol));
            }
        }
        let Some((k, _)) = worst else {
            return result;
        };
        // split the atom's first factor at the incumbent point and re-emit a
        // tighter two-segment envelope (old rows stay valid, new rows cut)
        let atom = work.spatial[k].clone();
        let (xl, xu) = work.bounds(atom.x);
        let split = x[atom.x.index()].clamp(
            xl + 0.1 * (xu - xl).max(1e-9),
            xu - 0.1 * (xu - xl).max(1e-9),
        );
        crate::reform::refine_envelope(&mut work, k, split);
        rounds += 1;
    }
}

fn finish(
    status: SolveStatus,
    incumbent: Option<(f64, Vec<f64>)>,
    bound: f64,
    nodes: usize,
    t0: Stamp,
) -> SolveResult {
    let (objective, assignment) = match incumbent {
        Some((obj, x)) => (obj, Some(x)),
        None => (f64::NAN, None),
    };
    let rel_gap = if objective.is_nan() || !bound.is_finite() {
        f64::INFINITY
    } else {
        ((objective - bound) / math::abs(objective).max(1.0)).max(0.0)
    };
    SolveResult {
        status,
        objective,
        best_bound: bound,
        rel_gap,
        assignment,
        nodes,
        wall_time_secs: elapsed(t0),
    }
}

#[cfg(feature = "std")]
type Stamp = std::time::Instant;
#[cfg(not(feature = "std"))]
type Stamp = ();

#[cfg(feature = "std")]
fn now() -> Stamp {
    std::time::Instant::now()
}
#[cfg(not(feature = "std"))]
fn now() -> Stamp {}

#[cfg(feature = "std")]
fn elapsed(t0: Stamp) -> f64 {
    t0.elapsed().as_secs_f64()
}
#[cfg(not(feature = "std"))]
fn elapsed(_t0: Stamp) -> f64 {
    0.0
}
