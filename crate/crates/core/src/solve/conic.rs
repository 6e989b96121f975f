//! Standard conic form and the pluggable subsolver contract.
//!
//! Problems are lowered to
//!
//! ```text
//! minimize    obj · x
//! subject to  A x + s = b,   s ∈ Zero^m₀ × NonNeg^m₁ × SOC(d₁) × …
//! ```
//!
//! with variable boxes emitted as nonnegative rows so a search can retighten
//! them through cheap right-hand-side updates. Any solver implementing
//! [`ConicSolver`] can back the search; the crate ships a reference
//! simplex + outer-approximation implementation and the harness plugs in an
//! interior-point solver.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::ir::{ProblemIR, Rel};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConeSpec {
    /// Equalities: `s = 0`.
    Zero(usize),
    /// Inequalities: `s ≥ 0`.
    NonNeg(usize),
    /// Second-order cone of this total dimension: `s₀ ≥ ‖s₁..‖`.
    Soc(usize),
}

impl ConeSpec {
    pub fn dim(self) -> usize {
        match self {
            ConeSpec::Zero(d) | ConeSpec::NonNeg(d) | ConeSpec::Soc(d) => d,
        }
    }
}

/// Subsolver verdict for one convex solve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConicStatus {
    Optimal,
    Infeasible,
    Unbounded,
    /// The solver could not certify a result; never silently treated as a
    /// solution.
    Numerical,
}

#[derive(Clone, Debug)]
pub struct ConicSolution {
    pub status: ConicStatus,
    pub x: Vec<f64>,
    /// Objective including the problem's constant term.
    pub obj: f64,
}

impl ConicSolution {
    pub fn failed(status: ConicStatus) -> Self {
        ConicSolution {
            status,
            x: Vec::new(),
            obj: f64::NAN,
        }
    }
}

/// A problem in standard conic form, column-compressed.
#[derive(Clone, Debug)]
pub struct ConicProblem {
    pub num_vars: usize,
    pub obj: Vec<f64>,
    pub obj_constant: f64,
    pub a_colptr: Vec<usize>,
    pub a_rowidx: Vec<usize>,
    pub a_values: Vec<f64>,
    pub b: Vec<f64>,
    pub cones: Vec<ConeSpec>,
    /// Per variable: row indices of its `x ≤ ub` and `−x ≤ −lb` rows, when
    /// the bound is finite.
    pub bound_rows: Vec<(Option<usize>, Option<usize>)>,
}

impl ConicProblem {
    pub fn num_rows(&self) -> usize {
        self.b.len()
    }
}

/// One solver instance bound to a fixed problem structure. Variable boxes
/// may be retightened between solves; everything else is immutable.
pub trait ConicSession {
    fn set_var_bounds(&mut self, var: usize, lb: f64, ub: f64);
    fn solve(&mut self) -> ConicSolution;
}

/// Factory for [`ConicSession`]s.
pub trait ConicSolver: Sync {
    fn name(&self) -> &'static str;
    fn session(&self, prob: &ConicProblem) -> Box<dyn ConicSession + '_>;

    fn solve_once(&self, prob: &ConicProblem) -> ConicSolution {
        self.session(prob).solve()
    }
}

/// Lowers a compiled IR (no unformed atoms) into standard conic form.
///
/// Row layout: all equality rows, then `Le` rows, `Ge` rows (negated),
/// variable-bound rows, then one SOC block per cone constraint.
pub fn lower(ir: &ProblemIR) -> ConicProblem {
    assert!(
        ir.is_compiled(),
        "IR still contains nonlinear atoms; run the reformulation pipeline first"
    );
    let n = ir.num_vars();
    let mut triplets: Vec<(usize, usize, f64)> = Vec::new();
    let mut b: Vec<f64> = Vec::new();
    let mut row = 0usize;

    let mut n_eq = 0usize;
    for con in ir.cons.iter().filter(|c| c.rel == Rel::Eq) {
        for &(v, c) in &con.terms {
            triplets.push((row, v.index(), c));
        }
        b.push(con.rhs);
        row += 1;
        n_eq += 1;
    }

    let mut n_ineq = 0usize;
    for con in &ir.cons {
        match con.rel {
            Rel::Eq => {}
            Rel::Le => {
                for &(v, c) in &con.terms {
                    triplets.push((row, v.index(), c));
                }
                b.push(con.rhs);
                row += 1;
                n_ineq += 1;
            }
            Rel::Ge => {
                for &(v, c) in &con.terms {
                    triplets.push((row, v.index(), -c));
                }
                b.push(-con.rhs);
                row += 1;
                n_ineq += 1;
            }
        }
    }

    let mut bound_rows = Vec::with_capacity(n);
    for (i, var) in ir.vars.iter().enumerate() {
        let ub_row = if var.ub.is_finite() {
            triplets.push((row, i, 1.0));
            b.push(var.ub);
            row += 1;
            n_ineq += 1;
            Some(row - 1)
        } else {
            None
        };
        let lb_row = if var.lb.is_finite() {
            triplets.push((row, i, -1.0));
            b.push(-var.lb);
            row += 1;
            n_ineq += 1;
            Some(row - 1)
        } else {
            None
        };
        bound_rows.push((ub_row, lb_row));
    }

    let mut cones = Vec::new();
    if n_eq > 0 {
        cones.push(ConeSpec::Zero(n_eq));
    }
    if n_ineq > 0 {
        cones.push(ConeSpec::NonNeg(n_ineq));
    }
    for soc in &ir.socs {
        // s₀ = bound(x), s_k = norm_k(x):  −bound·x + s₀ = const, …
        let dim = soc.norm.len() + 1;
        for &(v, c) in &soc.bound.terms {
            triplets.push((row, v.index(), -c));
        }
        b.push(soc.bound.constant);
        row += 1;
        for e in &soc.norm {
            for &(v, c) in &e.terms {
                triplets.push((row, v.index(), -c));
            }
            b.push(e.constant);
            row += 1;
        }
        cones.push(ConeSpec::Soc(dim));
    }

    // triplets to CSC
    triplets.sort_unstable_by(|x, y| (x.1, x.0).cmp(&(y.1, y.0)));
    let mut a_colptr = Vec::with_capacity(n + 1);
    let mut a_rowidx = Vec::with_capacity(triplets.len());
    let mut a_values = Vec::with_capacity(triplets.len());
    a_colptr.push(0);
    let mut col = 0usize;
    let mut k = 0usize;
    while k < triplets.len() {
        let (r, c, mut v) = triplets[k];
        while col < c {
            a_colptr.push(a_rowidx.len());
            col += 1;
        }
        // merge duplicates within a column/row pair
        let mut kk = k + 1;
        while kk < triplets.len() && triplets[kk].1 == c && triplets[kk].0 == r {
            v += triplets[kk].2;
            kk += 1;
        }
        a_rowidx.push(r);
        a_values.push(v);
        k = kk;
    }
    while col < n {
        a_colptr.push(a_rowidx.len());
        col += 1;
    }

    let mut obj = alloc::vec![0.0; n];
    for &(v, c) in &ir.objective {
        obj[v.index()] += c;
    }

    ConicProblem {
        num_vars: n,
        obj,
        obj_constant: ir.obj_constant,
        a_colptr,
        a_rowidx,
        a_values,
        b,
        cones,
        bound_rows,
    }
}
