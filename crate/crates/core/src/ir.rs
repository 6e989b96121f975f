//! Problem intermediate representation shared by the model builders, the
//! reformulation passes, and the search.
//!
//! A [`ProblemIR`] holds variables (with bounds and integrality), linear
//! constraints, second-order cone constraints, a linear objective, and a list
//! of tagged nonlinear [`Atom`]s. Model builders emit atoms for every
//! nonlinear relation; the passes in [`crate::reform`] rewrite them into
//! linear/conic form. Every constraint carries the [`Tag`] of the model
//! relation it descends from, which survives all rewrites and is how
//! violation reports name offending rows.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::math;

/// Index of a decision variable inside one [`ProblemIR`].
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub u32);

impl VarId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarKind {
    Continuous,
    Binary,
}

#[derive(Clone, Debug)]
pub struct Variable {
    pub name: String,
    pub lb: f64,
    pub ub: f64,
    pub kind: VarKind,
}

/// Relation of a linear row to its right-hand side.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    Eq,
    Le,
    Ge,
}

/// Names the model relation a constraint encodes. Tags survive every
/// reformulation pass, so a violation report on the compiled problem can
/// still say which physical relation is broken.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tag {
    // Ammonia synthesis (HB process)
    HbMaterialBalance,
    HbRamp,
    HbChangeFreq,
    HbModeOneHot,
    HbModePowerSelect,
    HbFeedRatio,
    HbMode1Power,
    HbMode1Range,
    HbMode2Power,
    HbMode2RatioRange,
    HbMode2Range,
    HbFeedGate,
    HbNitrogenFeed,
    // Dual-fuel gas turbine
    DgtBlendRatio,
    DgtBlendDenominator,
    DgtBlendRecip,
    DgtEfficiencyCurve,
    DgtBlendBound,
    DgtHeatingValue,
    DgtPowerProduct,
    DgtPowerRange,
    DgtFuelGate,
    // Gas and battery storage
    H2StorageBalance,
    H2RegionOneHot,
    H2LevelDecomposition,
    H2RegionBand,
    Nh3Balance,
    Nh3LevelBound,
    PsaPower,
    PsaRange,
    ElzRange,
    HapPower,
    BatteryBalance,
    BatteryChargeLimit,
    BatteryDischargeLimit,
    BatteryExclusive,
    BatteryLevelBound,
    /// Battery level bound after disturbance-margin tightening.
    BatteryLevelTightened,
    // Distribution network
    NodalBalanceP,
    NodalBalanceQ,
    FlowLimitP,
    FlowLimitQ,
    VoltageDrop,
    VoltageBound,
    VoltageRef,
    CurtailLimit,
    // Storage-state / synthesis-mode mapping
    MapRegionMode,
    MapNoRestartToPartial,
    MapNoFullRateShutdown,
    // Objective bookkeeping
    ObjStartup,
    ObjShutdown,
    /// Generic tag for constraints that do not descend from a model relation
    /// (tests, ad-hoc problems).
    Free,
}

/// Affine expression `terms · x + constant`.
#[derive(Clone, Debug, Default)]
pub struct Affine {
    pub terms: Vec<(VarId, f64)>,
    pub constant: f64,
}

impl Affine {
    pub fn var(v: VarId) -> Self {
        Affine {
            terms: vec![(v, 1.0)],
            constant: 0.0,
        }
    }

    pub fn constant(c: f64) -> Self {
        Affine {
            terms: Vec::new(),
            constant: c,
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let mut s = self.constant;
        for &(v, c) in &self.terms {
            s += c * x[v.index()];
        }
        s
    }
}

/// Linear constraint `terms · x REL rhs`.
#[derive(Clone, Debug)]
pub struct LinCon {
    pub terms: Vec<(VarId, f64)>,
    pub rel: Rel,
    pub rhs: f64,
    pub tag: Tag,
}

impl LinCon {
    pub fn lhs(&self, x: &[f64]) -> f64 {
        let mut s = 0.0;
        for &(v, c) in &self.terms {
            s += c * x[v.index()];
        }
        s
    }

    /// Violation amount (0 when satisfied).
    pub fn violation(&self, x: &[f64]) -> f64 {
        let lhs = self.lhs(x);
        match self.rel {
            Rel::Eq => math::abs(lhs - self.rhs),
            Rel::Le => (lhs - self.rhs).max(0.0),
            Rel::Ge => (self.rhs - lhs).max(0.0),
        }
    }
}

/// Second-order cone constraint `‖ norm ‖₂ ≤ bound` with affine entries.
#[derive(Clone, Debug)]
pub struct SocCon {
    pub bound: Affine,
    pub norm: Vec<Affine>,
    pub tag: Tag,
}

impl SocCon {
    pub fn violation(&self, x: &[f64]) -> f64 {
        let mut sq = 0.0;
        for e in &self.norm {
            let v = e.eval(x);
            sq += v * v;
        }
        (math::sqrt(sq) - self.bound.eval(x)).max(0.0)
    }
}

/// Tagged nonlinear relation awaiting compilation by a reformulation pass.
#[derive(Clone, Debug)]
pub enum Atom {
    /// `out = Σ_i sel_i · val_i` where the `sel_i` form a one-hot binary
    /// family (exactly one equals 1 in any feasible point).
    OneHotSelect {
        out: VarId,
        arms: Vec<(VarId, VarId)>,
        tag: Tag,
    },
    /// `out = bin · cont` with `bin` binary and `cont` box-bounded.
    BinContProduct {
        out: VarId,
        bin: VarId,
        cont: VarId,
        tag: Tag,
    },
    /// `out = x · y`, both binary.
    BinaryProduct {
        out: VarId,
        x: VarId,
        y: VarId,
        tag: Tag,
    },
    /// `out · den = 1`. When `gate` is present the relation is enforced only
    /// while the gate binary is 1 (the denominator may vanish when idle);
    /// the attached value is the denominator's lower bound while committed.
    Reciprocal {
        out: VarId,
        den: VarId,
        gate: Option<(VarId, f64)>,
        tag: Tag,
    },
    /// `out = x · y`, continuous bilinear.
    Bilinear {
        out: VarId,
        x: VarId,
        y: VarId,
        tag: Tag,
    },
    /// `out = Σ_k coeffs[k] · x^k`.
    Polynomial {
        out: VarId,
        x: VarId,
        coeffs: Vec<f64>,
        tag: Tag,
    },
    /// `out = scale · Π_i factors_i`, continuous multilinear.
    Product {
        out: VarId,
        factors: Vec<VarId>,
        scale: f64,
        tag: Tag,
    },
}

impl Atom {
    pub fn tag(&self) -> Tag {
        match self {
            Atom::OneHotSelect { tag, .. }
            | Atom::BinContProduct { tag, .. }
            | Atom::BinaryProduct { tag, .. }
            | Atom::Reciprocal { tag, .. }
            | Atom::Bilinear { tag, .. }
            | Atom::Polynomial { tag, .. }
            | Atom::Product { tag, .. } => *tag,
        }
    }

    /// Signed residual `lhs(out) − rhs(inputs)` of the relation at `x`.
    /// Gated reciprocals report zero residual while the gate is off.
    pub fn residual(&self, x: &[f64]) -> f64 {
        match self {
            Atom::OneHotSelect { out, arms, .. } => {
                let mut s = 0.0;
                for &(sel, val) in arms {
                    s += x[sel.index()] * x[val.index()];
                }
                x[out.index()] - s
            }
            Atom::BinContProduct { out, bin, cont, .. } => {
                x[out.index()] - x[bin.index()] * x[cont.index()]
            }
            Atom::BinaryProduct { out, x: a, y: b, .. } => {
                x[out.index()] - x[a.index()] * x[b.index()]
            }
            Atom::Reciprocal { out, den, gate, .. } => {
                let active = gate.map(|(g, _)| x[g.index()] > 0.5).unwrap_or(true);
                if active {
                    x[out.index()] * x[den.index()] - 1.0
                } else {
                    0.0
                }
            }
            Atom::Bilinear { out, x: a, y: b, .. } => {
                x[out.index()] - x[a.index()] * x[b.index()]
            }
            Atom::Polynomial { out, x: v, coeffs, .. } => {
                let xv = x[v.index()];
                let mut p = 0.0;
                for (k, c) in coeffs.iter().enumerate() {
                    p += c * math::powi(xv, k as i32);
                }
                x[out.index()] - p
            }
            Atom::Product {
                out,
                factors,
                scale,
                ..
            } => {
                let mut p = *scale;
                for f in factors {
                    p *= x[f.index()];
                }
                x[out.index()] - p
            }
        }
    }
}

/// Bilinear term retained after envelope relaxation, for spatial branching
/// and envelope-gap reporting.
#[derive(Clone, Debug)]
pub struct SpatialAtom {
    pub out: VarId,
    pub x: VarId,
    pub y: VarId,
    pub tag: Tag,
    /// Worst-case envelope gap `(xU−xL)(yU−yL)/4` over the finest segment
    /// box, recorded when the envelope was emitted.
    pub gap_estimate: f64,
}

/// Optimization problem under construction: variables, constraints, tagged
/// nonlinear atoms, and a linear objective (minimization).
#[derive(Clone, Debug, Default)]
pub struct ProblemIR {
    pub vars: Vec<Variable>,
    pub cons: Vec<LinCon>,
    pub socs: Vec<SocCon>,
    pub atoms: Vec<Atom>,
    /// Bilinear atoms kept after `mccormick_pass` for spatial refinement.
    pub spatial: Vec<SpatialAtom>,
    pub objective: Vec<(VarId, f64)>,
    pub obj_constant: f64,
}

impl ProblemIR {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn add_var(
        &mut self,
        name: impl Into<String>,
        lb: f64,
        ub: f64,
        kind: VarKind,
    ) -> VarId {
        debug_assert!(lb <= ub, "variable with empty box");
        let id = VarId(self.vars.len() as u32);
        self.vars.push(Variable {
            name: name.into(),
            lb,
            ub,
            kind,
        });
        id
    }

    pub fn add_binary(&mut self, name: impl Into<String>) -> VarId {
        self.add_var(name, 0.0, 1.0, VarKind::Binary)
    }

    pub fn add_con(&mut self, terms: Vec<(VarId, f64)>, rel: Rel, rhs: f64, tag: Tag) {
        self.cons.push(LinCon {
            terms,
            rel,
            rhs,
            tag,
        });
    }

    pub fn add_objective(&mut self, v: VarId, coeff: f64) {
        self.objective.push((v, coeff));
    }

    pub fn bounds(&self, v: VarId) -> (f64, f64) {
        let var = &self.vars[v.index()];
        (var.lb, var.ub)
    }

    pub fn set_bounds(&mut self, v: VarId, lb: f64, ub: f64) {
        let var = &mut self.vars[v.index()];
        var.lb = lb;
        var.ub = ub;
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        let mut s = self.obj_constant;
        for &(v, c) in &self.objective {
            s += c * x[v.index()];
        }
        s
    }

    /// True when no unformed nonlinear atoms remain (the problem is
    /// linear/conic and ready for the search).
    pub fn is_compiled(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Largest bound-violation of `x` against the variable boxes.
    pub fn max_bound_violation(&self, x: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, var) in self.vars.iter().enumerate() {
            worst = worst.max(var.lb - x[i]).max(x[i] - var.ub);
        }
        worst.max(0.0)
    }

    /// Largest integrality violation of `x` over binary variables.
    pub fn max_integrality_violation(&self, x: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, var) in self.vars.iter().enumerate() {
            if var.kind == VarKind::Binary {
                worst = worst.max(math::abs(x[i] - math::round(x[i])));
            }
        }
        worst
    }

    /// Human-readable listing with tags, for debugging model builds.
    #[cfg(feature = "std")]
    pub fn dump(&self) -> String {
        use core::fmt::Write;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# {} vars, {} lin cons, {} socs, {} atoms",
            self.vars.len(),
            self.cons.len(),
            self.socs.len(),
            self.atoms.len()
        );
        for (i, v) in self.vars.iter().enumerate() {
            let _ = writeln!(
                out,
                "var x{i} {:?} in [{}, {}]  # {}",
                v.kind, v.lb, v.ub, v.name
            );
        }
        for c in &self.cons {
            let mut lhs = String::new();
            for (k, &(v, coef)) in c.terms.iter().enumerate() {
                if k > 0 {
                    lhs.push_str(" + ");
                }
                let _ = write!(lhs, "{coef}*x{}", v.0);
            }
            let rel = match c.rel {
                Rel::Eq => "=",
                Rel::Le => "<=",
                Rel::Ge => ">=",
            };
            let _ = writeln!(out, "{lhs} {rel} {}  # {:?}", c.rhs, c.tag);
        }
        for a in &self.atoms {
            let _ = writeln!(out, "atom {a:?}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_violation_by_relation() {
        let mut ir = ProblemIR::new();
        let x = ir.add_var("x", 0.0, 10.0, VarKind::Continuous);
        ir.add_con(vec![(x, 2.0)], Rel::Le, 5.0, Tag::Free);
        ir.add_con(vec![(x, 1.0)], Rel::Ge, 1.0, Tag::Free);
        ir.add_con(vec![(x, 1.0)], Rel::Eq, 3.0, Tag::Free);
        let at = |v: f64| [v];
        assert_eq!(ir.cons[0].violation(&at(2.0)), 0.0);
        assert!((ir.cons[0].violation(&at(3.0)) - 1.0).abs() < 1e-12);
        assert!((ir.cons[1].violation(&at(0.5)) - 0.5).abs() < 1e-12);
        assert!((ir.cons[2].violation(&at(4.0)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn atom_residuals() {
        let mut ir = ProblemIR::new();
        let w = ir.add_var("w", -10.0, 10.0, VarKind::Continuous);
        let a = ir.add_var("a", 0.0, 2.0, VarKind::Continuous);
        let b = ir.add_var("b", 0.0, 2.0, VarKind::Continuous);
        let atom = Atom::Bilinear {
            out: w,
            x: a,
            y: b,
            tag: Tag::Free,
        };
        assert!((atom.residual(&[3.0, 1.5, 2.0]) - 0.0).abs() < 1e-12);
        assert!((atom.residual(&[4.0, 1.5, 2.0]) - 1.0).abs() < 1e-12);

        let g = ir.add_binary("g");
        let recip = Atom::Reciprocal {
            out: w,
            den: a,
            gate: Some((g, 0.5)),
            tag: Tag::Free,
        };
        // gate off: no residual even though out*den != 1
        assert_eq!(recip.residual(&[5.0, 0.0, 0.0, 0.0]), 0.0);
        assert!((recip.residual(&[0.5, 2.0, 0.0, 1.0]) - 0.0).abs() < 1e-12);

        let poly = Atom::Polynomial {
            out: w,
            x: a,
            coeffs: vec![1.0, 0.0, 2.0],
            tag: Tag::Free,
        };
        // out = 1 + 2a²; at a=1.5, out must be 5.5
        assert!((poly.residual(&[5.5, 1.5, 0.0, 0.0]) - 0.0).abs() < 1e-12);
    }
}
