//! Constraint-violation reporting against an assignment, annotated with the
//! model-relation tags the rows descend from.

use alloc::vec::Vec;

use crate::ir::{ProblemIR, Tag, VarId};

#[derive(Clone, Debug)]
pub struct RowViolation {
    pub row: usize,
    pub tag: Tag,
    pub amount: f64,
}

#[derive(Clone, Debug, Default)]
pub struct ViolationReport {
    pub rows: Vec<RowViolation>,
    pub bounds: Vec<(VarId, f64)>,
    pub socs: Vec<(usize, f64)>,
}

impl ViolationReport {
    pub fn is_clean(&self) -> bool {
        self.rows.is_empty() && self.bounds.is_empty() && self.socs.is_empty()
    }

    pub fn max_violation(&self) -> f64 {
        let rows = self.rows.iter().map(|v| v.amount);
        let bounds = self.bounds.iter().map(|&(_, a)| a);
        let socs = self.socs.iter().map(|&(_, a)| a);
        rows.chain(bounds).chain(socs).fold(0.0, f64::max)
    }

    /// Tags of violated rows, deduplicated in order of appearance.
    pub fn tags(&self) -> Vec<Tag> {
        let mut out = Vec::new();
        for v in &self.rows {
            if !out.contains(&v.tag) {
                out.push(v.tag);
            }
        }
        out
    }
}

/// Lists every linear row, cone row, and variable box violated by more than
/// `tol` at `x`.
pub fn verify_feasibility(ir: &ProblemIR, x: &[f64], tol: f64) -> ViolationReport {
    let mut report = ViolationReport::default();
    for (row, con) in ir.cons.iter().enumerate() {
        let amount = con.violation(x);
        if amount > tol {
            report.rows.push(RowViolation {
                row,
                tag: con.tag,
                amount,
            });
        }
    }
    for (i, var) in ir.vars.iter().enumerate() {
        let amount = (var.lb - x[i]).max(x[i] - var.ub).max(0.0);
        if amount > tol {
            report.bounds.push((VarId(i as u32), amount));
        }
    }
    for (k, soc) in ir.socs.iter().enumerate() {
        let amount = soc.violation(x);
        if amount > tol {
            report.socs.push((k, amount));
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::{Rel, VarKind};

    #[test]
    fn clean_and_dirty_reports() {
        let mut ir = ProblemIR::new();
        let x = ir.add_var("x", 0.0, 5.0, VarKind::Continuous);
        let y = ir.add_var("y", 0.0, 5.0, VarKind::Continuous);
        ir.add_con(alloc::vec![(x, 1.0), (y, 1.0)], Rel::Le, 4.0, Tag::Free);
        ir.add_con(alloc::vec![(x, 1.0)], Rel::Eq, 1.0, Tag::BatteryBalance);

        let good = [1.0, 2.0];
        assert!(verify_feasibility(&ir, &good, 1e-9).is_clean());

        let bad = [2.0, 3.0];
        let report = verify_feasibility(&ir, &bad, 1e-9);
        assert_eq!(report.rows.len(), 2);
        assert!(report.tags().contains(&Tag::BatteryBalance));
        assert!((report.max_violation() - 1.0).abs() < 1e-12);

        let out_of_box = [6.0, -1.0];
        let report = verify_feasibility(&ir, &out_of_box, 1e-9);
        assert_eq!(report.bounds.len(), 2);
    }
}
