//! Rewrites reciprocal atoms `out = 1/den` into bilinear links with derived
//! bounds.
//!
//! Ungated: requires a strictly positive denominator box `[dl, du]`; sets
//! `out ∈ [1/du, 1/dl]` and adds `w = out·den` (bilinear) with `w = 1`.
//!
//! Gated: the denominator may rest at zero while the gate is off, so the
//! atom carries the committed lower bound `d_on`. The link becomes
//! `h = gate·w` (a binary×continuous product for the later Glover pass)
//! with `h = gate`, which enforces `w = 1` exactly while committed and
//! releases the reciprocal otherwise.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::ir::{Atom, ProblemIR, Rel, VarKind};
use crate::reform::{interval, ReformError};

pub fn fractional_pass(ir: &mut ProblemIR) -> Result<(), ReformError> {
    let atoms = core::mem::take(&mut ir.atoms);
    let mut keep = Vec::with_capacity(atoms.len());
    let mut emitted: Vec<Atom> = Vec::new();

    let mut result = Ok(());
    'outer: for atom in atoms {
        match atom {
            Atom::Reciprocal { out, den, gate, tag } => {
                let (dl, du) = ir.bounds(den);
                if !du.is_finite() {
                    result = Err(ReformError::UnboundedVariable(
                        ir.vars[den.index()].name.clone(),
                    ));
                    keep.push(Atom::Reciprocal { out, den, gate, tag });
                    break 'outer;
                }
                let active_lo = match gate {
                    Some((_, d_on)) => d_on,
                    None => dl,
                };
                if active_lo <= 0.0 {
                    result = Err(ReformError::DenominatorSpansZero(
                        ir.vars[den.index()].name.clone(),
                    ));
                    keep.push(Atom::Reciprocal { out, den, gate, tag });
                    break 'outer;
                }
                // reciprocal box over the committed denominator range
                let (ol, ou) = ir.bounds(out);
                ir.set_bounds(out, ol.max(1.0 / du), ou.min(1.0 / active_lo));

                let (ol, ou) = ir.bounds(out);
                let (wl, wu) = interval::mul_interval(ol, ou, dl.max(0.0), du);
                let name = format!("recip_link({})", ir.vars[out.index()].name);
                let w = ir.add_var(name, wl.min(1.0), wu.max(1.0), VarKind::Continuous);
                emitted.push(Atom::Bilinear {
                    out: w,
                    x: out,
                    y: den,
                    tag,
                });

                match gate {
                    None => {
                        ir.add_con(vec![(w, 1.0)], Rel::Eq, 1.0, tag);
                    }
                    Some((g, _)) => {
                        let name = format!("recip_gate({})", ir.vars[out.index()].name);
                        let h = ir.add_var(name, wl.min(0.0), wu.max(1.0), VarKind::Continuous);
                        emitted.push(Atom::BinContProduct {
                            out: h,
                            bin: g,
                            cont: w,
                            tag,
                        });
                        ir.add_con(vec![(h, 1.0), (g, -1.0)], Rel::Eq, 0.0, tag);
                    }
                }
            }
            other => keep.push(other),
        }
    }

    keep.extend(emitted);
    ir.atoms = keep;
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::Tag;

    #[test]
    fn bounds_derived_from_ratio_box() {
        let mut ir = ProblemIR::new();
        let r = ir.add_var("r", 0.418, 3.0, VarKind::Continuous);
        let z = ir.add_var("z", 0.0, f64::INFINITY, VarKind::Continuous);
        ir.atoms.push(Atom::Reciprocal {
            out: z,
            den: r,
            gate: None,
            tag: Tag::HbFeedRatio,
        });
        fractional_pass(&mut ir).unwrap();
        let (zl, zu) = ir.bounds(z);
        assert!((zl - 1.0 / 3.0).abs() < 1e-12);
        assert!((zu - 1.0 / 0.418).abs() < 1e-12);
        // exactly one bilinear link remains, pinned to 1
        assert_eq!(ir.atoms.len(), 1);
        assert!(ir
            .cons
            .iter()
            .any(|c| c.rel == Rel::Eq && c.rhs == 1.0 && c.terms.len() == 1));
    }

    #[test]
    fn reciprocal_value_at_sample_point() {
        // r = 2 -> z = 0.5 satisfies the link; z = 0.6 does not
        let mut ir = ProblemIR::new();
        let r = ir.add_var("r", 0.5, 3.0, VarKind::Continuous);
        let z = ir.add_var("z", 0.0, f64::INFINITY, VarKind::Continuous);
        ir.atoms.push(Atom::Reciprocal {
            out: z,
            den: r,
            gate: None,
            tag: Tag::Free,
        });
        fractional_pass(&mut ir).unwrap();
        let link = &ir.atoms[0];
        let w = match link {
            Atom::Bilinear { out, .. } => *out,
            _ => panic!("expected bilinear link"),
        };
        let mut x = alloc::vec![0.0; ir.num_vars()];
        x[r.index()] = 2.0;
        x[z.index()] = 0.5;
        x[w.index()] = 1.0;
        assert!(link.residual(&x).abs() < 1e-12);
        assert!(ir.cons.iter().all(|c| c.violation(&x) < 1e-12));
    }

    #[test]
    fn zero_spanning_denominator_rejected_without_gate() {
        let mut ir = ProblemIR::new();
        let d = ir.add_var("den", 0.0, 3.0, VarKind::Continuous);
        let z = ir.add_var("z", 0.0, f64::INFINITY, VarKind::Continuous);
        ir.atoms.push(Atom::Reciprocal {
            out: z,
            den: d,
            gate: None,
            tag: Tag::Free,
        });
        assert!(matches!(
            fractional_pass(&mut ir),
            Err(ReformError::DenominatorSpansZero(_))
        ));
    }

    #[test]
    fn gated_reciprocal_releases_when_off() {
        let mut ir = ProblemIR::new();
        let d = ir.add_var("den", 0.0, 4.0, VarKind::Continuous);
        let z = ir.add_var("z", 0.0, f64::INFINITY, VarKind::Continuous);
        let g = ir.add_binary("g");
        ir.atoms.push(Atom::Reciprocal {
            out: z,
            den: d,
            gate: Some((g, 2.0)),
            tag: Tag::Free,
        });
        fractional_pass(&mut ir).unwrap();
        // committed range [2,4]: z in [0.25, 0.5]
        let (zl, zu) = ir.bounds(z);
        assert!((zl - 0.25).abs() < 1e-12);
        assert!((zu - 0.5).abs() < 1e-12);
        // link and gate atoms emitted
        assert_eq!(ir.atoms.len(), 2);
    }
}
