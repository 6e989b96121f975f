//! Exact big-M linearization of one-hot mode selections and generic
//! binary×continuous products. Big-M constants come from the continuous
//! factor's declared bounds, never from a global constant.

use alloc::vec;
use alloc::vec::Vec;

use crate::ir::{Atom, ProblemIR, Rel};
use crate::reform::ReformError;

pub fn glover_pass(ir: &mut ProblemIR) -> Result<(), ReformError> {
    let atoms = core::mem::take(&mut ir.atoms);
    let mut keep = Vec::with_capacity(atoms.len());

    for atom in atoms {
        match atom {
            Atom::OneHotSelect { out, arms, tag } => {
                let (ol, ou) = ir.bounds(out);
                if !ol.is_finite() || !ou.is_finite() {
                    ir.atoms = keep;
                    return Err(ReformError::UnboundedVariable(
                        ir.vars[out.index()].name.clone(),
                    ));
                }
                for (sel, val) in arms {
                    let (vl, vu) = ir.bounds(val);
                    if !vl.is_finite() || !vu.is_finite() {
                        ir.atoms = keep;
                        return Err(ReformError::UnboundedVariable(
                            ir.vars[val.index()].name.clone(),
                        ));
                    }
                    // |out - val| <= M (1 - sel) with M covering the boxes
                    let m = (ou - vl).max(vu - ol).max(0.0);
                    ir.add_con(
                        vec![(out, 1.0), (val, -1.0), (sel, m)],
                        Rel::Le,
                        m,
                        tag,
                    );
                    ir.add_con(
                        vec![(out, 1.0), (val, -1.0), (sel, -m)],
                        Rel::Ge,
                        -m,
                        tag,
                    );
                }
            }
            Atom::BinContProduct { out, bin, cont, tag } => {
                let (cl, cu) = ir.bounds(cont);
                if !cl.is_finite() || !cu.is_finite() {
                    ir.atoms = keep;
                    return Err(ReformError::UnboundedVariable(
                        ir.vars[cont.index()].name.clone(),
                    ));
                }
                // out = bin·cont over cont ∈ [cl, cu]:
                // cl·bin <= out <= cu·bin and
                // cont − cu(1−bin) <= out <= cont − cl(1−bin)
                ir.add_con(vec![(out, 1.0), (bin, -cu)], Rel::Le, 0.0, tag);
                ir.add_con(vec![(out, 1.0), (bin, -cl)], Rel::Ge, 0.0, tag);
                ir.add_con(
                    vec![(out, 1.0), (cont, -1.0), (bin, -cl)],
                    Rel::Le,
                    -cl,
                    tag,
                );
                ir.add_con(
                    vec![(out, 1.0), (cont, -1.0), (bin, -cu)],
                    Rel::Ge,
                    -cu,
                    tag,
                );
                let (ol, ou) = ir.bounds(out);
                ir.set_bounds(out, ol.max(cl.min(0.0)), ou.min(cu.max(0.0)));
            }
            other => keep.push(other),
        }
    }

    ir.atoms = keep;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::{Tag, VarKind};

    /// Feasible sets of the selection atom and its big-M rows coincide on
    /// one-hot selector assignments (sampled continuous values).
    #[test]
    fn one_hot_rows_match_selection_semantics() {
        let mut ir = ProblemIR::new();
        let out = ir.add_var("out", 0.0, 10.0, VarKind::Continuous);
        let sels = [
            ir.add_binary("s1"),
            ir.add_binary("s2"),
            ir.add_binary("s3"),
        ];
        let vals = [
            ir.add_var("v1", 0.0, 10.0, VarKind::Continuous),
            ir.add_var("v2", 0.0, 10.0, VarKind::Continuous),
            ir.add_var("v3", 0.0, 0.0, VarKind::Continuous),
        ];
        ir.atoms.push(Atom::OneHotSelect {
            out,
            arms: sels.iter().copied().zip(vals.iter().copied()).collect(),
            tag: Tag::Free,
        });
        glover_pass(&mut ir).unwrap();
        assert!(ir.atoms.is_empty());

        // deterministic pseudo-random samples
        let mut seed = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed >> 11) as f64 / (1u64 << 53) as f64
        };
        for active in 0..3 {
            for _ in 0..100 {
                let v = [next() * 10.0, next() * 10.0, 0.0];
                let mut x = alloc::vec![0.0; ir.num_vars()];
                for k in 0..3 {
                    x[sels[k].index()] = if k == active { 1.0 } else { 0.0 };
                    x[vals[k].index()] = v[k];
                }
                // matching output satisfies every row
                x[out.index()] = v[active];
                assert!(ir.cons.iter().all(|c| c.violation(&x) < 1e-9));
                // any deviation violates the active arm's row pair
                x[out.index()] = v[active] + 0.5;
                assert!(ir.cons.iter().any(|c| c.violation(&x) > 0.4));
            }
        }
    }

    #[test]
    fn inactive_arm_rows_are_slack_at_bound_range() {
        let mut ir = ProblemIR::new();
        let out = ir.add_var("out", 0.0, 2000.0, VarKind::Continuous);
        let s = ir.add_binary("s");
        let v = ir.add_var("v", 0.0, 2000.0, VarKind::Continuous);
        ir.atoms.push(Atom::OneHotSelect {
            out,
            arms: alloc::vec![(s, v)],
            tag: Tag::Free,
        });
        glover_pass(&mut ir).unwrap();
        // with the selector off, |out - v| up to the box range 2000 passes
        let mut x = alloc::vec![0.0; ir.num_vars()];
        x[out.index()] = 2000.0;
        x[v.index()] = 0.0;
        assert!(ir.cons.iter().all(|c| c.violation(&x) < 1e-9));
    }

    #[test]
    fn binary_continuous_product_corners() {
        let mut ir = ProblemIR::new();
        let out = ir.add_var("out", -5.0, 5.0, VarKind::Continuous);
        let b = ir.add_binary("b");
        let c = ir.add_var("c", -2.0, 3.0, VarKind::Continuous);
        ir.atoms.push(Atom::BinContProduct {
            out,
            bin: b,
            cont: c,
            tag: Tag::Free,
        });
        glover_pass(&mut ir).unwrap();
        let feasible = |w: f64, bv: f64, cv: f64, ir: &ProblemIR| {
            let mut x = alloc::vec![0.0; ir.num_vars()];
            x[out.index()] = w;
            x[b.index()] = bv;
            x[c.index()] = cv;
            ir.cons.iter().all(|con| con.violation(&x) < 1e-9)
        };
        for cv in [-2.0, -0.7, 0.0, 1.4, 3.0] {
            assert!(feasible(cv, 1.0, cv, &ir));
            assert!(!feasible(cv + 0.3, 1.0, cv, &ir));
            assert!(feasible(0.0, 0.0, cv, &ir));
            assert!(!feasible(0.4, 0.0, cv, &ir));
        }
    }

    #[test]
    fn unbounded_factor_is_an_error() {
        let mut ir = ProblemIR::new();
        let out = ir.add_var("out", 0.0, 1.0, VarKind::Continuous);
        let b = ir.add_binary("b");
        let c = ir.add_var("wild", 0.0, f64::INFINITY, VarKind::Continuous);
        ir.atoms.push(Atom::BinContProduct {
            out,
            bin: b,
            cont: c,
            tag: Tag::Free,
        });
        match glover_pass(&mut ir) {
            Err(ReformError::UnboundedVariable(name)) => assert_eq!(name, "wild"),
            other => panic!("expected unbounded-variable error, got {other:?}"),
        }
    }

    #[test]
    fn pass_is_idempotent() {
        let mut ir = ProblemIR::new();
        let out = ir.add_var("out", 0.0, 1.0, VarKind::Continuous);
        let b = ir.add_binary("b");
        let c = ir.add_var("c", 0.0, 1.0, VarKind::Continuous);
        ir.atoms.push(Atom::BinContProduct {
            out,
            bin: b,
            cont: c,
            tag: Tag::Free,
        });
        glover_pass(&mut ir).unwrap();
        let snapshot = ir.clone();
        glover_pass(&mut ir).unwrap();
        assert_eq!(ir.cons.len(), snapshot.cons.len());
        assert_eq!(ir.num_vars(), snapshot.num_vars());
    }
}
