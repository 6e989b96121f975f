//! AND-encoding of binary×binary products: `w ≤ x`, `w ≤ y`, `w ≥ x+y−1`
//! with `w ∈ [0,1]`.

use alloc::vec;
use alloc::vec::Vec;

use crate::ir::{Atom, ProblemIR, Rel};
use crate::reform::ReformError;

pub fn binary_product_pass(ir: &mut ProblemIR) -> Result<(), ReformError> {
    let atoms = core::mem::take(&mut ir.atoms);
    let mut keep = Vec::with_capacity(atoms.len());

    for atom in atoms {
        match atom {
            Atom::BinaryProduct { out, x, y, tag } => {
                ir.set_bounds(out, 0.0, 1.0);
                ir.add_con(vec![(out, 1.0), (x, -1.0)], Rel::Le, 0.0, tag);
                ir.add_con(vec![(out, 1.0), (y, -1.0)], Rel::Le, 0.0, tag);
                ir.add_con(
                    vec![(out, 1.0), (x, -1.0), (y, -1.0)],
                    Rel::Ge,
                    -1.0,
                    tag,
                );
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

    fn encoded() -> (ProblemIR, [crate::ir::VarId; 3]) {
        let mut ir = ProblemIR::new();
        let w = ir.add_var("w", 0.0, 1.0, VarKind::Continuous);
        let x = ir.add_binary("x");
        let y = ir.add_binary("y");
        ir.atoms.push(Atom::BinaryProduct {
            out: w,
            x,
            y,
            tag: Tag::Free,
        });
        binary_product_pass(&mut ir).unwrap();
        (ir, [w, x, y])
    }

    #[test]
    fn truth_table_forces_product() {
        let (ir, [w, x, y]) = encoded();
        for (xv, yv) in [(0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (1.0, 1.0)] {
            let product = xv * yv;
            for wv in [0.0, 1.0] {
                let mut a = alloc::vec![0.0; ir.num_vars()];
                a[w.index()] = wv;
                a[x.index()] = xv;
                a[y.index()] = yv;
                let ok = ir.cons.iter().all(|c| c.violation(&a) < 1e-9);
                assert_eq!(ok, wv == product, "corner ({xv},{yv},{wv})");
            }
        }
    }

    #[test]
    fn idempotent() {
        let (mut ir, _) = encoded();
        let rows = ir.cons.len();
        binary_product_pass(&mut ir).unwrap();
        assert_eq!(ir.cons.len(), rows);
    }
}
