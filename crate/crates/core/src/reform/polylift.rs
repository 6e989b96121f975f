//! Lifts univariate polynomials (degree ≤ 5) and multilinear products into
//! chains of bilinear terms with interval-derived bounds.
//!
//! For a quintic in `x` the lifting introduces `s = x²` and `p = s²` and
//! rewrites `x³ = x·s`, `x⁴ = p`, `x⁵ = x·p`; the polynomial then collapses
//! to a linear row over the lifted monomials. Multilinear products chain
//! pairwise left to right.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::ir::{Atom, ProblemIR, Rel, VarId, VarKind};
use crate::reform::{interval, ReformError};

pub fn polynomial_lift_pass(ir: &mut ProblemIR) -> Result<(), ReformError> {
    let atoms = core::mem::take(&mut ir.atoms);
    let mut keep = Vec::with_capacity(atoms.len());
    let mut emitted: Vec<Atom> = Vec::new();

    let mut result = Ok(());
    'outer: for atom in atoms {
        match atom {
            Atom::Polynomial { out, x, coeffs, tag } => {
                let degree = coeffs
                    .iter()
                    .rposition(|&c| c != 0.0)
                    .unwrap_or(0);
                if degree > 5 {
                    result = Err(ReformError::DegreeTooHigh(degree));
                    keep.push(Atom::Polynomial { out, x, coeffs, tag });
                    break 'outer;
                }
                let (xl, xu) = ir.bounds(x);
                if !xl.is_finite() || !xu.is_finite() {
                    result = Err(ReformError::UnboundedVariable(
                        ir.vars[x.index()].name.clone(),
                    ));
                    keep.push(Atom::Polynomial { out, x, coeffs, tag });
                    break 'outer;
                }
                let base = ir.vars[x.index()].name.clone();
                let c = |k: usize| coeffs.get(k).copied().unwrap_or(0.0);

                // row: out = c0 + c1 x + c2 s + c3 (x·s) + c4 p + c5 (x·p)
                let mut terms = vec![(out, 1.0)];
                if c(1) != 0.0 {
                    terms.push((x, -c(1)));
                }

                let mut s_var: Option<VarId> = None;
                if degree >= 2 {
                    let (sl, su) = interval::square_interval(xl, xu);
                    let s = ir.add_var(format!("sq({base})"), sl, su, VarKind::Continuous);
                    emitted.push(Atom::Bilinear {
                        out: s,
                        x,
                        y: x,
                        tag,
                    });
                    if c(2) != 0.0 {
                        terms.push((s, -c(2)));
                    }
                    s_var = Some(s);
                }
                if degree >= 3 {
                    let s = s_var.expect("degree >= 3 implies s");
                    if c(3) != 0.0 {
                        let (sl, su) = ir.bounds(s);
                        let (cl, cu) = interval::mul_interval(xl, xu, sl, su);
                        let cube =
                            ir.add_var(format!("cube({base})"), cl, cu, VarKind::Continuous);
                        emitted.push(Atom::Bilinear {
                            out: cube,
                            x,
                            y: s,
                            tag,
                        });
                        terms.push((cube, -c(3)));
                    }
                }
                let mut p_var: Option<VarId> = None;
                if degree >= 4 {
                    let s = s_var.expect("degree >= 4 implies s");
                    let (sl, su) = ir.bounds(s);
                    let (pl, pu) = interval::square_interval(sl, su);
                    let p = ir.add_var(format!("quart({base})"), pl, pu, VarKind::Continuous);
                    emitted.push(Atom::Bilinear {
                        out: p,
                        x: s,
                        y: s,
                        tag,
                    });
                    if c(4) != 0.0 {
                        terms.push((p, -c(4)));
                    }
                    p_var = Some(p);
                }
                if degree >= 5 {
                    let p = p_var.expect("degree 5 implies p");
                    let (pl, pu) = ir.bounds(p);
                    let (ql, qu) = interval::mul_interval(xl, xu, pl, pu);
                    let quint = ir.add_var(format!("quint({base})"), ql, qu, VarKind::Continuous);
                    emitted.push(Atom::Bilinear {
                        out: quint,
                        x,
                        y: p,
                        tag,
                    });
                    terms.push((quint, -c(5)));
                }
                ir.add_con(terms, Rel::Eq, c(0), tag);
            }
            Atom::Product {
                out,
                factors,
                scale,
                tag,
            } => {
                if factors.is_empty() {
                    ir.add_con(vec![(out, 1.0)], Rel::Eq, scale, tag);
                    continue;
                }
                let mut cur = factors[0];
                for (k, &f) in factors[1..].iter().enumerate() {
                    let (al, au) = ir.bounds(cur);
                    let (bl, bu) = ir.bounds(f);
                    if !al.is_finite() || !au.is_finite() || !bl.is_finite() || !bu.is_finite() {
                        let bad = if al.is_finite() && au.is_finite() { f } else { cur };
                        result = Err(ReformError::UnboundedVariable(
                            ir.vars[bad.index()].name.clone(),
                        ));
                        keep.push(Atom::Product {
                            out,
                            factors,
                            scale,
                            tag,
                        });
                        break 'outer;
                    }
                    let (pl, pu) = interval::mul_interval(al, au, bl, bu);
                    let name = format!("prod({},{})", ir.vars[out.index()].name, k);
                    let aux = ir.add_var(name, pl, pu, VarKind::Continuous);
                    emitted.push(Atom::Bilinear {
                        out: aux,
                        x: cur,
                        y: f,
                        tag,
                    });
                    cur = aux;
                }
                ir.add_con(vec![(out, 1.0), (cur, -scale)], Rel::Eq, 0.0, tag);
            }
            other => keep.push(other),
        }
    }

    keep.extend(emitted);
    ir.atoms = keep;
    result
}
