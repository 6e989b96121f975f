//! Piecewise McCormick envelopes for the bilinear terms that remain after
//! the exact passes.
//!
//! Each `w = x·y` over a finite box is replaced by its four envelope
//! inequalities; with `n ≥ 2` segments the x-axis is split and a one-hot
//! family of segment selectors gates per-segment envelopes (exact at segment
//! edges, worst-case gap `(Δx/n)·Δy/4`). Square terms `w = x²` reuse the
//! split variable on both axes so segments tighten quadratically. The
//! relaxed terms stay recorded in [`ProblemIR::spatial`] for spatial
//! branching and gap audits.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::ir::{Atom, ProblemIR, Rel, SpatialAtom, Tag, VarId, VarKind};
use crate::reform::{interval, ReformError};

/// Segment counts per atom family.
#[derive(Clone, Copy, Debug)]
pub struct McCormickOptions {
    /// Segments for atoms in the turbine fuel/power chain, which carries the
    /// widest boxes.
    pub dgt_segments: usize,
    /// Segments everywhere else.
    pub default_segments: usize,
}

impl Default for McCormickOptions {
    fn default() -> Self {
        McCormickOptions {
            dgt_segments: 4,
            default_segments: 1,
        }
    }
}

impl McCormickOptions {
    pub fn uniform(n: usize) -> Self {
        McCormickOptions {
            dgt_segments: n,
            default_segments: n,
        }
    }

    fn segments_for(&self, tag: Tag) -> usize {
        let n = match tag {
            Tag::DgtBlendRatio
            | Tag::DgtBlendRecip
            | Tag::DgtEfficiencyCurve
            | Tag::DgtPowerProduct => self.dgt_segments,
            _ => self.default_segments,
        };
        n.max(1)
    }
}

pub fn mccormick_pass(ir: &mut ProblemIR, options: &McCormickOptions) -> Result<(), ReformError> {
    interval::propagate_bilinear_bounds(ir);

    let atoms = core::mem::take(&mut ir.atoms);
    let mut keep = Vec::with_capacity(atoms.len());
    let mut result = Ok(());

    'outer: for atom in atoms {
        match atom {
            Atom::Bilinear { out, x, y, tag } => {
                let (xl, xu) = ir.bounds(x);
                let (yl, yu) = ir.bounds(y);
                for (v, lo, hi) in [(x, xl, xu), (y, yl, yu)] {
                    if !lo.is_finite() || !hi.is_finite() {
                        result = Err(ReformError::UnboundedVariable(
                            ir.vars[v.index()].name.clone(),
                        ));
                        keep.push(Atom::Bilinear { out, x, y, tag });
                        break 'outer;
                    }
                }
                let mut n = options.segments_for(tag);
                if xu - xl <= 0.0 {
                    n = 1;
                }
                let square = x == y;
                if n == 1 {
                    emit_envelope(ir, out, x, y, (xl, xu), (yl, yu), None, tag);
                } else {
                    let dx = (xu - xl) / n as f64;
                    let breaks: Vec<f64> = (0..=n).map(|k| xl + dx * k as f64).collect();
                    emit_segmented(ir, out, x, y, &breaks, (yl, yu), square, tag);
                }
                let seg_dx = (xu - xl) / n as f64;
                let gap = if square {
                    seg_dx * seg_dx / 4.0
                } else {
                    seg_dx * (yu - yl) / 4.0
                };
                ir.spatial.push(SpatialAtom {
                    out,
                    x,
                    y,
                    tag,
                    gap_estimate: gap,
                });
            }
            other => keep.push(other),
        }
    }

    ir.atoms = keep;
    result
}

/// Four envelope rows of `w = x·y` over a box. With `scale = Some(λ)` the
/// constant corner terms are multiplied onto the selector (segmented form);
/// the rows then pin `w = 0` when the selector is off.
#[allow(clippy::too_many_arguments)]
fn emit_envelope(
    ir: &mut ProblemIR,
    w: VarId,
    x: VarId,
    y: VarId,
    (xl, xu): (f64, f64),
    (yl, yu): (f64, f64),
    selector: Option<VarId>,
    tag: Tag,
) {
    let mut row = |wc: f64, xc: f64, yc: f64, corner: f64, rel: Rel| {
        let mut terms = vec![(w, wc)];
        push_term(&mut terms, x, xc);
        push_term(&mut terms, y, yc);
        match selector {
            Some(s) => {
                push_term(&mut terms, s, corner);
                ir.add_con(terms, rel, 0.0, tag);
            }
            None => ir.add_con(terms, rel, -corner, tag),
        }
    };
    // w >= xl·y + yl·x − xl·yl ; w >= xu·y + yu·x − xu·yu
    row(1.0, -yl, -xl, xl * yl, Rel::Ge);
    row(1.0, -yu, -xu, xu * yu, Rel::Ge);
    // w <= xu·y + yl·x − xu·yl ; w <= xl·y + yu·x − xl·yu
    row(1.0, -yl, -xu, xu * yl, Rel::Le);
    row(1.0, -yu, -xl, xl * yu, Rel::Le);
}

/// Merges coefficients when `x == y` (square terms).
fn push_term(terms: &mut Vec<(VarId, f64)>, v: VarId, c: f64) {
    if c == 0.0 {
        return;
    }
    if let Some(entry) = terms.iter_mut().find(|(id, _)| *id == v) {
        entry.1 += c;
    } else {
        terms.push((v, c));
    }
}

/// Multiple-choice piecewise envelope: one-hot segment selectors, split
/// copies of `x` (and `y` unless squaring), per-segment envelopes on the
/// split copies, and recomposition rows.
fn emit_segmented(
    ir: &mut ProblemIR,
    w: VarId,
    x: VarId,
    y: VarId,
    breaks: &[f64],
    (yl, yu): (f64, f64),
    square: bool,
    tag: Tag,
) {
    let base = ir.vars[w.index()].name.clone();
    let n = breaks.len() - 1;

    let mut selectors = Vec::with_capacity(n);
    let mut x_parts = Vec::with_capacity(n);
    let mut y_parts = Vec::with_capacity(n);
    let mut w_parts = Vec::with_capacity(n);
    for k in 0..n {
        let (sl, su) = (breaks[k], breaks[k + 1]);
        let (syl, syu) = if square { (sl, su) } else { (yl, yu) };
        let lambda = ir.add_binary(format!("seg{k}({base})"));
        let xs = ir.add_var(
            format!("seg{k}_x({base})"),
            sl.min(0.0),
            su.max(0.0),
            VarKind::Continuous,
        );
        let ys = if square {
            xs
        } else {
            ir.add_var(
                format!("seg{k}_y({base})"),
                syl.min(0.0),
                syu.max(0.0),
                VarKind::Continuous,
            )
        };
        let (pl, pu) = interval::mul_interval(sl, su, syl, syu);
        let ws = ir.add_var(
            format!("seg{k}_w({base})"),
            pl.min(0.0),
            pu.max(0.0),
            VarKind::Continuous,
        );

        // selector gates the split variables' boxes
        ir.add_con(vec![(xs, 1.0), (lambda, -su)], Rel::Le, 0.0, tag);
        ir.add_con(vec![(xs, 1.0), (lambda, -sl)], Rel::Ge, 0.0, tag);
        if !square {
            ir.add_con(vec![(ys, 1.0), (lambda, -syu)], Rel::Le, 0.0, tag);
            ir.add_con(vec![(ys, 1.0), (lambda, -syl)], Rel::Ge, 0.0, tag);
        }
        emit_envelope(ir, ws, xs, ys, (sl, su), (syl, syu), Some(lambda), tag);

        selectors.push(lambda);
        x_parts.push(xs);
        y_parts.push(ys);
        w_parts.push(ws);
    }

    // exactly one active segment; variables recompose
    ir.add_con(
        selectors.iter().map(|&s| (s, 1.0)).collect(),
        Rel::Eq,
        1.0,
        tag,
    );
    let mut xr: Vec<(VarId, f64)> = vec![(x, 1.0)];
    for &xs in &x_parts {
        xr.push((xs, -1.0));
    }
    ir.add_con(xr, Rel::Eq, 0.0, tag);
    if !square {
        let mut yr: Vec<(VarId, f64)> = vec![(y, 1.0)];
        for &ys in &y_parts {
            yr.push((ys, -1.0));
        }
        ir.add_con(yr, Rel::Eq, 0.0, tag);
    }
    let mut wr: Vec<(VarId, f64)> = vec![(w, 1.0)];
    for &ws in &w_parts {
        wr.push((ws, -1.0));
    }
    ir.add_con(wr, Rel::Eq, 0.0, tag);
}

/// Adds a refined two-segment envelope for one retained bilinear term,
/// split at `split` on its first factor's axis. The original envelope rows
/// stay (they remain valid); the refined rows tighten the relaxation.
pub fn refine_envelope(ir: &mut ProblemIR, spatial_idx: usize, split: f64) {
    let atom = ir.spatial[spatial_idx].clone();
    let (xl, xu) = ir.bounds(atom.x);
    let (yl, yu) = ir.bounds(atom.y);
    if !(xl.is_finite() && xu.is_finite() && yl.is_finite() && yu.is_finite()) {
        return;
    }
    let split = split.clamp(xl, xu);
    if split <= xl || split >= xu {
        return;
    }
    let breaks = [xl, split, xu];
    emit_segmented(
        ir,
        atom.out,
        atom.x,
        atom.y,
        &breaks,
        (yl, yu),
        atom.x == atom.y,
        atom.tag,
    );
    let half = 0.5 * (xu - xl);
    ir.spatial[spatial_idx].gap_estimate = if atom.x == atom.y {
        half * half / 4.0
    } else {
        half * (yu - yl) / 4.0
    };
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square_relaxation(n: usize) -> (ProblemIR, VarId, VarId) {
        let mut ir = ProblemIR::new();
        let x = ir.add_var("x", 0.0, 1.0, VarKind::Continuous);
        let w = ir.add_var("w", -10.0, 10.0, VarKind::Continuous);
        ir.atoms.push(Atom::Bilinear {
            out: w,
            x,
            y: x,
            tag: Tag::Free,
        });
        let opts = McCormickOptions::uniform(n);
        mccormick_pass(&mut ir, &opts).unwrap();
        (ir, x, w)
    }

    /// Minimum feasible `w` at a fixed `x` for the square relaxation, by
    /// enumerating segment activations.
    fn w_min_at(ir: &ProblemIR, x: VarId, _w: VarId, xv: f64) -> f64 {
        let selectors: Vec<VarId> = ir
            .vars
            .iter()
            .enumerate()
            .filter(|(_, v)| v.kind == VarKind::Binary)
            .map(|(i, _)| VarId(i as u32))
            .collect();
        let n = selectors.len().max(1);
        let mut best = f64::INFINITY;
        for active in 0..n {
            // assign split variables for this activation, then scan rows for
            // the implied lower bound on w
            let mut assign = alloc::vec![0.0; ir.num_vars()];
            assign[x.index()] = xv;
            if !selectors.is_empty() {
                // split x copies are named seg{k}_x(..)
                let seg_lo = active as f64 / n as f64;
                let seg_hi = (active + 1) as f64 / n as f64;
                if xv < seg_lo - 1e-12 || xv > seg_hi + 1e-12 {
                    continue;
                }
                assign[selectors[active].index()] = 1.0;
                for (i, v) in ir.vars.iter().enumerate() {
                    if v.name == alloc::format!("seg{active}_x(w)") {
                        assign[i] = xv;
                    }
                }
            }
            // lower bound on the (single) w-part active, plus recomposition
            let mut lo = f64::NEG_INFINITY;
            for con in &ir.cons {
                // rows of the form  a_w·w_part + Σ a_i v_i  >= / <= rhs
                let w_targets: Vec<usize> = con
                    .terms
                    .iter()
                    .filter(|(v, _)| {
                        let name = &ir.vars[v.index()].name;
                        name == "w" || name.starts_with(&alloc::format!("seg{active}_w"))
                    })
                    .map(|(v, _)| v.index())
                    .collect();
                if w_targets.is_empty() {
                    continue;
                }
                let coef: f64 = con
                    .terms
                    .iter()
                    .filter(|(v, _)| w_targets.contains(&v.index()))
                    .map(|(_, c)| *c)
                    .sum();
                if coef == 0.0 {
                    continue;
                }
                let rest: f64 = con
                    .terms
                    .iter()
                    .filter(|(v, _)| !w_targets.contains(&v.index()))
                    .map(|(v, c)| c * assign[v.index()])
                    .sum();
                let bound = (con.rhs - rest) / coef;
                match (con.rel, coef > 0.0) {
                    (Rel::Ge, true) | (Rel::Le, false) => lo = lo.max(bound),
                    _ => {}
                }
            }
            best = best.min(lo);
        }
        best
    }

    #[test]
    fn corner_is_exact() {
        let mut ir = ProblemIR::new();
        let x = ir.add_var("x", 0.0, 1.0, VarKind::Continuous);
        let y = ir.add_var("y", 0.0, 1.0, VarKind::Continuous);
        let w = ir.add_var("w", -10.0, 10.0, VarKind::Continuous);
        ir.atoms.push(Atom::Bilinear {
            out: w,
            x,
            y,
            tag: Tag::Free,
        });
        mccormick_pass(&mut ir, &McCormickOptions::uniform(1)).unwrap();
        // at the (1,1) corner the envelope pins w to 1
        let mut a = alloc::vec![0.0; ir.num_vars()];
        a[x.index()] = 1.0;
        a[y.index()] = 1.0;
        a[w.index()] = 1.0;
        assert!(ir.cons.iter().all(|c| c.violation(&a) < 1e-12));
        a[w.index()] = 0.9;
        assert!(ir.cons.iter().any(|c| c.violation(&a) > 0.05));
        a[w.index()] = 1.1;
        assert!(ir.cons.iter().any(|c| c.violation(&a) > 0.05));
    }

    #[test]
    fn envelope_never_cuts_true_products() {
        // relaxation soundness on a box straddling zero
        let mut ir = ProblemIR::new();
        let x = ir.add_var("x", -1.0, 2.0, VarKind::Continuous);
        let y = ir.add_var("y", 0.5, 3.0, VarKind::Continuous);
        let w = ir.add_var("w", -100.0, 100.0, VarKind::Continuous);
        ir.atoms.push(Atom::Bilinear {
            out: w,
            x,
            y,
            tag: Tag::Free,
        });
        mccormick_pass(&mut ir, &McCormickOptions::uniform(1)).unwrap();
        let mut seed = 0xdeadbeefcafef00du64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..500 {
            let xv = -1.0 + 3.0 * next();
            let yv = 0.5 + 2.5 * next();
            let mut a = alloc::vec![0.0; ir.num_vars()];
            a[x.index()] = xv;
            a[y.index()] = yv;
            a[w.index()] = xv * yv;
            assert!(ir.cons.iter().all(|c| c.violation(&a) < 1e-9));
        }
    }

    #[test]
    fn single_segment_square_gap_peaks_at_quarter() {
        let (ir, x, w) = square_relaxation(1);
        let mut worst: f64 = 0.0;
        for k in 0..=100 {
            let xv = k as f64 / 100.0;
            let gap = xv * xv - w_min_at(&ir, x, w, xv);
            worst = worst.max(gap);
        }
        assert!((worst - 0.25).abs() < 1e-6, "worst gap {worst}");
    }

    #[test]
    fn four_segments_cut_the_gap_at_least_four_times() {
        let (ir, x, w) = square_relaxation(4);
        let mut worst: f64 = 0.0;
        for k in 0..=400 {
            let xv = k as f64 / 400.0;
            let gap = xv * xv - w_min_at(&ir, x, w, xv);
            worst = worst.max(gap);
        }
        assert!(worst <= 0.25 / 4.0 + 1e-9, "worst gap {worst}");
        // recorded estimate matches the per-segment square gap
        assert!((ir.spatial[0].gap_estimate - (0.25 / 16.0)).abs() < 1e-12);
    }

    #[test]
    fn spatial_metadata_retained() {
        let (ir, _, _) = square_relaxation(2);
        assert_eq!(ir.spatial.len(), 1);
        assert!(ir.atoms.is_empty());
    }
}
