//! Interval arithmetic used to derive bounds for reformulation auxiliaries.

use crate::ir::{Atom, ProblemIR};

/// Range of `x·y` over the box `[xl,xu] × [yl,yu]`.
pub fn mul_interval(xl: f64, xu: f64, yl: f64, yu: f64) -> (f64, f64) {
    let candidates = [xl * yl, xl * yu, xu * yl, xu * yu];
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for c in candidates {
        // 0·inf produces NaN; such corners are unattainable limits and any
        // finite partner bound dominates, so skip them
        if c.is_nan() {
            continue;
        }
        lo = lo.min(c);
        hi = hi.max(c);
    }
    (lo, hi)
}

/// Range of `x²` over `[xl, xu]`.
pub fn square_interval(xl: f64, xu: f64) -> (f64, f64) {
    let hi = (xl * xl).max(xu * xu);
    let lo = if xl <= 0.0 && xu >= 0.0 {
        0.0
    } else {
        (xl * xl).min(xu * xu)
    };
    (lo, hi)
}

/// Tightens the declared bounds of every bilinear output variable to the
/// interval implied by its factors, repeated until a fixed point (bounded by
/// a few sweeps; chains here are short).
pub fn propagate_bilinear_bounds(ir: &mut ProblemIR) {
    for _ in 0..4 {
        let mut changed = false;
        let atoms: alloc::vec::Vec<_> = ir
            .atoms
            .iter()
            .filter_map(|a| match a {
                Atom::Bilinear { out, x, y, .. } => Some((*out, *x, *y)),
                _ => None,
            })
            .collect();
        for (out, x, y) in atoms {
            let (xl, xu) = ir.bounds(x);
            let (yl, yu) = ir.bounds(y);
            let (pl, pu) = if x == y {
                square_interval(xl, xu)
            } else {
                mul_interval(xl, xu, yl, yu)
            };
            let (ol, ou) = ir.bounds(out);
            let nl = ol.max(pl);
            let nu = ou.min(pu);
            if nl > ol || nu < ou {
                ir.set_bounds(out, nl, nu.max(nl));
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
}

extern crate alloc;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_products() {
        assert_eq!(mul_interval(0.0, 2.0, -1.0, 3.0), (-2.0, 6.0));
        assert_eq!(mul_interval(-2.0, -1.0, -3.0, -2.0), (2.0, 6.0));
        assert_eq!(square_interval(-2.0, 1.0), (0.0, 4.0));
        assert_eq!(square_interval(1.0, 3.0), (1.0, 9.0));
        // an unbounded factor still yields the attainable side
        let (lo, hi) = mul_interval(0.0, f64::INFINITY, 0.0, 2.0);
        assert_eq!(lo, 0.0);
        assert_eq!(hi, f64::INFINITY);
    }
}
