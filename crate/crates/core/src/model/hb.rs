//! Constraint block of the multi-mode ammonia synthesis train.
//!
//! Emits the stoichiometric material balance, ramping and dwell rules, the
//! one-hot mode structure with per-mode load definitions, and the feed-ratio
//! relations. The mode-selected total load and the inverse feed ratio are
//! emitted as tagged atoms for the reformulation passes.

use alloc::vec;
use alloc::vec::Vec;

use crate::ir::{Atom, ProblemIR, Rel, Tag};
use crate::model::{Fragment, HorizonVars, ModelError, SystemConfig, SystemState};

/// Appends the synthesis block for all steps. `state` supplies the previous
/// load for the ramp rows and the adjustment history for the dwell windows.
pub fn build_hb_block(
    ir: &mut ProblemIR,
    vars: &HorizonVars,
    state: &SystemState,
    cfg: &SystemConfig,
) -> Result<Fragment, ModelError> {
    cfg.validate()?;
    state.validate_physical(cfg)?;
    let horizon = vars.horizon;
    if horizon == 0 {
        return Err(ModelError::InvalidConfig("horizon must be at least one step"));
    }
    let con_start = ir.cons.len();
    let atom_start = ir.atoms.len();

    let tau = cfg.hb_dwell_steps;
    let cap = cfg.hb_power_cap;
    let load_lo = cfg.hb_load_min * cap;
    let yield_per_kg = cfg.nh3_yield_per_kg_h2();
    let mode1_coeff = cfg.hb_full_ratio_coeff();
    let mass_ratio = cfg.molar_mass_n2 / cfg.molar_mass_h2;
    let feed_cap = cfg.hb_feed_cap();

    // adjustment history, oldest first, padded to the dwell window with
    // "no adjustment" (steady load before the start of the run)
    let mut hist = vec![false; tau];
    for (k, &v) in state.hb_adjust_history.iter().rev().enumerate() {
        if k < tau {
            hist[tau - 1 - k] = v;
        }
    }

    for l in 0..horizon {
        let sv = &vars.steps[l];
        let [m1, m2, m3] = sv.hb_mode;

        // stoichiometric NH3 production from the H2 feed
        ir.add_con(
            vec![(sv.nh3_production, 1.0), (sv.h2_to_hb, -yield_per_kg)],
            Rel::Eq,
            0.0,
            Tag::HbMaterialBalance,
        );

        // ramping, gated by the adjustment indicator
        let up = cfg.ramp_up * cap;
        let down = cfg.ramp_down * cap;
        if l == 0 {
            ir.add_con(
                vec![(sv.hb_power, 1.0), (sv.hb_adjust, -up)],
                Rel::Le,
                state.hb_power_prev,
                Tag::HbRamp,
            );
            ir.add_con(
                vec![(sv.hb_power, -1.0), (sv.hb_adjust, -down)],
                Rel::Le,
                -state.hb_power_prev,
                Tag::HbRamp,
            );
        } else {
            let pv = vars.steps[l - 1].hb_power;
            ir.add_con(
                vec![(sv.hb_power, 1.0), (pv, -1.0), (sv.hb_adjust, -up)],
                Rel::Le,
                0.0,
                Tag::HbRamp,
            );
            ir.add_con(
                vec![(sv.hb_power, -1.0), (pv, 1.0), (sv.hb_adjust, -down)],
                Rel::Le,
                0.0,
                Tag::HbRamp,
            );
        }

        // dwell rule: at most one adjustment in any (τ+1)-step window
        let window_lo = l as isize - tau as isize;
        let mut terms: Vec<_> = Vec::new();
        let mut hist_ones = 0usize;
        for k in window_lo..=(l as isize) {
            if k < 0 {
                let idx = (tau as isize + k) as usize;
                if hist[idx] {
                    hist_ones += 1;
                }
            } else {
                terms.push((vars.steps[k as usize].hb_adjust, 1.0));
            }
        }
        ir.add_con(
            terms,
            Rel::Le,
            1.0 - hist_ones as f64,
            Tag::HbChangeFreq,
        );

        // one mode at a time
        ir.add_con(
            vec![(m1, 1.0), (m2, 1.0), (m3, 1.0)],
            Rel::Eq,
            1.0,
            Tag::HbModeOneHot,
        );

        // total load selects the active mode's load (linearized later)
        ir.atoms.push(Atom::OneHotSelect {
            out: sv.hb_power,
            arms: vec![
                (m1, sv.hb_mode_power[0]),
                (m2, sv.hb_mode_power[1]),
                (m3, sv.hb_mode_power[2]),
            ],
            tag: Tag::HbModePowerSelect,
        });

        // inverse feed ratio (compiled to a bilinear link by the fractional
        // pass, which also derives its bounds from the ratio box)
        ir.atoms.push(Atom::Reciprocal {
            out: sv.hb_ratio_inv,
            den: sv.hb_ratio,
            gate: None,
            tag: Tag::HbFeedRatio,
        });

        // full-ratio load definition and its committed range
        ir.add_con(
            vec![(sv.hb_mode_power[0], 1.0), (sv.h2_to_hb, -mode1_coeff)],
            Rel::Eq,
            0.0,
            Tag::HbMode1Power,
        );
        ir.add_con(
            vec![(sv.hb_mode_power[0], 1.0), (m1, -load_lo)],
            Rel::Ge,
            0.0,
            Tag::HbMode1Range,
        );

        // reduced-ratio load via y = z · h2_to_hb
        ir.atoms.push(Atom::Bilinear {
            out: sv.hb_feed_scaled,
            x: sv.hb_ratio_inv,
            y: sv.h2_to_hb,
            tag: Tag::HbMode2Power,
        });
        ir.add_con(
            vec![
                (sv.hb_mode_power[1], 1.0),
                (sv.hb_feed_scaled, -mass_ratio * cfg.compressor_specific_power),
                (
                    sv.h2_to_hb,
                    -(cfg.hb_specific_power + cfg.compressor_specific_power),
                ),
            ],
            Rel::Eq,
            0.0,
            Tag::HbMode2Power,
        );
        ir.add_con(
            vec![(sv.hb_mode_power[1], 1.0), (m2, -load_lo)],
            Rel::Ge,
            0.0,
            Tag::HbMode2Range,
        );

        // full-ratio mode pins the ratio at 3
        ir.add_con(
            vec![(sv.hb_ratio, 1.0), (m1, -(3.0 - cfg.hb_ratio_min))],
            Rel::Ge,
            cfg.hb_ratio_min,
            Tag::HbMode2RatioRange,
        );

        // nitrogen feed follows the inverse ratio
        ir.add_con(
            vec![(sv.n2_to_hb, 1.0), (sv.hb_feed_scaled, -mass_ratio)],
            Rel::Eq,
            0.0,
            Tag::HbNitrogenFeed,
        );

        // no hydrogen intake while shut down
        ir.add_con(
            vec![(sv.h2_to_hb, 1.0), (m1, -feed_cap), (m2, -feed_cap)],
            Rel::Le,
            0.0,
            Tag::HbFeedGate,
        );
    }

    Ok(Fragment {
        cons: con_start..ir.cons.len(),
        atoms: atom_start..ir.atoms.len(),
    })
}

/// Closed-form synthesis load at the stoichiometric ratio, kW.
pub fn mode1_power(cfg: &SystemConfig, h2_feed: f64) -> f64 {
    cfg.hb_full_ratio_coeff() * h2_feed
}

/// Closed-form synthesis load at feed ratio `r`, kW.
pub fn mode2_power(cfg: &SystemConfig, h2_feed: f64, r: f64) -> f64 {
    cfg.hb_reduced_ratio_coeff(1.0 / r) * h2_feed
}
