//! Constraint block of the hydrogen-ammonia dual-fuel gas turbine.
//!
//! The H₂ molar blend ratio, the quintic combustion-efficiency curve, and
//! the efficiency × heating-value × fuel-mass power product are emitted as
//! tagged atoms; a commitment binary gates the blend-denominator reciprocal
//! so an idle turbine stays well-posed.

use alloc::vec;

use crate::ir::{Atom, ProblemIR, Rel, Tag};
use crate::model::{Fragment, HorizonVars, ModelError, SystemConfig};

pub fn build_dgt_block(
    ir: &mut ProblemIR,
    vars: &HorizonVars,
    cfg: &SystemConfig,
) -> Result<Fragment, ModelError> {
    cfg.validate()?;
    if cfg.dgt_eff_coeffs.iter().any(|c| !c.is_finite())
        || !cfg.dgt_lhv_intercept.is_finite()
        || !cfg.dgt_lhv_slope.is_finite()
    {
        return Err(ModelError::InvalidConfig(
            "turbine curve coefficients must be finite",
        ));
    }
    let con_start = ir.cons.len();
    let atom_start = ir.atoms.len();

    for l in 0..vars.horizon {
        let sv = &vars.steps[l];

        // blend denominator D = M_NH3 m_H2 + M_H2 m_NH3
        ir.add_con(
            vec![
                (sv.dgt_denom, 1.0),
                (sv.dgt_h2, -cfg.molar_mass_nh3),
                (sv.dgt_nh3, -cfg.molar_mass_h2),
            ],
            Rel::Eq,
            0.0,
            Tag::DgtBlendDenominator,
        );

        // reciprocal of the denominator, active while committed; the
        // committed fuel minimum keeps the denominator strictly positive
        ir.atoms.push(Atom::Reciprocal {
            out: sv.dgt_denom_inv,
            den: sv.dgt_denom,
            gate: Some((sv.dgt_on, cfg.molar_mass_h2 * cfg.dgt_min_fuel_on)),
            tag: Tag::DgtBlendRecip,
        });

        // blend ratio r = M_NH3 · (m_H2 · 1/D)
        ir.atoms.push(Atom::Bilinear {
            out: sv.dgt_h2_scaled,
            x: sv.dgt_h2,
            y: sv.dgt_denom_inv,
            tag: Tag::DgtBlendRatio,
        });
        ir.add_con(
            vec![(sv.dgt_blend, 1.0), (sv.dgt_h2_scaled, -cfg.molar_mass_nh3)],
            Rel::Eq,
            0.0,
            Tag::DgtBlendRatio,
        );

        // combustion-efficiency curve over the blend ratio
        ir.atoms.push(Atom::Polynomial {
            out: sv.dgt_eta_ce,
            x: sv.dgt_blend,
            coeffs: cfg.dgt_eff_poly().to_vec(),
            tag: Tag::DgtEfficiencyCurve,
        });

        // blend bound, forced to zero while idle
        ir.add_con(
            vec![(sv.dgt_blend, 1.0), (sv.dgt_on, -cfg.dgt_blend_max)],
            Rel::Le,
            0.0,
            Tag::DgtBlendBound,
        );

        // heating value of the mix
        ir.add_con(
            vec![(sv.dgt_lhv, 1.0), (sv.dgt_blend, -cfg.dgt_lhv_slope)],
            Rel::Eq,
            cfg.dgt_lhv_intercept,
            Tag::DgtHeatingValue,
        );

        // total fuel and the electrical output product
        ir.add_con(
            vec![
                (sv.dgt_fuel_total, 1.0),
                (sv.dgt_h2, -1.0),
                (sv.dgt_nh3, -1.0),
            ],
            Rel::Eq,
            0.0,
            Tag::DgtPowerProduct,
        );
        ir.atoms.push(Atom::Product {
            out: sv.dgt_power,
            factors: vec![sv.dgt_eta_ce, sv.dgt_lhv, sv.dgt_fuel_total],
            scale: cfg.dgt_efficiency / cfg.dt_hours,
            tag: Tag::DgtPowerProduct,
        });

        // commitment window on the fuel mass: zero while idle, at least the
        // stable-flame minimum while on
        ir.add_con(
            vec![(sv.dgt_fuel_total, 1.0), (sv.dgt_on, -cfg.dgt_fuel_cap)],
            Rel::Le,
            0.0,
            Tag::DgtFuelGate,
        );
        ir.add_con(
            vec![(sv.dgt_fuel_total, 1.0), (sv.dgt_on, -cfg.dgt_min_fuel_on)],
            Rel::Ge,
            0.0,
            Tag::DgtFuelGate,
        );
    }

    Ok(Fragment {
        cons: con_start..ir.cons.len(),
        atoms: atom_start..ir.atoms.len(),
    })
}
