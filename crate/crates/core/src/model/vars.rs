//! Declaration of every decision variable of one scheduling horizon.
//!
//! Blocks cross-reference each other's variables (the H₂ balance couples the
//! electrolyzer, synthesis feed, and turbine fuel), so all variables are
//! declared up front in a [`HorizonVars`] registry and the block builders
//! only append constraints.

use alloc::format;
use alloc::vec::Vec;

use crate::ir::{ProblemIR, VarId, VarKind};
use crate::model::{NetworkTopology, SystemConfig};

/// Variables of one scheduling step.
#[derive(Clone, Debug)]
pub struct StepVars {
    // ammonia synthesis
    pub hb_power: VarId,
    /// Per-mode load `P^(i)`; index 0 = full-ratio, 1 = reduced-ratio,
    /// 2 = off (fixed to zero).
    pub hb_mode_power: [VarId; 3],
    /// One-hot mode indicators, same order.
    pub hb_mode: [VarId; 3],
    /// Power adjustment indicator `v`.
    pub hb_adjust: VarId,
    /// H₂:N₂ feed molar ratio `r`.
    pub hb_ratio: VarId,
    /// Inverse feed ratio `z = 1/r`.
    pub hb_ratio_inv: VarId,
    /// Auxiliary `y = z · h2_to_hb` shared by the reduced-ratio load and the
    /// nitrogen feed relations.
    pub hb_feed_scaled: VarId,
    pub h2_to_hb: VarId,
    pub n2_to_hb: VarId,
    pub nh3_production: VarId,

    // dual-fuel turbine
    pub dgt_h2: VarId,
    pub dgt_nh3: VarId,
    pub dgt_fuel_total: VarId,
    /// Blend denominator `D = M_NH3·m_H2 + M_H2·m_NH3`.
    pub dgt_denom: VarId,
    /// Reciprocal of the blend denominator (active while committed).
    pub dgt_denom_inv: VarId,
    /// Auxiliary `w = dgt_h2 · dgt_denom_inv`.
    pub dgt_h2_scaled: VarId,
    /// H₂ molar blend ratio `r`.
    pub dgt_blend: VarId,
    pub dgt_eta_ce: VarId,
    pub dgt_lhv: VarId,
    pub dgt_power: VarId,
    /// Commitment indicator.
    pub dgt_on: VarId,

    // plant-level power
    pub elz_power: VarId,
    pub psa_power: VarId,
    pub hap_power: VarId,

    // batteries (one entry per battery)
    pub batt_charge: Vec<VarId>,
    pub batt_discharge: Vec<VarId>,
    pub batt_ch_on: Vec<VarId>,
    pub batt_dch_on: Vec<VarId>,
    /// Battery level after this step.
    pub batt_energy_next: Vec<VarId>,

    // gas storage
    /// H₂ level after this step.
    pub h2_level_next: VarId,
    /// One-hot region indicators of `h2_level_next` (index 0 = high band).
    pub h2_region: [VarId; 3],
    /// Band-decomposed levels `m_i` with `h2_level_next = Σ m_i`.
    pub h2_region_level: [VarId; 3],
    /// NH₃ level after this step.
    pub nh3_level_next: VarId,

    // network (indexed like the topology lists)
    pub curtail: Vec<VarId>,
    /// Inverter reactive support, one variable per bus in
    /// [`HorizonVars::q_support_buses`].
    pub q_support: Vec<VarId>,
    pub line_p: Vec<VarId>,
    pub line_q: Vec<VarId>,
    pub voltage: Vec<VarId>,

    // objective transition products with the following step
    pub startup: Option<VarId>,
    pub shutdown: Option<VarId>,
}

/// Registry of all declared variables plus shared index lists.
#[derive(Clone, Debug)]
pub struct HorizonVars {
    pub steps: Vec<StepVars>,
    /// Buses carrying curtailment variables, ascending bus id.
    pub curtail_buses: Vec<usize>,
    /// Buses with inverter-interfaced devices able to source or sink
    /// reactive power (batteries and renewables), ascending bus id.
    pub q_support_buses: Vec<usize>,
    pub batteries: usize,
    pub horizon: usize,
}

/// Declares every variable of an `horizon`-step problem with its box bounds.
/// Auxiliary bounds that depend on reformulation (inverse ratios, lifted
/// monomials, envelope products) are left wide; the passes tighten them.
pub fn declare_variables(
    ir: &mut ProblemIR,
    cfg: &SystemConfig,
    topo: &NetworkTopology,
    horizon: usize,
) -> HorizonVars {
    let curtail_buses = topo.curtailment_buses();
    let mut q_support_buses = curtail_buses.clone();
    for &b in &topo.battery_buses {
        if !q_support_buses.contains(&b) {
            q_support_buses.push(b);
        }
    }
    q_support_buses.sort_unstable();
    let batteries = topo.battery_buses.len();
    let hb_cap = cfg.hb_load_max * cfg.hb_power_cap;
    let feed_cap = cfg.hb_feed_cap();
    let n2_cap = (cfg.psa_power_cap / cfg.psa_specific_power).min(
        cfg.molar_mass_n2 / cfg.molar_mass_h2 * feed_cap
            / if cfg.hb_ratio_min > 0.0 { cfg.hb_ratio_min } else { 1.0 },
    );
    let (eff_lo, eff_hi) = cfg.dgt_eff_range();
    let (lhv_lo, lhv_hi) = cfg.dgt_lhv_range();
    let inf = f64::INFINITY;

    let mut steps = Vec::with_capacity(horizon);
    for l in 0..horizon {
        let c = VarKind::Continuous;
        let hb_power = ir.add_var(format!("hb_power[{l}]"), 0.0, hb_cap, c);
        let hb_mode_power = [
            ir.add_var(format!("hb_mode1_power[{l}]"), 0.0, hb_cap, c),
            ir.add_var(format!("hb_mode2_power[{l}]"), 0.0, hb_cap, c),
            ir.add_var(format!("hb_mode3_power[{l}]"), 0.0, 0.0, c),
        ];
        let hb_mode = [
            ir.add_binary(format!("hb_mode1[{l}]")),
            ir.add_binary(format!("hb_mode2[{l}]")),
            ir.add_binary(format!("hb_mode3[{l}]")),
        ];
        let hb_adjust = ir.add_binary(format!("hb_adjust[{l}]"));
        let hb_ratio = ir.add_var(format!("hb_ratio[{l}]"), cfg.hb_ratio_min, 3.0, c);
        let hb_ratio_inv = ir.add_var(format!("hb_ratio_inv[{l}]"), 0.0, inf, c);
        let hb_feed_scaled = ir.add_var(format!("hb_feed_scaled[{l}]"), 0.0, inf, c);
        let h2_to_hb = ir.add_var(format!("h2_to_hb[{l}]"), 0.0, feed_cap, c);
        let n2_to_hb = ir.add_var(format!("n2_to_hb[{l}]"), 0.0, n2_cap, c);
        let nh3_production = ir.add_var(
            format!("nh3_production[{l}]"),
            0.0,
            cfg.nh3_yield_per_kg_h2() * feed_cap,
            c,
        );

        let dgt_h2 = ir.add_var(format!("dgt_h2[{l}]"), 0.0, cfg.dgt_fuel_cap, c);
        let dgt_nh3 = ir.add_var(format!("dgt_nh3[{l}]"), 0.0, cfg.dgt_fuel_cap, c);
        let dgt_fuel_total = ir.add_var(format!("dgt_fuel_total[{l}]"), 0.0, cfg.dgt_fuel_cap, c);
        let dgt_denom = ir.add_var(
            format!("dgt_denom[{l}]"),
            0.0,
            cfg.molar_mass_nh3 * cfg.dgt_fuel_cap,
            c,
        );
        let dgt_denom_inv = ir.add_var(format!("dgt_denom_inv[{l}]"), 0.0, inf, c);
        let dgt_h2_scaled = ir.add_var(format!("dgt_h2_scaled[{l}]"), 0.0, inf, c);
        let dgt_blend = ir.add_var(format!("dgt_blend[{l}]"), 0.0, cfg.dgt_blend_max, c);
        let dgt_eta_ce = ir.add_var(format!("dgt_eta_ce[{l}]"), eff_lo, eff_hi, c);
        let dgt_lhv = ir.add_var(format!("dgt_lhv[{l}]"), lhv_lo, lhv_hi, c);
        let dgt_power = ir.add_var(format!("dgt_power[{l}]"), 0.0, cfg.dgt_power_cap, c);
        let dgt_on = ir.add_binary(format!("dgt_on[{l}]"));

        let elz_power = ir.add_var(format!("elz_power[{l}]"), 0.0, cfg.elz_power_cap, c);
        let psa_power = ir.add_var(format!("psa_power[{l}]"), 0.0, cfg.psa_power_cap, c);
        let hap_power = ir.add_var(
            format!("hap_power[{l}]"),
            -cfg.dgt_power_cap,
            cfg.elz_power_cap + hb_cap + cfg.psa_power_cap,
            c,
        );

        let mut batt_charge = Vec::with_capacity(batteries);
        let mut batt_discharge = Vec::with_capacity(batteries);
        let mut batt_ch_on = Vec::with_capacity(batteries);
        let mut batt_dch_on = Vec::with_capacity(batteries);
        let mut batt_energy_next = Vec::with_capacity(batteries);
        for b in 0..batteries {
            batt_charge.push(ir.add_var(
                format!("batt_charge[{b}][{l}]"),
                0.0,
                cfg.batt_power_cap,
                c,
            ));
            batt_discharge.push(ir.add_var(
                format!("batt_discharge[{b}][{l}]"),
                0.0,
                cfg.batt_power_cap,
                c,
            ));
            batt_ch_on.push(ir.add_binary(format!("batt_ch_on[{b}][{l}]")));
            batt_dch_on.push(ir.add_binary(format!("batt_dch_on[{b}][{l}]")));
            batt_energy_next.push(ir.add_var(
                format!("batt_energy[{b}][{l}]"),
                0.0,
                cfg.batt_energy_cap,
                c,
            ));
        }

        let h2_level_next = ir.add_var(format!("h2_level[{l}]"), 0.0, cfg.h2_storage_cap, c);
        let h2_region = [
            ir.add_binary(format!("h2_region1[{l}]")),
            ir.add_binary(format!("h2_region2[{l}]")),
            ir.add_binary(format!("h2_region3[{l}]")),
        ];
        let h2_region_level = [
            ir.add_var(format!("h2_region1_level[{l}]"), 0.0, cfg.h2_storage_cap, c),
            ir.add_var(format!("h2_region2_level[{l}]"), 0.0, cfg.h2_storage_cap, c),
            ir.add_var(format!("h2_region3_level[{l}]"), 0.0, cfg.h2_storage_cap, c),
        ];
        let nh3_level_next = ir.add_var(format!("nh3_level[{l}]"), 0.0, cfg.nh3_storage_cap, c);

        let curtail = curtail_buses
            .iter()
            .map(|&b| ir.add_var(format!("curtail[bus{b}][{l}]"), 0.0, inf, c))
            .collect();
        let q_support = q_support_buses
            .iter()
            .map(|&b| ir.add_var(format!("q_support[bus{b}][{l}]"), -inf, inf, c))
            .collect();
        let line_p = topo
            .lines
            .iter()
            .enumerate()
            .map(|(k, line)| {
                ir.add_var(format!("line_p[{k}][{l}]"), -line.p_max, line.p_max, c)
            })
            .collect();
        let line_q = topo
            .lines
            .iter()
            .enumerate()
            .map(|(k, line)| {
                ir.add_var(format!("line_q[{k}][{l}]"), -line.q_max, line.q_max, c)
            })
            .collect();
        let voltage = topo
            .buses
            .iter()
            .map(|bus| ir.add_var(format!("voltage[bus{}][{l}]", bus.id), bus.u_min, bus.u_max, c))
            .collect();

        let (startup, shutdown) = if l + 1 < horizon {
            (
                Some(ir.add_var(format!("hb_startup[{l}]"), 0.0, 1.0, c)),
                Some(ir.add_var(format!("hb_shutdown[{l}]"), 0.0, 1.0, c)),
            )
        } else {
            (None, None)
        };

        steps.push(StepVars {
            hb_power,
            hb_mode_power,
            hb_mode,
            hb_adjust,
            hb_ratio,
            hb_ratio_inv,
            hb_feed_scaled,
            h2_to_hb,
            n2_to_hb,
            nh3_production,
            dgt_h2,
            dgt_nh3,
            dgt_fuel_total,
            dgt_denom,
            dgt_denom_inv,
            dgt_h2_scaled,
            dgt_blend,
            dgt_eta_ce,
            dgt_lhv,
            dgt_power,
            dgt_on,
            elz_power,
            psa_power,
            hap_power,
            batt_charge,
            batt_discharge,
            batt_ch_on,
            batt_dch_on,
            batt_energy_next,
            h2_level_next,
            h2_region,
            h2_region_level,
            nh3_level_next,
            curtail,
            q_support,
            line_p,
            line_q,
            voltage,
            startup,
            shutdown,
        });
    }

    HorizonVars {
        steps,
        curtail_buses,
        q_support_buses,
        batteries,
        horizon,
    }
}
