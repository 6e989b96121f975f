//! Linearized branch-flow block for the radial distribution network:
//! nodal active/reactive balances, voltage-drop relations, a reference
//! voltage, and curtailment variables at renewable buses.
//!
//! Reactive loads are constant-folded from the active loads and each bus's
//! power factor. Since the microgrid is off-grid there is no slack bus;
//! inverter-interfaced devices (batteries, renewables) carry bounded
//! reactive-support variables so the reactive balance is satisfiable, while
//! the hydrogen-ammonia plant itself runs at unity power factor.

use alloc::vec;
use alloc::vec::Vec;

use crate::ir::{ProblemIR, Rel, Tag};
use crate::model::{
    ExogenousForecast, Fragment, HorizonVars, ModelError, NetworkTopology, SystemConfig,
};

pub fn build_network_block(
    ir: &mut ProblemIR,
    vars: &HorizonVars,
    topo: &NetworkTopology,
    forecast: &ExogenousForecast,
    cfg: &SystemConfig,
) -> Result<Fragment, ModelError> {
    topo.validate()?;
    forecast.validate(topo, vars.horizon)?;
    let con_start = ir.cons.len();
    let atom_start = ir.atoms.len();

    let hap_bus = topo.hap_buses[0];

    for l in 0..vars.horizon {
        let sv = &vars.steps[l];

        // curtailment limited by local renewable availability; reactive
        // support limited by what the local inverters could carry
        for (ci, &bus) in vars.curtail_buses.iter().enumerate() {
            let avail = forecast.renewable_at(topo, bus, l);
            ir.set_bounds(sv.curtail[ci], 0.0, avail);
        }
        for (qi, &bus) in vars.q_support_buses.iter().enumerate() {
            let mut rating = forecast.renewable_at(topo, bus, l);
            for &bb in &topo.battery_buses {
                if bb == bus {
                    rating += cfg.batt_power_cap;
                }
            }
            ir.set_bounds(sv.q_support[qi], -rating, rating);
        }

        for (j, bus) in topo.buses.iter().enumerate() {
            let mut p_terms: Vec<_> = Vec::new();
            let mut q_terms: Vec<_> = Vec::new();
            for (k, line) in topo.lines.iter().enumerate() {
                if line.to == bus.id {
                    p_terms.push((sv.line_p[k], 1.0));
                    q_terms.push((sv.line_q[k], 1.0));
                } else if line.from == bus.id {
                    p_terms.push((sv.line_p[k], -1.0));
                    q_terms.push((sv.line_q[k], -1.0));
                }
            }
            // battery injections
            for (b, &bb) in topo.battery_buses.iter().enumerate() {
                if bb == bus.id {
                    p_terms.push((sv.batt_discharge[b], 1.0));
                    p_terms.push((sv.batt_charge[b], -1.0));
                }
            }
            // plant load
            if bus.id == hap_bus {
                p_terms.push((sv.hap_power, -1.0));
            }
            // curtailment
            if let Some(ci) = vars.curtail_buses.iter().position(|&b| b == bus.id) {
                p_terms.push((sv.curtail[ci], -1.0));
            }
            // renewable output and load enter as constants
            let renew = forecast.renewable_at(topo, bus.id, l);
            let load = forecast.bus_load[j][l];
            ir.add_con(p_terms, Rel::Eq, load - renew, Tag::NodalBalanceP);

            if let Some(qi) = vars.q_support_buses.iter().position(|&b| b == bus.id) {
                q_terms.push((sv.q_support[qi], 1.0));
            }
            let q_load = NetworkTopology::reactive_load(load, bus.power_factor);
            ir.add_con(q_terms, Rel::Eq, q_load, Tag::NodalBalanceQ);
        }

        // voltage drop along each line and the reference voltage
        for (k, line) in topo.lines.iter().enumerate() {
            let from = topo.bus_index(line.from).expect("validated");
            let to = topo.bus_index(line.to).expect("validated");
            let scale = 1.0 / (topo.u0 * topo.s_base_kw);
            ir.add_con(
                vec![
                    (sv.voltage[from], 1.0),
                    (sv.voltage[to], -1.0),
                    (sv.line_p[k], -line.r * scale),
                    (sv.line_q[k], -line.x * scale),
                ],
                Rel::Eq,
                0.0,
                Tag::VoltageDrop,
            );
        }
        ir.add_con(vec![(sv.voltage[0], 1.0)], Rel::Eq, topo.u0, Tag::VoltageRef);
    }

    Ok(Fragment {
        cons: con_start..ir.cons.len(),
        atoms: atom_start..ir.atoms.len(),
    })
}
