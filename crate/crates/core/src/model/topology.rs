//! Radial distribution network description and device placement.

use alloc::vec;
use alloc::vec::Vec;

use crate::math;
use crate::model::ModelError;

#[derive(Clone, Debug)]
pub struct Bus {
    /// External bus number (1-based in the bundled fixtures).
    pub id: usize,
    /// Voltage magnitude bounds, per unit.
    pub u_min: f64,
    pub u_max: f64,
    /// Load power factor cos φ at this bus.
    pub power_factor: f64,
}

#[derive(Clone, Debug)]
pub struct Line {
    pub from: usize,
    pub to: usize,
    /// Resistance / reactance, per unit on the network base.
    pub r: f64,
    pub x: f64,
    /// Flow limits, kW / kvar.
    pub p_max: f64,
    pub q_max: f64,
}

/// Bus/line graph with device placements. The first bus is the voltage
/// reference.
#[derive(Clone, Debug)]
pub struct NetworkTopology {
    pub buses: Vec<Bus>,
    pub lines: Vec<Line>,
    /// Reference voltage, per unit.
    pub u0: f64,
    /// Power base converting kW to per unit in the voltage-drop relation.
    pub s_base_kw: f64,
    /// Bus of each wind turbine / PV plant / battery / hydrogen-ammonia
    /// plant (one entry per device).
    pub wt_buses: Vec<usize>,
    pub pv_buses: Vec<usize>,
    pub battery_buses: Vec<usize>,
    pub hap_buses: Vec<usize>,
}

impl NetworkTopology {
    /// Position of bus `id` in `buses`.
    pub fn bus_index(&self, id: usize) -> Option<usize> {
        self.buses.iter().position(|b| b.id == id)
    }

    pub fn num_buses(&self) -> usize {
        self.buses.len()
    }

    /// Buses carrying renewable generation, in bus order: the curtailment
    /// variables attach here.
    pub fn curtailment_buses(&self) -> Vec<usize> {
        let mut out: Vec<usize> = Vec::new();
        for &b in self.wt_buses.iter().chain(self.pv_buses.iter()) {
            if !out.contains(&b) {
                out.push(b);
            }
        }
        out.sort_unstable();
        out
    }

    /// Reactive load implied by an active load at power factor `pf`
    /// (Q = P·tan(cos⁻¹ pf)).
    pub fn reactive_load(p: f64, pf: f64) -> f64 {
        let pf = pf.clamp(-1.0, 1.0);
        p * math::tan(math::acos(pf))
    }

    /// Checks the graph is a connected radial tree, device placements refer
    /// to existing buses, and electrical parameters are sane.
    pub fn validate(&self) -> Result<(), ModelError> {
        let n = self.buses.len();
        if n == 0 {
            return Err(ModelError::Topology("network has no buses"));
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if self.buses[i].id == self.buses[j].id {
                    return Err(ModelError::Topology("duplicate bus id"));
                }
            }
        }
        if self.lines.len() != n - 1 {
            return Err(ModelError::Topology(
                "radial network must have exactly (buses - 1) lines",
            ));
        }
        // union-find over bus positions
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        for line in &self.lines {
            if !(line.r >= 0.0 && line.x >= 0.0) {
                return Err(ModelError::Topology("line impedance must be nonnegative"));
            }
            let a = self
                .bus_index(line.from)
                .ok_or(ModelError::Topology("line references unknown bus"))?;
            let b = self
                .bus_index(line.to)
                .ok_or(ModelError::Topology("line references unknown bus"))?;
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return Err(ModelError::Topology("network contains a cycle"));
            }
            parent[ra] = rb;
        }
        let root = find(&mut parent, 0);
        for i in 1..n {
            if find(&mut parent, i) != root {
                return Err(ModelError::Topology("network is disconnected"));
            }
        }
        for bus in &self.buses {
            if !(bus.u_min < bus.u_max) {
                return Err(ModelError::Topology("bus voltage range is empty"));
            }
            if !(bus.power_factor > 0.0 && bus.power_factor <= 1.0) {
                return Err(ModelError::Topology("load power factor must lie in (0, 1]"));
            }
        }
        for &b in self
            .wt_buses
            .iter()
            .chain(self.pv_buses.iter())
            .chain(self.battery_buses.iter())
            .chain(self.hap_buses.iter())
        {
            if self.bus_index(b).is_none() {
                return Err(ModelError::Topology("device placed on unknown bus"));
            }
        }
        if self.hap_buses.len() != 1 {
            return Err(ModelError::Topology(
                "exactly one hydrogen-ammonia plant is supported",
            ));
        }
        if !(self.u0 > 0.0) || !(self.s_base_kw > 0.0) {
            return Err(ModelError::Topology("reference voltage and power base must be positive"));
        }
        Ok(())
    }

    /// A single-feeder chain of `n` identical buses, for tests.
    pub fn chain(n: usize, r: f64, x: f64, p_max: f64) -> Self {
        let buses = (1..=n)
            .map(|id| Bus {
                id,
                u_min: 0.95,
                u_max: 1.05,
                power_factor: 0.95,
            })
            .collect();
        let lines = (1..n)
            .map(|i| Line {
                from: i,
                to: i + 1,
                r,
                x,
                p_max,
                q_max: p_max,
            })
            .collect();
        NetworkTopology {
            buses,
            lines,
            u0: 1.0,
            s_base_kw: 1000.0,
            wt_buses: vec![],
            pv_buses: vec![],
            battery_buses: vec![],
            hap_buses: vec![1],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_is_radial() {
        NetworkTopology::chain(6, 0.01, 0.02, 500.0).validate().unwrap();
    }

    #[test]
    fn cycle_detected() {
        let mut t = NetworkTopology::chain(3, 0.01, 0.02, 500.0);
        t.lines.pop();
        t.lines.push(Line {
            from: 1,
            to: 2,
            r: 0.01,
            x: 0.02,
            p_max: 500.0,
            q_max: 500.0,
        });
        assert!(matches!(t.validate(), Err(ModelError::Topology(_))));
    }

    #[test]
    fn missing_line_detected() {
        let mut t = NetworkTopology::chain(4, 0.01, 0.02, 500.0);
        t.lines.remove(1);
        assert!(matches!(t.validate(), Err(ModelError::Topology(_))));
    }

    #[test]
    fn unity_power_factor_has_no_reactive_load() {
        assert!(NetworkTopology::reactive_load(123.0, 1.0).abs() < 1e-7);
    }
}
