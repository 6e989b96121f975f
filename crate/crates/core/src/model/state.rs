//! Plant state, forecasts, and extracted schedules.

use alloc::vec::Vec;

use crate::model::{ModelError, NetworkTopology, SystemConfig};

/// Operating mode of the ammonia synthesis train.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HbMode {
    /// Mode 1: running at the stoichiometric feed ratio 3.
    FullRatio,
    /// Mode 2: running at a reduced feed ratio in `[r_min, 3]`.
    ReducedRatio,
    /// Mode 3: shut down.
    Off,
}

impl HbMode {
    /// Indicator index `i ∈ {1,2,3}` of this mode.
    pub fn indicator(self) -> usize {
        match self {
            HbMode::FullRatio => 1,
            HbMode::ReducedRatio => 2,
            HbMode::Off => 3,
        }
    }

    pub fn from_indicator(i: usize) -> Option<Self> {
        match i {
            1 => Some(HbMode::FullRatio),
            2 => Some(HbMode::ReducedRatio),
            3 => Some(HbMode::Off),
            _ => None,
        }
    }
}

/// Hysteresis region of the H₂ storage SOC.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum H2Region {
    /// Indicator 1: high band — synthesis either off or at full ratio.
    High,
    /// Indicator 2: middle band — all modes admissible.
    Mid,
    /// Indicator 3: low band — scheduled shutdown enforced.
    Low,
}

impl H2Region {
    pub fn indicator(self) -> usize {
        match self {
            H2Region::High => 1,
            H2Region::Mid => 2,
            H2Region::Low => 3,
        }
    }

    pub fn from_indicator(i: usize) -> Option<Self> {
        match i {
            1 => Some(H2Region::High),
            2 => Some(H2Region::Mid),
            3 => Some(H2Region::Low),
            _ => None,
        }
    }
}

/// Region of an H₂ storage level under the closed-left band convention used
/// by the level decomposition rows.
pub fn region_of_level(level: f64, cfg: &SystemConfig) -> H2Region {
    let th = &cfg.h2_region_thresholds;
    let cap = cfg.h2_storage_cap;
    if level <= th[1] * cap {
        H2Region::Low
    } else if level <= th[2] * cap {
        H2Region::Mid
    } else {
        H2Region::High
    }
}

/// Measured plant state at the start of a scheduling step.
#[derive(Clone, Debug)]
pub struct SystemState {
    /// Wall-clock step index.
    pub step: usize,
    /// Battery levels, kWh, one per battery.
    pub batt_energy: Vec<f64>,
    /// H₂ storage level, kg.
    pub h2_storage: f64,
    /// NH₃ storage level, kg.
    pub nh3_storage: f64,
    /// Synthesis load applied in the previous step, kW.
    pub hb_power_prev: f64,
    /// Synthesis mode of the previous step.
    pub hb_mode_prev: HbMode,
    /// H₂ region of the previous step.
    pub h2_region_prev: H2Region,
    /// Most recent power-adjustment indicators, oldest first; at most the
    /// dwell window τ is kept. Shorter histories are padded with "no
    /// adjustment" (steady synthesis load before start).
    pub hb_adjust_history: Vec<bool>,
}

impl SystemState {
    /// Fresh state with storages at the given fills and synthesis off.
    pub fn initial(cfg: &SystemConfig, batteries: usize, batt_soc: f64, h2_soc: f64) -> Self {
        let state = SystemState {
            step: 0,
            batt_energy: alloc::vec![batt_soc * cfg.batt_energy_cap; batteries],
            h2_storage: h2_soc * cfg.h2_storage_cap,
            nh3_storage: 0.5 * cfg.nh3_storage_cap,
            hb_power_prev: 0.0,
            hb_mode_prev: HbMode::Off,
            h2_region_prev: H2Region::Mid,
            hb_adjust_history: Vec::new(),
        };
        state
    }

    /// Physical plausibility: storages within hardware capacity. Levels
    /// outside the *safety* bands are legal inputs (the closed loop may be
    /// recovering from a violation).
    pub fn validate_physical(&self, cfg: &SystemConfig) -> Result<(), ModelError> {
        for &e in &self.batt_energy {
            if !(0.0..=cfg.batt_energy_cap).contains(&e) {
                return Err(ModelError::InitialStateOutOfBounds("battery level"));
            }
        }
        if !(0.0..=cfg.h2_storage_cap).contains(&self.h2_storage) {
            return Err(ModelError::InitialStateOutOfBounds("H2 storage level"));
        }
        if !(0.0..=cfg.nh3_storage_cap).contains(&self.nh3_storage) {
            return Err(ModelError::InitialStateOutOfBounds("NH3 storage level"));
        }
        if self.hb_adjust_history.len() > cfg.hb_dwell_steps {
            return Err(ModelError::InvalidState(
                "adjustment history longer than the dwell window",
            ));
        }
        if self.hb_adjust_history.iter().filter(|&&v| v).count() > 1 {
            return Err(ModelError::InvalidState(
                "adjustment history violates the dwell rule",
            ));
        }
        Ok(())
    }

    /// Strict validity at simulation start: storages inside their safety
    /// operating bands.
    pub fn validate_strict(&self, cfg: &SystemConfig) -> Result<(), ModelError> {
        self.validate_physical(cfg)?;
        let (lo, hi) = cfg.batt_level_range();
        for &e in &self.batt_energy {
            if !(lo..=hi).contains(&e) {
                return Err(ModelError::InitialStateOutOfBounds(
                    "battery level outside safety band",
                ));
            }
        }
        let th = &cfg.h2_region_thresholds;
        let (lo, hi) = (th[0] * cfg.h2_storage_cap, th[3] * cfg.h2_storage_cap);
        if !(self.h2_storage > lo && self.h2_storage <= hi) {
            return Err(ModelError::InitialStateOutOfBounds(
                "H2 level outside hysteresis range",
            ));
        }
        Ok(())
    }
}

/// Forecast of exogenous quantities over one horizon.
#[derive(Clone, Debug, Default)]
pub struct ExogenousForecast {
    /// Available wind power per turbine per step, kW.
    pub wt_power: Vec<Vec<f64>>,
    /// Available PV power per plant per step, kW.
    pub pv_power: Vec<Vec<f64>>,
    /// Active load per bus (topology order) per step, kW.
    pub bus_load: Vec<Vec<f64>>,
    /// H₂ offtake demand per step, kg.
    pub h2_demand: Vec<f64>,
    /// NH₃ offtake demand per step, kg.
    pub nh3_demand: Vec<f64>,
}

impl ExogenousForecast {
    pub fn validate(&self, topo: &NetworkTopology, horizon: usize) -> Result<(), ModelError> {
        let want = |len: usize| len == horizon;
        if self.wt_power.len() != topo.wt_buses.len()
            || self.pv_power.len() != topo.pv_buses.len()
            || self.bus_load.len() != topo.num_buses()
        {
            return Err(ModelError::ForecastShape("device/bus series count"));
        }
        for series in self
            .wt_power
            .iter()
            .chain(self.pv_power.iter())
            .chain(self.bus_load.iter())
        {
            if !want(series.len()) {
                return Err(ModelError::ForecastShape("series shorter than the horizon"));
            }
            if series.iter().any(|&v| v < 0.0) {
                return Err(ModelError::ForecastShape("negative forecast entry"));
            }
        }
        if !want(self.h2_demand.len()) || !want(self.nh3_demand.len()) {
            return Err(ModelError::ForecastShape("demand series length"));
        }
        if self
            .h2_demand
            .iter()
            .chain(self.nh3_demand.iter())
            .any(|&v| v < 0.0)
        {
            return Err(ModelError::ForecastShape("negative demand entry"));
        }
        Ok(())
    }

    /// Total renewable output available at a bus in one step, kW.
    pub fn renewable_at(&self, topo: &NetworkTopology, bus: usize, step: usize) -> f64 {
        let mut total = 0.0;
        for (w, &b) in topo.wt_buses.iter().enumerate() {
            if b == bus {
                total += self.wt_power[w][step];
            }
        }
        for (p, &b) in topo.pv_buses.iter().enumerate() {
            if b == bus {
                total += self.pv_power[p][step];
            }
        }
        total
    }
}

/// One step of an extracted schedule.
#[derive(Clone, Debug, Default)]
pub struct StepDecision {
    pub hb_power: f64,
    pub hb_mode_power: [f64; 3],
    pub hb_mode: usize,
    pub hb_adjust: bool,
    pub hb_ratio: f64,
    pub h2_to_hb: f64,
    pub n2_to_hb: f64,
    pub nh3_production: f64,
    pub dgt_h2: f64,
    pub dgt_nh3: f64,
    pub dgt_blend: f64,
    pub dgt_eta_ce: f64,
    pub dgt_lhv: f64,
    pub dgt_power: f64,
    pub dgt_on: bool,
    pub elz_power: f64,
    pub psa_power: f64,
    pub hap_power: f64,
    pub batt_charge: Vec<f64>,
    pub batt_discharge: Vec<f64>,
    pub batt_energy_next: Vec<f64>,
    pub curtail: Vec<f64>,
    pub line_p: Vec<f64>,
    pub line_q: Vec<f64>,
    pub voltage: Vec<f64>,
    pub h2_level_next: f64,
    pub h2_region: usize,
    pub nh3_level_next: f64,
}

/// Horizon-long schedule extracted from a solver assignment.
#[derive(Clone, Debug, Default)]
pub struct ScheduleDecision {
    pub steps: Vec<StepDecision>,
}

impl ScheduleDecision {
    pub fn horizon(&self) -> usize {
        self.steps.len()
    }
}

/// Ex-post cost evaluation of a schedule, grouped as in the objective.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CostBreakdown {
    pub curtailment: f64,
    pub battery_degradation: f64,
    pub h2_degradation: f64,
    pub ess_operation: f64,
    pub dgt_operation: f64,
    pub elz_operation: f64,
    pub hb_adjust: f64,
    pub hb_maintenance: f64,
    pub hb_startup: f64,
    pub hb_shutdown: f64,
}

impl CostBreakdown {
    pub fn degradation(&self) -> f64 {
        self.battery_degradation + self.h2_degradation
    }

    pub fn operation(&self) -> f64 {
        self.ess_operation
            + self.dgt_operation
            + self.elz_operation
            + self.hb_adjust
            + self.hb_maintenance
            + self.hb_startup
            + self.hb_shutdown
    }

    pub fn total(&self) -> f64 {
        self.curtailment + self.degradation() + self.operation()
    }
}
