//! Plant model: domain types and the constraint-block builders that emit the
//! scheduling problem for one horizon.

use core::fmt;
use core::ops::Range;

mod config;
mod dgt;
mod extract;
mod hb;
mod mapping;
mod network;
mod objective;
mod state;
mod storage;
mod topology;
mod vars;

pub use config::SystemConfig;
pub use dgt::build_dgt_block;
pub use extract::{eval_schedule_cost, extract_schedule};
pub use hb::{build_hb_block, mode1_power, mode2_power};
pub use mapping::{build_mapping_block, mode_admissible, transition_admissible};
pub use network::build_network_block;
pub use objective::build_objective;
pub use state::{
    region_of_level, CostBreakdown, ExogenousForecast, H2Region, HbMode, ScheduleDecision,
    StepDecision, SystemState,
};
pub use storage::{build_storage_blocks, REGION_EDGE_EPS};
pub use topology::{Bus, Line, NetworkTopology};
pub use vars::{declare_variables, HorizonVars, StepVars};

use crate::ir::ProblemIR;

/// Ranges of the constraints and atoms appended by one builder call.
#[derive(Clone, Debug)]
pub struct Fragment {
    pub cons: Range<usize>,
    pub atoms: Range<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelError {
    InvalidConfig(&'static str),
    NonPositiveCapacity(&'static str),
    Topology(&'static str),
    ForecastShape(&'static str),
    InitialStateOutOfBounds(&'static str),
    InvalidState(&'static str),
    EmptySchedule,
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::InvalidConfig(what) => write!(f, "invalid configuration: {what}"),
            ModelError::NonPositiveCapacity(what) => {
                write!(f, "capacity must be positive: {what}")
            }
            ModelError::Topology(what) => write!(f, "invalid network topology: {what}"),
            ModelError::ForecastShape(what) => write!(f, "invalid forecast: {what}"),
            ModelError::InitialStateOutOfBounds(what) => {
                write!(f, "initial state outside physical bounds: {what}")
            }
            ModelError::InvalidState(what) => write!(f, "invalid plant state: {what}"),
            ModelError::EmptySchedule => write!(f, "schedule has no steps"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ModelError {}

/// Assembles the deterministic scheduling problem: declares all variables
/// and emits every constraint block plus the objective.
///
/// The returned IR still contains nonlinear atoms; run
/// [`crate::reform::apply_all`] before handing it to the search.
pub fn build_problem(
    cfg: &SystemConfig,
    topo: &NetworkTopology,
    state: &SystemState,
    forecast: &ExogenousForecast,
    horizon: usize,
) -> Result<(ProblemIR, HorizonVars), ModelError> {
    cfg.validate()?;
    topo.validate()?;
    state.validate_physical(cfg)?;
    forecast.validate(topo, horizon)?;
    if state.batt_energy.len() != topo.battery_buses.len() {
        return Err(ModelError::InvalidState(
            "state carries a different battery count than the topology",
        ));
    }

    let mut ir = ProblemIR::new();
    let vars = declare_variables(&mut ir, cfg, topo, horizon);
    build_hb_block(&mut ir, &vars, state, cfg)?;
    build_dgt_block(&mut ir, &vars, cfg)?;
    build_storage_blocks(&mut ir, &vars, state, forecast, cfg)?;
    build_network_block(&mut ir, &vars, topo, forecast, cfg)?;
    let region = region_of_level(state.h2_storage, cfg);
    build_mapping_block(&mut ir, &vars, state, region)?;
    build_objective(&mut ir, &vars, state, cfg)?;
    Ok((ir, vars))
}
