//! Plant-wide parameters: costs, capacities, efficiencies, operating ranges
//! and the gas-turbine fuel curves.

use crate::model::ModelError;

/// All scalar plant parameters.
///
/// Units follow the conventions used throughout the crate: power in kW,
/// energy in kWh, gas masses in kg, molar masses in g/mol, costs in $ per
/// kWh / kg / event. One scheduling step spans [`dt_hours`](Self::dt_hours)
/// hours; the storage dynamics and all energy bookkeeping scale with it.
#[derive(Clone, Debug)]
pub struct SystemConfig {
    // --- unit costs ---
    /// Renewable curtailment cost, $/kWh.
    pub cost_curtail: f64,
    /// Battery level degradation cost, $/kWh per step.
    pub cost_batt_degr: f64,
    /// H₂ storage level degradation cost, $/kg per step.
    pub cost_h2_degr: f64,
    /// Battery throughput operation cost, $/kWh.
    pub cost_ess_op: f64,
    /// Gas-turbine generation cost, $/kWh.
    pub cost_dgt_op: f64,
    /// Electrolyzer operation cost, $/kWh.
    pub cost_elz_op: f64,
    /// Ammonia-synthesis maintenance cost, $/kWh of synthesis load.
    pub cost_hb_maint: f64,
    /// Cost per synthesis power adjustment event, $.
    pub cost_hb_adjust: f64,
    /// Synthesis start-up cost, $.
    pub cost_hb_startup: f64,
    /// Synthesis shut-down cost, $.
    pub cost_hb_shutdown: f64,

    // --- ammonia synthesis (HB process) ---
    /// Rated synthesis electrical load P̄, kW.
    pub hb_power_cap: f64,
    /// Ramp-up limit per adjustment, fraction of rated load.
    pub ramp_up: f64,
    /// Ramp-down limit per adjustment, fraction of rated load.
    pub ramp_down: f64,
    /// Minimum number of steps between power adjustments (τ).
    pub hb_dwell_steps: usize,
    /// Minimum / maximum load fraction while running.
    pub hb_load_min: f64,
    pub hb_load_max: f64,
    /// Lower bound of the H₂:N₂ feed molar ratio in reduced-ratio mode; the
    /// upper bound is the stoichiometric 3.
    pub hb_ratio_min: f64,
    /// Reactor specific power, kWh per kg of H₂ feed.
    pub hb_specific_power: f64,
    /// Feed compressor specific power, kWh per kg of total (H₂+N₂) feed.
    pub compressor_specific_power: f64,
    /// Produced NH₃ moles per mole of H₂ feed (2/3 for N₂ + 3H₂ → 2NH₃).
    pub nh3_per_h2_mol: f64,

    // --- dual-fuel gas turbine ---
    /// Rated electrical output, kW.
    pub dgt_power_cap: f64,
    /// Overall turbine efficiency η.
    pub dgt_efficiency: f64,
    /// Maximum H₂ molar blending ratio of the fuel.
    pub dgt_blend_max: f64,
    /// Combustion-efficiency curve coefficients a₀..a₅ of
    /// [`Self::dgt_combustion_eff`]. The quadratic term enters negated.
    pub dgt_eff_coeffs: [f64; 6],
    /// Lower-heating-value line: LHV = b₀ + b₁·r, kWh per kg of fuel.
    pub dgt_lhv_intercept: f64,
    pub dgt_lhv_slope: f64,
    /// Total fuel mass limit per step, kg.
    pub dgt_fuel_cap: f64,
    /// Minimum total fuel mass per step while committed, kg. Keeps the
    /// blend-ratio denominator strictly positive when the unit is on.
    pub dgt_min_fuel_on: f64,

    // --- electrolyzer and nitrogen supply ---
    /// Electrolyzer capacity, kW.
    pub elz_power_cap: f64,
    /// Electrolyzer efficiency.
    pub elz_efficiency: f64,
    /// Electricity-to-hydrogen transformation factor, kWh per kg H₂.
    pub elz_transform_factor: f64,
    /// Nitrogen separation capacity, kW.
    pub psa_power_cap: f64,
    /// Nitrogen separation specific power, kWh per kg N₂.
    pub psa_specific_power: f64,

    // --- storage ---
    /// H₂ storage capacity, kg.
    pub h2_storage_cap: f64,
    /// NH₃ storage capacity, kg.
    pub nh3_storage_cap: f64,
    /// H₂ storage SOC thresholds η₁ < η₂ < η₃ < η₄ splitting the operating
    /// range into low / mid / high hysteresis regions.
    pub h2_region_thresholds: [f64; 4],
    /// Battery power rating per unit, kW.
    pub batt_power_cap: f64,
    /// Battery energy capacity per unit, kWh.
    pub batt_energy_cap: f64,
    /// Battery charge / discharge efficiencies.
    pub batt_eff_charge: f64,
    pub batt_eff_discharge: f64,
    /// Battery SOC operating range.
    pub batt_soc_min: f64,
    pub batt_soc_max: f64,

    // --- molar masses, g/mol ---
    pub molar_mass_n2: f64,
    pub molar_mass_h2: f64,
    pub molar_mass_nh3: f64,

    // --- scheduling ---
    /// Look-ahead horizon, steps.
    pub horizon: usize,
    /// Step length, hours.
    pub dt_hours: f64,
}

impl Default for SystemConfig {
    fn default() -> Self {
        SystemConfig {
            cost_curtail: 0.1,
            cost_batt_degr: 0.001,
            cost_h2_degr: 0.0031,
            cost_ess_op: 0.0005,
            cost_dgt_op: 0.026,
            cost_elz_op: 0.01,
            cost_hb_maint: 0.076,
            cost_hb_adjust: 5.0,
            cost_hb_startup: 200.0,
            cost_hb_shutdown: 200.0,
            hb_power_cap: 2000.0,
            ramp_up: 0.2,
            ramp_down: 0.2,
            hb_dwell_steps: 4,
            hb_load_min: 0.2,
            hb_load_max: 1.0,
            hb_ratio_min: 0.418,
            hb_specific_power: 3.0,
            compressor_specific_power: 0.8,
            nh3_per_h2_mol: 2.0 / 3.0,
            dgt_power_cap: 100.0,
            dgt_efficiency: 0.4,
            dgt_blend_max: 0.6,
            dgt_eff_coeffs: [0.90, 0.12, 0.05, 0.0, 0.0, 0.0],
            dgt_lhv_intercept: 5.2,
            dgt_lhv_slope: 7.0,
            dgt_fuel_cap: 60.0,
            dgt_min_fuel_on: 1.0,
            elz_power_cap: 3000.0,
            elz_efficiency: 0.9,
            elz_transform_factor: 41.97,
            psa_power_cap: 500.0,
            psa_specific_power: 0.3,
            h2_storage_cap: 1000.0,
            nh3_storage_cap: 8000.0,
            h2_region_thresholds: [0.1, 0.2, 0.8, 0.9],
            batt_power_cap: 100.0,
            batt_energy_cap: 1000.0,
            batt_eff_charge: 0.9,
            batt_eff_discharge: 0.9,
            batt_soc_min: 0.2,
            batt_soc_max: 0.9,
            molar_mass_n2: 28.0,
            molar_mass_h2: 2.0,
            molar_mass_nh3: 17.0,
            horizon: 24,
            dt_hours: 1.0,
        }
    }
}

impl SystemConfig {
    pub fn validate(&self) -> Result<(), ModelError> {
        let err = |what: &'static str| Err(ModelError::InvalidConfig(what));
        if !(self.hb_load_min > 0.0 && self.hb_load_min < self.hb_load_max) {
            return err("synthesis load range must satisfy 0 < min < max");
        }
        if self.hb_load_max > 1.0 {
            return err("synthesis maximum load fraction exceeds 1");
        }
        if !(self.hb_ratio_min >= 0.0 && self.hb_ratio_min < 3.0) {
            return err("synthesis feed-ratio lower bound must lie in [0, 3)");
        }
        if !(self.dgt_blend_max >= 0.0 && self.dgt_blend_max <= 1.0) {
            return err("turbine blend-ratio bound must lie in [0, 1]");
        }
        let th = &self.h2_region_thresholds;
        if !(th[0] < th[1] && th[1] < th[2] && th[2] < th[3]) {
            return err("H2 region thresholds must be strictly increasing");
        }
        if !(th[0] >= 0.0 && th[3] <= 1.0) {
            return err("H2 region thresholds must lie in [0, 1]");
        }
        for (cap, what) in [
            (self.hb_power_cap, "synthesis power capacity"),
            (self.dgt_power_cap, "turbine power capacity"),
            (self.elz_power_cap, "electrolyzer capacity"),
            (self.psa_power_cap, "nitrogen separation capacity"),
            (self.batt_power_cap, "battery power rating"),
            (self.batt_energy_cap, "battery energy capacity"),
            (self.h2_storage_cap, "H2 storage capacity"),
            (self.nh3_storage_cap, "NH3 storage capacity"),
        ] {
            if !(cap > 0.0) {
                return Err(ModelError::NonPositiveCapacity(what));
            }
        }
        if !(self.batt_eff_charge > 0.0 && self.batt_eff_charge <= 1.0)
            || !(self.batt_eff_discharge > 0.0 && self.batt_eff_discharge <= 1.0)
        {
            return err("battery efficiencies must lie in (0, 1]");
        }
        if !(self.batt_soc_min >= 0.0 && self.batt_soc_min < self.batt_soc_max)
            || self.batt_soc_max > 1.0
        {
            return err("battery SOC range must satisfy 0 <= min < max <= 1");
        }
        if !(self.ramp_up >= 0.0 && self.ramp_down >= 0.0) {
            return err("ramp rates must be nonnegative");
        }
        if !(self.molar_mass_n2 > 0.0 && self.molar_mass_h2 > 0.0 && self.molar_mass_nh3 > 0.0) {
            return err("molar masses must be positive");
        }
        if !(self.nh3_per_h2_mol > 0.0) {
            return err("ammonia molar yield must be positive");
        }
        if !(self.elz_efficiency > 0.0 && self.elz_transform_factor > 0.0) {
            return err("electrolyzer parameters must be positive");
        }
        if !(self.dgt_min_fuel_on > 0.0 && self.dgt_min_fuel_on <= self.dgt_fuel_cap) {
            return err("turbine minimum committed fuel must lie in (0, fuel cap]");
        }
        if self.dgt_eff_coeffs.iter().any(|c| !c.is_finite())
            || !self.dgt_lhv_intercept.is_finite()
            || !self.dgt_lhv_slope.is_finite()
        {
            return err("turbine curve coefficients must be finite");
        }
        if self.horizon == 0 {
            return err("horizon must be at least one step");
        }
        if !(self.dt_hours > 0.0) {
            return err("step length must be positive");
        }
        Ok(())
    }

    /// NH₃ mass produced per kg of H₂ feed (stoichiometric mass conversion).
    pub fn nh3_yield_per_kg_h2(&self) -> f64 {
        self.molar_mass_nh3 * self.nh3_per_h2_mol / self.molar_mass_h2
    }

    /// Synthesis load per kg of H₂ feed at the stoichiometric ratio 3
    /// (reactor plus compressor), kWh/kg.
    pub fn hb_full_ratio_coeff(&self) -> f64 {
        self.molar_mass_n2 * self.compressor_specific_power / (3.0 * self.molar_mass_h2)
            + self.hb_specific_power
            + self.compressor_specific_power
    }

    /// Synthesis load per kg of H₂ feed at inverse feed ratio `z = 1/r`.
    pub fn hb_reduced_ratio_coeff(&self, z: f64) -> f64 {
        (z * self.molar_mass_n2 / self.molar_mass_h2 + 1.0) * self.compressor_specific_power
            + self.hb_specific_power
    }

    /// Largest admissible H₂ feed per step, attained at ratio 3 and maximum
    /// load, kg.
    pub fn hb_feed_cap(&self) -> f64 {
        self.hb_load_max * self.hb_power_cap / self.hb_full_ratio_coeff()
    }

    /// N₂ feed mass alongside `h2_feed` at inverse ratio `z`, kg.
    pub fn n2_feed_for(&self, h2_feed: f64, z: f64) -> f64 {
        self.molar_mass_n2 / self.molar_mass_h2 * z * h2_feed
    }

    /// Combustion efficiency of the turbine at H₂ blend ratio `r`:
    /// `a₅r⁵ + a₄r⁴ + a₃r³ − a₂r² + a₁r + a₀`.
    pub fn dgt_combustion_eff(&self, r: f64) -> f64 {
        let [a0, a1, a2, a3, a4, a5] = self.dgt_eff_coeffs;
        ((((a5 * r + a4) * r + a3) * r - a2) * r + a1) * r + a0
    }

    /// Combustion-efficiency polynomial in plain coefficient order
    /// `c₀..c₅` with the sign convention applied.
    pub fn dgt_eff_poly(&self) -> [f64; 6] {
        let [a0, a1, a2, a3, a4, a5] = self.dgt_eff_coeffs;
        [a0, a1, -a2, a3, a4, a5]
    }

    /// Fuel lower heating value at H₂ blend ratio `r`, kWh/kg.
    pub fn dgt_lhv(&self, r: f64) -> f64 {
        self.dgt_lhv_intercept + self.dgt_lhv_slope * r
    }

    /// H₂ molar blend ratio of a fuel mix given component masses.
    pub fn dgt_blend_ratio(&self, h2_mass: f64, nh3_mass: f64) -> f64 {
        let den = self.molar_mass_nh3 * h2_mass + self.molar_mass_h2 * nh3_mass;
        if den == 0.0 {
            0.0
        } else {
            self.molar_mass_nh3 * h2_mass / den
        }
    }

    /// Turbine electrical output for the given fuel masses, kW.
    pub fn dgt_power(&self, h2_mass: f64, nh3_mass: f64) -> f64 {
        let r = self.dgt_blend_ratio(h2_mass, nh3_mass);
        self.dgt_efficiency
            * self.dgt_combustion_eff(r)
            * self.dgt_lhv(r)
            * (h2_mass + nh3_mass)
            / self.dt_hours
    }

    /// Range of the combustion-efficiency curve over blend ratios
    /// `[0, dgt_blend_max]`, by monomial interval arithmetic (sound, possibly
    /// loose).
    pub fn dgt_eff_range(&self) -> (f64, f64) {
        let c = self.dgt_eff_poly();
        // each monomial c_k r^k spans [0, c_k r̄^k] (or its mirror) on [0, r̄]
        let mut lo = c[0];
        let mut hi = c[0];
        let mut rk = self.dgt_blend_max;
        for &ck in &c[1..] {
            if ck >= 0.0 {
                hi += ck * rk;
            } else {
                lo += ck * rk;
            }
            rk *= self.dgt_blend_max;
        }
        (lo, hi)
    }

    /// Range of the fuel LHV over admissible blend ratios, kWh/kg.
    pub fn dgt_lhv_range(&self) -> (f64, f64) {
        let a = self.dgt_lhv_intercept;
        let b = self.dgt_lhv_intercept + self.dgt_lhv_slope * self.dgt_blend_max;
        (a.min(b), a.max(b))
    }

    /// Hysteresis band `[lo, hi]` (as SOC fractions) of H₂ region `i` with
    /// `i = 1` the high band, `i = 2` the middle, `i = 3` the low band.
    pub fn h2_region_band(&self, region: usize) -> (f64, f64) {
        debug_assert!((1..=3).contains(&region));
        let th = &self.h2_region_thresholds;
        (th[3 - region], th[4 - region])
    }

    /// Battery level operating range `[lo, hi]`, kWh.
    pub fn batt_level_range(&self) -> (f64, f64) {
        (
            self.batt_soc_min * self.batt_energy_cap,
            self.batt_soc_max * self.batt_energy_cap,
        )
    }
}
