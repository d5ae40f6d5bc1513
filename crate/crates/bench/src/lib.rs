//! Fixtures shared by the benchmarks.

use uwrelay_core::channels::units::db_to_linear;
use uwrelay_core::channels::{scenario_params, AlphaMuParams, WaterScenario};
use uwrelay_core::metrics::{ModulationParams, Scenario};

/// A catalog row with an α-μ RF hop, both at `mean_snr_db`, BPSK and a 0 dB
/// outage threshold.
pub fn scenario(row: &str, alpha: f64, mu: f64, mean_snr_db: f64) -> Scenario {
    let g = db_to_linear(mean_snr_db);
    let uwo = scenario_params(row.parse::<WaterScenario>().expect("known row"))
        .and_then(|p| p.with_mean_snr(g))
        .expect("catalog row is valid");
    let rf = AlphaMuParams::new(alpha, mu, g).expect("valid RF parameters");
    Scenario::new(uwo, rf, 1.0, ModulationParams::BPSK).expect("valid scenario")
}
