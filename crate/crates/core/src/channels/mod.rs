//! Fading models: α-μ for the RF hop and EGG for the underwater optical hop.

mod alpha_mu;
mod catalog;
mod egg;
mod gengamma;
pub mod units;

pub use alpha_mu::{alpha_mu_cdf, alpha_mu_pdf, alpha_mu_sample, AlphaMuParams};
pub use catalog::{scenario_params, Catalog, CatalogEntry, Turbulence, WaterScenario, WaterType};
pub use egg::{egg_cdf, egg_pdf, egg_sample, EggParams};
pub use gengamma::{ln_gamma_variate, GenGamma};
