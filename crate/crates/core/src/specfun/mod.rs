//! Special functions: gamma, incomplete gamma and Fox H-functions.

mod foxh;
mod gamma;
pub(crate) mod gauss;
mod incgamma;
mod mellin;

pub use foxh::{
    fox_h, fox_h_bivariate, fox_h_bivariate_detailed, fox_h_bivariate_ln, fox_h_bivariate_ln_detailed, fox_h_detailed,
    fox_h_ln, fox_h_ln_detailed, BivariateGHSpec, CoupledGamma, GHSpec, HEvaluation, HParam, Route,
};
pub use gamma::{gamma, ln_gamma, ln_gamma_signed, log_gamma_complex};
pub use incgamma::{reg_lower_incomplete_gamma, reg_lower_incomplete_gamma_ln, reg_upper_incomplete_gamma};
pub use mellin::{ContourConfig, ContourOutcome, OffsetRule};
