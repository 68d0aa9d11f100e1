//! Self-contained numerical special functions: regularized incomplete
//! gamma and beta, normal and Student-t CDFs/quantiles, and the stable
//! law S₁ (CDF, quantile, sampler).

mod gamma_beta;
mod normal;
mod stable;
mod student;

pub use gamma_beta::{ln_gamma, reg_inc_beta, reg_lower_gamma};
pub use normal::{normal_cdf, normal_quantile};
pub use stable::{stable1_cdf, stable1_quantile, stable1_sample, StableOneParams};
pub use student::student_t_cdf;

