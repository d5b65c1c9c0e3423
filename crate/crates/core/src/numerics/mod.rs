//! Log-domain arithmetic, special functions, quadrature and scalar
//! optimization shared by the bound evaluators.

mod logval;
mod optimize;
mod quadrature;
mod special;

pub use logval::{ln_1m_exp, ln_add, ln_sum_exp, ln_sum_exp_slice, log_sum_exp, LogValue};
pub use optimize::{find_root_monotone, minimize_scalar, DEFAULT_TOL, GRID_POINTS};
pub use quadrature::{
    gauss_hermite, gauss_legendre, integrate, std_normal_expectation, std_normal_expectation_panels, Rule,
    DEFAULT_HERMITE_NODES,
};
pub use special::{
    gaussian_q, ln_binomial, ln_cosh, ln_gamma_fn, ln_gaussian_q, ln_reg_inc_beta,
    ln_reg_inc_gamma, ln_reg_inc_gamma_upper, log_binomial, reg_inc_gamma,
};
