//! Scaled Bessel kernels and their Gaussian large-order limit.
//!
//! Everything downstream is expressed through the normalized kernel
//! `Ĵ_d(x) = Γ(d+1)(2/x)^d J_d(x)`, which equals 1 at the origin and stays
//! bounded by 1 for `d ≥ 0`. Large orders are handled by never forming
//! `x^d` or `d!` outside the log domain.

mod gamma;
mod kernel;
mod limits;
mod log_signed;

pub use gamma::{log_gamma, pochhammer_log, stirling_log_factorial};
pub use kernel::{
    log_scaled_kernel, normalized_kernel, normalized_kernel_complement, BesselOrder,
};
pub use limits::{
    gaussian_limit_kernel, kernel_convergence_error, small_argument_limit,
    small_argument_limit_stirling,
};
pub use log_signed::LogSigned;
