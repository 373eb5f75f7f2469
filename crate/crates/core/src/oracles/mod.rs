//! Independent verification paths.

pub mod bessel_integral;
pub mod contour;
pub mod convolution;
pub mod highprec;
pub mod integrate;
pub mod permutations;
pub mod reference;
pub mod rpw;

pub use contour::{fourier_time_integral, green_closed_form, hankel_closed_form};
pub use convolution::{green_convolution_check, ConvolutionCheck};
pub use highprec::{highprec_kernel, HighPrecReal};
pub use integrate::{mc_integrate, quadrature_1d, McEstimate, SamplingDomain};
pub use permutations::permutation_enumeration;
pub use rpw::{rpw_sample_correlation, rpw_sample_wall, AmplitudeLaw, RpwEnsembleConfig, RpwEstimate};
