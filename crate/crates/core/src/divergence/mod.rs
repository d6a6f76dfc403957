//! Divergences of spectral estimators and Stein unbiased risk estimates.

pub mod closed_form;
pub mod fd;
pub mod sure;

pub use closed_form::{
    div_spectral_repeated, div_spectral_simple, div_svt_complex_simple, div_svt_real_simple,
    divergence, Divergence, DivergenceOptions, RepeatedPolicy, TiePolicy,
};
pub use fd::{default_fd_step, fd_divergence, fd_divergence_oracle};
pub use sure::{
    degrees_of_freedom, sure_from_spectrum, sure_spectral, sure_spectral_with, sure_svt, sure_svt_with,
    SureReport,
};
