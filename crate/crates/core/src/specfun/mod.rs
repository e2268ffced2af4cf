//! Special functions consumed by the torsion formulas: ζ(−m), ζ′(−m),
//! Hurwitz and Lerch zeta values, Si/Ci/Ei, R^rot and the R-series.

mod bernoulli;
mod expint;
mod lerch;
mod rrot;
mod zeta;

pub use bernoulli::{bernoulli, zeta_neg};
pub use expint::{asymptotic_crossover, ci, ei, si, si_ci_ei, SiCiEi};
pub use lerch::{lerch_neg, lerch_point, lerch_prime_neg, r_tilde0, r_two, LerchPoint};
pub use rrot::{gs_r_series, gs_r_series_in, r_rot_direct, r_rot_series, r_rot_value};
pub use zeta::{hurwitz_zeta, hurwitz_zeta_with_derivative, riemann_zeta, zeta_neg_value, zeta_prime_neg};
