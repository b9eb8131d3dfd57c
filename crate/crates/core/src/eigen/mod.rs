//! Rayleigh–Ritz approximations, the minimal-residual Ritz selection, and
//! the generalized minimal residual (GMR) eigenpair.

mod gmr;
mod race;
mod ritz;

pub use gmr::{gmr_eigenpair, gmr_projected, GmrEigenpair, GmrSolution};
pub use race::{eig_race, EigRunTrace, EpsStops};
pub use ritz::{
    count_good_ritz, count_good_ritz_trace, match_good_ritz, min_residual_pair, rayleigh_ritz,
    ritz_residuals, RitzPair, RitzSet,
};
