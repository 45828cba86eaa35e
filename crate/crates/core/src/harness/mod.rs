//! Inequality margins, seeded campaigns, the small-`eps` necessity check and
//! the extremal search.

mod campaign;
mod kind;
mod necessity;
mod search;
mod trial;

pub use campaign::{check_duality, run_campaign, ConjectureReport, FailedTrial};
pub use kind::{conjugate_exponent, default_alpha_grid, default_level_ratios, riesz_target_exponent, InequalityKind};
pub use necessity::{
    default_eps_grid, necessity_check, necessity_function, necessity_projection, necessity_rho, NecessityResult,
    Verdict,
};
pub use search::{extremal_search, SearchConfig, SearchResult};
pub use trial::{
    draw_sample, evaluate_sides, run_trial, HarnessConfig, Sample, Sides, TrialRecord, MAX_REJECTIONS, RECHECK_FACTOR,
    ZERO_FREE_MARGIN,
};
