//! Bagging, random subspaces and AdaBoost over QNN base predictors, plus
//! combination rules and the jury theorem probability.

mod boosting;
mod combine;
mod jury;
mod model;
mod sampling;

pub use boosting::{adaboost_r2, samme_r, R2Round, R2Trace, SammeRRound, SammeRTrace, BETA_MIN};
pub use combine::{combine, samme_r_contribution, CombinationRule};
pub use jury::{jury_probability, jury_probability_with_threshold};
pub use model::{
    fit_adaboost_r2, fit_adaboost_samme_r, fit_bagging, fit_ensemble, EnsembleConfig, EnsembleModel, Member,
    Scheme,
};
pub use sampling::{bootstrap_indices, subspace_indices, weighted_bootstrap, RoundingMode};
