//! Exact hitting-time quantities for single points and small sets.

mod inclusion_exclusion;
mod kernel;
mod laplace;
mod survival;

pub use inclusion_exclusion::{inclusion_exclusion_sum, joint_hit_probability};
pub use laplace::{
    beta_product_exact, laplace_alternating_exact, laplace_approximation, laplace_formula,
    lumped_laplace, lumped_laplace_all, LaplaceQuery,
};
pub use survival::{
    full_survival, lumped_survival, max_exponential_deviation, p_single, survival_all_starts,
    AllStartsSurvival, ExponentialDeviation, LumpedChain, SurvivalStart, SurvivalTable,
    FULL_MAX_DIM, HORIZON_BUDGET,
};
