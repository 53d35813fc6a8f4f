use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("element {element} is not a canonical element of {group}")]
    InvalidElement { group: String, element: String },

    #[error("operands belong to different group spaces")]
    MismatchedGroups,

    #[error("support budget exceeded{}: {required} atoms needed, budget is {budget}", step.map(|s| format!(" at step {s}")).unwrap_or_default())]
    BudgetExceeded {
        required: usize,
        budget: usize,
        step: Option<usize>,
    },

    #[error("element {element} lies outside the grid window")]
    OutsideWindow { element: String },

    #[error("operation requires a discrete group; use the grid quadrature path for grid-lie kinds")]
    GridKindUnsupported,

    #[error("measure is not a probability law: total mass {mass}")]
    NotProbability { mass: f64 },

    #[error("no interior minimum: the Laplace transform is unbounded below along direction {direction:?}")]
    NoInteriorMinimum { direction: Vec<f64> },

    #[error("fit window too small: {got} points, need at least {need}")]
    WindowTooSmall { got: usize, need: usize },

    #[error("nonpositive entry at index {index} inside the fit window")]
    NonpositiveEntry { index: usize },

    #[error("twisted law mass deviates from 1 by {deviation:.3e}; (R, phi) are inconsistent")]
    InconsistentTwist { deviation: f64 },

    #[error("nu(g) = 0: the denominator function is null for the R-invariant measure")]
    NullDenominator,

    #[error("truncation mass {lost:.3e} exceeds the configured bound {bound:.3e} at step {step}")]
    TruncationExceeded { lost: f64, bound: f64, step: usize },

    #[error("condition not witnessed within the search bound {bound}")]
    NotWitnessed { bound: usize },

    #[error("invalid configuration: {0}")]
    Config(String),
}
