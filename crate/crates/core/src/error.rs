use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("lambda must be at least 2, got {0}")]
    LambdaTooSmall(usize),

    #[error("expected {expected} alpha parameters, got {got}")]
    AlphaLength { expected: usize, got: usize },

    #[error("alpha parameters must sum to zero, got {sum:e}")]
    AlphaSum { sum: f64 },

    #[error("non-finite alpha parameter at index {0}")]
    NonFinite(usize),

    #[error("beta-bar_{index} = {value} is not positive; the Fock representation is not unitarizable")]
    NotAdmissible { index: usize, value: f64 },

    #[error("truncation dimension {dim} is too small, need at least {min}")]
    DimensionTooSmall { dim: usize, min: usize },

    #[error("invalid coherent-state label mu={mu}, alpha={alpha} for lambda={lambda}")]
    InvalidLabel { lambda: usize, mu: usize, alpha: usize },

    #[error("argument {0} outside the domain of {1}")]
    Domain(f64, &'static str),

    #[error("series diverges: {p}F{q} at y={y} (needs y < 1)")]
    Divergent { p: usize, q: usize, y: f64 },

    #[error("{what} did not converge within {cap} terms")]
    NoConvergence { what: &'static str, cap: usize },

    #[error("label |z|={absz} gives y={y} >= 1; the alpha = lambda/2 family lives on the unit disc")]
    OutsideUnitDisc { absz: f64, y: f64 },

    #[error("truncation dimension {dim} fails the tail bound, need at least {required}")]
    InsufficientDimension { dim: usize, required: usize },

    #[error("degenerate Meijer-G parameters: b_{i} - b_{j} is an integer; pointwise evaluation unavailable")]
    Degenerate { i: usize, j: usize },

    #[error("residue series lost precision at y={y}: estimated relative error {estimate:e}")]
    PrecisionLoss { y: f64, estimate: f64 },

    #[error("vector dimensions differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("operator produced z^{exponent} with nonzero coefficient {coeff}")]
    NegativeExponent { exponent: i64, coeff: f64 },
}
