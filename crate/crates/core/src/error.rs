use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("x = {x} lies outside the domain [{lo}, {hi}] of {family}")]
    Domain {
        family: &'static str,
        x: f64,
        lo: f64,
        hi: f64,
    },
    #[error("absolute risk aversion undefined at x = {x}: p' = 0 but p'' = {d2}")]
    UndefinedAra { x: f64, d2: f64 },
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("inadmissible production/cost pair: {0}")]
    Inadmissible(String),
    #[error("production is flat near x = {x}; certainty equivalent not invertible")]
    FlatRegion { x: f64 },
    #[error("degenerate states for m = {m}: p(x* + s_(m+1) - s_m) equals p(x*)")]
    DegenerateStates { m: usize },
    #[error("unsupported ARA classification {0:?} for this operation")]
    UnsupportedClassification(crate::functions::AraVerdict),
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("empty grid")]
    EmptyGrid,
    #[error("grid under-resolved: {0}")]
    Resolution(String),
    #[error("model error: {0}")]
    Model(String),
}

pub type Result<T> = std::result::Result<T, ModelError>;

pub(crate) fn check_param(
    name: &'static str,
    value: f64,
    ok: bool,
    reason: &'static str,
) -> Result<()> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(ModelError::InvalidParameter {
            name,
            value,
            reason,
        })
    }
}
