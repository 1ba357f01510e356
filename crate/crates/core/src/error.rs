use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown cell id {0}")]
    UnknownCell(u32),

    #[error("domain error: {0}")]
    Domain(String),

    #[error(
        "could not place terrestrial UE {ue_index} after {attempts} attempts; \
         occupancy is infeasible for this (n_ues, n_rbs, grid, q)"
    )]
    InfeasibleOccupancy { ue_index: usize, attempts: usize },

    #[error("not enough available RBs: need {needed}, have {available}")]
    InsufficientRbs { needed: usize, available: usize },

    #[error("config error: {0}")]
    Config(String),

    #[error("realization {index} failed: {source}")]
    Realization {
        index: u64,
        #[source]
        source: Box<SimError>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, SimError>;
