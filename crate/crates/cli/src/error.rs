use gitenergy::corpus::CorpusError;
use gitenergy::exact::ExactError;
use gitenergy::expansion::ExpansionError;
use gitenergy::geom::GeomError;
use gitenergy::ideals::IdealError;
use gitenergy::weights::WeightError;
use serde_json::json;
use thiserror::Error;

pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCONSISTENT: i32 = 3;
pub const EXIT_POLE: i32 = 4;
pub const EXIT_METRIC: i32 = 5;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Expansion(#[from] ExpansionError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error("{0} check(s) failed")]
    VerifyFailed(usize),
}

fn exact_code(e: &ExactError) -> i32 {
    match e {
        ExactError::InconsistentSamples { .. } => EXIT_INCONSISTENT,
        ExactError::Pole { .. } => EXIT_POLE,
        ExactError::Parse(_) => EXIT_USAGE,
        _ => EXIT_FAILED,
    }
}

fn ideal_code(e: &IdealError) -> i32 {
    match e {
        IdealError::Invalid(_) | IdealError::DegreeTooSmall { .. } => EXIT_USAGE,
        IdealError::NoStabilization { .. } => EXIT_INCONSISTENT,
        IdealError::Exact(e) => exact_code(e),
    }
}

fn weight_code(e: &WeightError) -> i32 {
    match e {
        WeightError::DimensionMismatch { .. } | WeightError::Parse(_) | WeightError::EmptyScheme => EXIT_USAGE,
        WeightError::NoStabilization { .. } => EXIT_INCONSISTENT,
        WeightError::RankDeficient { .. } => EXIT_FAILED,
        WeightError::Ideal(e) => ideal_code(e),
        WeightError::Exact(e) => exact_code(e),
    }
}

fn expansion_code(e: &ExpansionError) -> i32 {
    match e {
        ExpansionError::LevelOutOfRange { .. } | ExpansionError::BadHilbertPolynomial { .. } => EXIT_USAGE,
        ExpansionError::PoleAtM { .. } => EXIT_POLE,
        ExpansionError::MismatchBeyondSign { .. } => EXIT_FAILED,
        ExpansionError::Exact(e) => exact_code(e),
    }
}

fn geom_code(e: &GeomError) -> i32 {
    match e {
        GeomError::NonPositiveMetric { .. } => EXIT_METRIC,
        _ => EXIT_USAGE,
    }
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => EXIT_USAGE,
            CliError::Ideal(e) => ideal_code(e),
            CliError::Weight(e) => weight_code(e),
            CliError::Expansion(e) => expansion_code(e),
            CliError::Geom(e) => geom_code(e),
            CliError::Corpus(e) => match e {
                CorpusError::Ideal(e) => ideal_code(e),
                CorpusError::Geom(e) => geom_code(e),
                CorpusError::Weight(e) => weight_code(e),
                _ => EXIT_USAGE,
            },
            CliError::VerifyFailed(_) => EXIT_FAILED,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.code() {
            EXIT_USAGE => "usage",
            EXIT_INCONSISTENT => "inconsistent-samples",
            EXIT_POLE => "pole-at-m",
            EXIT_METRIC => "non-positive-metric",
            _ => match self {
                CliError::VerifyFailed(_) => "verify-failed",
                _ => "failed",
            },
        }
    }

    pub fn to_json(&self) -> String {
        json!({ "error": self.kind(), "exit_code": self.code(), "message": self.to_string() }).to_string()
    }
}

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        let pole = CliError::from(ExpansionError::PoleAtM { m: "0".into() });
        assert_eq!((pole.code(), pole.kind()), (4, "pole-at-m"));
        let metric = CliError::from(GeomError::NonPositiveMetric { chart: 0, z: String::new() });
        assert_eq!(metric.code(), 5);
        let inconsistent = CliError::from(WeightError::Exact(ExactError::InconsistentSamples { m: "3".into(), degree: 2 }));
        assert_eq!(inconsistent.code(), 3);
        assert_eq!(CliError::from(WeightError::NoStabilization { cap: 40 }).code(), 3);
        assert_eq!(CliError::from(WeightError::Parse("1,x".into())).code(), 2);
        assert_eq!(CliError::from(CorpusError::Empty("dir".into())).code(), 2);
        assert_eq!(CliError::from(ExpansionError::LevelOutOfRange { l: 3, max: 2 }).code(), 2);
        assert_eq!(CliError::VerifyFailed(1).code(), 1);
        let v: serde_json::Value = serde_json::from_str(&pole.to_json()).unwrap();
        assert_eq!(v["exit_code"], 4);
    }
}
