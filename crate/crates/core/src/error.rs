use thiserror::Error;

use crate::ring::Generator;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("series has no invertible leading term (valuation unknown up to order {order})")]
    NotInvertible { order: i64 },

    #[error("functional inversion needs valuation exactly 1, found {found}")]
    InversionValuation { found: i64 },

    #[error("composition needs an inner series of positive valuation, found {found}")]
    CompositionValuation { found: i64 },

    #[error("series operation would drop the truncation order to {order}")]
    OrderUnderflow { order: i64 },

    #[error("series variables differ ({0} vs {1})")]
    VariableMismatch(char, char),

    #[error("{op} needs {what}")]
    Domain { op: &'static str, what: String },

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("indicial polynomial is not maximally unipotent: {0}")]
    NotUnipotent(String),

    #[error("unsupported Eisenstein weight {0}")]
    UnsupportedWeight(u32),

    #[error("missing modular anomaly table entry Z({g};{n})")]
    MissingTableEntry { g: u32, n: u32 },

    #[error("no derivation rule for generator {0}")]
    UncoveredGenerator(Generator),

    #[error("cannot differentiate a coefficient of tensor type (rank {rank}, weight {weight}) without connection data")]
    UncoveredCoefficient { rank: i32, weight: i32 },

    #[error("K-degree {found} exceeds the allowed {max} in monomial {monomial}")]
    KDegree { found: u32, max: u32, monomial: String },

    #[error("inconsistent integration targets at monomial {monomial}: {detail}")]
    InconsistentTargets { monomial: String, detail: String },

    #[error("integration constants of weight {weight} are not excluded at genus {genus}")]
    IntegrationConstant { genus: u32, weight: i32 },

    #[error("missing genus {0} data")]
    MissingGenus(u32),

    #[error("invalid genus bound {0}: the recursion starts at genus 2")]
    GenusBound(u32),

    #[error("model error: {0}")]
    Model(String),

    #[error("model consistency failure ({equation}): {detail}")]
    Consistency { equation: String, detail: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("identity '{name}' fails first at exponent {exponent}")]
    Mismatch { name: String, exponent: i64 },
}
