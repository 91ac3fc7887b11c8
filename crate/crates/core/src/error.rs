use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Rotation numbers are not units modulo the group order.
    #[error("invalid lens datum (p={p}, m={m}, n={n}): rotation numbers must be coprime to p and p >= 2")]
    InvalidLensDatum { p: i64, m: i64, n: i64 },

    #[error("generator {generator} violates the group relations in degree {degree}: {reason}")]
    RelationViolation {
        degree: usize,
        generator: usize,
        reason: String,
    },

    #[error("character average {value} in degree {degree} is not a nonnegative integer")]
    NonIntegralMultiplicity { degree: usize, value: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("character of Z/{character_order} used with a group of order {group_order}")]
    CharacterMismatch {
        group_order: u64,
        character_order: u64,
    },

    #[error("flat line bundle holonomy must be positive, got {0}")]
    NonpositiveHolonomy(String),

    #[error(
        "no representation-valued leaf closure data for stratum {stratum:?} and character {index}"
    )]
    MissingRhoTable { stratum: String, index: u64 },

    #[error("signature problem has no original p1 integral")]
    MissingOriginalIntegral,

    #[error("io error on {path}: {message}")]
    Io { path: String, message: String },

    #[error("malformed JSON: {0}")]
    Parse(String),

    #[error("schema error at `{field}`: {message}")]
    Schema { field: String, message: String },

    #[error("validation error: {0}")]
    Validation(String),
}
