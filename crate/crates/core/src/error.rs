use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("quartic symbol needs a prime p = 1 mod 4, got {0}")]
    QuarticModulus(u64),
    #[error("quartic symbol needs a quadratic residue: ({a}/{p}) != 1")]
    QuarticNonResidue { a: i64, p: u64 },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuadError {
    #[error("m = {0} is not a squarefree integer > 1")]
    BadRadicand(i64),
    #[error("continued fraction for m = {m} exceeded {cap} steps")]
    CfCap { m: i64, cap: usize },
    #[error("discriminant {disc} exceeds the configured bound {bound}")]
    DiscBound { disc: i64, bound: i64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements from different fields Q(sqrt {0}) and Q(sqrt {1})")]
    FieldMismatch(i64, i64),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MqError {
    #[error("invalid generators {gens:?}: {reason}")]
    Generators { gens: Vec<i64>, reason: String },
    #[error("field already contains sqrt 2")]
    ContainsSqrt2,
    #[error("first layer only defined for biquadratic fields")]
    NotBiquadratic,
    #[error("square reconstruction ambiguous at {bits} bits")]
    PrecisionExhausted { bits: u32 },
    #[error("Kuroda formula gave a non-integral value: 2^{num_exp} / 2^{v}")]
    NonIntegral { num_exp: u32, v: u32 },
    #[error("inconsistent unit data: {0}")]
    Consistency(String),
    #[error(transparent)]
    Quad(#[from] QuadError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LocalError {
    #[error("base field Q(sqrt {m}) has even class number {h}")]
    NotQo { m: i64, h: u64 },
    #[error("d = {d} lies in a square class of Q(sqrt {m})")]
    Degenerate { m: i64, d: i64 },
    #[error("element is not a unit at the place over {p}")]
    NotUnit { p: u64 },
    #[error("dyadic search exceeded {0} residue classes")]
    SearchBound(usize),
    #[error("d = {0} is not a squarefree integer > 1")]
    BadExtension(i64),
    #[error("Hilbert symbol of zero")]
    ZeroArgument,
    #[error("inconsistent local data: {0}")]
    Consistency(String),
    #[error(transparent)]
    Quad(#[from] QuadError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("the field is of excluded type L (r = {r} = 1 mod 8 with (q1q2/r) = 1)")]
    ExcludedL { r: u64 },
    #[error("hypothesis not met: {0}")]
    Hypothesis(String),
    #[error("finding: {0}")]
    Finding(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Mq(#[from] MqError),
    #[error(transparent)]
    Local(#[from] LocalError),
}

impl ClassifyError {
    pub fn is_resource(&self) -> bool {
        matches!(
            self,
            ClassifyError::Quad(QuadError::DiscBound { .. } | QuadError::CfCap { .. })
                | ClassifyError::Mq(MqError::PrecisionExhausted { .. })
                | ClassifyError::Mq(MqError::Quad(QuadError::DiscBound { .. }))
                | ClassifyError::Local(LocalError::SearchBound(_))
                | ClassifyError::Local(LocalError::Quad(QuadError::DiscBound { .. }))
        )
    }
}
