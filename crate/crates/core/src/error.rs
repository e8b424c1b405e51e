use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("series have different relative dimensions ({left} and {right})")]
    MismatchedL { left: u32, right: u32 },
    #[error("exp needs a zero constant term")]
    NonzeroConstant,
    #[error("log needs constant term one")]
    ConstantNotOne,
    #[error("series is not invertible")]
    NotInvertible,
    #[error("t variables occur but no t bound was given")]
    UnboundedT,
    #[error("no image given for {0}")]
    MissingImage(String),
    #[error("image of {0} is not homogeneous of the variable's degree")]
    InhomogeneousImage(String),
    #[error("series is not s-linear")]
    NotSLinear,
    #[error("unexpected variable {0}")]
    UnexpectedVariable(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown algebra token `{0}`")]
    UnknownAlgebra(String),
    #[error("distinguished element {0} does not occur in the multiset")]
    DistinguishedMissing(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SingularityError {
    #[error("{name} is not realizable for l = {l}")]
    Unrealizable { name: String, l: u32 },
    #[error("degree {k} exceeds M(l) + l = {limit} for l = {l}")]
    BeyondMatherBound { l: u32, k: u32, limit: u32 },
    #[error("bundled catalog is incomplete for l = {l}: target codimensions {from}..={to} are not covered")]
    CatalogIncomplete { l: u32, from: u32, to: u32 },
    #[error("catalog entry {0} is missing")]
    MissingEntry(String),
    #[error("invalid catalog data: {0}")]
    InvalidCatalog(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PrototypeError {
    #[error("algebra {name} shows no stabilization up to weighted degree {bound}")]
    NonFinite { name: String, bound: u32 },
    #[error("genotype component {component} of {name} is not quasihomogeneous")]
    NotQuasihomogeneous { name: String, component: usize },
    #[error("prototype of {0} has a zero source weight")]
    ZeroSourceWeight(String),
    #[error("{name} has {components} nonzero components, more than a + l = {limit}")]
    TooManyComponents { name: String, components: usize, limit: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("Euler class ratio is not a polynomial")]
    NonDivisible,
    #[error("zero weight")]
    ZeroWeight,
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("table has no entry for {0}")]
    MissingEntry(String),
    #[error("entry {0} is not s-linear")]
    NotSLinear(String),
    #[error("entry {0} is not a c-only series")]
    NotCOnly(String),
    #[error("{0} must have a distinguished element")]
    NotSFlavor(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("degree {degree}: system is underdetermined (nullspace dimension {nullity})")]
    Underdetermined { degree: u32, nullity: usize },
    #[error("degree {degree}: system is inconsistent; violated rows: {rows:?}")]
    Inconsistent { degree: u32, rows: Vec<String> },
    #[error("the prototype condition is not imposed for the pair Psi = {{zeta}} ({0})")]
    SelfPair(String),
    #[error("solver accepts only the empty multisingularity or pure A0 powers, got {0}")]
    UnsupportedPsi(String),
    #[error(transparent)]
    Singularity(#[from] SingularityError),
    #[error(transparent)]
    Prototype(#[from] PrototypeError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MondError {
    #[error("master series is truncated at {have}, degree {need} is required")]
    TruncationTooLow { have: u32, need: u32 },
    #[error("K polynomials up to K_{need} are required, only {have} available")]
    KSetTooShort { have: usize, need: usize },
    #[error("invalid weight data: {0}")]
    InvalidWeights(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("{context}: {msg}")]
    Schema { context: String, msg: String },
    #[error("{context}: line {line}, column {column}: {msg}")]
    Json { context: String, line: usize, column: usize, msg: String },
}
