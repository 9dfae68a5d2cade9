use thiserror::Error;

/// Errors raised by the set, functor, fibration and induction layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("composition mismatch: codomain {lhs} does not equal domain {rhs}")]
    Composition { lhs: String, rhs: String },

    #[error("element {element} is not in the codomain {cod}")]
    NotInCodomain { element: String, cod: String },

    #[error("element {element} is not in the domain {dom}")]
    NotInDomain { element: String, dom: String },

    #[error("function table is not total on its domain (missing {element})")]
    NotTotal { element: String },

    #[error("value {value} is not well-shaped for {code}")]
    Shape { code: String, value: String },

    #[error("decoration arity mismatch: {positions} positions but {proofs} proofs")]
    DecorationArity { positions: usize, proofs: usize },

    #[error("codomain mismatch: expected {expected}, got {got}")]
    CodomainMismatch { expected: String, got: String },

    #[error("domain mismatch: expected {expected}, got {got}")]
    DomainMismatch { expected: String, got: String },

    #[error("{op} is only defined for the families fibration")]
    FamiliesOnly { op: &'static str },

    #[error("{op} does not support {code}; only polynomial codes (Const, Id, Sum, Prod)")]
    UnsupportedCode { op: &'static str, code: String },

    #[error("codomain of the given function is not the comprehension carrier of the target")]
    NotComprehensionCodomain,

    #[error("morphism source is not a truth predicate")]
    NotTruthSource,

    #[error("predicate lives over the wrong carrier: expected {expected}, got {got}")]
    CarrierMismatch { expected: String, got: String },

    #[error("term is not built over {expected}")]
    WrongCode { expected: String },

    #[error("induction produced a proof for {computed} instead of the input term {input}")]
    SoundnessViolation { input: String, computed: String },

    #[error("fiber map is missing carrier element {element}")]
    MissingFiber { element: String },

    #[error("members are not a subset of the carrier (offending element {element})")]
    NotASubset { element: String },
}

pub type Result<T> = std::result::Result<T, Error>;

/// A parse failure with a source position, used by the element grammar and the
/// declaration DSL.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl ParseError {
    pub fn new(line: usize, col: usize, msg: impl Into<String>) -> Self {
        ParseError {
            line,
            col,
            msg: msg.into(),
        }
    }
}
