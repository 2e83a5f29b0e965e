use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("EncodingError: {0}")]
    Encoding(String),

    #[error("IndexOutOfRange: index {index} in a group of order {order}")]
    IndexOutOfRange { index: u64, order: u64 },

    #[error("ParseError at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("SymmetryViolation: {0} is in the connection set but its inverse is not")]
    SymmetryViolation(String),

    #[error("IdentityInSet: a connection set may not contain the identity")]
    IdentityInSet,

    #[error("UnsupportedByTheorem: {0}")]
    UnsupportedByTheorem(String),

    #[error("InvolutionInU: {0} is an involution")]
    InvolutionInU(String),

    #[error("GroupFinite: the greedy base factor needs an infinite group")]
    GroupFinite,

    #[error("SearchBudgetExceeded: no candidate within {0} scanned elements")]
    SearchBudgetExceeded(u64),

    #[error("NotInU: {0} is not in the difference set")]
    NotInU(String),

    #[error("DifferenceAbsent: no base edge has difference {0}")]
    DifferenceAbsent(String),

    #[error("NotAnEdge: {{{0},{1}}} is not an edge of the Cayley graph")]
    NotAnEdge(String, String),

    #[error("InvalidFactor: {0} is not a factor of this factorization")]
    InvalidFactor(String),

    #[error("ShapeMismatch: {0}")]
    ShapeMismatch(String),

    #[error("DivisibilityViolation: {0}")]
    DivisibilityViolation(String),

    #[error("FinitenessViolation: {0}")]
    FinitenessViolation(String),

    #[error("InvalidTable: {0}")]
    InvalidTable(String),

    #[error("InternalError: {0}")]
    Internal(String),
}

impl Error {
    /// Short name of the error variant, as printed by the CLI.
    pub fn name(&self) -> &'static str {
        match self {
            Error::Encoding(_) => "EncodingError",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::Parse { .. } => "ParseError",
            Error::SymmetryViolation(_) => "SymmetryViolation",
            Error::IdentityInSet => "IdentityInSet",
            Error::UnsupportedByTheorem(_) => "UnsupportedByTheorem",
            Error::InvolutionInU(_) => "InvolutionInU",
            Error::GroupFinite => "GroupFinite",
            Error::SearchBudgetExceeded(_) => "SearchBudgetExceeded",
            Error::NotInU(_) => "NotInU",
            Error::DifferenceAbsent(_) => "DifferenceAbsent",
            Error::NotAnEdge(..) => "NotAnEdge",
            Error::InvalidFactor(_) => "InvalidFactor",
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::DivisibilityViolation(_) => "DivisibilityViolation",
            Error::FinitenessViolation(_) => "FinitenessViolation",
            Error::InvalidTable(_) => "InvalidTable",
            Error::Internal(_) => "InternalError",
        }
    }

    /// The mathematical condition behind the error.
    pub fn hint(&self) -> &'static str {
        match self {
            Error::Encoding(_) | Error::Parse { .. } => {
                "elements are written in the canonical normal form of their group"
            }
            Error::IndexOutOfRange { .. } => {
                "enumeration indices of a finite group stop at its order"
            }
            Error::SymmetryViolation(_) | Error::IdentityInSet => {
                "a connection set S satisfies S = -S and 0 is not in S"
            }
            Error::UnsupportedByTheorem(_) => {
                "a G-regular 1-factorization is only constructed when |S \\ I(G)| is 0 or |G|"
            }
            Error::InvolutionInU(_) => {
                "the base factor has an injective difference list, so U may hold no involution"
            }
            Error::GroupFinite => {
                "the greedy chain needs every section of the well-order to be small"
            }
            Error::SearchBudgetExceeded(_) => {
                "(U + g) minus the finitely many excluded vertices is nonempty when |U| = |G|"
            }
            Error::NotInU(_) | Error::DifferenceAbsent(_) => {
                "every element of U occurs exactly once as a difference of the base factor"
            }
            Error::NotAnEdge(..) => "{x,y} is an edge of Cay[G:S] iff x - y lies in S",
            Error::InvalidFactor(_) => {
                "factors are Inv(s) for involutions s in S or translates of the base factor"
            }
            Error::ShapeMismatch(_) => {
                "lifting needs G = G1 x H with the factorization living on H"
            }
            Error::DivisibilityViolation(_) => {
                "m'|m means m' <= m for infinite m and m' divides m for finite m"
            }
            Error::FinitenessViolation(_) => "embedding needs the product mn to be infinite",
            Error::InvalidTable(_) => "a factor table is an H-regular 1-factorization of Cay[H:S]",
            Error::Internal(_) => {
                "a base edge (a, b) with b - a = y - x yields the translate -a + x"
            }
        }
    }

    /// Errors that mean the input violates a hypothesis of the construction.
    pub fn is_hypothesis_violation(&self) -> bool {
        matches!(
            self,
            Error::UnsupportedByTheorem(_)
                | Error::InvolutionInU(_)
                | Error::GroupFinite
                | Error::DivisibilityViolation(_)
                | Error::FinitenessViolation(_)
                | Error::ShapeMismatch(_)
                | Error::SymmetryViolation(_)
                | Error::IdentityInSet
                | Error::SearchBudgetExceeded(_)
        )
    }
}
