//! A crate-wide error with a coarse classification for process exit codes.

use thiserror::Error;

use crate::automata::AutomataError;
use crate::decomp::DecompError;
use crate::generators::GenError;
use crate::graph::GraphError;
use crate::io::IoError;
use crate::semiring::SemiringError;
use crate::wts::WtsError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Semiring(#[from] SemiringError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Wts(#[from] WtsError),
    #[error(transparent)]
    Decomp(#[from] DecompError),
    #[error(transparent)]
    Automata(#[from] AutomataError),
    #[error(transparent)]
    Generator(#[from] GenError),
}

/// How an error should be reported to a caller script.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorClass {
    /// Malformed or invalid input.
    Input,
    /// A budget, size or width limit was hit.
    Resource,
    /// An inconsistency that valid input should not produce.
    Internal,
}

impl ErrorClass {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorClass::Input => 2,
            ErrorClass::Resource => 3,
            ErrorClass::Internal => 4,
        }
    }
}

fn decomp_class(e: &DecompError) -> ErrorClass {
    match e {
        DecompError::WidthExceeded { .. } | DecompError::ColorsExhausted { .. } => ErrorClass::Resource,
        DecompError::Term(_) | DecompError::Arity(_) => ErrorClass::Internal,
        _ => ErrorClass::Input,
    }
}

fn wts_class(e: &WtsError) -> ErrorClass {
    match e {
        WtsError::BudgetExceeded { .. } => ErrorClass::Resource,
        _ => ErrorClass::Input,
    }
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Io(IoError::Decomp(e)) | Error::Decomp(e) => decomp_class(e),
            Error::Io(IoError::Wts(e)) | Error::Wts(e) => wts_class(e),
            Error::Io(_) | Error::Semiring(_) | Error::Graph(_) => ErrorClass::Input,
            Error::Automata(AutomataError::BudgetExceeded { .. }) => ErrorClass::Resource,
            Error::Automata(AutomataError::Decomp(e)) => decomp_class(e),
            Error::Automata(AutomataError::Wts(e)) => wts_class(e),
            Error::Automata(AutomataError::Alphabet(_)) => ErrorClass::Internal,
            Error::Generator(GenError::TooLarge { .. }) => ErrorClass::Resource,
            Error::Generator(GenError::Wts(e)) => wts_class(e),
            Error::Generator(_) => ErrorClass::Input,
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.class().exit_code()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        let width = Error::from(AutomataError::Decomp(DecompError::WidthExceeded { width: 5, limit: 2 }));
        assert_eq!(width.exit_code(), 3);
        assert_eq!(Error::from(IoError::Json("eof".into())).exit_code(), 2);
        assert_eq!(Error::from(WtsError::BudgetExceeded { budget: 1 }).exit_code(), 3);
        assert_eq!(Error::from(AutomataError::Alphabet("x".into())).exit_code(), 4);
        assert_eq!(Error::from(GenError::EmptyBits).exit_code(), 2);
    }
}
