use thiserror::Error;

use crate::bredon::BredonError;
use crate::character::CharError;
use crate::group::GroupError;

/// Top-level error, grouped by the CLI exit code it maps to.
#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error in {location}: {message}")]
    Parse { location: String, message: String },
    #[error("validation failed in {section}: {message}")]
    Validation { section: String, message: String },
    #[error("computation inconsistency: {0}")]
    Computation(String),
}

impl Error {
    pub fn parse(location: impl Into<String>, message: impl ToString) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.to_string(),
        }
    }

    pub fn validation(section: impl Into<String>, message: impl ToString) -> Self {
        Error::Validation {
            section: section.into(),
            message: message.to_string(),
        }
    }

    /// 1 for unreadable or unparsable input, 2 for failed validation gates,
    /// 3 for inconsistencies found while computing.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } | Error::Parse { .. } => 1,
            Error::Validation { .. } => 2,
            Error::Computation(_) => 3,
        }
    }
}

fn char_is_computational(e: &CharError) -> bool {
    matches!(
        e,
        CharError::NonIntegral { .. }
            | CharError::NotInSpan { .. }
            | CharError::Group(GroupError::AmbiguousLift { .. })
    )
}

impl Error {
    /// Classifies a character-theory failure found while evaluating `context`.
    pub(crate) fn from_char(context: &str, e: CharError) -> Self {
        if char_is_computational(&e) {
            Error::Computation(format!("{context}: {e}"))
        } else {
            Error::validation(context, e)
        }
    }
}

impl From<BredonError> for Error {
    fn from(e: BredonError) -> Self {
        match &e {
            BredonError::SquareNonzero { .. } => Error::validation("boundary", &e),
            BredonError::Incidence { source, .. } if char_is_computational(source) => {
                Error::Computation(e.to_string())
            }
            BredonError::IncidenceGroup {
                source: GroupError::AmbiguousLift { .. },
                ..
            } => Error::Computation(e.to_string()),
            BredonError::Incidence { id, .. } | BredonError::IncidenceGroup { id, .. } => {
                Error::validation(format!("boundary {id}"), &e)
            }
            BredonError::UnknownIncidence(_) => Error::validation("boundary", &e),
            BredonError::Linalg(_) => Error::Computation(e.to_string()),
        }
    }
}
