use thiserror::Error;

/// Failure to read one of the textual formats (formulas, rules, bases,
/// systems, arguments).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty input")]
    Empty,
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        offset: usize,
        line: usize,
        column: usize,
        message: String,
    },
}

impl ParseError {
    pub(crate) fn at(text: &str, offset: usize, message: impl Into<String>) -> Self {
        let offset = offset.min(text.len());
        let before = &text[..offset];
        let line = before.matches('\n').count() + 1;
        let column = before.len() - before.rfind('\n').map(|i| i + 1).unwrap_or(0) + 1;
        ParseError::Syntax {
            offset,
            line,
            column,
            message: message.into(),
        }
    }

    /// Re-anchor an error raised while parsing a single line of a larger file.
    pub(crate) fn on_line(self, line_no: usize) -> Self {
        match self {
            ParseError::Syntax {
                offset,
                column,
                message,
                ..
            } => ParseError::Syntax {
                offset,
                line: line_no,
                column,
                message,
            },
            ParseError::Empty => ParseError::Syntax {
                offset: 0,
                line: line_no,
                column: 1,
                message: "empty input".into(),
            },
        }
    }

    pub fn offset(&self) -> usize {
        match self {
            ParseError::Empty => 0,
            ParseError::Syntax { offset, .. } => *offset,
        }
    }
}
