//! Text format for systems and δ-operators: a hand-written lexer and
//! recursive-descent parser with positioned diagnostics, and a canonical
//! printer that the parser inverts exactly.
//!
//! ```text
//! system   := "rank" INT NL "matrix" NL row{rank}
//! row      := "[" entry ("," entry)* "]" NL
//! operator := "operator" sum
//! sum      := ("+" | "-")? prod (("+" | "-") prod)*
//! prod     := atom ("*" atom)*
//! atom     := coeff | "z" ("^" SINT)? | "d" ("^" INT)? | "(" sum ")"
//! coeff    := rat | "i" | rat "i"
//! rat      := INT ("/" INT)?
//! ```
//!
//! `d` is the Euler derivation `δ = z·d/dz`, allowed only in operator input;
//! products follow the Ore rule `δ·z = z·δ + z`. `#` starts a comment.

mod lexer;
mod parser;
mod printer;

use std::fmt;

use thiserror::Error;

pub use lexer::{tokenize, Token, TokenKind};
pub use parser::{parse_input, parse_laurent};
pub use printer::{print_canonical, print_laurent, print_operator, print_system};

use crate::connection::ConnectionSystem;
use crate::formal::{FormalError, ScalarOperator};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceDocument {
    pub text: String,
    pub origin: String,
}

impl SourceDocument {
    pub fn new(text: impl Into<String>, origin: impl Into<String>) -> Self {
        SourceDocument { text: text.into(), origin: origin.into() }
    }

    pub fn stdin(text: &str) -> Self {
        SourceDocument::new(text, "<stdin>")
    }
}

/// Position (1-based line and character column) of the first offending
/// token, with what the parser would have accepted there.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct ParseDiagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub expected: Vec<String>,
}

impl ParseDiagnostic {
    pub fn new(line: usize, column: usize, message: String, expected: Vec<String>) -> Self {
        ParseDiagnostic { line, column, message, expected }
    }
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(" or "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ParsedInput {
    System(ConnectionSystem),
    Operator(ScalarOperator),
}

impl ParsedInput {
    /// The system itself, or the companion system of an operator.
    pub fn to_system(&self) -> Result<ConnectionSystem, FormalError> {
        match self {
            ParsedInput::System(s) => Ok(s.clone()),
            ParsedInput::Operator(l) => l.companion(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connection::LaurentPoly;
    use crate::exact::GaussianRational;
    use num_traits::{One, Zero};

    fn parse(s: &str) -> Result<ParsedInput, ParseDiagnostic> {
        parse_input(&SourceDocument::stdin(s))
    }

    fn at(s: &str) -> (usize, usize) {
        let d = parse(s).unwrap_err();
        (d.line, d.column)
    }

    #[test]
    fn spec_examples() {
        let ParsedInput::System(s) = parse("rank 1\nmatrix\n[ z^-1 ]").unwrap() else { panic!() };
        assert_eq!(s.entry(0, 0), &LaurentPoly::z_pow(-1));

        let ParsedInput::Operator(l) = parse("operator d^2 - (1/2)*d").unwrap() else { panic!() };
        assert_eq!(
            l.coeffs(),
            &[LaurentPoly::zero(), LaurentPoly::constant(GaussianRational::ratio(-1, 2)), LaurentPoly::one()]
        );

        let ParsedInput::System(s) = parse("rank 2\nmatrix\n[ 0, 1 ]\n[ i, 0 ]").unwrap() else { panic!() };
        assert_eq!(s.entry(1, 0), &LaurentPoly::constant(GaussianRational::i()));
    }

    #[test]
    fn ore_products_and_signs() {
        // d*z = z*d + z
        let ParsedInput::Operator(l) = parse("operator d*z").unwrap() else { panic!() };
        assert_eq!(l.coeffs(), &[LaurentPoly::z_pow(1), LaurentPoly::z_pow(1)]);
        let ParsedInput::System(s) = parse("rank 1\nmatrix\n[ -(1 + 2i)*z + 1 ]").unwrap() else { panic!() };
        assert_eq!(s.entry(0, 0).coeff(1), GaussianRational::from_ints(-1, -2));
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# euler\n\nrank 1   # one\nmatrix\n\n[ z^-1 ]   # entry\n\n";
        assert!(matches!(parse(text).unwrap(), ParsedInput::System(_)));
    }

    #[test]
    fn diagnostics_point_at_first_bad_token() {
        assert_eq!(at("rank 2\nmatrix\n[ 1, 2 ]"), (3, 9));
        assert_eq!(at("rank 1\nmatrix\n[ 1, 2 ]"), (3, 4));
        assert_eq!(at("rank 1\nmatrix\n[ 1/0 ]"), (3, 5));
        assert_eq!(at("rank 1\nmatrix\n[ d ]"), (3, 3));
        assert_eq!(at("operator 3"), (1, 1));
        assert_eq!(at("rank 0\nmatrix\n"), (1, 6));
        assert_eq!(at("rank 1\nmatrix\n[ z^ ]"), (3, 6));
        assert_eq!(at("rank 1\nmatrix\n[ 1 ]\n[ 2 ]"), (4, 1));
        assert_eq!(at("matrix"), (1, 1));
        assert_eq!(at("operator d^2 +"), (1, 15));
    }

    #[test]
    fn single_expressions() {
        assert_eq!(parse_laurent("1 - i").unwrap(), LaurentPoly::constant(GaussianRational::from_ints(1, -1)));
        assert_eq!(
            parse_laurent("-(1/2)*z^-1").unwrap(),
            LaurentPoly::z_pow(-1).scale(&GaussianRational::ratio(-1, 2))
        );
        assert_eq!(parse_laurent("d").unwrap_err().column, 1);
        assert_eq!(parse_laurent("1 2").unwrap_err().column, 3);
    }

    #[test]
    fn companion_conversion() {
        let p = parse("operator d^2 - z^-1").unwrap();
        let s = p.to_system().unwrap();
        assert_eq!(s.entry(1, 0), &LaurentPoly::z_pow(-1));
        assert!(parse("operator (1 + z)*d + 1").unwrap().to_system().is_err());
    }

    #[test]
    fn printer_round_trip_samples() {
        for text in [
            "rank 2\nmatrix\n[ (1/2 - 3i)*z^-3 + z, -i ]\n[ 0, 7/5 ]",
            "operator z^-1*d^3 + (1 + z)*d - (2/3i)*z^4",
            "operator d^2 + d - z^-3",
        ] {
            let p = parse(text).unwrap();
            let printed = print_canonical(&p);
            assert_eq!(printed, text);
            assert_eq!(parse(&printed).unwrap(), p);
        }
    }
}
