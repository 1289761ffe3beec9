use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::lexer::{tokenize, Token, TokenKind};
use super::{ParseDiagnostic, ParsedInput, SourceDocument};
use crate::connection::{ConnectionSystem, LaurentMatrix, LaurentPoly};
use crate::exact::GaussianRational;
use crate::formal::{OperatorPoly, ScalarOperator};

/// Largest accepted power of `d`.
const MAX_DELTA_POWER: usize = 64;
/// Largest accepted system rank.
const MAX_RANK: usize = 64;

pub fn parse_input(doc: &SourceDocument) -> Result<ParsedInput, ParseDiagnostic> {
    let tokens = tokenize(&doc.text)?;
    let mut p = Parser { tokens, pos: 0, operator_mode: false };
    let out = match p.peek().kind {
        TokenKind::Rank => ParsedInput::System(p.system()?),
        TokenKind::Operator => ParsedInput::Operator(p.operator()?),
        _ => return Err(p.unexpected(&["'rank'", "'operator'"])),
    };
    p.skip_newlines();
    p.expect(TokenKind::Eof, &["end of input"])?;
    Ok(out)
}

/// Parses a single `sum` expression without `d`, e.g. a matrix entry.
pub fn parse_laurent(text: &str) -> Result<LaurentPoly, ParseDiagnostic> {
    let tokens = tokenize(text)?;
    let mut p = Parser { tokens, pos: 0, operator_mode: false };
    p.skip_newlines();
    let start = p.peek().clone();
    let value = p.sum()?;
    if !value.is_scalar() {
        return Err(Parser::error_at(&start, "expression cannot contain 'd'"));
    }
    p.skip_newlines();
    p.expect(TokenKind::Eof, &["end of input"])?;
    Ok(value.coeffs().first().cloned().unwrap_or_else(LaurentPoly::zero))
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    operator_mode: bool,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.kind != TokenKind::Eof {
            self.pos += 1;
        }
        t
    }

    fn at(&self, kind: &TokenKind) -> bool {
        std::mem::discriminant(&self.peek().kind) == std::mem::discriminant(kind)
    }

    fn unexpected(&self, expected: &[&str]) -> ParseDiagnostic {
        let t = self.peek();
        ParseDiagnostic::new(
            t.line,
            t.column,
            format!("unexpected {}", t.kind.describe()),
            expected.iter().map(|s| s.to_string()).collect(),
        )
    }

    fn error_at(t: &Token, message: impl Into<String>) -> ParseDiagnostic {
        ParseDiagnostic::new(t.line, t.column, message.into(), vec![])
    }

    fn expect(&mut self, kind: TokenKind, expected: &[&str]) -> Result<Token, ParseDiagnostic> {
        if self.at(&kind) {
            Ok(self.bump())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn skip_newlines(&mut self) {
        while self.at(&TokenKind::Newline) {
            self.bump();
        }
    }

    /// A newline, or end of input when nothing else may follow.
    fn end_of_line(&mut self) -> Result<(), ParseDiagnostic> {
        if self.at(&TokenKind::Newline) {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&["end of line"]))
        }
    }

    fn int(&mut self) -> Result<(BigInt, Token), ParseDiagnostic> {
        let t = self.expect(TokenKind::Int(BigInt::zero()), &["integer"])?;
        match &t.kind {
            TokenKind::Int(n) => Ok((n.clone(), t.clone())),
            _ => unreachable!("checked by expect"),
        }
    }

    fn system(&mut self) -> Result<ConnectionSystem, ParseDiagnostic> {
        self.bump();
        let (n, tok) = self.int()?;
        let rank = n
            .to_usize()
            .filter(|r| (1..=MAX_RANK).contains(r))
            .ok_or_else(|| Parser::error_at(&tok, format!("rank must be between 1 and {MAX_RANK}, got {n}")))?;
        self.end_of_line()?;
        self.expect(TokenKind::Matrix, &["'matrix'"])?;
        self.end_of_line()?;
        let mut m = LaurentMatrix::zeros(rank, rank);
        for i in 0..rank {
            if !self.at(&TokenKind::LBracket) {
                let t = self.peek();
                return Err(ParseDiagnostic::new(
                    t.line,
                    t.column,
                    format!("row count mismatch: expected {rank} rows, found {i}"),
                    vec!["'['".into()],
                ));
            }
            let row = self.row(rank)?;
            for (j, e) in row.into_iter().enumerate() {
                m[(i, j)] = e;
            }
            if i + 1 < rank {
                self.end_of_line()?;
            } else if !self.at(&TokenKind::Eof) {
                self.end_of_line()?;
                if self.at(&TokenKind::LBracket) {
                    let t = self.peek();
                    return Err(ParseDiagnostic::new(
                        t.line,
                        t.column,
                        format!("row count mismatch: expected {rank} rows, found more"),
                        vec!["end of input".into()],
                    ));
                }
            }
        }
        Ok(ConnectionSystem::new(m, "").expect("square by construction"))
    }

    fn row(&mut self, rank: usize) -> Result<Vec<LaurentPoly>, ParseDiagnostic> {
        self.bump();
        let mut entries = Vec::with_capacity(rank);
        loop {
            let start = self.peek().clone();
            let value = self.sum()?;
            if !value.is_scalar() {
                return Err(Parser::error_at(&start, "matrix entries cannot contain 'd'"));
            }
            entries.push(value.coeffs().first().cloned().unwrap_or_else(LaurentPoly::zero));
            if self.at(&TokenKind::Comma) {
                if entries.len() == rank {
                    let t = self.peek();
                    return Err(ParseDiagnostic::new(
                        t.line,
                        t.column,
                        format!("row has more than {rank} entries"),
                        vec!["']'".into()],
                    ));
                }
                self.bump();
                continue;
            }
            if self.at(&TokenKind::RBracket) {
                if entries.len() < rank {
                    let t = self.peek();
                    return Err(ParseDiagnostic::new(
                        t.line,
                        t.column,
                        format!("row has {} entries, expected {rank}", entries.len()),
                        vec!["','".into()],
                    ));
                }
                self.bump();
                return Ok(entries);
            }
            return Err(self.unexpected(&["','", "']'", "'+'", "'-'", "'*'"]));
        }
    }

    fn operator(&mut self) -> Result<ScalarOperator, ParseDiagnostic> {
        let head = self.bump();
        self.operator_mode = true;
        let value = self.sum()?;
        if !(self.at(&TokenKind::Newline) || self.at(&TokenKind::Eof)) {
            return Err(self.unexpected(&["'+'", "'-'", "'*'", "end of line"]));
        }
        ScalarOperator::from_poly(value).map_err(|_| Parser::error_at(&head, "operator must have order at least 1"))
    }

    fn sum(&mut self) -> Result<OperatorPoly, ParseDiagnostic> {
        let negate_first = match self.peek().kind {
            TokenKind::Minus => {
                self.bump();
                true
            }
            TokenKind::Plus => {
                self.bump();
                false
            }
            _ => false,
        };
        let mut acc = self.prod()?;
        if negate_first {
            acc = acc.neg();
        }
        loop {
            match self.peek().kind {
                TokenKind::Plus => {
                    self.bump();
                    acc = acc.add(&self.prod()?);
                }
                TokenKind::Minus => {
                    self.bump();
                    acc = acc.sub(&self.prod()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn prod(&mut self) -> Result<OperatorPoly, ParseDiagnostic> {
        let mut acc = self.atom()?;
        while self.at(&TokenKind::Star) {
            self.bump();
            acc = acc.mul(&self.atom()?);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<OperatorPoly, ParseDiagnostic> {
        let t = self.peek().clone();
        match &t.kind {
            TokenKind::Int(_) => {
                let r = self.rat()?;
                let c = if self.at(&TokenKind::I) {
                    self.bump();
                    GaussianRational::new(BigRational::zero(), r)
                } else {
                    GaussianRational::real(r)
                };
                Ok(OperatorPoly::scalar(LaurentPoly::constant(c)))
            }
            TokenKind::I => {
                self.bump();
                Ok(OperatorPoly::scalar(LaurentPoly::constant(GaussianRational::i())))
            }
            TokenKind::Z => {
                self.bump();
                let mut e = 1i64;
                if self.at(&TokenKind::Caret) {
                    self.bump();
                    let neg = if self.at(&TokenKind::Minus) {
                        self.bump();
                        true
                    } else {
                        false
                    };
                    let (n, tok) = self.int()?;
                    let n = if neg { -n } else { n };
                    e = n
                        .to_i64()
                        .filter(|v| v.unsigned_abs() <= i32::MAX as u64)
                        .ok_or_else(|| Parser::error_at(&tok, format!("exponent {n} out of range")))?;
                }
                Ok(OperatorPoly::scalar(LaurentPoly::z_pow(e)))
            }
            TokenKind::D => {
                if !self.operator_mode {
                    return Err(ParseDiagnostic::new(
                        t.line,
                        t.column,
                        "'d' is only allowed in operator input".into(),
                        vec!["coefficient".into(), "'z'".into(), "'('".into()],
                    ));
                }
                self.bump();
                let mut j = 1usize;
                if self.at(&TokenKind::Caret) {
                    self.bump();
                    let (n, tok) = self.int()?;
                    j = n.to_usize().filter(|v| *v <= MAX_DELTA_POWER).ok_or_else(|| {
                        Parser::error_at(&tok, format!("power of d must be at most {MAX_DELTA_POWER}"))
                    })?;
                }
                Ok(OperatorPoly::delta_pow(j))
            }
            TokenKind::LParen => {
                self.bump();
                let inner = self.sum()?;
                self.expect(TokenKind::RParen, &["')'", "'+'", "'-'", "'*'"])?;
                Ok(inner)
            }
            _ => Err(self.unexpected(&["integer", "'i'", "'z'", "'d'", "'('", "'-'"])),
        }
    }

    fn rat(&mut self) -> Result<BigRational, ParseDiagnostic> {
        let (num, _) = self.int()?;
        if self.at(&TokenKind::Slash) {
            self.bump();
            let (den, tok) = self.int()?;
            if den.is_zero() {
                return Err(ParseDiagnostic::new(tok.line, tok.column, "zero denominator".into(), vec![]));
            }
            return Ok(BigRational::new(num, den));
        }
        Ok(BigRational::from_integer(num))
    }
}
