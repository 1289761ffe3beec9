use num_bigint::BigInt;

use super::ParseDiagnostic;

#[derive(Clone, Debug, PartialEq)]
pub enum TokenKind {
    Int(BigInt),
    Rank,
    Matrix,
    Operator,
    Z,
    D,
    I,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Newline,
    Eof,
}

impl TokenKind {
    pub fn describe(&self) -> String {
        match self {
            TokenKind::Int(n) => format!("integer {n}"),
            TokenKind::Rank => "'rank'".into(),
            TokenKind::Matrix => "'matrix'".into(),
            TokenKind::Operator => "'operator'".into(),
            TokenKind::Z => "'z'".into(),
            TokenKind::D => "'d'".into(),
            TokenKind::I => "'i'".into(),
            TokenKind::Plus => "'+'".into(),
            TokenKind::Minus => "'-'".into(),
            TokenKind::Star => "'*'".into(),
            TokenKind::Slash => "'/'".into(),
            TokenKind::Caret => "'^'".into(),
            TokenKind::LParen => "'('".into(),
            TokenKind::RParen => "')'".into(),
            TokenKind::LBracket => "'['".into(),
            TokenKind::RBracket => "']'".into(),
            TokenKind::Comma => "','".into(),
            TokenKind::Newline => "end of line".into(),
            TokenKind::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub line: usize,
    pub column: usize,
}

/// Splits the text into tokens. Comments run from `#` to end of line; runs
/// of newlines (including blank and comment-only lines) collapse into one
/// `Newline`, and leading newlines are dropped. Columns count characters,
/// both 1-based.
pub fn tokenize(text: &str) -> Result<Vec<Token>, ParseDiagnostic> {
    let mut out: Vec<Token> = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut line, mut col) = (1usize, 1usize);
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        let (tl, tc) = (line, col);
        let push = |out: &mut Vec<Token>, kind: TokenKind| out.push(Token { kind, line: tl, column: tc });
        match ch {
            '\n' => {
                if out.last().is_some_and(|t| t.kind != TokenKind::Newline) {
                    push(&mut out, TokenKind::Newline);
                }
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            c if c.is_whitespace() => {}
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                let n: BigInt = digits.parse().expect("ascii digits");
                push(&mut out, TokenKind::Int(n));
                col += i - start;
                continue;
            }
            c if c.is_alphabetic() => {
                let start = i;
                while i < chars.len() && chars[i].is_alphanumeric() {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                let kind = match word.as_str() {
                    "rank" => TokenKind::Rank,
                    "matrix" => TokenKind::Matrix,
                    "operator" => TokenKind::Operator,
                    "z" => TokenKind::Z,
                    "d" => TokenKind::D,
                    "i" => TokenKind::I,
                    _ => {
                        return Err(ParseDiagnostic::new(
                            tl,
                            tc,
                            format!("unknown word '{word}'"),
                            vec!["'z'".into(), "'d'".into(), "'i'".into(), "a keyword".into()],
                        ))
                    }
                };
                push(&mut out, kind);
                col += i - start;
                continue;
            }
            _ => {
                let kind = match ch {
                    '+' => TokenKind::Plus,
                    '-' => TokenKind::Minus,
                    '*' => TokenKind::Star,
                    '/' => TokenKind::Slash,
                    '^' => TokenKind::Caret,
                    '(' => TokenKind::LParen,
                    ')' => TokenKind::RParen,
                    '[' => TokenKind::LBracket,
                    ']' => TokenKind::RBracket,
                    ',' => TokenKind::Comma,
                    other => {
                        return Err(ParseDiagnostic::new(tl, tc, format!("unexpected character '{other}'"), vec![]));
                    }
                };
                push(&mut out, kind);
            }
        }
        i += 1;
        col += 1;
    }
    out.push(Token { kind: TokenKind::Eof, line, column: col });
    Ok(out)
}
