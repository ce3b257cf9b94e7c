use std::fmt;

use super::ParseError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Name(String),
    Colon,
    Comma,
    Dot,
    Star,
    Arrow,
    Turnstile,
    And,
    Or,
    Not,
    Eq,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Semi,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Name(n) => return f.write_str(n),
            Tok::Colon => ":",
            Tok::Comma => ",",
            Tok::Dot => ".",
            Tok::Star => "*",
            Tok::Arrow => "->",
            Tok::Turnstile => "|-",
            Tok::And => "/\\",
            Tok::Or => "\\/",
            Tok::Not => "~",
            Tok::Eq => "=",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::Semi => ";",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

/// Splits `text` into tokens. `#` starts a comment running to the end of the
/// line.
pub fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    let (mut line, mut col) = (1, 1);
    while let Some(&(start, c)) = chars.peek() {
        let span = Span { line, col };
        let mut bump = |chars: &mut std::iter::Peekable<std::str::CharIndices<'_>>| {
            let (_, c) = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        };
        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        if c == '#' {
            while chars.peek().is_some_and(|(_, c)| *c != '\n') {
                bump(&mut chars);
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut end = start;
            while let Some(&(i, c)) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' || c == '\'' {
                    end = i + c.len_utf8();
                    bump(&mut chars);
                } else {
                    break;
                }
            }
            out.push(Token {
                tok: Tok::Name(text[start..end].to_owned()),
                span,
            });
            continue;
        }
        let two = text.get(start..start + 2);
        let pair = match two {
            Some("->") => Some(Tok::Arrow),
            Some("|-") => Some(Tok::Turnstile),
            Some("/\\") => Some(Tok::And),
            Some("\\/") => Some(Tok::Or),
            _ => None,
        };
        if let Some(tok) = pair {
            bump(&mut chars);
            bump(&mut chars);
            out.push(Token { tok, span });
            continue;
        }
        let tok = match c {
            ':' => Tok::Colon,
            ',' => Tok::Comma,
            '.' => Tok::Dot,
            '*' => Tok::Star,
            '~' => Tok::Not,
            '=' => Tok::Eq,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            ';' => Tok::Semi,
            other => {
                return Err(ParseError::new(span, other.to_string(), "unexpected character"));
            }
        };
        bump(&mut chars);
        out.push(Token { tok, span });
    }
    out.push(Token {
        tok: Tok::Eof,
        span: Span { line, col },
    });
    Ok(out)
}
