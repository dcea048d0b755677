use std::fmt;
use std::sync::Arc;

use crate::loc::SourceLocation;

use super::FrontendError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TokenKind {
    Identifier,
    IntLiteral,
    StringLiteral,
    Keyword,
    Punctuation,
    Operator,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    /// Source text of the token. String literals keep their quotes.
    pub text: String,
    pub loc: SourceLocation,
}

impl Token {
    pub fn is(&self, text: &str) -> bool {
        matches!(
            self.kind,
            TokenKind::Keyword | TokenKind::Punctuation | TokenKind::Operator
        ) && self.text == text
    }

    /// Contents of a string literal without the surrounding quotes.
    pub fn string_value(&self) -> &str {
        debug_assert_eq!(self.kind, TokenKind::StringLiteral);
        &self.text[1..self.text.len() - 1]
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            TokenKind::Identifier => write!(f, "identifier `{}`", self.text),
            TokenKind::IntLiteral => write!(f, "integer `{}`", self.text),
            TokenKind::StringLiteral => write!(f, "string {}", self.text),
            _ => write!(f, "`{}`", self.text),
        }
    }
}

pub const KEYWORDS: &[&str] = &[
    "int", "bool", "void", "string", "class", "template", "if", "else", "while", "for", "return",
    "assert", "true", "false", "this",
];

// Longest first so that greedy matching picks `<=` over `<`.
const OPERATORS: &[&str] = &[
    "->", "++", "--", "+=", "-=", "==", "!=", "<=", ">=", "&&", "||", "+", "-", "*", "/", "%", "<",
    ">", "!", "=", ".",
];

const PUNCTUATION: &[char] = &['(', ')', '{', '}', '[', ']', ';', ',', '#', ':'];

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    line: u32,
    col: u32,
    file: Arc<str>,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek2(&self) -> Option<char> {
        let mut it = self.src[self.pos..].chars();
        it.next();
        it.next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn loc(&self) -> SourceLocation {
        SourceLocation::new(self.file.clone(), self.line, self.col)
    }

    fn error(&self, loc: SourceLocation, message: impl Into<String>) -> FrontendError {
        FrontendError::Lex {
            loc,
            message: message.into(),
        }
    }
}

/// Splits MiniQt source into tokens. Comments and whitespace are dropped.
/// A leading minus is never part of an integer literal.
pub fn tokenize(source: &str, file: &str) -> Result<Vec<Token>, FrontendError> {
    let mut cur = Cursor {
        src: source,
        pos: 0,
        line: 1,
        col: 1,
        file: Arc::from(if file.is_empty() { "<input>" } else { file }),
    };
    let mut tokens = Vec::new();

    while let Some(c) = cur.peek() {
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        let loc = cur.loc();
        let start = cur.pos;

        if c == '/' && cur.peek2() == Some('/') {
            while let Some(c) = cur.peek() {
                if c == '\n' {
                    break;
                }
                cur.bump();
            }
            continue;
        }
        if c == '/' && cur.peek2() == Some('*') {
            cur.bump();
            cur.bump();
            loop {
                match cur.peek() {
                    None => return Err(cur.error(loc, "unterminated block comment")),
                    Some('*') if cur.peek2() == Some('/') => {
                        cur.bump();
                        cur.bump();
                        break;
                    }
                    Some(_) => {
                        cur.bump();
                    }
                }
            }
            continue;
        }

        let kind = if c.is_ascii_alphabetic() || c == '_' {
            while matches!(cur.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
                cur.bump();
            }
            if KEYWORDS.contains(&&source[start..cur.pos]) {
                TokenKind::Keyword
            } else {
                TokenKind::Identifier
            }
        } else if c.is_ascii_digit() {
            while matches!(cur.peek(), Some(c) if c.is_ascii_digit()) {
                cur.bump();
            }
            if matches!(cur.peek(), Some(c) if c.is_ascii_alphabetic() || c == '_') {
                return Err(cur.error(cur.loc(), "malformed integer literal"));
            }
            TokenKind::IntLiteral
        } else if c == '"' {
            cur.bump();
            loop {
                match cur.peek() {
                    None | Some('\n') => return Err(cur.error(loc, "unterminated string literal")),
                    Some('"') => {
                        cur.bump();
                        break;
                    }
                    Some(_) => {
                        cur.bump();
                    }
                }
            }
            TokenKind::StringLiteral
        } else if PUNCTUATION.contains(&c) {
            cur.bump();
            TokenKind::Punctuation
        } else if let Some(op) = OPERATORS
            .iter()
            .find(|op| source[cur.pos..].starts_with(**op))
        {
            for _ in 0..op.len() {
                cur.bump();
            }
            TokenKind::Operator
        } else {
            return Err(cur.error(loc, format!("illegal character `{c}`")));
        };

        tokens.push(Token {
            kind,
            text: source[start..cur.pos].to_string(),
            loc,
        });
    }
    Ok(tokens)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds_and_text(src: &str) -> Vec<(TokenKind, String)> {
        tokenize(src, "t.cpp")
            .unwrap()
            .into_iter()
            .map(|t| (t.kind, t.text))
            .collect()
    }

    #[test]
    fn method_call_statement() {
        use TokenKind::*;
        let toks = kinds_and_text("mylist.push_front(300);");
        let expected = [
            (Identifier, "mylist"),
            (Operator, "."),
            (Identifier, "push_front"),
            (Punctuation, "("),
            (IntLiteral, "300"),
            (Punctuation, ")"),
            (Punctuation, ";"),
        ];
        assert_eq!(toks.len(), expected.len());
        for ((k, t), (ek, et)) in toks.iter().zip(expected) {
            assert_eq!((*k, t.as_str()), (ek, et));
        }
    }

    #[test]
    fn empty_input() {
        assert!(tokenize("", "t.cpp").unwrap().is_empty());
    }

    #[test]
    fn illegal_character_location() {
        match tokenize("int x = @;", "t.cpp") {
            Err(FrontendError::Lex { loc, .. }) => {
                assert_eq!((loc.line, loc.column), (1, 9));
            }
            other => panic!("expected lex error, got {other:?}"),
        }
    }

    #[test]
    fn unterminated_string() {
        assert!(matches!(
            tokenize("assert(\"abc", "t.cpp"),
            Err(FrontendError::Lex { .. })
        ));
    }

    #[test]
    fn comments_are_skipped_and_lines_tracked() {
        let toks = tokenize("// one\n/* two\nthree */ x -> y--", "t.cpp").unwrap();
        let texts: Vec<_> = toks.iter().map(|t| t.text.as_str()).collect();
        assert_eq!(texts, ["x", "->", "y", "--"]);
        assert_eq!(toks[0].loc.line, 3);
        assert_eq!(toks[0].loc.column, 10);
    }

    #[test]
    fn minus_is_not_part_of_literal() {
        let toks = kinds_and_text("i > -1");
        assert_eq!(toks[2], (TokenKind::Operator, "-".to_string()));
        assert_eq!(toks[3], (TokenKind::IntLiteral, "1".to_string()));
    }
}
