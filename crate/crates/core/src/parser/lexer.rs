//! Hand-rolled lexer. `//` comments run to end of line; whitespace is
//! insignificant. Identifiers are a letter followed by letters, digits or
//! underscores; keywords are carved out of that class.

use crate::syntax::Pos;

use super::{ParseError, ParseErrorKind};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TokenKind {
    Ident(String),
    // keywords
    Class,
    Interface,
    Extends,
    Implements,
    Default,
    New,
    Return,
    Super,
    This,
    True,
    False,
    Boolean,
    // punctuation
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Dot,
    Amp,
    Question,
    Colon,
    Eq,
    Arrow,
    Eof,
}

impl TokenKind {
    pub fn describe(&self) -> String {
        match self {
            TokenKind::Ident(s) => format!("identifier `{s}`"),
            TokenKind::Class => "`class`".into(),
            TokenKind::Interface => "`interface`".into(),
            TokenKind::Extends => "`extends`".into(),
            TokenKind::Implements => "`implements`".into(),
            TokenKind::Default => "`default`".into(),
            TokenKind::New => "`new`".into(),
            TokenKind::Return => "`return`".into(),
            TokenKind::Super => "`super`".into(),
            TokenKind::This => "`this`".into(),
            TokenKind::True => "`true`".into(),
            TokenKind::False => "`false`".into(),
            TokenKind::Boolean => "`boolean`".into(),
            TokenKind::LBrace => "`{`".into(),
            TokenKind::RBrace => "`}`".into(),
            TokenKind::LParen => "`(`".into(),
            TokenKind::RParen => "`)`".into(),
            TokenKind::LBracket => "`[`".into(),
            TokenKind::RBracket => "`]`".into(),
            TokenKind::Comma => "`,`".into(),
            TokenKind::Semi => "`;`".into(),
            TokenKind::Dot => "`.`".into(),
            TokenKind::Amp => "`&`".into(),
            TokenKind::Question => "`?`".into(),
            TokenKind::Colon => "`:`".into(),
            TokenKind::Eq => "`=`".into(),
            TokenKind::Arrow => "`->`".into(),
            TokenKind::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub kind: TokenKind,
    pub pos: Pos,
}

pub fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    let mut chars = src.chars().peekable();
    let mut line: u32 = 1;
    let mut col: u32 = 1;

    macro_rules! bump {
        () => {{
            let c = chars.next();
            if let Some(c) = c {
                if c == '\n' {
                    line += 1;
                    col = 1;
                } else {
                    col += 1;
                }
            }
            c
        }};
    }

    loop {
        let pos = Pos::new(line, col);
        let c = match chars.peek().copied() {
            None => break,
            Some(c) => c,
        };
        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c == '/' {
            bump!();
            match chars.peek() {
                Some('/') => {
                    while let Some(&n) = chars.peek() {
                        if n == '\n' {
                            break;
                        }
                        bump!();
                    }
                    continue;
                }
                _ => {
                    return Err(ParseError {
                        kind: ParseErrorKind::Lexical,
                        pos,
                        message: "unexpected character `/` (comments start with `//`)".into(),
                    })
                }
            }
        }
        if c.is_alphabetic() {
            let mut word = String::new();
            while let Some(&n) = chars.peek() {
                if n.is_alphanumeric() || n == '_' {
                    word.push(n);
                    bump!();
                } else {
                    break;
                }
            }
            let kind = match word.as_str() {
                "class" => TokenKind::Class,
                "interface" => TokenKind::Interface,
                "extends" => TokenKind::Extends,
                "implements" => TokenKind::Implements,
                "default" => TokenKind::Default,
                "new" => TokenKind::New,
                "return" => TokenKind::Return,
                "super" => TokenKind::Super,
                "this" => TokenKind::This,
                "true" => TokenKind::True,
                "false" => TokenKind::False,
                "boolean" => TokenKind::Boolean,
                _ => TokenKind::Ident(word),
            };
            tokens.push(Token { kind, pos });
            continue;
        }
        bump!();
        let kind = match c {
            '{' => TokenKind::LBrace,
            '}' => TokenKind::RBrace,
            '(' => TokenKind::LParen,
            ')' => TokenKind::RParen,
            '[' => TokenKind::LBracket,
            ']' => TokenKind::RBracket,
            ',' => TokenKind::Comma,
            ';' => TokenKind::Semi,
            '.' => TokenKind::Dot,
            '&' => TokenKind::Amp,
            '?' => TokenKind::Question,
            ':' => TokenKind::Colon,
            '=' => TokenKind::Eq,
            '-' => {
                if chars.peek() == Some(&'>') {
                    bump!();
                    TokenKind::Arrow
                } else {
                    return Err(ParseError {
                        kind: ParseErrorKind::Lexical,
                        pos,
                        message: "unexpected character `-` (expected `->`)".into(),
                    });
                }
            }
            other => {
                return Err(ParseError {
                    kind: ParseErrorKind::Lexical,
                    pos,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        tokens.push(Token { kind, pos });
    }
    tokens.push(Token { kind: TokenKind::Eof, pos: Pos::new(line, col) });
    Ok(tokens)
}
