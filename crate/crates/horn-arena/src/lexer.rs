//! Tokenizer for SMT-LIB 2.6 text: s-expression punctuation, simple and
//! quoted symbols, keywords, numerals, decimals, and string literals.
//! Comments (`;` to end of line) and whitespace are skipped.

use num_bigint::BigInt;

use crate::ast::Decimal;
use crate::error::ParseError;

/// 1-based source location.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Position {
    pub line: u32,
    pub col: u32,
}

impl Position {
    pub fn start() -> Position {
        Position { line: 1, col: 1 }
    }
}

impl std::fmt::Display for Position {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Token {
    LParen,
    RParen,
    /// Simple or `|quoted|` symbol (quoting stripped; `quoted` records
    /// whether bars are needed on output).
    Symbol { name: String, quoted: bool },
    /// `:keyword`
    Keyword(String),
    Numeral(BigInt),
    Decimal(Decimal),
    StringLit(String),
}

const SYMBOL_EXTRA: &str = "~!@$%^&*_-+=<>.?/";

pub fn is_simple_symbol(name: &str) -> bool {
    !name.is_empty()
        && !name.starts_with(|c: char| c.is_ascii_digit())
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || SYMBOL_EXTRA.contains(c))
}

pub struct Lexer<'a> {
    input: &'a [u8],
    offset: usize,
    pos: Position,
}

impl<'a> Lexer<'a> {
    pub fn new(input: &'a str) -> Lexer<'a> {
        Lexer {
            input: input.as_bytes(),
            offset: 0,
            pos: Position::start(),
        }
    }

    pub fn tokenize(input: &str) -> Result<Vec<(Token, Position)>, ParseError> {
        let mut lexer = Lexer::new(input);
        let mut tokens = Vec::new();
        while let Some(tok) = lexer.next_token()? {
            tokens.push(tok);
        }
        Ok(tokens)
    }

    fn peek(&self) -> Option<u8> {
        self.input.get(self.offset).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let byte = self.peek()?;
        self.offset += 1;
        if byte == b'\n' {
            self.pos.line += 1;
            self.pos.col = 1;
        } else {
            self.pos.col += 1;
        }
        Some(byte)
    }

    fn skip_trivia(&mut self) {
        while let Some(byte) = self.peek() {
            match byte {
                b' ' | b'\t' | b'\r' | b'\n' => {
                    self.bump();
                }
                b';' => {
                    while let Some(b) = self.peek() {
                        if b == b'\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                _ => break,
            }
        }
    }

    fn next_token(&mut self) -> Result<Option<(Token, Position)>, ParseError> {
        self.skip_trivia();
        let start = self.pos;
        let Some(byte) = self.peek() else {
            return Ok(None);
        };
        let token = match byte {
            b'(' => {
                self.bump();
                Token::LParen
            }
            b')' => {
                self.bump();
                Token::RParen
            }
            b'"' => self.lex_string(start)?,
            b'|' => self.lex_quoted_symbol(start)?,
            b':' => {
                self.bump();
                let name = self.take_symbol_chars();
                if name.is_empty() {
                    return Err(ParseError::Lexical {
                        pos: start,
                        msg: "expected keyword name after `:`".into(),
                    });
                }
                Token::Keyword(name)
            }
            b'0'..=b'9' => self.lex_number(start)?,
            _ => {
                let name = self.take_symbol_chars();
                if name.is_empty() {
                    return Err(ParseError::Lexical {
                        pos: start,
                        msg: format!("unexpected character `{}`", byte as char),
                    });
                }
                // `-1` and `-1.5` are tolerated as literals even though
                // SMT-LIB lexes them as symbols; they occur in the wild
                // and print back canonically as `(- 1)`.
                if let Some(rest) = name.strip_prefix('-') {
                    if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
                        Token::Numeral(-rest.parse::<BigInt>().unwrap())
                    } else if let Some(dec) = parse_decimal_body(rest) {
                        Token::Decimal(dec.negate())
                    } else {
                        Token::Symbol {
                            name,
                            quoted: false,
                        }
                    }
                } else {
                    Token::Symbol {
                        name,
                        quoted: false,
                    }
                }
            }
        };
        Ok(Some((token, start)))
    }

    fn take_symbol_chars(&mut self) -> String {
        let mut out = String::new();
        while let Some(byte) = self.peek() {
            let c = byte as char;
            if c.is_ascii_alphanumeric() || SYMBOL_EXTRA.contains(c) {
                out.push(c);
                self.bump();
            } else {
                break;
            }
        }
        out
    }

    fn lex_number(&mut self, start: Position) -> Result<Token, ParseError> {
        let mut digits = String::new();
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            digits.push(self.bump().unwrap() as char);
        }
        let mut frac = String::new();
        let is_decimal = self.peek() == Some(b'.');
        if is_decimal {
            self.bump();
            while matches!(self.peek(), Some(b'0'..=b'9')) {
                frac.push(self.bump().unwrap() as char);
            }
            if frac.is_empty() {
                return Err(ParseError::Lexical {
                    pos: start,
                    msg: "decimal literal is missing fractional digits".into(),
                });
            }
        }
        // The literal must end at a delimiter; `1abc` is not a token.
        if let Some(byte) = self.peek() {
            let c = byte as char;
            if c.is_ascii_alphanumeric() || SYMBOL_EXTRA.contains(c) {
                return Err(ParseError::Lexical {
                    pos: start,
                    msg: format!("malformed numeric literal starting with `{}`", digits),
                });
            }
        }
        if is_decimal {
            let unscaled: BigInt = format!("{}{}", digits, frac).parse().unwrap();
            Ok(Token::Decimal(Decimal::new(unscaled, frac.len() as u32)))
        } else {
            Ok(Token::Numeral(digits.parse().unwrap()))
        }
    }

    fn lex_string(&mut self, start: Position) -> Result<Token, ParseError> {
        self.bump();
        let mut out = String::new();
        loop {
            match self.bump() {
                None => {
                    return Err(ParseError::Lexical {
                        pos: start,
                        msg: "unterminated string literal".into(),
                    })
                }
                Some(b'"') => {
                    // `""` escapes a quote inside the literal.
                    if self.peek() == Some(b'"') {
                        self.bump();
                        out.push('"');
                    } else {
                        return Ok(Token::StringLit(out));
                    }
                }
                Some(byte) => out.push(byte as char),
            }
        }
    }

    fn lex_quoted_symbol(&mut self, start: Position) -> Result<Token, ParseError> {
        self.bump();
        let mut out = String::new();
        loop {
            match self.bump() {
                None => {
                    return Err(ParseError::Lexical {
                        pos: start,
                        msg: "unterminated quoted symbol".into(),
                    })
                }
                Some(b'|') => {
                    return Ok(Token::Symbol {
                        name: out,
                        quoted: true,
                    })
                }
                Some(b'\\') => {
                    return Err(ParseError::Lexical {
                        pos: start,
                        msg: "backslash is not allowed in a quoted symbol".into(),
                    })
                }
                Some(byte) => out.push(byte as char),
            }
        }
    }
}


fn parse_decimal_body(text: &str) -> Option<Decimal> {
    let (int_part, frac_part) = text.split_once('.')?;
    if int_part.is_empty()
        || frac_part.is_empty()
        || !int_part.bytes().all(|b| b.is_ascii_digit())
        || !frac_part.bytes().all(|b| b.is_ascii_digit())
    {
        return None;
    }
    let unscaled: BigInt = format!("{}{}", int_part, frac_part).parse().ok()?;
    Some(Decimal::new(unscaled, frac_part.len() as u32))
}
