//! Position-tagged s-expression layer between the lexer and the
//! command parser.

use crate::error::ParseError;
use crate::lexer::{is_simple_symbol, Lexer, Position, Token};

#[derive(Debug, Clone, PartialEq)]
pub enum SExpr {
    Atom { token: Token, pos: Position },
    List { items: Vec<SExpr>, pos: Position },
}

impl SExpr {
    pub fn pos(&self) -> Position {
        match self {
            SExpr::Atom { pos, .. } | SExpr::List { pos, .. } => *pos,
        }
    }

    pub fn as_symbol(&self) -> Option<&str> {
        match self {
            SExpr::Atom {
                token: Token::Symbol { name, .. },
                ..
            } => Some(name),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[SExpr]> {
        match self {
            SExpr::List { items, .. } => Some(items),
            _ => None,
        }
    }

    /// Canonical single-line text of this expression: the form used
    /// when echoing `set-info` attribute values back out.
    pub fn canonical_text(&self) -> String {
        match self {
            SExpr::Atom { token, .. } => match token {
                Token::LParen => "(".into(),
                Token::RParen => ")".into(),
                Token::Symbol { name, quoted } => {
                    if *quoted && !is_simple_symbol(name) {
                        format!("|{}|", name)
                    } else if is_simple_symbol(name) {
                        name.clone()
                    } else {
                        format!("|{}|", name)
                    }
                }
                Token::Keyword(k) => format!(":{}", k),
                Token::Numeral(n) => n.to_string(),
                Token::Decimal(d) => d.to_string(),
                Token::StringLit(s) => format!("\"{}\"", s.replace('"', "\"\"")),
            },
            SExpr::List { items, .. } => {
                let parts: Vec<String> = items.iter().map(SExpr::canonical_text).collect();
                format!("({})", parts.join(" "))
            }
        }
    }
}

/// Reads a whole document into top-level s-expressions.
pub fn read_all(input: &str) -> Result<Vec<SExpr>, ParseError> {
    let tokens = Lexer::tokenize(input)?;
    let mut reader = Reader { tokens, index: 0 };
    let mut out = Vec::new();
    while reader.index < reader.tokens.len() {
        out.push(reader.read()?);
    }
    Ok(out)
}

struct Reader {
    tokens: Vec<(Token, Position)>,
    index: usize,
}

impl Reader {
    fn read(&mut self) -> Result<SExpr, ParseError> {
        let (token, pos) = self.tokens[self.index].clone();
        self.index += 1;
        match token {
            Token::LParen => {
                let mut items = Vec::new();
                loop {
                    match self.tokens.get(self.index) {
                        None => {
                            return Err(ParseError::Syntax {
                                pos,
                                msg: "unclosed `(`".into(),
                            })
                        }
                        Some((Token::RParen, _)) => {
                            self.index += 1;
                            return Ok(SExpr::List { items, pos });
                        }
                        Some(_) => items.push(self.read()?),
                    }
                }
            }
            Token::RParen => Err(ParseError::Syntax {
                pos,
                msg: "unmatched `)`".into(),
            }),
            token => Ok(SExpr::Atom { token, pos }),
        }
    }
}
