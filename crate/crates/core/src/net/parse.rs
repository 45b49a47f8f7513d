//! Reader and writer for the plain-text net format:
//!
//! ```text
//! net      := "PLACE" idlist ";" "MARKING" weighted? ";" trans+
//! trans    := "TRANSITION" id ("CONSUME" weighted? ";")? ("PRODUCE" weighted? ";")?
//! weighted := witem ("," witem)*        witem := id (":" nat)?
//! ```
//!
//! Keywords are case-sensitive, whitespace is insignificant and `{ ... }`
//! encloses comments. An omitted weight means 1.

use std::fmt::Write as _;

use thiserror::Error;

use super::{NetBuilder, NetError, PetriNet, PlaceId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("{line}:{column}: syntax error: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{line}:{column}: unknown identifier `{name}`")]
    UnknownIdentifier {
        name: String,
        line: usize,
        column: usize,
    },
    #[error("{line}:{column}: weight must be at least 1")]
    ZeroWeight { line: usize, column: usize },
    #[error("{line}:{column}: duplicate node name `{name}`")]
    DuplicateName {
        name: String,
        line: usize,
        column: usize,
    },
    #[error("{line}:{column}: {source}")]
    Net {
        line: usize,
        column: usize,
        source: NetError,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Ident(String),
    Nat(u64),
    Keyword(Keyword),
    Semicolon,
    Comma,
    Colon,
    Eof,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Keyword {
    Place,
    Marking,
    Transition,
    Consume,
    Produce,
}

impl Keyword {
    fn from_word(word: &str) -> Option<Self> {
        match word {
            "PLACE" => Some(Keyword::Place),
            "MARKING" => Some(Keyword::Marking),
            "TRANSITION" => Some(Keyword::Transition),
            "CONSUME" => Some(Keyword::Consume),
            "PRODUCE" => Some(Keyword::Produce),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    token: Token,
    line: usize,
    column: usize,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.chars().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn syntax(&self, line: usize, column: usize, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    fn tokenize(mut self) -> Result<Vec<Spanned>, ParseError> {
        let mut tokens = Vec::new();
        loop {
            while let Some(&c) = self.chars.peek() {
                if c.is_whitespace() {
                    self.bump();
                } else if c == '{' {
                    let (line, column) = (self.line, self.column);
                    self.bump();
                    loop {
                        match self.bump() {
                            Some('}') => break,
                            Some(_) => {}
                            None => return Err(self.syntax(line, column, "unterminated comment")),
                        }
                    }
                } else {
                    break;
                }
            }
            let (line, column) = (self.line, self.column);
            let Some(&c) = self.chars.peek() else {
                tokens.push(Spanned {
                    token: Token::Eof,
                    line,
                    column,
                });
                return Ok(tokens);
            };
            let token = match c {
                ';' => {
                    self.bump();
                    Token::Semicolon
                }
                ',' => {
                    self.bump();
                    Token::Comma
                }
                ':' => {
                    self.bump();
                    Token::Colon
                }
                '0'..='9' => {
                    let mut value: u64 = 0;
                    while let Some(&d) = self.chars.peek() {
                        let Some(digit) = d.to_digit(10) else { break };
                        value = value
                            .checked_mul(10)
                            .and_then(|v| v.checked_add(u64::from(digit)))
                            .ok_or_else(|| self.syntax(line, column, "number too large"))?;
                        self.bump();
                    }
                    Token::Nat(value)
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let mut word = String::new();
                    while let Some(&d) = self.chars.peek() {
                        if d.is_ascii_alphanumeric() || d == '_' || d == '\'' {
                            word.push(d);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    match Keyword::from_word(&word) {
                        Some(kw) => Token::Keyword(kw),
                        None => Token::Ident(word),
                    }
                }
                other => {
                    return Err(self.syntax(line, column, format!("unexpected character `{other}`")))
                }
            };
            tokens.push(Spanned {
                token,
                line,
                column,
            });
        }
    }
}

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
    builder: NetBuilder,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.tokens[self.pos]
    }

    fn advance(&mut self) -> Spanned {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: impl Into<String>) -> ParseError {
        let t = self.peek();
        ParseError::Syntax {
            line: t.line,
            column: t.column,
            message: message.into(),
        }
    }

    fn expect(&mut self, expected: Token, what: &str) -> Result<Spanned, ParseError> {
        if self.peek().token == expected {
            Ok(self.advance())
        } else {
            Err(self.error_here(format!("expected {what}")))
        }
    }

    fn at_keyword(&self, kw: Keyword) -> bool {
        self.peek().token == Token::Keyword(kw)
    }

    fn ident(&mut self) -> Result<(String, usize, usize), ParseError> {
        let t = self.advance();
        match t.token {
            Token::Ident(name) => Ok((name, t.line, t.column)),
            _ => Err(ParseError::Syntax {
                line: t.line,
                column: t.column,
                message: "expected identifier".into(),
            }),
        }
    }

    fn net(mut self) -> Result<PetriNet, ParseError> {
        self.expect(Token::Keyword(Keyword::Place), "`PLACE`")?;
        loop {
            let (name, line, column) = self.ident()?;
            self.builder.place(&name).map_err(|e| located(e, line, column))?;
            if self.peek().token == Token::Comma {
                self.advance();
            } else {
                break;
            }
        }
        self.expect(Token::Semicolon, "`;` after place list")?;

        self.expect(Token::Keyword(Keyword::Marking), "`MARKING`")?;
        for (s, n, _, _) in self.weighted(true)? {
            self.builder.mark(s, n).map_err(|e| located(e, 0, 0))?;
        }
        self.expect(Token::Semicolon, "`;` after marking")?;

        if !self.at_keyword(Keyword::Transition) {
            return Err(self.error_here("expected `TRANSITION`"));
        }
        while self.at_keyword(Keyword::Transition) {
            self.advance();
            let (name, line, column) = self.ident()?;
            let t = self
                .builder
                .transition(&name)
                .map_err(|e| located(e, line, column))?;
            if self.at_keyword(Keyword::Consume) {
                self.advance();
                for (s, w, line, column) in self.weighted(false)? {
                    self.builder
                        .consume(t, s, w)
                        .map_err(|e| located(e, line, column))?;
                }
                self.expect(Token::Semicolon, "`;` after CONSUME list")?;
            }
            if self.at_keyword(Keyword::Produce) {
                self.advance();
                for (s, w, line, column) in self.weighted(false)? {
                    self.builder
                        .produce(t, s, w)
                        .map_err(|e| located(e, line, column))?;
                }
                self.expect(Token::Semicolon, "`;` after PRODUCE list")?;
            }
        }
        if self.peek().token != Token::Eof {
            return Err(self.error_here("expected `TRANSITION` or end of input"));
        }
        self.builder.build().map_err(|e| located(e, 0, 0))
    }

    /// Parses an optional weighted place list. Marking entries may carry a
    /// zero count; arc weights may not.
    fn weighted(&mut self, allow_zero: bool) -> Result<Vec<(PlaceId, u64, usize, usize)>, ParseError> {
        let mut items = Vec::new();
        if !matches!(self.peek().token, Token::Ident(_)) {
            return Ok(items);
        }
        loop {
            let (name, line, column) = self.ident()?;
            let s = self
                .builder
                .place_id(&name)
                .ok_or(ParseError::UnknownIdentifier {
                    name,
                    line,
                    column,
                })?;
            let mut weight = 1;
            if self.peek().token == Token::Colon {
                self.advance();
                let t = self.advance();
                match t.token {
                    Token::Nat(n) => {
                        if n == 0 && !allow_zero {
                            return Err(ParseError::ZeroWeight {
                                line: t.line,
                                column: t.column,
                            });
                        }
                        weight = n;
                    }
                    _ => {
                        return Err(ParseError::Syntax {
                            line: t.line,
                            column: t.column,
                            message: "expected number after `:`".into(),
                        })
                    }
                }
            }
            items.push((s, weight, line, column));
            if self.peek().token == Token::Comma {
                self.advance();
            } else {
                return Ok(items);
            }
        }
    }
}

fn located(e: NetError, line: usize, column: usize) -> ParseError {
    match e {
        NetError::DuplicateName(name) => ParseError::DuplicateName { name, line, column },
        NetError::ZeroWeight => ParseError::ZeroWeight { line, column },
        source => ParseError::Net {
            line,
            column,
            source,
        },
    }
}

/// Parses a net in the text format. Any error rejects the whole input.
pub fn parse_net(text: &str) -> Result<PetriNet, ParseError> {
    let tokens = Lexer::new(text).tokenize()?;
    Parser {
        tokens,
        pos: 0,
        builder: NetBuilder::new(),
    }
    .net()
}

/// Writes `net` back in the text format accepted by [`parse_net`].
pub fn render_net(net: &PetriNet) -> String {
    let mut out = String::new();
    let places: Vec<&str> = net.places().map(|s| net.place_name(s)).collect();
    let _ = writeln!(out, "PLACE {};", places.join(", "));
    let marked: Vec<String> = net
        .places()
        .filter(|&s| net.initial_marking().get(s) > 0)
        .map(|s| format!("{}: {}", net.place_name(s), net.initial_marking().get(s)))
        .collect();
    if marked.is_empty() {
        out.push_str("MARKING;\n");
    } else {
        let _ = writeln!(out, "MARKING {};", marked.join(", "));
    }
    for t in net.transitions() {
        let _ = writeln!(out, "TRANSITION {}", net.transition_name(t));
        let list = |arcs: &[(PlaceId, u64)]| -> String {
            arcs.iter()
                .map(|&(s, w)| format!("{}: {}", net.place_name(s), w))
                .collect::<Vec<_>>()
                .join(", ")
        };
        if !net.pre(t).is_empty() {
            let _ = writeln!(out, "  CONSUME {};", list(net.pre(t)));
        }
        if !net.post(t).is_empty() {
            let _ = writeln!(out, "  PRODUCE {};", list(net.post(t)));
        }
    }
    out
}
