//! Text grammar for words.
//!
//! ```text
//! word      := factor*
//! factor    := atom ("^" signed-int)?
//! atom      := generator | "(" word ")" | "[" word "," word "]" | "1"
//! generator := "e" positive-int | "a" | "b" | "c" | "d"
//! ```
//!
//! `a..d` alias `e1..e4`, `[u,v]` is the commutator `u v u^-1 v^-1` and `1`
//! is the identity, so every printed word parses back.

use std::fmt;

use super::{Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at position {}: {}", self.position, self.message)
    }
}

impl std::error::Error for ParseError {}

pub(super) fn parse_word(text: &str) -> Result<Word, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let w = p.word()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error(format!("unexpected '{}'", p.src[p.pos] as char)));
    }
    Ok(w)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError { position: self.pos, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn word(&mut self) -> Result<Word, ParseError> {
        let mut acc = Word::identity();
        while let Some(c) = self.peek() {
            if c == b')' || c == b']' || c == b',' {
                break;
            }
            let f = self.factor()?;
            acc.mul_assign(&f);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Word, ParseError> {
        let atom = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let exp = self.signed_int()?;
            return Ok(atom.pow(exp));
        }
        Ok(atom)
    }

    fn atom(&mut self) -> Result<Word, ParseError> {
        let c = self.peek().ok_or_else(|| self.error("unexpected end of input"))?;
        match c {
            b'(' => {
                self.pos += 1;
                let w = self.word()?;
                self.expect(b')')?;
                Ok(w)
            }
            b'[' => {
                self.pos += 1;
                let a = self.word()?;
                self.expect(b',')?;
                let b = self.word()?;
                self.expect(b']')?;
                Ok(Word::commutator(&a, &b))
            }
            b'1' => {
                self.pos += 1;
                Ok(Word::identity())
            }
            b'e' => {
                self.pos += 1;
                let start = self.pos;
                let n = self.unsigned_int()?;
                if n == 0 {
                    return Err(ParseError {
                        position: start,
                        message: "generator index 0 is not allowed".into(),
                    });
                }
                if n > i32::MAX as u64 {
                    return Err(ParseError { position: start, message: "generator index too large".into() });
                }
                Ok(Word::from_letters([Letter::pos(n as u32)]))
            }
            b'a'..=b'd' => {
                self.pos += 1;
                Ok(Word::generator(u32::from(c - b'a') + 1))
            }
            _ => Err(self.error(format!("unexpected '{}'", c as char))),
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected '{}'", c as char)))
        }
    }

    fn unsigned_int(&mut self) -> Result<u64, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| ParseError { position: start, message: "number out of range".into() })
    }

    fn signed_int(&mut self) -> Result<i64, ParseError> {
        let neg = match self.src.get(self.pos) {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let n = self.unsigned_int()? as i64;
        Ok(if neg { -n } else { n })
    }
}
