//! Recursive-descent parser for the formula syntax.
//!
//! ```text
//! formula := or ( "->" formula )?
//! or      := and ( "|" and )*
//! and     := unary ( "&" unary )*
//! unary   := "!" unary
//!          | ("exists" | "forall") var "." formula
//!          | "(" formula ")"
//!          | "E" "(" var "," var ")"
//!          | var "=" var
//! var     := [a-z][a-z0-9_]*
//! ```

use super::Formula;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Var(String),
    Exists,
    Forall,
    Edge,
    Dot,
    Comma,
    LParen,
    RParen,
    Equals,
    Bang,
    Amp,
    Pipe,
    Arrow,
}

fn describe(t: Option<&Tok>) -> String {
    match t {
        None => "end of input".into(),
        Some(Tok::Var(v)) => format!("variable `{v}`"),
        Some(t) => format!(
            "`{}`",
            match t {
                Tok::Exists => "exists",
                Tok::Forall => "forall",
                Tok::Edge => "E",
                Tok::Dot => ".",
                Tok::Comma => ",",
                Tok::LParen => "(",
                Tok::RParen => ")",
                Tok::Equals => "=",
                Tok::Bang => "!",
                Tok::Amp => "&",
                Tok::Pipe => "|",
                Tok::Arrow => "->",
                Tok::Var(_) => unreachable!(),
            }
        ),
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'.' => Tok::Dot,
            b',' => Tok::Comma,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'=' => Tok::Equals,
            b'!' => Tok::Bang,
            b'&' => Tok::Amp,
            b'|' => Tok::Pipe,
            b'E' => Tok::Edge,
            b'-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    i += 1;
                    Tok::Arrow
                } else {
                    return Err(Error::Syntax {
                        pos: i,
                        msg: "expected `->`".into(),
                    });
                }
            }
            b'a'..=b'z' => {
                let mut j = i + 1;
                while j < bytes.len()
                    && matches!(bytes[j], b'a'..=b'z' | b'0'..=b'9' | b'_')
                {
                    j += 1;
                }
                let word = &text[i..j];
                i = j;
                out.push((
                    start,
                    match word {
                        "exists" => Tok::Exists,
                        "forall" => Tok::Forall,
                        _ => Tok::Var(word.to_owned()),
                    },
                ));
                continue;
            }
            _ => {
                return Err(Error::Syntax {
                    pos: i,
                    msg: format!("unexpected character `{}`", text[i..].chars().next().unwrap()),
                })
            }
        };
        i += 1;
        out.push((start, tok));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn error<T>(&self, expected: &str) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos(),
            msg: format!("expected {expected}, found {}", describe(self.peek())),
        })
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        if self.eat(&t) {
            Ok(())
        } else {
            self.error(&describe(Some(&t)))
        }
    }

    fn var(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Var(v)) => {
                let v = v.clone();
                self.at += 1;
                Ok(v)
            }
            _ => self.error("a variable"),
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let lhs = self.or()?;
        if self.eat(&Tok::Arrow) {
            Ok(Formula::implies(lhs, self.formula()?))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<Formula> {
        let mut acc = self.and()?;
        while self.eat(&Tok::Pipe) {
            acc = Formula::or(acc, self.and()?);
        }
        Ok(acc)
    }

    fn and(&mut self) -> Result<Formula> {
        let mut acc = self.unary()?;
        while self.eat(&Tok::Amp) {
            acc = Formula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek() {
            Some(Tok::Bang) => {
                self.at += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::Exists) | Some(Tok::Forall) => {
                let exists = self.peek() == Some(&Tok::Exists);
                self.at += 1;
                let x = self.var()?;
                self.expect(Tok::Dot)?;
                let body = self.formula()?;
                Ok(if exists {
                    Formula::exists(&x, body)
                } else {
                    Formula::forall(&x, body)
                })
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Some(Tok::Edge) => {
                self.at += 1;
                self.expect(Tok::LParen)?;
                let x = self.var()?;
                self.expect(Tok::Comma)?;
                let y = self.var()?;
                self.expect(Tok::RParen)?;
                Ok(Formula::Edge(x, y))
            }
            Some(Tok::Var(_)) => {
                let x = self.var()?;
                self.expect(Tok::Equals)?;
                let y = self.var()?;
                Ok(Formula::Eq(x, y))
            }
            _ => self.error("a formula"),
        }
    }
}

/// Parses a formula; free variables are allowed.
pub fn parse_formula(text: &str) -> Result<Formula> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        end: text.len(),
    };
    let f = p.formula()?;
    if p.at != p.toks.len() {
        return p.error("end of input");
    }
    Ok(f)
}

/// Parses a sentence, rejecting free variables.
pub fn parse_sentence(text: &str) -> Result<Formula> {
    let f = parse_formula(text)?;
    if let Some(v) = f.free_vars().into_iter().next() {
        return Err(Error::UnboundVariable(v));
    }
    Ok(f)
}
