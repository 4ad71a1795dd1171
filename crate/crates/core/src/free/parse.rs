//! Recursive-descent parser for the word syntax, e.g. `(k(2,1) o[1] k(1,2)) [2]o k(2,1)`.

use super::{graft, FreeWord, GeneratorSymbol};
use crate::endv::Op;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(usize),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
}

const OPERATORS: [&str; 3] = ["o", "oc", "occ"];

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let (pos, c) = chars[k];
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBrack),
            ']' => Some(Tok::RBrack),
            ',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(t) = single {
            out.push((pos, t));
            k += 1;
        } else if c.is_whitespace() {
            k += 1;
        } else if c.is_ascii_digit() {
            let start = k;
            while k < chars.len() && chars[k].1.is_ascii_digit() {
                k += 1;
            }
            let text: String = chars[start..k].iter().map(|x| x.1).collect();
            let v = text.parse().map_err(|_| Error::Parse {
                pos,
                msg: format!("number {text} too large"),
            })?;
            out.push((pos, Tok::Int(v)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = k;
            while k < chars.len() && (chars[k].1.is_ascii_alphanumeric() || chars[k].1 == '_') {
                k += 1;
            }
            out.push((pos, Tok::Ident(chars[start..k].iter().map(|x| x.1).collect())));
        } else {
            return Err(Error::Parse {
                pos,
                msg: format!("unexpected character {c:?}"),
            });
        }
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
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.at + 1).map(|t| &t.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |t| t.0)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        if self.peek() == Some(&t) {
            self.at += 1;
            Ok(())
        } else {
            self.err(format!("expected {t:?}"))
        }
    }

    fn int(&mut self) -> Result<usize> {
        match self.peek() {
            Some(Tok::Int(v)) => {
                let v = *v;
                self.at += 1;
                Ok(v)
            }
            _ => self.err("expected a number"),
        }
    }

    fn expr(&mut self) -> Result<FreeWord> {
        let mut w = self.primary()?;
        while let Some((op, index)) = self.operator()? {
            let pos = self.pos();
            let rhs = self.primary()?;
            w = graft(op, w, rhs, index).map_err(|e| Error::Parse {
                pos,
                msg: e.to_string(),
            })?;
        }
        Ok(w)
    }

    fn operator(&mut self) -> Result<Option<(Op, usize)>> {
        match (self.peek().cloned(), self.peek2().cloned()) {
            (Some(Tok::Ident(name)), Some(Tok::LBrack)) if name == "o" || name == "oc" => {
                self.at += 2;
                let i = self.int()?;
                self.expect(Tok::RBrack)?;
                Ok(Some((if name == "o" { Op::Circ } else { Op::Circled }, i)))
            }
            (Some(Tok::Ident(name)), _) if name == "occ" => {
                self.at += 1;
                Ok(Some((Op::CircledCirc, 0)))
            }
            (Some(Tok::LBrack), _) => {
                self.at += 1;
                let j = self.int()?;
                self.expect(Tok::RBrack)?;
                match self.peek().cloned() {
                    Some(Tok::Ident(name)) if name == "o" || name == "oc" => {
                        self.at += 1;
                        Ok(Some((if name == "o" { Op::JCirc } else { Op::JCircled }, j)))
                    }
                    _ => self.err("expected `o` or `oc` after `[j]`"),
                }
            }
            (None, _) | (Some(Tok::RParen), _) => Ok(None),
            _ => self.err("expected an operator"),
        }
    }

    fn primary(&mut self) -> Result<FreeWord> {
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.at += 1;
                let w = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(w)
            }
            Some(Tok::Ident(name)) if !OPERATORS.contains(&name.as_str()) => {
                let pos = self.pos();
                self.at += 1;
                self.expect(Tok::LParen)?;
                let m = self.int()?;
                self.expect(Tok::Comma)?;
                let n = self.int()?;
                self.expect(Tok::RParen)?;
                let g = GeneratorSymbol::new(&name, GeneratorSymbol::kind_of_name(&name), m, n)
                    .map_err(|e| Error::Parse {
                        pos,
                        msg: e.to_string(),
                    })?;
                Ok(FreeWord::Gen(g))
            }
            _ => self.err("expected a generator or `(`"),
        }
    }
}

/// Parses a word; every composition is checked as it is read.
pub fn parse_word(src: &str) -> Result<FreeWord> {
    let mut p = Parser {
        toks: lex(src)?,
        at: 0,
        end: src.len(),
    };
    let w = p.expr()?;
    if p.at != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(w)
}
