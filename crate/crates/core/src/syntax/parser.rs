//! Recursive descent parser for the ASCII formula grammar.
//!
//! ```text
//! formula := implies
//! implies := or ( "->" implies )?
//! or      := and ( "|" and )*
//! and     := unary ( "&" unary )*
//! unary   := "~" unary | "[" agent "]" unary | "<" agent ">" unary
//!          | "C" unary | "[*]" unary | "<*>" unary
//!          | "[" update "]" unary | atomic
//! atomic  := "T" | "F" | ident | "(" formula ")"
//! update  := "{" ( clause ("," clause)* )? "}"
//! clause  := "(" formula "," ident "," formula ")"
//! ```

use super::lexer::{tokenize, Spanned, Tok};
use super::{Agent, ArrowUpdate, Atom, Clause, Formula, SyntaxError};

pub fn parse_formula(text: &str) -> Result<Formula, SyntaxError> {
    let mut p = Parser::new(text)?;
    let f = p.formula()?;
    p.expect_end()?;
    Ok(f)
}

/// Parses a bare update such as `{(T,a,p), (q,b,T)}`.
pub fn parse_update(text: &str) -> Result<ArrowUpdate, SyntaxError> {
    let mut p = Parser::new(text)?;
    let u = p.update()?;
    p.expect_end()?;
    Ok(u)
}

struct Parser {
    toks: Vec<Spanned>,
    at: usize,
    end: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self, SyntaxError> {
        Ok(Self {
            toks: tokenize(text)?,
            at: 0,
            end: text.len(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(_, t)| t.clone());
        self.at += 1;
        t
    }

    fn error(&self, message: impl Into<String>) -> SyntaxError {
        SyntaxError::Parse {
            pos: self.pos(),
            message: message.into(),
        }
    }

    fn unexpected(&self, wanted: &str) -> SyntaxError {
        match self.peek() {
            Some(t) => self.error(format!("expected {wanted}, found {}", t.describe())),
            None => self.error(format!("expected {wanted}, found end of input")),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), SyntaxError> {
        if self.peek() == Some(&tok) {
            self.at += 1;
            Ok(())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    fn expect_end(&self) -> Result<(), SyntaxError> {
        match self.peek() {
            None => Ok(()),
            Some(Tok::RParen | Tok::RBracket | Tok::RBrace | Tok::RAngle) => {
                Err(self.error("unbalanced closing delimiter"))
            }
            Some(t) => Err(self.error(format!("expected end of input, found {}", t.describe()))),
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, SyntaxError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.at += 1;
                Ok(s)
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn agent(&mut self) -> Result<Agent, SyntaxError> {
        let name = self.ident("agent name")?;
        Ok(Agent::new(name).expect("lexer only yields identifiers"))
    }

    fn formula(&mut self) -> Result<Formula, SyntaxError> {
        let lhs = self.or()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.at += 1;
            let rhs = self.formula()?;
            return Ok(lhs.implies(rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, SyntaxError> {
        let mut lhs = self.and()?;
        while self.peek() == Some(&Tok::Pipe) {
            self.at += 1;
            lhs = lhs.or(self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, SyntaxError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Tok::Amp) {
            self.at += 1;
            lhs = lhs.and(self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, SyntaxError> {
        match self.peek() {
            Some(Tok::Tilde) => {
                self.at += 1;
                Ok(self.unary()?.not())
            }
            Some(Tok::Common) => {
                self.at += 1;
                Ok(Formula::common(self.unary()?))
            }
            Some(Tok::LBracket) => {
                self.at += 1;
                match self.peek() {
                    Some(Tok::Star) => {
                        self.at += 1;
                        self.expect(Tok::RBracket)?;
                        Ok(Formula::arbitrary(self.unary()?))
                    }
                    Some(Tok::LBrace) => {
                        let u = self.update()?;
                        self.expect(Tok::RBracket)?;
                        Ok(Formula::update(u, self.unary()?))
                    }
                    _ => {
                        let a = self.agent()?;
                        self.expect(Tok::RBracket)?;
                        Ok(Formula::boxed(a, self.unary()?))
                    }
                }
            }
            Some(Tok::LAngle) => {
                self.at += 1;
                if self.peek() == Some(&Tok::Star) {
                    self.at += 1;
                    self.expect(Tok::RAngle)?;
                    Ok(Formula::diamond_arbitrary(self.unary()?))
                } else {
                    let a = self.agent()?;
                    self.expect(Tok::RAngle)?;
                    Ok(Formula::diamond(a, self.unary()?))
                }
            }
            _ => self.atomic(),
        }
    }

    fn atomic(&mut self) -> Result<Formula, SyntaxError> {
        let open = self.pos();
        match self.bump() {
            Some(Tok::True) => Ok(Formula::Top),
            Some(Tok::False) => Ok(Formula::bottom()),
            Some(Tok::Ident(name)) => Ok(Formula::Atom(
                Atom::new(name).expect("lexer only yields identifiers"),
            )),
            Some(Tok::LParen) => {
                let f = self.formula()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(match self.peek() {
                        None => SyntaxError::Parse {
                            pos: open,
                            message: "unbalanced '(' opened here".into(),
                        },
                        Some(_) => self.unexpected("')'"),
                    });
                }
                self.at += 1;
                Ok(f)
            }
            _ => {
                self.at -= 1;
                Err(self.unexpected("formula"))
            }
        }
    }

    fn update(&mut self) -> Result<ArrowUpdate, SyntaxError> {
        self.expect(Tok::LBrace)?;
        let mut clauses = Vec::new();
        if self.peek() == Some(&Tok::RBrace) {
            self.at += 1;
            return Ok(ArrowUpdate::new(clauses));
        }
        loop {
            clauses.push(self.clause()?);
            match self.peek() {
                Some(Tok::Comma) => self.at += 1,
                Some(Tok::RBrace) => {
                    self.at += 1;
                    return Ok(ArrowUpdate::new(clauses));
                }
                _ => return Err(self.unexpected("',' or '}'")),
            }
        }
    }

    fn clause(&mut self) -> Result<Clause, SyntaxError> {
        let start = self.pos();
        self.expect(Tok::LParen)?;
        let pre = self.formula()?;
        self.expect(Tok::Comma)?;
        let agent = self.agent()?;
        self.expect(Tok::Comma)?;
        let post = self.formula()?;
        self.expect(Tok::RParen)?;
        Clause::new(pre, agent, post).map_err(|e| SyntaxError::Parse {
            pos: start,
            message: e.to_string(),
        })
    }
}
