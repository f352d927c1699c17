//! Recursive-descent parser for the concrete formula syntax.
//!
//! ```text
//! formula := implies
//! implies := or ( "->" implies )?
//! or      := and ( "or" or )?
//! and     := unary ( "and" and )?
//! unary   := "not" unary | "B" "[" player "]" unary | "P" "[" player "]" unary
//!          | "EB" ( "^" n )? unary | "CB" unary | atom
//! atom    := "play" "(" player "," strategy ")" | "play" "(" "(" s1 "," ... ")" ")"
//!          | "prop" "(" ident ")" | "RAT" ( "[" player "]" )? | "(" formula ")"
//! ```

use thiserror::Error;

use super::{Formula, PlayerId, StrategyId};
use crate::game::GameForm;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown player `{name}` at offset {position}")]
    UnknownPlayer { name: String, position: usize },
    #[error("unknown strategy `{strategy}` for player `{player}` at offset {position}")]
    UnknownStrategy {
        player: String,
        strategy: String,
        position: usize,
    },
    #[error("unknown atom `{name}` at offset {position}")]
    UnknownAtom { name: String, position: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Arrow,
    Caret,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrack => "`[`".into(),
            Tok::RBrack => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Caret => "`^`".into(),
        }
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '.' || c == '\''
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBrack,
            ']' => Tok::RBrack,
            ',' => Tok::Comma,
            '^' => Tok::Caret,
            '-' => {
                chars.next();
                match chars.peek() {
                    Some(&(_, '>')) => {
                        chars.next();
                        out.push((Tok::Arrow, pos));
                        continue;
                    }
                    _ => {
                        return Err(ParseError::Syntax {
                            position: pos,
                            message: "expected `->`".into(),
                        })
                    }
                }
            }
            c if is_ident_char(c) => {
                let mut s = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if !is_ident_char(c) {
                        break;
                    }
                    s.push(c);
                    chars.next();
                }
                out.push((Tok::Ident(s), pos));
                continue;
            }
            other => {
                return Err(ParseError::Syntax {
                    position: pos,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        chars.next();
        out.push((tok, pos));
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    form: &'a GameForm,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, p)| *p)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            position: self.offset(),
            message: message.into(),
        })
    }

    fn peek_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == kw)
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if *t == tok => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => {
                let found = t.describe();
                self.error(format!("expected {}, found {found}", tok.describe()))
            }
            None => self.error(format!("expected {}, found end of input", tok.describe())),
        }
    }

    fn ident(&mut self) -> Result<(String, usize), ParseError> {
        let at = self.offset();
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok((s, at))
            }
            Some(t) => {
                let found = t.describe();
                self.error(format!("expected identifier, found {found}"))
            }
            None => self.error("expected identifier, found end of input"),
        }
    }

    fn player(&mut self) -> Result<PlayerId, ParseError> {
        let (name, position) = self.ident()?;
        if self.form.player_index(&name).is_none() {
            return Err(ParseError::UnknownPlayer { name, position });
        }
        Ok(PlayerId::new(name))
    }

    fn bracketed_player(&mut self) -> Result<PlayerId, ParseError> {
        self.expect(Tok::LBrack)?;
        let p = self.player()?;
        self.expect(Tok::RBrack)?;
        Ok(p)
    }

    fn strategy_of(&mut self, player: &PlayerId) -> Result<StrategyId, ParseError> {
        let (name, position) = self.ident()?;
        let idx = self
            .form
            .player_index(player.as_str())
            .expect("player checked");
        if self.form.strategy_index(idx, &name).is_none() {
            return Err(ParseError::UnknownStrategy {
                player: player.to_string(),
                strategy: name,
                position,
            });
        }
        Ok(StrategyId::new(name))
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or_expr()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            let rhs = self.formula()?;
            return Ok(lhs.implies(rhs));
        }
        Ok(lhs)
    }

    fn or_expr(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.and_expr()?;
        if self.peek_keyword("or") {
            self.pos += 1;
            let rhs = self.or_expr()?;
            return Ok(lhs.or(rhs));
        }
        Ok(lhs)
    }

    fn and_expr(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.unary()?;
        if self.peek_keyword("and") {
            self.pos += 1;
            let rhs = self.and_expr()?;
            return Ok(lhs.and(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let kw = match self.peek() {
            Some(Tok::Ident(s)) => s.clone(),
            _ => return self.atom(),
        };
        match kw.as_str() {
            "not" => {
                self.pos += 1;
                Ok(self.unary()?.not())
            }
            "B" | "P" if self.peek_at(1) == Some(&Tok::LBrack) => {
                self.pos += 1;
                let p = self.bracketed_player()?;
                let body = self.unary()?;
                Ok(if kw == "B" {
                    Formula::believes(p, body)
                } else {
                    Formula::possible(p, body)
                })
            }
            "EB" => {
                self.pos += 1;
                let mut times = 1usize;
                if self.peek() == Some(&Tok::Caret) {
                    self.pos += 1;
                    let (n, position) = self.ident()?;
                    times = n.parse().map_err(|_| ParseError::Syntax {
                        position,
                        message: format!("expected iteration count, found `{n}`"),
                    })?;
                }
                let mut body = self.unary()?;
                for _ in 0..times {
                    body = Formula::everyone_believes(self.form.players(), &body)
                        .expect("game forms have at least one player");
                }
                Ok(body)
            }
            "CB" => {
                self.pos += 1;
                Ok(Formula::common_belief(self.unary()?))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Some(Tok::Ident(s)) => match s.as_str() {
                "play" => {
                    self.pos += 1;
                    self.expect(Tok::LParen)?;
                    let f = if self.peek() == Some(&Tok::LParen) {
                        self.profile()?
                    } else {
                        let p = self.player()?;
                        self.expect(Tok::Comma)?;
                        let s = self.strategy_of(&p)?;
                        Formula::Play(p, s)
                    };
                    self.expect(Tok::RParen)?;
                    Ok(f)
                }
                "prop" => {
                    self.pos += 1;
                    self.expect(Tok::LParen)?;
                    let (name, position) = self.ident()?;
                    if self.form.atom_index(&name).is_none() {
                        return Err(ParseError::UnknownAtom { name, position });
                    }
                    self.expect(Tok::RParen)?;
                    Ok(Formula::Prop(name))
                }
                "RAT" => {
                    self.pos += 1;
                    if self.peek() == Some(&Tok::LBrack) {
                        Ok(Formula::Rat(self.bracketed_player()?))
                    } else {
                        Ok(Formula::all_rational(self.form.players())
                            .expect("game forms have at least one player"))
                    }
                }
                other => {
                    let other = other.to_owned();
                    self.error(format!("expected a formula, found `{other}`"))
                }
            },
            Some(t) => {
                let found = t.describe();
                self.error(format!("expected a formula, found {found}"))
            }
            None => self.error("expected a formula, found end of input"),
        }
    }

    /// `(s1, ..., sn)` with one strategy per player, in player order.
    fn profile(&mut self) -> Result<Formula, ParseError> {
        self.expect(Tok::LParen)?;
        let players: Vec<PlayerId> = self.form.players().to_vec();
        let mut atoms = Vec::with_capacity(players.len());
        for (k, p) in players.iter().enumerate() {
            if k > 0 {
                self.expect(Tok::Comma)?;
            }
            let s = self.strategy_of(p)?;
            atoms.push(Formula::Play(p.clone(), s));
        }
        if self.peek() == Some(&Tok::Comma) {
            return self.error(format!("profile has more than {} entries", players.len()));
        }
        self.expect(Tok::RParen)?;
        Ok(Formula::conjunction(atoms).expect("nonempty player list"))
    }
}

/// Parses `text` against the vocabulary of `form`, expanding every
/// abbreviation into core constructors.
pub fn parse_formula(text: &str, form: &GameForm) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
        form,
    };
    let f = p.formula()?;
    if p.pos != p.toks.len() {
        let found = p.toks[p.pos].0.describe();
        return p.error(format!("unexpected trailing input {found}"));
    }
    Ok(f)
}
