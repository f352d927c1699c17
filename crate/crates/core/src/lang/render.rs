use super::{Formula, PlayerId};
use crate::game::GameForm;

const IMPLIES: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const UNARY: u8 = 4;

/// Renders `f` in the concrete syntax accepted by [`super::parse_formula`].
///
/// `P[i]`, `or` and `->` are re-folded; rationality atoms are rendered per
/// player.
pub fn render_formula(f: &Formula) -> String {
    Renderer { players: None }.go(f).0
}

/// Like [`render_formula`], but also folds the abbreviations that depend on
/// the player list: `RAT`, `EB` and `play(profile)`.
pub fn render_with(f: &Formula, form: &GameForm) -> String {
    Renderer {
        players: Some(form.players()),
    }
    .go(f)
    .0
}

struct Renderer<'a> {
    players: Option<&'a [PlayerId]>,
}

fn wrap(s: String, prec: u8, min: u8) -> String {
    if prec < min {
        format!("({s})")
    } else {
        s
    }
}

/// Splits a right-associated conjunction into exactly `n` conjuncts.
fn conjuncts(f: &Formula, n: usize) -> Option<Vec<&Formula>> {
    let mut out = Vec::with_capacity(n);
    let mut cur = f;
    while out.len() + 1 < n {
        match cur {
            Formula::And(a, b) => {
                out.push(a.as_ref());
                cur = b;
            }
            _ => return None,
        }
    }
    out.push(cur);
    Some(out)
}

impl Renderer<'_> {
    fn go(&self, f: &Formula) -> (String, u8) {
        if let Some(folded) = self.fold_with_players(f) {
            return folded;
        }
        match f {
            Formula::Play(p, s) => (format!("play({p},{s})"), UNARY),
            Formula::Prop(a) => (format!("prop({a})"), UNARY),
            Formula::Rat(p) => (format!("RAT[{p}]"), UNARY),
            Formula::Believes(p, g) => (format!("B[{p}] {}", self.operand(g)), UNARY),
            Formula::CommonBelief(g) => (format!("CB {}", self.operand(g)), UNARY),
            Formula::And(a, b) => {
                let (l, lp) = self.go(a);
                let (r, rp) = self.go(b);
                (
                    format!("{} and {}", wrap(l, lp, AND + 1), wrap(r, rp, AND)),
                    AND,
                )
            }
            Formula::Not(g) => match g.as_ref() {
                Formula::Believes(p, inner) => match inner.as_ref() {
                    Formula::Not(x) => (format!("P[{p}] {}", self.operand(x)), UNARY),
                    _ => (format!("not {}", self.operand(g)), UNARY),
                },
                Formula::And(a, b) => match (a.as_ref(), b.as_ref()) {
                    // a negated implication on the left reads better as a nested `->`
                    (Formula::Not(x), Formula::Not(y)) if !matches!(x.as_ref(), Formula::And(_, r) if matches!(r.as_ref(), Formula::Not(_))) =>
                    {
                        let (l, lp) = self.go(x);
                        let (r, rp) = self.go(y);
                        (
                            format!("{} or {}", wrap(l, lp, OR + 1), wrap(r, rp, OR)),
                            OR,
                        )
                    }
                    (x, Formula::Not(y)) => {
                        let (l, lp) = self.go(x);
                        let (r, rp) = self.go(y);
                        (
                            format!("{} -> {}", wrap(l, lp, IMPLIES + 1), wrap(r, rp, IMPLIES)),
                            IMPLIES,
                        )
                    }
                    _ => (format!("not {}", self.operand(g)), UNARY),
                },
                _ => (format!("not {}", self.operand(g)), UNARY),
            },
        }
    }

    fn operand(&self, f: &Formula) -> String {
        let (s, p) = self.go(f);
        wrap(s, p, UNARY)
    }

    fn fold_with_players(&self, f: &Formula) -> Option<(String, u8)> {
        let players = self.players?;
        let n = players.len();
        if n < 2 || !matches!(f, Formula::And(..)) {
            return None;
        }
        let parts = conjuncts(f, n)?;

        if parts
            .iter()
            .zip(players)
            .all(|(g, p)| matches!(g, Formula::Rat(q) if q == p))
        {
            return Some(("RAT".into(), UNARY));
        }

        let mut strategies = Vec::with_capacity(n);
        for (g, p) in parts.iter().zip(players) {
            match g {
                Formula::Play(q, s) if q == p => strategies.push(s.as_str()),
                _ => break,
            }
        }
        if strategies.len() == n {
            return Some((format!("play(({}))", strategies.join(",")), UNARY));
        }

        if let Formula::Believes(_, body) = parts[0] {
            let all = parts
                .iter()
                .zip(players)
                .all(|(g, p)| matches!(g, Formula::Believes(q, b) if q == p && b == body));
            if all {
                return Some((format!("EB {}", self.operand(body)), UNARY));
            }
        }
        None
    }
}
