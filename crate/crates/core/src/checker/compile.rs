//! Hash-consed formula arena. Structurally equal subformulas share one node,
//! so memo tables can be indexed by node id.

use std::collections::HashMap;

use super::CheckError;
use crate::game::{Game, GameForm};
use crate::lang::Formula;
use crate::rational::Rational;

pub(crate) type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) enum Node {
    Play(usize, usize),
    Prop(usize),
    Rat(usize),
    Not(NodeId),
    And(NodeId, NodeId),
    Believes(usize, NodeId),
    CommonBelief(NodeId),
}

/// A game form (and optionally its utilities) with guards compiled to nodes.
#[derive(Debug, Clone)]
pub(crate) struct CompiledGame<'g> {
    pub form: &'g GameForm,
    pub game: Option<&'g Game>,
    pub nodes: Vec<Node>,
    index: HashMap<Node, NodeId>,
    /// Per player: (guard node, value) in declaration order.
    pub guards: Vec<Vec<(NodeId, Rational)>>,
}

impl<'g> CompiledGame<'g> {
    pub fn form_only(form: &'g GameForm) -> Self {
        Self {
            form,
            game: None,
            nodes: Vec::new(),
            index: HashMap::new(),
            guards: Vec::new(),
        }
    }

    pub fn new(game: &'g Game) -> Self {
        let mut c = Self::form_only(game.form());
        c.game = Some(game);
        c.guards = game
            .utilities()
            .iter()
            .map(|spec| {
                spec.guards
                    .iter()
                    .map(|g| {
                        let id = c
                            .compile(&g.guard)
                            .expect("guards are checked when the game is built");
                        (id, g.value.clone())
                    })
                    .collect()
            })
            .collect();
        c
    }

    fn intern(&mut self, node: Node) -> NodeId {
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        self.nodes.push(node);
        self.index.insert(node, self.nodes.len() - 1);
        self.nodes.len() - 1
    }

    fn player(&self, name: &str) -> Result<usize, CheckError> {
        self.form
            .player_index(name)
            .ok_or_else(|| CheckError::UnknownPlayer(name.to_owned()))
    }

    /// Node id of `f` if it is already in the arena.
    pub fn lookup(&self, f: &Formula) -> Option<NodeId> {
        let node = match f {
            Formula::Play(p, s) => {
                let i = self.form.player_index(p.as_str())?;
                Node::Play(i, self.form.strategy_index(i, s.as_str())?)
            }
            Formula::Prop(a) => Node::Prop(self.form.atom_index(a)?),
            Formula::Rat(p) => Node::Rat(self.form.player_index(p.as_str())?),
            Formula::Not(g) => Node::Not(self.lookup(g)?),
            Formula::And(a, b) => Node::And(self.lookup(a)?, self.lookup(b)?),
            Formula::Believes(p, g) => {
                Node::Believes(self.form.player_index(p.as_str())?, self.lookup(g)?)
            }
            Formula::CommonBelief(g) => Node::CommonBelief(self.lookup(g)?),
        };
        self.index.get(&node).copied()
    }

    pub fn compile(&mut self, f: &Formula) -> Result<NodeId, CheckError> {
        let node = match f {
            Formula::Play(p, s) => {
                let i = self.player(p.as_str())?;
                let k = self.form.strategy_index(i, s.as_str()).ok_or_else(|| {
                    CheckError::UnknownStrategy {
                        player: p.to_string(),
                        strategy: s.to_string(),
                    }
                })?;
                Node::Play(i, k)
            }
            Formula::Prop(a) => Node::Prop(
                self.form
                    .atom_index(a)
                    .ok_or_else(|| CheckError::UnknownAtom(a.clone()))?,
            ),
            Formula::Rat(p) => {
                if self.game.is_none() {
                    return Err(CheckError::RatWithoutGame);
                }
                Node::Rat(self.player(p.as_str())?)
            }
            Formula::Not(g) => Node::Not(self.compile(g)?),
            Formula::And(a, b) => {
                let a = self.compile(a)?;
                Node::And(a, self.compile(b)?)
            }
            Formula::Believes(p, g) => {
                let i = self.player(p.as_str())?;
                Node::Believes(i, self.compile(g)?)
            }
            Formula::CommonBelief(g) => Node::CommonBelief(self.compile(g)?),
        };
        Ok(self.intern(node))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::indignant_altruism;

    #[test]
    fn shares_equal_subformulas() {
        let game = indignant_altruism();
        let mut c = CompiledGame::new(&game);
        let before = c.nodes.len();
        // B_B play_A(d) already occurs in Alice's guards
        let f = Formula::believes("B", Formula::play("A", "d"));
        assert!(c.lookup(&f).is_some());
        c.compile(&f).unwrap();
        assert_eq!(c.nodes.len(), before);
        let g = Formula::common_belief(Formula::rat("A"));
        assert!(c.lookup(&g).is_none());
        c.compile(&g).unwrap();
        assert_eq!(c.nodes.len(), before + 2);
    }

    #[test]
    fn rat_needs_game() {
        let game = indignant_altruism();
        let mut c = CompiledGame::form_only(game.form());
        assert_eq!(
            c.compile(&Formula::rat("A")),
            Err(CheckError::RatWithoutGame)
        );
        assert!(matches!(
            c.compile(&Formula::play("A", "x")),
            Err(CheckError::UnknownStrategy { .. })
        ));
    }
}
