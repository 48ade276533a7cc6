//! Move selection and self-play.

use std::collections::VecDeque;

use rand::rngs::StdRng;
use rand::seq::IndexedRandom;
use rand::SeedableRng;
use thiserror::Error;

use crate::board::Move;
use crate::monoid::{mul_index, MonoidElement};
use crate::oracle::{Oracle, Outcome};
use crate::position::{MoveError, Position};
use crate::quotient::{position_value, ValueTable};

/// What the engine would play, and why.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recommendation {
    /// `None` only when the position is terminal.
    pub mv: Option<Move>,
    pub outcome_now: Outcome,
    pub value_now: MonoidElement,
    pub rationale: String,
}

/// Source of truth for outcome classification: the quotient table when one
/// is available, the exhaustive oracle otherwise.
#[derive(Clone, Copy)]
pub enum Advisor<'a> {
    Quotient(&'a ValueTable),
    Oracle(&'a Oracle),
}

impl Advisor<'_> {
    pub fn outcome(&self, p: &Position) -> Outcome {
        match self {
            Advisor::Quotient(t) => Outcome::from_is_p(position_value(p, t).is_p()),
            Advisor::Oracle(o) => o.outcome(p),
        }
    }

    /// Legal moves to a P-position, in board then cell order.
    pub fn winning_moves(&self, p: &Position) -> Vec<Move> {
        if let Advisor::Quotient(t) = self {
            return quotient_moves(p, t)
                .filter(|&(_, v)| v.is_p())
                .map(|(m, _)| m)
                .collect();
        }
        p.legal_moves()
            .into_iter()
            .filter(|&m| self.outcome(&p.apply(m).unwrap()).is_p())
            .collect()
    }

    /// A winning move if one exists. Otherwise the move leaving the opponent
    /// the fewest winning replies; ties go to the lowest board, then cell.
    pub fn choose(&self, p: &Position) -> Option<Move> {
        if let Some(&m) = self.winning_moves(p).first() {
            return Some(m);
        }
        p.legal_moves()
            .into_iter()
            .min_by_key(|&m| self.winning_moves(&p.apply(m).unwrap()).len())
    }
}

/// Every legal move with the value of the position it leads to.
fn quotient_moves<'a>(
    p: &'a Position,
    t: &'a ValueTable,
) -> impl Iterator<Item = (Move, MonoidElement)> + 'a {
    let one = MonoidElement::ONE.index() as u8;
    let values: Vec<u8> = p
        .boards()
        .iter()
        .map(|b| t.index_of_mask(b.mask()))
        .collect();
    p.legal_moves().into_iter().map(move |m| {
        let rest = values
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != m.board_index)
            .fold(one, |acc, (_, &v)| mul_index(acc, v));
        let moved = p.boards()[m.board_index].with(m.cell);
        let v = mul_index(rest, t.index_of_mask(moved.mask()));
        (m, MonoidElement::from_index(v as usize).unwrap())
    })
}

pub fn recommend(p: &Position, t: &ValueTable) -> Recommendation {
    let value_now = position_value(p, t);
    let outcome_now = Outcome::from_is_p(value_now.is_p());
    if p.is_terminal() {
        return Recommendation {
            mv: None,
            outcome_now,
            value_now,
            rationale: "no legal moves".into(),
        };
    }
    let advisor = Advisor::Quotient(t);
    let mv = advisor.choose(p).expect("non-terminal position has a move");
    let next = p.apply(mv).unwrap();
    let next_value = position_value(&next, t);
    let rationale = if outcome_now == Outcome::N {
        format!("moves to value {next_value} in P")
    } else {
        let replies = advisor.winning_moves(&next).len();
        format!(
            "value {value_now} is a P-position; every move loses, this one leaves {replies} winning repl{}",
            if replies == 1 { "y" } else { "ies" }
        )
    };
    Recommendation {
        mv: Some(mv),
        outcome_now,
        value_now,
        rationale,
    }
}

/// Chooses moves for one side of a game.
pub trait Strategy {
    /// `last` is the opponent's previous move, if any. Returning `None` ends
    /// the game with an error.
    fn choose(&mut self, p: &Position, last: Option<Move>) -> Option<Move>;
}

/// Plays [`Advisor::choose`].
pub struct EngineStrategy<'a>(pub Advisor<'a>);

impl Strategy for EngineStrategy<'_> {
    fn choose(&mut self, p: &Position, _last: Option<Move>) -> Option<Move> {
        self.0.choose(p)
    }
}

/// Uniformly random legal moves from a seeded generator.
pub struct RandomStrategy(StdRng);

impl RandomStrategy {
    pub fn seeded(seed: u64) -> RandomStrategy {
        RandomStrategy(StdRng::seed_from_u64(seed))
    }
}

impl Strategy for RandomStrategy {
    fn choose(&mut self, p: &Position, _last: Option<Move>) -> Option<Move> {
        p.legal_moves().choose(&mut self.0).copied()
    }
}

/// Copies the opponent's last cell onto another board, preferring a board
/// that matched the opponent's board before their move. Falls back to the
/// first legal move.
pub struct MimicStrategy;

impl Strategy for MimicStrategy {
    fn choose(&mut self, p: &Position, last: Option<Move>) -> Option<Move> {
        if let Some(last) = last {
            let before = p.boards()[last.board_index].mask() & !(1 << last.cell);
            let candidates: Vec<Move> = (0..p.len())
                .filter(|&j| j != last.board_index)
                .map(|j| Move::new(j, last.cell))
                .filter(|&m| p.check(m).is_ok())
                .collect();
            let twin = candidates
                .iter()
                .find(|m| p.boards()[m.board_index].mask() == before);
            if let Some(&m) = twin.or(candidates.first()) {
                return Some(m);
            }
        }
        p.legal_moves().first().copied()
    }
}

/// Replays a fixed list of moves.
pub struct ScriptedStrategy(VecDeque<Move>);

impl ScriptedStrategy {
    pub fn new<I: IntoIterator<Item = Move>>(moves: I) -> ScriptedStrategy {
        ScriptedStrategy(moves.into_iter().collect())
    }
}

impl Strategy for ScriptedStrategy {
    fn choose(&mut self, _p: &Position, _last: Option<Move>) -> Option<Move> {
        self.0.pop_front()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlayError {
    #[error("player {player} made an illegal move: {source}")]
    Illegal {
        player: usize,
        #[source]
        source: MoveError,
    },
    #[error("player {0} has no move to play")]
    NoMove(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript {
    pub start: Position,
    /// `(player, move)` in order of play; player 0 moves first.
    pub moves: Vec<(usize, Move)>,
    /// Position after each move.
    pub positions: Vec<Position>,
    /// The player who completed the last line. When the start is already
    /// terminal, player 1 (who nominally moved last) loses.
    pub loser: usize,
}

impl Transcript {
    pub fn winner(&self) -> usize {
        1 - self.loser
    }

    pub fn final_position(&self) -> &Position {
        self.positions.last().unwrap_or(&self.start)
    }
}

/// Alternates the two strategies from `start` until no board is live.
pub fn play_out(
    start: &Position,
    players: [&mut dyn Strategy; 2],
) -> Result<Transcript, PlayError> {
    let mut current = start.clone();
    let mut moves = Vec::new();
    let mut positions = Vec::new();
    let mut last = None;
    let mut player = 0;
    while !current.is_terminal() {
        let m = players[player]
            .choose(&current, last)
            .ok_or(PlayError::NoMove(player))?;
        current = current
            .apply(m)
            .map_err(|source| PlayError::Illegal { player, source })?;
        moves.push((player, m));
        positions.push(current.clone());
        last = Some(m);
        player = 1 - player;
    }
    let loser = moves.last().map_or(1, |&(p, _)| p);
    Ok(Transcript {
        start: start.clone(),
        moves,
        positions,
        loser,
    })
}
