//! Disjunctive sums of boards.

use std::fmt;
use std::str::FromStr;

use smallvec::SmallVec;
use thiserror::Error;

use crate::board::{canonical_code, mask_is_dead, Board, BoardError, Move, CELLS};

/// Sorted canonical codes of the live boards of a position. Two positions
/// with equal keys are the same game.
pub type PositionKey = SmallVec<[u16; 8]>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("board index {index} out of range for a position of {len} boards")]
    NoSuchBoard { index: usize, len: usize },
    #[error("cell {0} out of range (must be 0..8)")]
    NoSuchCell(u8),
    #[error("board {0} is dead and out of play")]
    DeadBoard(usize),
    #[error("cell {cell} on board {board} is already taken")]
    Occupied { board: usize, cell: u8 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PositionParseError {
    #[error("empty position")]
    Empty,
    #[error("board {index}: {source}")]
    Board {
        index: usize,
        #[source]
        source: BoardError,
    },
}

/// A multiset of boards. Board order is kept so that moves can name a board
/// by index, but it never affects the game value.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Position {
    boards: Vec<Board>,
}

impl Position {
    pub fn new(boards: Vec<Board>) -> Position {
        Position { boards }
    }

    pub fn empty_boards(count: usize) -> Position {
        Position::new(vec![Board::EMPTY; count])
    }

    pub fn from_masks(masks: &[u32]) -> Result<Position, BoardError> {
        masks
            .iter()
            .map(|&m| Board::from_mask(m))
            .collect::<Result<_, _>>()
            .map(Position::new)
    }

    pub fn boards(&self) -> &[Board] {
        &self.boards
    }

    pub fn len(&self) -> usize {
        self.boards.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boards.is_empty()
    }

    pub fn live_boards(&self) -> impl Iterator<Item = Board> + '_ {
        self.boards.iter().copied().filter(|b| !b.is_dead())
    }

    /// No legal move remains: every board is dead, or there are none.
    pub fn is_terminal(&self) -> bool {
        self.live_boards().next().is_none()
    }

    pub fn key(&self) -> PositionKey {
        canonical_key(self.boards.iter().map(|b| b.mask()))
    }

    pub fn legal_moves(&self) -> Vec<Move> {
        self.boards
            .iter()
            .enumerate()
            .flat_map(|(i, b)| b.legal_cells().map(move |c| Move::new(i, c)))
            .collect()
    }

    pub fn check(&self, m: Move) -> Result<(), MoveError> {
        let board = *self
            .boards
            .get(m.board_index)
            .ok_or(MoveError::NoSuchBoard {
                index: m.board_index,
                len: self.boards.len(),
            })?;
        if m.cell as usize >= CELLS {
            return Err(MoveError::NoSuchCell(m.cell));
        }
        if board.is_dead() {
            return Err(MoveError::DeadBoard(m.board_index));
        }
        if board.has(m.cell) {
            return Err(MoveError::Occupied {
                board: m.board_index,
                cell: m.cell,
            });
        }
        Ok(())
    }

    /// The position after `m`. Boards killed by the move stay in the list.
    pub fn apply(&self, m: Move) -> Result<Position, MoveError> {
        self.check(m)?;
        let mut next = self.clone();
        next.boards[m.board_index] = next.boards[m.board_index].with(m.cell);
        Ok(next)
    }
}

pub fn apply(p: &Position, m: Move) -> Result<Position, MoveError> {
    p.apply(m)
}

/// Sorted canonical codes of the live masks among `masks`.
pub fn canonical_key<I: IntoIterator<Item = u16>>(masks: I) -> PositionKey {
    let mut key: PositionKey = masks
        .into_iter()
        .filter(|&m| !mask_is_dead(m))
        .map(canonical_code)
        .collect();
    key.sort_unstable();
    key
}

impl From<Vec<Board>> for Position {
    fn from(boards: Vec<Board>) -> Self {
        Position::new(boards)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.boards.iter().enumerate() {
            if i > 0 {
                f.write_str("/")?;
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl FromStr for Position {
    type Err = PositionParseError;

    /// Boards joined by `/` in the 9-character pattern, or decimal masks
    /// joined by `,`. Each piece may use either board notation.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(PositionParseError::Empty);
        }
        let sep = if s.contains('/') { '/' } else { ',' };
        s.split(sep)
            .enumerate()
            .map(|(index, piece)| {
                piece
                    .parse::<Board>()
                    .map_err(|source| PositionParseError::Board { index, source })
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Position::new)
    }
}
