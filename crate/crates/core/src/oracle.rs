//! Exhaustive misere solver for sums of boards.
//!
//! Plain memoized depth-first search over canonical keys. This is the ground
//! truth the quotient dictionary is derived from and checked against, so it
//! deliberately knows nothing about the monoid.

use std::fmt;
use std::sync::OnceLock;

use parking_lot::RwLock;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::board::{canonical_code, mask_is_dead, Board, Move, CELLS};
use crate::position::{Position, PositionKey};

/// Outcome class under best play.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    /// The player to move wins.
    N,
    /// The player who just moved wins.
    P,
}

impl Outcome {
    pub fn from_is_p(is_p: bool) -> Outcome {
        if is_p {
            Outcome::P
        } else {
            Outcome::N
        }
    }

    pub fn is_p(self) -> bool {
        self == Outcome::P
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::N => "N",
            Outcome::P => "P",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("position is terminal: no legal moves")]
    Terminal,
}

/// Distinct canonical successors of each canonical class; `None` marks a
/// move that kills the board.
fn successors(code: u16) -> &'static [Option<u16>] {
    static TABLE: OnceLock<Vec<Vec<Option<u16>>>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        (0..512u16)
            .map(|m| {
                if mask_is_dead(m) {
                    return Vec::new();
                }
                let mut out: Vec<Option<u16>> = (0..CELLS as u16)
                    .filter(|c| m & (1 << c) == 0)
                    .map(|c| {
                        let next = m | (1 << c);
                        (!mask_is_dead(next)).then(|| canonical_code(next))
                    })
                    .collect();
                out.sort_unstable();
                out.dedup();
                out
            })
            .collect()
    });
    &table[code as usize]
}

/// Memoized solver. Shareable across threads: the cache only ever holds
/// finished results, and racing callers compute identical values.
#[derive(Default)]
pub struct Oracle {
    memo: RwLock<FxHashMap<PositionKey, bool>>,
}

impl Oracle {
    pub fn new() -> Oracle {
        Oracle::default()
    }

    /// Number of cached keys.
    pub fn cached(&self) -> usize {
        self.memo.read().len()
    }

    pub fn outcome(&self, p: &Position) -> Outcome {
        Outcome::from_is_p(self.solve(&p.key()))
    }

    /// Outcome of the sum of arbitrary board masks.
    pub fn outcome_of_masks(&self, masks: &[u16]) -> Outcome {
        let key = crate::position::canonical_key(masks.iter().copied());
        Outcome::from_is_p(self.solve(&key))
    }

    /// Outcome for a key that is already sorted and holds only live
    /// canonical codes.
    pub fn outcome_of_key(&self, key: &[u16]) -> Outcome {
        debug_assert!(key.windows(2).all(|w| w[0] <= w[1]));
        Outcome::from_is_p(self.solve(key))
    }

    pub fn winning_moves(&self, p: &Position) -> Result<Vec<Move>, GameError> {
        if p.is_terminal() {
            return Err(GameError::Terminal);
        }
        Ok(p.legal_moves()
            .into_iter()
            .filter(|&m| {
                let next = p.apply(m).expect("generated move is legal");
                self.outcome(&next) == Outcome::P
            })
            .collect())
    }

    fn solve(&self, key: &[u16]) -> bool {
        // No live board: the previous player completed the last line and lost.
        if key.is_empty() {
            return false;
        }
        if let Some(&hit) = self.memo.read().get(key) {
            return hit;
        }
        let mut is_p = true;
        let mut child: PositionKey = PositionKey::with_capacity(key.len());
        'outer: for i in 0..key.len() {
            if i > 0 && key[i] == key[i - 1] {
                continue;
            }
            for &succ in successors(key[i]) {
                child.clear();
                child.extend(key[..i].iter().chain(&key[i + 1..]).copied());
                if let Some(code) = succ {
                    let at = child.partition_point(|&c| c < code);
                    child.insert(at, code);
                }
                if self.solve(&child) {
                    is_p = false;
                    break 'outer;
                }
            }
        }
        self.memo.write().insert(PositionKey::from_slice(key), is_p);
        is_p
    }
}

/// A reachable two-board position where copying the opponent's move onto the
/// other board loses although a winning reply exists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MimicryFailure {
    /// Position before the opponent's move.
    pub before: Position,
    pub opponent_move: Move,
    /// Position we must reply to.
    pub position: Position,
    /// Same cell on the other board; legal but losing.
    pub mimic_move: Move,
    pub winning_moves: Vec<Move>,
}

impl Oracle {
    /// Searches two-board positions reachable from two empty boards while
    /// the second player keeps copying the first player's moves, i.e. both
    /// boards are identical before the opponent moves. Returns the first
    /// failure in ascending mask order.
    pub fn find_mimicry_failure(&self) -> Option<MimicryFailure> {
        // Masks reachable on one board by legal play from empty.
        let mut reachable = vec![false; 512];
        reachable[0] = true;
        for m in 0..512u16 {
            if reachable[m as usize] && !mask_is_dead(m) {
                for c in 0..CELLS {
                    reachable[(m | 1 << c) as usize] = true;
                }
            }
        }
        for m in 0..512u16 {
            if !reachable[m as usize] || mask_is_dead(m) {
                continue;
            }
            let board = Board::from_mask(m as u32).unwrap();
            let before = Position::new(vec![board, board]);
            for opponent_move in board.legal_cells().map(|c| Move::new(0, c)) {
                let position = before.apply(opponent_move).unwrap();
                let mimic_move = Move::new(1, opponent_move.cell);
                let Ok(after_mimic) = position.apply(mimic_move) else {
                    continue;
                };
                if self.outcome(&after_mimic) == Outcome::P {
                    continue;
                }
                let winning_moves = match self.winning_moves(&position) {
                    Ok(w) if !w.is_empty() => w,
                    _ => continue,
                };
                return Some(MimicryFailure {
                    before,
                    opponent_move,
                    position,
                    mimic_move,
                    winning_moves,
                });
            }
        }
        None
    }
}
