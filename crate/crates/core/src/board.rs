//! A single 3x3 board as a 9-bit cell mask.
//!
//! Cells are numbered row-major with bit 0 as the top-left cell and bit 4 as
//! the center:
//!
//! ```text
//! 0 1 2
//! 3 4 5
//! 6 7 8
//! ```

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub const CELLS: usize = 9;
pub const CENTER: u8 = 4;
const FULL: u16 = 0x1ff;

/// The eight three-in-a-row masks: rows, columns, then the two diagonals.
pub const LINES: [u16; 8] = [
    0b000_000_111,
    0b000_111_000,
    0b111_000_000,
    0b001_001_001,
    0b010_010_010,
    0b100_100_100,
    0b100_010_001,
    0b001_010_100,
];

pub fn lines() -> [u16; 8] {
    LINES
}

/// One element of the dihedral group of the square.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symmetry {
    Identity,
    /// Quarter turn clockwise.
    Rotate90,
    Rotate180,
    Rotate270,
    /// Mirror across the vertical axis (left and right swap).
    FlipHorizontal,
    /// Mirror across the horizontal axis (top and bottom swap).
    FlipVertical,
    /// Mirror across the main diagonal (cells 0, 4, 8 fixed).
    Transpose,
    /// Mirror across the anti-diagonal (cells 2, 4, 6 fixed).
    AntiTranspose,
}

impl Symmetry {
    pub const ALL: [Symmetry; 8] = [
        Symmetry::Identity,
        Symmetry::Rotate90,
        Symmetry::Rotate180,
        Symmetry::Rotate270,
        Symmetry::FlipHorizontal,
        Symmetry::FlipVertical,
        Symmetry::Transpose,
        Symmetry::AntiTranspose,
    ];

    pub const fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(t: usize) -> Option<Symmetry> {
        Self::ALL.get(t).copied()
    }

    /// Destination cell of `cell` under this symmetry.
    pub const fn map_cell(self, cell: u8) -> u8 {
        PERMUTATIONS[self as usize][cell as usize]
    }
}

const fn map_rc(t: usize, r: u8, c: u8) -> (u8, u8) {
    match t {
        0 => (r, c),
        1 => (c, 2 - r),
        2 => (2 - r, 2 - c),
        3 => (2 - c, r),
        4 => (r, 2 - c),
        5 => (2 - r, c),
        6 => (c, r),
        _ => (2 - c, 2 - r),
    }
}

const fn build_permutations() -> [[u8; CELLS]; 8] {
    let mut out = [[0u8; CELLS]; 8];
    let mut t = 0;
    while t < 8 {
        let mut cell = 0;
        while cell < CELLS {
            let (r, c) = map_rc(t, (cell / 3) as u8, (cell % 3) as u8);
            out[t][cell] = r * 3 + c;
            cell += 1;
        }
        t += 1;
    }
    out
}

const fn permute(mask: u16, perm: &[u8; CELLS]) -> u16 {
    let mut out = 0u16;
    let mut cell = 0;
    while cell < CELLS {
        if mask & (1 << cell) != 0 {
            out |= 1 << perm[cell];
        }
        cell += 1;
    }
    out
}

const fn build_transformed() -> [[u16; 512]; 8] {
    let mut out = [[0u16; 512]; 8];
    let mut t = 0;
    while t < 8 {
        let mut m = 0;
        while m < 512 {
            out[t][m] = permute(m as u16, &PERMUTATIONS[t]);
            m += 1;
        }
        t += 1;
    }
    out
}

const fn build_canonical() -> [u16; 512] {
    let mut out = [0u16; 512];
    let mut m = 0;
    while m < 512 {
        let mut best = m as u16;
        let mut t = 1;
        while t < 8 {
            let v = TRANSFORMED[t][m];
            if v < best {
                best = v;
            }
            t += 1;
        }
        out[m] = best;
        m += 1;
    }
    out
}

const fn build_dead() -> [bool; 512] {
    let mut out = [false; 512];
    let mut m = 0;
    while m < 512 {
        let mut i = 0;
        while i < LINES.len() {
            if m as u16 & LINES[i] == LINES[i] {
                out[m] = true;
            }
            i += 1;
        }
        m += 1;
    }
    out
}

const PERMUTATIONS: [[u8; CELLS]; 8] = build_permutations();
static TRANSFORMED: [[u16; 512]; 8] = build_transformed();
static CANONICAL: [u16; 512] = build_canonical();
static DEAD: [bool; 512] = build_dead();

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoardError {
    #[error("board mask {0} out of range (must be below 512)")]
    MaskOutOfRange(u32),
    #[error("cell {0} out of range (must be 0..8)")]
    CellOutOfRange(u32),
    #[error("board text {text:?} must have exactly 9 cells, found {found}")]
    WrongLength { text: String, found: usize },
    #[error("board text {text:?}: unexpected character {ch:?} at cell {cell}")]
    BadChar { text: String, ch: char, cell: usize },
    #[error("board {0:?} is neither a 9-cell pattern nor a decimal mask")]
    Unparseable(String),
}

/// A 3x3 board holding only X's.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Board(u16);

impl Board {
    pub const EMPTY: Board = Board(0);

    pub fn from_mask(mask: u32) -> Result<Board, BoardError> {
        if mask > FULL as u32 {
            return Err(BoardError::MaskOutOfRange(mask));
        }
        Ok(Board(mask as u16))
    }

    pub fn from_cells<I: IntoIterator<Item = u8>>(cells: I) -> Result<Board, BoardError> {
        let mut mask = 0u16;
        for cell in cells {
            if cell as usize >= CELLS {
                return Err(BoardError::CellOutOfRange(cell as u32));
            }
            mask |= 1 << cell;
        }
        Ok(Board(mask))
    }

    pub const fn mask(self) -> u16 {
        self.0
    }

    pub const fn count(self) -> u32 {
        self.0.count_ones()
    }

    pub const fn has(self, cell: u8) -> bool {
        cell < CELLS as u8 && self.0 & (1 << cell) != 0
    }

    /// True when at least one line is complete. Dead boards are out of play.
    pub fn is_dead(self) -> bool {
        DEAD[self.0 as usize]
    }

    /// Mask of cells that may be played. Moves completing a line are legal.
    pub fn legal_mask(self) -> u16 {
        if self.is_dead() {
            0
        } else {
            !self.0 & FULL
        }
    }

    pub fn legal_cells(self) -> impl Iterator<Item = u8> {
        let legal = self.legal_mask();
        (0..CELLS as u8).filter(move |c| legal & (1 << c) != 0)
    }

    /// The board with `cell` filled. Does not check legality.
    pub const fn with(self, cell: u8) -> Board {
        Board(self.0 | (1 << cell))
    }

    pub fn transform(self, t: Symmetry) -> Board {
        Board(TRANSFORMED[t.index()][self.0 as usize])
    }

    pub fn canonical(self) -> CanonicalBoard {
        CanonicalBoard(CANONICAL[self.0 as usize])
    }
}

/// Free-function form of [`Board::is_dead`].
pub fn is_dead(b: Board) -> bool {
    b.is_dead()
}

pub fn legal_cells(b: Board) -> Vec<u8> {
    b.legal_cells().collect()
}

pub fn transform(b: Board, t: Symmetry) -> Board {
    b.transform(t)
}

pub fn canonicalize(b: Board) -> CanonicalBoard {
    b.canonical()
}

impl fmt::Display for Board {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for cell in 0..CELLS as u8 {
            f.write_str(if self.has(cell) { "X" } else { "." })?;
        }
        Ok(())
    }
}

impl FromStr for Board {
    type Err = BoardError;

    /// Accepts either the 9-character pattern (`X` occupied, `.` empty) or a
    /// decimal mask.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()) {
            let mask: u32 = s
                .parse()
                .map_err(|_| BoardError::Unparseable(s.to_string()))?;
            return Board::from_mask(mask);
        }
        let found = s.chars().count();
        if found != CELLS {
            return Err(BoardError::WrongLength {
                text: s.to_string(),
                found,
            });
        }
        let mut mask = 0u16;
        for (cell, ch) in s.chars().enumerate() {
            match ch {
                'X' => mask |= 1 << cell,
                '.' => {}
                _ => {
                    return Err(BoardError::BadChar {
                        text: s.to_string(),
                        ch,
                        cell,
                    })
                }
            }
        }
        Ok(Board(mask))
    }
}

/// Orbit representative of a board under rotations and reflections: the
/// smallest mask among the eight images.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalBoard(u16);

impl CanonicalBoard {
    pub const fn code(self) -> u16 {
        self.0
    }

    pub const fn board(self) -> Board {
        Board(self.0)
    }

    /// Returns `None` when `code` is not the minimum of its own orbit.
    pub fn from_code(code: u16) -> Option<CanonicalBoard> {
        (code <= FULL && CANONICAL[code as usize] == code).then_some(CanonicalBoard(code))
    }

    pub fn is_dead(self) -> bool {
        self.board().is_dead()
    }
}

impl fmt::Display for CanonicalBoard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.board().fmt(f)
    }
}

/// All orbit representatives in ascending code order.
pub fn enumerate_canonical() -> Vec<CanonicalBoard> {
    (0..=FULL)
        .filter(|&m| CANONICAL[m as usize] == m)
        .map(CanonicalBoard)
        .collect()
}

/// Raw canonical code of a mask; hot path for the solvers.
#[inline]
pub(crate) fn canonical_code(mask: u16) -> u16 {
    CANONICAL[mask as usize]
}

#[inline]
pub(crate) fn mask_is_dead(mask: u16) -> bool {
    DEAD[mask as usize]
}

/// A move: which board of a position, and which cell on it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Move {
    pub board_index: usize,
    pub cell: u8,
}

impl Move {
    pub const fn new(board_index: usize, cell: u8) -> Move {
        Move { board_index, cell }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "board {} cell {}", self.board_index, self.cell)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(cells: &[u8]) -> Board {
        Board::from_cells(cells.iter().copied()).unwrap()
    }

    #[test]
    fn line_masks() {
        let l = lines();
        assert_eq!(l[0], 0b000_000_111);
        assert!(l.contains(&bits(&[0, 4, 8]).mask()));
        assert!(l.contains(&bits(&[2, 4, 6]).mask()));
        assert_eq!(l.len(), 8);
        assert!(l.iter().all(|m| m.count_ones() == 3));
    }

    #[test]
    fn dead_detection() {
        assert!(!Board::EMPTY.is_dead());
        assert!(bits(&[0, 1, 2]).is_dead());
        assert!(!bits(&[0, 1, 3, 4]).is_dead());
        assert!(bits(&[2, 4, 6, 7]).is_dead());
    }

    #[test]
    fn legal_cell_sets() {
        assert_eq!(legal_cells(Board::EMPTY), (0..9).collect::<Vec<_>>());
        assert!(legal_cells(bits(&[0, 1, 2])).is_empty());
        assert_eq!(legal_cells(bits(&[4])), vec![0, 1, 2, 3, 5, 6, 7, 8]);
    }

    #[test]
    fn transforms_fix_empty_and_center() {
        for t in Symmetry::ALL {
            assert_eq!(Board::EMPTY.transform(t), Board::EMPTY);
            assert_eq!(bits(&[4]).transform(t), bits(&[4]));
        }
        let corner = bits(&[0]).transform(Symmetry::Rotate90);
        assert_eq!(corner, bits(&[2]));
    }

    #[test]
    fn corners_map_to_corners_and_edges_to_edges() {
        let corners = [0u8, 2, 6, 8];
        let edges = [1u8, 3, 5, 7];
        for t in Symmetry::ALL {
            for c in corners {
                assert!(corners.contains(&t.map_cell(c)), "{t:?} {c}");
            }
            for e in edges {
                assert!(edges.contains(&t.map_cell(e)), "{t:?} {e}");
            }
        }
    }

    #[test]
    fn group_closure_and_inverses() {
        let perms: Vec<[u8; 9]> = Symmetry::ALL
            .iter()
            .map(|t| std::array::from_fn(|c| t.map_cell(c as u8)))
            .collect();
        for p in &perms {
            let mut seen = [false; 9];
            p.iter().for_each(|&c| seen[c as usize] = true);
            assert!(seen.iter().all(|&s| s), "not a bijection");
            for q in &perms {
                let composed: [u8; 9] = std::array::from_fn(|c| q[p[c] as usize]);
                assert!(perms.contains(&composed));
            }
        }
        let distinct: std::collections::HashSet<_> = perms.iter().collect();
        assert_eq!(distinct.len(), 8);
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(canonicalize(Board::EMPTY).code(), 0);
        let corner = canonicalize(bits(&[0]));
        for c in [2, 6, 8] {
            assert_eq!(canonicalize(bits(&[c])), corner);
        }
        assert_eq!(canonicalize(Board::from_mask(511).unwrap()).code(), 511);
    }

    #[test]
    fn hundred_and_two_classes() {
        let classes = enumerate_canonical();
        assert_eq!(classes.len(), 102);
        assert_eq!(classes.first().unwrap().code(), 0);
        assert_eq!(classes.last().unwrap().code(), 511);
        assert!(classes.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn burnside_count() {
        // Average number of fixed masks per group element; a mask is fixed
        // exactly when it is a union of the permutation's cycles.
        let mut fixed_total = 0u32;
        for t in Symmetry::ALL {
            let mut seen = [false; 9];
            let mut cycles = 0;
            for start in 0..9u8 {
                if seen[start as usize] {
                    continue;
                }
                cycles += 1;
                let mut c = start;
                while !seen[c as usize] {
                    seen[c as usize] = true;
                    c = t.map_cell(c);
                }
            }
            fixed_total += 1 << cycles;
        }
        assert_eq!(fixed_total, 512 + 8 + 32 + 8 + 64 * 4);
        assert_eq!(fixed_total / 8, 102);

        // Direct orbit count, independent of the canonical table.
        let mut seen = [false; 512];
        let mut orbits = 0;
        for m in 0..512u16 {
            if seen[m as usize] {
                continue;
            }
            orbits += 1;
            for t in Symmetry::ALL {
                let img = permute(m, &std::array::from_fn(|c| t.map_cell(c as u8)));
                seen[img as usize] = true;
            }
        }
        assert_eq!(orbits, 102);
    }

    #[test]
    fn seven_or_more_is_always_dead() {
        for m in 0..512u32 {
            let b = Board::from_mask(m).unwrap();
            if b.count() >= 7 {
                assert!(b.is_dead(), "{b}");
            }
        }
    }

    #[test]
    fn text_format() {
        assert_eq!("....X....".parse::<Board>().unwrap(), bits(&[4]));
        assert_eq!("16".parse::<Board>().unwrap(), bits(&[4]));
        assert_eq!(bits(&[0, 1, 2]).to_string(), "XXX......");
        assert!(matches!(
            "...Q.....".parse::<Board>(),
            Err(BoardError::BadChar {
                cell: 3,
                ch: 'Q',
                ..
            })
        ));
        assert!(matches!(
            "XX".parse::<Board>(),
            Err(BoardError::WrongLength { found: 2, .. })
        ));
        assert_eq!("600".parse::<Board>(), Err(BoardError::MaskOutOfRange(600)));
    }

    #[test]
    fn from_code_rejects_non_representatives() {
        assert!(CanonicalBoard::from_code(0).is_some());
        // Cell 8 alone is a corner but not the minimum of its orbit.
        assert!(CanonicalBoard::from_code(256).is_none());
        assert!(CanonicalBoard::from_code(1).is_some());
    }
}
