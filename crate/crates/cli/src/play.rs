//! Text-mode game against the engine.

use std::io::{self, BufRead, Write};

use notakto::board::CELLS;
use notakto::engine::recommend;
use notakto::position::Position;
use notakto::quotient::ValueTable;
use notakto::{Board, Move};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PlayError {
    #[error("input ended before the game finished")]
    InputClosed,
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Human,
    Engine,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameSummary {
    pub moves: Vec<(Side, Move)>,
    pub final_position: Position,
    pub loser: Side,
}

/// Reads a move typed as `board cell`. With a single board the board index
/// may be left out.
pub fn parse_move(line: &str, p: &Position) -> Result<Move, String> {
    let parts: Vec<&str> = line
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .collect();
    let (board, cell) = match parts.as_slice() {
        [cell] if p.len() == 1 => ("0", *cell),
        [board, cell] => (*board, *cell),
        _ => return Err("enter a move as: board cell".into()),
    };
    let board: usize = board
        .parse()
        .map_err(|_| format!("{board:?} is not a board number"))?;
    let cell: u8 = cell
        .parse()
        .map_err(|_| format!("{cell:?} is not a cell number"))?;
    let m = Move::new(board, cell);
    p.check(m).map_err(|e| e.to_string())?;
    Ok(m)
}

fn render_row(b: Board, row: u8) -> String {
    (row * 3..row * 3 + 3)
        .map(|c| {
            if b.has(c) {
                'X'
            } else if b.is_dead() {
                '.'
            } else {
                char::from(b'0' + c)
            }
        })
        .map(String::from)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Boards side by side; free cells on live boards show their number.
pub fn render(p: &Position) -> String {
    let mut s = String::new();
    for (i, b) in p.boards().iter().enumerate() {
        let label = if b.is_dead() {
            format!("#{i} dead")
        } else {
            format!("#{i}")
        };
        s.push_str(&format!("{label:<10}"));
    }
    s = s.trim_end().to_string();
    s.push('\n');
    for row in 0..(CELLS / 3) as u8 {
        let line: Vec<String> = p
            .boards()
            .iter()
            .map(|&b| format!("{:<10}", render_row(b, row)))
            .collect();
        s.push_str(line.concat().trim_end());
        s.push('\n');
    }
    s
}

pub fn play<R: BufRead, W: Write>(
    boards: usize,
    human_first: bool,
    table: &ValueTable,
    mut input: R,
    mut out: W,
) -> Result<GameSummary, PlayError> {
    let mut p = Position::empty_boards(boards);
    let mut moves = Vec::new();
    let mut side = if human_first {
        Side::Human
    } else {
        Side::Engine
    };
    writeln!(
        out,
        "Notakto on {boards} board{}. Whoever completes the last line loses.",
        if boards == 1 { "" } else { "s" }
    )?;
    writeln!(out, "Enter moves as: board cell (cells 0-8, row by row).")?;
    while !p.is_terminal() {
        write!(out, "\n{}", render(&p))?;
        let m = match side {
            Side::Human => loop {
                write!(out, "your move> ")?;
                out.flush()?;
                let mut line = String::new();
                if input.read_line(&mut line)? == 0 {
                    return Err(PlayError::InputClosed);
                }
                match parse_move(&line, &p) {
                    Ok(m) => break m,
                    Err(why) => writeln!(out, "{why}; try again")?,
                }
            },
            Side::Engine => {
                let m = recommend(&p, table).mv.expect("live position has a move");
                writeln!(out, "engine plays {} {}", m.board_index, m.cell)?;
                m
            }
        };
        p = p.apply(m).expect("move was checked");
        if p.boards()[m.board_index].is_dead() {
            writeln!(out, "board {} is dead", m.board_index)?;
        }
        moves.push((side, m));
        side = match side {
            Side::Human => Side::Engine,
            Side::Engine => Side::Human,
        };
    }
    write!(out, "\n{}", render(&p))?;
    let loser = moves.last().map(|&(s, _)| s).expect("at least one move");
    match loser {
        Side::Human => writeln!(
            out,
            "You completed the last line: you lose, the engine wins."
        )?,
        Side::Engine => writeln!(out, "The engine completed the last line: you win!")?,
    }
    Ok(GameSummary {
        moves,
        final_position: p,
        loser,
    })
}
