//! The non-interactive subcommands. Each writes its report to `out` and
//! signals failure through [`CmdError`], which knows its exit code.

use std::io::{self, Write};

use notakto::engine::{recommend, Advisor};
use notakto::monoid::multiplication_table_csv;
use notakto::oracle::Oracle;
use notakto::persist;
use notakto::position::{Position, PositionParseError};
use notakto::quotient::{position_value, verify_table, ValueTable, VerifyError};
use thiserror::Error;

use crate::dictionary::DictError;

#[derive(Debug, Error)]
pub enum CmdError {
    #[error("cannot parse position: {0}")]
    Parse(#[from] PositionParseError),
    #[error("position is terminal: no legal moves")]
    Terminal,
    #[error("{0}")]
    Mismatch(#[from] VerifyError),
    #[error(transparent)]
    Dict(#[from] DictError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl CmdError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CmdError::Parse(_) => 2,
            CmdError::Terminal => 3,
            CmdError::Mismatch(_) | CmdError::Dict(_) | CmdError::Io(_) => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DictFormat {
    Json,
    Csv,
}

pub fn parse_position(text: &str) -> Result<Position, CmdError> {
    Ok(text.parse()?)
}

fn join_moves<I: IntoIterator<Item = notakto::Move>>(moves: I) -> String {
    let parts: Vec<String> = moves
        .into_iter()
        .map(|m| format!("({}, {})", m.board_index, m.cell))
        .collect();
    if parts.is_empty() {
        "none".into()
    } else {
        parts.join(" ")
    }
}

pub fn solve(p: &Position, t: &ValueTable, out: &mut impl Write) -> Result<(), CmdError> {
    let value = position_value(p, t);
    let advisor = Advisor::Quotient(t);
    writeln!(out, "position: {p}")?;
    writeln!(out, "outcome: {}", advisor.outcome(p))?;
    writeln!(out, "value: {value}")?;
    writeln!(
        out,
        "winning moves: {}",
        join_moves(advisor.winning_moves(p))
    )?;
    Ok(())
}

pub fn best(p: &Position, t: &ValueTable, out: &mut impl Write) -> Result<(), CmdError> {
    let r = recommend(p, t);
    let mv = r.mv.ok_or(CmdError::Terminal)?;
    let next = p.apply(mv).expect("recommended move is legal");
    writeln!(out, "move: ({}, {})", mv.board_index, mv.cell)?;
    writeln!(out, "outcome: {} (value {})", r.outcome_now, r.value_now)?;
    writeln!(out, "resulting value: {}", position_value(&next, t))?;
    writeln!(out, "resulting position: {next}")?;
    writeln!(out, "rationale: {}", r.rationale)?;
    Ok(())
}

pub fn dict(t: &ValueTable, format: DictFormat, out: &mut impl Write) -> Result<(), CmdError> {
    match format {
        DictFormat::Json => writeln!(out, "{}", persist::to_json(t))?,
        DictFormat::Csv => out.write_all(persist::to_csv(t).as_bytes())?,
    }
    Ok(())
}

pub fn verify(
    t: &ValueTable,
    oracle: &Oracle,
    max_boards: usize,
    out: &mut impl Write,
) -> Result<(), CmdError> {
    match verify_table(t, oracle, max_boards) {
        Ok(r) => {
            writeln!(
                out,
                "checked {} multisets of 1..={} boards in {:.2?}: 0 mismatches",
                r.checked, r.size_limit, r.elapsed
            )?;
            Ok(())
        }
        Err(e) => {
            let VerifyError::Mismatch {
                checked, classes, ..
            } = &e;
            let position = Position::new(classes.iter().map(|c| c.board()).collect());
            writeln!(out, "checked {checked} multisets: 1 mismatch")?;
            writeln!(out, "counterexample: {position}")?;
            Err(e.into())
        }
    }
}

pub fn monoid(out: &mut impl Write) -> Result<(), CmdError> {
    out.write_all(multiplication_table_csv().as_bytes())?;
    Ok(())
}
