//! Perfect play for disjunctive misere X-only tic-tac-toe.
//!
//! A position is a sum of 3x3 boards on which both players place X's; a board
//! with three in a row is out of play, and whoever completes the last line
//! loses. Every board maps into an 18-element commutative monoid, and the
//! outcome of a sum is read off the product of its boards' values.

pub mod board;
pub mod engine;
pub mod monoid;
pub mod oracle;
pub mod persist;
pub mod position;
pub mod quotient;

pub use board::{Board, CanonicalBoard, Move, Symmetry};
pub use monoid::MonoidElement;
pub use oracle::{Oracle, Outcome};
pub use position::Position;
pub use quotient::{InferenceConfig, ValueTable};
