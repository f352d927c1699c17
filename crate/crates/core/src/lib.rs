//! Language-based games: utilities defined over a belief language, evaluated
//! on finite Γ-structures.
//!
//! - [`lang`]: formulas, parser and printer.
//! - [`game`]: game forms, guard-based utilities and the example games.
//! - [`kripke`]: Γ-structures, validation, characteristic structures and
//!   enumeration.
//! - [`checker`]: model checking, counterfactual utilities, rationality.
//! - [`solve`]: Nash equilibria and rationalizability witnesses.
//! - [`io`], [`cli`], [`catalog`], [`repro`]: files, command line, built-ins.

pub mod catalog;
pub mod checker;
pub mod cli;
pub mod game;
pub mod io;
pub mod kripke;
pub mod lang;
pub mod random;
pub mod rational;
pub mod repro;
pub mod solve;
