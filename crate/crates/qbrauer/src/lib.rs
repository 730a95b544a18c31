//! Exact computational toolkit for Brauer and Birman–Murakami–Wenzl (BMW)
//! algebras: diagram bases, skein-relation multiplication, Markov traces,
//! q-dimension formulas, idempotents, fusion multiplicities, and
//! semisimplicity analysis — all over exact scalar domains (rational
//! functions in r and q, rationals, and cyclotomic fields).

pub mod bmw;
pub mod cli;
pub mod diagrams;
pub mod error;
pub mod fusion;
pub mod idempotents;
pub mod qdim;
pub mod scalars;
pub mod semisimple;
pub mod tangle;

pub use error::{Error, Result};

