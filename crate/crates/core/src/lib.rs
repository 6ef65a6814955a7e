//! Fractal codes built from Sierpinski-triangle cellular automata over F_p.
//!
//! Layers, bottom up: [`field`] arithmetic and Lucas binomials, [`matrix`]
//! linear algebra, [`automaton`] evolution, [`pascal`] objects,
//! [`principal`] bases and weight bounds, [`codespace`] code construction,
//! [`analysis`] distance oracles and bounds, [`verify`] property suites and
//! the [`cli`] front end.

pub mod analysis;
pub mod automaton;
pub mod cli;
pub mod codespace;
pub mod field;
pub mod matrix;
pub mod pascal;
pub mod principal;
pub mod render;
pub mod verify;
