//! Deterministic simulation of 1-D cellular automata and the Game of Life.

mod config;
mod evolution;
mod life;
mod rule;

pub use config::{step, Boundary, Configuration};
pub use evolution::{evolve, Evolution};
pub use life::{life_step, LifeRule, LifeEvolution, LifeGrid};
pub use rule::{rule_from_number, RuleTable};
