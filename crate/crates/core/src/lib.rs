//! Exact selfishness level of finite strategic games.
//!
//! The selfishness level of a game is the least `α ≥ 0` for which the
//! altruistic game `G(α)`, with payoffs `p_i(s) + α·SW(s)`, has a pure Nash
//! equilibrium that is also a social optimum. All arithmetic is exact.
//!
//! ```
//! use selfishness::analysis::selfishness_level;
//! use selfishness::families::{generate, FamilySpec};
//!
//! let pd = generate(&FamilySpec::PrisonersDilemmaN { n: 2 }).unwrap();
//! assert_eq!(selfishness_level(&pd).to_string(), "1");
//! ```

pub mod analysis;
pub mod closedform;
pub mod dynamics;
pub mod families;
pub mod game;
pub mod rational;
pub mod transforms;

pub use analysis::{selfishness_level, DeviationRecord, LevelResult};
pub use families::{generate, FamilySpec};
pub use game::{Game, GameError, JointStrategy, NormalForm, Orientation};
pub use rational::Rational;
