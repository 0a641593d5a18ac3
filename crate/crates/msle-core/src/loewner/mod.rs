//! Monte Carlo simulation of Loewner chains: the GFF level-line SDE and
//! the chain driven by a pure partition function, with terminal statistics
//! compared against the closed-form probabilities.

pub mod drive;
pub mod level_line;
pub mod state;

pub use drive::{zalpha_driven_curve, DriveReport, DriveSampler};
pub use level_line::{
    full_pattern_n2, level_line_terminal, LevelLineSampler, PatternFrequencies, StepOutcome,
};
pub use state::{LoewnerState, McConfig, TerminalHistogram};
