//! Command-line companion to `pidkit-core`: the example registry,
//! distribution files, sweeps, the stake game and report rendering.

pub mod game;
pub mod io;
pub mod registry;
pub mod report;
pub mod sweep;
