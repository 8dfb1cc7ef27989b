//! Experiment orchestration: scenario runs binding geometry, barriers,
//! certification and the solver; regime sweeps; configuration parsing;
//! and file/plot outputs for the CLI.

pub mod config;
pub mod output;
pub mod plot;
mod scenario;
mod sweep;

pub use scenario::{run_scenario, Assertion, Scenario, ScenarioReport, ScenarioTag};
pub use sweep::{
    regime_sweep, CellVerdict, DataSize, Expectation, SweepCell, SweepResult, SweepTemplate,
};
