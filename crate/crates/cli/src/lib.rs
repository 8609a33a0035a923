//! Scenario front end for the coherence/opposition toolkit: a line-oriented
//! scenario language, a deterministic report (text and JSON), and DOT
//! diagrams of verified squares and hexagons.

pub mod dot;
pub mod report;
pub mod scenario;

pub use report::{QueryReport, Report};
pub use scenario::{parse_scenario, run_scenario, Scenario, ScenarioError};
