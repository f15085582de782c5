//! Scrum activity capture and data-driven skill assessment.
//!
//! * [`domain`]: entities, task lifecycle and the append-only event log.
//! * [`metrics`]: productivity, Beta-reputation competence, collaboration,
//!   mood stability and the aggregate skills score.
//! * [`reporting`]: scatter series and ranked weekly heatmaps, CSV/JSON export.
//! * [`synth`]: seeded synthetic cohorts emitted as event logs.

pub mod domain;
pub mod metrics;
pub mod par;
pub mod rational;
pub mod reporting;
pub mod synth;
