//! Scripted, seeded timelines.
//!
//! Scenario files are TOML:
//!
//! ```toml
//! version = 1
//! start = "2010-02-17T13:00:00"
//! end = "2010-02-17T14:00:00"
//! seed = 7
//!
//! [[timeline]]
//! at = "2010-02-17T13:19:00"
//! command = "inject_event"
//! kind = "DoorRing"
//! location = "outside door"
//! subject = "face:mama"
//! ```
//!
//! Each timeline item is a [`Command`] plus the instant it is issued.

use chrono::NaiveDateTime;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::command::Command;

pub const SCENARIO_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioItem {
    pub at: NaiveDateTime,
    #[serde(flatten)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scenario {
    pub version: u32,
    pub start: NaiveDateTime,
    pub end: NaiveDateTime,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub timeline: Vec<ScenarioItem>,
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot parse scenario: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("unsupported scenario version {0}")]
    Version(u32),
    #[error("scenario ends before it starts")]
    Span,
    #[error("timeline item {index} at {at} is out of order")]
    Unsorted { index: usize, at: NaiveDateTime },
    #[error("timeline item {index} at {at} lies outside the scenario span")]
    OutOfSpan { index: usize, at: NaiveDateTime },
}

impl Scenario {
    pub fn new(start: NaiveDateTime, end: NaiveDateTime, seed: u64) -> Self {
        Scenario {
            version: SCENARIO_VERSION,
            start,
            end,
            seed,
            timeline: Vec::new(),
        }
    }

    pub fn push(&mut self, at: NaiveDateTime, command: Command) -> &mut Self {
        self.timeline.push(ScenarioItem { at, command });
        self
    }

    pub fn from_toml(doc: &str) -> Result<Self, ScenarioError> {
        let scenario: Scenario = toml::from_str(doc)?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenarios are always representable as TOML")
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.version != SCENARIO_VERSION {
            return Err(ScenarioError::Version(self.version));
        }
        if self.end < self.start {
            return Err(ScenarioError::Span);
        }
        let mut prev = self.start;
        for (index, item) in self.timeline.iter().enumerate() {
            if item.at < self.start || item.at > self.end {
                return Err(ScenarioError::OutOfSpan { index, at: item.at });
            }
            if item.at < prev {
                return Err(ScenarioError::Unsorted { index, at: item.at });
            }
            prev = item.at;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheduler::Priority;
    use chrono::NaiveDate;

    fn t(h: u32) -> NaiveDateTime {
        NaiveDate::from_ymd_opt(2010, 7, 5).unwrap().and_hms_opt(h, 0, 0).unwrap()
    }

    #[test]
    fn toml_round_trip() {
        let mut s = Scenario::new(t(18), t(22), 7);
        s.push(
            t(18),
            Command::AddTask {
                kind: "prepare_salad".into(),
                scheduled_at: t(19),
                priority: Priority::Normal,
            },
        )
        .push(t(20), Command::event("DoorRing", "outside door", Some("face:mama")))
        .push(t(21), Command::ReplySms { message: 0, text: " 1 ".into() });
        let doc = s.to_toml();
        assert_eq!(Scenario::from_toml(&doc).unwrap(), s);
    }

    #[test]
    fn hand_written_item() {
        let doc = r#"
            version = 1
            start = "2010-07-05T18:00:00"
            end = "2010-07-05T22:00:00"

            [[timeline]]
            at = "2010-07-05T18:00:00"
            command = "set_cell"
            row = 3
            col = 4
            cell = "blocked"
        "#;
        let s = Scenario::from_toml(doc).unwrap();
        assert_eq!(s.seed, 0);
        assert_eq!(
            s.timeline[0].command,
            Command::SetCell { row: 3, col: 4, cell: crate::planner::Cell::Blocked }
        );
    }

    #[test]
    fn invalid_scenarios() {
        let mut s = Scenario::new(t(18), t(22), 0);
        s.version = 2;
        assert!(matches!(s.validate(), Err(ScenarioError::Version(2))));

        let s = Scenario::new(t(22), t(18), 0);
        assert!(matches!(s.validate(), Err(ScenarioError::Span)));

        let mut s = Scenario::new(t(18), t(22), 0);
        s.push(t(20), Command::CancelTask { task: 0 })
            .push(t(19), Command::CancelTask { task: 1 });
        assert!(matches!(s.validate(), Err(ScenarioError::Unsorted { index: 1, .. })));

        let mut s = Scenario::new(t(18), t(22), 0);
        s.push(t(23), Command::CancelTask { task: 0 });
        assert!(matches!(s.validate(), Err(ScenarioError::OutOfSpan { index: 0, .. })));

        assert!(matches!(Scenario::from_toml("version = "), Err(ScenarioError::Parse(_))));
    }
}
