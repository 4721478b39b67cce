//! The stock house and the two reference scenarios, embedded at build time.

use crate::config::WorldConfig;
use crate::planner::{parse_map, GridMap};
use crate::sim::scenario::Scenario;

pub const HOUSE_MAP: &str = include_str!("../fixtures/house.map");
pub const HOUSE_CONFIG: &str = include_str!("../fixtures/house.toml");
/// Eleven tasks over two evenings, run until 21:11 on the first.
pub const TASKS_SCENARIO: &str = include_str!("../fixtures/evening_tasks.toml");
/// A door ring, a phone ring and a fire, each reported by SMS.
pub const SMS_SCENARIO: &str = include_str!("../fixtures/sms_days.toml");

pub fn house_map() -> GridMap {
    parse_map(HOUSE_MAP).expect("stock map parses")
}

pub fn house_config() -> WorldConfig {
    WorldConfig::from_toml(HOUSE_CONFIG).expect("stock configuration parses")
}

pub fn tasks_scenario() -> Scenario {
    Scenario::from_toml(TASKS_SCENARIO).expect("stock scenario parses")
}

pub fn sms_scenario() -> Scenario {
    Scenario::from_toml(SMS_SCENARIO).expect("stock scenario parses")
}
