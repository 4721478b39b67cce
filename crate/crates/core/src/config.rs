//! World configuration: task catalog, event table, cameras and the phone link.
//!
//! Loaded from TOML. [`WorldConfig::default`] is the stock house and matches
//! `fixtures/house.toml`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::events::{EventError, EventTable};
use crate::planner::GridMap;
use crate::scheduler::TaskCatalog;
use crate::sim::camera::{Camera, CameraSet};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelConfig {
    pub latency_s: u64,
    pub drop_p: f64,
}

impl Default for ChannelConfig {
    fn default() -> Self {
        ChannelConfig {
            latency_s: 5,
            drop_p: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorldConfig {
    /// Location where the robot starts.
    pub robot_home: String,
    #[serde(default)]
    pub channel: ChannelConfig,
    pub cameras: CameraSet,
    pub catalog: TaskCatalog,
    pub events: EventTable,
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot parse configuration: {0}")]
    Parse(#[from] toml::de::Error),
    #[error(transparent)]
    Events(#[from] EventError),
    #[error("configuration refers to location `{0}`, which the map does not have")]
    UnknownLocation(String),
    #[error("configuration refers to task kind `{0}`, which the catalog does not have")]
    UnknownTaskKind(String),
    #[error("drop probability {0} is outside [0, 1]")]
    DropProbability(f64),
}

impl WorldConfig {
    pub fn from_toml(doc: &str) -> Result<Self, ConfigError> {
        Ok(toml::from_str(doc)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration is always representable as TOML")
    }

    /// Check the configuration against itself and a map.
    pub fn validate(&self, map: &GridMap) -> Result<(), ConfigError> {
        self.events.validate()?;
        if !(0.0..=1.0).contains(&self.channel.drop_p) {
            return Err(ConfigError::DropProbability(self.channel.drop_p));
        }
        if !self.catalog.contains(&self.events.monitor_task) {
            return Err(ConfigError::UnknownTaskKind(
                self.events.monitor_task.to_string(),
            ));
        }
        let labels = std::iter::once(&self.robot_home)
            .chain(self.catalog.iter().map(|(_, e)| &e.location));
        for label in labels {
            if map.location(label).is_none() {
                return Err(ConfigError::UnknownLocation(label.clone()));
            }
        }
        Ok(())
    }
}

impl Default for WorldConfig {
    fn default() -> Self {
        let catalog = TaskCatalog::new()
            .with("prepare_hamburger", "Prepare hamburger", 30 * 60, "kitchen")
            .with("prepare_salad", "Prepare salad", 15 * 60, "kitchen")
            .with("wash_dishes", "Wash dishes", 25 * 60, "kitchen")
            .with("monitor_emergency", "Monitor Emergency", 60 * 60, "living room")
            .with("wake_up_alarm", "Wake Up Alarm", 5 * 60, "main room")
            .with("prepare_breakfast_egg", "Prepare Breakfast Egg", 15 * 60, "kitchen")
            .with("prepare_hot_tee", "Prepare hot tee", 10 * 60, "kitchen")
            .with("monitor_baby", "Monitor the baby", 60 * 60, "baby room")
            .with("feed_baby_milk", "Feed the baby (Milk)", 15 * 60, "baby room")
            .with("play_with_baby", "Play with the baby", 30 * 60, "baby room")
            .with("monitor_house", "Monitor the house", 60 * 60, "living room")
            .with("clean_house", "Clean the house", 45 * 60, "hall");
        let cameras = [
            ("cam-living", "living room"),
            ("cam-kitchen", "kitchen"),
            ("cam-baby", "baby room"),
            ("cam-main", "main room"),
            ("cam-door", "outside door"),
        ]
        .into_iter()
        .map(|(id, room)| Camera {
            id: id.to_owned(),
            room: room.to_owned(),
        })
        .collect();
        WorldConfig {
            robot_home: "living room".to_owned(),
            channel: ChannelConfig::default(),
            cameras: CameraSet::new(cameras),
            catalog,
            events: EventTable::default(),
        }
    }
}
