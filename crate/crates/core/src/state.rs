//! Saving and restoring a whole world.
//!
//! A state document is JSON: `{"version": 1, "world": {...}}`. It holds
//! everything, including commands queued for later instants, so a restored
//! world carries on exactly where the saved one stopped.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sim::World;

pub const STATE_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum StateError {
    #[error("malformed state document: {0}")]
    MalformedState(String),
    #[error("unsupported state version {0}")]
    Version(u32),
}

#[derive(Serialize)]
struct Doc<'a> {
    version: u32,
    world: &'a World,
}

#[derive(Deserialize)]
struct Header {
    version: u32,
}

#[derive(Deserialize)]
struct OwnedDoc {
    world: World,
}

pub fn save_state(world: &World) -> String {
    serde_json::to_string_pretty(&Doc {
        version: STATE_VERSION,
        world,
    })
    .expect("worlds always serialize")
}

pub fn load_state(doc: &str) -> Result<World, StateError> {
    let header: Header =
        serde_json::from_str(doc).map_err(|e| StateError::MalformedState(e.to_string()))?;
    if header.version != STATE_VERSION {
        return Err(StateError::Version(header.version));
    }
    let doc: OwnedDoc =
        serde_json::from_str(doc).map_err(|e| StateError::MalformedState(e.to_string()))?;
    Ok(doc.world)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn round_trip_fresh_world() {
        let s = fixtures::sms_scenario();
        let w = World::from_scenario(&s, fixtures::house_config(), fixtures::house_map()).unwrap();
        assert_eq!(load_state(&save_state(&w)).unwrap(), w);
    }

    #[test]
    fn rejects_other_versions_and_garbage() {
        assert!(matches!(
            load_state(r#"{"version": 9, "world": {}}"#),
            Err(StateError::Version(9))
        ));
        assert!(matches!(load_state("{"), Err(StateError::MalformedState(_))));
        assert!(matches!(
            load_state(r#"{"version": 1, "world": {"now": 3}}"#),
            Err(StateError::MalformedState(_))
        ));
    }
}
