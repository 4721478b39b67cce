//! The House View page: four camera tiles, the last one rotating.

use chrono::NaiveDateTime;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Seconds each rotation window lasts.
pub const ROTATION_PERIOD_S: i64 = 30;
pub const VISIBLE_SLOTS: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Camera {
    pub id: String,
    pub room: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CameraError {
    #[error("no cameras configured")]
    NoCameras,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CameraSet {
    cameras: Vec<Camera>,
}

impl CameraSet {
    pub fn new(cameras: Vec<Camera>) -> Self {
        CameraSet { cameras }
    }

    pub fn cameras(&self) -> &[Camera] {
        &self.cameras
    }

    /// Index of the 30-second window containing `now`, counted from the Unix epoch.
    pub fn window(now: NaiveDateTime) -> i64 {
        now.and_utc().timestamp().div_euclid(ROTATION_PERIOD_S)
    }

    /// Cameras shown at `now`. The first three slots always show the first
    /// three cameras; the fourth cycles through the rest, one per window.
    pub fn rotate_views(&self, now: NaiveDateTime) -> Result<Vec<&Camera>, CameraError> {
        let n = self.cameras.len();
        if n == 0 {
            return Err(CameraError::NoCameras);
        }
        if n <= VISIBLE_SLOTS {
            return Ok(self.cameras.iter().collect());
        }
        let fixed = VISIBLE_SLOTS - 1;
        let rotating = n - fixed;
        let k = Self::window(now).rem_euclid(rotating as i64) as usize;
        let mut view: Vec<&Camera> = self.cameras[..fixed].iter().collect();
        view.push(&self.cameras[fixed + k]);
        Ok(view)
    }
}
