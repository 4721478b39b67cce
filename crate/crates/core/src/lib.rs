//! A deterministic simulator of a housekeeper robot.
//!
//! The robot works through a priority task list, walks a grid map of the
//! house, reacts to house events and asks its owner what to do by SMS.
//! Every module is plain data driven by a simulated clock; [`sim::World`]
//! ties them together and [`sim::run_scenario`] replays a scripted timeline.
//!
//! ```
//! use housekeeper::fixtures;
//! use housekeeper::sim::run_scenario;
//!
//! let transcript = run_scenario(
//!     &fixtures::tasks_scenario(),
//!     fixtures::house_config(),
//!     fixtures::house_map(),
//! )
//! .unwrap();
//! let rows = transcript.task_view().unwrap();
//! assert_eq!(rows[0].progress, "Done");
//! assert_eq!(rows[3].progress, "In progress");
//! ```

pub mod config;
pub mod events;
pub mod fixtures;
pub mod people;
pub mod planner;
pub mod scheduler;
pub mod sim;
pub mod sms;
pub mod state;

pub use config::WorldConfig;
pub use planner::GridMap;
pub use sim::scenario::Scenario;
pub use sim::transcript::{Record, Transcript};
pub use sim::{run_scenario, World};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/scheduling.md")]
    mod scheduling {}
    #[doc = include_str!("../../../book/src/planning.md")]
    mod planning {}
    #[doc = include_str!("../../../book/src/events.md")]
    mod events {}
    #[doc = include_str!("../../../book/src/sms.md")]
    mod sms {}
    #[doc = include_str!("../../../book/src/simulation.md")]
    mod simulation {}
    #[doc = include_str!("../../../book/src/formats.md")]
    mod formats {}
    #[doc = include_str!("../../../book/src/running.md")]
    mod running {}
}
