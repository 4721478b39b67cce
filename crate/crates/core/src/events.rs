//! House events: classification, emergency procedures and reaction requests.
//!
//! What each event kind means is configuration data held in an
//! [`EventTable`]. Emergency kinds carry a procedure that runs without asking
//! anyone; reaction kinds carry a numbered option list that goes out in a
//! Reaction-SMS, one option marked as the default.

use std::collections::BTreeMap;
use std::fmt;

use chrono::NaiveDateTime;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::people::{FaceTag, Identification, PersonRegistry};
use crate::planner::{Cell, Node};
use crate::scheduler::{Priority, TaskKind};

pub type EventId = u64;

/// Shortest and longest time the robot waits for a reply, in seconds.
pub const MIN_WINDOW_S: u64 = 120;
pub const MAX_WINDOW_S: u64 = 300;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EventKind(pub String);

impl EventKind {
    pub fn new(kind: impl Into<String>) -> Self {
        EventKind(kind.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for EventKind {
    fn from(s: &str) -> Self {
        EventKind(s.to_owned())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventClass {
    Emergency,
    ReactionNeeded,
    Routine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellChange {
    pub node: Node,
    pub cell: Cell,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HouseEvent {
    pub id: EventId,
    pub at: NaiveDateTime,
    pub kind: EventKind,
    pub location: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subject: Option<FaceTag>,
    /// Cells affected by furniture or obstacle events.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cells: Vec<CellChange>,
}

/// An opaque verb with parameters. The simulation logs actions; nothing is
/// physically performed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Action {
    pub verb: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub args: Vec<String>,
}

impl Action {
    pub fn new(verb: &str) -> Self {
        Action {
            verb: verb.to_owned(),
            args: Vec::new(),
        }
    }

    pub fn with_args(verb: &str, args: &[&str]) -> Self {
        Action {
            verb: verb.to_owned(),
            args: args.iter().map(|a| (*a).to_owned()).collect(),
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.args.is_empty() {
            f.write_str(&self.verb)
        } else {
            write!(f, "{}({})", self.verb, self.args.join(", "))
        }
    }
}

/// One configured reaction for a kind.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OptionSpec {
    pub label: String,
    #[serde(default)]
    pub actions: Vec<Action>,
    /// What the robot reports once it has carried the option out.
    pub done: String,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub default: bool,
}

/// How a routine event's `cells` change the robot's picture of the house.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapEffect {
    #[default]
    None,
    /// Furniture moved: the stored map is updated.
    Furniture,
    /// Something is in the way right now: avoided on the current trip only.
    Obstacle,
}

impl MapEffect {
    fn is_none(&self) -> bool {
        *self == MapEffect::None
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KindSpec {
    pub class: EventClass,
    /// Info line; `{location}` and `{person}` are substituted.
    pub info: String,
    /// Emergency procedure. `{address}`, `{owner}` and `{location}` are
    /// substituted in action arguments.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub procedure: Vec<Action>,
    /// Report sent back once the emergency procedure ran.
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub done: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub options: Vec<OptionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window_s: Option<u64>,
    #[serde(default, skip_serializing_if = "MapEffect::is_none")]
    pub map_effect: MapEffect,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HouseProfile {
    pub address: String,
    pub owner: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventTable {
    pub house: HouseProfile,
    /// Spawned at High priority whenever an emergency procedure runs.
    pub monitor_task: TaskKind,
    /// How a recognized visitor is named in info text; `{name}` is substituted.
    pub known_visitor: String,
    pub unknown_visitor: String,
    pub kinds: BTreeMap<EventKind, KindSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EventError {
    #[error("unknown event kind `{0}`")]
    UnknownKind(EventKind),
    #[error("`{0}` is not an emergency")]
    NotEmergency(EventKind),
    #[error("no emergency procedure registered for `{0}`")]
    UnknownProcedure(EventKind),
    #[error("`{0}` does not ask for a reaction")]
    NotReactionNeeded(EventKind),
    #[error("invalid event table: {0}")]
    InvalidTable(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReactionOption {
    pub number: u32,
    pub label: String,
    pub actions: Vec<Action>,
    pub done: String,
    pub is_default: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReactionRequest {
    pub info: String,
    pub options: Vec<ReactionOption>,
    pub window_s: u64,
}

impl ReactionRequest {
    pub fn default_option(&self) -> &ReactionOption {
        self.options
            .iter()
            .find(|o| o.is_default)
            .expect("reaction requests always carry a default option")
    }

    pub fn option(&self, number: u32) -> Option<&ReactionOption> {
        self.options.iter().find(|o| o.number == number)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmergencyRequest {
    pub info: String,
    pub done: String,
}

/// A task the engine wants added to the to-do list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskRequest {
    pub kind: TaskKind,
    pub at: NaiveDateTime,
    pub priority: Priority,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmergencyResponse {
    pub actions: Vec<Action>,
    pub sms: EmergencyRequest,
    pub monitor: TaskRequest,
}

fn fill(template: &str, vars: &[(&str, &str)]) -> String {
    vars.iter().fold(template.to_owned(), |acc, (k, v)| {
        acc.replace(&format!("{{{k}}}"), v)
    })
}

impl EventTable {
    /// Check the table's structural rules: every emergency kind has a
    /// procedure, every reaction kind has options with exactly one default
    /// (a lone option is implicitly the default).
    pub fn validate(&self) -> Result<(), EventError> {
        for (kind, spec) in &self.kinds {
            match spec.class {
                EventClass::Emergency if spec.procedure.is_empty() => {
                    return Err(EventError::InvalidTable(format!(
                        "emergency kind `{kind}` has no procedure"
                    )));
                }
                EventClass::ReactionNeeded => {
                    let defaults = spec.options.iter().filter(|o| o.default).count();
                    let ok = match spec.options.len() {
                        0 => false,
                        1 => defaults <= 1,
                        _ => defaults == 1,
                    };
                    if !ok {
                        return Err(EventError::InvalidTable(format!(
                            "reaction kind `{kind}` needs options with exactly one default"
                        )));
                    }
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub fn spec(&self, kind: &EventKind) -> Result<&KindSpec, EventError> {
        self.kinds
            .get(kind)
            .ok_or_else(|| EventError::UnknownKind(kind.clone()))
    }

    pub fn class_of(&self, kind: &EventKind) -> Result<EventClass, EventError> {
        self.spec(kind).map(|s| s.class)
    }

    pub fn classify_event(&self, event: &HouseEvent) -> Result<EventClass, EventError> {
        self.class_of(&event.kind)
    }

    /// Run the built-in procedure for an emergency.
    pub fn run_emergency(&self, event: &HouseEvent) -> Result<EmergencyResponse, EventError> {
        let spec = self.spec(&event.kind)?;
        if spec.class != EventClass::Emergency {
            return Err(EventError::NotEmergency(event.kind.clone()));
        }
        if spec.procedure.is_empty() {
            return Err(EventError::UnknownProcedure(event.kind.clone()));
        }
        let vars = [
            ("address", self.house.address.as_str()),
            ("owner", self.house.owner.as_str()),
            ("location", event.location.as_str()),
        ];
        let actions = spec
            .procedure
            .iter()
            .map(|a| Action {
                verb: a.verb.clone(),
                args: a.args.iter().map(|arg| fill(arg, &vars)).collect(),
            })
            .collect();
        Ok(EmergencyResponse {
            actions,
            sms: EmergencyRequest {
                info: fill(&spec.info, &vars),
                done: spec.done.clone(),
            },
            monitor: TaskRequest {
                kind: self.monitor_task.clone(),
                at: event.at,
                priority: Priority::High,
            },
        })
    }

    /// Build the info line and numbered options of a Reaction-SMS.
    pub fn build_reaction_request(
        &self,
        event: &HouseEvent,
        registry: &PersonRegistry,
    ) -> Result<ReactionRequest, EventError> {
        let spec = self.spec(&event.kind)?;
        if spec.class != EventClass::ReactionNeeded {
            return Err(EventError::NotReactionNeeded(event.kind.clone()));
        }
        let person = match &event.subject {
            Some(tag) => match resolve_visitor(tag, registry) {
                Identification::Known { person } => {
                    fill(&self.known_visitor, &[("name", &person.name)])
                }
                Identification::Unknown => self.unknown_visitor.clone(),
            },
            None => self.unknown_visitor.clone(),
        };
        let info = fill(
            &spec.info,
            &[("location", &event.location), ("person", &person)],
        );
        let lone = spec.options.len() == 1;
        let options = spec
            .options
            .iter()
            .zip(1..)
            .map(|(o, number)| ReactionOption {
                number,
                label: o.label.clone(),
                actions: o.actions.clone(),
                done: o.done.clone(),
                is_default: o.default || lone,
            })
            .collect();
        Ok(ReactionRequest {
            info,
            options,
            window_s: spec
                .window_s
                .unwrap_or(MAX_WINDOW_S)
                .clamp(MIN_WINDOW_S, MAX_WINDOW_S),
        })
    }
}

pub fn resolve_visitor(face_tag: &FaceTag, registry: &PersonRegistry) -> Identification {
    registry.identify(face_tag)
}

impl Default for EventTable {
    /// Kinds seeded from the housekeeper's standard repertoire.
    fn default() -> Self {
        let speaker = OptionSpec {
            label: "Call me and put me on speaker".into(),
            actions: vec![Action::new("CallOwner"), Action::new("SpeakerOn")],
            done: "I called you and put you on speaker".into(),
            default: false,
        };
        let message = OptionSpec {
            label: "Take a message".into(),
            actions: vec![Action::new("TakeMessage")],
            done: "I take a message".into(),
            default: true,
        };
        let mut kinds = BTreeMap::new();
        kinds.insert(
            EventKind::from("Fire"),
            KindSpec {
                class: EventClass::Emergency,
                info: "Emergency: Fire in the {location}".into(),
                procedure: vec![
                    Action::new("EvacuateBaby"),
                    Action::with_args("CallNumber", &["{address}", "{owner}", "fire"]),
                ],
                done: "I call the firestation. I take the baby and go outdoors".into(),
                options: Vec::new(),
                window_s: None,
                map_effect: MapEffect::None,
            },
        );
        kinds.insert(
            EventKind::from("DoorRing"),
            KindSpec {
                class: EventClass::ReactionNeeded,
                info: "Door ring: {person}".into(),
                procedure: Vec::new(),
                done: String::new(),
                options: vec![
                    OptionSpec {
                        label: "Let the visitor in".into(),
                        actions: vec![
                            Action::new("OpenDoor"),
                            Action::new("WelcomeVisitor"),
                            Action::with_args("Serve", &["juice"]),
                        ],
                        done: "I opened the door, welcomed your visitor and served a juice".into(),
                        default: false,
                    },
                    speaker.clone(),
                    message.clone(),
                ],
                window_s: Some(120),
                map_effect: MapEffect::None,
            },
        );
        kinds.insert(
            EventKind::from("PhoneRing"),
            KindSpec {
                class: EventClass::ReactionNeeded,
                info: "Phone ring: {person}".into(),
                procedure: Vec::new(),
                done: String::new(),
                options: vec![speaker, message],
                window_s: Some(120),
                map_effect: MapEffect::None,
            },
        );
        kinds.insert(
            EventKind::from("BabyCrying"),
            KindSpec {
                class: EventClass::ReactionNeeded,
                info: "Baby crying in the {location}".into(),
                procedure: Vec::new(),
                done: String::new(),
                options: vec![
                    OptionSpec {
                        label: "Feed the baby".into(),
                        actions: vec![Action::with_args("Feed", &["baby", "milk"])],
                        done: "I fed the baby".into(),
                        default: false,
                    },
                    OptionSpec {
                        label: "Play with the baby".into(),
                        actions: vec![Action::with_args("PlayWith", &["baby"])],
                        done: "I played with the baby".into(),
                        default: true,
                    },
                    OptionSpec {
                        label: "Call me".into(),
                        actions: vec![Action::new("CallOwner")],
                        done: "I called you".into(),
                        default: false,
                    },
                ],
                window_s: None,
                map_effect: MapEffect::None,
            },
        );
        for (kind, info, map_effect) in [
            ("MovedFurniture", "Furniture moved in the {location}", MapEffect::Furniture),
            ("ObstacleSeen", "Obstacle in the {location}", MapEffect::Obstacle),
            ("CameraSweep", "Camera sweep of the {location}", MapEffect::None),
        ] {
            kinds.insert(
                EventKind::from(kind),
                KindSpec {
                    class: EventClass::Routine,
                    info: info.into(),
                    procedure: Vec::new(),
                    done: String::new(),
                    options: Vec::new(),
                    window_s: None,
                    map_effect,
                },
            );
        }
        EventTable {
            house: HouseProfile {
                address: "14 Palm Street, Baghdad".into(),
                owner: "Suha Ahmed".into(),
            },
            monitor_task: TaskKind::from("monitor_emergency"),
            known_visitor: "Your {name}".into(),
            unknown_visitor: "unidentified person".into(),
            kinds,
        }
    }
}
