use chrono::NaiveDateTime;
use serde::{Deserialize, Serialize};

use crate::events::{CellChange, EventKind};
use crate::people::{FaceTag, NewPerson, PersonId};
use crate::planner::{Cell, Node};
use crate::scheduler::{Priority, TaskId, TaskKind};
use crate::sms::MessageId;

/// Every way the outside world can change the simulation. Scenario timeline
/// items and service requests both end up as one of these.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Command {
    AddTask {
        kind: TaskKind,
        scheduled_at: NaiveDateTime,
        priority: Priority,
    },
    CancelTask {
        task: TaskId,
    },
    AddPerson {
        name: String,
        face_tag: FaceTag,
        #[serde(default)]
        photo_ref: String,
        #[serde(default)]
        telephone: String,
        #[serde(default)]
        mobile: String,
    },
    RemovePerson {
        person: PersonId,
    },
    SetPref {
        kind: EventKind,
        on: bool,
    },
    ReplySms {
        message: MessageId,
        text: String,
    },
    SetCell {
        row: usize,
        col: usize,
        cell: Cell,
    },
    InjectEvent {
        kind: EventKind,
        location: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        subject: Option<FaceTag>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        cells: Vec<CellChange>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::AddTask { .. } => "add_task",
            Command::CancelTask { .. } => "cancel_task",
            Command::AddPerson { .. } => "add_person",
            Command::RemovePerson { .. } => "remove_person",
            Command::SetPref { .. } => "set_pref",
            Command::ReplySms { .. } => "reply_sms",
            Command::SetCell { .. } => "set_cell",
            Command::InjectEvent { .. } => "inject_event",
        }
    }

    pub fn add_person(person: NewPerson) -> Self {
        Command::AddPerson {
            name: person.name,
            face_tag: person.face_tag,
            photo_ref: person.photo_ref,
            telephone: person.telephone,
            mobile: person.mobile,
        }
    }

    pub fn set_cell(node: Node, cell: Cell) -> Self {
        Command::SetCell {
            row: node.row,
            col: node.col,
            cell,
        }
    }

    pub fn event(kind: &str, location: &str, subject: Option<&str>) -> Self {
        Command::InjectEvent {
            kind: kind.into(),
            location: location.to_owned(),
            subject: subject.map(Into::into),
            cells: Vec::new(),
        }
    }
}
