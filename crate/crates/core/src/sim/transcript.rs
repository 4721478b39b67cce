//! Ordered record of everything a run did, one JSON object per line.

use chrono::NaiveDateTime;
use serde::{Deserialize, Serialize};

use crate::events::{Action, EventClass, EventId, HouseEvent};
use crate::people::PersonId;
use crate::planner::{Cell, Node};
use crate::scheduler::{Decision, Priority, TaskId, TaskKind, TaskRow, TaskStatus};
use crate::sim::channel::Delivery;
use crate::sms::{IgnoreReason, MessageId, SmsLogRow, SmsType};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Entry {
    CommandRejected {
        command: String,
        error: String,
    },
    TaskAdded {
        task: TaskId,
        kind: TaskKind,
        scheduled_at: NaiveDateTime,
        priority: Priority,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        event: Option<EventId>,
    },
    TaskCancelled {
        task: TaskId,
    },
    PersonAdded {
        person: PersonId,
        name: String,
    },
    PersonRemoved {
        person: PersonId,
    },
    PrefChanged {
        kind: String,
        on: bool,
    },
    CellChanged {
        node: Node,
        cell: Cell,
    },
    EventClassified {
        event: HouseEvent,
        class: EventClass,
    },
    Action {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        event: Option<EventId>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        message: Option<MessageId>,
        action: Action,
    },
    SmsSent {
        message: MessageId,
        sms_type: SmsType,
        body: String,
        #[serde(flatten)]
        delivery: Delivery,
    },
    SmsSuppressed {
        event: EventId,
    },
    ReplyIgnored {
        message: MessageId,
        text: String,
        reason: IgnoreReason,
    },
    InteractionResolved {
        message: MessageId,
        option: u32,
        by_default: bool,
        action_received: String,
        action_done: String,
    },
    Decision {
        #[serde(flatten)]
        decision: Decision,
    },
    PathPlanned {
        task: TaskId,
        nodes: Vec<Node>,
    },
    Replanned {
        task: TaskId,
        nodes: Vec<Node>,
    },
    Arrived {
        task: TaskId,
        location: String,
    },
    TaskFinished {
        task: TaskId,
        status: TaskStatus,
    },
    Error {
        message: String,
    },
    TaskView {
        rows: Vec<TaskRow>,
    },
    SmsLog {
        rows: Vec<SmsLogRow>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub at: NaiveDateTime,
    #[serde(flatten)]
    pub entry: Entry,
}

impl Record {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("records always serialize")
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Transcript {
    pub records: Vec<Record>,
}

impl Transcript {
    pub fn extend(&mut self, records: impl IntoIterator<Item = Record>) {
        self.records.extend(records);
    }

    /// Line-delimited JSON, one record per line.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&r.to_json());
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(doc: &str) -> Result<Self, serde_json::Error> {
        let records = doc
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(serde_json::from_str)
            .collect::<Result<_, _>>()?;
        Ok(Transcript { records })
    }

    pub fn task_view(&self) -> Option<&[TaskRow]> {
        self.records.iter().rev().find_map(|r| match &r.entry {
            Entry::TaskView { rows } => Some(rows.as_slice()),
            _ => None,
        })
    }

    pub fn sms_log(&self) -> Option<&[SmsLogRow]> {
        self.records.iter().rev().find_map(|r| match &r.entry {
            Entry::SmsLog { rows } => Some(rows.as_slice()),
            _ => None,
        })
    }
}
