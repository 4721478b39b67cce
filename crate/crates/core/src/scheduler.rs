//! The robot's to-do list.
//!
//! Tasks are kept ordered by `(scheduled_at, priority desc, id)`. At every
//! [`Scheduler::tick`] the scheduler picks the task that should be running:
//! the highest-priority ready task, where "ready" means queued with a
//! scheduled time at or before `now`. A running task is only displaced by a
//! strictly higher priority; a displaced task goes back to `Queued` and keeps
//! its remaining duration unless its catalog entry asks for a restart.

use std::collections::BTreeMap;
use std::fmt;

use chrono::NaiveDateTime;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type TaskId = u64;

/// Identifier of a task kind in the [`TaskCatalog`], e.g. `prepare_hamburger`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TaskKind(pub String);

impl TaskKind {
    pub fn new(kind: impl Into<String>) -> Self {
        TaskKind(kind.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for TaskKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for TaskKind {
    fn from(s: &str) -> Self {
        TaskKind(s.to_owned())
    }
}

/// Task priority. Variants are declared in ascending order so the derived
/// `Ord` ranks `High` above `Normal`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Priority {
    Normal,
    High,
}

impl fmt::Display for Priority {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Priority::Normal => "Normal",
            Priority::High => "High",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "state", rename_all = "snake_case")]
pub enum TaskStatus {
    Queued,
    InProgress,
    Done,
    Failed { reason: String },
}

impl TaskStatus {
    pub fn is_terminal(&self) -> bool {
        matches!(self, TaskStatus::Done | TaskStatus::Failed { .. })
    }

    /// Text shown in the "Progress" column.
    pub fn progress_text(&self) -> &str {
        match self {
            TaskStatus::Queued => "Queued",
            TaskStatus::InProgress => "In progress",
            TaskStatus::Done => "Done",
            TaskStatus::Failed { reason } => reason,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Task {
    pub id: TaskId,
    pub scheduled_at: NaiveDateTime,
    pub kind: TaskKind,
    pub priority: Priority,
    pub status: TaskStatus,
    /// Simulated seconds of work the catalog assigns to this kind.
    pub nominal_duration_s: u64,
    /// Work still owed; equals the nominal duration until the task first runs.
    pub remaining_s: u64,
}

impl Task {
    pub fn failure_reason(&self) -> Option<&str> {
        match &self.status {
            TaskStatus::Failed { reason } => Some(reason),
            _ => None,
        }
    }

    fn ordering_key(&self) -> (NaiveDateTime, std::cmp::Reverse<Priority>, TaskId) {
        (self.scheduled_at, std::cmp::Reverse(self.priority), self.id)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub duration_s: u64,
    /// Map location the robot must reach before working on the task.
    pub location: String,
    /// Start over from the full duration after a preemption instead of resuming.
    #[serde(default)]
    pub restart_on_preempt: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TaskCatalog {
    entries: BTreeMap<TaskKind, CatalogEntry>,
}

impl TaskCatalog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, kind: impl Into<TaskKind>, entry: CatalogEntry) {
        self.entries.insert(kind.into(), entry);
    }

    pub fn with(mut self, kind: &str, name: &str, duration_s: u64, location: &str) -> Self {
        self.insert(
            kind,
            CatalogEntry {
                name: name.to_owned(),
                duration_s,
                location: location.to_owned(),
                restart_on_preempt: false,
            },
        );
        self
    }

    pub fn get(&self, kind: &TaskKind) -> Option<&CatalogEntry> {
        self.entries.get(kind)
    }

    pub fn contains(&self, kind: &TaskKind) -> bool {
        self.entries.contains_key(kind)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TaskKind, &CatalogEntry)> {
        self.entries.iter()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "decision", rename_all = "snake_case")]
pub enum Decision {
    Idle,
    Continue { task: TaskId },
    Start { task: TaskId },
    Preempt { postponed: TaskId, started: TaskId },
}

impl Decision {
    /// The task running after this decision, if any.
    pub fn running(&self) -> Option<TaskId> {
        match *self {
            Decision::Idle => None,
            Decision::Continue { task } | Decision::Start { task } => Some(task),
            Decision::Preempt { started, .. } => Some(started),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Success,
    Failure(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchedulerError {
    #[error("unknown task kind `{0}`")]
    UnknownKind(TaskKind),
    #[error("task {0} does not exist")]
    NotFound(TaskId),
    #[error("task {0} is not in progress")]
    NotInProgress(TaskId),
    #[error("task {0} already finished")]
    AlreadyFinished(TaskId),
}

/// One row of the "Current Tasks" page.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskRow {
    pub id: TaskId,
    pub date: String,
    pub time: String,
    pub task: String,
    pub priority: String,
    pub progress: String,
}

impl fmt::Display for TaskRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}\t{}\t{}\t{}\t{}\t{}",
            self.id, self.date, self.time, self.task, self.priority, self.progress
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scheduler {
    catalog: TaskCatalog,
    /// Sorted by `(scheduled_at, priority desc, id)`.
    tasks: Vec<Task>,
    next_id: TaskId,
    running: Option<TaskId>,
    last_tick: Option<NaiveDateTime>,
}

impl Scheduler {
    pub fn new(catalog: TaskCatalog) -> Self {
        Scheduler {
            catalog,
            ..Default::default()
        }
    }

    pub fn catalog(&self) -> &TaskCatalog {
        &self.catalog
    }

    pub fn tasks(&self) -> &[Task] {
        &self.tasks
    }

    pub fn task(&self, id: TaskId) -> Option<&Task> {
        self.tasks.iter().find(|t| t.id == id)
    }

    pub fn running(&self) -> Option<TaskId> {
        self.running
    }

    pub fn add_task(
        &mut self,
        kind: impl Into<TaskKind>,
        scheduled_at: NaiveDateTime,
        priority: Priority,
    ) -> Result<TaskId, SchedulerError> {
        let kind = kind.into();
        let entry = self
            .catalog
            .get(&kind)
            .ok_or_else(|| SchedulerError::UnknownKind(kind.clone()))?;
        let id = self.next_id;
        let task = Task {
            id,
            scheduled_at,
            kind,
            priority,
            status: TaskStatus::Queued,
            nominal_duration_s: entry.duration_s,
            remaining_s: entry.duration_s,
        };
        let key = task.ordering_key();
        let pos = self.tasks.partition_point(|t| t.ordering_key() < key);
        self.tasks.insert(pos, task);
        self.next_id += 1;
        Ok(id)
    }

    /// Decide what runs at `now`. A `now` earlier than the previous tick is
    /// treated as the previous tick's time.
    pub fn tick(&mut self, now: NaiveDateTime) -> Decision {
        let now = match self.last_tick {
            Some(last) if last > now => last,
            _ => now,
        };
        self.last_tick = Some(now);

        let best = self
            .tasks
            .iter()
            .filter(|t| t.status == TaskStatus::Queued && t.scheduled_at <= now)
            .max_by(|a, b| {
                a.priority
                    .cmp(&b.priority)
                    .then_with(|| b.ordering_key().cmp(&a.ordering_key()))
            })
            .map(|t| (t.id, t.priority));

        match (self.running, best) {
            (None, None) => Decision::Idle,
            (None, Some((id, _))) => {
                self.set_status(id, TaskStatus::InProgress);
                self.running = Some(id);
                Decision::Start { task: id }
            }
            (Some(current), best) => {
                let current_priority = self.get(current).priority;
                match best {
                    Some((id, priority)) if priority > current_priority => {
                        let restart = self
                            .catalog
                            .get(&self.get(current).kind)
                            .is_some_and(|e| e.restart_on_preempt);
                        let postponed = self.get_mut(current);
                        postponed.status = TaskStatus::Queued;
                        if restart {
                            postponed.remaining_s = postponed.nominal_duration_s;
                        }
                        self.set_status(id, TaskStatus::InProgress);
                        self.running = Some(id);
                        Decision::Preempt {
                            postponed: current,
                            started: id,
                        }
                    }
                    _ => Decision::Continue { task: current },
                }
            }
        }
    }

    /// Account `secs` of work on a running task; returns the work still owed.
    pub fn record_work(&mut self, id: TaskId, secs: u64) -> Result<u64, SchedulerError> {
        self.ensure_running(id)?;
        let task = self.get_mut(id);
        task.remaining_s = task.remaining_s.saturating_sub(secs);
        Ok(task.remaining_s)
    }

    pub fn finish_task(&mut self, id: TaskId, outcome: Outcome) -> Result<Task, SchedulerError> {
        self.ensure_running(id)?;
        let task = self.get_mut(id);
        task.status = match outcome {
            Outcome::Success => TaskStatus::Done,
            Outcome::Failure(reason) => TaskStatus::Failed { reason },
        };
        let task = task.clone();
        self.running = None;
        Ok(task)
    }

    /// Withdraw a task. A queued task is removed from the list; a running one
    /// fails with the reason "Cancelled by user".
    pub fn cancel_task(&mut self, id: TaskId) -> Result<Option<Task>, SchedulerError> {
        let task = self.task(id).ok_or(SchedulerError::NotFound(id))?;
        match task.status {
            TaskStatus::Queued => {
                let pos = self.tasks.iter().position(|t| t.id == id).expect("present");
                self.tasks.remove(pos);
                Ok(None)
            }
            TaskStatus::InProgress => self
                .finish_task(id, Outcome::Failure("Cancelled by user".to_owned()))
                .map(Some),
            TaskStatus::Done | TaskStatus::Failed { .. } => Err(SchedulerError::AlreadyFinished(id)),
        }
    }

    /// Rows of the "Current Tasks" page, in list order.
    pub fn current_tasks_view(&self) -> Vec<TaskRow> {
        self.tasks
            .iter()
            .map(|t| TaskRow {
                id: t.id,
                date: t.scheduled_at.format("%-m/%-d/%Y").to_string(),
                time: t.scheduled_at.format("%-I:%M:%S %p").to_string(),
                task: self
                    .catalog
                    .get(&t.kind)
                    .map_or_else(|| t.kind.to_string(), |e| e.name.clone()),
                priority: t.priority.to_string(),
                progress: t.status.progress_text().to_owned(),
            })
            .collect()
    }

    /// Earliest `scheduled_at` strictly after `now` among queued tasks.
    pub fn next_release_after(&self, now: NaiveDateTime) -> Option<NaiveDateTime> {
        self.tasks
            .iter()
            .filter(|t| t.status == TaskStatus::Queued && t.scheduled_at > now)
            .map(|t| t.scheduled_at)
            .min()
    }

    fn ensure_running(&self, id: TaskId) -> Result<(), SchedulerError> {
        let task = self.task(id).ok_or(SchedulerError::NotFound(id))?;
        if task.status != TaskStatus::InProgress {
            return Err(SchedulerError::NotInProgress(id));
        }
        Ok(())
    }

    fn get(&self, id: TaskId) -> &Task {
        self.task(id).expect("task id tracked by scheduler")
    }

    fn get_mut(&mut self, id: TaskId) -> &mut Task {
        self.tasks
            .iter_mut()
            .find(|t| t.id == id)
            .expect("task id tracked by scheduler")
    }

    fn set_status(&mut self, id: TaskId, status: TaskStatus) {
        self.get_mut(id).status = status;
    }
}
