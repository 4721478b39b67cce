//! The simulated house.
//!
//! [`World`] owns every module's state and a single simulated clock. Time
//! only moves through [`World::advance`] / [`World::advance_to`], which jump
//! from one due instant to the next. At each instant work happens in a fixed
//! order:
//!
//! 1. queued commands (scenario items, service requests) in submission order;
//! 2. SMS reply deadlines, earliest first;
//! 3. robot progress (one grid node per second while travelling, then work),
//!    followed by a scheduler tick.
//!
//! Everything that happens is reported as transcript [`Record`]s.

pub mod camera;
pub mod channel;
pub mod command;
pub mod scenario;
pub mod transcript;

use std::collections::BTreeSet;

use chrono::{Duration, NaiveDateTime};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{ConfigError, WorldConfig};
use crate::events::{EventClass, EventId, HouseEvent, MapEffect};
use crate::people::{NewPerson, PersonRegistry, RegistryError};
use crate::planner::{Cell, GridMap, MapError, Node, PlanError};
use crate::scheduler::{Decision, Outcome, Scheduler, TaskId, TaskStatus};
use crate::sms::{Dispatch, ReplyAt, ReplyOutcome, Resolution, SmsCenter, SmsError, SmsRequest};

use camera::{Camera, CameraError};
use channel::WirelessChannel;
use command::Command;
use scenario::{Scenario, ScenarioError};
use transcript::{Entry, Record, Transcript};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "activity", rename_all = "snake_case")]
pub enum Activity {
    Idle,
    /// Walking to the task's location; `route` excludes the current node.
    Traveling {
        task: TaskId,
        route: Vec<Node>,
        next_step_at: NaiveDateTime,
    },
    /// At the location, working since the last accounting instant.
    Working { task: TaskId, since: NaiveDateTime },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Robot {
    pub position: Node,
    pub activity: Activity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueuedCommand {
    pub at: NaiveDateTime,
    pub seq: u64,
    pub command: Command,
}

#[derive(Debug, Error)]
pub enum WorldError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error("command rejected: {0}")]
    Rejected(Rejection),
}

/// Why [`World::submit`] refused a command.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Rejection {
    /// The command names a task, person or message that does not exist.
    #[error("{0}")]
    NotFound(String),
    /// The target exists but is no longer in a state that accepts it.
    #[error("{0}")]
    Conflict(String),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct World {
    config: WorldConfig,
    map: GridMap,
    now: NaiveDateTime,
    /// Whether the instant `now` itself has been processed.
    started: bool,
    scheduler: Scheduler,
    registry: PersonRegistry,
    sms: SmsCenter,
    channel: WirelessChannel,
    robot: Robot,
    /// Sorted by `(at, seq)`.
    queue: Vec<QueuedCommand>,
    next_seq: u64,
    next_event_id: EventId,
    /// Obstacles seen on the current trip; forgotten when the trip ends.
    transient: BTreeSet<Node>,
}

/// Collects records stamped with the instant being processed.
struct Out<'a> {
    at: NaiveDateTime,
    records: &'a mut Vec<Record>,
}

impl Out<'_> {
    fn push(&mut self, entry: Entry) {
        self.records.push(Record { at: self.at, entry });
    }
}

impl World {
    pub fn new(
        config: WorldConfig,
        map: GridMap,
        start: NaiveDateTime,
        seed: u64,
    ) -> Result<Self, WorldError> {
        config.validate(&map)?;
        let home = map
            .location(&config.robot_home)
            .expect("validated against the map");
        let channel = WirelessChannel::new(config.channel.latency_s, config.channel.drop_p, seed);
        Ok(World {
            scheduler: Scheduler::new(config.catalog.clone()),
            config,
            map,
            now: start,
            started: false,
            registry: PersonRegistry::new(),
            sms: SmsCenter::new(),
            channel,
            robot: Robot {
                position: home,
                activity: Activity::Idle,
            },
            queue: Vec::new(),
            next_seq: 0,
            next_event_id: 0,
            transient: BTreeSet::new(),
        })
    }

    /// A fresh world at the scenario's start with its timeline queued.
    pub fn from_scenario(
        scenario: &Scenario,
        config: WorldConfig,
        map: GridMap,
    ) -> Result<Self, WorldError> {
        scenario.validate()?;
        let mut world = World::new(config, map, scenario.start, scenario.seed)?;
        for item in &scenario.timeline {
            world.schedule(item.at, item.command.clone());
        }
        Ok(world)
    }

    pub fn now(&self) -> NaiveDateTime {
        self.now
    }

    pub fn config(&self) -> &WorldConfig {
        &self.config
    }

    pub fn map(&self) -> &GridMap {
        &self.map
    }

    pub fn scheduler(&self) -> &Scheduler {
        &self.scheduler
    }

    pub fn registry(&self) -> &PersonRegistry {
        &self.registry
    }

    pub fn sms(&self) -> &SmsCenter {
        &self.sms
    }

    pub fn robot(&self) -> &Robot {
        &self.robot
    }

    pub fn channel(&self) -> &WirelessChannel {
        &self.channel
    }

    pub fn queued(&self) -> &[QueuedCommand] {
        &self.queue
    }

    /// Cameras currently shown on the House View page.
    pub fn view(&self) -> Result<Vec<&Camera>, CameraError> {
        self.config.cameras.rotate_views(self.now)
    }

    /// Queue a command for instant `at` without checking it; problems are
    /// reported in the transcript when it is applied. Commands for instants
    /// already processed run at the next instant.
    pub fn schedule(&mut self, at: NaiveDateTime, command: Command) -> u64 {
        let at = if self.started && at <= self.now {
            self.now + Duration::seconds(1)
        } else {
            at
        };
        let seq = self.next_seq;
        self.next_seq += 1;
        let pos = self.queue.partition_point(|q| (q.at, q.seq) <= (at, seq));
        self.queue.insert(pos, QueuedCommand { at, seq, command });
        seq
    }

    /// Check a command against the current state and queue it for the next
    /// instant. Rejected commands leave the world untouched.
    pub fn submit(&mut self, command: Command) -> Result<QueuedCommand, WorldError> {
        self.validate(&command).map_err(WorldError::Rejected)?;
        let at = if self.started {
            self.now + Duration::seconds(1)
        } else {
            self.now
        };
        let seq = self.schedule(at, command.clone());
        Ok(QueuedCommand { at, seq, command })
    }

    /// Whether `command` would currently apply cleanly.
    pub fn validate(&self, command: &Command) -> Result<(), Rejection> {
        use Rejection::{Conflict, Invalid, NotFound};
        match command {
            Command::AddTask { kind, .. } => {
                if !self.scheduler.catalog().contains(kind) {
                    return Err(Invalid(format!("unknown task kind `{kind}`")));
                }
            }
            Command::CancelTask { task } => match self.scheduler.task(*task) {
                None => return Err(NotFound(format!("task {task} does not exist"))),
                Some(t) if t.status.is_terminal() => {
                    return Err(Conflict(format!("task {task} already finished")))
                }
                Some(_) => {}
            },
            Command::AddPerson { name, face_tag, .. } => {
                match self
                    .registry
                    .validate(&NewPerson::new(name.clone(), face_tag.clone()))
                {
                    Ok(()) => {}
                    Err(e @ RegistryError::DuplicateFaceTag(_)) => return Err(Conflict(e.to_string())),
                    Err(e) => return Err(Invalid(e.to_string())),
                }
            }
            Command::RemovePerson { person } => {
                if self.registry.get(*person).is_none() {
                    return Err(NotFound(format!("person {person} not found")));
                }
            }
            Command::SetPref { kind, on } => self
                .sms
                .prefs()
                .check(&self.config.events, kind, *on)
                .map_err(|e| Invalid(e.to_string()))?,
            Command::ReplySms { message, .. } => {
                self.sms.check_reply(*message).map_err(|e| match e {
                    SmsError::UnknownMessage(_) => NotFound(e.to_string()),
                    SmsError::AlreadyResolved(_) => Conflict(e.to_string()),
                    other => Invalid(other.to_string()),
                })?
            }
            Command::SetCell { row, col, cell } => {
                let node = Node::new(*row, *col);
                let mut probe = self.map.clone();
                probe
                    .set_cell(node, *cell)
                    .map_err(|e| Invalid(e.to_string()))?;
            }
            Command::InjectEvent { kind, location, .. } => {
                self.config
                    .events
                    .class_of(kind)
                    .map_err(|e| Invalid(e.to_string()))?;
                if self.map.location(location).is_none() {
                    return Err(Invalid(format!("unknown location `{location}`")));
                }
            }
        }
        Ok(())
    }

    pub fn advance(&mut self, dt_s: u64) -> Vec<Record> {
        if dt_s == 0 {
            return Vec::new();
        }
        self.advance_to(self.now + Duration::seconds(dt_s as i64))
    }

    /// Process everything due up to and including `target`.
    pub fn advance_to(&mut self, target: NaiveDateTime) -> Vec<Record> {
        let mut records = Vec::new();
        while let Some(t) = self.next_instant() {
            if t > target {
                break;
            }
            self.step(t, &mut records);
        }
        if target > self.now {
            self.now = target;
            self.started = true;
            self.account_work(target);
        }
        records
    }

    /// Earliest instant with something to do.
    pub fn next_instant(&self) -> Option<NaiveDateTime> {
        if !self.started {
            return Some(self.now);
        }
        let robot = match &self.robot.activity {
            Activity::Idle => None,
            Activity::Traveling { next_step_at, .. } => Some(*next_step_at),
            Activity::Working { task, since } => {
                let remaining = self.scheduler.task(*task).map_or(0, |t| t.remaining_s);
                Some((*since + Duration::seconds(remaining as i64)).max(self.now + Duration::seconds(1)))
            }
        };
        [
            self.queue.first().map(|q| q.at.max(self.now + Duration::seconds(1))),
            self.sms.next_deadline(),
            self.scheduler.next_release_after(self.now),
            robot,
        ]
        .into_iter()
        .flatten()
        .min()
    }

    fn step(&mut self, t: NaiveDateTime, records: &mut Vec<Record>) {
        self.now = t;
        self.started = true;
        let mut out = Out { at: t, records };

        let due = self.queue.partition_point(|q| q.at <= t);
        let commands: Vec<QueuedCommand> = self.queue.drain(..due).collect();
        for q in commands {
            self.apply(q.command, &mut out);
        }

        for res in self.sms.expire_due(t) {
            self.report_resolution(&res, &mut out);
        }

        self.progress_robot(t, &mut out);
        self.decide(t, &mut out);
    }

    fn apply(&mut self, command: Command, out: &mut Out<'_>) {
        let name = command.name();
        if let Err(error) = self.apply_inner(command, out) {
            out.push(Entry::CommandRejected {
                command: name.to_owned(),
                error,
            });
        }
    }

    fn apply_inner(&mut self, command: Command, out: &mut Out<'_>) -> Result<(), String> {
        let now = out.at;
        match command {
            Command::AddTask {
                kind,
                scheduled_at,
                priority,
            } => {
                let task = self
                    .scheduler
                    .add_task(kind.clone(), scheduled_at, priority)
                    .map_err(|e| e.to_string())?;
                out.push(Entry::TaskAdded {
                    task,
                    kind,
                    scheduled_at,
                    priority,
                    event: None,
                });
            }
            Command::CancelTask { task } => {
                let was_running = self.scheduler.running() == Some(task);
                if was_running {
                    self.account_work(now);
                }
                match self.scheduler.cancel_task(task).map_err(|e| e.to_string())? {
                    None => out.push(Entry::TaskCancelled { task }),
                    Some(finished) => {
                        out.push(Entry::TaskFinished {
                            task,
                            status: finished.status,
                        });
                    }
                }
                if was_running {
                    self.robot.activity = Activity::Idle;
                    self.transient.clear();
                }
            }
            Command::AddPerson {
                name,
                face_tag,
                photo_ref,
                telephone,
                mobile,
            } => {
                let person = self
                    .registry
                    .add_person(NewPerson {
                        name: name.clone(),
                        face_tag,
                        photo_ref,
                        telephone,
                        mobile,
                    })
                    .map_err(|e| e.to_string())?;
                out.push(Entry::PersonAdded { person, name });
            }
            Command::RemovePerson { person } => {
                self.registry
                    .remove_person(person)
                    .map_err(|e| e.to_string())?;
                out.push(Entry::PersonRemoved { person });
            }
            Command::SetPref { kind, on } => {
                self.sms
                    .prefs_mut()
                    .set_subscription(&self.config.events, &kind, on)
                    .map_err(|e| e.to_string())?;
                out.push(Entry::PrefChanged {
                    kind: kind.to_string(),
                    on,
                });
            }
            Command::ReplySms { message, text } => {
                let reply = ReplyAt {
                    at: now,
                    text: text.clone(),
                };
                match self.sms.reply(message, reply) {
                    Ok(ReplyOutcome::Resolved { resolution }) => {
                        self.report_resolution(&resolution, out)
                    }
                    Ok(ReplyOutcome::Ignored { reason }) => out.push(Entry::ReplyIgnored {
                        message,
                        text,
                        reason,
                    }),
                    Err(SmsError::AlreadyResolved(_)) => out.push(Entry::ReplyIgnored {
                        message,
                        text,
                        reason: crate::sms::IgnoreReason::AlreadyResolved,
                    }),
                    Err(e) => return Err(e.to_string()),
                }
            }
            Command::SetCell { row, col, cell } => {
                let node = Node::new(row, col);
                self.map.set_cell(node, cell).map_err(|e| e.to_string())?;
                out.push(Entry::CellChanged { node, cell });
                self.after_map_change(out);
            }
            Command::InjectEvent {
                kind,
                location,
                subject,
                cells,
            } => {
                if self.map.location(&location).is_none() {
                    return Err(format!("unknown location `{location}`"));
                }
                let class = self
                    .config
                    .events
                    .class_of(&kind)
                    .map_err(|e| e.to_string())?;
                let event = HouseEvent {
                    id: self.next_event_id,
                    at: now,
                    kind,
                    location,
                    subject,
                    cells,
                };
                self.next_event_id += 1;
                out.push(Entry::EventClassified {
                    event: event.clone(),
                    class,
                });
                self.handle_event(&event, class, out);
            }
        }
        Ok(())
    }

    fn handle_event(&mut self, event: &HouseEvent, class: EventClass, out: &mut Out<'_>) {
        let now = out.at;
        match class {
            EventClass::Emergency => {
                let response = match self.config.events.run_emergency(event) {
                    Ok(r) => r,
                    Err(e) => {
                        out.push(Entry::Error {
                            message: e.to_string(),
                        });
                        return;
                    }
                };
                for action in response.actions {
                    out.push(Entry::Action {
                        event: Some(event.id),
                        message: None,
                        action,
                    });
                }
                match self.scheduler.add_task(
                    response.monitor.kind.clone(),
                    response.monitor.at,
                    response.monitor.priority,
                ) {
                    Ok(task) => out.push(Entry::TaskAdded {
                        task,
                        kind: response.monitor.kind,
                        scheduled_at: response.monitor.at,
                        priority: response.monitor.priority,
                        event: Some(event.id),
                    }),
                    Err(e) => out.push(Entry::Error {
                        message: e.to_string(),
                    }),
                }
                let dispatch = self.sms.dispatch(
                    event,
                    SmsRequest::Emergency(response.sms),
                    &mut self.channel,
                    now,
                );
                self.report_dispatch(event, dispatch, out);
            }
            EventClass::ReactionNeeded => {
                match self
                    .config
                    .events
                    .build_reaction_request(event, &self.registry)
                {
                    Ok(request) => {
                        let dispatch = self.sms.dispatch(
                            event,
                            SmsRequest::Reaction(request),
                            &mut self.channel,
                            now,
                        );
                        self.report_dispatch(event, dispatch, out);
                    }
                    Err(e) => out.push(Entry::Error {
                        message: e.to_string(),
                    }),
                }
            }
            EventClass::Routine => {
                let effect = self
                    .config
                    .events
                    .spec(&event.kind)
                    .map_or(MapEffect::None, |s| s.map_effect);
                match effect {
                    MapEffect::None => {}
                    MapEffect::Furniture => {
                        for change in &event.cells {
                            match self.map.set_cell(change.node, change.cell) {
                                Ok(()) => out.push(Entry::CellChanged {
                                    node: change.node,
                                    cell: change.cell,
                                }),
                                Err(e) => out.push(Entry::Error {
                                    message: e.to_string(),
                                }),
                            }
                        }
                        self.after_map_change(out);
                    }
                    MapEffect::Obstacle => {
                        for change in &event.cells {
                            if !self.map.in_bounds(change.node) {
                                out.push(Entry::Error {
                                    message: MapError::OutOfBounds(change.node).to_string(),
                                });
                            } else if change.cell == Cell::Blocked {
                                self.transient.insert(change.node);
                            } else {
                                self.transient.remove(&change.node);
                            }
                        }
                        self.after_map_change(out);
                    }
                }
            }
        }
    }

    fn report_dispatch(&mut self, event: &HouseEvent, dispatch: Dispatch, out: &mut Out<'_>) {
        match dispatch {
            Dispatch::Sent { message, delivery } => out.push(Entry::SmsSent {
                message: message.id,
                sms_type: message.sms_type,
                body: message.body(),
                delivery,
            }),
            Dispatch::Suppressed { resolution } => {
                out.push(Entry::SmsSuppressed { event: event.id });
                for action in &resolution.option.actions {
                    out.push(Entry::Action {
                        event: Some(event.id),
                        message: None,
                        action: action.clone(),
                    });
                }
            }
        }
    }

    fn report_resolution(&mut self, res: &Resolution, out: &mut Out<'_>) {
        out.push(Entry::InteractionResolved {
            message: res.message_id,
            option: res.option.number,
            by_default: res.by_default,
            action_received: res.action_received.clone(),
            action_done: res.option.done.clone(),
        });
        for action in &res.option.actions {
            out.push(Entry::Action {
                event: None,
                message: Some(res.message_id),
                action: action.clone(),
            });
        }
    }

    /// Re-route the current trip if the map or the obstacle set now cuts it.
    fn after_map_change(&mut self, out: &mut Out<'_>) {
        let Activity::Traveling { task, route, .. } = &self.robot.activity else {
            return;
        };
        let task = *task;
        let cut = route
            .iter()
            .any(|n| !self.map.is_walkable(*n) || self.transient.contains(n));
        if !cut {
            return;
        }
        let goal = *route.last().expect("travel routes are non-empty");
        match self.map.replan(self.robot.position, goal, &self.transient) {
            Ok(path) => {
                out.push(Entry::Replanned {
                    task,
                    nodes: path.nodes.clone(),
                });
                if let Activity::Traveling { route, .. } = &mut self.robot.activity {
                    *route = path.nodes[1..].to_vec();
                }
            }
            Err(e) => {
                let location = self.task_location(task);
                let reason = match e {
                    PlanError::NoPath { .. } => format!("Path blocked on the way to {location}"),
                    other => format!("Path blocked: {other}"),
                };
                self.fail_running(task, reason, out);
            }
        }
    }

    fn task_location(&self, task: TaskId) -> String {
        self.scheduler
            .task(task)
            .and_then(|t| self.scheduler.catalog().get(&t.kind))
            .map(|e| e.location.clone())
            .unwrap_or_default()
    }

    fn fail_running(&mut self, task: TaskId, reason: String, out: &mut Out<'_>) {
        if let Ok(t) = self.scheduler.finish_task(task, Outcome::Failure(reason)) {
            out.push(Entry::TaskFinished {
                task,
                status: t.status,
            });
        }
        self.robot.activity = Activity::Idle;
        self.transient.clear();
    }

    fn complete_running(&mut self, task: TaskId, out: &mut Out<'_>) {
        if let Ok(t) = self.scheduler.finish_task(task, Outcome::Success) {
            out.push(Entry::TaskFinished {
                task,
                status: t.status,
            });
        }
        self.robot.activity = Activity::Idle;
    }

    /// Credit work done since the last accounting instant.
    fn account_work(&mut self, t: NaiveDateTime) -> Option<u64> {
        let Activity::Working { task, since } = &mut self.robot.activity else {
            return None;
        };
        let elapsed = (t - *since).num_seconds().max(0) as u64;
        *since = t;
        let task = *task;
        self.scheduler.record_work(task, elapsed).ok()
    }

    fn progress_robot(&mut self, t: NaiveDateTime, out: &mut Out<'_>) {
        match &mut self.robot.activity {
            Activity::Idle => {}
            Activity::Working { task, .. } => {
                let task = *task;
                if self.account_work(t) == Some(0) {
                    self.complete_running(task, out);
                }
            }
            Activity::Traveling {
                task,
                route,
                next_step_at,
            } => {
                if *next_step_at > t {
                    return;
                }
                let task = *task;
                self.robot.position = route.remove(0);
                if route.is_empty() {
                    self.transient.clear();
                    out.push(Entry::Arrived {
                        task,
                        location: self.task_location(task),
                    });
                    self.robot.activity = Activity::Working { task, since: t };
                    if self.scheduler.task(task).map(|x| x.remaining_s) == Some(0) {
                        self.complete_running(task, out);
                    }
                } else {
                    *next_step_at = t + Duration::seconds(1);
                }
            }
        }
    }

    fn decide(&mut self, t: NaiveDateTime, out: &mut Out<'_>) {
        loop {
            let decision = self.scheduler.tick(t);
            let started = match decision {
                Decision::Idle => {
                    self.robot.activity = Activity::Idle;
                    return;
                }
                Decision::Continue { .. } => return,
                Decision::Start { task } => task,
                Decision::Preempt { started, .. } => started,
            };
            out.push(Entry::Decision { decision });
            self.transient.clear();
            if self.begin(started, t, out) {
                return;
            }
        }
    }

    /// Head for a newly started task. Returns false if the task ended on the
    /// spot (no route, or nothing left to do) and the scheduler must pick again.
    fn begin(&mut self, task: TaskId, t: NaiveDateTime, out: &mut Out<'_>) -> bool {
        let location = self.task_location(task);
        let Some(goal) = self.map.location(&location) else {
            self.fail_running(task, format!("Unknown location {location}"), out);
            return false;
        };
        if self.robot.position == goal {
            self.robot.activity = Activity::Working { task, since: t };
            if self.scheduler.task(task).map(|x| x.remaining_s) == Some(0) {
                self.complete_running(task, out);
                return false;
            }
            return true;
        }
        match self.map.plan_path(self.robot.position, goal) {
            Ok(path) => {
                out.push(Entry::PathPlanned {
                    task,
                    nodes: path.nodes.clone(),
                });
                self.robot.activity = Activity::Traveling {
                    task,
                    route: path.nodes[1..].to_vec(),
                    next_step_at: t + Duration::seconds(1),
                };
                true
            }
            Err(PlanError::NoPath { .. }) => {
                self.fail_running(task, format!("No path to {location}"), out);
                false
            }
            Err(e) => {
                self.fail_running(task, format!("Path blocked: {e}"), out);
                false
            }
        }
    }

    /// Closing records: the task page and the SMS log.
    pub fn summary(&self) -> Vec<Record> {
        vec![
            Record {
                at: self.now,
                entry: Entry::TaskView {
                    rows: self.scheduler.current_tasks_view(),
                },
            },
            Record {
                at: self.now,
                entry: Entry::SmsLog {
                    rows: self.sms.sms_log_rows(),
                },
            },
        ]
    }

    /// Current route of the robot, starting at its position.
    pub fn current_path(&self) -> Vec<Node> {
        match &self.robot.activity {
            Activity::Traveling { route, .. } => std::iter::once(self.robot.position)
                .chain(route.iter().copied())
                .collect(),
            _ => vec![self.robot.position],
        }
    }

    pub fn running_task_status(&self) -> Option<&TaskStatus> {
        self.scheduler
            .running()
            .and_then(|id| self.scheduler.task(id))
            .map(|t| &t.status)
    }
}

/// Run a scenario from start to end and return its transcript.
pub fn run_scenario(
    scenario: &Scenario,
    config: WorldConfig,
    map: GridMap,
) -> Result<Transcript, WorldError> {
    let mut world = World::from_scenario(scenario, config, map)?;
    let mut transcript = Transcript::default();
    transcript.extend(world.advance_to(scenario.end));
    transcript.extend(world.summary());
    Ok(transcript)
}
