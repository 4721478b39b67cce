mod common;

use chrono::Duration;
use housekeeper::events::CellChange;
use housekeeper::fixtures;
use housekeeper::planner::{Cell, Node};
use housekeeper::scheduler::{Priority, TaskStatus};
use housekeeper::sim::command::Command;
use housekeeper::sim::transcript::{Entry, Record, Transcript};
use housekeeper::sim::{Activity, World};
use housekeeper::sms::IgnoreReason;

use common::at;

fn world() -> World {
    World::new(
        fixtures::house_config(),
        fixtures::house_map(),
        at(2010, 3, 1, 8, 0, 0),
        0,
    )
    .unwrap()
}

fn entries(records: &[Record]) -> Vec<&Entry> {
    records.iter().map(|r| &r.entry).collect()
}

fn add_task(w: &mut World, kind: &str, priority: Priority) {
    let now = w.now();
    w.submit(Command::AddTask {
        kind: kind.into(),
        scheduled_at: now,
        priority,
    })
    .unwrap();
}

#[test]
fn robot_walks_one_node_per_second_then_works() {
    let mut w = world();
    add_task(&mut w, "prepare_salad", Priority::Normal);
    let records = w.advance(1);
    let path = records
        .iter()
        .find_map(|r| match &r.entry {
            Entry::PathPlanned { nodes, .. } => Some(nodes.clone()),
            _ => None,
        })
        .expect("a path is planned");
    let map = fixtures::house_map();
    assert_eq!(path.first(), map.location("living room").as_ref());
    assert_eq!(path.last(), map.location("kitchen").as_ref());

    let travel = (path.len() - 1) as i64;
    let records = w.advance(travel as u64 + 900);
    let arrived = records
        .iter()
        .find(|r| matches!(r.entry, Entry::Arrived { .. }))
        .unwrap();
    let start = at(2010, 3, 1, 8, 0, 0);
    assert_eq!(arrived.at, start + Duration::seconds(travel));
    let done = records
        .iter()
        .find(|r| matches!(r.entry, Entry::TaskFinished { .. }))
        .unwrap();
    assert_eq!(done.at, start + Duration::seconds(travel + 900));
    assert_eq!(w.scheduler().task(0).unwrap().status, TaskStatus::Done);
}

#[test]
fn obstacle_on_route_triggers_replan_around_it() {
    let mut w = world();
    add_task(&mut w, "play_with_baby", Priority::Normal);
    w.advance(3);
    let route = w.current_path();
    assert!(route.len() > 5);
    let blocker = route[3];
    w.submit(Command::InjectEvent {
        kind: "ObstacleSeen".into(),
        location: "hall".into(),
        subject: None,
        cells: vec![CellChange { node: blocker, cell: Cell::Blocked }],
    })
    .unwrap();
    let records = w.advance(1);
    let replanned = records
        .iter()
        .find_map(|r| match &r.entry {
            Entry::Replanned { nodes, .. } => Some(nodes.clone()),
            _ => None,
        })
        .expect("route was cut, so the robot replans");
    assert!(!replanned.contains(&blocker));
    // The obstacle is transient: the stored map is unchanged.
    assert!(w.map().is_walkable(blocker));

    let records = w.advance(4000);
    assert!(records.iter().any(|r| matches!(r.entry, Entry::Arrived { .. })));
    assert_eq!(w.scheduler().task(0).unwrap().status, TaskStatus::Done);
}

#[test]
fn obstacle_off_route_changes_nothing() {
    let mut w = world();
    add_task(&mut w, "prepare_salad", Priority::Normal);
    w.advance(2);
    let before = w.current_path();
    w.submit(Command::InjectEvent {
        kind: "ObstacleSeen".into(),
        location: "main room".into(),
        subject: None,
        cells: vec![CellChange { node: Node::new(2, 28), cell: Cell::Blocked }],
    })
    .unwrap();
    let records = w.advance(1);
    assert!(!records.iter().any(|r| matches!(r.entry, Entry::Replanned { .. })));
    assert_eq!(w.current_path(), before[1..].to_vec());
}

#[test]
fn walled_in_target_fails_with_reason() {
    let mut w = world();
    // The main room has two doorways: from the hall and from the baby room.
    w.submit(Command::set_cell(Node::new(4, 22), Cell::Blocked)).unwrap();
    w.submit(Command::set_cell(Node::new(10, 26), Cell::Blocked)).unwrap();
    add_task(&mut w, "wake_up_alarm", Priority::Normal);
    w.advance(1);
    let task = w.scheduler().task(0).unwrap();
    assert_eq!(
        task.status,
        TaskStatus::Failed {
            reason: "No path to main room".into()
        }
    );
    assert!(w.robot().activity == Activity::Idle);
}

fn move_furniture(w: &mut World, nodes: &[Node]) {
    w.submit(Command::InjectEvent {
        kind: "MovedFurniture".into(),
        location: "main room".into(),
        subject: None,
        cells: nodes
            .iter()
            .map(|&node| CellChange { node, cell: Cell::Blocked })
            .collect(),
    })
    .unwrap();
}

#[test]
fn furniture_in_one_doorway_sends_the_robot_round_the_other() {
    let mut w = world();
    add_task(&mut w, "wake_up_alarm", Priority::Normal);
    w.advance(2);
    assert!(w.current_path().contains(&Node::new(4, 22)));
    move_furniture(&mut w, &[Node::new(4, 22)]);
    let records = w.advance(1);
    assert!(records.iter().any(|r| matches!(r.entry, Entry::CellChanged { .. })));
    assert!(!w.map().is_walkable(Node::new(4, 22)));
    assert!(records.iter().any(|r| matches!(r.entry, Entry::Replanned { .. })));
    assert!(w.current_path().contains(&Node::new(10, 26)));
    w.advance(400);
    assert_eq!(w.scheduler().task(0).unwrap().status, TaskStatus::Done);
}

#[test]
fn furniture_in_both_doorways_mid_trip_fails_the_task() {
    let mut w = world();
    add_task(&mut w, "wake_up_alarm", Priority::Normal);
    w.advance(2);
    move_furniture(&mut w, &[Node::new(4, 22), Node::new(10, 26)]);
    w.advance(1);
    assert_eq!(
        w.scheduler().task(0).unwrap().status,
        TaskStatus::Failed {
            reason: "Path blocked on the way to main room".into()
        }
    );
}

#[test]
fn high_priority_task_preempts_a_trip_and_the_normal_one_resumes() {
    let mut w = world();
    add_task(&mut w, "clean_house", Priority::Normal);
    w.advance(5);
    add_task(&mut w, "feed_baby_milk", Priority::High);
    let records = w.advance(1);
    assert!(entries(&records).iter().any(|e| matches!(
        e,
        Entry::Decision { decision: housekeeper::scheduler::Decision::Preempt { postponed: 0, started: 1 } }
    )));
    assert_eq!(w.scheduler().task(0).unwrap().status, TaskStatus::Queued);
    w.advance(2 * 3600);
    assert_eq!(w.scheduler().task(1).unwrap().status, TaskStatus::Done);
    assert_eq!(w.scheduler().task(0).unwrap().status, TaskStatus::Done);
}

#[test]
fn preempted_work_is_kept() {
    let mut w = world();
    add_task(&mut w, "monitor_house", Priority::Normal);
    // Already at the living room: work starts at once.
    w.advance(600);
    add_task(&mut w, "monitor_emergency", Priority::High);
    w.advance(1);
    let left = w.scheduler().task(0).unwrap().remaining_s;
    assert!((2990..=3000).contains(&left), "{left}");
}

#[test]
fn cancelling_running_and_queued_tasks() {
    let mut w = world();
    add_task(&mut w, "monitor_house", Priority::Normal);
    let later = w.now() + Duration::hours(3);
    w.submit(Command::AddTask {
        kind: "clean_house".into(),
        scheduled_at: later,
        priority: Priority::Normal,
    })
    .unwrap();
    w.advance(60);
    w.submit(Command::CancelTask { task: 0 }).unwrap();
    w.submit(Command::CancelTask { task: 1 }).unwrap();
    let records = w.advance(1);
    assert!(records.iter().any(|r| matches!(r.entry, Entry::TaskCancelled { task: 1 })));
    assert_eq!(
        w.scheduler().task(0).unwrap().status,
        TaskStatus::Failed {
            reason: "Cancelled by user".into()
        }
    );
    assert!(w.scheduler().task(1).is_none());
    assert!(w.submit(Command::CancelTask { task: 0 }).is_err());
}

#[test]
fn submit_rejects_bad_commands_without_touching_the_world() {
    let mut w = world();
    let snapshot = w.clone();
    let bad = [
        Command::AddTask { kind: "fly".into(), scheduled_at: w.now(), priority: Priority::High },
        Command::CancelTask { task: 9 },
        Command::RemovePerson { person: 3 },
        Command::SetPref { kind: "Fire".into(), on: false },
        Command::SetPref { kind: "Hail".into(), on: false },
        Command::ReplySms { message: 0, text: "1".into() },
        Command::set_cell(Node::new(99, 0), Cell::Blocked),
        Command::set_cell(Node::new(5, 5), Cell::Blocked),
        Command::event("Earthquake", "kitchen", None),
        Command::event("Fire", "garage", None),
        Command::AddPerson {
            name: " ".into(),
            face_tag: "face:x".into(),
            photo_ref: String::new(),
            telephone: String::new(),
            mobile: String::new(),
        },
    ];
    for c in bad {
        assert!(w.submit(c.clone()).is_err(), "{c:?} accepted");
    }
    assert_eq!(w, snapshot);
}

#[test]
fn scheduled_bad_commands_are_reported_in_the_transcript() {
    let mut w = world();
    let t = w.now();
    w.schedule(t, Command::CancelTask { task: 4 });
    let records = w.advance(1);
    assert!(matches!(
        &records[0].entry,
        Entry::CommandRejected { command, .. } if command == "cancel_task"
    ));
}

#[test]
fn unknown_visitor_and_suppressed_reaction() {
    let mut w = world();
    w.submit(Command::event("DoorRing", "outside door", Some("face:nobody"))).unwrap();
    let records = w.advance(1);
    let body = records
        .iter()
        .find_map(|r| match &r.entry {
            Entry::SmsSent { body, .. } => Some(body.clone()),
            _ => None,
        })
        .unwrap();
    assert!(body.starts_with("Door ring: unidentified person\n1. "));

    w.submit(Command::SetPref { kind: "DoorRing".into(), on: false }).unwrap();
    w.advance(1);
    w.submit(Command::event("DoorRing", "outside door", None)).unwrap();
    let records = w.advance(1);
    assert!(records.iter().any(|r| matches!(r.entry, Entry::SmsSuppressed { .. })));
    assert!(!records.iter().any(|r| matches!(r.entry, Entry::SmsSent { .. })));
    // The default (take a message) ran at once.
    assert!(records.iter().any(|r| matches!(
        &r.entry,
        Entry::Action { action, .. } if action.verb == "TakeMessage"
    )));
}

#[test]
fn replies_after_resolution_are_recorded_and_ignored() {
    let mut w = world();
    w.submit(Command::event("PhoneRing", "living room", None)).unwrap();
    w.advance(10);
    w.submit(Command::ReplySms { message: 0, text: "1".into() }).unwrap();
    w.advance(1);
    assert!(w.submit(Command::ReplySms { message: 0, text: "2".into() }).is_err());
    let t = w.now();
    w.schedule(t, Command::ReplySms { message: 0, text: "2".into() });
    let records = w.advance(1);
    assert!(records.iter().any(|r| matches!(
        r.entry,
        Entry::ReplyIgnored { reason: IgnoreReason::AlreadyResolved, .. }
    )));
    assert_eq!(w.sms().ignored_replies().len(), 1);
    assert_eq!(w.sms().sms_log()[0].action_received, "Call me and put me on speaker");
}

#[test]
fn emergency_messages_take_no_reply() {
    let mut w = world();
    w.submit(Command::event("Fire", "kitchen", None)).unwrap();
    w.advance(1);
    assert!(w.submit(Command::ReplySms { message: 0, text: "1".into() }).is_err());
    let monitor = w.scheduler().task(0).unwrap();
    assert_eq!(monitor.kind.as_str(), "monitor_emergency");
    assert_eq!(monitor.priority, Priority::High);
}

#[test]
fn advance_zero_is_a_no_op() {
    let mut w = world();
    add_task(&mut w, "prepare_salad", Priority::Normal);
    let before = w.clone();
    assert!(w.advance(0).is_empty());
    assert_eq!(w, before);
}

#[test]
fn transcript_jsonl_round_trip() {
    let (s, c, m) = common::busy_day(9);
    let t = housekeeper::run_scenario(&s, c, m).unwrap();
    let doc = t.to_jsonl();
    assert_eq!(doc.lines().count(), t.records.len());
    assert_eq!(Transcript::from_jsonl(&doc).unwrap(), t);
}

#[test]
fn busy_day_touches_every_record_type() {
    let (s, c, m) = common::busy_day(1);
    let t = housekeeper::run_scenario(&s, c, m).unwrap();
    let kinds: std::collections::BTreeSet<String> = t
        .records
        .iter()
        .map(|r| {
            serde_json::to_value(r).unwrap()["type"]
                .as_str()
                .unwrap()
                .to_owned()
        })
        .collect();
    for k in [
        "task_added",
        "person_added",
        "pref_changed",
        "event_classified",
        "sms_sent",
        "interaction_resolved",
        "decision",
        "path_planned",
        "arrived",
        "task_finished",
        "task_view",
        "sms_log",
    ] {
        assert!(kinds.contains(k), "no {k} record in {kinds:?}");
    }
}
